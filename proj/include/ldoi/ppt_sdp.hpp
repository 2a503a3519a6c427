#pragma once

// PPT discrimination SDPs: the block-reduced primal over LDOI measurement
// operators, the full-space oracle, dual certificates and the unambiguous
// feasibility problem.

#include "ldoi/bounds.hpp"

namespace ldoi {

struct DualCertificate {
  LdoiTriple h;
  /// Present for the unconstrained dual; absent means H - p_k T(rho_k) >= 0 is the test.
  std::optional<std::vector<LdoiTriple>> qs;

  double objective() const { return h.trace().real(); }
};

struct CertificateCheck {
  bool feasible = false;
  /// Smallest eigenvalue over all PSD conditions (negative means violated).
  double worstEigenvalue = 0.0;
  double bound = 0.0;
};

inline CertificateCheck checkDualCertificate(const DualCertificate& cert, const Ensemble& e,
                                             double tol = 1e-9) {
  if (cert.h.n() != e.n()) throw DimensionMismatch("certificate and ensemble dimensions differ");
  if (cert.qs && static_cast<int>(cert.qs->size()) != e.size())
    throw DimensionMismatch("certificate needs one Q per ensemble state");
  CertificateCheck out;
  out.bound = cert.objective();
  out.worstEigenvalue = std::numeric_limits<double>::infinity();
  const double hermTol = std::max(tol, 1e-12);
  if (cert.h.hermiticityDefect() > hermTol) throw NotHermitian("certificate H is not Hermitian");
  for (int k = 0; k < e.size(); ++k) {
    LdoiTriple residual = cert.h - e.priors[k] * (cert.qs ? e.states[k] : partialTransposeTriple(e.states[k]));
    if (cert.qs) {
      const LdoiTriple& q = (*cert.qs)[k];
      residual = residual - partialTransposeTriple(q);
      out.worstEigenvalue = std::min(out.worstEigenvalue, isPsd(q, hermTol).minEigenvalue);
    }
    out.worstEigenvalue = std::min(out.worstEigenvalue, isPsd(residual, hermTol).minEigenvalue);
  }
  out.feasible = out.worstEigenvalue >= -tol;
  return out;
}

/// Diagonal H with entries max(|a_ij|^2, |a_ji|^2)/n^2 off the diagonal of A and c_i/n^2 on it.
inline DualCertificate buildDiagonalCertificate(const LdoiBasisSpec& spec, const CertificateC& c) {
  spec.validate();
  if (certificateViolation(spec, c) > 1e-9) throw DomainError("c does not satisfy the certificate constraints");
  const int n = spec.n;
  const double n2 = double(n) * n;
  ComplexMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a(i, j) = (i == j ? c.c[i] : std::max(std::norm(spec.a(i, j)), std::norm(spec.a(j, i)))) / n2;
  const ComplexMatrix d = a.diagonal().asDiagonal();
  return DualCertificate{LdoiTriple(a, d, d), std::nullopt};
}

namespace detail {

/// LDOI block index 0 is the n x n block B; 1 + p is the 2 x 2 block of pair p.
inline ComplexMatrix ldoiBlock(const BlockDecomposition& d, int index) {
  return index == 0 ? d.diagonalBlock : ComplexMatrix(d.pairBlocks[index - 1]);
}

/// Builds SDPs whose unknowns are LDOI operators P_k = sum_L V_L Y_L V_L^* over the blocks L,
/// with Y_L >= 0 and T(P_k) >= 0 imposed blockwise.
class LdoiPovmBuilder {
 public:
  struct Param {
    int var;
    int block;
    ComplexMatrix induced;
  };

  explicit LdoiPovmBuilder(int n) : n_(n) {}

  int n() const { return n_; }
  int blockCount() const { return 1 + pairCount(n_); }
  sdp::BlockSdpProblem& problem() { return problem_; }
  const sdp::BlockSdpProblem& problem() const { return problem_; }
  int elementCount() const { return static_cast<int>(elements_.size()); }

  /// bases[L] has orthonormal columns spanning the allowed range of block L (possibly none).
  int addElement(const std::vector<ComplexMatrix>& bases) {
    if (static_cast<int>(bases.size()) != blockCount()) throw DimensionMismatch("one basis per LDOI block");
    Element el;
    el.bases = bases;
    el.ownBlock.assign(blockCount(), -1);
    for (int L = 0; L < blockCount(); ++L) {
      const ComplexMatrix& v = bases[L];
      const int r = static_cast<int>(v.cols());
      if (r == 0) continue;
      const int blk = problem_.addBlock(r);
      el.ownBlock[L] = blk;
      for (int s = 0; s < r; ++s)
        for (int t = s; t < r; ++t)
          for (int part = 0; part < (s == t ? 1 : 2); ++part) {
            const Complex value = part == 0 ? Complex(1.0) : kI;
            const int var = problem_.addVariables(1);
            problem_.addTerm(blk, var, s, t, value);
            ComplexMatrix e = ComplexMatrix::Zero(r, r);
            e(s, t) = value;
            if (s != t) e(t, s) = std::conj(value);
            el.params.push_back(Param{var, L, v * e * v.adjoint()});
          }
    }
    addTransposeBlocks(el);
    elements_.push_back(std::move(el));
    return elementCount() - 1;
  }

  /// <T, P_k> as a linear functional of the variables.
  std::vector<std::pair<int, double>> overlap(int element, const LdoiTriple& t) const {
    const BlockDecomposition d = blockDecompose(t);
    std::vector<ComplexMatrix> blocks;
    for (int L = 0; L < blockCount(); ++L) blocks.push_back(ldoiBlock(d, L));
    std::vector<std::pair<int, double>> out;
    for (const Param& p : elements_[element].params)
      out.emplace_back(p.var, sdp::detail::realInner(blocks[p.block], p.induced));
    return out;
  }

  /// Sum of all elements equals the identity, one equality per real coordinate.
  void addCompleteness() {
    const int q = coords::count(n_);
    std::vector<sdp::LinearRow> rows(q);
    const RealVector identity = coords::toCoordinates(LdoiTriple::identity(n_));
    for (int k = 0; k < q; ++k) rows[k].rhs = identity(k);
    for (const Element& el : elements_)
      for (const Param& p : el.params)
        for (auto [coord, coef] : coordinateImage(p))
          if (coef != 0.0) rows[coord].terms.emplace_back(p.var, coef);
    for (sdp::LinearRow& r : rows) problem_.addEquality(std::move(r));
  }

  LdoiTriple element(int k, const RealVector& y) const {
    const Element& el = elements_[k];
    BlockDecomposition d;
    d.diagonalBlock = ComplexMatrix::Zero(n_, n_);
    d.pairBlocks.assign(pairCount(n_), Eigen::Matrix2cd::Zero());
    for (const Param& p : el.params) {
      const double w = y(p.var);
      if (p.block == 0)
        d.diagonalBlock += w * p.induced;
      else
        d.pairBlocks[p.block - 1] += w * p.induced;
    }
    d.diagonalBlock = hermitianPart(d.diagonalBlock);
    for (auto& b : d.pairBlocks) b = 0.5 * (b + b.adjoint()).eval();
    return tripleFromBlocks(d);
  }

  /// Triple whose LDOI blocks are V_L X_L V_L^* for the own-block duals X.
  LdoiTriple ownDualTriple(int k, const std::vector<ComplexMatrix>& dual) const {
    const Element& el = elements_[k];
    BlockDecomposition d;
    d.diagonalBlock = ComplexMatrix::Zero(n_, n_);
    d.pairBlocks.assign(pairCount(n_), Eigen::Matrix2cd::Zero());
    for (int L = 0; L < blockCount(); ++L) {
      if (el.ownBlock[L] < 0) continue;
      const ComplexMatrix m = hermitianPart(el.bases[L] * dual[el.ownBlock[L]] * el.bases[L].adjoint());
      if (L == 0) d.diagonalBlock = m;
      else d.pairBlocks[L - 1] = m;
    }
    return tripleFromBlocks(d);
  }

  /// Triple whose blocks are the duals of the partial-transpose blocks (zero where absent).
  LdoiTriple transposeDualTriple(int k, const std::vector<ComplexMatrix>& dual) const {
    const Element& el = elements_[k];
    BlockDecomposition d;
    d.diagonalBlock = el.ptBlock[0] >= 0 ? hermitianPart(dual[el.ptBlock[0]]) : ComplexMatrix::Zero(n_, n_);
    d.pairBlocks.assign(pairCount(n_), Eigen::Matrix2cd::Zero());
    for (int p = 0; p < pairCount(n_); ++p)
      if (el.ptBlock[1 + p] >= 0) d.pairBlocks[p] = hermitianPart(dual[el.ptBlock[1 + p]]);
    return tripleFromBlocks(d);
  }

 private:
  struct Element {
    std::vector<ComplexMatrix> bases;
    std::vector<int> ownBlock;
    std::vector<int> ptBlock;
    std::vector<Param> params;
  };

  /// Coordinates of the Hermitian triple induced by one parameter.
  std::vector<std::pair<int, double>> coordinateImage(const Param& p) const {
    std::vector<std::pair<int, double>> out;
    const ComplexMatrix& m = p.induced;
    if (p.block == 0) {
      for (int i = 0; i < n_; ++i) out.emplace_back(coords::aIndex(n_, i, i), m(i, i).real());
      int q = 0;
      for (auto [i, j] : orderedPairs(n_)) {
        out.emplace_back(coords::bReIndex(n_, q), m(i, j).real());
        out.emplace_back(coords::bImIndex(n_, q), m(i, j).imag());
        ++q;
      }
    } else {
      const int q = p.block - 1;
      const auto [i, j] = orderedPairs(n_)[q];
      out.emplace_back(coords::aIndex(n_, i, j), m(0, 0).real());
      out.emplace_back(coords::aIndex(n_, j, i), m(1, 1).real());
      out.emplace_back(coords::cReIndex(n_, q), m(0, 1).real());
      out.emplace_back(coords::cImIndex(n_, q), m(0, 1).imag());
    }
    return out;
  }

  // The partial transpose maps (A, B, C) to (A, C^T, B^T): its B-block carries a_ii and c_ji,
  // its pair blocks carry a_ij, a_ji and b_ji.
  void addTransposeBlocks(Element& el) {
    const std::vector<std::pair<int, int>> pairs = orderedPairs(n_);
    std::vector<bool> usedB(1, false), usedPair(pairs.size(), false);
    for (const Param& p : el.params) {
      if (p.block == 0) {
        usedB[0] = true;
        for (std::size_t q = 0; q < pairs.size(); ++q) usedPair[q] = true;
      } else {
        usedB[0] = true;
        usedPair[p.block - 1] = true;
      }
    }
    el.ptBlock.assign(blockCount(), -1);
    if (usedB[0]) el.ptBlock[0] = problem_.addBlock(n_);
    for (std::size_t q = 0; q < pairs.size(); ++q)
      if (usedPair[q]) el.ptBlock[1 + q] = problem_.addBlock(2);
    for (const Param& p : el.params) {
      const ComplexMatrix& m = p.induced;
      if (p.block == 0) {
        for (int i = 0; i < n_; ++i) problem_.addTerm(el.ptBlock[0], p.var, i, i, m(i, i).real());
        for (std::size_t q = 0; q < pairs.size(); ++q) {
          const auto [i, j] = pairs[q];
          problem_.addTerm(el.ptBlock[1 + q], p.var, 0, 1, m(j, i));
        }
      } else {
        const int q = p.block - 1;
        const auto [i, j] = pairs[q];
        problem_.addTerm(el.ptBlock[1 + q], p.var, 0, 0, m(0, 0).real());
        problem_.addTerm(el.ptBlock[1 + q], p.var, 1, 1, m(1, 1).real());
        problem_.addTerm(el.ptBlock[0], p.var, i, j, m(1, 0));
      }
    }
  }

  int n_;
  sdp::BlockSdpProblem problem_;
  std::vector<Element> elements_;
};

inline std::vector<ComplexMatrix> fullBases(int n) {
  std::vector<ComplexMatrix> bases;
  bases.push_back(ComplexMatrix::Identity(n, n));
  for (int p = 0; p < pairCount(n); ++p) bases.push_back(ComplexMatrix::Identity(2, 2));
  return bases;
}

}  // namespace detail

struct PptSolveResult {
  sdp::SdpSolution solution;
  Povm povm;
  DualCertificate certificate;

  double value() const { return solution.primalValue; }
};

/// Maximum success probability over PPT measurements, searched over LDOI measurement operators.
inline PptSolveResult solvePptPrimalLdoi(const Ensemble& e, const sdp::SdpSettings& settings = {}) {
  e.validate();
  const int n = e.n();
  detail::LdoiPovmBuilder builder(n);
  for (int k = 0; k < e.size(); ++k) builder.addElement(detail::fullBases(n));
  builder.addCompleteness();
  for (int k = 0; k < e.size(); ++k)
    for (auto [var, coef] : builder.overlap(k, e.states[k]))
      builder.problem().addObjective(var, e.priors[k] * coef);

  PptSolveResult out;
  out.solution = sdp::solve(builder.problem(), settings);
  const sdp::SdpSolution& s = out.solution;
  out.povm.classTag = PovmClass::Ppt;
  out.povm.labels = identityLabels(e.size());
  for (int k = 0; k < e.size(); ++k) out.povm.elements.push_back(builder.element(k, s.y));
  // spread the solver's leftover completeness defect evenly; it is of order tolFeas
  LdoiTriple defect = LdoiTriple::identity(n);
  for (const LdoiTriple& p : out.povm.elements) defect = defect - p;
  for (LdoiTriple& p : out.povm.elements) p += (1.0 / e.size()) * defect;

  std::vector<LdoiTriple> qs;
  for (int k = 0; k < e.size(); ++k) qs.push_back(builder.transposeDualTriple(k, s.dual));
  out.certificate = DualCertificate{coords::tripleFromFunctional(n, s.lambda), std::move(qs)};
  return out;
}

struct DenseEnsemble {
  std::vector<double> priors;
  std::vector<DenseOperator> states;

  static DenseEnsemble fromLdoi(const Ensemble& e) {
    DenseEnsemble d;
    d.priors = e.priors;
    for (const LdoiTriple& t : e.states) d.states.push_back(tripleToDense(t));
    return d;
  }
};

/// Largest local dimension accepted by the full-space oracle.
inline constexpr int kDenseOracleMaxN = 4;

/// The same SDP over arbitrary n^2 x n^2 measurement operators.
inline sdp::SdpSolution solvePptPrimalDense(const DenseEnsemble& e, const sdp::SdpSettings& settings = {}) {
  if (e.states.empty() || e.states.size() != e.priors.size())
    throw DimensionMismatch("dense ensemble needs matching priors and states");
  const int n = e.states.front().n;
  if (n > kDenseOracleMaxN)
    throw DomainError("dense oracle refuses n = " + std::to_string(n) + " (limit " +
                      std::to_string(kDenseOracleMaxN) + ")");
  const int d = n * n;
  auto transposed = [n](int r, int c) {
    const int i = r / n, k = r % n, j = c / n, l = c % n;
    return std::pair<int, int>{j * n + k, i * n + l};
  };
  sdp::BlockSdpProblem prob;
  std::vector<sdp::LinearRow> rows;
  for (int s = 0; s < d; ++s)
    for (int t = s; t < d; ++t)
      for (int part = 0; part < (s == t ? 1 : 2); ++part) rows.push_back({{}, (s == t) ? 1.0 : 0.0});
  for (std::size_t k = 0; k < e.states.size(); ++k) {
    const ComplexMatrix& rho = e.states[k].matrix;
    if (e.states[k].n != n) throw DimensionMismatch("dense ensemble states have mixed dimensions");
    const int own = prob.addBlock(d);
    const int pt = prob.addBlock(d);
    int row = 0;
    for (int s = 0; s < d; ++s)
      for (int t = s; t < d; ++t)
        for (int part = 0; part < (s == t ? 1 : 2); ++part) {
          const Complex v = part == 0 ? Complex(1.0) : kI;
          const int var = prob.addVariables(1);
          prob.addTerm(own, var, s, t, v);
          const auto [ps, pt2] = transposed(s, t);
          prob.addTerm(pt, var, ps, pt2, v);
          const double coef = s == t ? rho(s, s).real()
                                     : (rho(t, s) * v + rho(s, t) * std::conj(v)).real();
          prob.setObjective(var, e.priors[k] * coef);
          rows[row++].terms.emplace_back(var, 1.0);
        }
  }
  for (sdp::LinearRow& r : rows) prob.addEquality(std::move(r));
  return sdp::solve(prob, settings);
}

inline sdp::SdpSolution solvePptPrimalDense(const Ensemble& e, const sdp::SdpSettings& settings = {}) {
  e.validate();
  return solvePptPrimalDense(DenseEnsemble::fromLdoi(e), settings);
}

/// Threshold on every correct-outcome probability for an unambiguous measurement to count.
inline constexpr double kUnambiguousDelta = 1e-6;

struct UnambiguousResult {
  bool feasible = false;
  /// Optimal common lower bound t on <P_k, rho_k>.
  double minSuccess = 0.0;
  sdp::SdpSolution solution;
  /// Element 0 is the inconclusive outcome.
  Povm povm;
  std::string reason;
};

namespace detail {

/// Orthonormal basis of the null space of a Hermitian PSD matrix.
inline ComplexMatrix kernelBasis(const ComplexMatrix& m, double tol) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitianPart(m));
  int r = 0;
  while (r < m.rows() && solver.eigenvalues()(r) <= tol) ++r;
  return solver.eigenvectors().leftCols(r);
}

}  // namespace detail

/// Searches for a PPT measurement with an inconclusive outcome that never misidentifies a state
/// and identifies each state with probability at least delta.
inline UnambiguousResult unambiguousPptFeasible(const Ensemble& e, const sdp::SdpSettings& settings = {},
                                                double delta = kUnambiguousDelta) {
  e.validate();
  const int n = e.n();
  const int count = e.size();
  detail::LdoiPovmBuilder builder(n);
  builder.addElement(detail::fullBases(n));
  std::vector<BlockDecomposition> decomposed;
  for (const LdoiTriple& s : e.states) decomposed.push_back(blockDecompose(s));
  for (int k = 0; k < count; ++k) {
    std::vector<ComplexMatrix> bases;
    for (int L = 0; L < builder.blockCount(); ++L) {
      const int dim = L == 0 ? n : 2;
      ComplexMatrix others = ComplexMatrix::Zero(dim, dim);
      for (int j = 0; j < count; ++j)
        if (j != k) others += detail::ldoiBlock(decomposed[j], L);
      bases.push_back(detail::kernelBasis(others, 1e-9));
    }
    builder.addElement(bases);
  }
  builder.addCompleteness();
  sdp::BlockSdpProblem& prob = builder.problem();
  const int t = prob.addVariables(1);
  prob.setObjective(t, 1.0);
  for (int k = 0; k < count; ++k) {
    const int blk = prob.addBlock(1);
    prob.addTerm(blk, t, 0, 0, -1.0);
    for (auto [var, coef] : builder.overlap(k + 1, e.states[k])) prob.addTerm(blk, var, 0, 0, coef);
  }

  UnambiguousResult out;
  out.solution = sdp::solve(prob, settings);
  out.minSuccess = out.solution.y.size() > t ? out.solution.y(t) : 0.0;
  out.povm.classTag = PovmClass::Ppt;
  out.povm.labels.push_back(kInconclusive);
  for (int k = 0; k <= count; ++k) {
    out.povm.elements.push_back(builder.element(k, out.solution.y));
    if (k > 0) out.povm.labels.push_back(k - 1);
  }

  if (out.solution.status == sdp::SdpStatus::Infeasible) {
    out.reason = "solver reported infeasibility";
    return out;
  }
  // verify the measurement directly rather than trusting the solver status
  const double tol = std::max(10.0 * settings.tolFeas, 1e-7);
  const PovmReport report = verifyPovm(out.povm, PovmClass::Ppt, tol);
  double worstSuccess = std::numeric_limits<double>::infinity();
  double worstError = 0.0;
  for (int k = 1; k <= count; ++k)
    for (int j = 0; j < count; ++j) {
      const double overlap = hsInner(out.povm.elements[k], e.states[j]).real();
      if (j == k - 1)
        worstSuccess = std::min(worstSuccess, overlap);
      else
        worstError = std::max(worstError, std::abs(overlap));
    }
  if (!report.pass) {
    out.reason = "recovered measurement is not a complete PPT POVM";
  } else if (worstError > tol) {
    out.reason = "recovered measurement misidentifies a state";
  } else if (worstSuccess < delta) {
    out.reason = "best common success probability " + std::to_string(worstSuccess) +
                 " is below the threshold";
  } else {
    out.feasible = true;
  }
  return out;
}

}  // namespace ldoi
