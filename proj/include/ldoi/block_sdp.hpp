#pragma once

// Primal-dual interior-point solver for small-block Hermitian SDPs.
//
// Problem shape (all blocks complex Hermitian, typically of size <= n):
//
//   maximize    b^T y + const
//   subject to  F_b(y) = C_b + sum_i y_i F_{b,i}  >= 0   for every block b
//               G y = h
//
// and its dual
//
//   minimize    sum_b <C_b, X_b> + h^T lambda + const
//   subject to  sum_b <F_{b,i}, X_b> = (G^T lambda)_i - b_i,   X_b >= 0.
//
// Iterations use the HKM direction with a Mehrotra predictor-corrector step
// from an infeasible start. Variables that never share a block form
// independent components of the Schur matrix, which is factored component by
// component; the equality rows are eliminated through a small dense Schur
// complement.

#include "ldoi/core.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <map>
#include <numeric>

namespace ldoi::sdp {

/// Entry (row, col) with row <= col; the conjugate entry at (col, row) is implied.
struct BlockEntry {
  int row = 0;
  int col = 0;
  Complex value;
};

struct Coupling {
  int var = 0;
  std::vector<BlockEntry> entries;
};

struct Block {
  int dim = 0;
  ComplexMatrix constant;
  std::vector<Coupling> couplings;
};

struct LinearRow {
  std::vector<std::pair<int, double>> terms;
  double rhs = 0.0;
};

class BlockSdpProblem {
 public:
  BlockSdpProblem() = default;

  int numVars() const { return numVars_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  const std::vector<LinearRow>& equalities() const { return equalities_; }
  const RealVector& objective() const { return objective_; }
  double objectiveConstant() const { return objectiveConstant_; }

  /// Appends `count` variables and returns the index of the first one.
  int addVariables(int count) {
    const int first = numVars_;
    numVars_ += count;
    objective_.conservativeResize(numVars_);
    objective_.tail(count).setZero();
    return first;
  }

  int addBlock(int dim) {
    if (dim < 1) throw DomainError("SDP blocks must have positive dimension");
    blocks_.push_back(Block{dim, ComplexMatrix::Zero(dim, dim), {}});
    couplingIndex_.emplace_back();
    return static_cast<int>(blocks_.size()) - 1;
  }

  int blockCount() const { return static_cast<int>(blocks_.size()); }

  void addConstant(int block, int row, int col, Complex value) {
    normalize(row, col, value);
    ComplexMatrix& m = blocks_.at(block).constant;
    m(row, col) += value;
    if (row != col) m(col, row) += std::conj(value);
  }

  void addTerm(int block, int var, int row, int col, Complex value) {
    if (var < 0 || var >= numVars_) throw DomainError("SDP variable index out of range");
    if (value == Complex(0.0)) return;
    normalize(row, col, value);
    Block& b = blocks_.at(block);
    if (row >= b.dim || col >= b.dim) throw DomainError("SDP block entry out of range");
    auto [it, inserted] = couplingIndex_[block].try_emplace(var, static_cast<int>(b.couplings.size()));
    if (inserted) b.couplings.push_back(Coupling{var, {}});
    auto& entries = b.couplings[it->second].entries;
    for (BlockEntry& e : entries)
      if (e.row == row && e.col == col) {
        e.value += value;
        return;
      }
    entries.push_back(BlockEntry{row, col, value});
  }

  void setObjective(int var, double coefficient) { objective_(var) = coefficient; }
  void addObjective(int var, double coefficient) { objective_(var) += coefficient; }
  void setObjectiveConstant(double c) { objectiveConstant_ = c; }

  void addEquality(LinearRow row) { equalities_.push_back(std::move(row)); }

  ComplexMatrix evaluateBlock(int block, const RealVector& y) const {
    const Block& b = blocks_[block];
    ComplexMatrix m = b.constant;
    for (const Coupling& c : b.couplings) accumulate(m, c, y(c.var));
    return m;
  }

  static void accumulate(ComplexMatrix& m, const Coupling& c, double scale) {
    if (scale == 0.0) return;
    for (const BlockEntry& e : c.entries) {
      m(e.row, e.col) += scale * e.value;
      if (e.row != e.col) m(e.col, e.row) += scale * std::conj(e.value);
    }
  }

 private:
  static void normalize(int& row, int& col, Complex& value) {
    if (row > col) {
      std::swap(row, col);
      value = std::conj(value);
    }
    if (row == col) value = Complex(value.real(), 0.0);
  }

  int numVars_ = 0;
  std::vector<Block> blocks_;
  std::vector<std::map<int, int>> couplingIndex_;
  std::vector<LinearRow> equalities_;
  RealVector objective_;
  double objectiveConstant_ = 0.0;
};

struct SdpSettings {
  double tolFeas = 1e-8;
  double tolGap = 1e-7;
  int maxIterations = 200;
  /// Initial X = Z = scale * I.
  double initialScale = 1.0;
  /// Fraction of the distance to the cone boundary taken per step.
  double stepFraction = 0.95;
};

enum class SdpStatus { Optimal, Infeasible, NumericalLimit };

inline const char* toString(SdpStatus s) {
  switch (s) {
    case SdpStatus::Optimal: return "optimal";
    case SdpStatus::Infeasible: return "infeasible";
    case SdpStatus::NumericalLimit: return "numerical-limit";
  }
  return "unknown";
}

struct SdpSolution {
  SdpStatus status = SdpStatus::NumericalLimit;
  double primalValue = 0.0;
  double dualValue = 0.0;
  double gap = 0.0;
  /// max(|F(y) - Z|, |G y - h|)
  double primalResidual = 0.0;
  /// max |sum_b <F_{b,i}, X_b> - (G^T lambda)_i + b_i|
  double dualResidual = 0.0;
  int iterations = 0;
  RealVector y;
  RealVector lambda;
  std::vector<ComplexMatrix> slack;
  std::vector<ComplexMatrix> dual;
};

namespace detail {

inline double realInner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

/// Largest alpha with P + alpha D >= 0 (infinity when D keeps P in the cone).
inline double maxStep(const ComplexMatrix& p, const ComplexMatrix& d) {
  constexpr double kUnbounded = 1e30;
  if (p.rows() == 1) {
    const double dv = d(0, 0).real();
    return dv < 0.0 ? -p(0, 0).real() / dv : kUnbounded;
  }
  Eigen::LLT<ComplexMatrix> llt(p);
  if (llt.info() != Eigen::Success) return 0.0;
  const ComplexMatrix l = llt.matrixL();
  ComplexMatrix w = l.triangularView<Eigen::Lower>().solve(d);
  w = l.triangularView<Eigen::Lower>().solve(w.adjoint().eval()).adjoint();
  const double lo = minHermitianEigenvalue(hermitianPart(w));
  return lo < 0.0 ? -1.0 / lo : kUnbounded;
}

inline ComplexMatrix hermitianInverse(const ComplexMatrix& m, bool& ok) {
  if (m.rows() == 1) {
    ok = m(0, 0).real() > 0.0;
    return ComplexMatrix::Constant(1, 1, 1.0 / m(0, 0).real());
  }
  Eigen::LLT<ComplexMatrix> llt(m);
  ok = llt.info() == Eigen::Success;
  return llt.solve(ComplexMatrix::Identity(m.rows(), m.cols()));
}

/// Groups variables that appear together in some block.
struct Components {
  std::vector<std::vector<int>> members;
  std::vector<int> componentOf;
  std::vector<int> localIndex;

  explicit Components(const BlockSdpProblem& problem) {
    const int m = problem.numVars();
    std::vector<int> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    for (const Block& b : problem.blocks())
      for (std::size_t k = 1; k < b.couplings.size(); ++k) {
        const int r0 = find(b.couplings[0].var), r1 = find(b.couplings[k].var);
        if (r0 != r1) parent[std::max(r0, r1)] = std::min(r0, r1);
      }
    componentOf.assign(m, -1);
    localIndex.assign(m, -1);
    std::map<int, int> rootToComponent;
    for (int v = 0; v < m; ++v) {
      auto [it, inserted] = rootToComponent.try_emplace(find(v), static_cast<int>(members.size()));
      if (inserted) members.emplace_back();
      componentOf[v] = it->second;
      localIndex[v] = static_cast<int>(members[it->second].size());
      members[it->second].push_back(v);
    }
  }
};

class InteriorPoint {
 public:
  InteriorPoint(const BlockSdpProblem& problem, const SdpSettings& settings)
      : p_(problem), s_(settings), comps_(problem) {
    m_ = p_.numVars();
    rows_ = static_cast<int>(p_.equalities().size());
    for (const Block& b : p_.blocks()) totalDim_ += b.dim;
    buildEqualityStructure();
  }

  SdpSolution run() {
    const int nb = p_.blockCount();
    std::vector<ComplexMatrix> x(nb), z(nb);
    for (int b = 0; b < nb; ++b) {
      const int d = p_.blocks()[b].dim;
      x[b] = s_.initialScale * ComplexMatrix::Identity(d, d);
      z[b] = s_.initialScale * ComplexMatrix::Identity(d, d);
    }
    RealVector y = RealVector::Zero(m_);
    RealVector lambda = RealVector::Zero(rows_);

    SdpSolution sol;
    sol.status = SdpStatus::NumericalLimit;
    int stalls = 0;
    std::vector<ComplexMatrix> zinv(nb), rd(nb), dxAff(nb), dzAff(nb), dx(nb), dz(nb), rhsMat(nb);

    for (int iter = 0;; ++iter) {
      // residuals
      bool ok = true;
      double pinf = 0.0;
      for (int b = 0; b < nb; ++b) {
        bool invOk = true;
        zinv[b] = hermitianInverse(z[b], invOk);
        ok = ok && invOk;
        rd[b] = p_.evaluateBlock(b, y) - z[b];
        pinf = std::max(pinf, maxAbs(rd[b]));
      }
      const RealVector rg = equalityRhs() - applyG(y);
      if (rows_ > 0) pinf = std::max(pinf, rg.cwiseAbs().maxCoeff());
      const RealVector rp = applyGt(lambda) - p_.objective() - adjointMap(x);
      const double dinf = m_ > 0 ? rp.cwiseAbs().maxCoeff() : 0.0;
      double complementarity = 0.0;
      for (int b = 0; b < nb; ++b) complementarity += realInner(x[b], z[b]);
      const double pobj = p_.objective().dot(y) + p_.objectiveConstant();
      double dobj = p_.objectiveConstant() + equalityRhs().dot(lambda);
      for (int b = 0; b < nb; ++b) dobj += realInner(p_.blocks()[b].constant, x[b]);

      sol.iterations = iter;
      sol.primalValue = pobj;
      sol.dualValue = dobj;
      sol.gap = std::abs(dobj - pobj);
      sol.primalResidual = pinf;
      sol.dualResidual = dinf;

      if (!ok) break;
      if (pinf <= s_.tolFeas && dinf <= s_.tolFeas && sol.gap <= s_.tolGap &&
          complementarity <= s_.tolGap) {
        sol.status = SdpStatus::Optimal;
        break;
      }
      if (y.cwiseAbs().maxCoeff() > 1e12 || dobj < -1e12 || pobj > 1e12) {
        sol.status = SdpStatus::Infeasible;
        break;
      }
      if (iter >= s_.maxIterations || stalls >= 5) break;

      const double mu = complementarity / totalDim_;
      if (!factorSchur(x, zinv)) break;

      // predictor
      for (int b = 0; b < nb; ++b) rhsMat[b] = -x[b] - x[b] * rd[b] * zinv[b];
      RealVector dy, dl;
      solveDirection(rhsMat, rp, rg, rd, dy, dl, dz);
      for (int b = 0; b < nb; ++b) dx[b] = hermitianPart(-x[b] - x[b] * dz[b] * zinv[b]);
      double ax = 1.0, az = 1.0;
      for (int b = 0; b < nb; ++b) {
        ax = std::min(ax, maxStep(x[b], dx[b]));
        az = std::min(az, maxStep(z[b], dz[b]));
      }
      double muAff = 0.0;
      for (int b = 0; b < nb; ++b) muAff += realInner(x[b] + ax * dx[b], z[b] + az * dz[b]);
      muAff /= totalDim_;
      const double ratio = mu > 0.0 ? std::clamp(muAff / mu, 0.0, 1.0) : 0.0;
      const double sigma = ratio * ratio * ratio;
      for (int b = 0; b < nb; ++b) {
        dxAff[b] = dx[b];
        dzAff[b] = dz[b];
      }

      // corrector
      for (int b = 0; b < nb; ++b)
        rhsMat[b] = sigma * mu * zinv[b] - x[b] - x[b] * rd[b] * zinv[b] -
                    dxAff[b] * dzAff[b] * zinv[b];
      solveDirection(rhsMat, rp, rg, rd, dy, dl, dz);
      for (int b = 0; b < nb; ++b)
        dx[b] = hermitianPart(sigma * mu * zinv[b] - x[b] - x[b] * dz[b] * zinv[b] -
                              dxAff[b] * dzAff[b] * zinv[b]);
      double axMax = 1e30, azMax = 1e30;
      for (int b = 0; b < nb; ++b) {
        axMax = std::min(axMax, maxStep(x[b], dx[b]));
        azMax = std::min(azMax, maxStep(z[b], dz[b]));
      }
      ax = std::min(1.0, s_.stepFraction * axMax);
      az = std::min(1.0, s_.stepFraction * azMax);
      stalls = (ax < 1e-8 && az < 1e-8) ? stalls + 1 : 0;
      for (int b = 0; b < nb; ++b) {
        x[b] = hermitianPart(x[b] + ax * dx[b]);
        z[b] = hermitianPart(z[b] + az * dz[b]);
      }
      lambda += ax * dl;
      y += az * dy;
    }

    sol.y = y;
    sol.lambda = lambda;
    sol.slack = z;
    sol.dual = x;
    return sol;
  }

 private:
  void buildEqualityStructure() {
    const int nc = static_cast<int>(comps_.members.size());
    compRows_.assign(nc, {});
    compG_.assign(nc, RealMatrix());
    std::vector<std::map<int, int>> rowSlot(nc);
    for (int r = 0; r < rows_; ++r)
      for (auto [var, coef] : p_.equalities()[r].terms) {
        const int c = comps_.componentOf.at(var);
        if (rowSlot[c].try_emplace(r, static_cast<int>(compRows_[c].size())).second)
          compRows_[c].push_back(r);
      }
    for (int c = 0; c < nc; ++c) {
      compG_[c] = RealMatrix::Zero(compRows_[c].size(), comps_.members[c].size());
      for (int k = 0; k < static_cast<int>(compRows_[c].size()); ++k)
        for (auto [var, coef] : p_.equalities()[compRows_[c][k]].terms)
          if (comps_.componentOf[var] == c) compG_[c](k, comps_.localIndex[var]) += coef;
    }
  }

  RealVector equalityRhs() const {
    RealVector h(rows_);
    for (int r = 0; r < rows_; ++r) h(r) = p_.equalities()[r].rhs;
    return h;
  }

  RealVector applyG(const RealVector& y) const {
    RealVector out = RealVector::Zero(rows_);
    for (int r = 0; r < rows_; ++r)
      for (auto [var, coef] : p_.equalities()[r].terms) out(r) += coef * y(var);
    return out;
  }

  RealVector applyGt(const RealVector& lambda) const {
    RealVector out = RealVector::Zero(m_);
    for (int r = 0; r < rows_; ++r)
      for (auto [var, coef] : p_.equalities()[r].terms) out(var) += coef * lambda(r);
    return out;
  }

  /// (<F_{b,i}, W_b>)_i, real part of the trace pairing (W need not be Hermitian).
  RealVector adjointMap(const std::vector<ComplexMatrix>& w) const {
    RealVector out = RealVector::Zero(m_);
    for (int b = 0; b < p_.blockCount(); ++b)
      for (const Coupling& c : p_.blocks()[b].couplings) out(c.var) += pairing(c, w[b]);
    return out;
  }

  /// Re Tr(F_c W) for a coupling with Hermitian completion.
  static double pairing(const Coupling& c, const ComplexMatrix& w) {
    double sum = 0.0;
    for (const BlockEntry& e : c.entries) {
      sum += (e.value * w(e.col, e.row)).real();
      if (e.row != e.col) sum += (std::conj(e.value) * w(e.row, e.col)).real();
    }
    return sum;
  }

  bool factorSchur(const std::vector<ComplexMatrix>& x, const std::vector<ComplexMatrix>& zinv) {
    const int nc = static_cast<int>(comps_.members.size());
    std::vector<RealMatrix> schur(nc);
    for (int c = 0; c < nc; ++c) {
      const int sz = static_cast<int>(comps_.members[c].size());
      schur[c] = RealMatrix::Zero(sz, sz);
    }
    for (int b = 0; b < p_.blockCount(); ++b) {
      const Block& blk = p_.blocks()[b];
      const ComplexMatrix& xb = x[b];
      const ComplexMatrix& zb = zinv[b];
      for (const Coupling& ci : blk.couplings) {
        // T = Z^{-1} F_i X
        ComplexMatrix t = ComplexMatrix::Zero(blk.dim, blk.dim);
        for (const BlockEntry& e : ci.entries) {
          t.noalias() += e.value * zb.col(e.row) * xb.row(e.col);
          if (e.row != e.col) t.noalias() += std::conj(e.value) * zb.col(e.col) * xb.row(e.row);
        }
        const int comp = comps_.componentOf[ci.var];
        const int li = comps_.localIndex[ci.var];
        RealMatrix& mc = schur[comp];
        for (const Coupling& cj : blk.couplings) mc(li, comps_.localIndex[cj.var]) += pairing(cj, t);
      }
    }
    factors_.assign(nc, Eigen::LLT<RealMatrix>());
    for (int c = 0; c < nc; ++c) {
      RealMatrix sym = 0.5 * (schur[c] + schur[c].transpose());
      factors_[c].compute(sym);
      if (factors_[c].info() != Eigen::Success) {
        const double shift = 1e-12 * (1.0 + sym.diagonal().cwiseAbs().maxCoeff());
        sym.diagonal().array() += shift;
        factors_[c].compute(sym);
        if (factors_[c].info() != Eigen::Success) return false;
      }
    }
    if (rows_ == 0) return true;
    RealMatrix s = RealMatrix::Zero(rows_, rows_);
    compSolvedGt_.assign(nc, RealMatrix());
    for (int c = 0; c < nc; ++c) {
      if (compRows_[c].empty()) continue;
      compSolvedGt_[c] = factors_[c].solve(compG_[c].transpose());
      const RealMatrix local = compG_[c] * compSolvedGt_[c];
      for (std::size_t a = 0; a < compRows_[c].size(); ++a)
        for (std::size_t bb = 0; bb < compRows_[c].size(); ++bb)
          s(compRows_[c][a], compRows_[c][bb]) += local(a, bb);
    }
    equalityFactor_.compute(0.5 * (s + s.transpose()));
    return equalityFactor_.info() == Eigen::Success;
  }

  RealVector solveSchur(const RealVector& r) const {
    RealVector out(m_);
    for (std::size_t c = 0; c < comps_.members.size(); ++c) {
      const std::vector<int>& mem = comps_.members[c];
      RealVector local(mem.size());
      for (std::size_t k = 0; k < mem.size(); ++k) local(k) = r(mem[k]);
      local = factors_[c].solve(local);
      for (std::size_t k = 0; k < mem.size(); ++k) out(mem[k]) = local(k);
    }
    return out;
  }

  void solveDirection(const std::vector<ComplexMatrix>& rhsMat, const RealVector& rp,
                      const RealVector& rg, const std::vector<ComplexMatrix>& rd, RealVector& dy,
                      RealVector& dl, std::vector<ComplexMatrix>& dz) const {
    const RealVector r1 = adjointMap(rhsMat) - rp;
    if (rows_ > 0) {
      const RealVector w = solveSchur(r1);
      dl = equalityFactor_.solve(applyG(w) - rg);
      dy = solveSchur(r1 - applyGt(dl));
    } else {
      dl = RealVector();
      dy = solveSchur(r1);
    }
    for (int b = 0; b < p_.blockCount(); ++b) {
      dz[b] = rd[b];
      for (const Coupling& c : p_.blocks()[b].couplings)
        BlockSdpProblem::accumulate(dz[b], c, dy(c.var));
    }
  }

  const BlockSdpProblem& p_;
  SdpSettings s_;
  Components comps_;
  int m_ = 0;
  int rows_ = 0;
  int totalDim_ = 0;
  std::vector<std::vector<int>> compRows_;
  std::vector<RealMatrix> compG_;
  std::vector<RealMatrix> compSolvedGt_;
  std::vector<Eigen::LLT<RealMatrix>> factors_;
  Eigen::LDLT<RealMatrix> equalityFactor_;
};

}  // namespace detail

inline SdpSolution solve(const BlockSdpProblem& problem, const SdpSettings& settings = {}) {
  return detail::InteriorPoint(problem, settings).run();
}

}  // namespace ldoi::sdp
