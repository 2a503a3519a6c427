#pragma once

// Orthonormal LDOI bases from a (U, A) pair, and recognition of such bases
// from raw state vectors.

#include "ldoi/families.hpp"

#include <numbers>

namespace ldoi {

struct LdoiBasisSpec {
  int n = 0;
  ComplexMatrix u;
  ComplexMatrix a;  // diagonal entries are ignored

  void validate(double tol = 1e-10) const {
    require(n >= 2, "basis spec needs n >= 2");
    if (u.rows() != n || u.cols() != n || a.rows() != n || a.cols() != n)
      throw DimensionMismatch("basis spec matrices must be n x n");
    if (!allFinite(u) || !allFinite(a)) throw DomainError("basis spec has non-finite entries");
    const double unitarity = maxAbs(u.adjoint() * u - ComplexMatrix::Identity(n, n));
    if (unitarity > tol)
      throw DomainError("U is not unitary (defect " + std::to_string(unitarity) + ")");
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double norm = std::norm(a(i, j)) + std::norm(a(j, i));
        if (std::abs(norm - 1.0) > tol)
          throw DomainError("|a_ij|^2 + |a_ji|^2 must equal 1 for pair (" + std::to_string(i) +
                            "," + std::to_string(j) + ")");
      }
  }
};

/// One basis state |phi_{i,j}>, stored sparsely over storage indices i*n + j.
struct BasisVector {
  int i = 0;
  int j = 0;
  std::vector<std::pair<int, Complex>> amplitudes;

  ComplexVector dense(int n) const {
    ComplexVector v = ComplexVector::Zero(n * n);
    for (auto [index, amp] : amplitudes) v(index) += amp;
    return v;
  }
};

/// Labels in basis order: (i,i) for all i, then ordered pairs i != j lexicographically.
inline std::vector<std::pair<int, int>> basisLabels(int n) {
  std::vector<std::pair<int, int>> labels;
  for (int i = 0; i < n; ++i) labels.emplace_back(i, i);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) labels.emplace_back(i, j);
  return labels;
}

inline std::vector<BasisVector> buildBasis(const LdoiBasisSpec& spec) {
  spec.validate();
  const int n = spec.n;
  const ComplexMatrix& u = spec.u;
  const ComplexMatrix& a = spec.a;
  std::vector<BasisVector> out;
  out.reserve(n * n);
  for (auto [i, j] : basisLabels(n)) {
    BasisVector v{i, j, {}};
    if (i == j) {
      for (int k = 0; k < n; ++k) v.amplitudes.emplace_back(denseIndex(n, k, k), u(i, k));
    } else if (i < j) {
      v.amplitudes.emplace_back(denseIndex(n, i, j), a(i, j));
      v.amplitudes.emplace_back(denseIndex(n, j, i), std::conj(a(j, i)));
    } else {
      // label (i, j) with i > j is phi_{j', i'} for the pair j < i
      v.amplitudes.emplace_back(denseIndex(n, j, i), a(i, j));
      v.amplitudes.emplace_back(denseIndex(n, i, j), -std::conj(a(j, i)));
    }
    out.push_back(std::move(v));
  }
  return out;
}

/// Projector |psi><psi| as a triple; throws NotLdoi when psi is not an LDOI pure state.
inline LdoiTriple pureStateTriple(int n, const ComplexVector& psi,
                                  double zeroTol = kDefaultZeroTol) {
  if (psi.size() != n * n) throw DimensionMismatch("state vector must have length n^2");
  const ComplexMatrix projector = psi * psi.adjoint();
  return tripleFromDense(DenseOperator(n, projector), zeroTol);
}

inline LdoiTriple projectorTriple(int n, const BasisVector& v) {
  return pureStateTriple(n, v.dense(n));
}

inline Ensemble uniformEnsemble(const LdoiBasisSpec& spec) {
  const std::vector<BasisVector> basis = buildBasis(spec);
  Ensemble e;
  const double prior = 1.0 / double(spec.n * spec.n);
  for (const BasisVector& v : basis) {
    e.priors.push_back(prior);
    e.states.push_back(projectorTriple(spec.n, v));
  }
  return e;
}

inline ComplexMatrix fourierMatrix(int n) {
  ComplexMatrix f(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      f(j, k) = std::polar(1.0 / std::sqrt(double(n)), 2.0 * std::numbers::pi * j * k / n);
  return f;
}

inline LdoiBasisSpec fourierSpec(int n, double aOffDiagonal = 1.0 / std::numbers::sqrt2) {
  require(n >= 2, "Fourier spec needs n >= 2");
  ComplexMatrix a = ComplexMatrix::Constant(n, n, aOffDiagonal);
  a.diagonal().setZero();
  LdoiBasisSpec spec{n, fourierMatrix(n), a};
  spec.validate();
  return spec;
}

inline LdoiBasisSpec bellSpec() {
  ComplexMatrix h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::numbers::sqrt2;
  return LdoiBasisSpec{2, h, h};
}

inline LdoiBasisSpec productSpec(int n) {
  require(n >= 2, "product spec needs n >= 2");
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) a(i, j) = 1.0;
  return LdoiBasisSpec{n, ComplexMatrix::Identity(n, n), a};
}

/// The 3x3 basis whose diagonal-certificate bound 44/75 exceeds the PPT optimum 26/45.
inline LdoiBasisSpec counterexampleSpec() {
  ComplexMatrix a(3, 3), u(3, 3);
  a << 0, 3, 3, 4, 0, 3, 4, 4, 0;
  u << 2, -2, 1, 1, 2, 2, 2, 1, -2;
  return LdoiBasisSpec{3, u / 3.0, a / 5.0};
}

struct RecognizedBasis {
  LdoiBasisSpec spec;
  /// Label (i, j) assigned to each input vector, in input order.
  std::vector<std::pair<int, int>> labels;
};

namespace detail {

/// Multiplies v by the phase making its largest-magnitude entry real positive.
inline ComplexVector fixGlobalPhase(const ComplexVector& v) {
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < v.size(); ++k)
    if (std::abs(v(k)) > std::abs(v(best))) best = k;
  if (std::abs(v(best)) == 0.0) return v;
  return v * (std::abs(v(best)) / v(best));
}

}  // namespace detail

inline RecognizedBasis recognizeBasis(const std::vector<ComplexVector>& vectors,
                                      double tol = 1e-8) {
  const int count = static_cast<int>(vectors.size());
  const int n = static_cast<int>(std::lround(std::sqrt(double(count))));
  if (n < 2 || n * n != count) throw NotLdoiBasis(-1, "need n^2 vectors with n >= 2");
  for (int k = 0; k < count; ++k) {
    if (vectors[k].size() != count) throw NotLdoiBasis(k, "vector length must be n^2");
    if (std::abs(vectors[k].norm() - 1.0) > tol) throw NotLdoiBasis(k, "vector is not unit norm");
  }
  for (int k = 0; k < count; ++k)
    for (int l = k + 1; l < count; ++l)
      if (std::abs(vectors[k].dot(vectors[l])) > tol)
        throw NotLdoiBasis(l, "vectors " + std::to_string(k) + " and " + std::to_string(l) +
                                  " are not orthogonal");

  std::vector<int> diagonal;
  std::vector<std::vector<int>> pairMembers(pairCount(n));
  for (int k = 0; k < count; ++k) {
    bool onDiagonal = false;
    int pi = -1, pj = -1;
    bool ok = true;
    for (int idx = 0; idx < count && ok; ++idx) {
      if (std::abs(vectors[k](idx)) <= tol) continue;
      const int i = idx / n, j = idx % n;
      if (i == j) {
        onDiagonal = true;
        ok = pi < 0;
      } else {
        const int lo = std::min(i, j), hi = std::max(i, j);
        if (onDiagonal || (pi >= 0 && (pi != lo || pj != hi))) ok = false;
        pi = lo;
        pj = hi;
      }
    }
    if (!ok) throw NotLdoiBasis(k, "support is neither {|kk>} nor {|ij>, |ji>}");
    if (onDiagonal)
      diagonal.push_back(k);
    else
      pairMembers[pairIndex(n, pi, pj)].push_back(k);
  }
  if (static_cast<int>(diagonal.size()) != n)
    throw NotLdoiBasis(-1, "expected exactly n vectors supported on {|kk>}");

  RecognizedBasis out;
  out.spec.n = n;
  out.spec.u = ComplexMatrix::Zero(n, n);
  out.spec.a = ComplexMatrix::Zero(n, n);
  out.labels.assign(count, {-1, -1});
  for (int row = 0; row < n; ++row) {
    const ComplexVector v = detail::fixGlobalPhase(vectors[diagonal[row]]);
    for (int k = 0; k < n; ++k) out.spec.u(row, k) = v(denseIndex(n, k, k));
    out.labels[diagonal[row]] = {row, row};
  }
  int p = 0;
  for (auto [i, j] : orderedPairs(n)) {
    const std::vector<int>& members = pairMembers[p++];
    if (members.size() != 2)
      throw NotLdoiBasis(members.empty() ? -1 : members.front(),
                         "pair (" + std::to_string(i) + "," + std::to_string(j) +
                             ") must carry exactly two vectors");
    const ComplexVector first = detail::fixGlobalPhase(vectors[members[0]]);
    out.spec.a(i, j) = first(denseIndex(n, i, j));
    out.spec.a(j, i) = std::conj(first(denseIndex(n, j, i)));
    out.labels[members[0]] = {i, j};
    out.labels[members[1]] = {j, i};
  }
  out.spec.validate(std::max(tol, 1e-10));
  return out;
}

}  // namespace ldoi
