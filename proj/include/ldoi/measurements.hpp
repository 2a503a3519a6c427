#pragma once

// Explicit POVMs on LDOI bases, verification reports and success probabilities.

#include "ldoi/basis.hpp"

#include <algorithm>
#include <optional>

namespace ldoi {

enum class PovmClass { LocalProduct, Ppt, Unverified };

inline const char* toString(PovmClass c) {
  switch (c) {
    case PovmClass::LocalProduct: return "local-product";
    case PovmClass::Ppt: return "ppt";
    case PovmClass::Unverified: return "unverified";
  }
  return "unverified";
}

inline PovmClass povmClassFromString(const std::string& s) {
  if (s == "local-product" || s == "local") return PovmClass::LocalProduct;
  if (s == "ppt") return PovmClass::Ppt;
  if (s == "unverified") return PovmClass::Unverified;
  throw ParseError("unknown POVM class '" + s + "'");
}

/// Label value for the inconclusive outcome of an unambiguous measurement.
inline constexpr int kInconclusive = -1;

struct Povm {
  std::vector<LdoiTriple> elements;
  /// Ensemble index guessed by each element, or kInconclusive.
  std::vector<int> labels;
  PovmClass classTag = PovmClass::Unverified;

  int size() const { return static_cast<int>(elements.size()); }
  int n() const { return elements.empty() ? 0 : elements.front().n(); }
};

inline std::vector<int> identityLabels(int count) {
  std::vector<int> labels(count);
  std::iota(labels.begin(), labels.end(), 0);
  return labels;
}

inline void checkPermutation(const std::vector<int>& sigma, int n) {
  if (static_cast<int>(sigma.size()) != n)
    throw InvalidPermutation("permutation has length " + std::to_string(sigma.size()) +
                             ", expected " + std::to_string(n));
  std::vector<char> seen(n, 0);
  for (int v : sigma) {
    if (v < 0 || v >= n || seen[v])
      throw InvalidPermutation("not a permutation of {1.." + std::to_string(n) + "}");
    seen[v] = 1;
  }
}

/// One-round product measurement guessing |phi_ii> by sigma and each pair by the larger amplitude.
/// Elements follow basisLabels order.
inline Povm buildLocalPovm(const LdoiBasisSpec& spec, const std::vector<int>& sigma) {
  spec.validate();
  const int n = spec.n;
  checkPermutation(sigma, n);
  Povm povm;
  povm.classTag = PovmClass::LocalProduct;
  for (auto [i, j] : basisLabels(n)) {
    if (i == j) {
      povm.elements.push_back(productBasisTriple(n, sigma[i], sigma[i]));
      continue;
    }
    const int lo = std::min(i, j), hi = std::max(i, j);
    const bool keep = std::abs(spec.a(lo, hi)) >= std::abs(spec.a(hi, lo));
    // label (lo, hi) measures |lo hi> when keep, else |hi lo>; (hi, lo) takes the other
    const bool first = (i == lo);
    if (first == keep)
      povm.elements.push_back(productBasisTriple(n, lo, hi));
    else
      povm.elements.push_back(productBasisTriple(n, hi, lo));
  }
  povm.labels = identityLabels(povm.size());
  return povm;
}

/// PPT measurement for the Fourier-type basis (a_ij = 1/sqrt(2)); P_ii = 0 is kept as a zero element.
inline Povm buildFourierPptPovm(int n) {
  require(n >= 3, "the Fourier PPT measurement needs n >= 3");
  const double off = 1.0 / (2.0 * n - 2.0);
  Povm povm;
  povm.classTag = PovmClass::Ppt;
  for (auto [i, j] : basisLabels(n)) {
    if (i == j) {
      povm.elements.push_back(LdoiTriple::zero(n));
      continue;
    }
    const double s = i < j ? 1.0 : -1.0;
    ComplexMatrix a = ComplexMatrix::Zero(n, n);
    ComplexMatrix c = ComplexMatrix::Zero(n, n);
    a(i, j) = 0.5;
    a(j, i) = 0.5;
    a(i, i) = off;
    a(j, j) = off;
    c(i, j) = s * off;
    c(j, i) = s * off;
    povm.elements.push_back(LdoiTriple::withSharedDiagonal(a, ComplexMatrix::Zero(n, n), c));
  }
  povm.labels = identityLabels(povm.size());
  return povm;
}

/// Projective measurement onto the basis itself (generally not PPT).
inline Povm basisProjectiveMeasurement(const LdoiBasisSpec& spec) {
  Povm povm;
  povm.elements = uniformEnsemble(spec).states;
  povm.labels = identityLabels(povm.size());
  return povm;
}

struct SuccessBreakdown {
  double total = 0.0;
  /// p_label <P_k, rho_label> for each element (0 for inconclusive outcomes).
  std::vector<double> perOutcome;
};

inline SuccessBreakdown successProbability(const Povm& povm, const Ensemble& e,
                                           double imagTol = 1e-10) {
  if (povm.labels.size() != povm.elements.size())
    throw DimensionMismatch("POVM labels and elements differ in length");
  if (povm.size() == 0 || e.size() == 0) throw DimensionMismatch("empty POVM or ensemble");
  if (povm.n() != e.n()) throw DimensionMismatch("POVM and ensemble dimensions differ");
  SuccessBreakdown out;
  out.perOutcome.assign(povm.size(), 0.0);
  for (int k = 0; k < povm.size(); ++k) {
    const int label = povm.labels[k];
    if (label == kInconclusive) continue;
    if (label < 0 || label >= e.size())
      throw DimensionMismatch("POVM label " + std::to_string(label) + " has no ensemble state");
    const Complex overlap = hsInner(povm.elements[k], e.states[label]);
    if (std::abs(overlap.imag()) > imagTol)
      throw NotHermitian("success term for outcome " + std::to_string(k) + " is not real");
    out.perOutcome[k] = e.priors[label] * overlap.real();
    out.total += out.perOutcome[k];
  }
  return out;
}

struct PovmReport {
  double completenessResidual = 0.0;
  std::vector<double> minEigenvalues;
  std::vector<double> pptMinEigenvalues;
  bool complete = false;
  bool positive = false;
  bool ppt = false;
  bool localProduct = false;
  /// Every element is a nonnegative diagonal triple or a PPT operator living on a 2 (x) 2 subspace.
  bool separableCertified = false;
  PovmClass required = PovmClass::Unverified;
  bool pass = false;
};

namespace detail {

inline bool isDiagonalTriple(const LdoiTriple& t, double tol) {
  const int n = t.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && (std::abs(t.b()(i, j)) > tol || std::abs(t.c()(i, j)) > tol)) return false;
  return true;
}

inline bool isProductProjector(const LdoiTriple& t, double tol) {
  if (!isDiagonalTriple(t, tol)) return false;
  int units = 0;
  for (Eigen::Index k = 0; k < t.a().size(); ++k) {
    const Complex v = t.a().data()[k];
    if (std::abs(v - 1.0) <= tol)
      ++units;
    else if (std::abs(v) > tol)
      return false;
  }
  return units == 1;
}

/// Indices touched by the triple; operators on at most two of them act on a 2 (x) 2 block.
inline int supportSize(const LdoiTriple& t, double tol) {
  const int n = t.n();
  std::vector<char> used(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::abs(t.a()(i, j)) > tol || std::abs(t.b()(i, j)) > tol ||
          std::abs(t.c()(i, j)) > tol) {
        used[i] = 1;
        used[j] = 1;
      }
  return static_cast<int>(std::count(used.begin(), used.end(), 1));
}

}  // namespace detail

inline PovmReport verifyPovm(const Povm& povm, PovmClass required, double tol = 1e-10) {
  PovmReport r;
  r.required = required;
  if (povm.size() == 0) return r;
  const int n = povm.n();
  LdoiTriple sum = LdoiTriple::zero(n);
  r.positive = r.ppt = r.localProduct = r.separableCertified = true;
  for (const LdoiTriple& p : povm.elements) {
    if (p.n() != n) throw DimensionMismatch("POVM elements have mixed dimensions");
    sum += p;
    const PositivityWitness psd = isPsd(p, tol);
    const PositivityWitness pt = isPpt(p, tol);
    r.minEigenvalues.push_back(psd.minEigenvalue);
    r.pptMinEigenvalues.push_back(pt.minEigenvalue);
    r.positive = r.positive && psd.positive;
    r.ppt = r.ppt && pt.positive;
    r.localProduct = r.localProduct && detail::isProductProjector(p, tol);
    const bool diagonalSeparable = detail::isDiagonalTriple(p, tol) && psd.positive;
    const bool twoQubitPpt = detail::supportSize(p, tol) <= 2 && psd.positive && pt.positive;
    r.separableCertified = r.separableCertified && (diagonalSeparable || twoQubitPpt);
  }
  r.completenessResidual = maxAbsDifference(sum, LdoiTriple::identity(n));
  r.complete = r.completenessResidual <= tol;
  switch (required) {
    case PovmClass::LocalProduct: r.pass = r.complete && r.positive && r.localProduct; break;
    case PovmClass::Ppt: r.pass = r.complete && r.positive && r.ppt; break;
    case PovmClass::Unverified: r.pass = r.complete && r.positive; break;
  }
  return r;
}

}  // namespace ldoi
