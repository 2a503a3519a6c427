#pragma once

// Triple (A, B, C) parameterization of LDOI operators on C^n (x) C^n.
//
// Storage convention: |i> (x) |j> is row i*n + j (0-based). The triple holds
//   a(i,j) on |i><i| (x) |j><j|,
//   b(i,j) on |i><j| (x) |i><j|   (i != j),
//   c(i,j) on |i><j| (x) |j><i|   (i != j),
// and diag(a) == diag(b) == diag(c) is enforced bit-for-bit.

#include "ldoi/core.hpp"

#include <algorithm>
#include <optional>
#include <utility>

namespace ldoi {

inline int denseIndex(int n, int i, int j) { return i * n + j; }

/// Number of unordered pairs i < j.
inline int pairCount(int n) { return n * (n - 1) / 2; }

/// Position of the pair (i, j), i < j, in lexicographic order.
inline int pairIndex(int n, int i, int j) { return i * n - i * (i + 1) / 2 + (j - i - 1); }

inline std::vector<std::pair<int, int>> orderedPairs(int n) {
  std::vector<std::pair<int, int>> out;
  out.reserve(pairCount(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.emplace_back(i, j);
  return out;
}

class LdoiTriple {
 public:
  LdoiTriple() = default;

  LdoiTriple(ComplexMatrix a, ComplexMatrix b, ComplexMatrix c)
      : n_(static_cast<int>(a.rows())), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
    if (n_ < 2) throw DomainError("LDOI triple needs local dimension n >= 2");
    for (const ComplexMatrix* m : {&a_, &b_, &c_})
      if (m->rows() != n_ || m->cols() != n_)
        throw DimensionMismatch("triple matrices must all be n x n");
    for (int i = 0; i < n_; ++i)
      if (a_(i, i) != b_(i, i) || a_(i, i) != c_(i, i))
        throw DomainError("triple diagonals must coincide (index " + std::to_string(i) + ")");
    if (!allFinite(a_) || !allFinite(b_) || !allFinite(c_))
      throw DomainError("triple has non-finite entries");
  }

  static LdoiTriple zero(int n) {
    const ComplexMatrix z = ComplexMatrix::Zero(n, n);
    return LdoiTriple(z, z, z);
  }

  /// The identity operator: A = all-ones, B = C = identity.
  static LdoiTriple identity(int n) {
    return LdoiTriple(allOnes(n), ComplexMatrix::Identity(n, n), ComplexMatrix::Identity(n, n));
  }

  /// Builds a triple from off-diagonal B and C plus a shared A (diagonals of b, c are overwritten).
  static LdoiTriple withSharedDiagonal(ComplexMatrix a, ComplexMatrix b, ComplexMatrix c) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i < b.rows()) b(i, i) = a(i, i);
      if (i < c.rows()) c(i, i) = a(i, i);
    }
    return LdoiTriple(std::move(a), std::move(b), std::move(c));
  }

  int n() const { return n_; }
  const ComplexMatrix& a() const { return a_; }
  const ComplexMatrix& b() const { return b_; }
  const ComplexMatrix& c() const { return c_; }

  Complex trace() const { return a_.sum(); }

  friend LdoiTriple operator+(const LdoiTriple& x, const LdoiTriple& y) {
    checkSameDimension(x, y);
    return LdoiTriple(x.a_ + y.a_, x.b_ + y.b_, x.c_ + y.c_);
  }
  friend LdoiTriple operator-(const LdoiTriple& x, const LdoiTriple& y) {
    checkSameDimension(x, y);
    return LdoiTriple(x.a_ - y.a_, x.b_ - y.b_, x.c_ - y.c_);
  }
  friend LdoiTriple operator*(Complex s, const LdoiTriple& x) {
    return LdoiTriple(s * x.a_, s * x.b_, s * x.c_);
  }
  friend LdoiTriple operator*(double s, const LdoiTriple& x) { return Complex(s, 0.0) * x; }
  LdoiTriple& operator+=(const LdoiTriple& y) { return *this = *this + y; }

  /// Largest violation of dense Hermiticity: a real, b and c conjugate-symmetric.
  double hermiticityDefect() const {
    double defect = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        defect = std::max(defect, std::abs(a_(i, j).imag()));
        defect = std::max(defect, std::abs(b_(j, i) - std::conj(b_(i, j))));
        defect = std::max(defect, std::abs(c_(j, i) - std::conj(c_(i, j))));
      }
    return defect;
  }

  static void checkSameDimension(const LdoiTriple& x, const LdoiTriple& y) {
    if (x.n_ != y.n_)
      throw DimensionMismatch("triples have different local dimensions " + std::to_string(x.n_) +
                              " and " + std::to_string(y.n_));
  }

 private:
  int n_ = 0;
  ComplexMatrix a_, b_, c_;
};

/// Full n^2 x n^2 operator on the bipartite space.
struct DenseOperator {
  int n = 0;
  ComplexMatrix matrix;

  DenseOperator() = default;
  DenseOperator(int localDim, ComplexMatrix m) : n(localDim), matrix(std::move(m)) {
    if (matrix.rows() != n * n || matrix.cols() != n * n)
      throw DimensionMismatch("dense operator must be n^2 x n^2");
  }
};

inline DenseOperator tripleToDense(const LdoiTriple& t) {
  const int n = t.n();
  ComplexMatrix m = ComplexMatrix::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      m(denseIndex(n, i, j), denseIndex(n, i, j)) = t.a()(i, j);
      if (i == j) continue;
      m(denseIndex(n, i, i), denseIndex(n, j, j)) = t.b()(i, j);
      m(denseIndex(n, i, j), denseIndex(n, j, i)) = t.c()(i, j);
    }
  return DenseOperator(n, std::move(m));
}

/// True when (row, col) is one of the three LDOI position families.
inline bool isLdoiPosition(int n, int row, int col) {
  const int i = row / n, k = row % n;
  const int j = col / n, l = col % n;
  if (i == k && j == l) return true;   // |ii><jj|
  if (i == j && k == l) return true;   // |ik><ik|
  return i == l && k == j;             // |ik><ki|
}

inline LdoiTriple tripleFromDense(const DenseOperator& d, double zeroTol = kDefaultZeroTol) {
  const int n = d.n;
  int worstRow = -1, worstCol = -1;
  double worst = 0.0;
  for (int r = 0; r < n * n; ++r)
    for (int col = 0; col < n * n; ++col) {
      if (isLdoiPosition(n, r, col)) continue;
      const double mag = std::abs(d.matrix(r, col));
      if (mag > worst) {
        worst = mag;
        worstRow = r;
        worstCol = col;
      }
    }
  if (worst > zeroTol) throw NotLdoi(worstRow, worstCol, worst);

  ComplexMatrix a(n, n), b(n, n), c(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      a(i, j) = d.matrix(denseIndex(n, i, j), denseIndex(n, i, j));
      if (i == j) continue;
      b(i, j) = d.matrix(denseIndex(n, i, i), denseIndex(n, j, j));
      c(i, j) = d.matrix(denseIndex(n, i, j), denseIndex(n, j, i));
    }
  return LdoiTriple::withSharedDiagonal(std::move(a), std::move(b), std::move(c));
}

/// Local diagonal orthogonal twirl, evaluated as the entrywise projection onto LDOI positions.
inline DenseOperator ldotTwirl(const DenseOperator& d) {
  const int n = d.n;
  ComplexMatrix m = ComplexMatrix::Zero(n * n, n * n);
  for (int r = 0; r < n * n; ++r)
    for (int col = 0; col < n * n; ++col)
      if (isLdoiPosition(n, r, col)) m(r, col) = d.matrix(r, col);
  return DenseOperator(n, std::move(m));
}

/// Partial transpose on the first factor: (A, B, C) -> (A, C^T, B^T).
inline LdoiTriple partialTransposeTriple(const LdoiTriple& t) {
  return LdoiTriple(t.a(), t.c().transpose(), t.b().transpose());
}

struct BlockDecomposition {
  /// B restricted to span{|ii>}.
  ComplexMatrix diagonalBlock;
  /// [[a_ij, c_ij], [c_ji, a_ji]] on span{|ij>, |ji>} for each i < j, in orderedPairs order.
  std::vector<Eigen::Matrix2cd> pairBlocks;
};

inline BlockDecomposition blockDecompose(const LdoiTriple& t) {
  const int n = t.n();
  BlockDecomposition out;
  out.diagonalBlock = t.b();
  out.pairBlocks.reserve(pairCount(n));
  for (auto [i, j] : orderedPairs(n)) {
    Eigen::Matrix2cd block;
    block << t.a()(i, j), t.c()(i, j), t.c()(j, i), t.a()(j, i);
    out.pairBlocks.push_back(block);
  }
  return out;
}

/// Inverse of blockDecompose.
inline LdoiTriple tripleFromBlocks(const BlockDecomposition& blocks) {
  const int n = static_cast<int>(blocks.diagonalBlock.rows());
  if (static_cast<int>(blocks.pairBlocks.size()) != pairCount(n))
    throw DimensionMismatch("pair block count must be n(n-1)/2");
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  ComplexMatrix c = ComplexMatrix::Zero(n, n);
  const ComplexMatrix& b = blocks.diagonalBlock;
  for (int i = 0; i < n; ++i) a(i, i) = b(i, i);
  int p = 0;
  for (auto [i, j] : orderedPairs(n)) {
    const Eigen::Matrix2cd& block = blocks.pairBlocks[p++];
    a(i, j) = block(0, 0);
    a(j, i) = block(1, 1);
    c(i, j) = block(0, 1);
    c(j, i) = block(1, 0);
  }
  return LdoiTriple::withSharedDiagonal(std::move(a), b, std::move(c));
}

/// Where the most negative eigenvalue of a positivity test was found.
struct BlockRef {
  bool diagonal = true;
  int i = -1;
  int j = -1;
};

struct PositivityWitness {
  bool positive = false;
  double minEigenvalue = 0.0;
  BlockRef block;

  explicit operator bool() const { return positive; }
};

inline PositivityWitness isPsd(const LdoiTriple& t, double tol = kDefaultZeroTol) {
  const double defect = t.hermiticityDefect();
  if (defect > tol)
    throw NotHermitian("triple is not Hermitian (defect " + std::to_string(defect) + ")");
  const int n = t.n();
  PositivityWitness w;
  w.minEigenvalue = minHermitianEigenvalue(hermitianPart(t.b()));
  for (auto [i, j] : orderedPairs(n)) {
    const double lo =
        hermitian2x2Eigenvalues(t.a()(i, j).real(), t.c()(i, j), t.a()(j, i).real()).first;
    if (lo < w.minEigenvalue) {
      w.minEigenvalue = lo;
      w.block = BlockRef{false, i, j};
    }
  }
  w.positive = w.minEigenvalue >= -tol;
  return w;
}

inline PositivityWitness isPpt(const LdoiTriple& t, double tol = kDefaultZeroTol) {
  return isPsd(partialTransposeTriple(t), tol);
}

/// Hilbert-Schmidt inner product Tr(X^* Y).
inline Complex hsInner(const LdoiTriple& x, const LdoiTriple& y) {
  LdoiTriple::checkSameDimension(x, y);
  Complex sum = (x.a().conjugate().cwiseProduct(y.a())).sum();
  for (int i = 0; i < x.n(); ++i)
    for (int j = 0; j < x.n(); ++j) {
      if (i == j) continue;
      sum += std::conj(x.b()(i, j)) * y.b()(i, j) + std::conj(x.c()(i, j)) * y.c()(i, j);
    }
  return sum;
}

/// Largest entry magnitude over the three matrices.
inline double maxAbsDifference(const LdoiTriple& x, const LdoiTriple& y) {
  LdoiTriple::checkSameDimension(x, y);
  return std::max({maxAbs(x.a() - y.a()), maxAbs(x.b() - y.b()), maxAbs(x.c() - y.c())});
}

// Real coordinates for Hermitian triples.
//
// Layout: a(i,j) for all i, j (n^2 reals, row-major), then for each pair i < j
// in orderedPairs order: Re b_ij, Im b_ij, Re c_ij, Im c_ij. Total 3n^2 - 2n.
namespace coords {

inline int count(int n) { return 3 * n * n - 2 * n; }
inline int aIndex(int n, int i, int j) { return i * n + j; }
inline int bReIndex(int n, int pair) { return n * n + 4 * pair; }
inline int bImIndex(int n, int pair) { return n * n + 4 * pair + 1; }
inline int cReIndex(int n, int pair) { return n * n + 4 * pair + 2; }
inline int cImIndex(int n, int pair) { return n * n + 4 * pair + 3; }

inline RealVector toCoordinates(const LdoiTriple& t) {
  const int n = t.n();
  RealVector x(count(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) x(aIndex(n, i, j)) = t.a()(i, j).real();
  int p = 0;
  for (auto [i, j] : orderedPairs(n)) {
    x(bReIndex(n, p)) = t.b()(i, j).real();
    x(bImIndex(n, p)) = t.b()(i, j).imag();
    x(cReIndex(n, p)) = t.c()(i, j).real();
    x(cImIndex(n, p)) = t.c()(i, j).imag();
    ++p;
  }
  return x;
}

inline LdoiTriple fromCoordinates(int n, const RealVector& x) {
  if (x.size() != count(n)) throw DimensionMismatch("coordinate vector has wrong length");
  ComplexMatrix a(n, n), b = ComplexMatrix::Zero(n, n), c = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = x(aIndex(n, i, j));
  int p = 0;
  for (auto [i, j] : orderedPairs(n)) {
    b(i, j) = Complex(x(bReIndex(n, p)), x(bImIndex(n, p)));
    b(j, i) = std::conj(b(i, j));
    c(i, j) = Complex(x(cReIndex(n, p)), x(cImIndex(n, p)));
    c(j, i) = std::conj(c(i, j));
    ++p;
  }
  return LdoiTriple::withSharedDiagonal(std::move(a), std::move(b), std::move(c));
}

/// Hermitian triple for the q-th unit coordinate.
inline LdoiTriple direction(int n, int q) {
  RealVector e = RealVector::Zero(count(n));
  e(q) = 1.0;
  return fromCoordinates(n, e);
}

/// Gradient of x -> <T, X(x)> in coordinates, for Hermitian T.
inline RealVector innerProductFunctional(const LdoiTriple& t) {
  RealVector g = toCoordinates(t);
  g.tail(g.size() - t.n() * t.n()) *= 2.0;
  return g;
}

/// Inverse of innerProductFunctional: the Hermitian triple H with <H, E_q> = g_q.
inline LdoiTriple tripleFromFunctional(int n, const RealVector& g) {
  RealVector x = g;
  x.tail(x.size() - n * n) *= 0.5;
  return fromCoordinates(n, x);
}

}  // namespace coords

}  // namespace ldoi
