#pragma once

// Independent reference computations used only by the tests. They work on
// full n^2 x n^2 matrices or by exhaustive search and share no code paths with
// the block-structured library routines they check.

#include "ldoi/ldoi.hpp"

#include <algorithm>
#include <numeric>

namespace oracle {

using ldoi::Complex;
using ldoi::ComplexMatrix;
using ldoi::RealMatrix;

/// Partial transpose on the first factor by explicit index relabeling.
inline ComplexMatrix partialTransposeFirst(const ComplexMatrix& m, int n) {
  ComplexMatrix out(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) out(j * n + k, i * n + l) = m(i * n + k, j * n + l);
  return out;
}

/// Average of (D (x) D) X (D (x) D) over all 2^n diagonal sign matrices D.
inline ComplexMatrix signTwirl(const ComplexMatrix& m, int n) {
  ComplexMatrix sum = ComplexMatrix::Zero(n * n, n * n);
  for (int mask = 0; mask < (1 << n); ++mask) {
    Eigen::VectorXcd d(n * n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        d(i * n + k) = (((mask >> i) & 1) ? -1.0 : 1.0) * (((mask >> k) & 1) ? -1.0 : 1.0);
    sum += d.asDiagonal() * m * d.asDiagonal();
  }
  return sum / double(1 << n);
}

inline double minEigenvalueDense(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> s(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return s.eigenvalues()(0);
}

inline Eigen::VectorXd eigenvaluesDense(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> s(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return s.eigenvalues();
}

/// Best permutation by enumerating all n! of them.
inline double bruteForceAssignment(const RealMatrix& w) {
  const int n = static_cast<int>(w.rows());
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  double best = -std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += w(i, p[i]);
    best = std::max(best, s);
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

/// Dimension of the twirl's image, from the rank of twirled matrix units (real span of Hermitian
/// parts, i.e. as a real vector space of Hermitian operators).
inline int ldoiHermitianDimension(int n) {
  const int d = n * n;
  std::vector<Eigen::VectorXd> rows;
  for (int r = 0; r < d; ++r)
    for (int c = r; c < d; ++c)
      for (int part = 0; part < (r == c ? 1 : 2); ++part) {
        ComplexMatrix e = ComplexMatrix::Zero(d, d);
        const Complex v = part == 0 ? Complex(1.0) : Complex(0.0, 1.0);
        e(r, c) += v;
        if (r != c) e(c, r) += std::conj(v);
        const ComplexMatrix t = signTwirl(e, n);
        Eigen::VectorXd flat(2 * d * d);
        for (int k = 0; k < d * d; ++k) {
          flat(2 * k) = t.data()[k].real();
          flat(2 * k + 1) = t.data()[k].imag();
        }
        rows.push_back(flat);
      }
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t k = 0; k < rows.size(); ++k) m.row(k) = rows[k];
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(1e-10);
  return static_cast<int>(lu.rank());
}

/// Exact rational p/q with small integers, for frozen golden values.
struct Fraction {
  long long p;
  long long q;
  double value() const { return double(p) / double(q); }
};

inline Fraction reduce(long long p, long long q) {
  const long long g = std::gcd(p, q);
  return {p / g, q / g};
}

inline Fraction add(Fraction a, Fraction b) { return reduce(a.p * b.q + b.p * a.q, a.q * b.q); }
inline Fraction mul(Fraction a, Fraction b) { return reduce(a.p * b.p, a.q * b.q); }

}  // namespace oracle
