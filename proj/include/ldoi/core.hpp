#pragma once

// Common scalar/matrix aliases, error types and small Hermitian helpers shared
// by every ldoi header.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ldoi {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Tolerance for "is this entry zero" checks against the LDOI position pattern.
inline constexpr double kDefaultZeroTol = 1e-10;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for out-of-range parameters (dimension, probability, index).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

/// A dense operator has weight outside the three LDOI position families.
class NotLdoi : public Error {
 public:
  NotLdoi(int row, int col, double magnitude)
      : Error("operator is not LDOI: entry (" + std::to_string(row) + "," +
              std::to_string(col) + ") has magnitude " + std::to_string(magnitude)),
        row_(row),
        col_(col),
        magnitude_(magnitude) {}

  int row() const { return row_; }
  int col() const { return col_; }
  double magnitude() const { return magnitude_; }

 private:
  int row_;
  int col_;
  double magnitude_;
};

class NotLdoiBasis : public Error {
 public:
  NotLdoiBasis(int vectorIndex, const std::string& why)
      : Error("not an orthonormal LDOI basis (vector " + std::to_string(vectorIndex) +
              "): " + why),
        index_(vectorIndex) {}

  /// Index of the first offending vector, or -1 for set-level failures.
  int vectorIndex() const { return index_; }

 private:
  int index_;
};

class InvalidPermutation : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw DomainError(message);
}

inline bool allFinite(const ComplexMatrix& m) {
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    const Complex z = m.data()[k];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

/// Eigenvalues of the Hermitian matrix [[p, q], [conj(q), r]] in ascending order.
inline std::pair<double, double> hermitian2x2Eigenvalues(double p, Complex q, double r) {
  const double mean = 0.5 * (p + r);
  const double half = 0.5 * (p - r);
  const double radius = std::hypot(half, std::abs(q));
  return {mean - radius, mean + radius};
}

inline double minHermitianEigenvalue(const ComplexMatrix& m) {
  if (m.rows() == 0) return 0.0;
  if (m.rows() == 1) return m(0, 0).real();
  if (m.rows() == 2) return hermitian2x2Eigenvalues(m(0, 0).real(), m(0, 1), m(1, 1).real()).first;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

inline ComplexMatrix hermitianPart(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

inline double maxAbs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Matrix of ones.
inline ComplexMatrix allOnes(int n) { return ComplexMatrix::Ones(n, n); }

}  // namespace ldoi
