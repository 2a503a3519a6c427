#pragma once

// Named LDOI state families and the Ensemble container.

#include "ldoi/triple.hpp"

#include <numeric>

namespace ldoi {

struct Ensemble {
  std::vector<double> priors;
  std::vector<LdoiTriple> states;

  int size() const { return static_cast<int>(states.size()); }
  int n() const { return states.empty() ? 0 : states.front().n(); }

  /// Throws unless priors are a positive distribution and every state is a density triple.
  void validate(double priorTol = 1e-12, double stateTol = 1e-10) const {
    if (priors.size() != states.size())
      throw DimensionMismatch("ensemble has " + std::to_string(priors.size()) + " priors but " +
                              std::to_string(states.size()) + " states");
    if (states.empty()) throw DomainError("ensemble is empty");
    double total = 0.0;
    for (double p : priors) {
      if (!(p > 0.0)) throw DomainError("ensemble priors must be strictly positive");
      total += p;
    }
    if (std::abs(total - 1.0) > priorTol) throw DomainError("ensemble priors must sum to 1");
    for (std::size_t k = 0; k < states.size(); ++k) {
      const LdoiTriple& s = states[k];
      if (s.n() != n()) throw DimensionMismatch("ensemble states have mixed dimensions");
      if (std::abs(s.trace() - 1.0) > stateTol)
        throw DomainError("ensemble state " + std::to_string(k) + " does not have unit trace");
      if (!isPsd(s, stateTol))
        throw DomainError("ensemble state " + std::to_string(k) + " is not positive semidefinite");
    }
  }

  /// Sum of p_k rho_k.
  LdoiTriple average() const {
    LdoiTriple sum = LdoiTriple::zero(n());
    for (int k = 0; k < size(); ++k) sum += priors[k] * states[k];
    return sum;
  }
};

/// Werner state p (1 + F)/(n(n+1)) + (1 - p)(1 - F)/(n(n-1)).
inline LdoiTriple wernerTriple(int n, double p) {
  require(n >= 2, "Werner state needs n >= 2");
  require(p >= 0.0 && p <= 1.0, "Werner parameter p must lie in [0, 1]");
  const double dn = n;
  const double alpha = p / (dn * (dn + 1)) + (1 - p) / (dn * (dn - 1));
  const double beta = p / (dn * (dn + 1)) - (1 - p) / (dn * (dn - 1));
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  return LdoiTriple(alpha * allOnes(n) + beta * id, (alpha + beta) * id,
                    beta * allOnes(n) + alpha * id);
}

inline LdoiTriple maximallyEntangledTriple(int n) {
  require(n >= 2, "maximally entangled state needs n >= 2");
  const ComplexMatrix id = ComplexMatrix::Identity(n, n) / double(n);
  return LdoiTriple(id, allOnes(n) / double(n), id);
}

/// Projector onto |i>|j> (0-based indices).
inline LdoiTriple productBasisTriple(int n, int i, int j) {
  require(n >= 2, "product state needs n >= 2");
  if (i < 0 || i >= n || j < 0 || j >= n)
    throw DomainError("product state index out of range");
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  a(i, j) = 1.0;
  const ComplexMatrix diag = a.diagonal().asDiagonal();
  return LdoiTriple(a, diag, diag);
}

/// Two-qubit X-state with the given dense entries; rho41 = conj(rho14), rho32 = conj(rho23).
/// Positivity is not checked here.
inline LdoiTriple xStateTriple(Complex rho11, Complex rho22, Complex rho33, Complex rho44,
                               Complex rho14, Complex rho23, double tol = 1e-10) {
  for (Complex d : {rho11, rho22, rho33, rho44})
    if (std::abs(d.imag()) > tol) throw NotHermitian("X-state diagonal entries must be real");
  if (std::abs((rho11 + rho22 + rho33 + rho44).real() - 1.0) > tol)
    throw DomainError("X-state must have unit trace");
  ComplexMatrix a(2, 2), b(2, 2), c(2, 2);
  a << rho11.real(), rho22.real(), rho33.real(), rho44.real();
  b << rho11.real(), rho14, std::conj(rho14), rho44.real();
  c << rho11.real(), rho23, std::conj(rho23), rho44.real();
  return LdoiTriple(a, b, c);
}

}  // namespace ldoi
