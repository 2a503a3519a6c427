#pragma once

// Closed-form and small convex bounds on the distinguishability of a uniform
// LDOI basis ensemble.

#include "ldoi/assignment.hpp"
#include "ldoi/block_sdp.hpp"
#include "ldoi/measurements.hpp"

#include <limits>
#include <optional>

namespace ldoi {

/// |M|^2 entrywise.
inline RealMatrix squaredMagnitudes(const ComplexMatrix& m) { return m.cwiseAbs2(); }

/// max_k |u_{k,i}|^2 for each column i.
inline RealVector columnMaxima(const ComplexMatrix& u) {
  return squaredMagnitudes(u).colwise().maxCoeff().transpose();
}

/// sum over ordered pairs i != j of max(|a_ij|^2, |a_ji|^2).
inline double pairMaximaSum(const LdoiBasisSpec& spec) {
  double sum = 0.0;
  for (auto [i, j] : orderedPairs(spec.n))
    sum += 2.0 * std::max(std::norm(spec.a(i, j)), std::norm(spec.a(j, i)));
  return sum;
}

struct LoccBound {
  double value = 0.0;
  AssignmentResult assignment;
  Povm measurement;
};

inline LoccBound loccLowerBound(const LdoiBasisSpec& spec) {
  spec.validate();
  const double n2 = double(spec.n) * spec.n;
  LoccBound out;
  out.assignment = maxAssignment(squaredMagnitudes(spec.u));
  out.value = (pairMaximaSum(spec) + out.assignment.value) / n2;
  out.measurement = buildLocalPovm(spec, out.assignment.permutation);
  return out;
}

struct CertificateC {
  std::vector<double> c;
  double objective = 0.0;
};

/// Largest violation of c_i >= colmax_i and c_i c_j >= |a_ij|^2 |a_ji|^2 (0 when feasible).
inline double certificateViolation(const LdoiBasisSpec& spec, const CertificateC& cert) {
  const int n = spec.n;
  if (static_cast<int>(cert.c.size()) != n) throw DimensionMismatch("certificate needs n entries");
  const RealVector colMax = columnMaxima(spec.u);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) worst = std::max(worst, colMax(i) - cert.c[i]);
  for (auto [i, j] : orderedPairs(n))
    worst = std::max(worst, std::norm(spec.a(i, j)) * std::norm(spec.a(j, i)) - cert.c[i] * cert.c[j]);
  return worst;
}

struct OptCBound {
  double value = 0.0;
  CertificateC certificate;
  bool converged = false;
};

namespace detail {

/// Minimizes sum exp(x_i) s.t. x_i >= lower_i, x_i + x_j >= pair_ij (pairs given explicitly)
/// with a log-barrier path and damped Newton steps.
struct LogDomainProblem {
  RealVector lower;
  std::vector<std::tuple<int, int, double>> pairs;
};

inline bool minimizeLogDomain(const LogDomainProblem& prob, RealVector& x) {
  const int n = static_cast<int>(prob.lower.size());
  x.resize(n);
  for (int i = 0; i < n; ++i) x(i) = prob.lower(i);
  for (auto [i, j, m] : prob.pairs) {
    x(i) = std::max(x(i), 0.5 * m);
    x(j) = std::max(x(j), 0.5 * m);
  }
  x.array() += 1.0;

  const double constraints = n + double(prob.pairs.size());
  auto barrier = [&](const RealVector& z, double t, bool& inside) {
    double f = t * z.array().exp().sum();
    inside = true;
    for (int i = 0; i < n; ++i) {
      const double s = z(i) - prob.lower(i);
      if (s <= 0.0) inside = false;
      else f -= std::log(s);
    }
    for (auto [i, j, m] : prob.pairs) {
      const double s = z(i) + z(j) - m;
      if (s <= 0.0) inside = false;
      else f -= std::log(s);
    }
    return f;
  };

  bool converged = false;
  for (double t = 1.0; t < 1e16; t *= 8.0) {
    for (int it = 0; it < 100; ++it) {
      RealVector grad = t * x.array().exp();
      RealMatrix hess = RealMatrix::Zero(n, n);
      hess.diagonal() = grad;
      for (int i = 0; i < n; ++i) {
        const double s = x(i) - prob.lower(i);
        grad(i) -= 1.0 / s;
        hess(i, i) += 1.0 / (s * s);
      }
      for (auto [i, j, m] : prob.pairs) {
        const double s = x(i) + x(j) - m;
        const double w = 1.0 / (s * s);
        grad(i) -= 1.0 / s;
        grad(j) -= 1.0 / s;
        hess(i, i) += w;
        hess(j, j) += w;
        hess(i, j) += w;
        hess(j, i) += w;
      }
      const RealVector step = -hess.llt().solve(grad);
      const double decrement = -grad.dot(step);
      if (!(decrement >= 0.0)) return false;
      if (decrement < 1e-20) break;
      bool inside = false;
      const double f0 = barrier(x, t, inside);
      double alpha = 1.0;
      for (;;) {
        const RealVector trial = x + alpha * step;
        const double f = barrier(trial, t, inside);
        if (inside && f <= f0 - 0.25 * alpha * decrement) {
          x = trial;
          break;
        }
        alpha *= 0.5;
        if (alpha < 1e-16) break;
      }
      if (alpha < 1e-16) break;
      if (decrement < 1e-14) break;
    }
    if (constraints / t < 1e-13) {
      converged = true;
      break;
    }
  }
  return converged;
}

}  // namespace detail

/// Smallest admissible sum c_i, and the resulting upper bound on the PPT optimum.
inline OptCBound pptUpperBoundOptC(const LdoiBasisSpec& spec) {
  spec.validate();
  const int n = spec.n;
  const RealVector colMax = columnMaxima(spec.u);
  detail::LogDomainProblem prob;
  prob.lower.resize(n);
  for (int i = 0; i < n; ++i) {
    if (!(colMax(i) > 0.0)) throw DomainError("U has a zero column");
    prob.lower(i) = std::log(colMax(i));
  }
  for (auto [i, j] : orderedPairs(n)) {
    const double product = std::norm(spec.a(i, j)) * std::norm(spec.a(j, i));
    // vacuous once the product is negligible next to the column-maximum floor
    if (product > 1e-300) prob.pairs.emplace_back(i, j, std::log(product));
  }
  RealVector x;
  OptCBound out;
  out.converged = detail::minimizeLogDomain(prob, x);
  out.certificate.c.resize(n);
  for (int i = 0; i < n; ++i) out.certificate.c[i] = std::exp(x(i));
  // guard against rounding in exp/log: lift onto the feasible set
  for (int i = 0; i < n; ++i) out.certificate.c[i] = std::max(out.certificate.c[i], colMax(i));
  for (auto [i, j] : orderedPairs(n)) {
    const double need = std::norm(spec.a(i, j)) * std::norm(spec.a(j, i));
    const double have = out.certificate.c[i] * out.certificate.c[j];
    if (have < need) {
      const double scale = std::sqrt(need / have);
      out.certificate.c[i] *= scale;
      out.certificate.c[j] *= scale;
    }
  }
  out.certificate.objective = 0.0;
  for (double c : out.certificate.c) out.certificate.objective += c;
  if (certificateViolation(spec, out.certificate) > 1e-9)
    throw Error("c-bound certificate failed re-verification");
  out.value = (pairMaximaSum(spec) + out.certificate.objective) / (double(n) * n);
  return out;
}

/// The same minimization posed as an SDP with 2x2 blocks [[c_i, r_ij], [r_ij, c_j]] >= 0.
inline sdp::SdpSolution optCViaSdp(const LdoiBasisSpec& spec, const sdp::SdpSettings& settings = {}) {
  spec.validate();
  const int n = spec.n;
  const RealVector colMax = columnMaxima(spec.u);
  sdp::BlockSdpProblem prob;
  const int first = prob.addVariables(n);
  for (int i = 0; i < n; ++i) {
    prob.setObjective(first + i, -1.0);
    const int blk = prob.addBlock(1);
    prob.addConstant(blk, 0, 0, -colMax(i));
    prob.addTerm(blk, first + i, 0, 0, 1.0);
  }
  for (auto [i, j] : orderedPairs(n)) {
    const double r = std::abs(spec.a(i, j)) * std::abs(spec.a(j, i));
    const int blk = prob.addBlock(2);
    prob.addConstant(blk, 0, 1, r);
    prob.addTerm(blk, first + i, 0, 0, 1.0);
    prob.addTerm(blk, first + j, 1, 1, 1.0);
  }
  return sdp::solve(prob, settings);
}

/// Closed form with c_i = max(1/2, colmax_i).
inline double pptUpperBoundWeak(const LdoiBasisSpec& spec) {
  spec.validate();
  const RealVector colMax = columnMaxima(spec.u);
  double sumC = 0.0;
  for (int i = 0; i < spec.n; ++i) sumC += std::max(0.5, colMax(i));
  return (pairMaximaSum(spec) + sumC) / (double(spec.n) * spec.n);
}

/// Common value of the lower and upper bounds when some permutation picks |u_{sigma(i),i}|^2 >= 1/2
/// in every column; empty otherwise.
inline std::optional<double> closedFormLargeU(const LdoiBasisSpec& spec) {
  spec.validate();
  const int n = spec.n;
  const RealMatrix mags = squaredMagnitudes(spec.u);
  const RealMatrix indicator = (mags.array() >= 0.5 - 1e-12).cast<double>();
  if (maxAssignment(indicator).value < n - 0.5) return std::nullopt;
  return (pairMaximaSum(spec) + columnMaxima(spec.u).sum()) / (double(n) * n);
}

inline double gapBound(int n) {
  require(n >= 2, "gap bound needs n >= 2");
  return (n - 2.0) / (2.0 * n * n);
}

inline double universalLowerBound(int n) { return 0.5 - gapBound(n); }

}  // namespace ldoi
