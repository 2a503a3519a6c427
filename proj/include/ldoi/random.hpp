#pragma once

// Seeded generators for random specs, LDOI density triples and ensembles.

#include "ldoi/basis.hpp"

#include <cstdint>
#include <random>

namespace ldoi {

using Rng = std::mt19937_64;

/// Independent stream for item `index` of a run seeded with `seed`.
inline Rng seededRng(std::uint64_t seed, std::uint64_t index = 0) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(index),
                    std::uint32_t(index >> 32)};
  return Rng(seq);
}

inline ComplexMatrix complexGaussian(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) {
      const double re = g(rng);
      const double im = g(rng);
      m(r, c) = Complex(re, im) / std::numbers::sqrt2;
    }
  return m;
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases of R divided out.
inline ComplexMatrix haarUnitary(int n, Rng& rng) {
  const ComplexMatrix z = complexGaussian(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    const Complex d = r(k, k);
    if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

/// U Haar; |a_ij|^2 uniform on [0, 1] with |a_ji|^2 = 1 - |a_ij|^2 and uniform phases.
inline LdoiBasisSpec randomSpec(int n, Rng& rng) {
  require(n >= 2, "random spec needs n >= 2");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  LdoiBasisSpec spec{n, haarUnitary(n, rng), ComplexMatrix::Zero(n, n)};
  for (auto [i, j] : orderedPairs(n)) {
    const double s = unit(rng);
    const double p1 = phase(rng);
    const double p2 = phase(rng);
    spec.a(i, j) = std::polar(std::sqrt(s), p1);
    spec.a(j, i) = std::polar(std::sqrt(1.0 - s), p2);
  }
  return spec;
}

/// Random LDOI density: every block W W^* for a complex Gaussian W, normalized to unit trace.
inline LdoiTriple randomDensityTriple(int n, Rng& rng) {
  require(n >= 2, "random density needs n >= 2");
  BlockDecomposition d;
  const ComplexMatrix w = complexGaussian(n, n, rng);
  d.diagonalBlock = w * w.adjoint();
  for (int p = 0; p < pairCount(n); ++p) {
    const ComplexMatrix v = complexGaussian(2, 2, rng);
    d.pairBlocks.push_back(v * v.adjoint());
  }
  d.diagonalBlock = hermitianPart(d.diagonalBlock);
  for (auto& b : d.pairBlocks) b = 0.5 * (b + b.adjoint()).eval();
  const LdoiTriple t = tripleFromBlocks(d);
  return (1.0 / t.trace().real()) * t;
}

/// Random Hermitian LDOI triple (not normalized, not positive).
inline LdoiTriple randomHermitianTriple(int n, Rng& rng) {
  const ComplexMatrix a = complexGaussian(n, n, rng).real().cast<Complex>();
  ComplexMatrix b = complexGaussian(n, n, rng), c = complexGaussian(n, n, rng);
  b = hermitianPart(b);
  c = hermitianPart(c);
  return LdoiTriple::withSharedDiagonal(a, b, c);
}

inline Ensemble randomEnsemble(int n, int count, Rng& rng) {
  require(count >= 1, "random ensemble needs at least one state");
  std::exponential_distribution<double> expo(1.0);
  Ensemble e;
  double total = 0.0;
  for (int k = 0; k < count; ++k) {
    e.priors.push_back(expo(rng) + 1e-3);
    total += e.priors.back();
  }
  for (double& p : e.priors) p /= total;
  for (int k = 0; k < count; ++k) e.states.push_back(randomDensityTriple(n, rng));
  return e;
}

}  // namespace ldoi
