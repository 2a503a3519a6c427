#include "oracles.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace ldoi;

namespace {

ComplexMatrix randomDense(int n, Rng& rng) { return complexGaussian(n * n, n * n, rng); }

ComplexMatrix randomPsdDense(int n, Rng& rng) {
  const ComplexMatrix w = complexGaussian(n * n, n * n, rng);
  return w * w.adjoint();
}

/// (n, rng) for the i-th property case, n cycling through 2..6.
std::pair<int, Rng> propertyCase(std::uint64_t salt, int i) {
  return {2 + i % 5, seededRng(salt, std::uint64_t(i))};
}

constexpr int kCases = 200;

}  // namespace

TEST(Triple, RejectsMismatchedDiagonals) {
  ComplexMatrix a = ComplexMatrix::Identity(2, 2), b = a, c = a;
  b(1, 1) = 0.5;
  EXPECT_THROW(LdoiTriple(a, b, c), DomainError);
  EXPECT_THROW(LdoiTriple(ComplexMatrix::Zero(1, 1), ComplexMatrix::Zero(1, 1), ComplexMatrix::Zero(1, 1)),
               DomainError);
  EXPECT_THROW(LdoiTriple(a, ComplexMatrix::Identity(3, 3), c), DimensionMismatch);
  a(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(LdoiTriple(a, ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)), DomainError);
}

TEST(Triple, MaximallyEntangledDenseForm) {
  const DenseOperator d = tripleToDense(maximallyEntangledTriple(2));
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 0) = expected(0, 3) = expected(3, 0) = expected(3, 3) = 0.5;
  EXPECT_EQ(d.matrix, expected);
}

TEST(Triple, IdentityDenseForm) {
  for (int n = 2; n <= 5; ++n)
    EXPECT_EQ(tripleToDense(LdoiTriple::identity(n)).matrix, ComplexMatrix::Identity(n * n, n * n));
}

TEST(Triple, BellProjectorFromDense) {
  ComplexVector phi = ComplexVector::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  const LdoiTriple t = tripleFromDense(DenseOperator(2, phi * phi.adjoint()));
  EXPECT_LT(maxAbsDifference(t, maximallyEntangledTriple(2)), 1e-15);
  EXPECT_LT(maxAbsDifference(tripleFromDense(DenseOperator(3, ComplexMatrix::Zero(9, 9))), LdoiTriple::zero(3)),
            0.0 + 1e-300);
}

TEST(Triple, NotLdoiReportsWorstPosition) {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  // |1><2| (x) |2><2| in 1-based labels: row |12> = 1, column |22> = 3
  m(1, 3) = 0.7;
  m(2, 1) = 1e-12;
  try {
    tripleFromDense(DenseOperator(2, m));
    FAIL() << "expected NotLdoi";
  } catch (const NotLdoi& e) {
    EXPECT_EQ(e.row(), 1);
    EXPECT_EQ(e.col(), 3);
    EXPECT_DOUBLE_EQ(e.magnitude(), 0.7);
  }
}

TEST(Triple, RoundTripRandom) {
  for (int i = 0; i < kCases; ++i) {
    auto [n, rng] = propertyCase(11, i);
    const LdoiTriple t = LdoiTriple::withSharedDiagonal(complexGaussian(n, n, rng), complexGaussian(n, n, rng),
                                                        complexGaussian(n, n, rng));
    const LdoiTriple back = tripleFromDense(tripleToDense(t));
    ASSERT_EQ(back.a(), t.a());
    ASSERT_EQ(back.b(), t.b());
    ASSERT_EQ(back.c(), t.c());
  }
}

TEST(Twirl, PlusPlusExample) {
  ComplexVector plus(2);
  plus << 1.0, 1.0;
  plus /= std::sqrt(2.0);
  ComplexVector pp(4);
  for (int k = 0; k < 4; ++k) pp(k) = plus(k / 2) * plus(k % 2);
  const LdoiTriple t = tripleFromDense(ldotTwirl(DenseOperator(2, pp * pp.adjoint())));
  EXPECT_LT(maxAbs(t.a() - ComplexMatrix::Constant(2, 2, 0.25)), 1e-15);
  EXPECT_LT(maxAbs(t.b() - ComplexMatrix::Constant(2, 2, 0.25)), 1e-15);
  EXPECT_LT(maxAbs(t.c() - ComplexMatrix::Constant(2, 2, 0.25)), 1e-15);
  // sign-average oracle agrees
  EXPECT_LT(maxAbs(oracle::signTwirl(pp * pp.adjoint(), 2) - ldotTwirl(DenseOperator(2, pp * pp.adjoint())).matrix),
            1e-15);
}

TEST(Twirl, MatchesSignAverage) {
  for (int i = 0; i < kCases; ++i) {
    auto [n, rng] = propertyCase(12, i);
    const ComplexMatrix x = randomDense(n, rng);
    ASSERT_LT(maxAbs(ldotTwirl(DenseOperator(n, x)).matrix - oracle::signTwirl(x, n)), 1e-12) << "n=" << n;
  }
  // the oracle covers n up to 8
  Rng rng = seededRng(12, 999);
  for (int n : {7, 8}) {
    const ComplexMatrix x = randomDense(n, rng);
    EXPECT_LT(maxAbs(ldotTwirl(DenseOperator(n, x)).matrix - oracle::signTwirl(x, n)), 1e-12);
  }
}

TEST(Twirl, IdempotentSelfAdjointTracePreserving) {
  for (int i = 0; i < kCases; ++i) {
    auto [n, rng] = propertyCase(13, i);
    const ComplexMatrix x = randomDense(n, rng), y = randomDense(n, rng);
    const ComplexMatrix tx = ldotTwirl(DenseOperator(n, x)).matrix;
    const ComplexMatrix ty = ldotTwirl(DenseOperator(n, y)).matrix;
    ASSERT_EQ(ldotTwirl(DenseOperator(n, tx)).matrix, tx);
    const Complex lhs = (tx.adjoint() * y).trace();
    const Complex rhs = (x.adjoint() * ty).trace();
    ASSERT_LT(std::abs(lhs - rhs), 1e-12 * (1.0 + std::abs(lhs)));
    ASSERT_LT(std::abs(tx.trace() - x.trace()), 1e-12 * (1.0 + std::abs(x.trace())));
  }
}

TEST(Twirl, PositivityPreserving) {
  for (int i = 0; i < kCases; ++i) {
    auto [n, rng] = propertyCase(14, i);
    const ComplexMatrix p = randomPsdDense(n, rng);
    const ComplexMatrix tp = ldotTwirl(DenseOperator(n, p)).matrix;
    ASSERT_GE(oracle::minEigenvalueDense(tp), -1e-10);
    ASSERT_TRUE(isPsd(tripleFromDense(DenseOperator(n, tp)), 1e-9).positive);
  }
}

TEST(PartialTranspose, MaximallyEntangled) {
  for (int n = 2; n <= 5; ++n) {
    const LdoiTriple t = partialTransposeTriple(maximallyEntangledTriple(n));
    EXPECT_LT(maxAbs(t.a() - ComplexMatrix::Identity(n, n) / double(n)), 1e-15);
    EXPECT_LT(maxAbs(t.b() - ComplexMatrix::Identity(n, n) / double(n)), 1e-15);
    EXPECT_LT(maxAbs(t.c() - allOnes(n) / double(n)), 1e-15);
  }
}

TEST(PartialTranspose, SymmetricFixedPoint) {
  Rng rng = seededRng(15);
  for (int n = 2; n <= 6; ++n) {
    const ComplexMatrix s = complexGaussian(n, n, rng);
    const ComplexMatrix sym = s + s.transpose();
    const LdoiTriple t = LdoiTriple::withSharedDiagonal(complexGaussian(n, n, rng), sym, sym);
    EXPECT_LT(maxAbsDifference(partialTransposeTriple(t), t), 1e-15);
  }
}

TEST(PartialTranspose, MatchesDenseOracleAndIsInvolution) {
  for (int i = 0; i < kCases; ++i) {
    auto [n, rng] = propertyCase(16, i);
    const LdoiTriple t = LdoiTriple::withSharedDiagonal(complexGaussian(n, n, rng), complexGaussian(n, n, rng),
                                                        complexGaussian(n, n, rng));
    const ComplexMatrix dense = oracle::partialTransposeFirst(tripleToDense(t).matrix, n);
    ASSERT_EQ(tripleToDense(partialTransposeTriple(t)).matrix, dense);
    const LdoiTriple twice = partialTransposeTriple(partialTransposeTriple(t));
    ASSERT_EQ(twice.a(), t.a());
    ASSERT_EQ(twice.b(), t.b());
    ASSERT_EQ(twice.c(), t.c());
  }
}

TEST(Blocks, XStateExample) {
  const Complex r14(0.1, 0.05), r23(-0.02, 0.1);
  const LdoiTriple t = xStateTriple(0.4, 0.1, 0.2, 0.3, r14, r23);
  const BlockDecomposition d = blockDecompose(t);
  ComplexMatrix diag(2, 2);
  diag << 0.4, r14, std::conj(r14), 0.3;
  Eigen::Matrix2cd pair;
  pair << 0.1, r23, std::conj(r23), 0.2;
  EXPECT_EQ(d.diagonalBlock, diag);
  ASSERT_EQ(d.pairBlocks.size(), 1u);
  EXPECT_EQ(d.pairBlocks[0], pair);
  // and the dense form carries the X pattern exactly as the state's matrix entries
  const ComplexMatrix m = tripleToDense(t).matrix;
  EXPECT_EQ(m(0, 3), r14);
  EXPECT_EQ(m(1, 2), r23);
  EXPECT_EQ(m(0, 1), Complex(0.0));
  EXPECT_EQ(m(1, 3), Complex(0.0));
}

TEST(Blocks, IdentityBlocks) {
  const BlockDecomposition d = blockDecompose(LdoiTriple::identity(4));
  EXPECT_EQ(d.diagonalBlock, ComplexMatrix::Identity(4, 4));
  ASSERT_EQ(d.pairBlocks.size(), 6u);
  for (const auto& b : d.pairBlocks) EXPECT_EQ(b, Eigen::Matrix2cd::Identity());
}

TEST(Blocks, SpectrumEqualsDense) {
  for (int i = 0; i < kCases; ++i) {
    auto [n, rng] = propertyCase(17, i);
    const LdoiTriple t = randomHermitianTriple(n, rng);
    const BlockDecomposition d = blockDecompose(t);
    std::vector<double> blockEigs;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> s(d.diagonalBlock, Eigen::EigenvaluesOnly);
    for (int k = 0; k < n; ++k) blockEigs.push_back(s.eigenvalues()(k));
    for (const auto& b : d.pairBlocks) {
      auto [lo, hi] = hermitian2x2Eigenvalues(b(0, 0).real(), b(0, 1), b(1, 1).real());
      blockEigs.push_back(lo);
      blockEigs.push_back(hi);
    }
    std::sort(blockEigs.begin(), blockEigs.end());
    const Eigen::VectorXd dense = oracle::eigenvaluesDense(tripleToDense(t).matrix);
    ASSERT_EQ(static_cast<int>(blockEigs.size()), n * n);
    for (int k = 0; k < n * n; ++k) ASSERT_NEAR(blockEigs[k], dense(k), 1e-10);
    ASSERT_LT(maxAbsDifference(tripleFromBlocks(d), t), 1e-15);
  }
}

TEST(Positivity, AgreesWithDenseEigensolver) {
  for (int i = 0; i < kCases; ++i) {
    auto [n, rng] = propertyCase(18, i);
    LdoiTriple t = randomHermitianTriple(n, rng);
    // shift toward the PSD boundary so both outcomes occur
    t = t + (std::abs(complexGaussian(1, 1, rng)(0, 0).real()) * 2.0) * LdoiTriple::identity(n);
    const double dense = oracle::minEigenvalueDense(tripleToDense(t).matrix);
    const PositivityWitness w = isPsd(t, 1e-10);
    ASSERT_NEAR(w.minEigenvalue, dense, 1e-10);
    ASSERT_EQ(w.positive, dense >= -1e-10);
    const double denseT = oracle::minEigenvalueDense(oracle::partialTransposeFirst(tripleToDense(t).matrix, n));
    ASSERT_NEAR(isPpt(t, 1e-10).minEigenvalue, denseT, 1e-10);
  }
}

TEST(Positivity, IndefinitePairBlockWitness) {
  ComplexMatrix a = ComplexMatrix::Identity(3, 3), c = ComplexMatrix::Identity(3, 3);
  c(0, 1) = c(1, 0) = 1.0;
  const LdoiTriple t(a, ComplexMatrix::Identity(3, 3), c);
  const PositivityWitness w = isPsd(t);
  EXPECT_FALSE(w.positive);
  EXPECT_FALSE(w.block.diagonal);
  EXPECT_EQ(w.block.i, 0);
  EXPECT_EQ(w.block.j, 1);
  EXPECT_NEAR(w.minEigenvalue, -1.0, 1e-15);
}

TEST(Positivity, RejectsNonHermitian) {
  ComplexMatrix b = ComplexMatrix::Identity(2, 2);
  b(0, 1) = 0.3;
  const LdoiTriple t(allOnes(2), b, ComplexMatrix::Identity(2, 2));
  EXPECT_THROW(isPsd(t), NotHermitian);
  EXPECT_THROW(isPpt(t), NotHermitian);
}

TEST(Positivity, NamedStates) {
  for (int n = 2; n <= 5; ++n) {
    EXPECT_FALSE(isPpt(maximallyEntangledTriple(n)).positive);
    EXPECT_TRUE(isPsd(maximallyEntangledTriple(n)).positive);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) EXPECT_TRUE(isPpt(productBasisTriple(n, i, j)).positive);
  }
}

TEST(InnerProduct, MatchesDenseTrace) {
  for (int i = 0; i < kCases; ++i) {
    auto [n, rng] = propertyCase(19, i);
    const LdoiTriple x = LdoiTriple::withSharedDiagonal(complexGaussian(n, n, rng), complexGaussian(n, n, rng),
                                                        complexGaussian(n, n, rng));
    const LdoiTriple y = LdoiTriple::withSharedDiagonal(complexGaussian(n, n, rng), complexGaussian(n, n, rng),
                                                        complexGaussian(n, n, rng));
    const Complex dense = (tripleToDense(x).matrix.adjoint() * tripleToDense(y).matrix).trace();
    ASSERT_LT(std::abs(hsInner(x, y) - dense), 1e-12 * (1.0 + std::abs(dense)));
  }
  EXPECT_NEAR(hsInner(maximallyEntangledTriple(3), maximallyEntangledTriple(3)).real(), 1.0, 1e-15);
  Rng rng = seededRng(20);
  EXPECT_NEAR(hsInner(LdoiTriple::identity(4), randomDensityTriple(4, rng)).real(), 1.0, 1e-14);
  EXPECT_THROW(hsInner(LdoiTriple::identity(2), LdoiTriple::identity(3)), DimensionMismatch);
}

TEST(Dimension, LdoiSubspaceHasDimension3n2Minus2n) {
  for (int n = 2; n <= 4; ++n) {
    EXPECT_EQ(oracle::ldoiHermitianDimension(n), 3 * n * n - 2 * n);
    // canonical coordinate directions span the same space
    const int p = coords::count(n);
    Eigen::MatrixXd m(p, 2 * n * n * n * n);
    for (int q = 0; q < p; ++q) {
      const ComplexMatrix d = tripleToDense(coords::direction(n, q)).matrix;
      for (int k = 0; k < d.size(); ++k) {
        m(q, 2 * k) = d.data()[k].real();
        m(q, 2 * k + 1) = d.data()[k].imag();
      }
    }
    EXPECT_EQ(Eigen::FullPivLU<Eigen::MatrixXd>(m).rank(), p);
  }
  // dimension count formula for the remaining sizes
  for (int n = 5; n <= 6; ++n) EXPECT_EQ(coords::count(n), 3 * n * n - 2 * n);
}

TEST(Coordinates, RoundTripAndFunctional) {
  for (int i = 0; i < kCases; ++i) {
    auto [n, rng] = propertyCase(21, i);
    const LdoiTriple t = randomHermitianTriple(n, rng);
    ASSERT_LT(maxAbsDifference(coords::fromCoordinates(n, coords::toCoordinates(t)), t), 1e-15);
    const LdoiTriple s = randomHermitianTriple(n, rng);
    const double viaFunctional = coords::innerProductFunctional(t).dot(coords::toCoordinates(s));
    ASSERT_NEAR(viaFunctional, hsInner(t, s).real(), 1e-10);
    ASSERT_LT(maxAbsDifference(coords::tripleFromFunctional(n, coords::innerProductFunctional(t)), t), 1e-14);
  }
}
