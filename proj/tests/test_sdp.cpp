#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace ldoi;

namespace {

/// Random dense POVM: normalize Gaussian PSD operators by the inverse square root of their sum.
std::vector<ComplexMatrix> randomDensePovm(int n, int count, Rng& rng) {
  std::vector<ComplexMatrix> m;
  ComplexMatrix sum = ComplexMatrix::Zero(n * n, n * n);
  for (int k = 0; k < count; ++k) {
    const ComplexMatrix w = complexGaussian(n * n, n * n, rng);
    m.push_back(w * w.adjoint());
    sum += m.back();
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> s(sum);
  const ComplexMatrix root = s.operatorInverseSqrt();
  for (auto& x : m) x = root * x * root;
  return m;
}

}  // namespace

TEST(BlockSdp, ScalarLp) {
  // maximize y subject to 2 - y >= 0 and y + 1 >= 0
  sdp::BlockSdpProblem p;
  const int y = p.addVariables(1);
  p.setObjective(y, 1.0);
  const int b0 = p.addBlock(1), b1 = p.addBlock(1);
  p.addConstant(b0, 0, 0, 2.0);
  p.addTerm(b0, y, 0, 0, -1.0);
  p.addConstant(b1, 0, 0, 1.0);
  p.addTerm(b1, y, 0, 0, 1.0);
  const sdp::SdpSolution s = sdp::solve(p);
  ASSERT_EQ(s.status, sdp::SdpStatus::Optimal);
  EXPECT_NEAR(s.primalValue, 2.0, 1e-7);
  EXPECT_NEAR(s.dualValue, 2.0, 1e-7);
  EXPECT_LE(s.gap, 1e-7);
}

TEST(BlockSdp, ComplexTwoByTwo) {
  // maximize Re z subject to [[1, z], [conj z, 1]] >= 0 with z = y0 + i y1, and y0 + y1 = 1
  sdp::BlockSdpProblem p;
  const int y = p.addVariables(2);
  p.setObjective(y, 1.0);
  const int b = p.addBlock(2);
  p.addConstant(b, 0, 0, 1.0);
  p.addConstant(b, 1, 1, 1.0);
  p.addTerm(b, y, 0, 1, 1.0);
  p.addTerm(b, y + 1, 0, 1, kI);
  p.addEquality({{{y, 1.0}, {y + 1, 1.0}}, 1.0});
  const sdp::SdpSolution s = sdp::solve(p);
  ASSERT_EQ(s.status, sdp::SdpStatus::Optimal);
  // |z| <= 1 on the line y0 + y1 = 1: the optimum is y0 = 1, y1 = 0
  EXPECT_NEAR(s.primalValue, 1.0, 1e-6);
  EXPECT_NEAR(s.y(0) + s.y(1), 1.0, 1e-8);
}

TEST(BlockSdp, LowerTriangleEntriesAreConjugated) {
  sdp::BlockSdpProblem p;
  const int y = p.addVariables(1);
  const int b = p.addBlock(2);
  p.addTerm(b, y, 1, 0, Complex(0.0, 1.0));
  RealVector v(1);
  v << 1.0;
  const ComplexMatrix m = p.evaluateBlock(b, v);
  EXPECT_EQ(m(1, 0), Complex(0.0, 1.0));
  EXPECT_EQ(m(0, 1), Complex(0.0, -1.0));
  EXPECT_THROW(p.addTerm(b, 3, 0, 0, 1.0), DomainError);
  EXPECT_THROW(p.addBlock(0), DomainError);
}

TEST(BlockSdp, InfeasibleIsNotOptimal) {
  // y >= 1 and y <= 0
  sdp::BlockSdpProblem p;
  const int y = p.addVariables(1);
  p.setObjective(y, 1.0);
  const int b0 = p.addBlock(1), b1 = p.addBlock(1);
  p.addConstant(b0, 0, 0, -1.0);
  p.addTerm(b0, y, 0, 0, 1.0);
  p.addTerm(b1, y, 0, 0, -1.0);
  const sdp::SdpSolution s = sdp::solve(p);
  EXPECT_NE(s.status, sdp::SdpStatus::Optimal);
}

TEST(PptSdp, Counterexample) {
  const Ensemble e = uniformEnsemble(counterexampleSpec());
  const PptSolveResult r = solvePptPrimalLdoi(e);
  ASSERT_EQ(r.solution.status, sdp::SdpStatus::Optimal);
  EXPECT_NEAR(r.value(), 26.0 / 45.0, 1e-6);
  EXPECT_LE(std::abs(r.solution.primalValue - r.solution.dualValue), 1e-7);
  const PovmReport rep = verifyPovm(r.povm, PovmClass::Ppt, 1e-8);
  EXPECT_TRUE(rep.pass) << rep.completenessResidual;
  EXPECT_NEAR(successProbability(r.povm, e).total, r.value(), 1e-7);
  const CertificateCheck c = checkDualCertificate(r.certificate, e, 1e-7);
  EXPECT_TRUE(c.feasible) << c.worstEigenvalue;
  EXPECT_NEAR(c.bound, 26.0 / 45.0, 1e-6);
  // strictly between the two bounds
  EXPECT_LT(r.value(), 44.0 / 75.0 - 1e-3);
  EXPECT_GT(r.value(), 388.0 / 675.0 + 1e-4);
}

TEST(PptSdp, BellAndFourier) {
  const Ensemble bell = uniformEnsemble(bellSpec());
  const PptSolveResult b = solvePptPrimalLdoi(bell);
  EXPECT_NEAR(b.value(), 0.5, 1e-6);
  const CertificateCheck c = checkDualCertificate(b.certificate, bell, 1e-7);
  EXPECT_TRUE(c.feasible);
  EXPECT_NEAR(c.bound, 0.5, 1e-6);
  for (int n = 3; n <= 5; ++n) {
    const PptSolveResult f = solvePptPrimalLdoi(uniformEnsemble(fourierSpec(n)));
    EXPECT_EQ(f.solution.status, sdp::SdpStatus::Optimal);
    EXPECT_NEAR(f.value(), 0.5, 1e-6) << n;
    EXPECT_TRUE(verifyPovm(f.povm, PovmClass::Ppt, 1e-8).pass);
  }
}

TEST(PptSdp, DenseOracleAgrees) {
  for (int i = 0; i < 6; ++i) {
    Rng rng = seededRng(51, i);
    const int n = 2 + i % 2;
    const Ensemble e = i < 4 ? randomEnsemble(n, 2 + i, rng) : uniformEnsemble(randomSpec(n, rng));
    const double reduced = solvePptPrimalLdoi(e).value();
    const sdp::SdpSolution dense = solvePptPrimalDense(e);
    ASSERT_EQ(dense.status, sdp::SdpStatus::Optimal);
    EXPECT_NEAR(reduced, dense.primalValue, 1e-6) << i;
  }
  EXPECT_NEAR(solvePptPrimalDense(uniformEnsemble(bellSpec())).primalValue, 0.5, 1e-6);
  Rng rng = seededRng(52);
  EXPECT_THROW(solvePptPrimalDense(randomEnsemble(5, 2, rng)), DomainError);
}

TEST(PptSdp, MonotoneAgainstBounds) {
  for (int i = 0; i < 12; ++i) {
    Rng rng = seededRng(53, i);
    const int n = 2 + i % 3;
    const LdoiBasisSpec s = randomSpec(n, rng);
    const double v = solvePptPrimalLdoi(uniformEnsemble(s)).value();
    EXPECT_GE(v, loccLowerBound(s).value - 1e-7);
    EXPECT_LE(v, pptUpperBoundOptC(s).value + 1e-7);
  }
}

TEST(PptSdp, TwirlPreservesObjective) {
  for (int i = 0; i < 20; ++i) {
    Rng rng = seededRng(54, i);
    const int n = 2 + i % 3;
    const Ensemble e = randomEnsemble(n, 3, rng);
    const std::vector<ComplexMatrix> povm = randomDensePovm(n, 3, rng);
    double raw = 0.0, twirled = 0.0;
    for (int k = 0; k < 3; ++k) {
      const ComplexMatrix rho = tripleToDense(e.states[k]).matrix;
      raw += e.priors[k] * (povm[k] * rho).trace().real();
      twirled += e.priors[k] * (oracle::signTwirl(povm[k], n) * rho).trace().real();
    }
    ASSERT_NEAR(raw, twirled, 1e-12);
  }
}

TEST(Certificates, DiagonalFromOptimalC) {
  const LdoiBasisSpec s = counterexampleSpec();
  const DualCertificate d = buildDiagonalCertificate(s, pptUpperBoundOptC(s).certificate);
  const CertificateCheck c = checkDualCertificate(d, uniformEnsemble(s), 1e-9);
  EXPECT_TRUE(c.feasible) << c.worstEigenvalue;
  EXPECT_NEAR(c.bound, 44.0 / 75.0, 1e-7);
  for (int i = 0; i < 30; ++i) {
    Rng rng = seededRng(55, i);
    const LdoiBasisSpec r = randomSpec(2 + i % 4, rng);
    const OptCBound opt = pptUpperBoundOptC(r);
    const CertificateCheck rc = checkDualCertificate(buildDiagonalCertificate(r, opt.certificate), uniformEnsemble(r));
    ASSERT_TRUE(rc.feasible) << i << " " << rc.worstEigenvalue;
    ASSERT_NEAR(rc.bound, opt.value, 1e-12);
  }
  CertificateC bad{{0.1, 0.1, 0.1}, 0.3};
  EXPECT_THROW(buildDiagonalCertificate(s, bad), DomainError);
}

TEST(Certificates, ScaledIdentity) {
  const Ensemble bell = uniformEnsemble(bellSpec());
  // H = I/8 has trace 1/2, the Bell optimum
  const DualCertificate tight{(1.0 / 8.0) * LdoiTriple::identity(2), std::nullopt};
  EXPECT_TRUE(checkDualCertificate(tight, bell).feasible);
  const DualCertificate low{(1.0 / 8.0 - 1e-4) * LdoiTriple::identity(2), std::nullopt};
  const CertificateCheck c = checkDualCertificate(low, bell);
  EXPECT_FALSE(c.feasible);
  EXPECT_LT(c.bound, 0.5);
  const DualCertificate wrongSize{LdoiTriple::identity(3), std::nullopt};
  EXPECT_THROW(checkDualCertificate(wrongSize, bell), DimensionMismatch);
}

TEST(Unambiguous, ProductBasisFeasible) {
  for (int n = 2; n <= 4; ++n) {
    const UnambiguousResult r = unambiguousPptFeasible(uniformEnsemble(productSpec(n)));
    EXPECT_TRUE(r.feasible) << r.reason;
    EXPECT_NEAR(r.minSuccess, 1.0, 1e-6);
    EXPECT_EQ(r.povm.labels.front(), kInconclusive);
    EXPECT_EQ(r.povm.size(), n * n + 1);
  }
}

TEST(Unambiguous, EntangledBasesAreInfeasible) {
  // zero error on a complete basis forces P_k onto |phi_k><phi_k|, which is never PPT when phi_k is entangled
  for (const LdoiBasisSpec& s : {bellSpec(), counterexampleSpec(), fourierSpec(3)}) {
    const UnambiguousResult r = unambiguousPptFeasible(uniformEnsemble(s));
    EXPECT_FALSE(r.feasible);
    EXPECT_LT(r.minSuccess, kUnambiguousDelta);
  }
  for (int i = 0; i < 5; ++i) {
    Rng rng = seededRng(56, i);
    const UnambiguousResult r = unambiguousPptFeasible(uniformEnsemble(randomSpec(2 + i % 2, rng)));
    EXPECT_FALSE(r.feasible);
  }
}

TEST(Unambiguous, EntangledRankOneElementIsNpt) {
  for (int i = 0; i < 20; ++i) {
    Rng rng = seededRng(57, i);
    const int n = 2 + i % 4;
    const LdoiBasisSpec s = randomSpec(n, rng);
    for (const LdoiTriple& rho : uniformEnsemble(s).states) ASSERT_FALSE(isPpt(rho, 1e-9).positive);
  }
}
