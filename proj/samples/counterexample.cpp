// Bounds, the exact PPT optimum and both certificates for the 3x3 basis whose
// c-bound is not attained.

#include "ldoi/ldoi.hpp"

#include <cstdio>

int main() {
  using namespace ldoi;
  const LdoiBasisSpec spec = counterexampleSpec();
  const Ensemble e = uniformEnsemble(spec);

  const LoccBound lb = loccLowerBound(spec);
  const OptCBound ub = pptUpperBoundOptC(spec);
  const PptSolveResult opt = solvePptPrimalLdoi(e);

  std::printf("local lower bound   %.12f\n", lb.value);
  std::printf("PPT optimum (SDP)   %.12f  (26/45 = %.12f)\n", opt.value(), 26.0 / 45.0);
  std::printf("c-bound             %.12f  (44/75 = %.12f)\n", ub.value, 44.0 / 75.0);
  std::printf("weak bound          %.12f\n", pptUpperBoundWeak(spec));

  // the diagonal certificate proves the c-bound, the solver's dual proves the optimum
  const CertificateCheck diag = checkDualCertificate(buildDiagonalCertificate(spec, ub.certificate), e);
  const CertificateCheck dual = checkDualCertificate(opt.certificate, e, 1e-7);
  std::printf("diagonal certificate feasible=%d bound=%.12f\n", diag.feasible, diag.bound);
  std::printf("solver certificate   feasible=%d bound=%.12f\n", dual.feasible, dual.bound);

  const PovmReport rep = verifyPovm(opt.povm, PovmClass::Ppt, 1e-8);
  std::printf("optimal measurement: complete=%d ppt=%d\n", rep.complete, rep.ppt);
  return diag.feasible && dual.feasible && rep.pass ? 0 : 1;
}
