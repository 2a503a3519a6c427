// PPT discrimination of two Werner states and a maximally entangled state,
// checked against the full-space SDP, then written out as JSON.

#include "ldoi/ldoi.hpp"

#include <cstdio>
#include <iostream>

int main() {
  using namespace ldoi;
  const int n = 3;
  Ensemble e;
  e.priors = {0.4, 0.4, 0.2};
  e.states = {wernerTriple(n, 0.1), wernerTriple(n, 0.9), maximallyEntangledTriple(n)};
  e.validate();

  const PptSolveResult reduced = solvePptPrimalLdoi(e);
  const sdp::SdpSolution dense = solvePptPrimalDense(e);
  std::printf("reduced %.10f  dense %.10f  (%d vs %d iterations)\n", reduced.value(), dense.primalValue,
              reduced.solution.iterations, dense.iterations);

  io::Json out{{"ensemble", io::toJson(e)}, {"solution", io::toJson(reduced.solution)},
               {"povm", io::toJson(reduced.povm)}};
  std::cout << io::dump(out) << "\n";
  return 0;
}
