// Command-line front end for the ldoi library.
//
// Exit codes: 0 all checks pass, 1 numerical failure, 2 input error.

#include "ldoi/ldoi.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

using ldoi::io::Json;

struct Globals {
  double tolFeas = 1e-8;
  double tolGap = 1e-7;
  bool json = false;
  std::uint64_t seed = 1;

  ldoi::sdp::SdpSettings settings() const {
    ldoi::sdp::SdpSettings s;
    s.tolFeas = tolFeas;
    s.tolGap = tolGap;
    return s;
  }
};

void emit(const Json& j) { std::cout << ldoi::io::dump(j) << "\n"; }

void printValue(const char* name, const Json& v) {
  if (v.is_number_float())
    std::printf("  %-28s %.17g\n", name, v.get<double>());
  else
    std::printf("  %-28s %s\n", name, v.dump().c_str());
}

void printReport(const ldoi::report::RunReport& r) {
  std::printf("%s: %s\n", r.id.c_str(), r.pass() ? "PASS" : "FAIL");
  for (const char* key : {"locc_lb", "ppt_ub_opt", "ppt_ub_weak", "closed_form", "opt_ppt_sdp", "gap_bound"})
    if (r.quantities.contains(key)) printValue(key, r.quantities[key]);
  if (r.quantities.contains("rows"))
    for (const Json& row : r.quantities["rows"]) std::printf("  %s\n", row.dump().c_str());
  if (r.quantities.contains("violations")) printValue("violations", r.quantities["violations"]);
  for (const auto& c : r.checks)
    std::printf("  [%s] %-36s expected %.17g got %.17g (tol %.1e)\n", c.pass ? "pass" : "FAIL",
                c.name.c_str(), c.expected, c.actual, c.tol);
  if (r.seconds) std::printf("  time %.3f s\n", *r.seconds);
}

ldoi::Ensemble loadEnsemble(const std::string& ensemblePath, const std::string& specPath) {
  if (!ensemblePath.empty()) return ldoi::io::ensembleFromJson(ldoi::io::readJsonFile(ensemblePath));
  if (!specPath.empty())
    return ldoi::uniformEnsemble(ldoi::io::specFromJson(ldoi::io::readJsonFile(specPath)));
  throw ldoi::ParseError("either --ensemble or --spec is required");
}

std::vector<int> parseSigma(const std::string& text, int n) {
  std::vector<int> sigma;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      sigma.push_back(std::stoi(item) - 1);
    } catch (const std::exception&) {
      throw ldoi::ParseError("--sigma must be a comma-separated list of integers");
    }
  }
  ldoi::checkPermutation(sigma, n);
  return sigma;
}

int run(int argc, char** argv) {
  CLI::App app{"Distinguishability of LDOI states under local, separable and PPT measurements"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--tol-feas", g.tolFeas, "SDP feasibility tolerance")->capture_default_str();
  app.add_option("--tol-gap", g.tolGap, "SDP duality-gap tolerance")->capture_default_str();
  app.add_flag("--json", g.json, "machine-readable output");
  app.add_option("--seed", g.seed, "seed for random generators")->capture_default_str();

  int status = 0;

  // basis
  auto* basis = app.add_subcommand("basis", "build or recognize orthonormal LDOI bases");
  basis->require_subcommand(1);
  std::string specPath, vectorsPath;
  auto* basisBuild = basis->add_subcommand("build", "basis vectors of a (U, A) spec");
  basisBuild->add_option("--spec", specPath, "spec JSON")->required();
  basisBuild->callback([&] {
    const ldoi::LdoiBasisSpec spec = ldoi::io::specFromJson(ldoi::io::readJsonFile(specPath));
    emit(ldoi::io::basisToJson(spec.n, ldoi::buildBasis(spec)));
  });
  auto* basisCheck = basis->add_subcommand("check", "recognize a list of vectors as an LDOI basis");
  basisCheck->add_option("--vectors", vectorsPath, "basis vector JSON")->required();
  basisCheck->callback([&] {
    const auto vectors = ldoi::io::basisVectorsFromJson(ldoi::io::readJsonFile(vectorsPath));
    try {
      const ldoi::RecognizedBasis rb = ldoi::recognizeBasis(vectors);
      Json labels = Json::array();
      for (auto [i, j] : rb.labels) labels.push_back({i + 1, j + 1});
      emit(Json{{"ldoi_basis", true}, {"spec", ldoi::io::toJson(rb.spec)}, {"labels", labels}});
    } catch (const ldoi::NotLdoiBasis& ex) {
      emit(Json{{"ldoi_basis", false}, {"vector", ex.vectorIndex()}, {"reason", ex.what()}});
      status = 1;
    }
  });

  // bounds
  auto* bounds = app.add_subcommand("bounds", "closed-form and convex bounds for a basis spec");
  bounds->add_option("--spec", specPath, "spec JSON")->required();
  bounds->callback([&] {
    const ldoi::LdoiBasisSpec spec = ldoi::io::specFromJson(ldoi::io::readJsonFile(specPath));
    Json q = ldoi::report::analyzeSpec(spec, g.settings(), false);
    if (!q["diagonal_certificate"]["feasible"].get<bool>()) status = 1;
    if (g.json) {
      emit(q);
      return;
    }
    for (const char* key : {"locc_lb", "ppt_ub_opt", "ppt_ub_weak", "closed_form", "gap_bound"})
      printValue(key, q[key]);
    printValue("certificate_c", q["certificate_c"]["c"]);
    printValue("assignment", q["assignment"]["permutation"]);
  });

  // solve
  auto* solve = app.add_subcommand("solve", "PPT discrimination SDPs");
  solve->require_subcommand(1);
  std::string ensemblePath, povmOut, certOut;
  auto* solvePpt = solve->add_subcommand("ppt", "optimal PPT success probability");
  auto* solveUnamb = solve->add_subcommand("unambiguous", "unambiguous PPT discrimination feasibility");
  for (auto* sc : {solvePpt, solveUnamb}) {
    sc->add_option("--ensemble", ensemblePath, "ensemble JSON");
    sc->add_option("--spec", specPath, "spec JSON (uniform basis ensemble)");
    sc->add_option("--povm-out", povmOut, "write the measurement found to this file");
  }
  solvePpt->add_option("--certificate-out", certOut, "write the dual certificate to this file");
  solvePpt->callback([&] {
    const ldoi::Ensemble e = loadEnsemble(ensemblePath, specPath);
    const ldoi::PptSolveResult r = ldoi::solvePptPrimalLdoi(e, g.settings());
    const ldoi::CertificateCheck chk = ldoi::checkDualCertificate(r.certificate, e, 1e-6);
    if (r.solution.status != ldoi::sdp::SdpStatus::Optimal || !chk.feasible) status = 1;
    if (!povmOut.empty()) std::ofstream(povmOut) << ldoi::io::dump(ldoi::io::toJson(r.povm)) << "\n";
    if (!certOut.empty()) std::ofstream(certOut) << ldoi::io::dump(ldoi::io::toJson(r.certificate)) << "\n";
    Json j = ldoi::io::toJson(r.solution);
    j["certificate"] = {{"feasible", chk.feasible}, {"trace", chk.bound}, {"worst_eigenvalue", chk.worstEigenvalue}};
    if (g.json) {
      emit(j);
      return;
    }
    for (const char* key : {"status", "primal_value", "dual_value", "gap", "iterations"}) printValue(key, j[key]);
    printValue("certificate_feasible", j["certificate"]["feasible"]);
  });
  solveUnamb->callback([&] {
    const ldoi::Ensemble e = loadEnsemble(ensemblePath, specPath);
    const ldoi::UnambiguousResult r = ldoi::unambiguousPptFeasible(e, g.settings());
    if (!r.feasible) status = 1;
    if (!povmOut.empty() && r.feasible)
      std::ofstream(povmOut) << ldoi::io::dump(ldoi::io::toJson(r.povm)) << "\n";
    Json j = ldoi::io::toJson(r.solution);
    j["feasible"] = r.feasible;
    j["min_success"] = r.minSuccess;
    j["reason"] = r.reason;
    if (g.json) {
      emit(j);
      return;
    }
    for (const char* key : {"feasible", "min_success", "status", "iterations", "reason"}) printValue(key, j[key]);
  });

  // certify
  std::string certPath;
  auto* certify = app.add_subcommand("certify", "check a dual certificate against an ensemble");
  certify->set_help_flag("--help", "print this help and exit");  // frees -h / --h
  certify->add_option("--h", certPath, "certificate JSON")->required();
  certify->add_option("--ensemble", ensemblePath, "ensemble JSON");
  certify->add_option("--spec", specPath, "spec JSON (uniform basis ensemble)");
  double certTol = 1e-9;
  certify->add_option("--tol", certTol, "eigenvalue tolerance")->capture_default_str();
  certify->callback([&] {
    const ldoi::Ensemble e = loadEnsemble(ensemblePath, specPath);
    const ldoi::DualCertificate c = ldoi::io::certificateFromJson(ldoi::io::readJsonFile(certPath));
    const ldoi::CertificateCheck chk = ldoi::checkDualCertificate(c, e, certTol);
    if (!chk.feasible) status = 1;
    const Json j{{"feasible", chk.feasible}, {"bound", chk.bound}, {"worst_eigenvalue", chk.worstEigenvalue}};
    if (g.json) {
      emit(j);
      return;
    }
    for (const char* key : {"feasible", "bound", "worst_eigenvalue"}) printValue(key, j[key]);
  });

  // povm
  auto* povm = app.add_subcommand("povm", "explicit measurements");
  povm->require_subcommand(1);
  std::string sigmaText, povmPath, className = "ppt";
  int n = 3;
  auto* povmLocal = povm->add_subcommand("local", "product measurement for a spec and permutation");
  povmLocal->add_option("--spec", specPath, "spec JSON")->required();
  povmLocal->add_option("--sigma", sigmaText, "1-based permutation such as \"2,1,3\" (default: optimal)");
  povmLocal->callback([&] {
    const ldoi::LdoiBasisSpec spec = ldoi::io::specFromJson(ldoi::io::readJsonFile(specPath));
    const std::vector<int> sigma = sigmaText.empty() ? ldoi::loccLowerBound(spec).assignment.permutation
                                                     : parseSigma(sigmaText, spec.n);
    emit(ldoi::io::toJson(ldoi::buildLocalPovm(spec, sigma)));
  });
  auto* povmFourier = povm->add_subcommand("fourier", "PPT measurement for the Fourier basis");
  povmFourier->add_option("--n", n, "local dimension (>= 3)")->required();
  povmFourier->callback([&] { emit(ldoi::io::toJson(ldoi::buildFourierPptPovm(n))); });
  auto* povmVerify = povm->add_subcommand("verify", "completeness, positivity and class checks");
  povmVerify->add_option("--povm", povmPath, "POVM JSON")->required();
  povmVerify->add_option("--class", className, "local-product | ppt | unverified")->capture_default_str();
  double verifyTol = 1e-10;
  povmVerify->add_option("--tol", verifyTol, "completeness and eigenvalue tolerance")->capture_default_str();
  povmVerify->callback([&] {
    const ldoi::Povm p = ldoi::io::povmFromJson(ldoi::io::readJsonFile(povmPath));
    const ldoi::PovmReport rep = ldoi::verifyPovm(p, ldoi::povmClassFromString(className), verifyTol);
    if (!rep.pass) status = 1;
    const Json j = ldoi::io::toJson(rep);
    if (g.json) {
      emit(j);
      return;
    }
    for (const char* key : {"required_class", "pass", "completeness_residual", "positive", "ppt",
                            "local_product", "separable_certified"})
      printValue(key, j[key]);
  });
  auto* povmScore = povm->add_subcommand("score", "success probability on an ensemble");
  povmScore->add_option("--povm", povmPath, "POVM JSON")->required();
  povmScore->add_option("--ensemble", ensemblePath, "ensemble JSON");
  povmScore->add_option("--spec", specPath, "spec JSON (uniform basis ensemble)");
  povmScore->callback([&] {
    const ldoi::Povm p = ldoi::io::povmFromJson(ldoi::io::readJsonFile(povmPath));
    const ldoi::SuccessBreakdown s = ldoi::successProbability(p, loadEnsemble(ensemblePath, specPath));
    const Json j{{"success", s.total}, {"per_outcome", s.perOutcome}};
    if (g.json) {
      emit(j);
      return;
    }
    printValue("success", j["success"]);
  });

  // reproduce
  std::string exampleId;
  auto* reproduce = app.add_subcommand("reproduce", "recompute a reference example");
  reproduce->add_option("id", exampleId, "example id or 'all'")->required();
  reproduce->callback([&] {
    std::vector<std::string> ids = exampleId == "all" ? ldoi::report::reproduceIds()
                                                      : std::vector<std::string>{exampleId};
    Json all = Json::array();
    for (const std::string& id : ids) {
      const ldoi::report::RunReport r = ldoi::report::reproduce(id, g.settings());
      if (!r.pass()) status = 1;
      if (g.json)
        all.push_back(r.toJson());
      else
        printReport(r);
    }
    if (g.json) emit(ids.size() == 1 ? all[0] : all);
  });

  // sweep
  ldoi::report::SweepOptions sw;
  bool noSdp = false, timings = false;
  auto* sweep = app.add_subcommand("sweep", "randomized invariant campaign over basis specs");
  sweep->add_option("--n", sw.n, "local dimension")->required();
  sweep->add_option("--count", sw.count, "number of random specs")->required();
  sweep->add_option("--threads", sw.threads, "worker threads")->capture_default_str();
  sweep->add_flag("--no-sdp", noSdp, "bounds only");
  sweep->add_flag("--timings", timings, "include wall-clock time (breaks byte-identical output)");
  sweep->callback([&] {
    sw.seed = g.seed;
    sw.withSdp = !noSdp;
    sw.settings = g.settings();
    const auto start = std::chrono::steady_clock::now();
    ldoi::report::RunReport r = ldoi::report::sweep(sw);
    if (timings) r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!r.pass()) status = 1;
    if (g.json)
      emit(r.toJson());
    else
      printReport(r);
  });

  // state presets
  auto* state = app.add_subcommand("state", "named LDOI states as JSON triples");
  state->require_subcommand(1);
  double p = 0.5;
  int i = 1, j = 1;
  auto* werner = state->add_subcommand("werner", "Werner state");
  werner->add_option("--n", n)->required();
  werner->add_option("--p", p)->required();
  werner->callback([&] { emit(ldoi::io::toJson(ldoi::wernerTriple(n, p))); });
  auto* maxent = state->add_subcommand("maxent", "maximally entangled state");
  maxent->add_option("--n", n)->required();
  maxent->callback([&] { emit(ldoi::io::toJson(ldoi::maximallyEntangledTriple(n))); });
  auto* product = state->add_subcommand("product", "product basis state |i>|j> (1-based)");
  product->add_option("--n", n)->required();
  product->add_option("--i", i)->required();
  product->add_option("--j", j)->required();
  product->callback([&] { emit(ldoi::io::toJson(ldoi::productBasisTriple(n, i - 1, j - 1))); });
  std::array<std::string, 6> xs{"0.25", "0.25", "0.25", "0.25", "0", "0"};
  auto* xstate = state->add_subcommand("xstate", "two-qubit X-state; complex entries as re or re,im");
  const char* xNames[] = {"--rho11", "--rho22", "--rho33", "--rho44", "--rho14", "--rho23"};
  for (int k = 0; k < 6; ++k) xstate->add_option(xNames[k], xs[k])->capture_default_str();
  xstate->callback([&] {
    auto parse = [](const std::string& s) {
      const auto comma = s.find(',');
      try {
        if (comma == std::string::npos) return ldoi::Complex(std::stod(s), 0.0);
        return ldoi::Complex(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
      } catch (const std::exception&) {
        throw ldoi::ParseError("cannot parse complex value '" + s + "'");
      }
    };
    emit(ldoi::io::toJson(ldoi::xStateTriple(parse(xs[0]), parse(xs[1]), parse(xs[2]), parse(xs[3]),
                                             parse(xs[4]), parse(xs[5]))));
  });

  // spec presets
  auto* spec = app.add_subcommand("spec", "preset basis specs as JSON");
  spec->require_subcommand(1);
  spec->add_subcommand("bell", "two-qubit Bell basis")->callback([&] { emit(ldoi::io::toJson(ldoi::bellSpec())); });
  spec->add_subcommand("counterexample", "3x3 basis whose c-bound is not attained")
      ->callback([&] { emit(ldoi::io::toJson(ldoi::counterexampleSpec())); });
  auto* specProduct = spec->add_subcommand("product", "computational product basis");
  specProduct->add_option("--n", n)->required();
  specProduct->callback([&] { emit(ldoi::io::toJson(ldoi::productSpec(n))); });
  auto* specFourier = spec->add_subcommand("fourier", "Fourier U with a_ij = 1/sqrt(2)");
  specFourier->add_option("--n", n)->required();
  specFourier->callback([&] { emit(ldoi::io::toJson(ldoi::fourierSpec(n))); });
  auto* specRandom = spec->add_subcommand("random", "Haar U with random pair amplitudes (uses --seed)");
  specRandom->add_option("--n", n)->required();
  specRandom->callback([&] {
    ldoi::Rng rng = ldoi::seededRng(g.seed);
    emit(ldoi::io::toJson(ldoi::randomSpec(n, rng)));
  });

  // ensembles
  auto* ensemble = app.add_subcommand("ensemble", "ensembles as JSON");
  ensemble->require_subcommand(1);
  int count = 4;
  auto* ensUniform = ensemble->add_subcommand("uniform", "uniform ensemble of a basis spec");
  ensUniform->add_option("--spec", specPath)->required();
  ensUniform->callback([&] {
    emit(ldoi::io::toJson(ldoi::uniformEnsemble(ldoi::io::specFromJson(ldoi::io::readJsonFile(specPath)))));
  });
  auto* ensRandom = ensemble->add_subcommand("random", "random mixed LDOI states (uses --seed)");
  ensRandom->add_option("--n", n)->required();
  ensRandom->add_option("--count", count)->required();
  ensRandom->callback([&] {
    ldoi::Rng rng = ldoi::seededRng(g.seed);
    emit(ldoi::io::toJson(ldoi::randomEnsemble(n, count, rng)));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ldoi::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ldoi::DomainError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ldoi::DimensionMismatch& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ldoi::NotHermitian& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ldoi::InvalidPermutation& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ldoi::NotLdoi& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
