#pragma once

// Named reproductions of the reference examples and randomized sweeps, each
// producing a RunReport of computed quantities and pass/fail checks.

#include "ldoi/io.hpp"
#include "ldoi/random.hpp"

#include <atomic>
#include <chrono>
#include <thread>

namespace ldoi::report {

inline constexpr const char* kToolVersion = "ldoi 0.1.0";

struct Check {
  std::string name;
  double expected = 0.0;
  double actual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct RunReport {
  std::string id;
  io::Json input;
  io::Json quantities = io::Json::object();
  std::vector<Check> checks;
  std::optional<double> seconds;
  sdp::SdpSettings settings;

  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }

  void check(const std::string& name, double expected, double actual, double tol) {
    checks.push_back(Check{name, expected, actual, tol, std::abs(expected - actual) <= tol});
  }

  void require(const std::string& name, bool ok) {
    checks.push_back(Check{name, 1.0, ok ? 1.0 : 0.0, 0.0, ok});
  }

  io::Json toJson() const {
    io::Json cs = io::Json::array();
    for (const Check& c : checks)
      cs.push_back({{"name", c.name}, {"expected", c.expected}, {"actual", c.actual},
                    {"tol", c.tol}, {"pass", c.pass}});
    io::Json j{{"id", id},
               {"tool_version", kToolVersion},
               {"input", input},
               {"tolerances", {{"feas", settings.tolFeas}, {"gap", settings.tolGap}}},
               {"quantities", quantities},
               {"checks", cs},
               {"pass", pass()}};
    if (seconds) j["timings"] = {{"total_seconds", *seconds}};
    return j;
  }
};

/// All bounds, the SDP optimum and its certificates for the uniform ensemble of a spec.
inline io::Json analyzeSpec(const LdoiBasisSpec& spec, const sdp::SdpSettings& settings, bool withSdp = true) {
  const LoccBound lb = loccLowerBound(spec);
  const OptCBound ub = pptUpperBoundOptC(spec);
  const double weak = pptUpperBoundWeak(spec);
  const std::optional<double> closed = closedFormLargeU(spec);
  const Ensemble e = uniformEnsemble(spec);
  const DualCertificate diag = buildDiagonalCertificate(spec, ub.certificate);
  const CertificateCheck diagCheck = checkDualCertificate(diag, e, 1e-9);
  io::Json q{{"locc_lb", lb.value},
             {"ppt_ub_opt", ub.value},
             {"ppt_ub_weak", weak},
             {"closed_form", closed ? io::Json(*closed) : io::Json(nullptr)},
             {"gap_bound", gapBound(spec.n)},
             {"certificate_c", io::toJson(ub.certificate)},
             {"assignment", io::toJson(lb.assignment)},
             {"local_povm_success", successProbability(lb.measurement, e).total},
             {"diagonal_certificate", {{"feasible", diagCheck.feasible},
                                       {"trace", diagCheck.bound},
                                       {"worst_eigenvalue", diagCheck.worstEigenvalue}}}};
  if (withSdp) {
    const PptSolveResult r = solvePptPrimalLdoi(e, settings);
    const CertificateCheck dualCheck = checkDualCertificate(r.certificate, e, 1e-6);
    q["opt_ppt_sdp"] = r.value();
    q["gap"] = r.solution.gap;
    q["sdp"] = io::toJson(r.solution);
    q["sdp_certificate"] = {{"feasible", dualCheck.feasible},
                            {"trace", dualCheck.bound},
                            {"worst_eigenvalue", dualCheck.worstEigenvalue}};
    q["sdp_povm_pass"] = verifyPovm(r.povm, PovmClass::Ppt, 1e-8).pass;
  }
  return q;
}

inline std::vector<std::string> reproduceIds() {
  return {"bell",      "product",   "fourier-n3",         "fourier-n4",
          "fourier-n5", "fourier-n6", "counterexample-3x3", "werner-ppt-threshold",
          "gap-table"};
}

/// Smallest p in [0, 1] with wernerTriple(n, p) PPT, by bisection to width tol.
inline double wernerPptThreshold(int n, double tol = 1e-9) {
  double lo = 0.0, hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (isPpt(wernerTriple(n, mid), 1e-13) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace detail {

inline void specChecks(RunReport& r, const io::Json& q, double all, double tol) {
  r.check("locc_lb", all, q["locc_lb"].get<double>(), 1e-9);
  r.check("ppt_ub_opt", all, q["ppt_ub_opt"].get<double>(), 1e-9);
  r.check("ppt_ub_weak", all, q["ppt_ub_weak"].get<double>(), 1e-9);
  r.check("opt_ppt_sdp", all, q["opt_ppt_sdp"].get<double>(), tol);
  r.require("sdp_certificate_feasible", q["sdp_certificate"]["feasible"].get<bool>());
  r.require("sdp_povm_ppt", q["sdp_povm_pass"].get<bool>());
}

}  // namespace detail

inline RunReport reproduce(const std::string& id, const sdp::SdpSettings& settings = {}) {
  const auto start = std::chrono::steady_clock::now();
  RunReport r;
  r.id = id;
  r.settings = settings;
  if (id == "bell") {
    const LdoiBasisSpec spec = bellSpec();
    r.input = io::toJson(spec);
    r.quantities = analyzeSpec(spec, settings);
    detail::specChecks(r, r.quantities, 0.5, 1e-6);
    r.check("closed_form", 0.5, r.quantities["closed_form"].get<double>(), 1e-9);
    const PovmReport proj = verifyPovm(basisProjectiveMeasurement(spec), PovmClass::Ppt);
    r.quantities["projective_measurement_ppt"] = proj.ppt;
    r.require("projective_measurement_not_ppt", !proj.ppt);
  } else if (id == "product") {
    const LdoiBasisSpec spec = productSpec(3);
    r.input = io::toJson(spec);
    r.quantities = analyzeSpec(spec, settings);
    detail::specChecks(r, r.quantities, 1.0, 1e-6);
    const UnambiguousResult u = unambiguousPptFeasible(uniformEnsemble(spec), settings);
    r.quantities["unambiguous_feasible"] = u.feasible;
    r.require("unambiguous_feasible", u.feasible);
  } else if (id.rfind("fourier-n", 0) == 0) {
    int n = 0;
    try {
      n = std::stoi(id.substr(9));
    } catch (const std::exception&) {
      throw DomainError("unknown example id '" + id + "'");
    }
    if (n < 3 || n > 6) throw DomainError("unknown example id '" + id + "'");
    const LdoiBasisSpec spec = fourierSpec(n);
    r.input = io::toJson(spec);
    r.quantities = analyzeSpec(spec, settings);
    r.check("locc_lb", universalLowerBound(n), r.quantities["locc_lb"].get<double>(), 1e-12);
    r.check("ppt_ub_opt", 0.5, r.quantities["ppt_ub_opt"].get<double>(), 1e-9);
    r.check("opt_ppt_sdp", 0.5, r.quantities["opt_ppt_sdp"].get<double>(), 1e-6);
    r.require("sdp_certificate_feasible", r.quantities["sdp_certificate"]["feasible"].get<bool>());
    r.require("closed_form_not_applicable", r.quantities["closed_form"].is_null());
    const Povm povm = buildFourierPptPovm(n);
    const PovmReport pr = verifyPovm(povm, PovmClass::Ppt);
    r.quantities["fourier_povm"] = {{"success", successProbability(povm, uniformEnsemble(spec)).total},
                                    {"verification", io::toJson(pr)}};
    r.check("fourier_povm_success", 0.5, r.quantities["fourier_povm"]["success"].get<double>(), 1e-12);
    r.require("fourier_povm_ppt", pr.pass);
    r.require("fourier_povm_separable", pr.separableCertified);
  } else if (id == "counterexample-3x3") {
    const LdoiBasisSpec spec = counterexampleSpec();
    r.input = io::toJson(spec);
    r.quantities = analyzeSpec(spec, settings);
    r.check("ppt_ub_opt", 44.0 / 75.0, r.quantities["ppt_ub_opt"].get<double>(), 1e-9);
    for (int i = 0; i < 3; ++i)
      r.check("c_" + std::to_string(i + 1), 12.0 / 25.0,
              r.quantities["certificate_c"]["c"][i].get<double>(), 1e-7);
    r.check("ppt_ub_weak", 89.0 / 150.0, r.quantities["ppt_ub_weak"].get<double>(), 1e-9);
    r.check("locc_lb", 388.0 / 675.0, r.quantities["locc_lb"].get<double>(), 1e-9);
    r.check("opt_ppt_sdp", 26.0 / 45.0, r.quantities["opt_ppt_sdp"].get<double>(), 1e-6);
    r.check("diagonal_certificate_trace", 44.0 / 75.0,
            r.quantities["diagonal_certificate"]["trace"].get<double>(), 1e-9);
    r.require("diagonal_certificate_feasible", r.quantities["diagonal_certificate"]["feasible"].get<bool>());
    r.require("sdp_certificate_feasible", r.quantities["sdp_certificate"]["feasible"].get<bool>());
    r.require("bound_not_attained", r.quantities["ppt_ub_opt"].get<double>() >
                                        r.quantities["opt_ppt_sdp"].get<double>() + 1e-6);
  } else if (id == "werner-ppt-threshold") {
    r.input = {{"n", {3, 4}}};
    io::Json rows = io::Json::array();
    for (int n : {3, 4}) {
      const double p = wernerPptThreshold(n);
      rows.push_back({{"n", n}, {"threshold", p}});
      r.check("threshold_n" + std::to_string(n), 0.5, p, 1e-6);
    }
    r.quantities["rows"] = rows;
  } else if (id == "gap-table") {
    const std::vector<std::pair<int, double>> table = {
        {2, 0.0}, {3, 1.0 / 18}, {4, 1.0 / 16}, {5, 3.0 / 50}, {10, 1.0 / 25}, {20, 9.0 / 400}};
    r.input = {{"n", {2, 3, 4, 5, 10, 20}}};
    io::Json rows = io::Json::array();
    for (auto [n, expected] : table) {
      rows.push_back({{"n", n}, {"gap_bound", gapBound(n)}, {"universal_lower_bound", universalLowerBound(n)}});
      r.check("gap_n" + std::to_string(n), expected, gapBound(n), 1e-15);
    }
    int argmin = 2;
    for (int n = 3; n <= 50; ++n)
      if (universalLowerBound(n) < universalLowerBound(argmin)) argmin = n;
    r.quantities["rows"] = rows;
    r.quantities["universal_minimizer"] = {{"n", argmin}, {"value", universalLowerBound(argmin)}};
    r.check("universal_minimizer_n", 4, argmin, 0.0);
    r.check("universal_minimum", 7.0 / 16.0, universalLowerBound(argmin), 1e-15);
  } else {
    throw DomainError("unknown example id '" + id + "'");
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

struct SweepOptions {
  int n = 3;
  int count = 100;
  std::uint64_t seed = 1;
  int threads = 1;
  bool withSdp = true;
  sdp::SdpSettings settings;
};

/// Bounds (and optionally the SDP) for `count` random specs; violations of the ordering and
/// coincidence invariants are counted. Output depends only on the options.
inline RunReport sweep(const SweepOptions& opt) {
  require(opt.n >= 2, "sweep needs n >= 2");
  require(opt.count >= 0, "sweep count must be non-negative");
  require(opt.threads >= 1, "sweep needs at least one thread");
  std::vector<io::Json> rows(opt.count);
  std::vector<std::string> errors(opt.count);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next++; i < opt.count; i = next++) {
      try {
        Rng rng = seededRng(opt.seed, std::uint64_t(i));
        const LdoiBasisSpec spec = randomSpec(opt.n, rng);
        io::Json q = analyzeSpec(spec, opt.settings, opt.withSdp);
        q["index"] = i;
        rows[i] = std::move(q);
      } catch (const std::exception& ex) {
        errors[i] = ex.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < opt.threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  RunReport r;
  r.id = "sweep";
  r.settings = opt.settings;
  r.input = {{"n", opt.n}, {"count", opt.count}, {"seed", opt.seed}, {"sdp", opt.withSdp}};
  int sandwich = 0, gap = 0, largeU = 0, localPovm = 0, certificate = 0, twoQubit = 0, failures = 0;
  int largeUApplicable = 0;
  for (int i = 0; i < opt.count; ++i) {
    if (!errors[i].empty()) {
      ++failures;
      continue;
    }
    const io::Json& q = rows[i];
    const double lb = q["locc_lb"], ub = q["ppt_ub_opt"], weak = q["ppt_ub_weak"];
    bool ok = lb <= ub + 1e-9 && ub <= weak + 1e-9;
    if (opt.withSdp) {
      const double s = q["opt_ppt_sdp"];
      ok = ok && lb <= s + 1e-7 && s <= ub + 1e-7;
      if (!q["sdp_certificate"]["feasible"].get<bool>() || q["sdp"]["status"] != "optimal") ++certificate;
      if (opt.n == 2 && std::abs(s - q["closed_form"].get<double>()) > 1e-6) ++twoQubit;
    }
    if (!ok) ++sandwich;
    if (ub - lb > gapBound(opt.n) + 1e-9) ++gap;
    if (std::abs(q["local_povm_success"].get<double>() - lb) > 1e-10) ++localPovm;
    if (!q["closed_form"].is_null()) {
      ++largeUApplicable;
      const double cf = q["closed_form"];
      bool same = std::abs(cf - lb) <= 1e-6 && std::abs(cf - ub) <= 1e-6;
      if (opt.withSdp) same = same && std::abs(cf - q["opt_ppt_sdp"].get<double>()) <= 1e-6;
      if (!same) ++largeU;
    }
  }
  io::Json list = io::Json::array();
  for (int i = 0; i < opt.count; ++i)
    list.push_back(errors[i].empty() ? rows[i] : io::Json{{"index", i}, {"error", errors[i]}});
  r.quantities["specs"] = list;
  r.quantities["violations"] = {{"sandwich", sandwich},
                                {"gap", gap},
                                {"large_u", largeU},
                                {"local_povm", localPovm},
                                {"certificate", certificate},
                                {"two_qubit_closed_form", twoQubit},
                                {"errors", failures}};
  r.quantities["large_u_applicable"] = largeUApplicable;
  r.check("sandwich_violations", 0, sandwich, 0);
  r.check("gap_violations", 0, gap, 0);
  r.check("large_u_violations", 0, largeU, 0);
  r.check("local_povm_violations", 0, localPovm, 0);
  r.check("certificate_violations", 0, certificate, 0);
  if (opt.n == 2 && opt.withSdp) r.check("two_qubit_closed_form_violations", 0, twoQubit, 0);
  r.check("errors", 0, failures, 0);
  return r;
}

}  // namespace ldoi::report
