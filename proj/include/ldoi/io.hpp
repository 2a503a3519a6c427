#pragma once

// JSON encodings.
//
//   complex      [re, im]
//   matrix       {"rows": r, "cols": c, "entries": [[re, im], ...]}   row-major
//   triple       {"n": n, "a": matrix, "b": matrix, "c": matrix}
//   spec         {"n": n, "u": matrix, "a": matrix}
//   basis vector {"label": [i, j], "amplitudes": [[index, [re, im]], ...]}  label 1-based,
//                index is the 0-based storage position i*n + j
//   ensemble     {"priors": [...], "states": [triple, ...]}
//   povm         {"class": "ppt", "labels": [...], "elements": [triple, ...]}  labels 1-based,
//                0 marks the inconclusive outcome
//   certificate  {"h": triple, "qs": [triple, ...]}   "qs" optional

#include "ldoi/ppt_sdp.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace ldoi::io {

using Json = nlohmann::json;

namespace detail {

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline int intField(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) throw ParseError(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

inline double number(const Json& v, const char* what) {
  if (!v.is_number()) throw ParseError(std::string(what) + " must be a number");
  return v.get<double>();
}

}  // namespace detail

inline Json toJson(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complexFromJson(const Json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2) throw ParseError("complex entry must be [re, im]");
  return Complex(detail::number(j[0], "real part"), detail::number(j[1], "imaginary part"));
}

inline Json toJson(const ComplexMatrix& m) {
  Json entries = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back(toJson(m(r, c)));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

inline ComplexMatrix matrixFromJson(const Json& j) {
  const int rows = detail::intField(j, "rows");
  const int cols = detail::intField(j, "cols");
  const Json& entries = detail::field(j, "entries");
  if (rows < 0 || cols < 0) throw ParseError("matrix dimensions must be non-negative");
  if (!entries.is_array() || entries.size() != std::size_t(rows) * cols)
    throw ParseError("matrix needs rows*cols entries");
  ComplexMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = complexFromJson(entries[std::size_t(r) * cols + c]);
  return m;
}

inline Json toJson(const LdoiTriple& t) {
  return Json{{"n", t.n()}, {"a", toJson(t.a())}, {"b", toJson(t.b())}, {"c", toJson(t.c())}};
}

inline LdoiTriple tripleFromJson(const Json& j) {
  const int n = detail::intField(j, "n");
  LdoiTriple t(matrixFromJson(detail::field(j, "a")), matrixFromJson(detail::field(j, "b")),
               matrixFromJson(detail::field(j, "c")));
  if (t.n() != n) throw ParseError("triple field 'n' disagrees with its matrices");
  return t;
}

inline Json toJson(const LdoiBasisSpec& s) {
  return Json{{"n", s.n}, {"u", toJson(s.u)}, {"a", toJson(s.a)}};
}

inline LdoiBasisSpec specFromJson(const Json& j) {
  LdoiBasisSpec s{detail::intField(j, "n"), matrixFromJson(detail::field(j, "u")),
                  matrixFromJson(detail::field(j, "a"))};
  s.validate();
  return s;
}

inline Json toJson(const BasisVector& v) {
  Json amps = Json::array();
  for (auto [index, amp] : v.amplitudes) amps.push_back(Json::array({index, toJson(amp)}));
  return Json{{"label", Json::array({v.i + 1, v.j + 1})}, {"amplitudes", amps}};
}

inline BasisVector basisVectorFromJson(const Json& j, int n) {
  const Json& label = detail::field(j, "label");
  if (!label.is_array() || label.size() != 2) throw ParseError("basis label must be [i, j]");
  BasisVector v{label[0].get<int>() - 1, label[1].get<int>() - 1, {}};
  if (v.i < 0 || v.i >= n || v.j < 0 || v.j >= n) throw ParseError("basis label out of range");
  for (const Json& a : detail::field(j, "amplitudes")) {
    if (!a.is_array() || a.size() != 2 || !a[0].is_number_integer())
      throw ParseError("amplitude must be [index, [re, im]]");
    const int index = a[0].get<int>();
    if (index < 0 || index >= n * n) throw ParseError("amplitude index out of range");
    v.amplitudes.emplace_back(index, complexFromJson(a[1]));
  }
  return v;
}

inline Json basisToJson(int n, const std::vector<BasisVector>& basis) {
  Json vectors = Json::array();
  for (const BasisVector& v : basis) vectors.push_back(toJson(v));
  return Json{{"n", n}, {"vectors", vectors}};
}

/// Vectors from either {"n", "vectors": [...]} or a bare list; n is inferred from the count.
inline std::vector<ComplexVector> basisVectorsFromJson(const Json& j) {
  const Json& list = j.is_object() ? detail::field(j, "vectors") : j;
  if (!list.is_array()) throw ParseError("expected a list of basis vectors");
  const int count = static_cast<int>(list.size());
  const int n = static_cast<int>(std::lround(std::sqrt(double(count))));
  if (n * n != count) throw ParseError("the number of vectors must be a perfect square");
  std::vector<ComplexVector> out;
  for (const Json& v : list) out.push_back(basisVectorFromJson(v, n).dense(n));
  return out;
}

inline Json toJson(const Ensemble& e) {
  Json states = Json::array();
  for (const LdoiTriple& s : e.states) states.push_back(toJson(s));
  return Json{{"priors", e.priors}, {"states", states}};
}

inline Ensemble ensembleFromJson(const Json& j) {
  Ensemble e;
  for (const Json& p : detail::field(j, "priors")) e.priors.push_back(detail::number(p, "prior"));
  for (const Json& s : detail::field(j, "states")) e.states.push_back(tripleFromJson(s));
  e.validate();
  return e;
}

inline Json toJson(const Povm& p) {
  Json elements = Json::array();
  for (const LdoiTriple& t : p.elements) elements.push_back(toJson(t));
  Json labels = Json::array();
  for (int l : p.labels) labels.push_back(l == kInconclusive ? 0 : l + 1);
  return Json{{"class", toString(p.classTag)}, {"labels", labels}, {"elements", elements}};
}

inline Povm povmFromJson(const Json& j) {
  Povm p;
  p.classTag = j.contains("class") ? povmClassFromString(j.at("class").get<std::string>())
                                   : PovmClass::Unverified;
  for (const Json& t : detail::field(j, "elements")) p.elements.push_back(tripleFromJson(t));
  if (j.contains("labels")) {
    for (const Json& l : j.at("labels")) {
      const int v = l.get<int>();
      p.labels.push_back(v == 0 ? kInconclusive : v - 1);
    }
  } else {
    p.labels = identityLabels(p.size());
  }
  if (p.labels.size() != p.elements.size()) throw ParseError("POVM labels and elements differ in length");
  return p;
}

inline Json toJson(const DualCertificate& c) {
  Json j{{"h", toJson(c.h)}, {"objective", c.objective()}};
  if (c.qs) {
    Json qs = Json::array();
    for (const LdoiTriple& q : *c.qs) qs.push_back(toJson(q));
    j["qs"] = qs;
  }
  return j;
}

inline DualCertificate certificateFromJson(const Json& j) {
  DualCertificate c{tripleFromJson(detail::field(j, "h")), std::nullopt};
  if (j.contains("qs")) {
    std::vector<LdoiTriple> qs;
    for (const Json& q : j.at("qs")) qs.push_back(tripleFromJson(q));
    c.qs = std::move(qs);
  }
  return c;
}

inline Json toJson(const sdp::SdpSolution& s) {
  return Json{{"status", sdp::toString(s.status)},
              {"primal_value", s.primalValue},
              {"dual_value", s.dualValue},
              {"gap", s.gap},
              {"primal_residual", s.primalResidual},
              {"dual_residual", s.dualResidual},
              {"iterations", s.iterations}};
}

inline Json toJson(const CertificateC& c) { return Json{{"c", c.c}, {"objective", c.objective}}; }

inline Json toJson(const AssignmentResult& a) {
  std::vector<int> oneBased;
  for (int v : a.permutation) oneBased.push_back(v + 1);
  return Json{{"permutation", oneBased}, {"value", a.value}};
}

inline Json toJson(const PovmReport& r) {
  return Json{{"required_class", toString(r.required)},
              {"pass", r.pass},
              {"completeness_residual", r.completenessResidual},
              {"complete", r.complete},
              {"positive", r.positive},
              {"ppt", r.ppt},
              {"local_product", r.localProduct},
              {"separable_certified", r.separableCertified},
              {"min_eigenvalues", r.minEigenvalues},
              {"ppt_min_eigenvalues", r.pptMinEigenvalues}};
}

inline Json readJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError("'" + path + "': " + ex.what());
  }
}

/// Serialization with every double printed at 17 significant digits.
inline std::string dump(const Json& j, int indent = 2) {
  // nlohmann prints the shortest round-trip form; re-encoding through a fixed format keeps
  // output stable regardless of that choice.
  std::function<void(std::ostringstream&, const Json&, int)> write = [&](std::ostringstream& os,
                                                                        const Json& v, int depth) {
    const std::string pad = indent > 0 ? std::string(std::size_t(indent) * (depth + 1), ' ') : "";
    const std::string closePad = indent > 0 ? std::string(std::size_t(indent) * depth, ' ') : "";
    const char* nl = indent > 0 ? "\n" : "";
    if (v.is_number_float() && !std::isfinite(v.get<double>())) {
      os << "null";
    } else if (v.is_number_float()) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
      os << buf;
    } else if (v.is_object()) {
      if (v.empty()) { os << "{}"; return; }
      os << "{" << nl;
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) os << "," << nl;
        first = false;
        os << pad << Json(it.key()).dump() << (indent > 0 ? ": " : ":");
        write(os, it.value(), depth + 1);
      }
      os << nl << closePad << "}";
    } else if (v.is_array()) {
      if (v.empty()) { os << "[]"; return; }
      // short numeric arrays stay on one line
      bool flat = v.size() <= 4;
      for (const Json& x : v) flat = flat && x.is_primitive();
      os << "[";
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) os << (flat ? ", " : ",");
        if (!flat) os << nl << pad;
        write(os, v[k], depth + 1);
      }
      if (!flat) os << nl << closePad;
      os << "]";
    } else {
      os << v.dump();
    }
  };
  std::ostringstream os;
  write(os, j, 0);
  return os.str();
}

}  // namespace ldoi::io
