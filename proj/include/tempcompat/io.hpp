// Copyright 2026 The tempcompat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// JSON documents:
//
//   {"schema_version": "1.0", "kind": <kind>, "payload": {...}}
//
// Complex numbers are [re, im] pairs and matrices are row-major arrays of
// rows. Unknown fields are rejected. Requires nlohmann/json.

#include <initializer_list>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "tempcompat/retrodiction.hpp"

namespace tempcompat::io {

using Json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1.0";

/// Malformed document. Messages name the offending field.
class FormatError : public Error {
 public:
  using Error::Error;
};

enum class Kind { state, channel, ensemble, correlations, report };

inline std::string to_string(Kind k) {
  switch (k) {
    case Kind::state: return "state";
    case Kind::channel: return "channel";
    case Kind::ensemble: return "ensemble";
    case Kind::correlations: return "correlations";
    case Kind::report: return "report";
  }
  return "unknown";
}

inline Kind kind_from_string(const std::string& s) {
  for (Kind k : {Kind::state, Kind::channel, Kind::ensemble, Kind::correlations, Kind::report})
    if (to_string(k) == s) return k;
  throw FormatError("document: unknown kind \"" + s + "\"");
}

struct Document {
  Kind kind = Kind::state;
  Json payload;
};

namespace detail {

inline void require_object(const Json& j, const std::string& where,
                           std::initializer_list<const char*> required,
                           std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) throw FormatError(where + ": expected an object");
  std::set<std::string> known;
  for (const char* k : required) {
    known.insert(k);
    if (!j.contains(k)) throw FormatError(where + ": missing field \"" + k + "\"");
  }
  for (const char* k : optional) known.insert(k);
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) {
      throw FormatError(where + ": unknown field \"" + item.key() + "\"");
    }
  }
}

inline double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw FormatError(where + ": expected a number");
  return j.get<double>();
}

inline Index positive_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 1) {
    throw FormatError(where + ": expected a positive integer");
  }
  return static_cast<Index>(j.get<long long>());
}

}  // namespace detail

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw FormatError(where + ": expected [re, im]");
  return {detail::number(j[0], where), detail::number(j[1], where)};
}

inline Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Square matrix of the expected dimension.
inline ComplexMatrix matrix_from_json(const Json& j, Index dim, const std::string& where) {
  if (!j.is_array() || static_cast<Index>(j.size()) != dim) {
    throw FormatError(where + ": expected " + std::to_string(dim) + " rows");
  }
  ComplexMatrix m(dim, dim);
  for (Index r = 0; r < dim; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != dim) {
      throw FormatError(where + ": row " + std::to_string(r) + " does not have " +
                        std::to_string(dim) + " entries");
    }
    for (Index c = 0; c < dim; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)], where);
  }
  return m;
}

inline Json to_json(const Document& d) {
  return Json{{"schema_version", kSchemaVersion}, {"kind", to_string(d.kind)}, {"payload", d.payload}};
}

inline Document document_from_json(const Json& j) {
  detail::require_object(j, "document", {"schema_version", "kind", "payload"});
  if (!j["schema_version"].is_string() || j["schema_version"].get<std::string>() != kSchemaVersion) {
    throw FormatError(std::string("document: schema_version must be \"") + kSchemaVersion + "\"");
  }
  if (!j["kind"].is_string()) throw FormatError("document: kind must be a string");
  return {kind_from_string(j["kind"].get<std::string>()), j["payload"]};
}

inline std::string dump(const Document& d) { return to_json(d).dump(2) + "\n"; }

inline Document parse(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(std::string("document: invalid JSON: ") + e.what());
  }
  return document_from_json(j);
}

// state: {"dim_a", "dim_b", "matrix"}

inline Document state_document(const BipartiteOperator& t) {
  return {Kind::state, Json{{"dim_a", t.dim_a()}, {"dim_b", t.dim_b()}, {"matrix", matrix_to_json(t.matrix())}}};
}

inline BipartiteOperator state_from_payload(const Json& p) {
  detail::require_object(p, "state", {"dim_a", "dim_b", "matrix"});
  const Index da = detail::positive_int(p["dim_a"], "state.dim_a");
  const Index db = detail::positive_int(p["dim_b"], "state.dim_b");
  return {da, db, matrix_from_json(p["matrix"], da * db, "state.matrix")};
}

// ensemble: {"weights", "states_a", "states_b"}

inline Document ensemble_document(const ProductEnsemble& e) {
  Json a = Json::array(), b = Json::array();
  for (const auto& s : e.states_a()) a.push_back(matrix_to_json(s.matrix()));
  for (const auto& s : e.states_b()) b.push_back(matrix_to_json(s.matrix()));
  return {Kind::ensemble, Json{{"weights", e.weights()}, {"states_a", a}, {"states_b", b}}};
}

inline ProductEnsemble ensemble_from_payload(const Json& p, const Tolerances& tol = {}) {
  detail::require_object(p, "ensemble", {"weights", "states_a", "states_b"});
  const Json& w = p["weights"];
  if (!w.is_array() || w.empty()) throw FormatError("ensemble.weights: expected a nonempty array");
  auto states = [&](const char* key) {
    const Json& arr = p[key];
    const std::string where = std::string("ensemble.") + key;
    if (!arr.is_array() || arr.size() != w.size()) {
      throw FormatError(where + ": expected one matrix per weight");
    }
    std::vector<DensityMatrix> out;
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const Json& m = arr[k];
      const Index dim = m.is_array() ? static_cast<Index>(m.size()) : 0;
      if (dim < 1) throw FormatError(where + ": empty matrix");
      try {
        out.emplace_back(matrix_from_json(m, dim, where), tol);
      } catch (const InvariantError& e) {
        throw InvariantError(where + "[" + std::to_string(k) + "]: " + e.what());
      }
    }
    return out;
  };
  std::vector<double> weights;
  for (const auto& x : w) weights.push_back(detail::number(x, "ensemble.weights"));
  return {std::move(weights), states("states_a"), states("states_b")};
}

// channel: {"dim_in", "dim_out", "choi", "input_state"?, "diagnostics"?}

struct ChannelPayload {
  SuperOp channel;
  std::optional<ComplexMatrix> input_state;
};

inline Json diagnostics_to_json(const CptpDiagnostics& d) {
  return Json{{"cptp", d.cptp},
              {"hermitian", d.hermitian},
              {"trace_preserving", d.trace_preserving},
              {"completely_positive", d.completely_positive},
              {"choi_min_eigenvalue", d.choi_min_eigenvalue},
              {"choi_max_eigenvalue", d.choi_max_eigenvalue},
              {"tp_residual", d.tp_residual},
              {"hermiticity_residual", d.hermiticity_residual}};
}

inline Document channel_document(const SuperOp& e,
                                 const std::optional<ComplexMatrix>& input_state = std::nullopt,
                                 const std::optional<CptpDiagnostics>& diagnostics = std::nullopt) {
  Json p{{"dim_in", e.dim_in()}, {"dim_out", e.dim_out()}, {"choi", matrix_to_json(e.choi().matrix())}};
  if (input_state) p["input_state"] = matrix_to_json(*input_state);
  if (diagnostics) p["diagnostics"] = diagnostics_to_json(*diagnostics);
  return {Kind::channel, std::move(p)};
}

inline ChannelPayload channel_from_payload(const Json& p) {
  detail::require_object(p, "channel", {"dim_in", "dim_out", "choi"}, {"input_state", "diagnostics"});
  const Index din = detail::positive_int(p["dim_in"], "channel.dim_in");
  const Index dout = detail::positive_int(p["dim_out"], "channel.dim_out");
  ChannelPayload out{SuperOp(BipartiteOperator(din, dout, matrix_from_json(p["choi"], din * dout, "channel.choi"))),
                     std::nullopt};
  if (p.contains("input_state")) out.input_state = matrix_from_json(p["input_state"], din, "channel.input_state");
  return out;
}

// correlations: {"m", "entries": [{"alpha", "beta", "value"}, ...]}

inline Document correlations_document(const CorrelationTable& t) {
  Json entries = Json::array();
  for (Index a = 0; a < t.strings(); ++a)
    for (Index b = 0; b < t.strings(); ++b) {
      const auto v = t.get(a, b);
      if (!v) continue;
      entries.push_back(Json{{"alpha", t.decode(a)}, {"beta", t.decode(b)}, {"value", *v}});
    }
  return {Kind::correlations, Json{{"m", t.qubits()}, {"entries", entries}}};
}

inline CorrelationTable correlations_from_payload(const Json& p) {
  detail::require_object(p, "correlations", {"m", "entries"});
  const Index m = detail::positive_int(p["m"], "correlations.m");
  CorrelationTable t(static_cast<int>(m));
  if (!p["entries"].is_array()) throw FormatError("correlations.entries: expected an array");
  auto indices = [&](const Json& j, const char* where) {
    if (!j.is_array()) throw FormatError(std::string(where) + ": expected an index array");
    std::vector<int> v;
    for (const auto& x : j) {
      if (!x.is_number_integer()) throw FormatError(std::string(where) + ": expected integers");
      v.push_back(x.get<int>());
    }
    return v;
  };
  for (const auto& e : p["entries"]) {
    detail::require_object(e, "correlations.entries[]", {"alpha", "beta", "value"});
    t.set(indices(e["alpha"], "correlations.entries[].alpha"),
          indices(e["beta"], "correlations.entries[].beta"),
          detail::number(e["value"], "correlations.entries[].value"));
  }
  return t;
}

// report

inline Json side_report_to_json(const CompatibilityReport& r) {
  return Json{{"side", std::string(tempcompat::to_string(r.side))},
              {"compatible", r.compatible},
              {"boundary", r.boundary},
              {"test_min_eigenvalue", r.test_min_eigenvalue},
              {"test_max_eigenvalue", r.test_max_eigenvalue},
              {"reconstruction_residual", r.reconstruction_residual},
              {"faithful_marginal", r.faithful_marginal},
              {"cptp", diagnostics_to_json(r.cptp)}};
}

inline Document report_document(const Certificate& c, double tol) {
  return {Kind::report, Json{{"tolerance", tol},
                             {"compatible_both", c.compatible_both()},
                             {"ppt", c.ppt},
                             {"ppt_min_eigenvalue", c.ppt_min_eigenvalue},
                             {"sides", Json::array({side_report_to_json(c.a), side_report_to_json(c.b)})}}};
}

/// Bipartite operator from a state document, or the assembled state of an
/// ensemble document.
inline BipartiteOperator bipartite_from_document(const Document& d, const Tolerances& tol = {}) {
  switch (d.kind) {
    case Kind::state: return state_from_payload(d.payload);
    case Kind::ensemble: return assemble_state(ensemble_from_payload(d.payload, tol));
    default:
      throw FormatError("document: expected kind state or ensemble, got " + to_string(d.kind));
  }
}

}  // namespace tempcompat::io
