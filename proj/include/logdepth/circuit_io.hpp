// Copyright 2026 The logdepth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON circuit documents (".qc").
//
//   {"version": 1, "width": 3, "inputs": [0, 1],
//    "registers": [{"name": "in", "role": "H_1", "qubits": [0, 1]}, ...],
//    "gates": [{"kind": "PREP", "operands": [2]},
//              {"kind": "CNOT", "operands": [0, 2], "controls": []},
//              {"kind": "FANOUT", "operands": [0, 1, 2], "k": 2}],
//    "traced": [0], "outputs": [1, 2]}
//
// Ancilla wires are declared by PREP entries. A PREP after the first real
// gate, or a TRACE before the last one, is kept as a non-normalized marker.

#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "logdepth/circuit.hpp"

namespace logdepth {

using json = nlohmann::ordered_json;

inline constexpr int kCircuitFormatVersion = 1;

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationReport rep)
      : Error("circuit failed validation\n" + rep.summary()), report(std::move(rep)) {}
  ValidationReport report;
};

inline json register_to_json(const Register& r) {
  json j;
  j["name"] = r.name;
  j["role"] = r.tag();
  j["qubits"] = r.qubits;
  if (r.group != 0) j["group"] = r.group;
  return j;
}

inline json write_circuit(const Circuit& c) {
  json doc;
  doc["version"] = kCircuitFormatVersion;
  doc["width"] = c.width();
  doc["inputs"] = c.inputs();
  doc["registers"] = json::array();
  for (const auto& r : c.layout().registers) doc["registers"].push_back(register_to_json(r));

  std::set<Qubit> late_prep;
  for (const auto& m : c.markers()) {
    if (m.kind == Marker::Kind::Prep) late_prep.insert(m.qubit);
  }
  json gates = json::array();
  auto emit_markers = [&](std::size_t pos) {
    for (const auto& m : c.markers()) {
      if (m.position != pos) continue;
      gates.push_back({{"kind", m.kind == Marker::Kind::Prep ? "PREP" : "TRACE"}, {"operands", {m.qubit}}});
    }
  };
  for (Qubit q : c.ancillas()) {
    if (!late_prep.count(q)) gates.push_back({{"kind", "PREP"}, {"operands", {q}}});
  }
  for (std::size_t i = 0; i < c.gates().size(); ++i) {
    emit_markers(i);
    const Gate& g = c.gates()[i];
    json jg;
    jg["kind"] = std::string(to_string(g.kind));
    jg["operands"] = g.operands;
    jg["controls"] = g.controls;
    if (g.kind == GateKind::FANOUT) jg["k"] = g.fanout_k();
    gates.push_back(std::move(jg));
  }
  emit_markers(c.gates().size());
  doc["gates"] = std::move(gates);
  doc["traced"] = c.traced();
  doc["outputs"] = c.outputs();
  return doc;
}

namespace detail {

// Literals built in code are signed; parsed text is unsigned.
inline bool is_index(const json& j) { return j.is_number_unsigned() || (j.is_number_integer() && j.get<long long>() >= 0); }

inline const json& require_field(const json& j, const std::string& field, const std::string& ctx) {
  if (!j.is_object() || !j.contains(field)) throw ParseError(ctx + ": missing field \"" + field + "\"");
  return j.at(field);
}

inline std::vector<Qubit> qubit_list(const json& j, const std::string& ctx) {
  if (!j.is_array()) throw ParseError(ctx + ": expected an array of wire indices");
  std::vector<Qubit> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!is_index(j[i])) {
      throw ParseError(ctx + "[" + std::to_string(i) + "]: expected a non-negative integer");
    }
    out.push_back(j[i].get<Qubit>());
  }
  return out;
}

}  // namespace detail

/// Parses a circuit document. With `check` set, any validation violation is
/// raised as ValidationError.
inline Circuit read_circuit(const json& doc, bool check = true) {
  using detail::qubit_list;
  using detail::require_field;
  if (!doc.is_object()) throw ParseError("circuit document: expected a JSON object");
  const auto& ver = require_field(doc, "version", "circuit document");
  if (!ver.is_number_integer() || ver.get<int>() != kCircuitFormatVersion) {
    throw ParseError("circuit document: unsupported version " + ver.dump() + " (expected " +
                     std::to_string(kCircuitFormatVersion) + ")");
  }
  const auto& wj = require_field(doc, "width", "circuit document");
  if (!detail::is_index(wj)) throw ParseError("field \"width\": expected a non-negative integer");
  const std::size_t width = wj.get<std::size_t>();

  CircuitBuilder b(width);
  std::vector<Qubit> ancillas;
  std::vector<Marker> markers;
  const auto& gj = require_field(doc, "gates", "circuit document");
  if (!gj.is_array()) throw ParseError("field \"gates\": expected an array");
  std::size_t real_gates = 0;
  std::vector<std::pair<Marker, std::size_t>> traces;
  for (std::size_t i = 0; i < gj.size(); ++i) {
    const std::string ctx = "gates[" + std::to_string(i) + "]";
    const auto& e = gj[i];
    const auto& kj = require_field(e, "kind", ctx);
    if (!kj.is_string()) throw ParseError(ctx + ".kind: expected a string");
    const std::string kind = kj.get<std::string>();
    auto ops = qubit_list(require_field(e, "operands", ctx), ctx + ".operands");
    if (kind == "PREP" || kind == "TRACE") {
      if (ops.size() != 1) throw ParseError(ctx + ": " + kind + " takes exactly one operand");
      if (kind == "PREP") {
        ancillas.push_back(ops[0]);
        if (real_gates > 0) markers.push_back({Marker::Kind::Prep, ops[0], real_gates});
      } else {
        traces.push_back({{Marker::Kind::Trace, ops[0], real_gates}, i});
      }
      continue;
    }
    auto k = gate_kind_from_string(kind);
    if (!k) throw ParseError(ctx + ".kind: unknown gate kind \"" + kind + "\"");
    Gate g{*k, std::move(ops), {}};
    if (e.contains("controls")) g.controls = qubit_list(e["controls"], ctx + ".controls");
    if (*k == GateKind::FANOUT && e.contains("k")) {
      if (!detail::is_index(e["k"]) || e["k"].get<std::size_t>() + 1 != g.operands.size()) {
        throw ParseError(ctx + ".k: does not match operand count");
      }
    }
    b.add(std::move(g));
    ++real_gates;
  }
  for (auto& [m, idx] : traces) {
    if (m.position < real_gates) markers.push_back(m);
  }

  std::vector<Qubit> inputs;
  if (doc.contains("inputs")) {
    inputs = qubit_list(doc["inputs"], "field \"inputs\"");
  } else {
    std::set<Qubit> anc(ancillas.begin(), ancillas.end());
    for (Qubit q = 0; q < width; ++q) {
      if (!anc.count(q)) inputs.push_back(q);
    }
  }
  b.set_inputs(inputs).set_ancillas(ancillas);
  b.set_traced(qubit_list(require_field(doc, "traced", "circuit document"), "field \"traced\""));
  b.set_outputs(qubit_list(require_field(doc, "outputs", "circuit document"), "field \"outputs\""));
  b.set_markers(markers);

  if (doc.contains("registers")) {
    const auto& rj = doc["registers"];
    if (!rj.is_array()) throw ParseError("field \"registers\": expected an array");
    for (std::size_t i = 0; i < rj.size(); ++i) {
      const std::string ctx = "registers[" + std::to_string(i) + "]";
      const auto& name = require_field(rj[i], "name", ctx);
      const auto& role = require_field(rj[i], "role", ctx);
      if (!name.is_string() || !role.is_string()) throw ParseError(ctx + ": name and role must be strings");
      auto tag = parse_role_tag(role.get<std::string>());
      if (!tag) throw ParseError(ctx + ".role: unknown role tag \"" + role.get<std::string>() + "\"");
      int group = rj[i].contains("group") ? rj[i]["group"].get<int>() : 0;
      b.add_register(name.get<std::string>(), tag->first, tag->second,
                     qubit_list(require_field(rj[i], "qubits", ctx), ctx + ".qubits"), group);
    }
  }
  Circuit c = b.build();
  if (check) {
    auto rep = validate(c);
    if (!rep.ok()) throw ValidationError(std::move(rep));
  }
  return c;
}

inline Circuit read_circuit_text(const std::string& text, bool check = true) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return read_circuit(doc, check);
}

inline Circuit load_circuit(const std::string& path, bool check = true) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return read_circuit_text(ss.str(), check);
}

inline void save_json(const json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << doc.dump(2) << "\n";
}

}  // namespace logdepth
