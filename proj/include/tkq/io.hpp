// Copyright 2026 The tkq Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

/// @file io.hpp
/// Text formats for QUBOs and sample sets.
///
/// QUBO (coordinate list): a header line "n offset" followed by one line
/// "i j coeff" per stored entry with i <= j. Numbers are exact rationals
/// written as "p" or "p/q". The variable layout and variant travel in a
/// JSON sidecar (see varmap_to_json).
///
/// Sample sets: a "# " prefixed JSON line holding the metadata, then CSV
/// with header "bits,energy,multiplicity". Bit i of the string is variable i.

#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tkq/errors.hpp"
#include "tkq/instance_io.hpp"
#include "tkq/qubo.hpp"
#include "tkq/solvers.hpp"

namespace tkq {

inline std::string qubo_to_text(const Qubo& q) {
  std::ostringstream out;
  out << q.n << ' ' << to_string(q.offset) << '\n';
  for (const auto& [key, v] : q.coeffs) out << key.first << ' ' << key.second << ' ' << to_string(v) << '\n';
  return out.str();
}

/// Coefficients and offset only; the layout is plain unless a sidecar is
/// applied with apply_varmap_json.
inline Qubo qubo_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto bad = [](const std::string& why) -> InputError { return InputError("QUBO text: " + why); };
  if (!std::getline(in, line)) throw bad("missing header");
  std::istringstream header(line);
  long long n = -1;
  std::string offset;
  if (!(header >> n >> offset) || n < 0) throw bad("header must be 'n offset'");
  Qubo q = empty_qubo(static_cast<std::size_t>(n));
  q.offset = parse_rational(offset);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    long long i = -1, j = -1;
    std::string value;
    if (!(row >> i >> j >> value)) throw bad("malformed entry '" + line + "'");
    if (i < 0 || j < i || j >= n) throw bad("entry indices must satisfy 0 <= i <= j < n");
    const Rational v = parse_rational(value);
    if (v == 0) continue;
    if (q.coeffs.count(CoeffKey(i, j))) throw bad("duplicate entry");
    q.coeffs.emplace(CoeffKey(i, j), v);
  }
  return q;
}

inline nlohmann::json variant_to_json(const VariantSpec& v) {
  nlohmann::json j;
  j["kind"] = variant_family(v);
  if (auto* raw = std::get_if<RawPenalty>(&v)) {
    j["lm"] = to_string(raw->lm);
    j["lt"] = to_string(raw->lt);
  } else if (auto* scaled = std::get_if<ScaledPenalty>(&v)) {
    j["ls"] = to_string(scaled->ls);
  }
  return j;
}

inline Rational json_rational(const nlohmann::json& v, const char* field) { return detail::json_number(v, field); }

inline VariantSpec variant_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) throw InputError("variant: expected an object with 'kind'");
  const auto kind = j["kind"].get<std::string>();
  if (kind == "raw") {
    if (!j.contains("lm") || !j.contains("lt")) throw InputError("raw variant needs 'lm' and 'lt'");
    return RawPenalty{json_rational(j["lm"], "lm"), json_rational(j["lt"], "lt")};
  }
  if (kind == "scaled") {
    if (!j.contains("ls")) throw InputError("scaled variant needs 'ls'");
    return ScaledPenalty{json_rational(j["ls"], "ls")};
  }
  if (kind == "rounded") return RoundedCost{};
  throw InputError("unknown variant kind '" + kind + "'");
}

inline nlohmann::json varmap_to_json(const Qubo& q) {
  const auto& vm = q.varmap;
  nlohmann::json j;
  j["n"] = vm.n;
  j["toolkits"] = vm.toolkits;
  j["machines"] = vm.machines;
  nlohmann::json decision = nlohmann::json::array();
  for (std::size_t t = 0; t < vm.toolkits; ++t) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t m = 0; m < vm.machines; ++m) row.push_back(vm.decision_index(t, m));
    decision.push_back(row);
  }
  j["decision_index"] = decision;
  j["slack_index"] = vm.slack_index;
  j["slack_coefficients"] = vm.slack_coefficient;
  j["variant"] = variant_to_json(q.variant);
  return j;
}

inline void apply_varmap_json(Qubo& q, const nlohmann::json& j) {
  VariableMap vm;
  try {
    vm.n = j.at("n").get<std::size_t>();
    vm.toolkits = j.at("toolkits").get<std::size_t>();
    vm.machines = j.at("machines").get<std::size_t>();
    vm.slack_index = j.at("slack_index").get<std::vector<std::vector<std::size_t>>>();
    vm.slack_coefficient = j.at("slack_coefficients").get<std::vector<std::vector<std::int64_t>>>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("varmap sidecar: ") + e.what());
  }
  if (vm.n != q.n) throw InputError("varmap sidecar: variable count differs from the QUBO");
  if (vm.slack_index.size() != vm.machines || vm.slack_coefficient.size() != vm.machines)
    throw InputError("varmap sidecar: one slack list per machine expected");
  std::vector<bool> seen(vm.n, false);
  auto claim = [&](std::size_t idx) {
    if (idx >= vm.n || seen[idx]) throw InputError("varmap sidecar: indices must cover 0..n-1 exactly once");
    seen[idx] = true;
  };
  for (std::size_t i = 0; i < vm.decision_count(); ++i) claim(i);
  for (std::size_t m = 0; m < vm.machines; ++m) {
    if (vm.slack_index[m].size() != vm.slack_coefficient[m].size())
      throw InputError("varmap sidecar: slack index/coefficient length mismatch");
    for (auto idx : vm.slack_index[m]) claim(idx);
  }
  for (bool s : seen)
    if (!s) throw InputError("varmap sidecar: indices must cover 0..n-1 exactly once");
  q.varmap = std::move(vm);
  if (j.contains("variant")) q.variant = variant_from_json(j["variant"]);
}

inline void save_qubo(const Qubo& q, const std::string& path) {
  write_text_file(path, qubo_to_text(q));
  write_text_file(path + ".varmap.json", varmap_to_json(q).dump(2) + "\n");
}

/// Reads `path` and, when present, its "<path>.varmap.json" sidecar.
inline Qubo load_qubo(const std::string& path) {
  Qubo q = qubo_from_text(read_text_file(path));
  std::ifstream sidecar(path + ".varmap.json");
  if (sidecar) {
    nlohmann::json j;
    try {
      sidecar >> j;
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError(std::string("varmap sidecar: ") + e.what());
    }
    apply_varmap_json(q, j);
  }
  return q;
}

// ---------------------------------------------------------------------------

inline std::string samples_to_csv(const SampleSet& s) {
  nlohmann::json meta;
  meta["solver"] = s.meta.solver;
  meta["params"] = s.meta.params;
  meta["seed"] = s.meta.seed;
  std::ostringstream out;
  out << "# " << meta.dump() << '\n';
  out << "bits,energy,multiplicity\n";
  for (const auto& e : s.entries) out << to_string(e.bits) << ',' << to_string(e.energy) << ',' << e.multiplicity << '\n';
  return out.str();
}

inline SampleSet samples_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  SampleSet s;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      try {
        auto meta = nlohmann::json::parse(line.substr(2));
        s.meta.solver = meta.value("solver", std::string{});
        s.meta.params = meta.value("params", std::map<std::string, std::string>{});
        s.meta.seed = meta.value("seed", std::uint64_t{0});
      } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("sample meta: ") + e.what());
      }
      continue;
    }
    if (!header_seen) {
      if (line != "bits,energy,multiplicity") throw InputError("sample CSV: unexpected header '" + line + "'");
      header_seen = true;
      continue;
    }
    auto c1 = line.find(',');
    auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) throw InputError("sample CSV: malformed row");
    Sample sample;
    sample.bits = parse_bits(line.substr(0, c1));
    sample.energy = parse_rational(line.substr(c1 + 1, c2 - c1 - 1));
    sample.multiplicity = std::stoull(line.substr(c2 + 1));
    s.entries.push_back(std::move(sample));
  }
  if (!header_seen) throw InputError("sample CSV: missing header");
  return s;
}

}  // namespace tkq
