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

/// @file instance_io.hpp
/// JSON instance files:
///
///     { "id": str, "toolkits": [str], "machines": [str],
///       "cost": [[num]], "workload": [[num]], "capacity": [num] }
///
/// Rows follow toolkit order, columns machine order.

#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "tkq/errors.hpp"
#include "tkq/model.hpp"
#include "tkq/numeric.hpp"

namespace tkq {

namespace detail {

inline Rational json_number(const nlohmann::json& v, const char* field) {
  if (v.is_number_integer()) {
    if (v.is_number_unsigned()) return Rational(BigInt(v.get<std::uint64_t>()));
    return Rational(BigInt(v.get<std::int64_t>()));
  }
  if (v.is_number_float()) return rational_from_double(v.get<double>());
  if (v.is_string()) return parse_rational(v.get<std::string>());
  throw InputError(std::string(field) + ": expected a number");
}

inline nlohmann::json json_value(const Rational& r) {
  if (is_integral(r)) {
    const BigInt n = numerator(r);
    if (n >= std::numeric_limits<std::int64_t>::min() && n <= std::numeric_limits<std::int64_t>::max())
      return static_cast<std::int64_t>(n);
  }
  return to_double(r);
}

inline Matrix<Rational> json_matrix(const nlohmann::json& doc, const char* field) {
  if (!doc.contains(field) || !doc[field].is_array()) throw InputError(std::string("missing array '") + field + "'");
  Matrix<Rational> out;
  for (const auto& row : doc[field]) {
    if (!row.is_array()) throw InputError(std::string(field) + ": expected an array of rows");
    auto& dst = out.emplace_back();
    for (const auto& v : row) dst.push_back(json_number(v, field));
  }
  return out;
}

inline std::vector<std::string> json_names(const nlohmann::json& doc, const char* field) {
  if (!doc.contains(field) || !doc[field].is_array()) throw InputError(std::string("missing array '") + field + "'");
  std::vector<std::string> out;
  for (const auto& v : doc[field]) {
    if (!v.is_string()) throw InputError(std::string(field) + ": ids must be strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace detail

inline Instance instance_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InputError("instance document must be a JSON object");
  Instance inst;
  inst.id = doc.value("id", std::string{});
  inst.toolkits = detail::json_names(doc, "toolkits");
  inst.machines = detail::json_names(doc, "machines");
  inst.cost = detail::json_matrix(doc, "cost");
  inst.workload = detail::json_matrix(doc, "workload");
  if (!doc.contains("capacity") || !doc["capacity"].is_array()) throw InputError("missing array 'capacity'");
  for (const auto& v : doc["capacity"]) inst.capacity.push_back(detail::json_number(v, "capacity"));
  inst.check();
  return inst;
}

inline nlohmann::json instance_to_json(const Instance& inst) {
  nlohmann::json doc;
  doc["id"] = inst.id;
  doc["toolkits"] = inst.toolkits;
  doc["machines"] = inst.machines;
  auto matrix = [](const Matrix<Rational>& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : m) {
      nlohmann::json r = nlohmann::json::array();
      for (const auto& v : row) r.push_back(detail::json_value(v));
      rows.push_back(std::move(r));
    }
    return rows;
  };
  doc["cost"] = matrix(inst.cost);
  doc["workload"] = matrix(inst.workload);
  doc["capacity"] = nlohmann::json::array();
  for (const auto& h : inst.capacity) doc["capacity"].push_back(detail::json_value(h));
  return doc;
}

inline Instance parse_instance(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("instance JSON: ") + e.what());
  }
  return instance_from_json(doc);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

inline Instance load_instance(const std::string& path) { return parse_instance(read_text_file(path)); }

inline void save_instance(const Instance& inst, const std::string& path) {
  write_text_file(path, instance_to_json(inst).dump(2) + "\n");
}

}  // namespace tkq
