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

/// @file qubo.hpp
/// Compilation of an assignment Instance into a QUBO
///
///     E(x) = x^T Q x + C,   Q upper triangular, x in {0,1}^n
///
/// Variables are laid out as all decision bits x_tm (toolkit-major), then
/// the slack bits of every machine in machine order, low bit first. Three
/// constructions are provided:
///
///  - raw:     costs as given, penalty factors lm (capacity) and lt
///             (exactly-once) taken from a grid;
///  - scaled:  exactly-once rows multiplied by ls, then objective and every
///             equality-form constraint rescaled to the largest value range,
///             penalty factors fixed to 1;
///  - rounded: costs integer-divided by the smallest positive cost, then the
///             scaled construction with ls = 1.
///
/// All coefficients are exact rationals.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "tkq/errors.hpp"
#include "tkq/model.hpp"
#include "tkq/numeric.hpp"

namespace tkq {

/// One byte per variable, 0 or 1. Text form: character i is variable i.
using Bits = std::vector<std::uint8_t>;

inline std::string to_string(const Bits& bits) {
  std::string s(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? '1' : '0';
  return s;
}

inline Bits parse_bits(std::string_view text) {
  Bits bits(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '0' && text[i] != '1') throw InputError("bitstring may only contain '0' and '1'");
    bits[i] = text[i] == '1';
  }
  return bits;
}

// ---------------------------------------------------------------------------
// Variants

struct RawPenalty {
  Rational lm;  // capacity rows
  Rational lt;  // exactly-once rows
  friend bool operator==(const RawPenalty&, const RawPenalty&) = default;
};

struct ScaledPenalty {
  Rational ls;
  friend bool operator==(const ScaledPenalty&, const ScaledPenalty&) = default;
};

struct RoundedCost {
  friend bool operator==(const RoundedCost&, const RoundedCost&) = default;
};

using VariantSpec = std::variant<RawPenalty, ScaledPenalty, RoundedCost>;

inline std::string variant_family(const VariantSpec& v) {
  switch (v.index()) {
    case 0: return "raw";
    case 1: return "scaled";
    default: return "rounded";
  }
}

/// Penalty parameters as a flat tuple used for tie-breaking; rounded has none.
inline std::vector<Rational> penalty_parameters(const VariantSpec& v) {
  if (auto* raw = std::get_if<RawPenalty>(&v)) return {raw->lm, raw->lt};
  if (auto* scaled = std::get_if<ScaledPenalty>(&v)) return {scaled->ls};
  return {};
}

/// "raw(lm=1000,lt=10000000)", "scaled(ls=1/10)", "rounded".
inline std::string penalty_label(const VariantSpec& v) {
  if (auto* raw = std::get_if<RawPenalty>(&v))
    return "raw(lm=" + to_string(raw->lm) + ",lt=" + to_string(raw->lt) + ")";
  if (auto* scaled = std::get_if<ScaledPenalty>(&v)) return "scaled(ls=" + to_string(scaled->ls) + ")";
  return "rounded";
}

inline std::vector<VariantSpec> raw_grid() {
  std::vector<VariantSpec> grid;
  for (long lm : {1000L, 10000L, 100000L})
    for (long lt : {10000000L, 100000000L, 1000000000L}) grid.push_back(RawPenalty{lm, lt});
  return grid;
}

inline std::vector<VariantSpec> scaled_grid() { return {ScaledPenalty{Rational(1, 10)}, ScaledPenalty{1}}; }

inline std::vector<VariantSpec> rounded_grid() { return {RoundedCost{}}; }

/// True when the parameters lie on the default grid of their family.
inline bool on_default_grid(const VariantSpec& v) {
  std::vector<VariantSpec> grid = v.index() == 0 ? raw_grid() : v.index() == 1 ? scaled_grid() : rounded_grid();
  return std::find(grid.begin(), grid.end(), v) != grid.end();
}

// ---------------------------------------------------------------------------
// Slack encoding

/// floor(log2 h) + 1, or 0 for h = 0.
inline std::size_t slack_bit_count(std::int64_t h) {
  if (h < 0) throw InputError("slack_bit_count: negative capacity");
  std::size_t bits = 0;
  while (h > 0) {
    ++bits;
    h >>= 1;
  }
  return bits;
}

/// [1, 2, ..., 2^(r-1), h - 2^r + 1] with r = floor(log2 h). Every integer in
/// [0, h] is a subset sum and nothing larger is.
inline std::vector<std::int64_t> slack_coefficients(std::int64_t h) {
  const std::size_t count = slack_bit_count(h);
  std::vector<std::int64_t> coeffs;
  if (count == 0) return coeffs;
  const std::size_t r = count - 1;
  for (std::size_t j = 0; j < r; ++j) coeffs.push_back(std::int64_t{1} << j);
  coeffs.push_back(h - (std::int64_t{1} << r) + 1);
  return coeffs;
}

/// Upper minus lower bound of sum_i a_i x_i over the binary hypercube.
inline Rational value_range(std::span<const Rational> coefficients) {
  Rational range = 0;
  for (const auto& a : coefficients) range += abs(a);
  return range;
}

// ---------------------------------------------------------------------------
// Variable layout

struct VariableMap {
  std::size_t n = 0;
  std::size_t toolkits = 0;
  std::size_t machines = 0;
  std::vector<std::vector<std::size_t>> slack_index;         // [machine][bit]
  std::vector<std::vector<std::int64_t>> slack_coefficient;  // [machine][bit]

  std::size_t decision_index(std::size_t t, std::size_t m) const { return t * machines + m; }
  std::size_t decision_count() const { return toolkits * machines; }

  friend bool operator==(const VariableMap&, const VariableMap&) = default;
};

/// Layout of a problem-free QUBO on n variables.
inline VariableMap plain_variable_map(std::size_t n) {
  VariableMap vm;
  vm.n = n;
  return vm;
}

inline std::int64_t integral_capacity(const Rational& h) {
  if (!is_integral(h)) throw InputError("instance is not sanitized: non-integral capacity");
  const BigInt v = numerator(h);
  if (v > (BigInt(1) << 40)) throw InputError("capacity exceeds 2^40");
  return static_cast<std::int64_t>(v);
}

inline VariableMap variable_map(const Instance& inst) {
  VariableMap vm;
  vm.toolkits = inst.toolkit_count();
  vm.machines = inst.machine_count();
  std::size_t next = vm.decision_count();
  for (std::size_t m = 0; m < vm.machines; ++m) {
    auto coeffs = slack_coefficients(integral_capacity(inst.capacity[m]));
    auto& idx = vm.slack_index.emplace_back();
    for (std::size_t j = 0; j < coeffs.size(); ++j) idx.push_back(next++);
    vm.slack_coefficient.push_back(std::move(coeffs));
  }
  vm.n = next;
  return vm;
}

// ---------------------------------------------------------------------------
// QUBO

using CoeffKey = std::pair<std::size_t, std::size_t>;

struct Qubo {
  std::size_t n = 0;
  std::map<CoeffKey, Rational> coeffs;  // i <= j, no stored zeros
  Rational offset = 0;
  VariableMap varmap;
  VariantSpec variant = RoundedCost{};

  /// Adds `value` to Q_ij (order of i, j irrelevant); drops entries that cancel.
  void add(std::size_t i, std::size_t j, const Rational& value) {
    if (i > j) std::swap(i, j);
    if (j >= n) throw InputError("coefficient index out of range");
    if (value == 0) return;
    auto [it, inserted] = coeffs.try_emplace(CoeffKey{i, j}, value);
    if (!inserted) {
      it->second += value;
      if (it->second == 0) coeffs.erase(it);
    }
  }

  Rational max_abs_coefficient() const {
    Rational best = 0;
    for (const auto& [key, v] : coeffs) best = std::max(best, abs(v));
    return best;
  }

  friend bool operator==(const Qubo&, const Qubo&) = default;
};

inline Qubo empty_qubo(std::size_t n) {
  Qubo q;
  q.n = n;
  q.varmap = plain_variable_map(n);
  return q;
}

/// sum_i a_i x_i + constant
struct AffineForm {
  std::vector<std::pair<std::size_t, Rational>> terms;
  Rational constant = 0;

  std::vector<Rational> coefficients() const {
    std::vector<Rational> out;
    for (const auto& [i, a] : terms) out.push_back(a);
    return out;
  }
  AffineForm& operator*=(const Rational& f) {
    for (auto& [i, a] : terms) a *= f;
    constant *= f;
    return *this;
  }
};

namespace detail {

inline void add_linear(Qubo& q, const AffineForm& f, const Rational& weight) {
  for (const auto& [i, a] : f.terms) q.add(i, i, weight * a);
  q.offset += weight * f.constant;
}

/// weight * f^2 expanded with x^2 = x.
inline void add_squared(Qubo& q, const AffineForm& f, const Rational& weight) {
  if (weight == 0) return;
  for (std::size_t a = 0; a < f.terms.size(); ++a) {
    const auto& [i, ai] = f.terms[a];
    q.add(i, i, weight * (ai * ai + 2 * ai * f.constant));
    for (std::size_t b = a + 1; b < f.terms.size(); ++b) {
      const auto& [j, aj] = f.terms[b];
      q.add(i, j, weight * 2 * ai * aj);
    }
  }
  q.offset += weight * f.constant * f.constant;
}

struct ProblemForms {
  AffineForm objective;
  std::vector<AffineForm> assignment_rows;  // sum_m x_tm - 1
  std::vector<AffineForm> capacity_rows;    // sum_t w_tm x_tm + S_m - h_m
};

inline ProblemForms problem_forms(const Instance& inst, const VariableMap& vm, const Matrix<Rational>& cost,
                                  const Rational& assignment_weight) {
  ProblemForms forms;
  for (std::size_t t = 0; t < vm.toolkits; ++t)
    for (std::size_t m = 0; m < vm.machines; ++m)
      if (cost[t][m] != 0) forms.objective.terms.emplace_back(vm.decision_index(t, m), cost[t][m]);
  for (std::size_t t = 0; t < vm.toolkits; ++t) {
    AffineForm row;
    for (std::size_t m = 0; m < vm.machines; ++m) row.terms.emplace_back(vm.decision_index(t, m), 1);
    row.constant = -1;
    row *= assignment_weight;
    forms.assignment_rows.push_back(std::move(row));
  }
  for (std::size_t m = 0; m < vm.machines; ++m) {
    AffineForm row;
    for (std::size_t t = 0; t < vm.toolkits; ++t)
      if (inst.workload[t][m] != 0) row.terms.emplace_back(vm.decision_index(t, m), inst.workload[t][m]);
    for (std::size_t j = 0; j < vm.slack_index[m].size(); ++j)
      row.terms.emplace_back(vm.slack_index[m][j], Rational(vm.slack_coefficient[m][j]));
    row.constant = -inst.capacity[m];
    forms.capacity_rows.push_back(std::move(row));
  }
  return forms;
}

/// Scaled construction on the given cost matrix.
inline Qubo build_scaled(const Instance& inst, const Matrix<Rational>& cost, const Rational& ls) {
  const VariableMap vm = variable_map(inst);
  ProblemForms forms = problem_forms(inst, vm, cost, ls);

  auto range_of = [](const AffineForm& f) {
    auto c = f.coefficients();
    return value_range(c);
  };
  Rational v_max = range_of(forms.objective);
  for (const auto& row : forms.assignment_rows) v_max = std::max(v_max, range_of(row));
  for (const auto& row : forms.capacity_rows) v_max = std::max(v_max, range_of(row));

  // Terms with zero range are constant and left unscaled.
  auto rescale = [&](AffineForm& f) {
    Rational v = range_of(f);
    if (v != 0) f *= v_max / v;
  };

  Qubo q = empty_qubo(vm.n);
  q.varmap = vm;
  rescale(forms.objective);
  add_linear(q, forms.objective, 1);
  for (auto& row : forms.assignment_rows) {
    rescale(row);
    add_squared(q, row, 1);
  }
  for (auto& row : forms.capacity_rows) {
    rescale(row);
    add_squared(q, row, 1);
  }
  return q;
}

}  // namespace detail

/// Cost matrix with every entry integer-divided by the smallest positive cost.
inline Matrix<Rational> rounded_costs(const Instance& inst) {
  std::optional<Rational> c_min;
  for (const auto& row : inst.cost)
    for (const auto& c : row)
      if (c > 0 && (!c_min || c < *c_min)) c_min = c;
  if (!c_min) throw InputError("rounded variant needs at least one positive cost");
  Matrix<Rational> out = inst.cost;
  for (auto& row : out)
    for (auto& c : row) c = Rational(floor(c / *c_min));
  return out;
}

inline Qubo build_qubo(const Instance& inst, const VariantSpec& variant) {
  inst.check();
  if (!inst.sanitized()) throw InputError("build_qubo: instance is not sanitized (run sanitize_instance first)");

  Qubo q;
  if (auto* raw = std::get_if<RawPenalty>(&variant)) {
    if (raw->lm <= 0 || raw->lt <= 0) throw InputError("raw variant: penalty factors must be positive");
    const VariableMap vm = variable_map(inst);
    auto forms = detail::problem_forms(inst, vm, inst.cost, 1);
    q = empty_qubo(vm.n);
    q.varmap = vm;
    detail::add_linear(q, forms.objective, 1);
    for (const auto& row : forms.assignment_rows) detail::add_squared(q, row, raw->lt);
    for (const auto& row : forms.capacity_rows) detail::add_squared(q, row, raw->lm);
  } else if (auto* scaled = std::get_if<ScaledPenalty>(&variant)) {
    if (scaled->ls <= 0) throw InputError("scaled variant: ls must be positive");
    q = detail::build_scaled(inst, inst.cost, scaled->ls);
  } else {
    q = detail::build_scaled(inst, rounded_costs(inst), 1);
  }
  q.variant = variant;
  return q;
}

inline Rational qubo_energy(const Qubo& q, const Bits& bits) {
  if (bits.size() != q.n) throw InputError("qubo_energy: bitstring length does not match the QUBO");
  Rational e = q.offset;
  for (const auto& [key, v] : q.coeffs)
    if (bits[key.first] && bits[key.second]) e += v;
  return e;
}

/// Divides every coefficient and the offset by the largest |coefficient|.
inline Qubo normalize_qubo(const Qubo& q) {
  const Rational scale = q.max_abs_coefficient();
  if (scale == 0) throw InputError("normalize_qubo: QUBO has no nonzero coefficient");
  Qubo out = q;
  for (auto& [key, v] : out.coeffs) v /= scale;
  out.offset /= scale;
  return out;
}

// ---------------------------------------------------------------------------
// Decoding

struct DecodedSample {
  Candidate candidate;               // machines selected per toolkit
  std::vector<std::int64_t> slack;   // S_m per machine
  Bits raw_bits;

  std::optional<Assignment> assignment() const { return to_assignment(candidate); }
};

inline DecodedSample decode(const Qubo& q, const Bits& bits) {
  if (bits.size() != q.n) throw InputError("decode: bitstring length does not match the QUBO");
  const auto& vm = q.varmap;
  DecodedSample d;
  d.raw_bits = bits;
  d.candidate.assign(vm.toolkits, {});
  for (std::size_t t = 0; t < vm.toolkits; ++t)
    for (std::size_t m = 0; m < vm.machines; ++m)
      if (bits[vm.decision_index(t, m)]) d.candidate[t].push_back(m);
  d.slack.assign(vm.machines, 0);
  for (std::size_t m = 0; m < vm.machines; ++m)
    for (std::size_t j = 0; j < vm.slack_index[m].size(); ++j)
      if (bits[vm.slack_index[m][j]]) d.slack[m] += vm.slack_coefficient[m][j];
  return d;
}

/// Bitstring for an assignment with slack values chosen per machine.
inline Bits encode(const VariableMap& vm, const Assignment& a, std::span<const std::int64_t> slack) {
  if (a.machine_of.size() != vm.toolkits || slack.size() != vm.machines)
    throw InputError("encode: assignment or slack does not match the variable map");
  Bits bits(vm.n, 0);
  for (std::size_t t = 0; t < vm.toolkits; ++t) bits[vm.decision_index(t, a.machine_of[t])] = 1;
  for (std::size_t m = 0; m < vm.machines; ++m) {
    const auto& coeffs = vm.slack_coefficient[m];
    std::int64_t capacity = 0;
    for (auto c : coeffs) capacity += c;
    std::int64_t rest = slack[m];
    if (rest < 0 || rest > capacity) throw InputError("encode: slack value outside [0, h_m]");
    if (coeffs.empty()) continue;
    const std::size_t top = coeffs.size() - 1;
    // the low bits reach 2^top - 1; use the top coefficient only beyond that
    if (rest > (std::int64_t{1} << top) - 1) {
      bits[vm.slack_index[m][top]] = 1;
      rest -= coeffs[top];
    }
    for (std::size_t j = 0; j < top; ++j)
      if ((rest >> j) & 1) bits[vm.slack_index[m][j]] = 1;
  }
  return bits;
}

/// Encoding with each machine's slack set to its remaining capacity; for a
/// feasible assignment every penalty term vanishes.
inline Bits encode_feasible(const Instance& inst, const VariableMap& vm, const Assignment& a) {
  std::vector<std::int64_t> slack(vm.machines);
  for (std::size_t m = 0; m < vm.machines; ++m) {
    Rational remaining = inst.capacity[m];
    for (std::size_t t = 0; t < a.machine_of.size(); ++t)
      if (a.machine_of[t] == m) remaining -= inst.workload[t][m];
    slack[m] = remaining < 0 ? 0 : static_cast<std::int64_t>(numerator(remaining));
  }
  return encode(vm, a, slack);
}

}  // namespace tkq
