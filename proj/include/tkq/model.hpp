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

/// @file model.hpp
/// The toolkit-to-machine assignment problem as a binary integer linear
/// program:
///
///     min  sum_t sum_m c_tm x_tm
///     s.t. sum_t w_tm x_tm <= h_m      for every machine m
///          sum_m x_tm      == 1        for every toolkit t
///
/// plus data sanitation, feasibility checks, an exhaustive reference solver
/// and a seeded synthetic instance generator.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tkq/errors.hpp"
#include "tkq/numeric.hpp"
#include "tkq/random.hpp"

namespace tkq {

template <typename T>
using Matrix = std::vector<std::vector<T>>;

struct Instance {
  std::string id;
  std::vector<std::string> toolkits;
  std::vector<std::string> machines;
  Matrix<Rational> cost;      // [toolkit][machine], currency units
  Matrix<Rational> workload;  // [toolkit][machine], hours per period
  std::vector<Rational> capacity;  // [machine], hours per period

  std::size_t toolkit_count() const { return toolkits.size(); }
  std::size_t machine_count() const { return machines.size(); }

  std::size_t toolkit_index(std::string_view name) const { return lookup(toolkits, name, "toolkit"); }
  std::size_t machine_index(std::string_view name) const { return lookup(machines, name, "machine"); }

  /// Throws InputError unless the data is rectangular, non-negative and
  /// has at least one toolkit and one machine.
  void check() const {
    if (toolkits.empty()) throw InputError("instance '" + id + "' has no toolkits");
    if (machines.empty()) throw InputError("instance '" + id + "' has no machines");
    auto check_matrix = [&](const Matrix<Rational>& m, const char* what) {
      if (m.size() != toolkits.size())
        throw InputError(std::string(what) + ": expected one row per toolkit");
      for (const auto& row : m) {
        if (row.size() != machines.size())
          throw InputError(std::string(what) + ": ragged matrix, expected one column per machine");
        for (const auto& v : row)
          if (v < 0) throw InputError(std::string(what) + ": negative value");
      }
    };
    check_matrix(cost, "cost");
    check_matrix(workload, "workload");
    if (capacity.size() != machines.size()) throw InputError("capacity: expected one value per machine");
    for (const auto& h : capacity)
      if (h < 0) throw InputError("capacity: negative value");
  }

  /// True when all workloads and capacities are integral.
  bool sanitized() const {
    for (const auto& row : workload)
      for (const auto& w : row)
        if (!is_integral(w)) return false;
    return std::all_of(capacity.begin(), capacity.end(), [](const Rational& h) { return is_integral(h); });
  }

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  static std::size_t lookup(const std::vector<std::string>& names, std::string_view name, const char* kind) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw InputError(std::string("unknown ") + kind + " id '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - names.begin());
  }
};

/// Total toolkit -> machine map, by index.
struct Assignment {
  std::vector<std::size_t> machine_of;

  friend bool operator==(const Assignment&, const Assignment&) = default;
  friend auto operator<=>(const Assignment&, const Assignment&) = default;
};

/// Machines selected per toolkit; a decoded bitstring need not select exactly
/// one machine per toolkit.
using Candidate = std::vector<std::vector<std::size_t>>;

inline Candidate to_candidate(const Assignment& a) {
  Candidate c(a.machine_of.size());
  for (std::size_t t = 0; t < a.machine_of.size(); ++t) c[t] = {a.machine_of[t]};
  return c;
}

/// Returns the assignment if every toolkit selects exactly one machine.
inline std::optional<Assignment> to_assignment(const Candidate& c) {
  Assignment a;
  a.machine_of.reserve(c.size());
  for (const auto& machines : c) {
    if (machines.size() != 1) return std::nullopt;
    a.machine_of.push_back(machines.front());
  }
  return a;
}

struct FeasibilityReport {
  bool feasible = true;
  std::map<std::size_t, Rational> capacity_violations;    // machine -> overload hours
  std::map<std::size_t, std::size_t> assignment_violations;  // toolkit -> machines chosen
};

struct Solution {
  Assignment assignment;
  Rational cost;
  bool optimal = false;
};

/// Floors capacities and ceils workloads so the capacity constraint only
/// ever gets stricter. Costs are kept as they are.
inline Instance sanitize_instance(Instance raw) {
  raw.check();
  for (auto& h : raw.capacity) h = Rational(floor(h));
  for (auto& row : raw.workload)
    for (auto& w : row) w = Rational(ceil(w));
  return raw;
}

inline FeasibilityReport validate_assignment(const Instance& inst, const Candidate& candidate) {
  if (candidate.size() > inst.toolkit_count()) throw InputError("candidate has more toolkits than the instance");
  FeasibilityReport report;
  std::vector<Rational> load(inst.machine_count());
  for (std::size_t t = 0; t < inst.toolkit_count(); ++t) {
    const std::vector<std::size_t> none;
    const auto& chosen = t < candidate.size() ? candidate[t] : none;
    for (std::size_t m : chosen) {
      if (m >= inst.machine_count()) throw InputError("machine index out of range");
      load[m] += inst.workload[t][m];
    }
    if (chosen.size() != 1) report.assignment_violations[t] = chosen.size();
  }
  for (std::size_t m = 0; m < inst.machine_count(); ++m)
    if (load[m] > inst.capacity[m]) report.capacity_violations[m] = load[m] - inst.capacity[m];
  report.feasible = report.capacity_violations.empty() && report.assignment_violations.empty();
  return report;
}

inline FeasibilityReport validate_assignment(const Instance& inst, const Assignment& a) {
  return validate_assignment(inst, to_candidate(a));
}

/// Id-based form; toolkits missing from `choice` are reported unassigned.
inline FeasibilityReport validate_assignment(const Instance& inst, const std::map<std::string, std::string>& choice) {
  Candidate c(inst.toolkit_count());
  for (const auto& [toolkit, machine] : choice) c[inst.toolkit_index(toolkit)] = {inst.machine_index(machine)};
  return validate_assignment(inst, c);
}

inline Rational solution_cost(const Instance& inst, const Assignment& a) {
  if (a.machine_of.size() != inst.toolkit_count()) throw InputError("assignment is not total over the toolkits");
  Rational total = 0;
  for (std::size_t t = 0; t < a.machine_of.size(); ++t) {
    if (a.machine_of[t] >= inst.machine_count()) throw InputError("machine index out of range");
    total += inst.cost[t][a.machine_of[t]];
  }
  return total;
}

inline constexpr std::uint64_t kEnumerationLimit = std::uint64_t{1} << 26;

namespace detail {

/// Integers proportional to `values` (common denominator removed).
inline std::vector<Wide> common_scale(const std::vector<const Rational*>& values) {
  BigInt lcm = 1;
  for (const Rational* v : values) lcm = boost::multiprecision::lcm(lcm, denominator(*v));
  std::vector<Wide> out;
  out.reserve(values.size());
  for (const Rational* v : values) out.push_back(to_wide(numerator(*v) * (lcm / denominator(*v)), 100));
  return out;
}

}  // namespace detail

/// Exhaustive minimum-cost feasible assignment. Assignments are visited in
/// lexicographic order of the machine vector and only a strictly cheaper one
/// replaces the incumbent, so ties resolve to the lexicographically smallest.
inline Solution exact_solve(const Instance& inst) {
  inst.check();
  const std::size_t T = inst.toolkit_count();
  const std::size_t M = inst.machine_count();
  {
    long double space = 1;
    for (std::size_t t = 0; t < T; ++t) space *= static_cast<long double>(M);
    if (space > static_cast<long double>(kEnumerationLimit))
      throw TooLarge("exact_solve: |machines|^|toolkits| exceeds 2^26");
  }

  std::vector<const Rational*> cost_refs, load_refs;
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t m = 0; m < M; ++m) {
      cost_refs.push_back(&inst.cost[t][m]);
      load_refs.push_back(&inst.workload[t][m]);
    }
  for (const auto& h : inst.capacity) load_refs.push_back(&h);
  const auto cost = detail::common_scale(cost_refs);
  const auto scaled = detail::common_scale(load_refs);
  auto w = [&](std::size_t t, std::size_t m) { return scaled[t * M + m]; };
  auto h = [&](std::size_t m) { return scaled[T * M + m]; };

  std::vector<std::size_t> digit(T, 0);
  std::vector<Wide> load(M, 0);
  Wide current = 0;
  for (std::size_t t = 0; t < T; ++t) {
    load[0] += w(t, 0);
    current += cost[t * M];
  }

  std::optional<std::vector<std::size_t>> best;
  Wide best_cost = 0;
  while (true) {
    bool fits = true;
    for (std::size_t m = 0; m < M && fits; ++m) fits = load[m] <= h(m);
    if (fits && (!best || current < best_cost)) {
      best = digit;
      best_cost = current;
    }
    // odometer step, last toolkit varies fastest
    std::size_t t = T;
    while (t > 0) {
      --t;
      std::size_t from = digit[t];
      std::size_t to = (from + 1) % M;
      load[from] -= w(t, from);
      load[to] += w(t, to);
      current += cost[t * M + to] - cost[t * M + from];
      digit[t] = to;
      if (to != 0) break;
      if (t == 0) {
        t = T;  // wrapped around completely
        break;
      }
    }
    if (t == T) break;
  }
  if (!best) throw Infeasible("instance '" + inst.id + "' has no feasible assignment");
  Solution s;
  s.assignment.machine_of = *best;
  s.cost = solution_cost(inst, s.assignment);
  s.optimal = true;
  return s;
}

/// Seeded synthetic instance with integral data. Capacities have exactly
/// `capacity_bits` binary digits, workloads are drawn around each machine's
/// fair share so the capacity constraints bind, and costs are log-uniform
/// over [1, 9999] with max/min >= 100.
inline Instance generate_instance(std::size_t n_toolkits, std::size_t n_machines, unsigned capacity_bits,
                                  std::uint64_t seed) {
  if (n_toolkits == 0 || n_machines == 0 || capacity_bits == 0)
    throw InputError("generate_instance: counts and capacity_bits must be >= 1");
  if (capacity_bits > 40) throw InputError("generate_instance: capacity_bits must be <= 40");
  Rng rng = make_rng(seed, 0x746b71);  // "tkq"

  Instance inst;
  inst.id = "gen-t" + std::to_string(n_toolkits) + "-m" + std::to_string(n_machines) + "-b" +
            std::to_string(capacity_bits) + "-s" + std::to_string(seed);
  for (std::size_t t = 0; t < n_toolkits; ++t) inst.toolkits.push_back("t" + std::to_string(t + 1));
  for (std::size_t m = 0; m < n_machines; ++m) inst.machines.push_back("m" + std::to_string(m + 1));

  const std::int64_t h_lo = std::int64_t{1} << (capacity_bits - 1);
  const std::int64_t h_hi = (std::int64_t{1} << capacity_bits) - 1;

  constexpr int kAttempts = 200;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    std::vector<std::int64_t> h(n_machines);
    for (auto& v : h) v = uniform_between(rng, h_lo, h_hi);

    Matrix<std::int64_t> w(n_toolkits, std::vector<std::int64_t>(n_machines));
    for (std::size_t m = 0; m < n_machines; ++m) {
      // fair share of machine m if toolkits were spread evenly
      const std::int64_t share = std::max<std::int64_t>(
          1, h[m] * static_cast<std::int64_t>(n_machines) / static_cast<std::int64_t>(n_toolkits));
      const std::int64_t lo = std::max<std::int64_t>(1, share * 2 / 5);
      const std::int64_t hi = std::min<std::int64_t>(std::max(lo, share * 6 / 5), std::max<std::int64_t>(h[m], 1));
      for (std::size_t t = 0; t < n_toolkits; ++t) w[t][m] = uniform_between(rng, std::min(lo, hi), hi);
    }

    // Greedy: largest toolkits first, each onto the machine with most room.
    std::vector<std::size_t> order(n_toolkits);
    for (std::size_t t = 0; t < n_toolkits; ++t) order[t] = t;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return *std::min_element(w[a].begin(), w[a].end()) > *std::min_element(w[b].begin(), w[b].end());
    });
    std::vector<std::int64_t> room = h;
    bool fits = true;
    for (std::size_t t : order) {
      std::optional<std::size_t> target;
      for (std::size_t m = 0; m < n_machines; ++m)
        if (w[t][m] <= room[m] && (!target || room[m] - w[t][m] > room[*target] - w[t][*target])) target = m;
      if (!target) {
        fits = false;
        break;
      }
      room[*target] -= w[t][*target];
    }
    if (!fits) continue;

    Matrix<std::int64_t> c(n_toolkits, std::vector<std::int64_t>(n_machines));
    for (auto& row : c)
      for (auto& v : row) {
        static constexpr std::int64_t kPow10[] = {1, 10, 100, 1000, 10000};
        auto e = uniform_below(rng, 4);
        v = uniform_between(rng, kPow10[e], kPow10[e + 1] - 1);
      }
    if (n_toolkits * n_machines >= 2) {
      std::int64_t* lo = &c[0][0];
      std::int64_t* hi = &c[0][0];
      for (auto& row : c)
        for (auto& v : row) {
          if (v < *lo) lo = &v;
          if (v > *hi) hi = &v;
        }
      if (*hi < 100 * *lo) {
        if (*lo * 100 <= 9999)
          *hi = *lo * 100;
        else
          *lo = std::max<std::int64_t>(1, *hi / 100);
      }
    }

    inst.cost.assign(n_toolkits, {});
    inst.workload.assign(n_toolkits, {});
    for (std::size_t t = 0; t < n_toolkits; ++t)
      for (std::size_t m = 0; m < n_machines; ++m) {
        inst.cost[t].push_back(Rational(c[t][m]));
        inst.workload[t].push_back(Rational(w[t][m]));
      }
    inst.capacity.clear();
    for (auto v : h) inst.capacity.push_back(Rational(v));
    return inst;
  }
  throw GenerationFailed("generate_instance: no feasible instance of this shape after " +
                         std::to_string(kAttempts) + " attempts");
}

}  // namespace tkq
