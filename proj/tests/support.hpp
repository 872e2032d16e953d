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

// Fixtures and independent reference computations shared by the tests.
// The oracles here evaluate the problem straight from its definition
// (objective plus squared constraint rows) and never call the QUBO
// builder or the integer evaluator.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tkq.hpp"

namespace tkq::testing {

inline std::string data_path(const std::string& name) { return std::string(TKQ_DATA_DIR) + "/" + name; }

inline Instance make_instance(Matrix<Rational> cost, Matrix<Rational> workload, std::vector<Rational> capacity,
                              std::string id = "fixture") {
  Instance inst;
  inst.id = std::move(id);
  for (std::size_t t = 0; t < cost.size(); ++t) inst.toolkits.push_back("t" + std::to_string(t + 1));
  for (std::size_t m = 0; m < capacity.size(); ++m) inst.machines.push_back("m" + std::to_string(m + 1));
  inst.cost = std::move(cost);
  inst.workload = std::move(workload);
  inst.capacity = std::move(capacity);
  return inst;
}

/// Two toolkits, two machines, c = [[1,2],[2,1]], unit workloads, h = [1,1].
inline Instance tiny_a() { return make_instance({{1, 2}, {2, 1}}, {{1, 1}, {1, 1}}, {1, 1}, "tiny-a"); }

/// Calls f on every total assignment in lexicographic order.
inline void for_each_assignment(std::size_t toolkits, std::size_t machines,
                                const std::function<void(const Assignment&)>& f) {
  Assignment a;
  a.machine_of.assign(toolkits, 0);
  while (true) {
    f(a);
    std::size_t t = toolkits;
    while (t > 0 && ++a.machine_of[t - 1] == machines) a.machine_of[--t] = 0;
    if (t == 0) return;
  }
}

inline bool feasible(const Instance& inst, const Assignment& a) {
  for (std::size_t m = 0; m < inst.machine_count(); ++m) {
    Rational load = 0;
    for (std::size_t t = 0; t < a.machine_of.size(); ++t)
      if (a.machine_of[t] == m) load += inst.workload[t][m];
    if (load > inst.capacity[m]) return false;
  }
  return true;
}

inline Rational plain_cost(const Instance& inst, const Assignment& a) {
  Rational c = 0;
  for (std::size_t t = 0; t < a.machine_of.size(); ++t) c += inst.cost[t][a.machine_of[t]];
  return c;
}

/// Slack value of machine m read from the bits with the binary split.
inline Rational slack_value(const Instance& inst, const Bits& bits, std::size_t first, std::size_t m,
                            std::size_t& used) {
  const auto h = static_cast<std::int64_t>(numerator(inst.capacity[m]));
  std::size_t r = 0;
  while ((std::int64_t{2} << r) <= h) ++r;  // r = floor(log2 h)
  Rational s = 0;
  used = 0;
  if (h == 0) return s;
  for (std::size_t j = 0; j < r; ++j) s += bits[first + j] ? Rational(std::int64_t{1} << j) : Rational(0);
  s += bits[first + r] ? Rational(h - (std::int64_t{1} << r) + 1) : Rational(0);
  used = r + 1;
  return s;
}

struct Rows {
  Rational objective;
  std::vector<Rational> assignment;  // sum_m x_tm - 1
  std::vector<Rational> capacity;    // sum_t w x + S - h
};

inline Rows evaluate_rows(const Instance& inst, const Matrix<Rational>& cost, const Bits& bits) {
  const std::size_t T = inst.toolkit_count(), M = inst.machine_count();
  Rows rows;
  for (std::size_t t = 0; t < T; ++t) {
    Rational count = 0;
    for (std::size_t m = 0; m < M; ++m)
      if (bits[t * M + m]) {
        rows.objective += cost[t][m];
        count += 1;
      }
    rows.assignment.push_back(count - 1);
  }
  std::size_t next = T * M;
  for (std::size_t m = 0; m < M; ++m) {
    Rational load = 0;
    for (std::size_t t = 0; t < T; ++t)
      if (bits[t * M + m]) load += inst.workload[t][m];
    std::size_t used = 0;
    const Rational s = slack_value(inst, bits, next, m, used);
    next += used;
    rows.capacity.push_back(load + s - inst.capacity[m]);
  }
  return rows;
}

inline Rational oracle_raw_energy(const Instance& inst, const Rational& lm, const Rational& lt, const Bits& bits) {
  const Rows rows = evaluate_rows(inst, inst.cost, bits);
  Rational e = rows.objective;
  for (const auto& r : rows.assignment) e += lt * r * r;
  for (const auto& r : rows.capacity) e += lm * r * r;
  return e;
}

/// Every term is multiplied by v_max / v_term where v is the sum of absolute
/// coefficients of that term; penalties then carry weight one.
inline Rational oracle_scaled_energy(const Instance& inst, const Matrix<Rational>& cost, const Rational& ls,
                                     const Bits& bits) {
  const std::size_t T = inst.toolkit_count(), M = inst.machine_count();
  Rational v_obj = 0;
  for (const auto& row : cost)
    for (const auto& c : row) v_obj += c;
  const Rational v_assign = ls * static_cast<long>(M);
  std::vector<Rational> v_cap(M);
  for (std::size_t m = 0; m < M; ++m) {
    for (std::size_t t = 0; t < T; ++t) v_cap[m] += inst.workload[t][m];
    v_cap[m] += inst.capacity[m];  // slack coefficients sum to h
  }
  Rational v_max = std::max(v_obj, v_assign);
  for (const auto& v : v_cap) v_max = std::max(v_max, v);

  const Rows rows = evaluate_rows(inst, cost, bits);
  Rational e = v_obj == 0 ? rows.objective : rows.objective * v_max / v_obj;
  for (const auto& r : rows.assignment) {
    const Rational scaled = ls * r * v_max / v_assign;
    e += scaled * scaled;
  }
  for (std::size_t m = 0; m < M; ++m) {
    const Rational scaled = v_cap[m] == 0 ? rows.capacity[m] : rows.capacity[m] * v_max / v_cap[m];
    e += scaled * scaled;
  }
  return e;
}

inline Matrix<Rational> oracle_rounded_costs(const Instance& inst) {
  Rational c_min = -1;
  for (const auto& row : inst.cost)
    for (const auto& c : row)
      if (c > 0 && (c_min < 0 || c < c_min)) c_min = c;
  Matrix<Rational> out = inst.cost;
  for (auto& row : out)
    for (auto& c : row) {
      BigInt q = numerator(c) * denominator(c_min) / (denominator(c) * numerator(c_min));
      c = Rational(q);
    }
  return out;
}

inline Rational oracle_energy(const Instance& inst, const VariantSpec& v, const Bits& bits) {
  if (auto* raw = std::get_if<RawPenalty>(&v)) return oracle_raw_energy(inst, raw->lm, raw->lt, bits);
  if (auto* scaled = std::get_if<ScaledPenalty>(&v)) return oracle_scaled_energy(inst, inst.cost, scaled->ls, bits);
  return oracle_scaled_energy(inst, oracle_rounded_costs(inst), 1, bits);
}

inline Bits bits_of(std::uint64_t mask, std::size_t n) {
  Bits b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = (mask >> i) & 1;
  return b;
}

/// Exhaustive minimum of qubo_energy; returns every minimizing mask.
inline std::vector<std::uint64_t> naive_argmin(const Qubo& q) {
  std::vector<std::uint64_t> best;
  Rational e_best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << q.n); ++mask) {
    const Rational e = qubo_energy(q, bits_of(mask, q.n));
    if (best.empty() || e < e_best) {
      e_best = e;
      best.assign(1, mask);
    } else if (e == e_best) {
      best.push_back(mask);
    }
  }
  return best;
}

/// Random QUBO with small integer or half-integer coefficients.
inline Qubo random_qubo(Rng& rng, std::size_t n, double density = 0.5) {
  Qubo q = empty_qubo(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (uniform_unit(rng) < density) q.add(i, j, Rational(uniform_between(rng, -20, 20), 1 + uniform_below(rng, 2)));
  q.offset = Rational(uniform_between(rng, -5, 5));
  return q;
}

inline Bits random_bits(Rng& rng, std::size_t n) {
  Bits b(n);
  for (auto& x : b) x = random_bit(rng);
  return b;
}

/// Small random instance with integral data; may be infeasible.
inline Instance random_instance(Rng& rng, std::size_t T, std::size_t M, std::int64_t h_max) {
  Matrix<Rational> cost(T, std::vector<Rational>(M)), work(T, std::vector<Rational>(M));
  std::vector<Rational> cap(M);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t m = 0; m < M; ++m) {
      cost[t][m] = uniform_between(rng, 1, 50);
      work[t][m] = uniform_between(rng, 0, h_max);
    }
  for (auto& h : cap) h = uniform_between(rng, 1, h_max);
  return make_instance(cost, work, cap, "random");
}

}  // namespace tkq::testing
