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

#include <bitset>

#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace tkq;
using namespace tkq::testing;

namespace {

const VariantSpec kRawSmall = RawPenalty{1000, 10000000};

std::vector<VariantSpec> all_variants() {
  std::vector<VariantSpec> out = raw_grid();
  for (auto& v : scaled_grid()) out.push_back(v);
  out.push_back(RoundedCost{});
  return out;
}

}  // namespace

TEST_CASE("slack_bit_count") {
  CHECK(slack_bit_count(0) == 0);
  CHECK(slack_bit_count(1) == 1);
  CHECK(slack_bit_count(10) == 4);
  CHECK(slack_bit_count(255) == 8);
  CHECK(slack_bit_count(256) == 9);

  const auto inst = load_instance(data_path("instances/t3-m2-b8.json"));
  std::size_t slack = 0;
  for (const auto& h : inst.capacity) slack += slack_bit_count(integral_capacity(h));
  CHECK(slack == 22 - 6);
}

TEST_CASE("slack_coefficients examples") {
  using V = std::vector<std::int64_t>;
  CHECK(slack_coefficients(10) == V{1, 2, 4, 3});
  CHECK(slack_coefficients(1) == V{1});
  CHECK(slack_coefficients(7) == V{1, 2, 4});
  CHECK(slack_coefficients(8) == V{1, 2, 4, 1});
  CHECK(slack_coefficients(0).empty());
}

TEST_CASE("slack_coefficients subset sums cover exactly 0..h") {
  for (std::int64_t h = 1; h <= 4096; ++h) {
    const auto coeffs = slack_coefficients(h);
    REQUIRE(coeffs.size() == slack_bit_count(h));
    std::bitset<8193> reach;
    reach[0] = true;
    for (auto c : coeffs) reach |= reach << static_cast<std::size_t>(c);
    bool ok = true;
    for (std::int64_t v = 0; v <= 8192; ++v) ok = ok && (reach[v] == (v <= h));
    if (!ok) FAIL("subset sums differ from 0..h for h = " << h);
  }
}

TEST_CASE("value_range") {
  std::vector<Rational> objective{1, 2, 2, 1};
  CHECK(value_range(objective) == 6);
  std::vector<Rational> single{5};
  CHECK(value_range(single) == 5);
  CHECK(value_range(std::vector<Rational>{}) == 0);
  std::vector<Rational> mixed{3, -2, Rational(1, 2)};
  CHECK(value_range(mixed) == Rational(11, 2));
}

TEST_CASE("value_range equals max minus min over the hypercube") {
  Rng rng = make_rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + uniform_below(rng, 8);
    std::vector<Rational> a(n);
    for (auto& x : a) x = Rational(uniform_between(rng, -9, 9), 1 + uniform_below(rng, 3));
    Rational lo = 0, hi = 0;
    for (std::uint64_t mask = 0; mask < (1u << n); ++mask) {
      Rational s = 0;
      for (std::size_t i = 0; i < n; ++i)
        if ((mask >> i) & 1) s += a[i];
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    CHECK(value_range(a) == hi - lo);
  }
}

TEST_CASE("variable layout") {
  const auto vm = variable_map(tiny_a());
  CHECK(vm.n == 6);
  CHECK(vm.decision_index(0, 0) == 0);
  CHECK(vm.decision_index(0, 1) == 1);
  CHECK(vm.decision_index(1, 0) == 2);
  CHECK(vm.slack_index == std::vector<std::vector<std::size_t>>{{4}, {5}});

  auto skewed = make_instance({{1, 1}}, {{1, 1}}, {0, 10});
  const auto vm2 = variable_map(skewed);
  CHECK(vm2.n == 2 + 4);
  CHECK(vm2.slack_index[0].empty());
  CHECK(vm2.slack_index[1] == std::vector<std::size_t>{2, 3, 4, 5});
}

TEST_CASE("build_qubo on the two-by-two fixture") {
  const auto inst = tiny_a();
  for (const auto& v : all_variants()) CHECK(build_qubo(inst, v).n == 6);

  const auto q = build_qubo(inst, kRawSmall);
  CHECK(qubo_energy(q, Bits(6, 0)) == 20002000);

  const auto minima = naive_argmin(q);
  REQUIRE(minima.size() == 1);
  const auto d = decode(q, bits_of(minima[0], 6));
  CHECK(d.assignment() == Assignment{{0, 1}});
  CHECK(d.slack == std::vector<std::int64_t>{0, 0});
  CHECK(qubo_energy(q, bits_of(minima[0], 6)) == 2);
}

TEST_CASE("build_qubo energies equal the penalized objective on every bitstring") {
  Rng rng = make_rng(21);
  std::vector<Instance> instances{tiny_a()};
  for (int k = 0; k < 12; ++k)
    instances.push_back(random_instance(rng, 1 + uniform_below(rng, 3), 1 + uniform_below(rng, 3), 6));
  std::vector<VariantSpec> variants = all_variants();
  variants.push_back(ScaledPenalty{Rational(3, 10)});
  variants.push_back(RawPenalty{Rational(7, 2), 1});
  for (const auto& inst : instances) {
    for (const auto& v : variants) {
      const auto q = build_qubo(inst, v);
      if (q.n > 14) continue;
      CAPTURE(inst.cost, penalty_label(v));
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << q.n); ++mask) {
        const auto bits = bits_of(mask, q.n);
        const Rational got = qubo_energy(q, bits), want = oracle_energy(inst, v, bits);
        if (got != want) FAIL("mask " << mask << ": " << to_string(got) << " != " << to_string(want));
      }
    }
  }
}

TEST_CASE("Qubo invariants: upper-triangular keys, no stored zeros") {
  const auto inst = load_instance(data_path("instances/t3-m2-b8.json"));
  for (const auto& v : all_variants()) {
    const auto q = build_qubo(inst, v);
    for (const auto& [key, c] : q.coeffs) {
      CHECK(key.first <= key.second);
      CHECK(key.second < q.n);
      CHECK(c != 0);
    }
  }
}

TEST_CASE("feasible encodings carry no penalty") {
  Rng rng = make_rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = random_instance(rng, 1 + uniform_below(rng, 4), 1 + uniform_below(rng, 3), 20);
    const auto raw = build_qubo(inst, RawPenalty{100, 1000});
    const auto scaled = build_qubo(inst, ScaledPenalty{1});
    for_each_assignment(inst.toolkit_count(), inst.machine_count(), [&](const Assignment& a) {
      if (!feasible(inst, a)) return;
      const auto bits = encode_feasible(inst, raw.varmap, a);
      CHECK(qubo_energy(raw, bits) == plain_cost(inst, a));
      const auto rows = evaluate_rows(inst, inst.cost, bits);
      for (const auto& r : rows.capacity) CHECK(r == 0);
      CHECK(qubo_energy(scaled, bits) == oracle_scaled_energy(inst, inst.cost, 1, bits));
    });
  }
}

TEST_CASE("raw penalties above the total cost separate infeasible bitstrings") {
  Rng rng = make_rng(17);
  int checked = 0;
  for (int trial = 0; trial < 40 && checked < 15; ++trial) {
    const auto inst = random_instance(rng, 1 + uniform_below(rng, 3), 1 + uniform_below(rng, 3), 8);
    Rational total = 0;
    for (const auto& row : inst.cost)
      for (const auto& c : row) total += c;
    const auto q = build_qubo(inst, RawPenalty{total + 1, total + 1});
    if (q.n > 18) continue;
    std::optional<Rational> worst_feasible, best_infeasible;
    for_each_assignment(inst.toolkit_count(), inst.machine_count(), [&](const Assignment& a) {
      if (feasible(inst, a)) worst_feasible = std::max(worst_feasible.value_or(0), plain_cost(inst, a));
    });
    const IntegerQubo iq(q);
    enumerate_energies(iq, [&](std::uint64_t mask, Wide e) {
      const auto a = decode(q, bits_of(mask, q.n)).assignment();
      if (a && feasible(inst, *a)) return;
      const Rational energy = iq.exact(e);
      if (!best_infeasible || energy < *best_infeasible) best_infeasible = energy;
    });
    if (!worst_feasible) continue;
    REQUIRE(best_infeasible);
    CHECK(*best_infeasible > *worst_feasible);
    ++checked;
  }
  CHECK(checked >= 10);
}

TEST_CASE("scaled rows are normalized to a common range") {
  const auto inst = load_instance(data_path("instances/t3-m2-b8.json"));
  // The ls factor is divided out again by the range rescaling whenever the
  // exactly-once rows do not have the largest range.
  CHECK(build_qubo(inst, ScaledPenalty{Rational(1, 10)}).coeffs == build_qubo(inst, ScaledPenalty{1}).coeffs);

  // When the exactly-once rows are the widest term, ls moves v_max.
  auto narrow = make_instance({{0, 0, 0}}, {{0, 0, 0}}, {0, 0, 0});
  narrow.cost[0][0] = Rational(1, 10);
  const auto a = build_qubo(narrow, ScaledPenalty{1}), b = build_qubo(narrow, ScaledPenalty{Rational(1, 10)});
  CHECK_FALSE(a.coeffs == b.coeffs);
}

TEST_CASE("rounded costs use integer division by the smallest positive cost") {
  auto inst = make_instance({{0, 7}, {3, 10}}, {{1, 1}, {1, 1}}, {1, 1});
  const auto c = rounded_costs(inst);
  CHECK(c == Matrix<Rational>{{0, 2}, {1, 3}});
  const auto q = build_qubo(inst, RoundedCost{});
  CHECK(qubo_energy(q, Bits{0, 1, 1, 0, 0, 0}) == oracle_scaled_energy(inst, c, 1, Bits{0, 1, 1, 0, 0, 0}));
}

TEST_CASE("build_qubo rejects bad input") {
  CHECK_THROWS_AS(build_qubo(tiny_a(), RawPenalty{0, 1}), InputError);
  CHECK_THROWS_AS(build_qubo(tiny_a(), RawPenalty{1, -1}), InputError);
  CHECK_THROWS_AS(build_qubo(tiny_a(), ScaledPenalty{0}), InputError);
  auto zero = make_instance({{0, 0}}, {{1, 1}}, {1, 1});
  CHECK_THROWS_AS(build_qubo(zero, RoundedCost{}), InputError);
  auto rough = make_instance({{1}}, {{Rational(1, 2)}}, {1});
  CHECK_THROWS_AS(build_qubo(rough, kRawSmall), InputError);
}

TEST_CASE("build_qubo is deterministic") {
  const auto inst = load_instance(data_path("instances/t9-m2-b9.json"));
  for (const auto& v : all_variants()) CHECK(build_qubo(inst, v) == build_qubo(inst, v));
}

TEST_CASE("penalty grids") {
  CHECK(raw_grid().size() == 9);
  CHECK(scaled_grid().size() == 2);
  CHECK(rounded_grid().size() == 1);
  CHECK(on_default_grid(RawPenalty{100000, 1000000000}));
  CHECK_FALSE(on_default_grid(ScaledPenalty{Rational(3, 10)}));
  CHECK(penalty_label(RawPenalty{1000, 10000000}) == "raw(lm=1000,lt=10000000)");
  CHECK(penalty_label(ScaledPenalty{Rational(1, 10)}) == "scaled(ls=1/10)");
  CHECK(penalty_label(RoundedCost{}) == "rounded");
}

TEST_CASE("qubo_energy examples") {
  Qubo q = empty_qubo(3);
  q.offset = 7;
  CHECK(qubo_energy(q, Bits{0, 0, 0}) == 7);
  q.add(0, 0, -4);
  CHECK(qubo_energy(q, Bits{1, 0, 0}) == 3);
  Qubo pair = empty_qubo(3);
  pair.offset = Rational(1, 2);
  pair.add(1, 0, 5);
  CHECK(pair.coeffs.count({0, 1}) == 1);
  CHECK(qubo_energy(pair, Bits{1, 1, 0}) == Rational(11, 2));
  CHECK(qubo_energy(pair, Bits{1, 0, 1}) == Rational(1, 2));
  CHECK_THROWS_AS(qubo_energy(q, Bits{1, 0}), InputError);
}

TEST_CASE("Qubo::add drops coefficients that cancel") {
  Qubo q = empty_qubo(2);
  q.add(0, 1, 3);
  q.add(1, 0, -3);
  CHECK(q.coeffs.empty());
  CHECK_THROWS_AS(q.add(0, 2, 1), InputError);
}

TEST_CASE("normalize_qubo") {
  Qubo q = empty_qubo(2);
  q.add(0, 0, -10);
  q.add(0, 1, 4);
  q.offset = 5;
  const auto n = normalize_qubo(q);
  CHECK(n.coeffs.at({0, 0}) == -1);
  CHECK(n.coeffs.at({0, 1}) == Rational(2, 5));
  CHECK(n.offset == Rational(1, 2));
  CHECK(n.max_abs_coefficient() == 1);
  CHECK(normalize_qubo(n) == n);
  CHECK_THROWS_AS(normalize_qubo(empty_qubo(3)), InputError);

  const auto raw = build_qubo(tiny_a(), kRawSmall);
  CHECK(naive_argmin(normalize_qubo(raw)) == naive_argmin(raw));
}

TEST_CASE("decode") {
  const auto q = build_qubo(tiny_a(), kRawSmall);
  const auto d = decode(q, parse_bits("100100"));
  CHECK(d.assignment() == Assignment{{0, 1}});
  CHECK(d.slack == std::vector<std::int64_t>{0, 0});

  const auto empty = decode(q, Bits(6, 0));
  CHECK_FALSE(empty.assignment());
  CHECK(empty.candidate == Candidate{{}, {}});

  auto ten = make_instance({{1}}, {{1}}, {10});
  const auto q10 = build_qubo(sanitize_instance(ten), kRawSmall);
  REQUIRE(q10.n == 5);
  CHECK(decode(q10, parse_bits("01101")).slack == std::vector<std::int64_t>{6});

  CHECK_THROWS_AS(decode(q, Bits(5, 0)), InputError);
}

TEST_CASE("encode and decode round-trip every slack value") {
  auto inst = make_instance({{1, 1}}, {{1, 1}}, {13, 6});
  const auto vm = variable_map(inst);
  Qubo q = empty_qubo(vm.n);
  q.varmap = vm;
  for (std::int64_t s0 = 0; s0 <= 13; ++s0)
    for (std::int64_t s1 = 0; s1 <= 6; ++s1) {
      std::vector<std::int64_t> slack{s0, s1};
      const auto bits = encode(vm, Assignment{{1}}, slack);
      const auto d = decode(q, bits);
      CHECK(d.slack == slack);
      CHECK(d.assignment() == Assignment{{1}});
    }
  std::vector<std::int64_t> too_big{14, 0};
  CHECK_THROWS_AS(encode(vm, Assignment{{1}}, too_big), InputError);
}

TEST_CASE("bitstring text form") {
  CHECK(to_string(Bits{1, 0, 1}) == "101");
  CHECK(parse_bits("0110") == Bits{0, 1, 1, 0});
  CHECK_THROWS_AS(parse_bits("01x"), InputError);
}
