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

#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace tkq;
using namespace tkq::testing;

namespace {

Qubo tiny_raw() { return build_qubo(tiny_a(), RawPenalty{1000, 10000000}); }

void check_consistent(const Qubo& q, const SampleSet& s, std::size_t expected_total) {
  CHECK(s.total() == expected_total);
  for (std::size_t k = 0; k < s.entries.size(); ++k) {
    CHECK(s.entries[k].energy == qubo_energy(q, s.entries[k].bits));
    if (k > 0) {
      const auto& a = s.entries[k - 1];
      const auto& b = s.entries[k];
      CHECK((a.energy < b.energy || (a.energy == b.energy && to_string(a.bits) < to_string(b.bits))));
    }
  }
}

}  // namespace

TEST_CASE("geometric schedule endpoints") {
  auto temps = geometric_schedule(100, 0.1, 4);
  REQUIRE(temps.size() == 4);
  CHECK(temps.front() == 100);
  CHECK(temps.back() == Catch::Approx(0.1).epsilon(1e-12));
  CHECK(temps[1] == Catch::Approx(10).epsilon(1e-12));
  CHECK(geometric_schedule(3, 1, 1) == std::vector<double>{3});
}

TEST_CASE("simulated_anneal finds the global minimum of the fixture") {
  const auto q = tiny_raw();
  const auto best = brute_force_qubo(q);
  const auto s = simulated_anneal(q, SaConfig{.restarts = 100, .seed = 3});
  check_consistent(q, s, 100);
  CHECK(s.entries.front().bits == best.bits);
  CHECK(s.entries.front().energy == best.energy);
  CHECK(s.meta.solver == "sa");
  CHECK(s.meta.params.at("steps") == "1280");
}

TEST_CASE("simulated_anneal is deterministic in its seed") {
  const auto q = build_qubo(load_instance(data_path("instances/t3-m2-b8.json")), ScaledPenalty{1});
  const SaConfig cfg{.steps = 300, .restarts = 40, .seed = 9};
  CHECK(simulated_anneal(q, cfg) == simulated_anneal(q, cfg));
  SaConfig other = cfg;
  other.seed = 10;
  CHECK_FALSE(simulated_anneal(q, cfg) == simulated_anneal(q, other));
}

TEST_CASE("simulated_anneal accepts every zero-delta flip") {
  // On a zero QUBO every move has dE = 0, so the chain is the initial string
  // with every proposed bit flipped; replay the same random stream.
  Qubo q = empty_qubo(5);
  const SaConfig cfg{.steps = 37, .restarts = 3, .t_start = 1.0, .t_end = 0.5, .seed = 12};
  std::vector<Bits> expected;
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    Rng rng = make_rng(cfg.seed, r);
    Bits b(5);
    for (auto& x : b) x = random_bit(rng);
    for (std::size_t i = 0; i < cfg.steps; ++i) b[uniform_below(rng, 5)] ^= 1;
    expected.push_back(b);
  }
  std::sort(expected.begin(), expected.end());
  std::vector<Bits> got;
  for (const auto& e : simulated_anneal(q, cfg).entries)
    for (std::size_t k = 0; k < e.multiplicity; ++k) got.push_back(e.bits);
  std::sort(got.begin(), got.end());
  CHECK(got == expected);
}

TEST_CASE("simulated_anneal rejects invalid configurations") {
  const auto q = tiny_raw();
  CHECK_THROWS_AS(simulated_anneal(q, SaConfig{.steps = 0}), InputError);
  CHECK_THROWS_AS(simulated_anneal(q, SaConfig{.restarts = 0}), InputError);
  CHECK_THROWS_AS(simulated_anneal(q, SaConfig{.t_start = 1.0, .t_end = 2.0}), InputError);
  CHECK_THROWS_AS(simulated_anneal(q, SaConfig{.t_start = 1.0, .t_end = 0.0}), InputError);
  CHECK_THROWS_AS(simulated_anneal(empty_qubo(0), SaConfig{}), InputError);
}

TEST_CASE("random_sample") {
  const auto q = build_qubo(load_instance(data_path("instances/t3-m2-b8.json")), RawPenalty{1000, 10000000});
  REQUIRE(q.n == 22);
  const auto s = random_sample(q, 1000, 5);
  check_consistent(q, s, 1000);
  CHECK(s.entries.size() > 990);
  CHECK(s == random_sample(q, 1000, 5));

  Qubo one = empty_qubo(1);
  one.add(0, 0, 1);
  const auto small = random_sample(one, 4, 77);
  CHECK(small.total() == 4);
  for (const auto& e : small.entries) CHECK(e.bits.size() == 1);

  CHECK_THROWS_AS(random_sample(q, 0, 1), InputError);
}

TEST_CASE("bitflip_postprocess examples") {
  const auto q = tiny_raw();
  const auto best = brute_force_qubo(q);
  CHECK(bitflip_postprocess(q, best.bits) == best.bits);

  // Search the fixture for a string one flip away from a strictly lower one
  // whose other single flips are all non-improving.
  int found = 0;
  for (std::uint64_t mask = 0; mask < 64; ++mask) {
    const auto bits = bits_of(mask, 6);
    const Rational e = qubo_energy(q, bits);
    std::vector<std::size_t> improving;
    for (std::size_t i = 0; i < 6; ++i) {
      auto flipped = bits;
      flipped[i] ^= 1;
      if (qubo_energy(q, flipped) < e) improving.push_back(i);
    }
    if (improving.size() != 1) continue;
    auto want = bits;
    want[improving[0]] ^= 1;
    bool later_improves = false;
    for (std::size_t i = improving[0] + 1; i < 6; ++i) {
      auto again = want;
      again[i] ^= 1;
      later_improves = later_improves || qubo_energy(q, again) < qubo_energy(q, want);
    }
    if (later_improves) continue;
    CHECK(bitflip_postprocess(q, bits) == want);
    ++found;
  }
  CHECK(found > 0);

  Bits mixed{1, 0, 1, 1, 0};
  CHECK(bitflip_postprocess(empty_qubo(5), mixed) == mixed);
  CHECK_THROWS_AS(bitflip_postprocess(q, Bits(3, 0)), InputError);
}

TEST_CASE("bitflip_postprocess never increases energy") {
  Rng rng = make_rng(99);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + uniform_below(rng, 16);
    const auto q = random_qubo(rng, n);
    const auto bits = random_bits(rng, n);
    const auto once = bitflip_postprocess(q, bits);
    const auto twice = bitflip_postprocess(q, once);
    REQUIRE(qubo_energy(q, once) <= qubo_energy(q, bits));
    REQUIRE(qubo_energy(q, twice) <= qubo_energy(q, once));
  }
}

TEST_CASE("postprocess keeps multiplicities") {
  const auto q = tiny_raw();
  const auto s = random_sample(q, 200, 3);
  const auto p = postprocess(q, s);
  check_consistent(q, p, 200);
  CHECK(p.meta.params.at("postprocess") == "bitflip");
  CHECK(p.entries.front().energy <= s.entries.front().energy);
}

TEST_CASE("brute_force_qubo examples") {
  const auto q = tiny_raw();
  const auto best = brute_force_qubo(q);
  CHECK(best.energy == 2);
  CHECK(decode(q, best.bits).assignment() == Assignment{{0, 1}});

  Qubo zero = empty_qubo(4);
  zero.offset = 3;
  const auto z = brute_force_qubo(zero);
  CHECK(z.bits == Bits(4, 0));
  CHECK(z.energy == 3);

  Qubo single = empty_qubo(1);
  single.add(0, 0, -1);
  single.offset = Rational(1, 4);
  const auto s = brute_force_qubo(single);
  CHECK(s.bits == Bits{1});
  CHECK(s.energy == Rational(-3, 4));

  CHECK_THROWS_AS(brute_force_qubo(empty_qubo(27)), TooLarge);
}

TEST_CASE("brute_force_qubo agrees with naive enumeration and breaks ties lexicographically") {
  Rng rng = make_rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + uniform_below(rng, 10);
    auto q = random_qubo(rng, n, trial % 3 == 0 ? 0.1 : 0.5);
    const auto minima = naive_argmin(q);
    std::vector<std::string> texts;
    for (auto m : minima) texts.push_back(to_string(bits_of(m, n)));
    const auto best = brute_force_qubo(q);
    CHECK(best.energy == qubo_energy(q, bits_of(minima[0], n)));
    CHECK(to_string(best.bits) == *std::min_element(texts.begin(), texts.end()));
    auto gs = ground_states(q);
    auto sorted = minima;
    std::sort(sorted.begin(), sorted.end());
    CHECK(gs == sorted);
  }
}

TEST_CASE("no sampler beats the exhaustive minimum") {
  const auto q = build_qubo(load_instance(data_path("instances/t3-m2-b5.json")), ScaledPenalty{1});
  const auto floor_energy = brute_force_qubo(q).energy;
  for (const auto& s : {simulated_anneal(q, SaConfig{.steps = 200, .restarts = 50, .seed = 1}),
                        random_sample(q, 500, 2), postprocess(q, random_sample(q, 500, 3))})
    for (const auto& e : s.entries) CHECK(e.energy >= floor_energy);
}
