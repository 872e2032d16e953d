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

/// @file solvers.hpp
/// Classical samplers over a Qubo: simulated annealing, uniform random
/// sampling and exhaustive search, plus single-bit-flip post-processing.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tkq/errors.hpp"
#include "tkq/evaluator.hpp"
#include "tkq/qubo.hpp"
#include "tkq/random.hpp"

namespace tkq {

struct Sample {
  Bits bits;
  Rational energy;
  std::size_t multiplicity = 1;

  friend bool operator==(const Sample&, const Sample&) = default;
};

struct SampleMeta {
  std::string solver;
  std::map<std::string, std::string> params;
  std::uint64_t seed = 0;

  friend bool operator==(const SampleMeta&, const SampleMeta&) = default;
};

/// Distinct bitstrings ordered by (energy, bitstring).
struct SampleSet {
  std::vector<Sample> entries;
  SampleMeta meta;

  std::size_t total() const {
    std::size_t sum = 0;
    for (const auto& e : entries) sum += e.multiplicity;
    return sum;
  }

  friend bool operator==(const SampleSet&, const SampleSet&) = default;
};

/// Merges duplicates and sorts by (energy, bitstring); energies are exact.
inline SampleSet make_sample_set(const IntegerQubo& q, std::vector<Bits> draws, SampleMeta meta) {
  std::sort(draws.begin(), draws.end());
  std::vector<std::pair<Wide, Sample>> merged;
  for (auto& bits : draws) {
    if (!merged.empty() && merged.back().second.bits == bits) {
      ++merged.back().second.multiplicity;
      continue;
    }
    const Wide e = q.energy(bits);
    merged.push_back({e, Sample{std::move(bits), q.exact(e), 1}});
  }
  std::stable_sort(merged.begin(), merged.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  SampleSet set;
  set.meta = std::move(meta);
  for (auto& [e, s] : merged) set.entries.push_back(std::move(s));
  return set;
}

// ---------------------------------------------------------------------------
// Simulated annealing

struct SaConfig {
  std::size_t steps = 1280;
  std::size_t restarts = 500;
  std::optional<double> t_start{};  // default: max |coefficient|
  std::optional<double> t_end{};    // default: 1e-3 * t_start
  std::uint64_t seed = 0;
};

/// Geometric temperature ladder of `steps` entries from t_start to t_end.
inline std::vector<double> geometric_schedule(double t_start, double t_end, std::size_t steps) {
  std::vector<double> temps(steps);
  if (steps == 1) {
    temps[0] = t_start;
    return temps;
  }
  const double ratio = t_end / t_start;
  for (std::size_t i = 0; i < steps; ++i)
    temps[i] = t_start * std::pow(ratio, static_cast<double>(i) / static_cast<double>(steps - 1));
  return temps;
}

namespace detail {

inline std::pair<double, double> resolve_temperatures(const IntegerQubo& iq, const SaConfig& cfg) {
  double top = iq.real(iq.max_abs_coefficient());
  if (top <= 0) top = 1;
  const double t_start = cfg.t_start.value_or(top);
  const double t_end = cfg.t_end.value_or(1e-3 * t_start);
  if (!(t_end > 0) || !(t_start >= t_end))
    throw InputError("simulated_anneal: temperatures must satisfy t_start >= t_end > 0");
  return {t_start, t_end};
}

}  // namespace detail

/// Single-flip Metropolis annealing, one chain per restart. Each restart
/// starts from a uniformly random bitstring; at step i one uniformly chosen
/// bit is flipped and kept if dE <= 0, else with probability exp(-dE / T_i).
/// Restart r draws from the stream (seed, r), so the result does not depend
/// on the order restarts are executed in.
inline SampleSet simulated_anneal(const Qubo& q, const SaConfig& cfg) {
  if (q.n == 0) throw InputError("simulated_anneal: empty QUBO");
  if (cfg.steps == 0 || cfg.restarts == 0) throw InputError("simulated_anneal: steps and restarts must be >= 1");
  const IntegerQubo iq(q);
  const auto [t_start, t_end] = detail::resolve_temperatures(iq, cfg);
  const auto temps = geometric_schedule(t_start, t_end, cfg.steps);
  const double inv_scale = 1.0 / iq.scale_double();

  std::vector<Bits> finals;
  finals.reserve(cfg.restarts);
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    Rng rng = make_rng(cfg.seed, r);
    Bits init(q.n);
    for (auto& b : init) b = random_bit(rng);
    FieldState state(iq, std::move(init));
    for (double temperature : temps) {
      const auto k = static_cast<std::size_t>(uniform_below(rng, q.n));
      const Wide d = state.delta(k);
      if (d <= 0 || uniform_unit(rng) < std::exp(-wide_to_double(d) * inv_scale / temperature)) state.flip(k);
    }
    finals.push_back(state.bits());
  }

  SampleMeta meta{"sa",
                  {{"steps", std::to_string(cfg.steps)},
                   {"restarts", std::to_string(cfg.restarts)},
                   {"t_start", format_double(t_start)},
                   {"t_end", format_double(t_end)}},
                  cfg.seed};
  return make_sample_set(iq, std::move(finals), std::move(meta));
}

// ---------------------------------------------------------------------------

inline SampleSet random_sample(const Qubo& q, std::size_t shots, std::uint64_t seed) {
  if (shots == 0) throw InputError("random_sample: shots must be >= 1");
  const IntegerQubo iq(q);
  Rng rng = make_rng(seed, 0);
  std::vector<Bits> draws(shots, Bits(q.n));
  for (auto& bits : draws)
    for (auto& b : bits) b = random_bit(rng);
  return make_sample_set(iq, std::move(draws), SampleMeta{"random", {{"shots", std::to_string(shots)}}, seed});
}

/// One left-to-right pass; bit i is flipped when that strictly lowers the
/// energy of the string as updated so far.
inline Bits bitflip_postprocess(const IntegerQubo& iq, const Bits& bits) {
  if (bits.size() != iq.size()) throw InputError("bitflip_postprocess: bitstring length does not match the QUBO");
  FieldState state(iq, bits);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (state.delta(i) < 0) state.flip(i);
  return state.bits();
}

inline Bits bitflip_postprocess(const Qubo& q, const Bits& bits) { return bitflip_postprocess(IntegerQubo(q), bits); }

/// Post-processes every sample (multiplicities carried over) and re-merges.
inline SampleSet postprocess(const Qubo& q, const SampleSet& samples) {
  const IntegerQubo iq(q);
  std::vector<Bits> draws;
  draws.reserve(samples.total());
  for (const auto& e : samples.entries) {
    Bits improved = bitflip_postprocess(iq, e.bits);
    for (std::size_t k = 0; k < e.multiplicity; ++k) draws.push_back(improved);
  }
  SampleMeta meta = samples.meta;
  meta.params["postprocess"] = "bitflip";
  return make_sample_set(iq, std::move(draws), std::move(meta));
}

// ---------------------------------------------------------------------------

inline constexpr std::size_t kBruteForceLimit = 26;

struct Minimizer {
  Bits bits;
  Rational energy;
};

/// Exact global minimum by Gray-code enumeration; ties go to the
/// lexicographically smallest bitstring.
inline Minimizer brute_force_qubo(const Qubo& q) {
  if (q.n > kBruteForceLimit) throw TooLarge("brute_force_qubo: more than 26 variables");
  const IntegerQubo iq(q);
  std::uint64_t best_mask = 0;
  Wide best = 0;
  bool first = true;
  enumerate_energies(iq, [&](std::uint64_t mask, Wide e) {
    if (first || e < best || (e == best && mask_text_less(mask, best_mask))) {
      best = e;
      best_mask = mask;
      first = false;
    }
  });
  return {mask_to_bits(best_mask, q.n), iq.exact(best)};
}

/// Every bitstring attaining the global minimum, as masks (variable i = bit i).
inline std::vector<std::uint64_t> ground_states(const Qubo& q) {
  if (q.n > kBruteForceLimit) throw TooLarge("ground_states: more than 26 variables");
  const IntegerQubo iq(q);
  std::vector<std::uint64_t> masks;
  Wide best = 0;
  enumerate_energies(iq, [&](std::uint64_t mask, Wide e) {
    if (masks.empty() || e < best) {
      best = e;
      masks.assign(1, mask);
    } else if (e == best) {
      masks.push_back(mask);
    }
  });
  std::sort(masks.begin(), masks.end());
  return masks;
}

}  // namespace tkq
