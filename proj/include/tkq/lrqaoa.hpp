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

/// @file lrqaoa.hpp
/// Noiseless statevector simulation of linear-ramp QAOA.
///
/// The circuit starts in |+>^n and applies p layers, each a diagonal cost
/// layer exp(-i gamma_k H_C) followed by the mixer exp(-i beta_k H_M). H_C is
/// the QUBO energy after normalization to max |coefficient| = 1. The angles
/// are not optimized: gamma ramps up and beta ramps down linearly over the
/// layers, a discretized anneal from H_M to H_C.
///
/// H_M defaults to -sum_q X_q, whose ground state is |+>^n, so the ramp
/// carries the start state toward the minimum of H_C. With +sum_q X_q the
/// start state is the top eigenstate and the same ramp drifts toward the
/// maximum; that sign is kept selectable for comparison.
///
/// Amplitude index k encodes the bitstring with variable 0 as the least
/// significant bit.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tkq/errors.hpp"
#include "tkq/evaluator.hpp"
#include "tkq/qubo.hpp"
#include "tkq/random.hpp"
#include "tkq/solvers.hpp"

namespace tkq {

inline constexpr std::size_t kStatevectorLimit = 26;

enum class MixerHamiltonian {
  MinusX,  // H_M = -sum X, layer = apply_mixer_layer(-beta)
  PlusX,   // H_M = +sum X, layer = apply_mixer_layer(beta)
};

struct RampSchedule {
  std::size_t p = 0;
  MixerHamiltonian mixer = MixerHamiltonian::MinusX;
  double delta_gamma = 0.9;
  double delta_beta = 0.6;
  std::vector<double> gammas;
  std::vector<double> betas;

  /// Arbitrary per-layer angles; used to build degenerate circuits in tests.
  static RampSchedule custom(std::vector<double> gammas, std::vector<double> betas) {
    if (gammas.size() != betas.size()) throw InputError("RampSchedule: gamma and beta counts differ");
    RampSchedule s;
    s.p = gammas.size();
    s.delta_gamma = gammas.empty() ? 0 : *std::max_element(gammas.begin(), gammas.end());
    s.delta_beta = betas.empty() ? 0 : *std::max_element(betas.begin(), betas.end());
    s.gammas = std::move(gammas);
    s.betas = std::move(betas);
    return s;
  }
};

/// gamma_k = (k / p) dg and beta_k = ((p - k + 1) / p) db for k = 1..p, so
/// gamma ends at dg, beta starts at db and p = 1 gives (dg, db).
inline RampSchedule lr_schedule(std::size_t p, double delta_gamma = 0.9, double delta_beta = 0.6) {
  if (p == 0) throw InputError("lr_schedule: p must be >= 1");
  if (!(delta_gamma > 0) || !(delta_beta > 0)) throw InputError("lr_schedule: slopes must be positive");
  RampSchedule s;
  s.p = p;
  s.delta_gamma = delta_gamma;
  s.delta_beta = delta_beta;
  const double dp = static_cast<double>(p);
  for (std::size_t k = 1; k <= p; ++k) {
    s.gammas.push_back(static_cast<double>(k) / dp * delta_gamma);
    s.betas.push_back(static_cast<double>(p - k + 1) / dp * delta_beta);
  }
  return s;
}

class StateVector {
 public:
  using Amplitude = std::complex<double>;

  /// |+>^n
  static StateVector uniform(std::size_t n) {
    if (n > kStatevectorLimit) throw TooLarge("statevector: more than 26 qubits");
    StateVector s;
    s.n_ = n;
    const std::size_t dim = std::size_t{1} << n;
    s.amplitudes_.assign(dim, Amplitude(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
    return s;
  }

  static StateVector basis(std::size_t n, std::size_t index) {
    if (n > kStatevectorLimit) throw TooLarge("statevector: more than 26 qubits");
    StateVector s;
    s.n_ = n;
    s.amplitudes_.assign(std::size_t{1} << n, Amplitude(0, 0));
    s.amplitudes_.at(index) = 1;
    return s;
  }

  std::size_t qubits() const { return n_; }
  std::size_t dimension() const { return amplitudes_.size(); }
  std::span<Amplitude> amplitudes() { return amplitudes_; }
  std::span<const Amplitude> amplitudes() const { return amplitudes_; }

  double norm_squared() const {
    double sum = 0;
    for (const auto& a : amplitudes_) sum += std::norm(a);
    return sum;
  }

  double probability(std::size_t index) const { return std::norm(amplitudes_[index]); }

 private:
  std::size_t n_ = 0;
  std::vector<Amplitude> amplitudes_;
};

/// Normalized energy of every basis state, indexed by bitstring value.
inline std::vector<double> precompute_diagonal(const Qubo& q) {
  if (q.n > kStatevectorLimit) throw TooLarge("precompute_diagonal: more than 26 variables");
  const IntegerQubo iq(q);
  if (iq.max_abs_coefficient() == 0) throw InputError("precompute_diagonal: QUBO has no nonzero coefficient");
  // energy / max|coeff| in the common integer scale equals the normalized energy
  const double norm = wide_to_double(iq.max_abs_coefficient());
  std::vector<double> diag(std::size_t{1} << q.n);
  enumerate_energies(iq, [&](std::uint64_t mask, Wide e) { diag[mask] = wide_to_double(e) / norm; });
  return diag;
}

inline void apply_cost_layer(StateVector& state, std::span<const double> diag, double gamma) {
  auto amps = state.amplitudes();
  if (diag.size() != amps.size()) throw InputError("apply_cost_layer: diagonal length does not match the state");
  for (std::size_t k = 0; k < amps.size(); ++k) amps[k] *= std::polar(1.0, -gamma * diag[k]);
}

/// exp(-i beta X) on every qubit:
/// (a0, a1) -> (cos b a0 - i sin b a1, -i sin b a0 + cos b a1).
inline void apply_mixer_layer(StateVector& state, double beta) {
  auto amps = state.amplitudes();
  const double c = std::cos(beta);
  const std::complex<double> mis(0, -std::sin(beta));
  for (std::size_t q = 0; q < state.qubits(); ++q) {
    const std::size_t stride = std::size_t{1} << q;
    for (std::size_t base = 0; base < amps.size(); base += 2 * stride)
      for (std::size_t k = base; k < base + stride; ++k) {
        const auto a0 = amps[k];
        const auto a1 = amps[k + stride];
        amps[k] = c * a0 + mis * a1;
        amps[k + stride] = mis * a0 + c * a1;
      }
  }
}

/// Final state of the circuit for `sched`.
inline StateVector evolve(const Qubo& q, const RampSchedule& sched) {
  if (q.n > kStatevectorLimit) throw TooLarge("run_lrqaoa: more than 26 variables");
  const auto diag = precompute_diagonal(q);
  StateVector state = StateVector::uniform(q.n);
  const double sign = sched.mixer == MixerHamiltonian::MinusX ? -1.0 : 1.0;
  for (std::size_t k = 0; k < sched.gammas.size(); ++k) {
    apply_cost_layer(state, diag, sched.gammas[k]);
    apply_mixer_layer(state, sign * sched.betas[k]);
  }
  return state;
}

/// Total probability of the given basis states (masks, variable 0 = bit 0).
inline double success_probability(const StateVector& state, std::span<const std::uint64_t> targets) {
  double total = 0;
  for (auto mask : targets) total += state.probability(static_cast<std::size_t>(mask));
  return total;
}

/// Draws `shots` basis states from |amplitude|^2 with one sequential stream.
inline std::vector<std::uint64_t> sample_state(const StateVector& state, std::size_t shots, std::uint64_t seed) {
  auto amps = state.amplitudes();
  std::vector<double> cumulative(amps.size());
  double running = 0;
  for (std::size_t k = 0; k < amps.size(); ++k) {
    running += std::norm(amps[k]);
    cumulative[k] = running;
  }
  Rng rng = make_rng(seed, 0x716161);
  std::vector<std::uint64_t> out;
  out.reserve(shots);
  for (std::size_t s = 0; s < shots; ++s) {
    const double u = uniform_unit(rng) * running;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    out.push_back(static_cast<std::uint64_t>(it - cumulative.begin()));
  }
  return out;
}

/// Samples of the LR-QAOA circuit; energies refer to the un-normalized q.
inline SampleSet run_lrqaoa(const Qubo& q, const RampSchedule& sched, std::size_t shots, std::uint64_t seed) {
  if (shots == 0) throw InputError("run_lrqaoa: shots must be >= 1");
  const StateVector state = evolve(q, sched);
  const IntegerQubo iq(q);
  std::vector<Bits> draws;
  draws.reserve(shots);
  for (auto mask : sample_state(state, shots, seed)) draws.push_back(mask_to_bits(mask, q.n));
  SampleMeta meta{"lrqaoa",
                  {{"p", std::to_string(sched.p)},
                   {"dg", format_double(sched.delta_gamma)},
                   {"db", format_double(sched.delta_beta)},
                   {"shots", std::to_string(shots)}},
                  seed};
  if (sched.mixer == MixerHamiltonian::PlusX) meta.params["mixer"] = "+X";
  return make_sample_set(iq, std::move(draws), std::move(meta));
}

// ---------------------------------------------------------------------------
// Logical circuit shape

struct InteractionGraph {
  std::size_t vertices = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // i < j, sorted
};

/// One edge per nonzero off-diagonal coefficient.
inline InteractionGraph interaction_graph(const Qubo& q) {
  InteractionGraph g;
  g.vertices = q.n;
  for (const auto& [key, v] : q.coeffs)
    if (key.first != key.second) g.edges.push_back(key);
  return g;
}

/// Greedy proper edge coloring in edge order: each edge takes the smallest
/// color unused at both endpoints, so at most 2*maxdeg - 1 colors.
inline std::vector<std::size_t> edge_coloring(const InteractionGraph& g) {
  std::vector<std::vector<bool>> used(g.vertices);
  std::vector<std::size_t> color(g.edges.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto [u, v] = g.edges[e];
    if (u == v) throw InputError("edge_coloring: self-loop");
    std::size_t c = 0;
    while ((c < used[u].size() && used[u][c]) || (c < used[v].size() && used[v][c])) ++c;
    for (auto w : {u, v}) {
      if (used[w].size() <= c) used[w].resize(c + 1, false);
      used[w][c] = true;
    }
    color[e] = c;
  }
  return color;
}

inline std::size_t color_count(const std::vector<std::size_t>& coloring) {
  return coloring.empty() ? 0 : *std::max_element(coloring.begin(), coloring.end()) + 1;
}

struct CircuitStats {
  std::size_t qubits = 0;
  std::size_t edges = 0;
  std::size_t colors = 0;
  std::size_t p = 0;
  std::size_t two_qubit_interactions = 0;
  std::size_t cost_layer_depth = 0;
};

inline CircuitStats circuit_stats(const Qubo& q, std::size_t p) {
  const auto g = interaction_graph(q);
  CircuitStats s;
  s.qubits = q.n;
  s.edges = g.edges.size();
  s.colors = color_count(edge_coloring(g));
  s.p = p;
  s.two_qubit_interactions = p * s.edges;
  s.cost_layer_depth = p * s.colors;
  return s;
}

}  // namespace tkq
