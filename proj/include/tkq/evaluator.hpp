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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "tkq/numeric.hpp"
#include "tkq/qubo.hpp"

namespace tkq {

/// Exact integer image of a Qubo: every coefficient multiplied by the least
/// common multiple of the denominators. Energies are Wide integers in units
/// of 1/scale(); all partial sums provably stay below 2^126.
class IntegerQubo {
 public:
  using Neighbor = std::pair<std::uint32_t, Wide>;

  explicit IntegerQubo(const Qubo& q) : n_(q.n), linear_(q.n, 0), neighbors_(q.n) {
    BigInt lcm = denominator(q.offset);
    for (const auto& [key, v] : q.coeffs) lcm = boost::multiprecision::lcm(lcm, denominator(v));
    scale_ = lcm;

    auto lift = [&](const Rational& v) { return BigInt(numerator(v) * (lcm / denominator(v))); };
    BigInt total = abs_big(lift(q.offset));
    for (const auto& [key, v] : q.coeffs) total += abs_big(lift(v));
    if (total != 0 && boost::multiprecision::msb(total) >= 126)
      throw Overflow("QUBO coefficients exceed the exact 128-bit evaluation range");

    offset_ = to_wide(lift(q.offset));
    for (const auto& [key, v] : q.coeffs) {
      const Wide k = to_wide(lift(v));
      max_abs_ = std::max(max_abs_, wide_abs(k));
      if (key.first == key.second) {
        linear_[key.first] = k;
      } else {
        neighbors_[key.first].emplace_back(static_cast<std::uint32_t>(key.second), k);
        neighbors_[key.second].emplace_back(static_cast<std::uint32_t>(key.first), k);
        ++edges_;
      }
    }
  }

  std::size_t size() const { return n_; }
  std::size_t edge_count() const { return edges_; }
  const BigInt& scale() const { return scale_; }
  Wide offset() const { return offset_; }
  Wide linear(std::size_t i) const { return linear_[i]; }
  std::span<const Neighbor> neighbors(std::size_t i) const { return neighbors_[i]; }
  Wide max_abs_coefficient() const { return max_abs_; }

  Wide energy(std::span<const std::uint8_t> bits) const {
    if (bits.size() != n_) throw InputError("energy: bitstring length does not match the QUBO");
    Wide e = offset_;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!bits[i]) continue;
      e += linear_[i];
      for (const auto& [j, k] : neighbors_[i])
        if (j > i && bits[j]) e += k;
    }
    return e;
  }

  /// Change in scaled energy when bit i is flipped.
  Wide flip_delta(std::span<const std::uint8_t> bits, std::size_t i) const {
    Wide field = linear_[i];
    for (const auto& [j, k] : neighbors_[i])
      if (bits[j]) field += k;
    return bits[i] ? -field : field;
  }

  Rational exact(Wide scaled) const { return Rational(to_bigint(scaled), scale_); }
  double real(Wide scaled) const { return wide_to_double(scaled) / scale_double(); }
  double scale_double() const { return scale_.convert_to<double>(); }

 private:
  static BigInt abs_big(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

  std::size_t n_;
  std::size_t edges_ = 0;
  BigInt scale_ = 1;
  Wide offset_ = 0;
  Wide max_abs_ = 0;
  std::vector<Wide> linear_;
  std::vector<std::vector<Neighbor>> neighbors_;
};

/// A bitstring together with its local fields
/// field_i = Q_ii + sum_{j != i} Q_ij x_j, so each flip delta is O(1) and
/// each accepted flip costs O(degree).
class FieldState {
 public:
  FieldState(const IntegerQubo& q, Bits bits) : q_(&q), bits_(std::move(bits)), field_(q.size()) {
    energy_ = q.energy(bits_);
    for (std::size_t i = 0; i < q.size(); ++i) {
      Wide f = q.linear(i);
      for (const auto& [j, k] : q.neighbors(i))
        if (bits_[j]) f += k;
      field_[i] = f;
    }
  }

  Wide delta(std::size_t i) const { return bits_[i] ? -field_[i] : field_[i]; }

  void flip(std::size_t i) {
    energy_ += delta(i);
    const bool now_set = !bits_[i];
    bits_[i] = now_set;
    for (const auto& [j, k] : q_->neighbors(i)) field_[j] += now_set ? k : -k;
  }

  Wide energy() const { return energy_; }
  const Bits& bits() const { return bits_; }

 private:
  const IntegerQubo* q_;
  Bits bits_;
  std::vector<Wide> field_;
  Wide energy_ = 0;
};

/// Calls visit(mask, scaled_energy) for every x in {0,1}^n, mask bit i being
/// variable i, walking a Gray code so consecutive states differ in one bit.
template <typename Visitor>
void enumerate_energies(const IntegerQubo& q, Visitor&& visit) {
  const std::size_t n = q.size();
  FieldState state(q, Bits(n, 0));
  std::uint64_t mask = 0;
  visit(mask, state.energy());
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < total; ++k) {
    const auto bit = static_cast<std::size_t>(__builtin_ctzll(k));
    state.flip(bit);
    mask ^= std::uint64_t{1} << bit;
    visit(mask, state.energy());
  }
}

inline Bits mask_to_bits(std::uint64_t mask, std::size_t n) {
  Bits bits(n);
  for (std::size_t i = 0; i < n; ++i) bits[i] = (mask >> i) & 1;
  return bits;
}

inline std::uint64_t bits_to_mask(const Bits& bits) {
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) mask |= std::uint64_t{1} << i;
  return mask;
}

/// Lexicographic order of the text forms: variable 0 is compared first.
inline bool mask_text_less(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t diff = a ^ b;
  if (diff == 0) return false;
  return (a & (diff & -diff)) == 0;
}

}  // namespace tkq
