// Copyright 2026 The albench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace albench {

using Rng = std::mt19937_64;

// Sub-seed derivation. Every random decision in the framework draws from a
// generator seeded by SeedChain(master).mix(role).mix(repeat).mix(cycle)...,
// so independent roles never share a stream and reruns replay exactly.
class SeedChain {
 public:
  explicit constexpr SeedChain(std::uint64_t master) : state_(splitmix(master)) {}

  constexpr SeedChain mix(std::uint64_t value) const {
    return SeedChain(state_ ^ (splitmix(value) + 0x9e3779b97f4a7c15ULL + (state_ << 6) + (state_ >> 2)), 0);
  }

  constexpr SeedChain mix(std::string_view label) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : label) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return mix(h);
  }

  constexpr std::uint64_t value() const { return splitmix(state_); }
  Rng rng() const { return Rng(value()); }

 private:
  constexpr SeedChain(std::uint64_t raw, int) : state_(raw) {}

  static constexpr std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::uint64_t state_;
};

// Uniform integer in [lo, hi]. Hand-rolled so streams are identical across
// standard library implementations.
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(rng());
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return lo + static_cast<std::int64_t>(draw % span);
}

// Uniform real in [0, 1).
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

template <typename It>
void shuffle_range(It first, It last, Rng& rng) {
  const auto n = static_cast<std::int64_t>(last - first);
  for (std::int64_t i = n - 1; i > 0; --i) {
    std::swap(first[i], first[uniform_int(rng, 0, i)]);
  }
}

// Beta(a, a) via two gamma draws.
double sample_beta(Rng& rng, double a, double b);

}  // namespace albench
