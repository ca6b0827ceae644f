// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 risim contributors

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>

namespace risim {

// SplitMix64 step (Steele/Lea/Flood 2014). Pure 64-bit integer arithmetic, so
// every stream is bit-identical across platforms and compilers, unlike the
// unspecified std::* distributions.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Collapses a list of words into one seed. Used to derive independent
// substreams (per channel, per sweep cell, per solver) from a base seed:
// substreams stay stable when unrelated parts of a run change shape.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = base;
  for (std::uint64_t w : words) {
    h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    splitmix64_next(h);
    h = splitmix64_next(h);
  }
  return h;
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64_next(state_); }

  // Uniform on [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Circularly-symmetric complex Gaussian, unit variance: E|z|^2 = 1.
  // Polar form: modulus sqrt(-ln u) with u in (0,1], phase uniform.
  std::complex<double> next_cnormal() {
    double u = 1.0 - next_double();
    double phase = 2.0 * M_PI * next_double();
    double mag = std::sqrt(-std::log(u));
    return {mag * std::cos(phase), mag * std::sin(phase)};
  }

 private:
  std::uint64_t state_;
};

}  // namespace risim
