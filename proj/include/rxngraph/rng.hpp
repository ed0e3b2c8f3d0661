// Copyright 2026 the rxngraph authors
// SPDX-License-Identifier: Apache-2.0

#ifndef RXNGRAPH_RNG_HPP
#define RXNGRAPH_RNG_HPP

#include <cstdint>
#include <cmath>
#include <random>
#include <string_view>
#include <vector>

namespace rxngraph {

// splitmix64 finalizer; the basis of every stable hash in the project.
// Fixed constants, no platform dependence.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t v) {
  return mix64(seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

inline std::uint64_t hash_bytes(std::string_view data,
                                std::uint64_t seed = 0xcbf29ce484222325ULL) {
  // FNV-1a 64, then one mixing round.
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix64(h);
}

// Deterministic RNG. mt19937_64 output is fully specified by the standard;
// all derived draws below use explicit arithmetic (no std::*_distribution,
// whose algorithms vary between standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). Rejection-free modulo is biased for huge n;
  // n here is always far below 2^32 so use rejection sampling for exactness.
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  int index(std::size_t n) { return static_cast<int>(uniform_int(n)); }

  // Standard normal via Box-Muller (deterministic, no cached state).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = uniform_int(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace rxngraph

#endif  // RXNGRAPH_RNG_HPP
