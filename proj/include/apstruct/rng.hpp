#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

#include "apstruct/types.hpp"

namespace apstruct {

// splitmix64 finalizer. Used to fold path components (case index, point
// index) into a master seed so every sample point owns an independent,
// reconstructible stream.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Seed-splitting rule: start from mix64(master), then absorb each path
// component with mix64(state ^ component). Streams depend only on the
// components, never on how the surrounding loop is partitioned.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(master);
  for (std::uint64_t component : path) s = mix64(s ^ component);
  return s;
}

// Deterministic generator: mt19937_64 plus explicit conversions, so a given
// seed yields the same draws on every platform. Box-Muller is spelled out
// here because std::normal_distribution is not bit-stable across libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1), 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller (cosine branch); u1 is kept in (0, 1]
  // so the logarithm is always finite.
  double gaussian() {
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  template <typename Scalar = double>
  Vec<Scalar> gaussian_vector(Index n) {
    Vec<Scalar> v(n);
    for (Index i = 0; i < n; ++i) v[i] = static_cast<Scalar>(gaussian());
    return v;
  }

 private:
  static constexpr double kTwoPi = 6.283185307179586476925286766559;
  std::mt19937_64 engine_;
};

}  // namespace apstruct
