#pragma once

#include <string>
#include <utility>

#include "apstruct/ambient.hpp"
#include "apstruct/rng.hpp"
#include "apstruct/types.hpp"

// Shared helpers for building randomized fixtures. Everything is driven by
// an explicit Rng so failures are reproducible from the seed in the test.
namespace test_support {

inline std::string random_pattern(apstruct::Rng& rng, int width) {
  std::string s;
  for (int i = 0; i < width; ++i) s += rng.uniform01() < 0.5 ? '+' : '-';
  return s;
}

inline apstruct::BlockSwap<double> random_block_swap(apstruct::Rng& rng, int max_p = 3,
                                                     int max_q = 4) {
  const int p = 1 + static_cast<int>(rng.uniform01() * max_p);
  const int q = 1 + static_cast<int>(rng.uniform01() * max_q);
  return apstruct::BlockSwap<double>(
      std::min(p, max_p), std::min(q, max_q),
      apstruct::signs_from_string(random_pattern(rng, std::min(p, max_p))),
      apstruct::signs_from_string(random_pattern(rng, std::min(q, max_q))));
}

inline apstruct::Vec<double> vec3(double a, double b, double c) {
  apstruct::Vec<double> v(3);
  v << a, b, c;
  return v;
}

inline apstruct::Vec<double> vec4(double a, double b, double c, double d) {
  apstruct::Vec<double> v(4);
  v << a, b, c, d;
  return v;
}

}  // namespace test_support
