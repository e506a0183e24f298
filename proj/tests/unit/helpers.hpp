#pragma once

#include <cstdint>

#include "morse2d/rational.hpp"

namespace morse2d::testing {

/// Small deterministic generator for property-style tests.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next_u64() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  int next_int(int lo, int hi) {  // inclusive range
    return lo + int(next_u64() % std::uint64_t(hi - lo + 1));
  }
  double next_double(double lo, double hi) {
    return lo + (hi - lo) * double(next_u64() % 1000003ull) / 1000003.0;
  }
  Rational next_rational(int max_num = 9, int max_den = 9) {
    const int num = next_int(-max_num, max_num);
    const int den = next_int(1, max_den);
    return Rational(num, den);
  }
  Rational next_nonzero_rational(int max_num = 9, int max_den = 9) {
    Rational q = next_rational(max_num, max_den);
    while (q == 0) q = next_rational(max_num, max_den);
    return q;
  }
};

}  // namespace morse2d::testing
