#pragma once

// Shared test utilities: deterministic RNG and small random exact inputs.

#include <random>
#include <vector>

#include "wsigma/rational.hpp"

namespace testutil {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(0x5eedu);
  return gen;
}

inline long long rand_int(long long lo, long long hi) {
  std::uniform_int_distribution<long long> d(lo, hi);
  return d(rng());
}

// small rational with numerator in [-4,4], denominator in [1,4]
inline wsigma::Rational rand_rational() {
  return wsigma::Rational(rand_int(-4, 4), rand_int(1, 4));
}

inline wsigma::Rational rand_positive_rational() {
  return wsigma::Rational(rand_int(1, 8), rand_int(1, 4));
}

inline std::vector<wsigma::Rational> rand_entries(int n) {
  std::vector<wsigma::Rational> v;
  v.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) v.push_back(rand_rational());
  return v;
}

}  // namespace testutil
