#pragma once

#include <cstdint>

#include "cfqbc/optics.hpp"
#include "cfqbc/random.hpp"

namespace cfqbc::testing {

/// Rational in [0, 1] with a small denominator; endpoints come up often.
inline Rational random_unit(SplitMix64& rng) {
  switch (rng.below(8)) {
    case 0: return Rational(0);
    case 1: return Rational(1);
    default: {
      const auto q = static_cast<long long>(1 + rng.below(97));
      const auto p = static_cast<long long>(rng.below(static_cast<std::uint64_t>(q) + 1));
      return Rational(p, q);
    }
  }
}

inline optics::ExactConfig random_config(SplitMix64& rng) {
  auto t_a = random_unit(rng);
  auto t_b0 = random_unit(rng);
  auto t_b1 = random_unit(rng);
  return optics::ExactConfig::make(t_a, t_b0, t_b1);
}

inline constexpr int kRandomConfigs = 1000;

}  // namespace cfqbc::testing
