#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace cfqbc {

/// SplitMix64 generator. Satisfies UniformRandomBitGenerator; all conversions
/// to doubles and bits below are done by hand so that streams are identical
/// across standard library implementations.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state = 0) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  int bit() { return static_cast<int>((*this)() >> 63); }

  /// Advances the stream as if `count` values had been drawn.
  void discard(std::uint64_t count) { state_ += count * 0x9E3779B97F4A7C15ULL; }

  /// Uniform integer in [0, bound). Lemire's multiply-shift, bias < 2^-64 * bound.
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>((*this)()) * bound) >> 64);
  }

 private:
  std::uint64_t state_;
};

/// Finalizer used to fold stream keys; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based stream: the generator for a given (seed, key...) tuple does
/// not depend on how many other streams were drawn before it, so rounds and
/// trials can be sampled in any order or in parallel.
inline SplitMix64 derive_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t state = mix64(seed ^ 0x6A09E667F3BCC909ULL);
  for (std::uint64_t key : keys) state = mix64(state ^ mix64(key + 0x9E3779B97F4A7C15ULL));
  return SplitMix64(state);
}

/// Stream purposes; part of every derived key so different uses never share a stream.
enum class StreamTag : std::uint64_t {
  AliceSequences = 1,
  BobSequences = 2,
  Round = 3,
  AliceAttack = 4,
  Fabrication = 5,
  BobGuess = 6,
  Trial = 7,
  ConfigSample = 8,
};

inline std::uint64_t tag(StreamTag t) { return static_cast<std::uint64_t>(t); }

}  // namespace cfqbc
