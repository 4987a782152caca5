#pragma once

#include <cstdint>
#include <limits>

namespace mpqkd {

/// SplitMix64 step; used to expand seeds and to hash (seed, stream) pairs.
std::uint64_t splitmix64(std::uint64_t& state);

/// Order-sensitive mix of a seed and a stream index into a new seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// xoshiro256** generator. Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed);
  /// Independent substream `stream` of the generator family keyed by `seed`.
  Xoshiro256(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

 private:
  std::uint64_t s_[4];
};

}  // namespace mpqkd
