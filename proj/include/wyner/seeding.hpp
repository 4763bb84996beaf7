#pragma once

// Deterministic random streams.
//
// Every random quantity in a simulation comes from its own stream, keyed by
// (master seed, trial, cell, role). Keys are folded through the SplitMix64
// finalizer so that serial and parallel runs draw bit-identical numbers no
// matter which thread handles which trial.

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace wyner {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Combines a parent seed with an ordered list of keys into a child seed.
inline constexpr std::uint64_t derive_seed(std::uint64_t parent,
                                           std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t s = splitmix64(parent);
  for (std::uint64_t k : keys) s = splitmix64(s ^ splitmix64(k + 0x632BE59BD9B4E019ULL));
  return s;
}

/// What a stream is used for. Part of the seed key, so streams never alias.
enum class StreamRole : std::uint64_t {
  DesiredChannel = 1,
  InterferingChannel = 2,
  DesiredCodebook = 3,
  InterferingCodebook = 4,
  Alpha = 5,
  Trial = 6,
  Topology = 7,
};

inline constexpr std::uint64_t role_key(StreamRole r) noexcept {
  return static_cast<std::uint64_t>(r);
}

/// SplitMix64 as a UniformRandomBitGenerator. One word of state, so a fresh
/// stream per (trial, cell, role) costs nothing to set up.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

}  // namespace wyner
