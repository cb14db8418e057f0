#pragma once

#include <cmath>
#include <cstdint>

// Counter-based random substreams. Every variate is a pure function of
// (seed, index, role), so a simulation is reproducible bit-for-bit no matter
// how slots or trials are partitioned across threads.

namespace covert_aoi::rng {

// Separates the draws consumed within one slot or trial.
enum class Role : std::uint64_t {
  transmit = 1,
  gain_ab = 2,
  gain_bb = 3,
  gain_aw = 4,
  gain_bw = 5,
  hypothesis = 6,
};

// SplitMix64 finalizer; full avalanche on 64-bit inputs.
inline std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t keyed_word(std::uint64_t seed, std::uint64_t index, Role role) noexcept {
  std::uint64_t h = mix64(seed ^ 0x243F6A8885A308D3ull);
  h = mix64(h ^ index);
  return mix64(h ^ static_cast<std::uint64_t>(role));
}

// Uniform on the open interval (0,1); endpoints are never produced.
inline double uniform01(std::uint64_t seed, std::uint64_t index, Role role) noexcept {
  const std::uint64_t bits = keyed_word(seed, index, role) >> 11; // top 53 bits
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

inline bool bernoulli(double prob, std::uint64_t seed, std::uint64_t index, Role role) noexcept {
  return uniform01(seed, index, role) < prob;
}

// Exponential variate with the given rate (mean 1/rate).
inline double sample_gain(double rate, std::uint64_t seed, std::uint64_t index, Role role) noexcept {
  return -std::log(uniform01(seed, index, role)) / rate;
}

} // namespace covert_aoi::rng
