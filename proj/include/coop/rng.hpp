#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace coop {

// Deterministic pseudo-random numbers for the whole project.
//
// Generator (frozen): splitmix64. The state is a 64-bit counter advanced by
// the golden-ratio increment 0x9E3779B97F4A7C15; each output is a bijective
// finalizer mix of the new state. The integer sequence for a given seed is
// identical on every platform and independent of thread count, because a
// generator is never shared: parallel work splits seeds with derive_seed()
// and builds a fresh RngState per stream.
struct RngState {
  std::uint64_t state = 0;
};

// splitmix64 finalizer; also used standalone as a 64-bit mixing hash.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rng_next_u64(RngState& rng) {
  rng.state += 0x9E3779B97F4A7C15ULL;
  return mix64(rng.state);
}

// Uniform in [0, 1), 53-bit resolution.
inline double rng_uniform01(RngState& rng) {
  return static_cast<double>(rng_next_u64(rng) >> 11) * 0x1.0p-53;
}

inline double rng_uniform(RngState& rng, double lo, double hi) {
  return lo + (hi - lo) * rng_uniform01(rng);
}

// Standard normal variate (frozen transform): basic Box-Muller,
//   z = sqrt(-2 ln u1) * cos(2 pi u2)
// with u1 in (0, 1] so the log stays finite. Two uniforms are consumed per
// call and the sine partner is discarded, which keeps the call a pure
// state -> (value, state') step.
inline double rng_gaussian(RngState& rng) {
  const double u1 =
      (static_cast<double>(rng_next_u64(rng) >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(rng_next_u64(rng) >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

// Seed splitting. derive_seed(seed, a) keys an independent stream; chained
// overloads give (seed, a, b, ...) hierarchies. Streams with distinct keys
// never collide with the parent sequence because every hop passes through
// the mix64 bijection with the golden-ratio offset.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed ^ mix64(stream + 0x9E3779B97F4A7C15ULL));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b) {
  return derive_seed(derive_seed(seed, a), b);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b, std::uint64_t c) {
  return derive_seed(derive_seed(seed, a, b), c);
}

}  // namespace coop
