// Deterministic, portable pseudo-random generator used for experiment setup.
//
// splitmix64 recurrence, identical on every platform:
//   state += 0x9E3779B97F4A7C15
//   z = state; z ^= z >> 30; z *= 0xBF58476D1CE4E5B9
//   z ^= z >> 27; z *= 0x94D049BB133111EB; z ^= z >> 31
// Uniform doubles take the top 53 bits; Gaussians use Box-Muller with two
// fresh uniforms per call, so the consumed stream length is seed-determined.
#pragma once

#include <cmath>
#include <cstdint>

namespace dcfw {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; u1 is shifted into (0, 1] so the log is finite.
  double next_gaussian() {
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // Uniform integer in [0, n) via multiply-shift; bias is O(n / 2^64).
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

}  // namespace dcfw
