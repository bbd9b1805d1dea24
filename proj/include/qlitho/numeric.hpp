#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <string>

namespace qlitho {

inline constexpr double kPi = std::numbers::pi;

/// n! as a double. Exact integer arithmetic up to 20!, log-gamma beyond.
inline double factorial(unsigned n) {
  if (n <= 20) {
    std::uint64_t f = 1;
    for (unsigned k = 2; k <= n; ++k) f *= k;
    return static_cast<double>(f);
  }
  return std::exp(std::lgamma(static_cast<double>(n) + 1.0));
}

/// 17 significant digits, enough to round-trip any double.
inline std::string format17(double v) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

/// SplitMix64. Used both as a small RNG and to derive independent
/// substream seeds from (seed, index) pairs.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (one value per call, the partner is dropped).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 mix(seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
  mix.next();
  return mix.next();
}

}  // namespace qlitho
