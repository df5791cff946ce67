#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace modelspace {

/// SplitMix64 (Steele, Lea, Flood 2014).  Every random draw in the lab flows
/// from one of these seeded by the run config, so results are reproducible
/// bit for bit across runs and platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (one value per call, no caching).
  double normal() noexcept {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::complex<double> complex_normal() noexcept { return {normal(), normal()}; }

  /// Uniform (by area) in the disk of the given radius.
  std::complex<double> in_disk(double radius) noexcept {
    const double r = radius * std::sqrt(uniform());
    return std::polar(r, 2.0 * std::numbers::pi * uniform());
  }

  /// Derives an independent stream, e.g. one per check or per sweep row.
  SplitMix64 fork(std::uint64_t salt) noexcept {
    return SplitMix64(next() ^ (salt * 0xD1B54A32D192ED03ull));
  }

 private:
  std::uint64_t state_;
};

}  // namespace modelspace
