#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "modelspace/boundary.hpp"

namespace modelspace {

/// Generators refuse zeros closer to the circle than 2^-16.  That is the
/// closest approach the default grid budget (maxM = 2^22) can still certify
/// to 1e-10; quadrature cost grows like 1 / (1 - |a|).
inline constexpr double kMaxGeneratorRadius = 1.0 - 0x1.0p-16;

/// A finite Blaschke product u = prod_n b_n with
///   b_n(z) = (-conj(a_n)/|a_n|) (z - a_n) / (1 - conj(a_n) z),   b_n(z) = z if a_n = 0.
/// Zeros may repeat (u = z^k is allowed); node-based operations check
/// simple_zeros() and refuse repeated zeros.
class BlaschkeSpec {
 public:
  explicit BlaschkeSpec(std::vector<Complex> zeros);

  std::span<const Complex> zeros() const noexcept { return zeros_; }
  std::size_t size() const noexcept { return zeros_.size(); }
  Complex zero(std::size_t i) const { return zeros_[i]; }
  bool simple_zeros() const noexcept { return simple_; }

  /// sqrt(1 - |a_i|^2), the normalization of the Szego kernel at a_i.
  double kernel_scale(std::size_t i) const { return info_[i].scale; }

  Complex factor(std::size_t i, Complex z) const;
  /// b_i on the circle, evaluated in the rotated frame of a_i so that no
  /// digits are lost when a_i is close to the circle.
  Complex factor(std::size_t i, const CirclePoint& p) const;
  /// 1 / (1 - conj(a_i) zeta) on the circle, same accurate frame.
  Complex szego_kernel(std::size_t i, const CirclePoint& p) const;
  Complex szego_kernel(std::size_t i, Complex z) const;

  /// u(z), or u with factor `omit` left out.
  Complex eval(Complex z, std::optional<std::size_t> omit = std::nullopt) const;
  Complex eval(const CirclePoint& p, std::optional<std::size_t> omit = std::nullopt) const;

  /// Takenaka-Malmquist values b_1...b_{i-1} khat_i at a circle point, for
  /// every i, in the accurate frame.
  void takenaka(const CirclePoint& p, std::span<Complex> out) const;

  /// The spec with every zero repeated once more (generates u^2).
  BlaschkeSpec squared() const;

 private:
  struct ZeroInfo {
    double radius;
    double angle;
    double gap;    // 1 - |a|
    double scale;  // sqrt(1 - |a|^2)
  };
  std::vector<Complex> zeros_;
  std::vector<ZeroInfo> info_;
  bool simple_ = true;
};

/// u(z) with the optional factor omitted (u_n in the usual notation).
Complex blaschke_eval(const BlaschkeSpec& spec, Complex z, std::optional<std::size_t> omit = std::nullopt);

struct SeparationProfile {
  std::vector<double> deltas;  // delta_n = |u_n(a_n)| = prod_{i != n} |b_i(a_n)|
  double min_delta = 1.0;
};

/// Throws std::invalid_argument for repeated zeros.
SeparationProfile separation_profile(const BlaschkeSpec& spec);

/// Pseudo-hyperbolic distance |a - b| / |1 - conj(b) a|.
double pseudo_hyperbolic(Complex a, Complex b);

namespace zeros {
/// r_k = 1 - c^k on the positive axis, k = 1..N: an interpolating family.
struct RadialExponential {
  double c;
};
/// r_k = 1 - base^(k^2): separation tends to one (a thin family).
struct Thin {
  double base;
};
/// Zero j sits on ray (j mod rays) at radius radii[j / rays].
struct Spokes {
  std::size_t rays;
  std::vector<double> radii;
};
/// Area-uniform draws in the disk of radius max_radius.
struct RandomDisk {
  std::uint64_t seed;
  double max_radius;
};
}  // namespace zeros

using ZeroGenerator = std::variant<zeros::RadialExponential, zeros::Thin, zeros::Spokes, zeros::RandomDisk>;

/// Throws std::invalid_argument for out-of-range parameters, including any
/// zero beyond kMaxGeneratorRadius.
BlaschkeSpec generate_zeros(const ZeroGenerator& kind, std::size_t count);

}  // namespace modelspace
