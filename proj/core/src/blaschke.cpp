#include "modelspace/blaschke.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "modelspace/random.hpp"

namespace modelspace {

namespace {

void check_generated_radius(double r, std::size_t index) {
  if (!(r >= 0.0) || r > kMaxGeneratorRadius) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "generate_zeros: zero " << index + 1 << " has radius " << r << ", beyond the generator cap 1 - 2^-16";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

BlaschkeSpec::BlaschkeSpec(std::vector<Complex> zeros) : zeros_(std::move(zeros)) {
  if (zeros_.empty()) throw std::invalid_argument("BlaschkeSpec: at least one zero is required");
  info_.reserve(zeros_.size());
  for (std::size_t i = 0; i < zeros_.size(); ++i) {
    const Complex a = zeros_[i];
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()) || !(std::abs(a) < 1.0)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "BlaschkeSpec: zero " << i + 1 << " = (" << a.real() << ", " << a.imag()
          << ") is not in the open unit disk";
      throw std::invalid_argument(msg.str());
    }
    const double r = std::abs(a);
    const double gap = 1.0 - r;
    info_.push_back({r, std::arg(a), gap, std::sqrt(gap * (1.0 + r))});
    for (std::size_t j = 0; j < i; ++j)
      if (zeros_[j] == a) simple_ = false;
  }
}

Complex BlaschkeSpec::factor(std::size_t i, Complex z) const {
  const Complex a = zeros_[i];
  if (a == Complex{}) return z;
  const Complex unimodular = -std::conj(a) / info_[i].radius;
  return unimodular * (z - a) / (1.0 - std::conj(a) * z);
}

Complex BlaschkeSpec::factor(std::size_t i, const CirclePoint& p) const {
  const auto& info = info_[i];
  if (zeros_[i] == Complex{}) return p.z;
  // In the frame psi = theta - arg(a): b = (r - e^{i psi}) / (1 - r e^{i psi}).
  const double psi = p.theta - info.angle;
  const double s = std::sin(0.5 * psi);
  const double sin_psi = std::sin(psi);
  const Complex num(2.0 * s * s - info.gap, -sin_psi);
  const Complex den(info.gap + 2.0 * info.radius * s * s, -info.radius * sin_psi);
  return num / den;
}

void BlaschkeSpec::takenaka(const CirclePoint& p, std::span<Complex> out) const {
  Complex prefix = 1.0;
  double last_angle = std::numeric_limits<double>::quiet_NaN();
  double s = 0.0, sin_psi = 0.0;
  for (std::size_t i = 0; i < zeros_.size(); ++i) {
    const auto& info = info_[i];
    if (zeros_[i] == Complex{}) {
      out[i] = prefix;
      prefix *= p.z;
      continue;
    }
    // Zeros on a common ray share the frame angle.
    if (info.angle != last_angle) {
      const double half = 0.5 * (p.theta - info.angle);
      s = std::sin(half);
      sin_psi = 2.0 * s * std::cos(half);
      last_angle = info.angle;
    }
    const Complex num(2.0 * s * s - info.gap, -sin_psi);
    const Complex den(info.gap + 2.0 * info.radius * s * s, -info.radius * sin_psi);
    const Complex inv = std::conj(den) / std::norm(den);
    out[i] = prefix * (info.scale * inv);
    prefix *= num * inv;
  }
}

Complex BlaschkeSpec::szego_kernel(std::size_t i, const CirclePoint& p) const {
  const auto& info = info_[i];
  if (zeros_[i] == Complex{}) return 1.0;
  const double psi = p.theta - info.angle;
  const double s = std::sin(0.5 * psi);
  return 1.0 / Complex(info.gap + 2.0 * info.radius * s * s, -info.radius * std::sin(psi));
}

Complex BlaschkeSpec::szego_kernel(std::size_t i, Complex z) const { return 1.0 / (1.0 - std::conj(zeros_[i]) * z); }

Complex BlaschkeSpec::eval(Complex z, std::optional<std::size_t> omit) const {
  Complex u = 1.0;
  for (std::size_t i = 0; i < zeros_.size(); ++i)
    if (!omit || *omit != i) u *= factor(i, z);
  return u;
}

Complex BlaschkeSpec::eval(const CirclePoint& p, std::optional<std::size_t> omit) const {
  Complex u = 1.0;
  for (std::size_t i = 0; i < zeros_.size(); ++i)
    if (!omit || *omit != i) u *= factor(i, p);
  return u;
}

BlaschkeSpec BlaschkeSpec::squared() const {
  std::vector<Complex> z(zeros_);
  z.insert(z.end(), zeros_.begin(), zeros_.end());
  return BlaschkeSpec(std::move(z));
}

Complex blaschke_eval(const BlaschkeSpec& spec, Complex z, std::optional<std::size_t> omit) {
  if (std::abs(z) > 1.0 + 1e-15) throw std::domain_error("blaschke_eval: |z| must not exceed 1");
  return spec.eval(z, omit);
}

double pseudo_hyperbolic(Complex a, Complex b) { return std::abs(a - b) / std::abs(1.0 - std::conj(b) * a); }

SeparationProfile separation_profile(const BlaschkeSpec& spec) {
  if (!spec.simple_zeros()) throw std::invalid_argument("separation_profile: zeros must be simple");
  SeparationProfile out;
  out.deltas.assign(spec.size(), 1.0);
  for (std::size_t n = 0; n < spec.size(); ++n)
    for (std::size_t i = 0; i < spec.size(); ++i)
      if (i != n) out.deltas[n] *= pseudo_hyperbolic(spec.zero(n), spec.zero(i));
  out.min_delta = 1.0;
  for (double d : out.deltas) out.min_delta = std::min(out.min_delta, d);
  return out;
}

BlaschkeSpec generate_zeros(const ZeroGenerator& kind, std::size_t count) {
  if (count == 0) throw std::invalid_argument("generate_zeros: count must be positive");
  std::vector<Complex> z;
  z.reserve(count);
  if (const auto* g = std::get_if<zeros::RadialExponential>(&kind)) {
    if (!(g->c > 0.0 && g->c < 1.0)) throw std::invalid_argument("generate_zeros: radialExponential needs 0 < c < 1");
    for (std::size_t k = 1; k <= count; ++k) {
      const double r = 1.0 - std::pow(g->c, static_cast<double>(k));
      check_generated_radius(r, k - 1);
      z.emplace_back(r, 0.0);
    }
  } else if (const auto* g = std::get_if<zeros::Thin>(&kind)) {
    if (!(g->base > 0.0 && g->base < 1.0)) throw std::invalid_argument("generate_zeros: thin needs 0 < base < 1");
    for (std::size_t k = 1; k <= count; ++k) {
      const double r = 1.0 - std::pow(g->base, static_cast<double>(k * k));
      check_generated_radius(r, k - 1);
      z.emplace_back(r, 0.0);
    }
  } else if (const auto* g = std::get_if<zeros::Spokes>(&kind)) {
    if (g->rays == 0 || g->radii.empty()) throw std::invalid_argument("generate_zeros: spokes needs rays and radii");
    if (count > g->rays * g->radii.size())
      throw std::invalid_argument("generate_zeros: spokes has fewer positions than requested zeros");
    for (std::size_t j = 0; j < count; ++j) {
      const double r = g->radii[j / g->rays];
      check_generated_radius(r, j);
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(j % g->rays) / static_cast<double>(g->rays);
      z.push_back(std::polar(r, angle));
    }
  } else if (const auto* g = std::get_if<zeros::RandomDisk>(&kind)) {
    if (!(g->max_radius > 0.0) || g->max_radius > kMaxGeneratorRadius)
      throw std::invalid_argument("generate_zeros: randomDisk needs 0 < maxRadius <= 1 - 2^-16");
    SplitMix64 rng(g->seed);
    for (std::size_t j = 0; j < count; ++j) z.push_back(rng.in_disk(g->max_radius));
  }
  return BlaschkeSpec(std::move(z));
}

}  // namespace modelspace
