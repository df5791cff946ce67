#include "modelspace/symbol_norms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace modelspace {

namespace {

constexpr double kOuterRingShare = 1e-8;
// Fourier coefficients below this share of the largest are sampling noise.
constexpr double kBandwidthCutoff = 1e-15;

// (1/2pi) int |f^(n)(r e^{it})|^p dt on the grid of f.
double ring_mean(std::span<const Complex> derivative_coeffs, std::size_t n, double r, double p,
                 std::vector<Complex>& scratch) {
  const std::size_t m = scratch.size();
  std::fill(scratch.begin(), scratch.end(), Complex{});
  double rk = 1.0;
  for (std::size_t k = n; k < derivative_coeffs.size(); ++k) {
    scratch[k - n] = derivative_coeffs[k] * rk;
    rk *= r;
  }
  fft_in_place(scratch, true);
  double sum = 0.0;
  if (p == 2.0) {
    for (const auto& v : scratch) sum += std::norm(v);
  } else {
    for (const auto& v : scratch) sum += std::pow(std::abs(v), p);
  }
  return sum / static_cast<double>(m);
}

struct AreaPass {
  double integral = 0.0;
  double outer = 0.0;
};

AreaPass area_integral(std::span<const Complex> derivative_coeffs, std::size_t n, double p, std::size_t rings,
                       double s_max, std::vector<Complex>& scratch) {
  const double h = s_max / static_cast<double>(rings);
  const double np = static_cast<double>(n) * p;
  AreaPass pass;
  for (std::size_t j = 0; j < rings; ++j) {
    const double s = (static_cast<double>(j) + 0.5) * h;
    const double e = std::exp(-s);
    const double r = -std::expm1(-s);
    const double weight = std::pow(e * (2.0 - e), np - 2.0);
    // dA / pi = 2 r dr dt / 2pi, dr = e^{-s} ds.
    const double term = 2.0 * r * e * weight * ring_mean(derivative_coeffs, n, r, p, scratch) * h;
    pass.integral += term;
    if (j + 1 == rings) pass.outer = term;
  }
  return pass;
}

}  // namespace

BesovEstimate besov_norm(const BoundaryFunction& f, double p, const BesovOptions& options) {
  const std::size_t n = options.n;
  if (!(p > 0.0) || !(static_cast<double>(n) * p > 1.0))
    throw std::invalid_argument("besov_norm: requires p > 0 and n * p > 1");
  if (options.rings == 0) throw std::invalid_argument("besov_norm: rings must be positive");
  const std::size_t m = f.grid_size();
  const long half = static_cast<long>(m / 2);
  const double scale = std::max(1e-300, l2_norm(f));
  for (long k = 1; k <= half; ++k)
    if (std::abs(f.fourier(-k)) > 1e-12 * scale) throw std::invalid_argument("besov_norm: f is not analytic");

  // Taylor coefficients of f^(n): k!/(k-n)! fhat(k) at index k.
  std::vector<Complex> coeffs(static_cast<std::size_t>(half));
  double head = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (k >= n) {
      double falling = 1.0;
      for (std::size_t i = 0; i < n; ++i) falling *= static_cast<double>(k - i);
      coeffs[k] = falling * f.fourier(static_cast<long>(k));
    } else {
      double fact = 1.0;
      for (std::size_t i = 2; i <= k; ++i) fact *= static_cast<double>(i);
      head += std::pow(fact * std::abs(f.fourier(static_cast<long>(k))), p);
    }
  }

  // Ring means run on a grid sized to the retained degree, not to f's grid.
  double peak = 0.0;
  for (long k = 0; k < half; ++k) peak = std::max(peak, std::abs(f.fourier(k)));
  std::size_t degree = 0;
  for (long k = half - 1; k >= 0; --k) {
    if (std::abs(f.fourier(k)) > kBandwidthCutoff * peak) {
      degree = static_cast<std::size_t>(k);
      break;
    }
  }
  coeffs.resize(std::max(degree + 1, n));
  const std::size_t width = degree >= n ? degree - n + 1 : 1;
  const std::size_t angular = std::min(m, std::max<std::size_t>(16, std::bit_ceil(4 * width)));

  const double np = static_cast<double>(n) * p;
  const double s_max = std::min(36.0, 40.0 / (np - 1.0));
  std::vector<Complex> scratch(angular);
  BesovEstimate est;
  est.p = p;
  est.n = n;
  est.angular_points = angular;
  std::size_t rings = options.rings;
  AreaPass pass;
  for (std::size_t d = 0; d <= options.doublings; ++d, rings *= 2) {
    pass = area_integral(coeffs, n, p, rings, s_max, scratch);
    est.history.push_back(std::pow(head + pass.integral, 1.0 / p));
    est.rings = rings;
  }
  est.value = est.history.back();
  est.flagged = !std::isfinite(est.value) || pass.outer > kOuterRingShare * std::max(pass.integral, 1e-300);
  return est;
}

std::vector<CompactnessRow> compactness_proxy(std::span<const ComplexMatrix> family) {
  std::vector<CompactnessRow> rows;
  rows.reserve(family.size());
  for (const auto& a : family) {
    CompactnessRow row;
    row.n = std::min(a.rows(), a.cols());
    row.sigma = singular_values(a).values;
    double total = 0.0;
    for (double s : row.sigma) total += s * s;
    row.tail.assign(row.sigma.size(), 0.0);
    double acc = 0.0;
    for (std::size_t k = row.sigma.size(); k-- > 0;) {
      acc += row.sigma[k] * row.sigma[k];
      row.tail[k] = total > 0.0 ? acc / total : 0.0;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace modelspace
