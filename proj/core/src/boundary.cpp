#include "modelspace/boundary.hpp"

#include <algorithm>
#include <stdexcept>

namespace modelspace {

namespace {

constexpr std::size_t kBlock = 4096;

void require_same_grid(const BoundaryFunction& a, const BoundaryFunction& b, const char* op) {
  if (a.grid_size() != b.grid_size()) {
    std::ostringstream msg;
    msg << op << ": grid mismatch (" << a.grid_size() << " vs " << b.grid_size() << ")";
    throw std::invalid_argument(msg.str());
  }
}

std::vector<Complex> forward_coefficients(std::span<const Complex> samples) {
  std::vector<Complex> c(samples.begin(), samples.end());
  fft_in_place(c, false);
  const double inv = 1.0 / static_cast<double>(c.size());
  for (auto& z : c) z *= inv;
  return c;
}

// Frequency of FFT storage index k.
long frequency_of(std::size_t k, std::size_t m) {
  return k < m / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(m);
}

// Sums kernel contributions over nodes first, first + stride, ... < count*stride
// of the grid of size `grid`, block by block in a fixed order.
void accumulate_nodes(std::size_t grid, std::size_t first, std::size_t stride, std::size_t count,
                      std::size_t width, const PointKernel& kernel, std::vector<Complex>& total) {
  std::vector<Complex> block(width);
  for (std::size_t start = 0; start < count; start += kBlock) {
    std::fill(block.begin(), block.end(), Complex{});
    const std::size_t stop = std::min(count, start + kBlock);
    for (std::size_t i = start; i < stop; ++i) kernel(grid_node(first + i * stride, grid), block);
    for (std::size_t j = 0; j < width; ++j) total[j] += block[j];
  }
}

}  // namespace

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

void fft_in_place(std::span<Complex> data, bool inverse) {
  const std::size_t n = data.size();
  if (!is_power_of_two(n)) throw std::invalid_argument("fft: length must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    std::vector<Complex> twiddle(half);
    for (std::size_t k = 0; k < half; ++k)
      twiddle[k] = std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(len));
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const Complex u = data[i + k];
        const Complex v = data[i + k + half] * twiddle[k];
        data[i + k] = u + v;
        data[i + k + half] = u - v;
      }
    }
  }
}

BoundaryFunction::BoundaryFunction(std::vector<Complex> samples) : samples_(std::move(samples)) {
  if (!is_power_of_two(samples_.size()))
    throw std::invalid_argument("BoundaryFunction: grid size must be a power of two");
  for (const auto& z : samples_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw std::invalid_argument("BoundaryFunction: non-finite sample");
  fourier_ = forward_coefficients(samples_);
}

BoundaryFunction::BoundaryFunction(std::vector<Complex> samples, std::vector<Complex> fourier)
    : samples_(std::move(samples)), fourier_(std::move(fourier)) {}

BoundaryFunction BoundaryFunction::from_fourier(std::vector<Complex> coefficients) {
  if (!is_power_of_two(coefficients.size()))
    throw std::invalid_argument("BoundaryFunction::from_fourier: length must be a power of two");
  std::vector<Complex> samples = coefficients;
  fft_in_place(samples, true);
  return BoundaryFunction(std::move(samples));
}

BoundaryFunction BoundaryFunction::sample(std::size_t grid_size,
                                          const std::function<Complex(const CirclePoint&)>& f) {
  if (!is_power_of_two(grid_size)) throw std::invalid_argument("BoundaryFunction::sample: grid size must be a power of two");
  std::vector<Complex> s(grid_size);
  for (std::size_t k = 0; k < grid_size; ++k) s[k] = f(grid_node(k, grid_size));
  return BoundaryFunction(std::move(s));
}

BoundaryFunction BoundaryFunction::constant(std::size_t grid_size, Complex c) {
  return sample(grid_size, [c](const CirclePoint&) { return c; });
}

BoundaryFunction BoundaryFunction::monomial(std::size_t grid_size, int power) {
  return sample(grid_size, [power](const CirclePoint& p) { return std::polar(1.0, power * p.theta); });
}

Complex BoundaryFunction::fourier(long n) const {
  const long m = static_cast<long>(grid_size());
  if (n < -m / 2 || n >= m / 2) return 0.0;
  return fourier_[static_cast<std::size_t>(n < 0 ? n + m : n)];
}

BoundaryFunction BoundaryFunction::conj() const {
  std::vector<Complex> s(samples_.size());
  std::transform(samples_.begin(), samples_.end(), s.begin(), [](Complex z) { return std::conj(z); });
  return BoundaryFunction(std::move(s));
}

BoundaryFunction operator+(const BoundaryFunction& a, const BoundaryFunction& b) {
  require_same_grid(a, b, "operator+");
  std::vector<Complex> s(a.grid_size()), f(a.grid_size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    s[k] = a.samples_[k] + b.samples_[k];
    f[k] = a.fourier_[k] + b.fourier_[k];
  }
  return BoundaryFunction(std::move(s), std::move(f));
}

BoundaryFunction operator-(const BoundaryFunction& a, const BoundaryFunction& b) {
  require_same_grid(a, b, "operator-");
  std::vector<Complex> s(a.grid_size()), f(a.grid_size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    s[k] = a.samples_[k] - b.samples_[k];
    f[k] = a.fourier_[k] - b.fourier_[k];
  }
  return BoundaryFunction(std::move(s), std::move(f));
}

BoundaryFunction operator*(const BoundaryFunction& a, const BoundaryFunction& b) {
  require_same_grid(a, b, "operator*");
  std::vector<Complex> s(a.grid_size());
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = a.samples_[k] * b.samples_[k];
  return BoundaryFunction(std::move(s));
}

BoundaryFunction operator*(Complex c, const BoundaryFunction& a) {
  std::vector<Complex> s(a.grid_size()), f(a.grid_size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    s[k] = c * a.samples_[k];
    f[k] = c * a.fourier_[k];
  }
  return BoundaryFunction(std::move(s), std::move(f));
}

Complex inner_product(const BoundaryFunction& f, const BoundaryFunction& g) {
  require_same_grid(f, g, "inner_product");
  const auto fs = f.samples();
  const auto gs = g.samples();
  Complex total = 0.0;
  for (std::size_t start = 0; start < fs.size(); start += kBlock) {
    Complex block = 0.0;
    const std::size_t stop = std::min(fs.size(), start + kBlock);
    for (std::size_t k = start; k < stop; ++k) block += fs[k] * std::conj(gs[k]);
    total += block;
  }
  return total / static_cast<double>(fs.size());
}

double l2_norm(const BoundaryFunction& f) { return std::sqrt(std::max(0.0, inner_product(f, f).real())); }

BoundaryFunction cauchy_project(const BoundaryFunction& f) {
  const std::size_t m = f.grid_size();
  std::vector<Complex> c(f.fourier_coefficients().begin(), f.fourier_coefficients().end());
  for (std::size_t k = 0; k < m; ++k)
    if (frequency_of(k, m) < 0) c[k] = 0.0;
  return BoundaryFunction::from_fourier(std::move(c));
}

BoundaryFunction antianalytic_project(const BoundaryFunction& f, bool include_constant) {
  const std::size_t m = f.grid_size();
  std::vector<Complex> c(f.fourier_coefficients().begin(), f.fourier_coefficients().end());
  for (std::size_t k = 0; k < m; ++k) {
    const long n = frequency_of(k, m);
    if (n > 0 || (n == 0 && !include_constant)) c[k] = 0.0;
  }
  return BoundaryFunction::from_fourier(std::move(c));
}

Complex eval_in_disk(const BoundaryFunction& f, Complex w, unsigned order) {
  if (!(std::abs(w) < 1.0)) throw std::domain_error("eval_in_disk: point must lie in the open unit disk");
  const std::size_t top = f.grid_size() / 2;  // frequencies 0 .. M/2 - 1
  if (order >= top) return 0.0;
  // Horner on d_j = c_{j+order} (j+order)! / j!.
  Complex acc = 0.0;
  for (std::size_t j = top - order; j-- > 0;) {
    double falling = 1.0;
    for (unsigned i = 1; i <= order; ++i) falling *= static_cast<double>(j + i);
    acc = acc * w + falling * f.fourier(static_cast<long>(j + order));
  }
  return acc;
}

void QuadratureControl::validate() const {
  if (!is_power_of_two(initial_m) || !is_power_of_two(max_m))
    throw std::invalid_argument("QuadratureControl: grid sizes must be powers of two");
  if (initial_m > max_m) throw std::invalid_argument("QuadratureControl: initialM exceeds maxM");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("QuadratureControl: relTol must be positive");
}

double grid_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("grid_distance: length mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double grid_magnitude(const std::vector<Complex>& a) {
  double d = 0.0;
  for (const auto& z : a) d = std::max(d, std::abs(z));
  return d;
}

std::vector<Complex> circle_mean(std::size_t grid_size, std::size_t width, const PointKernel& kernel) {
  if (!is_power_of_two(grid_size)) throw std::invalid_argument("circle_mean: grid size must be a power of two");
  std::vector<Complex> total(width);
  accumulate_nodes(grid_size, 0, 1, grid_size, width, kernel, total);
  for (auto& z : total) z /= static_cast<double>(grid_size);
  return total;
}

AdaptiveResult<std::vector<Complex>> adaptive_circle_mean(std::string_view task, const QuadratureControl& control,
                                                          std::size_t width, const PointKernel& kernel) {
  control.validate();
  std::size_t m = control.initial_m;
  std::vector<Complex> sums(width);
  accumulate_nodes(m, 0, 1, m, width, kernel, sums);
  auto mean_of = [&](std::size_t grid) {
    std::vector<Complex> v(sums);
    for (auto& z : v) z /= static_cast<double>(grid);
    return v;
  };
  std::vector<Complex> previous = mean_of(m);
  double delta = 0.0;
  while (2 * m <= control.max_m) {
    // Nodes of the doubled grid with odd index are the only new ones.
    accumulate_nodes(2 * m, 1, 2, m, width, kernel, sums);
    std::vector<Complex> next = mean_of(2 * m);
    delta = grid_distance(next, previous);
    if (delta <= control.rel_tol * std::max(1.0, grid_magnitude(next))) return {std::move(next), m, delta};
    previous = std::move(next);
    m *= 2;
  }
  std::ostringstream msg;
  msg << task << ": quadrature did not converge by M = " << control.max_m << " (last delta " << delta << ")";
  throw NumericalError(msg.str(), delta);
}

}  // namespace modelspace
