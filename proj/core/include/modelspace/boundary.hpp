#pragma once

// Functions on the unit circle: uniform power-of-two grids, discrete Fourier
// analysis, the Cauchy (Riesz) projection, trapezoid-rule L2 pairings and
// interior evaluation through Taylor coefficients.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "modelspace/linalg.hpp"

namespace modelspace {

/// A grid node zeta_k = exp(i theta_k), theta_k = 2 pi k / M.  The angle is
/// carried alongside the point so that Blaschke factors can be evaluated
/// without cancellation when a zero sits close to the circle.
struct CirclePoint {
  double theta;
  Complex z;
};

inline CirclePoint grid_node(std::size_t k, std::size_t grid_size) {
  const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(grid_size);
  return {theta, std::polar(1.0, theta)};
}

bool is_power_of_two(std::size_t n) noexcept;

/// In-place radix-2 DFT, X_n = sum_k x_k exp(-2 pi i k n / M) (unnormalized).
/// `inverse` flips the sign of the exponent; no 1/M factor either way.
void fft_in_place(std::span<Complex> data, bool inverse);

/// Samples on the uniform grid of size M (a power of two) with the discrete
/// Fourier coefficients computed eagerly at construction.  Coefficient of
/// frequency n in [-M/2, M/2) is (1/M) sum_k f(zeta_k) zeta_k^{-n}.
class BoundaryFunction {
 public:
  explicit BoundaryFunction(std::vector<Complex> samples);

  /// Builds a function from coefficients given for frequencies [-M/2, M/2)
  /// in FFT storage order (index n mod M).
  static BoundaryFunction from_fourier(std::vector<Complex> coefficients);

  static BoundaryFunction sample(std::size_t grid_size, const std::function<Complex(const CirclePoint&)>& f);
  static BoundaryFunction constant(std::size_t grid_size, Complex c);
  static BoundaryFunction monomial(std::size_t grid_size, int power);

  std::size_t grid_size() const noexcept { return samples_.size(); }
  std::span<const Complex> samples() const noexcept { return samples_; }
  Complex operator[](std::size_t k) const { return samples_[k]; }

  /// Coefficient of frequency n; zero outside [-M/2, M/2).
  Complex fourier(long n) const;
  std::span<const Complex> fourier_coefficients() const noexcept { return fourier_; }

  BoundaryFunction conj() const;

  friend BoundaryFunction operator+(const BoundaryFunction& a, const BoundaryFunction& b);
  friend BoundaryFunction operator-(const BoundaryFunction& a, const BoundaryFunction& b);
  friend BoundaryFunction operator*(const BoundaryFunction& a, const BoundaryFunction& b);
  friend BoundaryFunction operator*(Complex s, const BoundaryFunction& a);

 private:
  BoundaryFunction(std::vector<Complex> samples, std::vector<Complex> fourier);
  std::vector<Complex> samples_;
  std::vector<Complex> fourier_;
};

/// (1/M) sum_k f(zeta_k) conj(g(zeta_k)).  Exact for trigonometric
/// polynomials whose frequency difference never aliases, e.g. monomials
/// z^a, z^b with a + b < M.
Complex inner_product(const BoundaryFunction& f, const BoundaryFunction& g);
double l2_norm(const BoundaryFunction& f);

/// Orthogonal projection onto H^2: zeroes every strictly negative frequency.
BoundaryFunction cauchy_project(const BoundaryFunction& f);

/// (I - P) f, i.e. only strictly negative frequencies.  With
/// include_constant the zero frequency is kept as well (projection onto the
/// conjugate Hardy space).  The first form is the Hankel convention, the
/// second the bilinear-form convention.
BoundaryFunction antianalytic_project(const BoundaryFunction& f, bool include_constant);

/// f^{(order)}(w) from the analytic Fourier coefficients by termwise
/// differentiation of the power series.
Complex eval_in_disk(const BoundaryFunction& f, Complex w, unsigned order);

struct QuadratureControl {
  std::size_t initial_m = 256;
  std::size_t max_m = 16384;
  double rel_tol = 1e-10;

  void validate() const;
};

template <class T>
struct AdaptiveResult {
  T value;
  std::size_t final_m;  // coarsest grid confirmed by its doubling
  double last_delta;
};

// Distance/magnitude pairs used by the convergence test.
inline double grid_distance(double a, double b) { return std::abs(a - b); }
inline double grid_magnitude(double a) { return std::abs(a); }
inline double grid_distance(Complex a, Complex b) { return std::abs(a - b); }
inline double grid_magnitude(Complex a) { return std::abs(a); }
double grid_distance(const std::vector<Complex>& a, const std::vector<Complex>& b);
double grid_magnitude(const std::vector<Complex>& a);
inline double grid_distance(const ComplexMatrix& a, const ComplexMatrix& b) { return max_abs(a - b); }
inline double grid_magnitude(const ComplexMatrix& a) { return max_abs(a); }

/// Doubles the grid from control.initial_m until two successive values agree
/// to rel_tol relative to max(1, |value|).  The returned value comes from the
/// finer grid of the agreeing pair; final_m reports the coarser one.  Throws
/// NumericalError carrying the last delta if max_m is reached first.
template <class Compute, class T = std::decay_t<std::invoke_result_t<Compute&, std::size_t>>>
AdaptiveResult<T> adaptive_grid(std::string_view task, const QuadratureControl& control, Compute&& compute) {
  control.validate();
  std::size_t m = control.initial_m;
  T previous = compute(m);
  double delta = 0.0;
  while (2 * m <= control.max_m) {
    T next = compute(2 * m);
    delta = grid_distance(next, previous);
    const double scale = std::max(1.0, grid_magnitude(next));
    if (delta <= control.rel_tol * scale) return {std::move(next), m, delta};
    previous = std::move(next);
    m *= 2;
  }
  std::ostringstream msg;
  msg << task << ": quadrature did not converge by M = " << control.max_m << " (last delta " << delta << ")";
  throw NumericalError(msg.str(), delta);
}

/// Callback that adds the values of `width` functions at one grid node into
/// `acc`.  The circle mean of each accumulated slot is the trapezoid rule.
using PointKernel = std::function<void(const CirclePoint&, std::span<Complex> acc)>;

/// (1/M) sum over the grid of the kernel's contributions.  Nodes are streamed
/// (never stored) and summed in fixed-size blocks, so the result is
/// bit-reproducible and memory use does not grow with M.
std::vector<Complex> circle_mean(std::size_t grid_size, std::size_t width, const PointKernel& kernel);

/// circle_mean under adaptive_grid.  Each doubling reuses the sums from the
/// coarser grid and only visits the new odd-indexed nodes.
AdaptiveResult<std::vector<Complex>> adaptive_circle_mean(std::string_view task, const QuadratureControl& control,
                                                          std::size_t width, const PointKernel& kernel);

}  // namespace modelspace
