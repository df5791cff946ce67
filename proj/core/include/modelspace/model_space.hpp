#pragma once

// The model space K_u = H^2 (-) u H^2 of a finite Blaschke product as a
// concrete N-dimensional function space.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "modelspace/blaschke.hpp"
#include "modelspace/boundary.hpp"

namespace modelspace {

/// Values e_1(z) ... e_N(z) of the Takenaka-Malmquist system of `spec`.
void takenaka_values(const BlaschkeSpec& spec, const CirclePoint& p, std::span<Complex> out);
void takenaka_values(const BlaschkeSpec& spec, Complex z, std::span<Complex> out);

/// Takenaka-Malmquist basis e_n = b_1 ... b_{n-1} khat_n, where
/// khat_n(z) = sqrt(1 - |a_n|^2) / (1 - conj(a_n) z).  The vectors are built in
/// closed form and certified by a quadrature Gram matrix.
class ModelBasis {
 public:
  ModelBasis(BlaschkeSpec spec, QuadratureControl control);

  const BlaschkeSpec& spec() const noexcept { return spec_; }
  const QuadratureControl& control() const noexcept { return control_; }
  std::size_t size() const noexcept { return spec_.size(); }
  /// Grid on which the Gram certification converged.
  std::size_t grid_size() const noexcept { return grid_size_; }
  const ComplexMatrix& gram() const noexcept { return gram_; }
  double gram_residual() const noexcept { return gram_residual_; }
  /// ||k_n|| = 1 / sqrt(1 - |a_n|^2) for the kernel at each zero.
  std::vector<double> kernel_norms() const;

  void evaluate(const CirclePoint& p, std::span<Complex> out) const;
  void evaluate(Complex z, std::span<Complex> out) const;
  std::vector<Complex> evaluate(Complex z) const;

  BoundaryFunction sample(std::size_t n, std::size_t grid_size) const;
  /// sum_n coords[n] e_n on the given grid.
  BoundaryFunction synthesize(std::span<const Complex> coords, std::size_t grid_size) const;
  /// Function value of sum_n coords[n] e_n at an interior point.
  Complex synthesize_at(std::span<const Complex> coords, Complex z) const;

 private:
  BlaschkeSpec spec_;
  QuadratureControl control_;
  std::size_t grid_size_ = 0;
  ComplexMatrix gram_;
  double gram_residual_ = 0.0;
};

inline constexpr double kBasisGramTolerance = 1e-10;

/// Throws NumericalError if the Gram residual exceeds kBasisGramTolerance
/// (or quadrature does not converge) by control.max_m.
ModelBasis build_basis(const BlaschkeSpec& spec, const QuadratureControl& control);

/// Matrix G(r, c) = <f_c, f_r> of `width` functions supplied pointwise,
/// computed by adaptive trapezoid quadrature.
AdaptiveResult<ComplexMatrix> quadrature_gram(std::string_view task, const QuadratureControl& control,
                                              std::size_t width,
                                              const std::function<void(const CirclePoint&, std::span<Complex>)>& values);

/// Reproducing kernel of K_u at w: k_w(z) = (1 - conj(u(w)) u(z)) / (1 - conj(w) z),
/// optionally squared.
struct KernelFunction {
  Complex anchor;
  Complex u_at_anchor;
  bool squared = false;
  BoundaryFunction samples;

  static Complex value(const BlaschkeSpec& spec, Complex anchor, Complex u_at_anchor, Complex z, Complex u_at_z);
};

KernelFunction kernel_at(const BlaschkeSpec& spec, Complex w, bool squared, std::size_t grid_size);

/// Coefficients <f, e_n>, computed on f's grid.
std::vector<Complex> project_Ku(const BoundaryFunction& f, const ModelBasis& basis);

/// (Cf)(zeta) = u(zeta) conj(zeta f(zeta)) on the boundary grid.
BoundaryFunction conjugation_C(const BoundaryFunction& f, const BlaschkeSpec& spec);

/// Coordinates (in the e-basis) of the biorthogonal system h_i to the
/// normalized kernels khat_j, obtained from the inverse kernel Gram matrix.
struct DualBasis {
  ComplexMatrix kernel_coords;  // column j: e-coordinates of khat_j
  ComplexMatrix kernel_gram;    // (r, c) = <khat_c, khat_r>
  ComplexMatrix coords;         // column i: e-coordinates of h_i
  double biorthogonality_residual = 0.0;
  std::size_t grid_size = 0;

  BoundaryFunction sample(const ModelBasis& basis, std::size_t i, std::size_t grid) const;
  std::vector<BoundaryFunction> functions(const ModelBasis& basis, std::size_t grid) const;
};

inline constexpr double kMaxKernelGramCondition = 1e12;

/// Throws std::invalid_argument for repeated zeros and NumericalError when
/// the kernel Gram matrix is numerically singular.
DualBasis dual_basis(const ModelBasis& basis);

}  // namespace modelspace
