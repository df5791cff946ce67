#include "modelspace/model_space.hpp"

#include <sstream>
#include <stdexcept>

namespace modelspace {

AdaptiveResult<ComplexMatrix> quadrature_gram(std::string_view task, const QuadratureControl& control,
                                              std::size_t width,
                                              const std::function<void(const CirclePoint&, std::span<Complex>)>& values) {
  std::vector<Complex> f(width);
  // Upper triangle only; the rest follows from symmetry.
  auto kernel = [&](const CirclePoint& p, std::span<Complex> acc) {
    values(p, f);
    for (std::size_t r = 0; r < width; ++r) {
      const Complex fr = std::conj(f[r]);
      Complex* row = acc.data() + r * width;
      for (std::size_t c = r; c < width; ++c) row[c] += f[c] * fr;
    }
  };
  auto result = adaptive_circle_mean(task, control, width * width, kernel);
  ComplexMatrix g(width, width, std::move(result.value));
  for (std::size_t r = 0; r < width; ++r)
    for (std::size_t c = 0; c < r; ++c) g(r, c) = std::conj(g(c, r));
  return {std::move(g), result.final_m, result.last_delta};
}

ModelBasis::ModelBasis(BlaschkeSpec spec, QuadratureControl control)
    : spec_(std::move(spec)), control_(control) {
  const std::size_t n = spec_.size();
  auto gram = quadrature_gram("build_basis", control_, n,
                              [this](const CirclePoint& p, std::span<Complex> out) { evaluate(p, out); });
  gram_ = std::move(gram.value);
  grid_size_ = gram.final_m;
  gram_residual_ = max_abs(gram_ - ComplexMatrix::identity(n));
  if (!(gram_residual_ <= kBasisGramTolerance)) {
    std::ostringstream msg;
    msg << "build_basis: Gram residual " << gram_residual_ << " exceeds " << kBasisGramTolerance << " at M = "
        << grid_size_;
    throw NumericalError(msg.str(), gram_residual_);
  }
}

std::vector<double> ModelBasis::kernel_norms() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = 1.0 / spec_.kernel_scale(i);
  return out;
}

void takenaka_values(const BlaschkeSpec& spec, const CirclePoint& p, std::span<Complex> out) {
  spec.takenaka(p, out);
}

void takenaka_values(const BlaschkeSpec& spec, Complex z, std::span<Complex> out) {
  Complex prefix = 1.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    out[i] = prefix * spec.kernel_scale(i) * spec.szego_kernel(i, z);
    prefix *= spec.factor(i, z);
  }
}

void ModelBasis::evaluate(const CirclePoint& p, std::span<Complex> out) const { takenaka_values(spec_, p, out); }

void ModelBasis::evaluate(Complex z, std::span<Complex> out) const { takenaka_values(spec_, z, out); }

std::vector<Complex> ModelBasis::evaluate(Complex z) const {
  std::vector<Complex> out(size());
  evaluate(z, out);
  return out;
}

BoundaryFunction ModelBasis::sample(std::size_t n, std::size_t grid_size) const {
  if (n >= size()) throw std::out_of_range("ModelBasis::sample: index out of range");
  std::vector<Complex> e(size());
  return BoundaryFunction::sample(grid_size, [&](const CirclePoint& p) {
    evaluate(p, e);
    return e[n];
  });
}

BoundaryFunction ModelBasis::synthesize(std::span<const Complex> coords, std::size_t grid_size) const {
  if (coords.size() != size()) throw std::invalid_argument("ModelBasis::synthesize: coordinate count mismatch");
  std::vector<Complex> e(size());
  return BoundaryFunction::sample(grid_size, [&](const CirclePoint& p) {
    evaluate(p, e);
    Complex s = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) s += coords[i] * e[i];
    return s;
  });
}

Complex ModelBasis::synthesize_at(std::span<const Complex> coords, Complex z) const {
  if (coords.size() != size()) throw std::invalid_argument("ModelBasis::synthesize_at: coordinate count mismatch");
  const auto e = evaluate(z);
  Complex s = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) s += coords[i] * e[i];
  return s;
}

ModelBasis build_basis(const BlaschkeSpec& spec, const QuadratureControl& control) {
  return ModelBasis(spec, control);
}

Complex KernelFunction::value(const BlaschkeSpec&, Complex anchor, Complex u_at_anchor, Complex z, Complex u_at_z) {
  return (1.0 - std::conj(u_at_anchor) * u_at_z) / (1.0 - std::conj(anchor) * z);
}

KernelFunction kernel_at(const BlaschkeSpec& spec, Complex w, bool squared, std::size_t grid_size) {
  if (!(std::abs(w) < 1.0)) throw std::domain_error("kernel_at: anchor must lie in the open unit disk");
  const Complex uw = spec.eval(w);
  auto samples = BoundaryFunction::sample(grid_size, [&](const CirclePoint& p) {
    const Complex k = KernelFunction::value(spec, w, uw, p.z, spec.eval(p));
    return squared ? k * k : k;
  });
  return KernelFunction{w, uw, squared, std::move(samples)};
}

std::vector<Complex> project_Ku(const BoundaryFunction& f, const ModelBasis& basis) {
  std::vector<Complex> c(basis.size());
  for (std::size_t n = 0; n < basis.size(); ++n) c[n] = inner_product(f, basis.sample(n, f.grid_size()));
  return c;
}

BoundaryFunction conjugation_C(const BoundaryFunction& f, const BlaschkeSpec& spec) {
  const std::size_t m = f.grid_size();
  std::vector<Complex> s(m);
  for (std::size_t k = 0; k < m; ++k) {
    const CirclePoint p = grid_node(k, m);
    s[k] = spec.eval(p) * std::conj(p.z * f[k]);
  }
  return BoundaryFunction(std::move(s));
}

BoundaryFunction DualBasis::sample(const ModelBasis& basis, std::size_t i, std::size_t grid) const {
  return basis.synthesize(coords.column(i), grid);
}

std::vector<BoundaryFunction> DualBasis::functions(const ModelBasis& basis, std::size_t grid) const {
  std::vector<BoundaryFunction> out;
  for (std::size_t i = 0; i < coords.cols(); ++i) out.push_back(sample(basis, i, grid));
  return out;
}

DualBasis dual_basis(const ModelBasis& basis) {
  const auto& spec = basis.spec();
  if (!spec.simple_zeros()) throw std::invalid_argument("dual_basis: zeros must be simple");
  const std::size_t n = basis.size();
  auto joint = quadrature_gram("dual_basis", basis.control(), 2 * n, [&](const CirclePoint& p, std::span<Complex> out) {
    basis.evaluate(p, out.first(n));
    for (std::size_t j = 0; j < n; ++j) out[n + j] = spec.kernel_scale(j) * spec.szego_kernel(j, p);
  });
  DualBasis d;
  d.grid_size = joint.final_m;
  d.kernel_coords = ComplexMatrix(n, n);
  d.kernel_gram = ComplexMatrix(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      d.kernel_coords(r, c) = joint.value(r, n + c);
      d.kernel_gram(r, c) = joint.value(n + r, n + c);
    }
  const auto spectrum = singular_values(d.kernel_gram).values;
  const double cond = spectrum.back() > 0.0 ? spectrum.front() / spectrum.back() : kInfinity;
  if (!(cond <= kMaxKernelGramCondition)) {
    std::ostringstream msg;
    msg << "dual_basis: kernel Gram matrix is numerically singular (condition " << cond << ")";
    throw NumericalError(msg.str(), cond);
  }
  d.coords = d.kernel_coords * inverse(d.kernel_gram);
  const ComplexMatrix bi = d.kernel_coords.adjoint() * d.coords;
  d.biorthogonality_residual = max_abs(bi - ComplexMatrix::identity(n));
  return d;
}

}  // namespace modelspace
