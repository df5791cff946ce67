#include "modelspace/hs_theory.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "modelspace/operators.hpp"
#include "modelspace/symbol.hpp"

namespace modelspace {

namespace {

BoundaryFunction synthesize(const ModelBasis& basis, std::span<const Complex> coords, std::size_t m) {
  return basis.synthesize(coords, m);
}

// Boundary values of (z g)' from the nonnegative Fourier coefficients of g.
BoundaryFunction derivative_of_z_times(const BoundaryFunction& g) {
  const std::size_t m = g.grid_size();
  std::vector<Complex> c(m);
  for (std::size_t n = 0; n < m / 2; ++n) c[n] = static_cast<double>(n + 1) * g.fourier(static_cast<long>(n));
  return BoundaryFunction::from_fourier(std::move(c));
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

SplitSymbol split_symbol(const BoundaryFunction& f, const ModelBasis& basis) {
  const auto& spec = basis.spec();
  const std::size_t m = f.grid_size();
  const auto u = BoundaryFunction::sample(m, [&](const CirclePoint& p) { return spec.eval(p); });
  SplitSymbol s{f, project_Ku(f, basis), {}, f, f, 0.0};
  const auto f2 = cauchy_project(u.conj() * f);
  s.f2 = project_Ku(f2, basis);
  s.f1_samples = synthesize(basis, s.f1, m);
  s.f2_samples = synthesize(basis, s.f2, m);
  s.residual = l2_norm(f - s.f1_samples - u * s.f2_samples);
  const double scale = std::max(1.0, l2_norm(f));
  if (!(s.residual <= kSplitTolerance * scale)) {
    std::ostringstream msg;
    msg << "split_symbol: f is not in K_{u^2} at M = " << m << " (reconstruction residual " << s.residual << ")";
    throw std::invalid_argument(msg.str());
  }
  return s;
}

Complex T_transform(const SplitSymbol& s, Complex w, const BlaschkeSpec& spec) {
  if (!(std::abs(w) < 1.0)) throw std::domain_error("T_transform: |w| must be below 1");
  const Complex zf = eval_in_disk(s.f, w, 0) + w * eval_in_disk(s.f, w, 1);
  const Complex zf2 = eval_in_disk(s.f2_samples, w, 0) + w * eval_in_disk(s.f2_samples, w, 1);
  return zf - 2.0 * spec.eval(w) * zf2;
}

Complex T_direct(const SplitSymbol& s, Complex w, const BlaschkeSpec& spec) {
  return inner_product(s.f, kernel_at(spec, w, true, s.f.grid_size()).samples);
}

double hs_norm_via_T(const SplitSymbol& s, const BlaschkeSpec& spec) {
  const std::size_t m = s.f.grid_size();
  const auto u = BoundaryFunction::sample(m, [&](const CirclePoint& p) { return spec.eval(p); });
  const auto tf = derivative_of_z_times(s.f) - 2.0 * (u * derivative_of_z_times(s.f2_samples));
  const Complex pairing = inner_product(s.f, tf);
  if (std::abs(pairing.imag()) > 1e-8 * std::max(1.0, std::abs(pairing.real()))) {
    std::ostringstream msg;
    msg << "hs_norm_via_T: <f, Tf> has imaginary part " << pairing.imag();
    throw NumericalError(msg.str(), std::abs(pairing.imag()));
  }
  return pairing.real();
}

VerificationReport theorem8_check(const BoundaryFunction& f, const ModelBasis& basis) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.check = "theorem8";
  const auto s = split_symbol(f, basis);
  const auto form = assemble_tho(symbols::sampled(f.conj()), basis, HankelConvention::bilinear_form, {});
  const double fro = frobenius_norm(form.matrix);
  const double lhs = fro * fro;
  const double rhs = hs_norm_via_T(s, basis.spec());
  const double denom = std::max(std::abs(lhs), std::abs(rhs));
  rep.add_residual("relative_deviation", denom > 0.0 ? std::abs(lhs - rhs) / denom : 0.0, tolerances::kHilbertSchmidt);
  rep.add_residual("split", s.residual / std::max(1.0, l2_norm(f)), tolerances::kSplit);
  rep.add_metric("frobenius_squared", lhs);
  rep.add_metric("pairing", rhs);
  rep.note_grid(f.grid_size());
  rep.wall_ms = elapsed_ms(start);
  return rep;
}

VerificationReport theorem9_check(const BoundaryFunction& f, const ModelBasis& basis, std::span<const Complex> points) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.check = "theorem9";
  const auto s = split_symbol(f, basis);
  double worst = 0.0;
  for (Complex w : points) {
    const Complex direct = T_direct(s, w, basis.spec());
    worst = std::max(worst, std::abs(T_transform(s, w, basis.spec()) - direct) / std::max(1.0, std::abs(direct)));
  }
  rep.add_residual("pointwise", worst, tolerances::kTransform);
  rep.add_metric("points", static_cast<double>(points.size()));
  rep.note_grid(f.grid_size());
  rep.wall_ms = elapsed_ms(start);
  return rep;
}

double classical_dirichlet_oracle(const BoundaryFunction& f, std::size_t truncation) {
  const long half = static_cast<long>(f.grid_size() / 2);
  const double scale = std::max(1e-300, l2_norm(f));
  for (long n = 1; n <= half; ++n)
    if (std::abs(f.fourier(-n)) > 1e-12 * scale)
      throw std::invalid_argument("classical_dirichlet_oracle: f has negative-frequency content");
  double sum = 0.0;
  const auto top = std::min<std::size_t>(truncation, static_cast<std::size_t>(half));
  for (std::size_t n = 0; n < top; ++n) sum += static_cast<double>(n + 1) * std::norm(f.fourier(static_cast<long>(n)));
  return sum;
}

}  // namespace modelspace
