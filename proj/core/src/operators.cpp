#include "modelspace/operators.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "modelspace/random.hpp"

namespace modelspace {

namespace {

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

using PointSymbol = std::function<Complex(const CirclePoint&)>;

ComplexMatrix square_from(std::span<const Complex> acc, std::size_t n) {
  return ComplexMatrix(n, n, std::vector<Complex>(acc.begin(), acc.begin() + static_cast<std::ptrdiff_t>(n * n)));
}

// Entries mean(phi e_c conj(e_r)).
AdaptiveResult<ComplexMatrix> compress(std::string_view task, const PointSymbol& phi, const ModelBasis& basis,
                                       const QuadratureControl& control, std::optional<std::size_t> fixed) {
  const std::size_t n = basis.size();
  auto res = basis_quadrature(task, basis, control, fixed, n * n,
                              [&](const CirclePoint& p, std::span<const Complex> e, std::span<Complex> acc) {
                                const Complex f = phi(p);
                                for (std::size_t r = 0; r < n; ++r) {
                                  const Complex er = std::conj(e[r]) * f;
                                  Complex* row = acc.data() + r * n;
                                  for (std::size_t c = 0; c < n; ++c) row[c] += e[c] * er;
                                }
                              });
  return {square_from(res.value, n), res.final_m, res.last_delta};
}

struct HankelParts {
  ComplexMatrix full;          // mean(phi e_c e_r)
  std::vector<Complex> means;  // mean(phi e_c)
  std::size_t grid = 0;
};

HankelParts hankel_parts(std::string_view task, const PointSymbol& phi, const ModelBasis& basis,
                         const QuadratureControl& control, std::optional<std::size_t> fixed) {
  const std::size_t n = basis.size();
  auto res = basis_quadrature(task, basis, control, fixed, n * n + n,
                              [&](const CirclePoint& p, std::span<const Complex> e, std::span<Complex> acc) {
                                const Complex f = phi(p);
                                for (std::size_t c = 0; c < n; ++c) {
                                  const Complex fc = f * e[c];
                                  acc[n * n + c] += fc;
                                  for (std::size_t r = 0; r < n; ++r) acc[r * n + c] += fc * e[r];
                                }
                              });
  HankelParts out{square_from(res.value, n), {}, res.final_m};
  out.means.assign(res.value.begin() + static_cast<std::ptrdiff_t>(n * n), res.value.end());
  return out;
}

std::vector<Complex> values_at_origin(const BlaschkeSpec& spec) {
  std::vector<Complex> e0(spec.size());
  takenaka_values(spec, Complex{}, e0);
  return e0;
}

// Matrix of U conj(e_r) = C e_r in the basis: (m, r) = mean(u conj(z) conj(e_r e_m)).
AdaptiveResult<ComplexMatrix> conjugation_matrix(const ModelBasis& basis, const QuadratureControl& control) {
  const std::size_t n = basis.size();
  const auto& spec = basis.spec();
  auto res = basis_quadrature("conjugation_matrix", basis, control, std::nullopt, n * n,
                              [&](const CirclePoint& p, std::span<const Complex> e, std::span<Complex> acc) {
                                const Complex w = spec.eval(p) * std::conj(p.z);
                                for (std::size_t m = 0; m < n; ++m) {
                                  const Complex wm = w * std::conj(e[m]);
                                  for (std::size_t r = 0; r < n; ++r) acc[m * n + r] += wm * std::conj(e[r]);
                                }
                              });
  return {square_from(res.value, n), res.final_m, res.last_delta};
}

// ||phi||^2 - sum |<phi, e_n>|^2, relative to max(1, ||phi||^2).
double model_space_defect(std::string_view task, const PointSymbol& phi, const ModelBasis& basis,
                          const QuadratureControl& control, std::optional<std::size_t> fixed) {
  const std::size_t n = basis.size();
  auto res = basis_quadrature(task, basis, control, fixed, n + 1,
                              [&](const CirclePoint& p, std::span<const Complex> e, std::span<Complex> acc) {
                                const Complex f = phi(p);
                                acc[0] += std::norm(f);
                                for (std::size_t i = 0; i < n; ++i) acc[i + 1] += f * std::conj(e[i]);
                              });
  double captured = 0.0;
  for (std::size_t i = 0; i < n; ++i) captured += std::norm(res.value[i + 1]);
  const double total = res.value[0].real();
  return std::abs(total - captured) / std::max(1.0, total);
}

void require_in_model_space(std::string_view what, const PointSymbol& phi, const ModelBasis& basis,
                            const QuadratureControl& control, std::optional<std::size_t> fixed) {
  const double defect = model_space_defect(what, phi, basis, control, fixed);
  if (!(defect <= 1e-8)) {
    std::ostringstream msg;
    msg << what << ": symbol is not in K_u (norm defect " << defect << ")";
    throw std::invalid_argument(msg.str());
  }
}

PointSymbol bind(const SymbolEvaluator& ev) {
  return [&ev](const CirclePoint& p) { return ev.at(p); };
}

}  // namespace

std::string basis_tag(const BlaschkeSpec& spec) {
  // FNV-1a over the bit patterns of the zeros.
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](double x) {
    const auto bits = std::bit_cast<std::uint64_t>(x);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& z : spec.zeros()) {
    mix(z.real());
    mix(z.imag());
  }
  std::ostringstream out;
  out << "blaschke:N=" << spec.size() << ":" << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

AdaptiveResult<std::vector<Complex>> basis_quadrature(std::string_view task, const ModelBasis& basis,
                                                      const QuadratureControl& control,
                                                      std::optional<std::size_t> fixed_grid, std::size_t width,
                                                      const BasisKernel& kernel) {
  const auto& spec = basis.spec();
  std::vector<Complex> e(spec.size());
  PointKernel k = [&](const CirclePoint& p, std::span<Complex> acc) {
    takenaka_values(spec, p, e);
    kernel(p, e, acc);
  };
  if (fixed_grid) return {circle_mean(*fixed_grid, width, k), *fixed_grid, 0.0};
  return adaptive_circle_mean(task, control, width, k);
}

OperatorMatrix assemble_tto(const SymbolSpec& symbol, const ModelBasis& basis, const QuadratureControl& control) {
  SymbolEvaluator ev(symbol, basis.spec());
  auto res = compress("assemble_tto", bind(ev), basis, control, ev.fixed_grid());
  return {std::move(res.value), basis_tag(basis.spec()), symbol, res.final_m};
}

OperatorMatrix assemble_tho(const SymbolSpec& symbol, const ModelBasis& basis, HankelConvention convention,
                            const QuadratureControl& control) {
  SymbolEvaluator ev(symbol, basis.spec());
  auto parts = hankel_parts("assemble_tho", bind(ev), basis, control, ev.fixed_grid());
  ComplexMatrix m = std::move(parts.full);
  if (convention == HankelConvention::operator_form) {
    const auto e0 = values_at_origin(basis.spec());
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) -= e0[r] * parts.means[c];
  }
  return {std::move(m), basis_tag(basis.spec()), symbol, parts.grid};
}

VerificationReport lemma1_factorization(const SymbolSpec& phi, const ModelBasis& basis,
                                        const QuadratureControl& control) {
  Stopwatch clock;
  VerificationReport rep;
  rep.check = "lemma1";
  const auto& spec = basis.spec();
  const std::size_t n = basis.size();
  SymbolEvaluator ev(phi, spec);
  const auto fixed = ev.fixed_grid();
  require_in_model_space("lemma1_factorization", bind(ev), basis, control, fixed);

  const auto a = compress("lemma1: A_phi", bind(ev), basis, control, fixed);
  rep.note_grid(a.final_m);
  // conj(C phi) = conj(u) z phi on the circle.
  PointSymbol hankel_symbol = [&](const CirclePoint& p) { return std::conj(spec.eval(p)) * p.z * ev.at(p); };
  const auto parts = hankel_parts("lemma1: B", hankel_symbol, basis, control, fixed);
  rep.note_grid(parts.grid);
  const auto cm = conjugation_matrix(basis, control);
  rep.note_grid(cm.final_m);

  const auto e0 = values_at_origin(spec);
  ComplexMatrix b(n, n), r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < n; ++c) {
      r(i, c) = parts.means[c] * e0[i];  // <e_c, C phi> conj(P_u 1)
      b(i, c) = parts.full(i, c) - r(i, c);
    }
  rep.add_residual("matrix_form", max_abs(a.value - cm.value * (b + r)), tolerances::kFactorization);

  // Function form on a grid: U((I - P)(conj(C phi) e_n) + <e_n, C phi>).
  QuadratureControl grid_control = control;
  grid_control.initial_m = fixed ? *fixed : std::max(control.initial_m, a.final_m);
  grid_control.max_m = std::max(grid_control.max_m, grid_control.initial_m * 2);
  auto residual_at = [&](std::size_t m) {
    if (fixed && m != *fixed) return 0.0;
    std::vector<BoundaryFunction> es;
    for (std::size_t i = 0; i < n; ++i) es.push_back(basis.sample(i, m));
    std::vector<Complex> hs(m), us(m);
    for (std::size_t k = 0; k < m; ++k) {
      const auto p = grid_node(k, m);
      hs[k] = hankel_symbol(p);
      us[k] = spec.eval(p) * std::conj(p.z);
    }
    const BoundaryFunction hsym(std::move(hs)), usym(std::move(us));
    double worst = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      const auto h = hsym * es[c];
      const auto g = h - cauchy_project(h) + BoundaryFunction::constant(m, h.fourier(0));
      auto lhs = BoundaryFunction::constant(m, 0.0);
      for (std::size_t i = 0; i < n; ++i) lhs = lhs + a.value(i, c) * es[i];
      worst = std::max(worst, l2_norm(lhs - usym * g));
    }
    return worst;
  };
  if (fixed) {
    rep.add_residual("hankel_form", residual_at(*fixed), tolerances::kFactorization);
  } else {
    const auto hf = adaptive_grid("lemma1: hankel form", grid_control, residual_at);
    rep.add_residual("hankel_form", hf.value, tolerances::kFactorization);
    rep.note_grid(hf.final_m);
  }

  // U is unitary because |u| = 1 on the circle: sample the modulus defect.
  double unimodular = 0.0;
  for (std::size_t k = 0; k < 1024; ++k)
    unimodular = std::max(unimodular, std::abs(std::abs(spec.eval(grid_node(k, 1024))) - 1.0));
  rep.add_residual("U_unitarity", unimodular, 1e-10);
  rep.add_metric("rank_one_norm", frobenius_norm(r));
  rep.add_metric("B_norm", frobenius_norm(b));
  rep.wall_ms = clock.elapsed_ms();
  return rep;
}

VerificationReport lemma2_factorization(const SymbolSpec& psi, const ModelBasis& basis,
                                        const QuadratureControl& control) {
  Stopwatch clock;
  VerificationReport rep;
  rep.check = "lemma2";
  const auto& spec = basis.spec();
  const std::size_t n = basis.size();
  SymbolEvaluator ev(psi, spec);
  const auto fixed = ev.fixed_grid();
  const Complex at_zero = ev.at(Complex{});
  if (std::abs(at_zero) > 1e-12) {
    std::ostringstream msg;
    msg << "lemma2_factorization: psi(0) = " << std::abs(at_zero) << " must vanish";
    throw std::invalid_argument(msg.str());
  }
  require_in_model_space("lemma2_factorization", bind(ev), basis, control, fixed);

  PointSymbol conj_psi = [&](const CirclePoint& p) { return std::conj(ev.at(p)); };
  const auto a = compress("lemma2: A_conj(psi)", conj_psi, basis, control, fixed);
  const auto a_psi = compress("lemma2: A_psi", bind(ev), basis, control, fixed);
  rep.note_grid(a.final_m);
  // conj(nu u) with nu = psi conj(z) on the circle.
  PointSymbol hankel_symbol = [&](const CirclePoint& p) {
    return std::conj(ev.at(p) * std::conj(p.z) * spec.eval(p));
  };
  const auto parts = hankel_parts("lemma2: B", hankel_symbol, basis, control, fixed);
  rep.note_grid(parts.grid);
  const auto cm = conjugation_matrix(basis, control);
  const auto e0 = values_at_origin(spec);
  ComplexMatrix b(n, n), v(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < n; ++c) {
      v(i, c) = parts.means[c] * e0[i];
      b(i, c) = parts.full(i, c) - v(i, c);
    }
  rep.add_residual("matrix_form", max_abs(a.value - cm.value * (b + v)), tolerances::kFactorization);
  rep.add_residual("adjoint", max_abs(a.value - a_psi.value.adjoint()), tolerances::kAdjoint);
  rep.add_metric("rank_one_norm", frobenius_norm(v));
  rep.add_metric("B_norm", frobenius_norm(b));
  rep.wall_ms = clock.elapsed_ms();
  return rep;
}

VerificationReport lemma3_expansion(const NodeValuesSymbol& phi, const ModelBasis& basis,
                                    const QuadratureControl& control) {
  Stopwatch clock;
  VerificationReport rep;
  rep.check = "lemma3";
  const auto& spec = basis.spec();
  const std::size_t n = basis.size();
  if (!spec.simple_zeros()) throw std::invalid_argument("lemma3_expansion: zeros must be simple");
  if (phi.values.size() != n) throw std::invalid_argument("lemma3_expansion: one value per zero is required");

  // Newton form of the polynomial interpolant of degree N - 1.
  std::vector<Complex> dd(phi.values);
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = n - 1; i >= level; --i)
      dd[i] = (dd[i] - dd[i - 1]) / (spec.zero(i) - spec.zero(i - level));
  auto newton = [&](Complex z) {
    Complex v = dd[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) v = v * (z - spec.zero(i)) + dd[i];
    return v;
  };
  double interp = 0.0;
  for (std::size_t i = 0; i < n; ++i) interp = std::max(interp, std::abs(newton(spec.zero(i)) - phi.values[i]));
  rep.add_metric("interpolation_defect", interp);

  const auto a_poly = compress("lemma3: A_p", [&](const CirclePoint& p) { return newton(p.z); }, basis, control, {});
  rep.note_grid(a_poly.final_m);
  ComplexMatrix sum(n, n);
  double rank_one_defect = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ai = assemble_tto(symbols::lagrange(i), basis, control);
    rep.note_grid(ai.grid_size);
    const auto s = singular_values(ai.matrix).values;
    if (s.size() > 1 && s[0] > 0.0) rank_one_defect = std::max(rank_one_defect, s[1] / s[0]);
    sum += phi.values[i] * ai.matrix;
  }
  rep.add_residual("expansion", frobenius_norm(a_poly.value - sum), tolerances::kLemma3);

  const auto sep = separation_profile(spec);
  double bound = 0.0;
  for (std::size_t i = 0; i < n; ++i) bound += std::abs(phi.values[i]) / sep.deltas[i];
  const double s1 = schatten_norm(a_poly.value, 1.0);
  rep.add_metric("trace_norm", s1);
  rep.add_metric("trace_norm_bound", bound);
  rep.add_residual("trace_norm_excess", std::max(0.0, s1 - bound) / std::max(bound, 1e-300), tolerances::kBoundSlack);
  rep.add_metric("alpha_rank_one_defect", rank_one_defect);
  rep.wall_ms = clock.elapsed_ms();
  return rep;
}

VerificationReport compressed_shift_power(const ModelBasis& basis, std::size_t k, const QuadratureControl& control) {
  if (k == 0) throw std::invalid_argument("compressed_shift_power: k must be at least 1");
  Stopwatch clock;
  VerificationReport rep;
  rep.check = "shift_power";
  const auto az = assemble_tto(symbols::monomial(1), basis, control);
  const auto azk = assemble_tto(symbols::monomial(static_cast<long>(k)), basis, control);
  rep.note_grid(az.grid_size);
  rep.note_grid(azk.grid_size);
  ComplexMatrix power = az.matrix;
  for (std::size_t i = 1; i < k; ++i) power = power * az.matrix;
  rep.add_residual("power_identity", frobenius_norm(power - azk.matrix), tolerances::kShiftPower);
  rep.add_metric("k", static_cast<double>(k));
  rep.wall_ms = clock.elapsed_ms();
  return rep;
}

std::vector<Complex> berezin_at_nodes(const SymbolSpec& phi, const SymbolSpec& psi, const ModelBasis& basis,
                                      const QuadratureControl& control) {
  const auto& spec = basis.spec();
  if (!spec.simple_zeros()) throw std::invalid_argument("berezin_at_nodes: zeros must be simple");
  const std::size_t n = basis.size();
  SymbolEvaluator f(phi, spec), g(psi, spec);
  std::optional<std::size_t> fixed = f.fixed_grid() ? f.fixed_grid() : g.fixed_grid();
  auto res = basis_quadrature("berezin_at_nodes", basis, control, fixed, n,
                              [&](const CirclePoint& p, std::span<const Complex>, std::span<Complex> acc) {
                                const Complex s = f.at(p) + std::conj(g.at(p));
                                for (std::size_t i = 0; i < n; ++i) {
                                  const Complex k = spec.kernel_scale(i) * spec.szego_kernel(i, p);
                                  acc[i] += s * std::norm(k);
                                }
                              });
  return res.value;
}

VerificationReport eigenrelation_check(const SymbolSpec& phi, const ModelBasis& basis,
                                       const QuadratureControl& control) {
  Stopwatch clock;
  VerificationReport rep;
  rep.check = "theorem3b";
  if (!is_analytic(phi)) throw std::invalid_argument("eigenrelation_check: symbol must be analytic");
  const auto& spec = basis.spec();
  const std::size_t n = basis.size();
  SymbolEvaluator ev(phi, spec);
  const auto a = assemble_tto(phi, basis, control);
  const auto a_bar = assemble_tto(symbols::conjugate(phi), basis, control);
  const auto dual = dual_basis(basis);
  rep.note_grid(a.grid_size);
  rep.note_grid(a_bar.grid_size);
  rep.note_grid(dual.grid_size);

  double kernel = 0.0, dual_rel = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const Complex value = ev.at(spec.zero(j));
    const auto kc = dual.kernel_coords.column(j);
    const auto lhs = a_bar.matrix * std::span<const Complex>(kc);
    std::vector<Complex> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = lhs[i] - std::conj(value) * kc[i];
    kernel = std::max(kernel, vector_norm(diff));

    const auto hc = dual.coords.column(j);
    const auto ah = a.matrix * std::span<const Complex>(hc);
    for (std::size_t i = 0; i < n; ++i) diff[i] = ah[i] - value * hc[i];
    dual_rel = std::max(dual_rel, vector_norm(diff) / vector_norm(hc));
  }
  rep.add_residual("kernel_eigenrelation", kernel, tolerances::kKernelEigen);
  rep.add_residual("dual_eigenrelation", dual_rel, tolerances::kDualEigen);
  rep.add_metric("biorthogonality", dual.biorthogonality_residual);

  // Closed-form dual candidate: the direction of P_u(u_j), u_j the omitted
  // product, against the Gram-inverse dual vector.  Reported, not asserted.
  double direction = 0.0;
  const std::size_t m = 2 * basis.grid_size();
  for (std::size_t j = 0; j < n; ++j) {
    const auto uj = BoundaryFunction::sample(m, [&](const CirclePoint& p) { return blaschke_eval(spec, p.z, j); });
    const auto pc = project_Ku(uj, basis);
    const auto hc = dual.coords.column(j);
    Complex overlap = 0.0;
    for (std::size_t i = 0; i < n; ++i) overlap += std::conj(hc[i]) * pc[i];
    direction = std::max(direction, 1.0 - std::abs(overlap) / (vector_norm(pc) * vector_norm(hc)));
  }
  rep.add_metric("omitted_product_direction_gap", direction);
  rep.wall_ms = clock.elapsed_ms();
  return rep;
}

VerificationReport crofoot_check(Complex alpha, const SymbolSpec& phi, const ModelBasis& basis,
                                 const QuadratureControl& control) {
  if (!(std::abs(alpha) < 1.0)) throw std::invalid_argument("crofoot_check: |alpha| must be below 1");
  Stopwatch clock;
  VerificationReport rep;
  rep.check = "crofoot";
  const auto& spec = basis.spec();
  const std::size_t n = basis.size();
  SymbolEvaluator ev(phi, spec);
  const double c2 = 1.0 - std::norm(alpha);
  // Slots: Gram of T e_n, phi-compression of T e_n, and A^u of phi / (1 - alpha conj(u)).
  const std::size_t nn = n * n;
  auto res = basis_quadrature("crofoot_check", basis, control, ev.fixed_grid(), 3 * nn,
                              [&](const CirclePoint& p, std::span<const Complex> e, std::span<Complex> acc) {
                                const Complex u = spec.eval(p);
                                const Complex f = ev.at(p);
                                const double t2 = c2 / std::norm(1.0 - std::conj(alpha) * u);
                                const Complex target = f / (1.0 - alpha * std::conj(u));
                                for (std::size_t r = 0; r < n; ++r) {
                                  const Complex er = std::conj(e[r]);
                                  for (std::size_t c = 0; c < n; ++c) {
                                    const Complex w = e[c] * er;
                                    acc[r * n + c] += t2 * w;
                                    acc[nn + r * n + c] += f * t2 * w;
                                    acc[2 * nn + r * n + c] += target * w;
                                  }
                                }
                              });
  rep.note_grid(res.final_m);
  const std::span<const Complex> all(res.value);
  const auto gram = square_from(all, n);
  const auto mt = square_from(all.subspan(nn), n);
  const auto target = square_from(all.subspan(2 * nn), n);
  rep.add_residual("unitarity", max_abs(gram - ComplexMatrix::identity(n)), tolerances::kCrofoot);

  // Orthonormalize the images: f = (T e) X with X = L^{-H}, gram = L L^H.
  const auto l = cholesky(gram);
  const auto w = l.adjoint();
  const auto x = triangular_inverse(w, false);
  const auto a_alpha = x.adjoint() * mt * x;
  rep.add_residual("conjugation_identity", max_abs(w.adjoint() * a_alpha * w - target), tolerances::kCrofoot);

  SplitMix64 rng(0x5eedc0f7ULL);
  std::vector<Complex> coords(n);
  for (auto& z : coords) z = rng.complex_normal();
  const auto image = gram * std::span<const Complex>(coords);
  Complex tf2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) tf2 += std::conj(coords[i]) * image[i];
  const double f_norm = vector_norm(coords);
  rep.add_residual("norm_preservation", std::abs(std::sqrt(std::abs(tf2)) - f_norm) / f_norm, 1e-8);
  rep.add_metric("alpha_re", alpha.real());
  rep.add_metric("alpha_im", alpha.imag());
  rep.wall_ms = clock.elapsed_ms();
  return rep;
}

ComplexMatrix normalized_kernel_gram(const BlaschkeSpec& spec) {
  const std::size_t n = spec.size();
  ComplexMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      g(i, j) = spec.kernel_scale(i) * spec.kernel_scale(j) / (1.0 - std::conj(spec.zero(i)) * spec.zero(j));
  return g;
}

VerificationReport gram_identity_check(const SymbolSpec& phi, const SymbolSpec& psi, const ModelBasis& basis,
                                       const QuadratureControl& control, std::span<const double> p_values) {
  Stopwatch clock;
  VerificationReport rep;
  rep.check = "theorem4";
  const auto& spec = basis.spec();
  if (!spec.simple_zeros()) throw std::invalid_argument("gram_identity_check: zeros must be simple");
  if (!is_analytic(phi) || !is_analytic(psi))
    throw std::invalid_argument("gram_identity_check: phi and psi must be analytic");
  const std::size_t n = basis.size();
  SymbolEvaluator f(phi, spec), g(psi, spec);
  std::optional<std::size_t> fixed = f.fixed_grid() ? f.fixed_grid() : g.fixed_grid();
  std::vector<Complex> k(n);
  auto res = basis_quadrature("gram_identity_check", basis, control, fixed, n * n,
                              [&](const CirclePoint& p, std::span<const Complex>, std::span<Complex> acc) {
                                const Complex s = f.at(p) + std::conj(g.at(p));
                                for (std::size_t i = 0; i < n; ++i)
                                  k[i] = spec.kernel_scale(i) * spec.szego_kernel(i, p);
                                for (std::size_t i = 0; i < n; ++i) {
                                  const Complex ski = s * k[i];
                                  for (std::size_t j = 0; j < n; ++j) acc[i * n + j] += ski * std::conj(k[j]);
                                }
                              });
  rep.note_grid(res.final_m);
  const auto lhs = square_from(res.value, n);
  const auto gram = normalized_kernel_gram(spec);
  ComplexMatrix rhs(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex psi_i = std::conj(g.at(spec.zero(i)));
    for (std::size_t j = 0; j < n; ++j) rhs(i, j) = psi_i * gram(i, j) + gram(i, j) * f.at(spec.zero(j));
  }
  rep.add_residual("gram_identity", max_abs(lhs - rhs), tolerances::kGramIdentity);
  const auto deviation = singular_values(gram - ComplexMatrix::identity(n));
  for (double p : p_values) {
    std::ostringstream name;
    name << "G_minus_I_S" << p;
    rep.add_metric(name.str(), schatten_norm(deviation, p));
  }
  rep.wall_ms = clock.elapsed_ms();
  return rep;
}

}  // namespace modelspace
