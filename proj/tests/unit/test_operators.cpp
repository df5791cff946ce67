#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "modelspace/operators.hpp"

using namespace modelspace;

namespace {

const QuadratureControl kControl{};

ModelBasis basis_of(std::vector<Complex> zeros) { return build_basis(BlaschkeSpec(std::move(zeros)), kControl); }

// Random element of K_u with psi(0) = 0: remove the component along k_0 = P_u 1.
std::vector<Complex> vanishing_at_origin(const BlaschkeSpec& spec, std::vector<Complex> c) {
  std::vector<Complex> e0(spec.size());
  takenaka_values(spec, Complex{}, e0);
  Complex value = 0.0;
  double norm = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    value += c[i] * e0[i];
    norm += std::norm(e0[i]);
  }
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= value / norm * std::conj(e0[i]);
  return c;
}

void require_pass(const VerificationReport& r) {
  for (const auto& x : r.residuals) {
    CAPTURE(r.check);
    CAPTURE(x.name);
    CHECK_MESSAGE(x.passed(), x.name << " = " << x.value << " > " << x.tolerance);
  }
  CHECK(r.passed());
}

}  // namespace

TEST_CASE("symbols: evaluation of the closed forms") {
  const BlaschkeSpec spec({0.0, 0.5});
  const CirclePoint p = grid_node(3, 16);
  CHECK(std::abs(SymbolEvaluator(symbols::monomial(2), spec).at(p) - p.z * p.z) < 1e-15);
  CHECK(std::abs(SymbolEvaluator(symbols::monomial(-1), spec).at(p) - std::conj(p.z)) < 1e-15);
  CHECK(std::abs(SymbolEvaluator(symbols::szego_kernel(0.5), spec).at(p) - 1.0 / (1.0 - 0.5 * p.z)) < 1e-15);
  // alpha_2 = u_2 / u_2(0.5) = z / 0.5.
  CHECK(std::abs(SymbolEvaluator(symbols::lagrange(1), spec).at(p) - p.z / 0.5) < 1e-14);
  CHECK(std::abs(SymbolEvaluator(symbols::node_values({0.0, 0.5}), spec).at(p) - p.z) < 1e-14);
  const auto conj_sym = symbols::conjugate(symbols::lagrange(1, Complex(0.0, 2.0)));
  CHECK(std::abs(SymbolEvaluator(conj_sym, spec).at(p) - std::conj(Complex(0.0, 2.0) * p.z / 0.5)) < 1e-14);
  CHECK(std::abs(SymbolEvaluator(symbols::monomial(-1), spec).at(Complex(0.2, 0.1)) - Complex(0.2, -0.1)) < 1e-15);
  CHECK(is_analytic(symbols::model_kernel(0.3)));
  CHECK_FALSE(is_analytic(conj_sym));
  CHECK_THROWS_AS(SymbolEvaluator(symbols::lagrange(2), spec), std::invalid_argument);
  CHECK_THROWS_AS(SymbolEvaluator(symbols::node_values({1.0}), spec), std::invalid_argument);
  CHECK_THROWS_AS((void)symbols::add(symbols::sampled(BoundaryFunction::constant(8, 1.0)), symbols::monomial(1)),
                  std::invalid_argument);
}

TEST_CASE("assemble_tto: examples") {
  const auto basis = basis_of({0.0, 0.5});
  const auto one = assemble_tto(symbols::constant(1.0), basis, kControl);
  CHECK(max_abs(one.matrix - ComplexMatrix::identity(2)) < 1e-12);

  const auto z = assemble_tto(symbols::monomial(1), basis, kControl);
  CHECK(std::abs(z.matrix(0, 0)) < 1e-12);
  CHECK(std::abs(z.matrix(1, 1) - 0.5) < 1e-12);
  CHECK(std::abs(z.matrix(1, 0) - std::sqrt(0.75)) < 1e-10);
  CHECK(std::abs(z.matrix(0, 1)) < 1e-12);

  const auto zbar = assemble_tto(symbols::monomial(-1), basis, kControl);
  CHECK(max_abs(zbar.matrix - z.matrix.adjoint()) < 1e-12);
  CHECK(z.basis_tag == zbar.basis_tag);
}

TEST_CASE("assemble_tto: adjoint law, linearity, triangularity, diagonal") {
  const auto spec = generate_zeros(zeros::RandomDisk{31, 0.9}, 6);
  const auto basis = build_basis(spec, kControl);
  SplitMix64 rng(1);
  LaurentSymbol phi, gamma;
  for (long k = -3; k <= 3; ++k) {
    phi.coefficients[k] = rng.complex_normal();
    gamma.coefficients[k] = rng.complex_normal();
  }
  const auto a = assemble_tto(phi, basis, kControl).matrix;
  const auto g = assemble_tto(gamma, basis, kControl).matrix;
  CHECK(max_abs(assemble_tto(symbols::conjugate(phi), basis, kControl).matrix - a.adjoint()) <= 1e-10);
  const Complex x(0.3, -1.2), y(2.0, 0.5);
  const auto combo = symbols::add(symbols::scale(x, phi), symbols::scale(y, gamma));
  CHECK(max_abs(assemble_tto(combo, basis, kControl).matrix - (x * a + y * g)) <= 1e-10);

  const auto analytic = symbols::add(symbols::model_kernel(Complex(0.2, 0.4)), symbols::monomial(3, 2.0));
  const auto m = assemble_tto(analytic, basis, kControl).matrix;
  SymbolEvaluator ev(analytic, spec);
  for (std::size_t r = 0; r < 6; ++r) {
    for (std::size_t c = r + 1; c < 6; ++c) CHECK(std::abs(m(r, c)) <= 1e-10);
    CHECK(std::abs(m(r, r) - ev.at(spec.zero(r))) <= 1e-8);
  }
}

TEST_CASE("assemble_tto: sampled symbols use their own grid") {
  const auto basis = basis_of({0.0, 0.5});
  const auto z = BoundaryFunction::monomial(1024, 1);
  const auto m = assemble_tto(symbols::sampled(z), basis, kControl);
  CHECK(m.grid_size == 1024);
  CHECK(std::abs(m.matrix(1, 0) - std::sqrt(0.75)) < 1e-10);
}

TEST_CASE("assemble_tho: examples") {
  const Complex c1(1.5, -0.5), c2(0.25, 2.0);
  const auto zb = basis_of({0.0});
  // symbol conj(f) with f = c1 + c2 z.
  const auto fbar = symbols::conjugate(symbols::add(symbols::constant(c1), symbols::monomial(1, c2)));
  const auto form = assemble_tho(fbar, zb, HankelConvention::bilinear_form, kControl);
  CHECK(std::abs(form.matrix(0, 0) - std::conj(c1)) < 1e-12);
  const auto op = assemble_tho(fbar, zb, HankelConvention::operator_form, kControl);
  CHECK(std::abs(op.matrix(0, 0)) < 1e-12);

  const auto z2 = basis_of({0.0, 0.0});
  LaurentSymbol f;
  f.coefficients = {{0, 1.0}, {1, 2.0}, {2, 3.0}, {3, 4.0}};
  const auto b = assemble_tho(symbols::conjugate(f), z2, HankelConvention::bilinear_form, kControl);
  CHECK(max_abs(b.matrix - ComplexMatrix::from_rows({{1.0, 2.0}, {2.0, 3.0}})) < 1e-12);
}

TEST_CASE("assemble_tho: bilinear form is symmetric") {
  const auto spec = generate_zeros(zeros::RandomDisk{2, 0.8}, 5);
  const auto basis = build_basis(spec, kControl);
  SplitMix64 rng(4);
  LaurentSymbol f;
  for (long k = 0; k < 8; ++k) f.coefficients[k] = rng.complex_normal();
  const auto b = assemble_tho(symbols::conjugate(f), basis, HankelConvention::bilinear_form, kControl).matrix;
  CHECK(max_abs(b - b.transpose()) < 1e-12);
}

TEST_CASE("lemma1_factorization") {
  const auto u = basis_of({0.0});
  require_pass(lemma1_factorization(symbols::constant(Complex(0.7, 0.2)), u, kControl));

  const auto two = basis_of({0.0, 0.5});
  const auto k2 = lemma1_factorization(symbols::szego_kernel(0.5), two, kControl);
  require_pass(k2);

  const auto spec = generate_zeros(zeros::RandomDisk{9, 0.85}, 5);
  const auto basis = build_basis(spec, kControl);
  SplitMix64 rng(6);
  for (int t = 0; t < 3; ++t) {
    const auto c = testing::random_vector(rng, 5);
    require_pass(lemma1_factorization(symbols::basis_combination(c), basis, kControl));
  }
  CHECK_THROWS_AS((void)lemma1_factorization(symbols::monomial(5), two, kControl), std::invalid_argument);
}

TEST_CASE("lemma2_factorization") {
  const auto two = basis_of({0.0, 0.5});
  const auto zero = lemma2_factorization(symbols::constant(0.0), two, kControl);
  require_pass(zero);
  CHECK(zero.metric("B_norm").value() < 1e-14);

  // e_2 = z sqrt(0.75)/(1 - 0.5 z) vanishes at the origin.
  require_pass(lemma2_factorization(symbols::basis_element(1), two, kControl));

  const auto spec = generate_zeros(zeros::RandomDisk{19, 0.85}, 6);
  const auto basis = build_basis(spec, kControl);
  SplitMix64 rng(8);
  for (int t = 0; t < 3; ++t) {
    const auto c = vanishing_at_origin(spec, testing::random_vector(rng, 6));
    require_pass(lemma2_factorization(symbols::basis_combination(c), basis, kControl));
  }
  CHECK_THROWS_AS((void)lemma2_factorization(symbols::basis_element(0), two, kControl), std::invalid_argument);
}

TEST_CASE("lemma3_expansion") {
  const auto two = basis_of({0.0, 0.5});
  require_pass(lemma3_expansion(NodeValuesSymbol{{0.0, 0.5}}, two, kControl));
  const auto direct = assemble_tto(symbols::node_values({0.0, 0.5}), two, kControl).matrix;
  const auto z = assemble_tto(symbols::monomial(1), two, kControl).matrix;
  CHECK(max_abs(direct - z) <= 1e-8);

  // Unit vector of values at node j gives A_{alpha_j}, which has rank one.
  const auto spec = generate_zeros(zeros::RandomDisk{5, 0.8}, 4);
  const auto basis = build_basis(spec, kControl);
  const auto unit = assemble_tto(symbols::node_values({0.0, 0.0, 1.0, 0.0}), basis, kControl).matrix;
  const auto alpha = assemble_tto(symbols::lagrange(2), basis, kControl).matrix;
  CHECK(max_abs(unit - alpha) < 1e-14);
  const auto s = singular_values(alpha).values;
  CHECK(s[1] < 1e-10 * s[0]);

  SplitMix64 rng(12);
  const auto r = lemma3_expansion(NodeValuesSymbol{testing::random_vector(rng, 4)}, basis, kControl);
  require_pass(r);
  CHECK(r.metric("trace_norm").value() <= r.metric("trace_norm_bound").value());
}

TEST_CASE("compressed_shift_power") {
  const auto two = basis_of({0.0, 0.5});
  CHECK(compressed_shift_power(two, 1, kControl).residuals[0].value == 0.0);
  require_pass(compressed_shift_power(two, 2, kControl));

  // K_{z^2}: A_z is the nilpotent shift and A_{z^2} = 0.
  const auto z2 = basis_of({0.0, 0.0});
  const auto az = assemble_tto(symbols::monomial(1), z2, kControl).matrix;
  CHECK(max_abs(az - ComplexMatrix::from_rows({{0.0, 0.0}, {1.0, 0.0}})) < 1e-14);
  CHECK(max_abs(assemble_tto(symbols::monomial(2), z2, kControl).matrix) < 1e-14);
  require_pass(compressed_shift_power(z2, 2, kControl));
  CHECK_THROWS_AS((void)compressed_shift_power(z2, 0, kControl), std::invalid_argument);
}

TEST_CASE("berezin_at_nodes") {
  const auto two = basis_of({0.0, 0.5});
  const auto ones = berezin_at_nodes(symbols::constant(1.0), symbols::constant(0.0), two, kControl);
  for (auto v : ones) CHECK(std::abs(v - 1.0) < 1e-12);
  const auto z = berezin_at_nodes(symbols::monomial(1), symbols::constant(0.0), two, kControl);
  CHECK(std::abs(z[0]) < 1e-12);
  CHECK(std::abs(z[1] - 0.5) < 1e-12);
  const auto zi = berezin_at_nodes(symbols::constant(0.0), symbols::monomial(1, Complex(0.0, 1.0)), two, kControl);
  CHECK(std::abs(zi[1] - std::conj(Complex(0.0, 0.5))) < 1e-12);

  const auto spec = generate_zeros(zeros::RandomDisk{40, 0.9}, 5);
  const auto basis = build_basis(spec, kControl);
  const auto phi = symbols::model_kernel(Complex(0.1, -0.6));
  const auto psi = symbols::monomial(2, Complex(1.0, 1.0));
  const auto b = berezin_at_nodes(phi, psi, basis, kControl);
  SymbolEvaluator f(phi, spec), g(psi, spec);
  for (std::size_t n = 0; n < 5; ++n)
    CHECK(std::abs(b[n] - (f.at(spec.zero(n)) + std::conj(g.at(spec.zero(n))))) <= 1e-8);
}

TEST_CASE("eigenrelation_check") {
  const auto spec = generate_zeros(zeros::RandomDisk{77, 0.9}, 6);
  const auto basis = build_basis(spec, kControl);
  require_pass(eigenrelation_check(symbols::add(symbols::monomial(1), symbols::model_kernel(0.3)), basis, kControl));
  CHECK_THROWS_AS((void)eigenrelation_check(symbols::monomial(-1), basis, kControl), std::invalid_argument);
}

TEST_CASE("crofoot_check") {
  const auto two = basis_of({0.0, 0.5});
  const auto trivial = crofoot_check(0.0, symbols::monomial(1), two, kControl);
  require_pass(trivial);
  for (const auto& r : trivial.residuals) CHECK(r.value < 1e-12);

  require_pass(crofoot_check(0.3, symbols::monomial(1), two, kControl));

  const auto spec = generate_zeros(zeros::RandomDisk{3, 0.8}, 4);
  const auto basis = build_basis(spec, kControl);
  require_pass(crofoot_check(Complex(0.0, 0.3), symbols::model_kernel(Complex(0.2, 0.2)), basis, kControl));
  CHECK_THROWS_AS((void)crofoot_check(1.0, symbols::monomial(1), two, kControl), std::invalid_argument);
}

TEST_CASE("gram_identity_check") {
  const auto two = basis_of({0.0, 0.5});
  const double ps[] = {2.0};
  const auto id = gram_identity_check(symbols::constant(1.0), symbols::constant(0.0), two, kControl, ps);
  require_pass(id);
  const auto zz = gram_identity_check(symbols::monomial(1), symbols::monomial(1), two, kControl, ps);
  require_pass(zz);
  // Off-diagonal normalized Gram entry is sqrt(0.75), so ||G - I||_S2 = sqrt(2 * 0.75).
  CHECK(std::abs(zz.metric("G_minus_I_S2").value() - std::sqrt(1.5)) < 1e-12);

  // Thinner sequences have Gram matrices closer to the identity.
  const QuadratureControl wide{256, 1 << 20, 1e-10};
  const double g3 = gram_identity_check(symbols::monomial(1), symbols::monomial(1),
                                        build_basis(generate_zeros(zeros::Thin{0.5}, 2), wide), wide, ps)
                        .metric("G_minus_I_S2")
                        .value();
  const double g3_thinner = gram_identity_check(symbols::monomial(1), symbols::monomial(1),
                                                build_basis(generate_zeros(zeros::Thin{0.25}, 2), wide), wide,
                                                ps)
                                .metric("G_minus_I_S2")
                                .value();
  CHECK(g3_thinner < g3);
}

TEST_CASE("normalized_kernel_gram matches quadrature") {
  const auto spec = generate_zeros(zeros::RandomDisk{8, 0.9}, 5);
  const auto g = normalized_kernel_gram(spec);
  auto q = quadrature_gram("test", kControl, 5, [&](const CirclePoint& p, std::span<Complex> out) {
    for (std::size_t i = 0; i < 5; ++i) out[i] = spec.kernel_scale(i) * spec.szego_kernel(i, p);
  });
  // quadrature_gram gives (r, c) = <f_c, f_r>; the closed form is (i, j) = <khat_i, khat_j>.
  CHECK(max_abs(q.value.transpose() - g) < 1e-10);
}
