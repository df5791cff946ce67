#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "modelspace/hs_theory.hpp"
#include "modelspace/operators.hpp"

using namespace modelspace;

namespace {

const QuadratureControl kControl{};

BoundaryFunction polynomial(std::vector<Complex> c, std::size_t m) {
  c.resize(m);
  return BoundaryFunction::from_fourier(std::move(c));
}

// Random element of K_{u^2} sampled on a grid of size m.
BoundaryFunction random_element(const ModelBasis& basis2, SplitMix64& rng, std::size_t m) {
  return basis2.synthesize(testing::random_vector(rng, basis2.size()), m);
}

}  // namespace

TEST_CASE("split_symbol: u = z^2 and f = 1 + 2z + 3z^2 + 4z^3") {
  const auto basis = build_basis(BlaschkeSpec({0.0, 0.0}), kControl);
  const auto f = polynomial({1.0, 2.0, 3.0, 4.0}, 32);
  const auto s = split_symbol(f, basis);
  // e_1 = 1, e_2 = z for u = z^2.
  CHECK(std::abs(s.f1[0] - 1.0) < 1e-14);
  CHECK(std::abs(s.f1[1] - 2.0) < 1e-14);
  CHECK(std::abs(s.f2[0] - 3.0) < 1e-14);
  CHECK(std::abs(s.f2[1] - 4.0) < 1e-14);
  CHECK(s.residual < 1e-13);
  // Tf = (zf)' - 2 z^2 (z f2)' = 1 + 4z + 3z^2, so <f, Tf> = 1 + 8 + 9.
  CHECK(std::abs(hs_norm_via_T(s, basis.spec()) - 18.0) < 1e-12);
  const Complex w(0.3, -0.2);
  CHECK(std::abs(T_transform(s, w, basis.spec()) - (1.0 + 4.0 * w + 3.0 * w * w)) < 1e-13);
  CHECK_THROWS_AS((void)split_symbol(polynomial({0.0, 0.0, 0.0, 0.0, 1.0}, 32), basis), std::invalid_argument);
  CHECK_THROWS_AS((void)T_transform(s, 1.0, basis.spec()), std::domain_error);
}

TEST_CASE("T_transform: f = z with u = z^2 gives 2w") {
  const auto basis = build_basis(BlaschkeSpec({0.0, 0.0}), kControl);
  const auto s = split_symbol(BoundaryFunction::monomial(16, 1), basis);
  for (Complex w : {Complex(0.0), Complex(0.5, 0.1), Complex(-0.2, 0.7)}) {
    CHECK(std::abs(T_transform(s, w, basis.spec()) - 2.0 * w) < 1e-14);
    CHECK(std::abs(T_direct(s, w, basis.spec()) - 2.0 * w) < 1e-14);
  }
}

TEST_CASE("theorem8: u = z^N against the coefficient formula") {
  // For u = z^N the bilinear form has entries fhat(r + c), 0 <= r, c < N, so its
  // squared Frobenius norm is sum_n min(n + 1, 2N - 1 - n) |fhat(n)|^2.
  SplitMix64 rng(4);
  for (std::size_t n : {1u, 3u, 5u}) {
    const auto basis = build_basis(BlaschkeSpec(std::vector<Complex>(n, 0.0)), kControl);
    const auto c = testing::random_vector(rng, 2 * n);
    double expected = 0.0;
    for (std::size_t k = 0; k < 2 * n; ++k)
      expected += static_cast<double>(std::min(k + 1, 2 * n - 1 - k)) * std::norm(c[k]);
    const auto f = polynomial(c, 64);
    const auto rep = theorem8_check(f, basis);
    CAPTURE(n);
    CHECK(rep.passed());
    CHECK(std::abs(*rep.metric("frobenius_squared") - expected) < 1e-10 * expected);
    CHECK(std::abs(hs_norm_via_T(split_symbol(f, basis), basis.spec()) - expected) < 1e-10 * expected);
  }
}

TEST_CASE("theorem8 and theorem9: random elements of K_{u^2}") {
  SplitMix64 rng(8);
  for (std::uint64_t seed : {2u, 3u}) {
    const auto spec = generate_zeros(zeros::RandomDisk{seed, 0.9}, 5);
    const auto basis = build_basis(spec, kControl);
    const auto basis2 = build_basis(spec.squared(), kControl);
    const auto f = random_element(basis2, rng, 1024);
    const auto r8 = theorem8_check(f, basis);
    CHECK_MESSAGE(r8.passed(), "relative deviation " << r8.find("relative_deviation")->value);
    std::vector<Complex> points;
    for (int i = 0; i < 6; ++i) points.push_back(0.85 * rng.uniform() * std::polar(1.0, 6.283185307179586 * rng.uniform()));
    const auto r9 = theorem9_check(f, basis, points);
    CHECK_MESSAGE(r9.passed(), "pointwise " << r9.find("pointwise")->value);
  }
  {
    const auto spec = generate_zeros(zeros::RadialExponential{0.5}, 4);
    const auto basis = build_basis(spec, kControl);
    const auto f = random_element(build_basis(spec.squared(), kControl), rng, 2048);
    CHECK(theorem8_check(f, basis).passed());
  }
}

TEST_CASE("classical_dirichlet_oracle") {
  const auto f = BoundaryFunction::sample(256, [](const CirclePoint& p) { return 1.0 / (1.0 - 0.5 * p.z); });
  // sum (n + 1) 4^{-n} = 1 / (1 - 1/4)^2.
  CHECK(std::abs(classical_dirichlet_oracle(f, 64) - 16.0 / 9.0) < 1e-12);
  CHECK(std::abs(classical_dirichlet_oracle(f, 1) - 1.0) < 1e-14);
  CHECK_THROWS_AS((void)classical_dirichlet_oracle(BoundaryFunction::monomial(16, -1), 8), std::invalid_argument);
}
