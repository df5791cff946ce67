#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "modelspace/blaschke.hpp"

using namespace modelspace;

TEST_CASE("blaschke_eval: hand examples") {
  CHECK(std::abs(blaschke_eval(BlaschkeSpec({0.5}), 0.0) - 0.5) < 1e-15);
  const Complex w(0.3, -0.2);
  CHECK(blaschke_eval(BlaschkeSpec({0.0}), w) == w);
  CHECK_THROWS_AS((void)blaschke_eval(BlaschkeSpec({0.5}), 1.5), std::domain_error);
  CHECK_THROWS_AS(BlaschkeSpec({1.0}), std::invalid_argument);
  CHECK_THROWS_AS(BlaschkeSpec(std::vector<Complex>{}), std::invalid_argument);
}

TEST_CASE("blaschke: unimodular on the circle, zero at each a_n") {
  SplitMix64 rng(10);
  const BlaschkeSpec two({0.0, 0.5});
  for (int i = 0; i < 100; ++i) {
    const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
    CHECK(std::abs(std::abs(blaschke_eval(two, std::polar(1.0, theta))) - 1.0) < 1e-14);
  }
  const auto spec = generate_zeros(zeros::RandomDisk{3, 0.95}, 12);
  for (std::size_t n = 0; n < spec.size(); ++n) CHECK(std::abs(spec.eval(spec.zero(n))) < 1e-14);
}

TEST_CASE("blaschke: the rotated-frame circle evaluation agrees with the direct formula") {
  const BlaschkeSpec spec({Complex(0.3, 0.4), -0.9, Complex(0.0, 0.99), 0.0});
  for (std::size_t k = 0; k < 64; ++k) {
    const auto p = grid_node(k, 64);
    for (std::size_t i = 0; i < spec.size(); ++i) {
      CHECK(std::abs(spec.factor(i, p) - spec.factor(i, p.z)) < 1e-13);
      CHECK(std::abs(spec.szego_kernel(i, p) - spec.szego_kernel(i, p.z)) < 1e-12 * std::abs(spec.szego_kernel(i, p.z)));
    }
  }
  // Near the circle the frame keeps |b| = 1 to rounding.
  const BlaschkeSpec close({1.0 - 0x1.0p-16});
  for (std::size_t k = 0; k < 64; ++k) CHECK(std::abs(std::abs(close.factor(0, grid_node(k, 64))) - 1.0) < 1e-14);
}

TEST_CASE("separation_profile") {
  const auto p = separation_profile(BlaschkeSpec({0.0, 0.5}));
  CHECK(p.deltas[0] == doctest::Approx(0.5));
  CHECK(p.deltas[1] == doctest::Approx(0.5));
  CHECK(separation_profile(BlaschkeSpec({Complex(0.2, 0.1)})).deltas[0] == 1.0);
  CHECK_THROWS_AS((void)separation_profile(BlaschkeSpec({0.5, 0.5})), std::invalid_argument);

  // r_k = 1 - 2^-k: direct product oracle.
  std::vector<Complex> z;
  for (int k = 1; k <= 8; ++k) z.emplace_back(1.0 - std::ldexp(1.0, -k), 0.0);
  const auto radial = separation_profile(BlaschkeSpec(z));
  for (std::size_t n = 0; n < z.size(); ++n) {
    double d = 1.0;
    for (std::size_t i = 0; i < z.size(); ++i)
      if (i != n) d *= std::abs(z[n] - z[i]) / std::abs(1.0 - std::conj(z[i]) * z[n]);
    CHECK(std::abs(radial.deltas[n] - d) < 1e-14);
    CHECK(radial.deltas[n] >= radial.min_delta);
  }
  CHECK(radial.min_delta > 0.0);
  MESSAGE("radial 1 - 2^-k, N = 8: min delta = " << radial.min_delta);

  // Interpolating family: the floor does not collapse as N doubles.
  const auto longer = separation_profile(generate_zeros(zeros::RadialExponential{0.5}, 16));
  CHECK(longer.min_delta >= 0.5 * radial.min_delta);
}

TEST_CASE("separation_profile: invariant under permutation of zeros") {
  SplitMix64 rng(12);
  const auto spec = generate_zeros(zeros::RandomDisk{5, 0.9}, 7);
  std::vector<Complex> z(spec.zeros().begin(), spec.zeros().end());
  std::vector<std::size_t> perm{3, 0, 6, 1, 5, 2, 4};
  std::vector<Complex> shuffled;
  for (auto i : perm) shuffled.push_back(z[i]);
  const auto a = separation_profile(spec);
  const auto b = separation_profile(BlaschkeSpec(shuffled));
  for (std::size_t k = 0; k < perm.size(); ++k) CHECK(std::abs(b.deltas[k] - a.deltas[perm[k]]) < 1e-14);
  (void)rng;
}

TEST_CASE("generate_zeros") {
  const auto radial = generate_zeros(zeros::RadialExponential{0.5}, 3);
  CHECK(radial.zero(0) == Complex(0.5));
  CHECK(radial.zero(1) == Complex(0.75));
  CHECK(radial.zero(2) == Complex(0.875));

  const auto thin = generate_zeros(zeros::Thin{0.5}, 2);
  CHECK(thin.zero(0) == Complex(0.5));
  CHECK(thin.zero(1) == Complex(0.9375));

  const auto a = generate_zeros(zeros::RandomDisk{7, 0.9}, 5);
  const auto b = generate_zeros(zeros::RandomDisk{7, 0.9}, 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(a.zero(i) == b.zero(i));
    CHECK(std::abs(a.zero(i)) <= 0.9);
  }

  const auto spokes = generate_zeros(zeros::Spokes{4, {0.5, 0.8}}, 6);
  CHECK(std::abs(spokes.zero(1) - Complex(0.0, 0.5)) < 1e-15);
  CHECK(std::abs(spokes.zero(4) - Complex(0.8, 0.0)) < 1e-15);

  CHECK_THROWS_AS((void)generate_zeros(zeros::RadialExponential{1.5}, 3), std::invalid_argument);
  CHECK_THROWS_AS((void)generate_zeros(zeros::Thin{0.5}, 5), std::invalid_argument);  // 1 - 2^-25 beyond the cap
  CHECK_THROWS_AS((void)generate_zeros(zeros::Spokes{2, {0.5}}, 3), std::invalid_argument);
  CHECK_THROWS_AS((void)generate_zeros(zeros::RandomDisk{1, 1.0}, 3), std::invalid_argument);
  CHECK_THROWS_AS((void)generate_zeros(zeros::RadialExponential{0.5}, 0), std::invalid_argument);
}

TEST_CASE("thin family: separation of the outer zeros tends to one") {
  const auto p = separation_profile(generate_zeros(zeros::Thin{0.5}, 4));
  CHECK(p.deltas.back() > p.deltas[1]);
  CHECK(p.deltas.back() > 0.98);
}
