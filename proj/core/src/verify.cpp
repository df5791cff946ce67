#include "modelspace/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "modelspace/hs_theory.hpp"
#include "modelspace/operators.hpp"
#include "modelspace/random.hpp"
#include "modelspace/symbol_norms.hpp"

namespace modelspace {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Folds the residuals of `part` into `into`, keeping the worst value per name.
void absorb(VerificationReport& into, const VerificationReport& part, const std::string& prefix = {}) {
  for (const auto& r : part.residuals) {
    const std::string name = prefix + r.name;
    auto it = std::find_if(into.residuals.begin(), into.residuals.end(), [&](const Residual& x) { return x.name == name; });
    if (it == into.residuals.end()) {
      into.add_residual(name, r.value, r.tolerance);
    } else if (!(it->value >= r.value)) {
      it->value = r.value;
    }
  }
  into.note_grid(part.grid_m);
}

void set_worst(VerificationReport& rep, const std::string& name, double value, double tolerance) {
  for (auto& r : rep.residuals)
    if (r.name == name) {
      if (!(r.value >= value)) r.value = value;
      return;
    }
  rep.add_residual(name, value, tolerance);
}

std::vector<Complex> random_coords(SplitMix64& rng, std::size_t n) {
  std::vector<Complex> c(n);
  for (auto& z : c) z = rng.complex_normal();
  return c;
}

SymbolSpec random_polynomial(SplitMix64& rng, long degree) {
  LaurentSymbol s;
  for (long k = 0; k <= degree; ++k) s.coefficients[k] = rng.complex_normal() / static_cast<double>(k + 1);
  return s;
}

// Zero sets for a check: the configured zeros when present, else the fallback.
std::vector<BlaschkeSpec> scenario(const RunConfig& config, const ZeroGenerator& fallback,
                                   std::span<const std::size_t> ns) {
  std::vector<BlaschkeSpec> out;
  if (config.zeros) {
    out.push_back(config.zeros->spec());
    return out;
  }
  for (std::size_t n : ns) out.push_back(generate_zeros(fallback, n));
  return out;
}

BlaschkeSpec single(const RunConfig& config, const ZeroGenerator& fallback, std::size_t n) {
  const std::size_t ns[] = {n};
  return scenario(config, fallback, ns).front();
}

// Coordinates of an element of K_u with value 0 at the origin.
std::vector<Complex> vanishing_at_origin(const BlaschkeSpec& spec, std::vector<Complex> c) {
  std::vector<Complex> e0(spec.size());
  takenaka_values(spec, Complex{}, e0);
  Complex value = 0.0;
  double norm = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    value += c[i] * e0[i];
    norm += std::norm(e0[i]);
  }
  if (norm > 0.0)
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= value / norm * std::conj(e0[i]);
  return c;
}

BoundaryFunction sample_symbol(const SymbolSpec& s, const BlaschkeSpec& spec, std::size_t m) {
  SymbolEvaluator ev(s, spec);
  return BoundaryFunction::sample(m, [&](const CirclePoint& p) { return ev.at(p); });
}

std::string label(const char* stem, double x) {
  std::ostringstream os;
  os << stem << std::setprecision(3) << x;
  return os.str();
}

// Random element of K_{u^2} on a grid that resolves it.
BoundaryFunction random_k_u2(const BlaschkeSpec& spec, const QuadratureControl& control, SplitMix64& rng) {
  const auto basis2 = build_basis(spec.squared(), control);
  const std::size_t m = std::max<std::size_t>(64, 4 * basis2.grid_size());
  return basis2.synthesize(random_coords(rng, basis2.size()), m);
}

const zeros::RadialExponential kRadial{0.5};
const zeros::Spokes kSpread{4, {0.4, 0.8}};

// ---------------------------------------------------------------------------

VerificationReport check_basis(const RunConfig& config, std::uint64_t) {
  VerificationReport rep;
  const auto basis = build_basis(single(config, kRadial, 16), config.quadrature);
  rep.add_residual("gram_deviation", basis.gram_residual(), kBasisGramTolerance);
  rep.add_metric("N", static_cast<double>(basis.size()));
  rep.note_grid(basis.grid_size());
  return rep;
}

VerificationReport check_triangularity(const RunConfig& config, std::uint64_t seed) {
  VerificationReport rep;
  SplitMix64 rng(seed);
  const BlaschkeSpec spec = config.zeros ? config.zeros->spec() : BlaschkeSpec({0.0, 0.5, 0.8});
  const auto basis = build_basis(spec, config.quadrature);
  const std::size_t n = basis.size();
  const SymbolSpec shapes[] = {symbols::monomial(1), random_polynomial(rng, 4)};
  for (const auto& phi : shapes) {
    const auto a = assemble_tto(phi, basis, config.quadrature);
    SymbolEvaluator ev(phi, spec);
    double wrong = 0.0, diag = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = r + 1; c < n; ++c) wrong = std::max(wrong, std::abs(a.matrix(r, c)));
    if (spec.simple_zeros())
      for (std::size_t i = 0; i < n; ++i) diag = std::max(diag, std::abs(a.matrix(i, i) - ev.at(spec.zero(i))));
    set_worst(rep, "wrong_side", wrong, tolerances::kTriangularity);
    if (spec.simple_zeros()) set_worst(rep, "diagonal", diag, tolerances::kDiagonal);
    rep.note_grid(a.grid_size);
    if (!config.zeros && rep.find("subdiagonal_entry") == nullptr) {
      // <z e_1, e_2> = sqrt(1 - |a_2|^2) when a_1 = 0.
      rep.add_residual("subdiagonal_entry", std::abs(a.matrix(1, 0) - std::sqrt(0.75)), tolerances::kDiagonal);
    }
  }
  return rep;
}

VerificationReport check_lemma1(const RunConfig& config, std::uint64_t seed) {
  VerificationReport rep;
  SplitMix64 rng(seed);
  const std::size_t ns[] = {1, 2, 4, 8};
  std::vector<BlaschkeSpec> specs;
  if (config.zeros) {
    specs.push_back(config.zeros->spec());
  } else {
    for (std::size_t n : ns) specs.push_back(generate_zeros(zeros::RandomDisk{rng.next(), 0.9}, n));
  }
  for (const auto& spec : specs) {
    const auto basis = build_basis(spec, config.quadrature);
    for (int trial = 0; trial < 2; ++trial)
      absorb(rep, lemma1_factorization(symbols::basis_combination(random_coords(rng, spec.size())), basis,
                                       config.quadrature));
  }
  return rep;
}

VerificationReport check_lemma2(const RunConfig& config, std::uint64_t seed) {
  VerificationReport rep;
  SplitMix64 rng(seed);
  const std::size_t ns[] = {1, 2, 4, 8};
  std::vector<BlaschkeSpec> specs;
  if (config.zeros) {
    specs.push_back(config.zeros->spec());
  } else {
    for (std::size_t n : ns) specs.push_back(generate_zeros(zeros::RandomDisk{rng.next(), 0.9}, n));
  }
  for (const auto& spec : specs) {
    const auto basis = build_basis(spec, config.quadrature);
    for (int trial = 0; trial < 2; ++trial) {
      const auto c = vanishing_at_origin(spec, random_coords(rng, spec.size()));
      absorb(rep, lemma2_factorization(symbols::basis_combination(c), basis, config.quadrature));
    }
  }
  return rep;
}

VerificationReport check_lemma3(const RunConfig& config, std::uint64_t seed) {
  VerificationReport rep;
  SplitMix64 rng(seed);
  // The second assembly path is the polynomial interpolant, which is only
  // well conditioned for spread-out nodes.
  const auto basis = build_basis(single(config, kSpread, 8), config.quadrature);
  for (int trial = 0; trial < 10; ++trial)
    absorb(rep, lemma3_expansion(NodeValuesSymbol{random_coords(rng, basis.size())}, basis, config.quadrature));
  return rep;
}

VerificationReport check_theorem1(const RunConfig& config, std::uint64_t) {
  VerificationReport rep;
  const auto spec = single(config, kRadial, 8);
  const auto basis = build_basis(spec, config.quadrature);
  // The certified grid is the coarser of the agreeing pair; sample on the finer.
  const std::size_t m = 2 * basis.grid_size();
  double lo = kInfinity, hi = 0.0;
  for (double t : {0.0, 0.3, 0.6, 0.8, 0.9}) {
    const auto phi = symbols::add(symbols::model_kernel(t), symbols::model_kernel(Complex(0.0, t), 0.5));
    const auto a = assemble_tto(phi, basis, config.quadrature);
    const double s2 = frobenius_norm(a.matrix);
    const auto cphi = conjugation_C(sample_symbol(phi, spec, m), spec);
    const auto besov = besov_norm(cphi, 2.0, BesovOptions{2, 128, 1});
    const double ratio = s2 / besov.value;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    rep.add_metric(label("ratio_t=", t), ratio);
    rep.note_grid(std::max(a.grid_size, m));
  }
  rep.add_residual("ratio_spread", hi / lo, 100.0);
  return rep;
}

VerificationReport check_theorem3a(const RunConfig& config, std::uint64_t) {
  const ZeroSource family = config.zeros ? *config.zeros : ZeroSource{kRadial, 16};
  const auto phi = config.symbols.empty() ? symbols::monomial(1) : config.symbols.front();
  const auto sweep = comparability_sweep(family, phi, config.p_values, config.ns, config.quadrature);
  auto rep = sweep_report(sweep);
  for (const auto& row : sweep.rows) rep.add_metric(label("ratio_N=", static_cast<double>(row.n)) + label("_p=", row.p), row.ratio);
  return rep;
}

VerificationReport check_theorem3b(const RunConfig& config, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const auto basis = build_basis(single(config, kRadial, 8), config.quadrature);
  return eigenrelation_check(random_polynomial(rng, 3), basis, config.quadrature);
}

VerificationReport check_theorem4(const RunConfig& config, std::uint64_t) {
  VerificationReport rep;
  const auto z = symbols::monomial(1);
  std::vector<std::pair<std::string, BlaschkeSpec>> cases;
  if (config.zeros) {
    cases.emplace_back("", config.zeros->spec());
  } else {
    cases.emplace_back("pair_", BlaschkeSpec({0.0, 0.5}));
    cases.emplace_back("thin_", generate_zeros(zeros::Thin{0.5}, 4));
  }
  for (const auto& [prefix, spec] : cases) {
    const auto basis = build_basis(spec, config.quadrature);
    const auto part = gram_identity_check(z, z, basis, config.quadrature, config.p_values);
    absorb(rep, part);
    for (const auto& [k, v] : part.metrics) rep.add_metric(prefix + k, v);
  }
  return rep;
}

VerificationReport check_theorem7a(const RunConfig& config, std::uint64_t) {
  VerificationReport rep;
  const auto basis = build_basis(single(config, kRadial, 8), config.quadrature);
  for (std::size_t k : {2u, 3u}) absorb(rep, compressed_shift_power(basis, k, config.quadrature));
  return rep;
}

VerificationReport check_theorem8(const RunConfig& config, std::uint64_t seed) {
  VerificationReport rep;
  SplitMix64 rng(seed);
  std::vector<std::pair<BlaschkeSpec, int>> cases;
  if (config.zeros) {
    cases.emplace_back(config.zeros->spec(), 10);
  } else {
    cases.emplace_back(generate_zeros(zeros::RandomDisk{rng.next(), 0.9}, 1), 4);
    cases.emplace_back(generate_zeros(zeros::RandomDisk{rng.next(), 0.9}, 2), 3);
    cases.emplace_back(generate_zeros(zeros::RandomDisk{rng.next(), 0.9}, 8), 3);
  }
  for (const auto& [spec, count] : cases) {
    const auto basis = build_basis(spec, config.quadrature);
    for (int i = 0; i < count; ++i) absorb(rep, theorem8_check(random_k_u2(spec, config.quadrature, rng), basis));
  }
  // u = z^2, f = 1 + 2z + 3z^2 + 4z^3: the form is [[1, 2], [2, 3]] and Tf = 1 + 4z + 3z^2.
  const auto basis = build_basis(BlaschkeSpec({0.0, 0.0}), config.quadrature);
  std::vector<Complex> c(32);
  for (int k = 0; k < 4; ++k) c[static_cast<std::size_t>(k)] = k + 1.0;
  const auto hand = theorem8_check(BoundaryFunction::from_fourier(std::move(c)), basis);
  rep.add_residual("hand_instance", std::max(std::abs(*hand.metric("frobenius_squared") - 18.0),
                                             std::abs(*hand.metric("pairing") - 18.0)),
                   1e-10);
  return rep;
}

VerificationReport check_theorem9(const RunConfig& config, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const auto spec = config.zeros ? config.zeros->spec() : generate_zeros(zeros::RandomDisk{rng.next(), 0.9}, 8);
  const auto basis = build_basis(spec, config.quadrature);
  const auto f = random_k_u2(spec, config.quadrature, rng);
  std::vector<Complex> points(20);
  for (auto& w : points) w = rng.in_disk(0.9);
  return theorem9_check(f, basis, points);
}

VerificationReport check_crofoot(const RunConfig& config, std::uint64_t seed) {
  VerificationReport rep;
  SplitMix64 rng(seed);
  const auto basis = build_basis(single(config, kRadial, 4), config.quadrature);
  const auto phi = random_polynomial(rng, 2);
  for (Complex alpha : {Complex(0.0), Complex(0.3), Complex(0.0, 0.3)})
    absorb(rep, crofoot_check(alpha, phi, basis, config.quadrature));
  return rep;
}

VerificationReport check_dirichlet(const RunConfig&, std::uint64_t) {
  VerificationReport rep;
  const auto f = BoundaryFunction::sample(256, [](const CirclePoint& p) { return 1.0 / (1.0 - 0.5 * p.z); });
  const double oracle = classical_dirichlet_oracle(f, 64);
  ComplexMatrix h(64, 64);
  for (std::size_t r = 0; r < 64; ++r)
    for (std::size_t c = 0; c < 64; ++c) h(r, c) = f.fourier(static_cast<long>(r + c));
  const double fro = frobenius_norm(h);
  rep.add_residual("oracle_value", std::abs(oracle - 16.0 / 9.0), 1e-8);
  rep.add_residual("hankel_frobenius_squared", std::abs(fro * fro - oracle), 1e-6);
  rep.add_metric("oracle", oracle);
  rep.add_metric("hankel_frobenius", fro);
  rep.note_grid(256);
  return rep;
}

VerificationReport check_extension_by_zero(const RunConfig& config, std::uint64_t seed) {
  VerificationReport rep;
  SplitMix64 rng(seed);
  const auto spec = single(config, kRadial, 4);
  const auto basis = build_basis(spec, config.quadrature);
  const std::size_t m = 2 * basis.grid_size();
  const auto phi = basis.synthesize(random_coords(rng, spec.size()), m);
  const auto cphi = conjugation_C(phi, spec).conj();
  const auto u = BoundaryFunction::sample(m, [&](const CirclePoint& p) { return spec.eval(p); });
  double worst = 0.0;
  for (int j = 0; j <= 4; ++j) {
    const auto g = u * BoundaryFunction::monomial(m, j);
    worst = std::max(worst, l2_norm(antianalytic_project(cphi * g, false)));
  }
  rep.add_residual("antianalytic_part", worst, 1e-8);
  rep.note_grid(m);
  return rep;
}

VerificationReport check_nest(const RunConfig& config, std::uint64_t seed) {
  VerificationReport rep;
  SplitMix64 rng(seed);
  const auto basis = build_basis(single(config, kRadial, 6), config.quadrature);
  const std::size_t n = basis.size();
  const auto a = assemble_tto(random_polynomial(rng, 3), basis, config.quadrature).matrix;
  std::vector<std::size_t> halves{0};
  for (std::size_t b = 2; b < n; b += 2) halves.push_back(b);
  halves.push_back(n);
  for (const auto& nest : {NestPartition::full_refinement(n), NestPartition(halves), NestPartition::trivial(n)}) {
    const auto parts = nest_projections(a, nest);
    set_worst(rep, "sum_identity", max_abs(parts.upper - (parts.strictly_upper + parts.block_diagonal)), 0.0);
    const auto again = nest_projections(parts.strictly_upper, nest);
    set_worst(rep, "idempotence", max_abs(again.strictly_upper - parts.strictly_upper), 0.0);
    // Analytic symbols are lower triangular in this convention.
    set_worst(rep, "analytic_strict_part", max_abs(parts.strictly_upper), tolerances::kTriangularity);
  }
  const auto full = nest_projections(a, NestPartition::full_refinement(n));
  const auto d = diagonal_map(a);
  double diag = 0.0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      diag = std::max(diag, std::abs(full.block_diagonal(r, c) - (r == c ? d[r] : Complex{})));
  rep.add_residual("full_refinement_diagonal", diag, 0.0);
  rep.note_grid(basis.grid_size());
  return rep;
}

VerificationReport check_berezin(const RunConfig& config, std::uint64_t seed) {
  VerificationReport rep;
  SplitMix64 rng(seed);
  const auto spec = single(config, kRadial, 6);
  const auto basis = build_basis(spec, config.quadrature);
  const auto phi = random_polynomial(rng, 3);
  const auto psi = random_polynomial(rng, 3);
  const auto values = berezin_at_nodes(phi, psi, basis, config.quadrature);
  SymbolEvaluator ev_phi(phi, spec), ev_psi(psi, spec);
  double worst = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    worst = std::max(worst, std::abs(values[i] - (ev_phi.at(spec.zero(i)) + std::conj(ev_psi.at(spec.zero(i))))));
  rep.add_residual("node_values", worst, tolerances::kBerezin);
  rep.note_grid(basis.grid_size());
  return rep;
}

VerificationReport check_separation(const RunConfig& config, std::uint64_t seed) {
  VerificationReport rep;
  SplitMix64 rng(seed);
  std::vector<BlaschkeSpec> specs;
  if (config.zeros) {
    specs.push_back(config.zeros->spec());
  } else {
    specs.push_back(generate_zeros(kRadial, 8));
    specs.push_back(generate_zeros(zeros::RandomDisk{rng.next(), 0.95}, 8));
  }
  double worst = 0.0;
  for (const auto& spec : specs) {
    const auto profile = separation_profile(spec);
    for (std::size_t n = 0; n < spec.size(); ++n) {
      double product = 1.0;
      for (std::size_t i = 0; i < spec.size(); ++i)
        if (i != n) product *= pseudo_hyperbolic(spec.zero(n), spec.zero(i));
      const double omitted = std::abs(blaschke_eval(spec, spec.zero(n), n));
      worst = std::max({worst, std::abs(profile.deltas[n] - product), std::abs(profile.deltas[n] - omitted)});
    }
    rep.add_metric(label("min_delta_", static_cast<double>(rep.metrics.size())), profile.min_delta);
  }
  rep.add_residual("delta_forms", worst, 1e-12);
  return rep;
}

VerificationReport check_remark5(const RunConfig& config, std::uint64_t) {
  VerificationReport rep;
  const auto basis = build_basis(single(config, kRadial, 8), config.quadrature);
  const auto zero = remark5_experiment(basis, 2.0, 0.0);
  rep.add_residual("zero_magnitude", std::max(std::abs(zero.norm_phi - zero.norm_base), std::abs(zero.norm_sum - zero.norm_base)) /
                                          zero.norm_base,
                   1e-10);
  const auto big = remark5_experiment(basis, 2.0, 1e3);
  rep.add_residual("sum_drift", std::abs(big.norm_sum - big.norm_base) / big.norm_base, 1e-6);
  rep.add_residual("inverse_gap", 1.0 / big.gap, 1e-2);
  rep.add_metric("gap", big.gap);
  rep.add_metric("norm_phi", big.norm_phi);
  rep.add_metric("norm_psi", big.norm_psi);
  rep.add_metric("norm_sum", big.norm_sum);
  rep.note_grid(basis.grid_size());
  return rep;
}

std::vector<CheckInfo> make_registry() {
  return {
      {"basis", "The Takenaka-Malmquist functions e_n = b_1...b_{n-1} khat_n form an orthonormal basis of K_u",
       check_basis},
      {"separation", "delta_n = |u_n(z_n)|, the modulus at z_n of u with the n-th factor omitted",
       check_separation},
      {"triangularity",
       "For analytic phi, <A_phi e_c, e_r> = 0 whenever r < c, and the diagonal entries are phi(z_n)",
       check_triangularity},
      {"berezin", "<A_{phi + conj(psi)} khat_n, khat_n> = phi(z_n) + conj(psi(z_n))", check_berezin},
      {"lemma1", "A_phi = U (B_{conj(C phi)} + R) with U unitary and R of rank one, for phi in K_u", check_lemma1},
      {"lemma2", "A_{conj(psi)} = U (B_{conj(nu u)} + V) with nu = psi / z and V of rank one, for psi(0) = 0",
       check_lemma2},
      {"extension_by_zero", "conj(C phi) u z^j is analytic, so the Hankel part extends by zero on u H^2",
       check_extension_by_zero},
      {"lemma3", "A_phi = sum_i phi(z_i) A_{alpha_i}, so ||A_phi||_{S_1} <= sum_i |phi(z_i)| / delta_i",
       check_lemma3},
      {"theorem1", "||A_phi||_{S_p} is comparable to the Besov B_p norm of C phi", check_theorem1},
      {"theorem3a", "For interpolating zeros, A_phi is in S_p exactly when (phi(z_i)) is in l^p", check_theorem3a},
      {"theorem3b", "A_{conj(phi)} khat_j = conj(phi(z_j)) khat_j and A_phi h_j = phi(z_j) h_j for the dual basis",
       check_theorem3b},
      {"theorem4", "[<A khat_i, khat_j>] = D_{conj(psi)} G + G D_phi with G the normalized kernel Gram matrix",
       check_theorem4},
      {"nest", "R_N = T_N + D_N for a finite nest, and D_N is the diagonal under full refinement", check_nest},
      {"theorem7a", "(A_z)^k = A_{z^k} on K_u when u is a finite Blaschke product", check_theorem7a},
      {"crofoot", "The Crofoot transform is a unitary K_u -> K_{u_alpha} that intertwines the compressions",
       check_crofoot},
      {"theorem8", "||B_{conj(f)}||_{S_2}^2 = <f, Tf> for f in K_{u^2}", check_theorem8},
      {"theorem9", "Tf(w) = <f, k_w^2> = (zf)'(w) - 2 u(w) (z f_2)'(w)", check_theorem9},
      {"dirichlet", "For the shift-invariant limit the Hankel norm is the Dirichlet sum sum (n + 1) |fhat(n)|^2",
       check_dirichlet},
      {"remark5", "A_{phi + conj(psi)} can be small while A_phi and A_{conj(psi)} are both large", check_remark5},
  };
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string format_p(double p) {
  if (std::isinf(p)) return "inf";
  std::ostringstream os;
  os << std::setprecision(17) << p;
  return os.str();
}

nlohmann::ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

const std::vector<CheckInfo>& check_registry() {
  static const std::vector<CheckInfo> registry = make_registry();
  return registry;
}

const CheckInfo* find_check(std::string_view name) {
  for (const auto& c : check_registry())
    if (c.name == name) return &c;
  return nullptr;
}

std::vector<std::string> resolve_selection(std::span<const std::string> selection) {
  std::set<std::string> wanted;
  for (const auto& name : selection) {
    if (name == "all") {
      for (const auto& c : check_registry()) wanted.insert(c.name);
    } else if (find_check(name)) {
      wanted.insert(name);
    } else {
      throw UnknownCheck("unknown check '" + name + "'");
    }
  }
  std::vector<std::string> out;
  for (const auto& c : check_registry())
    if (wanted.contains(c.name)) out.push_back(c.name);
  return out;
}

std::uint64_t check_seed(std::uint64_t seed, std::string_view name) { return SplitMix64(seed ^ fnv1a(name)).next(); }

std::size_t default_workers() {
  if (const char* env = std::getenv("MODELSPACE_LAB_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<VerificationReport> run_suite(std::span<const std::string> selection, const RunConfig& config,
                                          std::size_t workers) {
  const auto names = resolve_selection(selection);
  std::vector<VerificationReport> reports(names.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < names.size(); i = next++) {
      const auto* info = find_check(names[i]);
      const auto start = Clock::now();
      VerificationReport rep;
      try {
        rep = info->run(config, check_seed(config.seed, info->name));
      } catch (const NumericalError& e) {
        rep = {};
        rep.error = e.what();
        rep.numerical_failure = true;
      } catch (const std::exception& e) {
        rep = {};
        rep.error = e.what();
      }
      rep.check = info->name;
      rep.anchor = info->anchor;
      rep.wall_ms = ms_since(start);
      reports[i] = std::move(rep);
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, names.size()));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  return reports;
}

SweepResult comparability_sweep(const ZeroSource& family, const SymbolSpec& phi, std::span<const double> p_values,
                                std::span<const std::size_t> ns, const QuadratureControl& control) {
  SweepResult out;
  std::vector<std::size_t> sizes(ns.begin(), ns.end());
  if (family.explicit_list()) sizes = {family.count};
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  std::vector<double> ps(p_values.begin(), p_values.end());
  std::sort(ps.begin(), ps.end());
  out.axis = "N";
  std::vector<double> deltas;
  for (std::size_t n : sizes) {
    const auto spec = family.explicit_list() ? family.spec() : family.spec(n);
    const auto basis = build_basis(spec, control);
    const auto a = assemble_tto(phi, basis, control);
    const auto sigma = singular_values(a.matrix);
    SymbolEvaluator ev(phi, spec);
    std::vector<Complex> nodes(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) nodes[i] = ev.at(spec.zero(i));
    const double min_delta = separation_profile(spec).min_delta;
    deltas.push_back(min_delta);
    for (double p : ps) {
      SweepRow row{n, p, schatten_norm(sigma, p), lp_norm(nodes, p), 0.0, min_delta, a.grid_size};
      if (row.node_lp_norm > 0.0) {
        row.ratio = row.schatten_norm / row.node_lp_norm;
      } else {
        row.ratio = row.schatten_norm > 0.0 ? kInfinity : 1.0;
      }
      out.rows.push_back(row);
    }
  }
  if (!deltas.empty()) {
    // Interpolating families level off; flag a tiny constant or two
    // consecutive drops by a factor of four or more.
    const double last = deltas.back();
    const std::size_t k = deltas.size();
    const bool collapsing = k >= 3 && last < 0.25 * deltas[k - 2] && deltas[k - 2] < 0.25 * deltas[k - 3];
    if (last < 1e-3 || collapsing) {
      out.non_interpolating = true;
      std::ostringstream msg;
      msg << "separation constant min delta fell to " << last << " at N = " << sizes.back()
          << "; the family may not be interpolating";
      out.warning = msg.str();
    }
  }
  return out;
}

VerificationReport sweep_report(const SweepResult& sweep) {
  VerificationReport rep;
  rep.check = "theorem3a";
  double band = 0.0;
  std::map<double, std::pair<double, double>> per_p;
  double bound = 0.0;
  bool has_inf = false;
  for (const auto& row : sweep.rows) {
    band = std::max(band, std::max(row.ratio, 1.0 / row.ratio));
    auto [it, fresh] = per_p.try_emplace(row.p, row.ratio, row.ratio);
    if (!fresh) {
      it->second.first = std::min(it->second.first, row.ratio);
      it->second.second = std::max(it->second.second, row.ratio);
    }
    if (std::isinf(row.p)) {
      has_inf = true;
      bound = std::max(bound, row.node_lp_norm - row.schatten_norm);
    }
    rep.note_grid(row.grid_m);
  }
  double spread = 1.0;
  for (const auto& [p, mm] : per_p) spread = std::max(spread, mm.second / mm.first);
  rep.add_residual("ratio_band", band, kRatioBand);
  rep.add_residual("ratio_spread", spread, kRatioSpread);
  if (has_inf) rep.add_residual("operator_bound", std::max(0.0, bound), tolerances::kBoundSlack);
  if (sweep.non_interpolating) rep.add_metric("non_interpolating", 1.0);
  return rep;
}

std::string sweep_csv(const SweepResult& sweep) {
  std::ostringstream os;
  os << "N,p,schatten_norm,node_lp_norm,ratio,min_delta,grid_M\n";
  os << std::setprecision(17);
  for (const auto& r : sweep.rows)
    os << r.n << ',' << format_p(r.p) << ',' << r.schatten_norm << ',' << r.node_lp_norm << ',' << r.ratio << ','
       << r.min_delta << ',' << r.grid_m << '\n';
  return os.str();
}

CancellationResult remark5_experiment(const ModelBasis& basis, double p, double magnitude) {
  const auto& spec = basis.spec();
  if (!spec.simple_zeros()) throw std::invalid_argument("remark5_experiment: zeros must be simple");
  const std::size_t n = spec.size();
  std::vector<Complex> base(n), phi(n), psi(n, Complex(-magnitude, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    base[i] = spec.zero(i);
    phi[i] = base[i] + magnitude;
  }
  const auto& control = basis.control();
  const auto sum_symbol = symbols::add(symbols::node_values(phi), symbols::conjugate(symbols::node_values(psi)));
  CancellationResult r;
  r.magnitude = magnitude;
  r.p = p;
  r.norm_base = schatten_norm(assemble_tto(symbols::node_values(base), basis, control).matrix, p);
  r.norm_phi = schatten_norm(assemble_tto(symbols::node_values(phi), basis, control).matrix, p);
  r.norm_psi = schatten_norm(assemble_tto(symbols::conjugate(symbols::node_values(psi)), basis, control).matrix, p);
  r.norm_sum = schatten_norm(assemble_tto(sum_symbol, basis, control).matrix, p);
  r.gap = r.norm_sum > 0.0 ? std::min(r.norm_phi, r.norm_psi) / r.norm_sum : kInfinity;
  return r;
}

std::string report_json(const VerificationReport& report, bool include_wall_time) {
  nlohmann::ordered_json j;
  j["check"] = report.check;
  j["anchor"] = report.anchor;
  auto& residuals = j["residuals"] = nlohmann::ordered_json::object();
  for (const auto& r : report.residuals) residuals[r.name] = number(r.value);
  j["tolerance"] = report.tolerance();
  j["passed"] = report.passed();
  j["grid_M"] = report.grid_m;
  if (include_wall_time) j["wall_ms"] = report.wall_ms;
  auto& tols = j["tolerances"] = nlohmann::ordered_json::object();
  for (const auto& r : report.residuals) tols[r.name] = r.tolerance;
  auto& metrics = j["metrics"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.metrics) metrics[k] = number(v);
  if (report.error) {
    j["error"] = *report.error;
    j["numerical_failure"] = report.numerical_failure;
  }
  return j.dump();
}

}  // namespace modelspace
