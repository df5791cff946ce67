#pragma once

// Symbols of truncated Toeplitz and Hankel operators, and their pointwise
// evaluation on the circle and inside the disk.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "modelspace/blaschke.hpp"
#include "modelspace/boundary.hpp"

namespace modelspace {

/// Finite Laurent polynomial sum_k c_k z^k (negative k allowed).
struct LaurentSymbol {
  std::map<long, Complex> coefficients;
};

/// Values at the (simple) zeros of u.  Realized as the interpolant
/// sum_i values[i] alpha_i with alpha_i = u_i / u_i(z_i), which lies in K_u.
struct NodeValuesSymbol {
  std::vector<Complex> values;
};

/// One term of a closed-form symbol.  Terms that refer to u (model kernels,
/// basis elements, node interpolants) are bound to the Blaschke product the
/// symbol is evaluated against.
struct ClosedTerm {
  enum class Kind {
    monomial,       // z^index
    szego_kernel,   // 1 / (1 - conj(point) z)
    model_kernel,   // (1 - conj(u(point)) u(z)) / (1 - conj(point) z)
    basis_element,  // e_index of the Takenaka-Malmquist basis
    lagrange,       // alpha_index = u_index / u_index(z_index)
  };
  Kind kind = Kind::monomial;
  Complex coeff = 1.0;
  long index = 0;
  Complex point{};
  bool conjugated = false;
};

struct ClosedFormSymbol {
  std::vector<ClosedTerm> terms;
};

/// Boundary samples on a fixed grid.  Operators with such symbols are
/// assembled on that grid without refinement.
struct SampledSymbol {
  BoundaryFunction samples;
};

using SymbolSpec = std::variant<LaurentSymbol, NodeValuesSymbol, ClosedFormSymbol, SampledSymbol>;

namespace symbols {
SymbolSpec constant(Complex c);
SymbolSpec monomial(long power, Complex coeff = 1.0);
SymbolSpec szego_kernel(Complex w, Complex coeff = 1.0);
SymbolSpec model_kernel(Complex w, Complex coeff = 1.0);
SymbolSpec basis_element(std::size_t n, Complex coeff = 1.0);
SymbolSpec basis_combination(std::span<const Complex> coords);
SymbolSpec lagrange(std::size_t n, Complex coeff = 1.0);
SymbolSpec node_values(std::vector<Complex> values);
SymbolSpec sampled(BoundaryFunction samples);

/// Complex conjugate of the boundary function.
SymbolSpec conjugate(const SymbolSpec& s);
SymbolSpec scale(Complex c, const SymbolSpec& s);
/// a + b.  Laurent + Laurent stays Laurent and Sampled + Sampled stays
/// Sampled (same grid required); other mixtures become closed forms.
/// Mixing Sampled with anything else throws std::invalid_argument.
SymbolSpec add(const SymbolSpec& a, const SymbolSpec& b);
}  // namespace symbols

/// True when the symbol has no conjugated terms and no negative frequencies
/// (for sampled symbols: negative Fourier coefficients below 1e-12).
bool is_analytic(const SymbolSpec& s);

/// Short human-readable description used in reports.
std::string describe(const SymbolSpec& s);

/// Pointwise evaluator of a symbol bound to a Blaschke product.  Holds scratch
/// space, so each thread needs its own copy.
class SymbolEvaluator {
 public:
  /// Throws std::invalid_argument if node indices exceed the number of zeros,
  /// or node-value terms are used with repeated zeros.
  SymbolEvaluator(const SymbolSpec& symbol, const BlaschkeSpec& spec);

  Complex at(const CirclePoint& p) const;
  /// Harmonic extension into the disk: analytic parts evaluated at z,
  /// conjugated parts as conj(g(z)).  Requires |z| < 1.
  Complex at(Complex z) const;

  /// Grid of a sampled symbol; empty otherwise.
  std::optional<std::size_t> fixed_grid() const;

 private:
  struct Kernel {
    Complex coeff;
    Complex point;
    Complex u_at_point;
    bool model;
    bool conjugated;
  };
  void collect(const ClosedTerm& t);

  const BlaschkeSpec* spec_;
  std::map<long, Complex> laurent_;
  std::vector<Kernel> kernels_;
  // Coefficients of basis elements and node interpolants, analytic and conjugated parts.
  std::vector<Complex> basis_, basis_conj_;
  std::vector<Complex> lagrange_, lagrange_conj_;
  std::vector<Complex> node_scale_;  // 1 / u_i(z_i)
  bool has_basis_ = false;
  bool has_lagrange_ = false;
  std::optional<BoundaryFunction> samples_;
  mutable std::vector<Complex> scratch_;
};

}  // namespace modelspace
