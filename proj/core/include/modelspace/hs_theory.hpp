#pragma once

// Hilbert-Schmidt norms of truncated Hankel bilinear forms through the
// transform Tf(w) = <f, k_w^2> on K_{u^2}.

#include <cstddef>
#include <span>
#include <vector>

#include "modelspace/model_space.hpp"
#include "modelspace/report.hpp"

namespace modelspace {

/// f = f1 + u f2 with f1, f2 in K_u, both as basis coordinates and as samples
/// on the grid of f.
struct SplitSymbol {
  BoundaryFunction f;
  std::vector<Complex> f1;
  std::vector<Complex> f2;
  BoundaryFunction f1_samples;
  BoundaryFunction f2_samples;
  double residual = 0.0;
};

inline constexpr double kSplitTolerance = 1e-10;

/// f2 = P(conj(u) f), f1 = P_u f, on the grid of f.  Throws
/// std::invalid_argument when ||f - f1 - u f2|| exceeds
/// kSplitTolerance * max(1, ||f||), i.e. f is not in K_{u^2} at this resolution.
SplitSymbol split_symbol(const BoundaryFunction& f, const ModelBasis& basis);

/// Closed form (zf)'(w) - 2 u(w) (z f2)'(w).  Throws std::domain_error for |w| >= 1.
Complex T_transform(const SplitSymbol& s, Complex w, const BlaschkeSpec& spec);

/// <f, k_w^2> by quadrature on the grid of f.
Complex T_direct(const SplitSymbol& s, Complex w, const BlaschkeSpec& spec);

/// <f, Tf> as an L^2 pairing on the circle, with Tf synthesized from its Taylor
/// coefficients.  Throws NumericalError if the imaginary part exceeds
/// 1e-8 * max(1, |real part|).
double hs_norm_via_T(const SplitSymbol& s, const BlaschkeSpec& spec);

/// ||bilinear form of conj(f)||_F^2 against <f, Tf>.
VerificationReport theorem8_check(const BoundaryFunction& f, const ModelBasis& basis);

/// Closed-form T against <f, k_w^2> at the given interior points.
VerificationReport theorem9_check(const BoundaryFunction& f, const ModelBasis& basis, std::span<const Complex> points);

/// sum_{0 <= n < truncation} (n + 1) |fhat(n)|^2.  Throws std::invalid_argument
/// if f has negative-frequency content above 1e-12 relative to its norm.
double classical_dirichlet_oracle(const BoundaryFunction& f, std::size_t truncation);

}  // namespace modelspace
