#pragma once

// Matrices of truncated Toeplitz (A) and truncated Hankel (B) operators in the
// Takenaka-Malmquist basis, and the factorization identities built from them.
//
// Matrix convention: entry (r, c) = <A e_c, e_r>.  Analytic symbols therefore
// give lower-triangular matrices.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "modelspace/model_space.hpp"
#include "modelspace/report.hpp"
#include "modelspace/symbol.hpp"

namespace modelspace {

struct OperatorMatrix {
  ComplexMatrix matrix;
  std::string basis_tag;
  SymbolSpec symbol;
  std::size_t grid_size = 0;
};

enum class HankelConvention {
  /// (r, c) = <(I - P)(phi e_c), conj(e_r)>; constants are excluded.
  operator_form,
  /// (r, c) = <e_r e_c, f> for the symbol phi = conj(f); symmetric.
  bilinear_form,
};

/// Stable identifier of a zero set (count plus a hash of the bit patterns).
std::string basis_tag(const BlaschkeSpec& spec);

/// Callback receiving a circle point, the basis values e_1..e_N there, and the
/// accumulator slots.
using BasisKernel = std::function<void(const CirclePoint&, std::span<const Complex> e, std::span<Complex> acc)>;

/// Circle means of `width` accumulated quantities built from the basis.  Uses
/// adaptive refinement, or the fixed grid if one is given.
AdaptiveResult<std::vector<Complex>> basis_quadrature(std::string_view task, const ModelBasis& basis,
                                                      const QuadratureControl& control,
                                                      std::optional<std::size_t> fixed_grid, std::size_t width,
                                                      const BasisKernel& kernel);

OperatorMatrix assemble_tto(const SymbolSpec& symbol, const ModelBasis& basis, const QuadratureControl& control);
OperatorMatrix assemble_tho(const SymbolSpec& symbol, const ModelBasis& basis, HankelConvention convention,
                            const QuadratureControl& control);

/// A_phi = U (B_conj(C phi) + R) with U = multiplication by u conj(z) and
/// R f = <f, C phi> 1.  Residuals:
///   hankel_form: B taken as (I - P) M, applied to each e_n on a grid;
///   matrix_form: B in operator convention, R f = <f, C phi> conj(P_u 1).
/// Throws std::invalid_argument if phi is not in K_u.
VerificationReport lemma1_factorization(const SymbolSpec& phi, const ModelBasis& basis,
                                        const QuadratureControl& control);

/// A_conj(psi) = U (B_conj(nu u) + V) with nu = psi / z and V rank one.
/// Throws std::invalid_argument if psi is not in K_u or |psi(0)| > 1e-12.
VerificationReport lemma2_factorization(const SymbolSpec& psi, const ModelBasis& basis,
                                        const QuadratureControl& control);

/// A_phi = sum_i phi(z_i) A_alpha_i, with A_phi assembled from the polynomial
/// interpolant of the node values (a different interpolant than the sum), plus
/// the trace-norm bound ||A_phi||_S1 <= sum |phi(z_i)| / delta_i.
VerificationReport lemma3_expansion(const NodeValuesSymbol& phi, const ModelBasis& basis,
                                    const QuadratureControl& control);

/// ||(A_z)^k - A_{z^k}||_F.  Throws std::invalid_argument for k = 0.
VerificationReport compressed_shift_power(const ModelBasis& basis, std::size_t k, const QuadratureControl& control);

/// <A_{phi + conj(psi)} khat_n, khat_n> for each zero.
std::vector<Complex> berezin_at_nodes(const SymbolSpec& phi, const SymbolSpec& psi, const ModelBasis& basis,
                                      const QuadratureControl& control);

/// Kernel eigenrelation A_conj(phi) khat_j = conj(phi(z_j)) khat_j and the
/// dual-basis eigenrelation A_phi h_n = phi(z_n) h_n for analytic phi.
VerificationReport eigenrelation_check(const SymbolSpec& phi, const ModelBasis& basis,
                                       const QuadratureControl& control);

/// Crofoot transform T_alpha f = sqrt(1 - |alpha|^2) f / (1 - conj(alpha) u).
/// Residuals: unitarity of T_alpha on the basis, norm preservation on a fixed
/// random element, and W^H A^{u_alpha}_phi W = A^u_{phi / (1 - alpha conj(u))}
/// where W is the matrix of T_alpha in an orthonormalized image basis.
VerificationReport crofoot_check(Complex alpha, const SymbolSpec& phi, const ModelBasis& basis,
                                 const QuadratureControl& control);

/// [<A khat_i, khat_j>] = D_conj(psi) G + G D_phi with G(i, j) = <khat_i, khat_j>
/// in closed form; metrics carry ||G - I||_{S_p} for each p in p_values.
VerificationReport gram_identity_check(const SymbolSpec& phi, const SymbolSpec& psi, const ModelBasis& basis,
                                       const QuadratureControl& control, std::span<const double> p_values);

/// Normalized kernel Gram matrix G(i, j) = <khat_i, khat_j> from the closed
/// form sqrt(1-|z_i|^2) sqrt(1-|z_j|^2) / (1 - conj(z_i) z_j).
ComplexMatrix normalized_kernel_gram(const BlaschkeSpec& spec);

}  // namespace modelspace
