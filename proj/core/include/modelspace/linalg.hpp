#pragma once

// Dense complex linear algebra for the small operator matrices of the lab.
//
// Orientation convention used throughout the project: entry (row r, col c)
// of an operator matrix is <A e_c, e_r>, so column c holds the coordinates of
// the image of the c-th basis vector.  Under this convention a truncated
// Toeplitz operator with analytic symbol is LOWER triangular in the
// Takenaka-Malmquist basis (the transpose of the "upper triangular" phrasing
// common in the operator-theory literature).

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace modelspace {

using Complex = std::complex<double>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Raised when an iterative numerical method cannot certify its result.
/// `residual()` carries the last measured defect for forensic reruns.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const Complex> values);
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return entries_.empty(); }
  bool square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  std::span<const Complex> entries() const noexcept { return entries_; }
  std::span<Complex> entries() noexcept { return entries_; }

  std::vector<Complex> column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const Complex> values);

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  bool all_finite() const noexcept;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex s);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
std::vector<Complex> operator*(const ComplexMatrix& a, std::span<const Complex> x);

double frobenius_norm(const ComplexMatrix& m);
double max_abs(const ComplexMatrix& m);
double vector_norm(std::span<const Complex> x);

/// Singular values, sorted nonincreasing, all nonnegative.
struct SingularSpectrum {
  std::vector<double> values;
};

struct Svd {
  ComplexMatrix left;   // rows x k, orthonormal columns
  SingularSpectrum spectrum;
  ComplexMatrix right;  // cols x k, orthonormal columns
};

struct SvdOptions {
  int max_sweeps = 30;
  double rotation_tol = 1e-14;
};

/// Thin SVD by one-sided (Hestenes) Jacobi rotations, k = min(rows, cols).
/// Throws NumericalError when the sweep cap is reached before every column
/// pair is orthogonal to `rotation_tol` (relative).
Svd svd(const ComplexMatrix& m, const SvdOptions& options = {});
SingularSpectrum singular_values(const ComplexMatrix& m);

/// (sum sigma_i^p)^(1/p); p = kInfinity gives sigma_1.  For 0 < p < 1 this is
/// the usual quasi-norm (no triangle inequality).
double schatten_norm(const SingularSpectrum& spectrum, double p);
double schatten_norm(const ComplexMatrix& m, double p);

/// l^p norm of a sequence with the same conventions as schatten_norm.
double lp_norm(std::span<const Complex> values, double p);

struct HermitianEigen {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column j pairs with values[j]
};

/// Cyclic complex Jacobi eigendecomposition of a Hermitian matrix.
HermitianEigen hermitian_eigen(const ComplexMatrix& h, int max_sweeps = 50);

struct Qr {
  ComplexMatrix q;  // rows x cols, orthonormal columns
  ComplexMatrix r;  // cols x cols, upper triangular
};

/// Householder QR of a tall (rows >= cols) matrix.
Qr qr(const ComplexMatrix& m);

/// Lower-triangular L with h = L L^*.  Throws NumericalError if h is not
/// numerically positive definite.
ComplexMatrix cholesky(const ComplexMatrix& h);

/// Inverse of a lower- or upper-triangular matrix.
ComplexMatrix triangular_inverse(const ComplexMatrix& t, bool lower);

/// Solves a x = b (b may have several columns) by partially pivoted LU.
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix inverse(const ComplexMatrix& a);

/// Boundaries 0 = s_0 < s_1 < ... < s_n = dim of a finite nest of coordinate
/// subspaces S_i = span{e_1, ..., e_{s_i}}.
class NestPartition {
 public:
  explicit NestPartition(std::vector<std::size_t> boundaries);
  static NestPartition full_refinement(std::size_t dim);
  static NestPartition trivial(std::size_t dim);

  std::span<const std::size_t> boundaries() const noexcept { return boundaries_; }
  std::size_t dim() const noexcept { return boundaries_.back(); }
  std::size_t block_of(std::size_t index) const;

 private:
  std::vector<std::size_t> boundaries_;
};

/// Triangular truncations relative to a nest:
///   T = sum P_{S_{i-1}} A dP_i   (strictly block upper)
///   R = sum P_{S_i} A dP_i       (block upper including diagonal blocks)
///   D = sum dP_i A dP_i          (block diagonal)
struct NestProjections {
  ComplexMatrix strictly_upper;
  ComplexMatrix upper;
  ComplexMatrix block_diagonal;
};

NestProjections nest_projections(const ComplexMatrix& m, const NestPartition& nest);

/// The sequence <A e_i, e_i>.
std::vector<Complex> diagonal_map(const ComplexMatrix& m);

}  // namespace modelspace
