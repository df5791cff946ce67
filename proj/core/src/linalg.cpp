#include "modelspace/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace modelspace {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream msg;
    msg << op << ": shape mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x"
        << b.cols();
    throw std::invalid_argument(msg.str());
  }
}

double column_norm2(const ComplexMatrix& m, std::size_t c) {
  double s = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) s += std::norm(m(r, c));
  return s;
}

Complex column_dot(const ComplexMatrix& m, std::size_t a, std::size_t b) {
  // a^H b
  Complex s = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) s += std::conj(m(r, a)) * m(r, b);
  return s;
}

void rotate_columns(ComplexMatrix& m, std::size_t p, std::size_t q, double c, Complex s_pq,
                    Complex s_qp) {
  // [x_p, x_q] <- [c x_p + s_qp x_q, s_pq x_p + c x_q]
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const Complex xp = m(r, p);
    const Complex xq = m(r, q);
    m(r, p) = c * xp + s_qp * xq;
    m(r, q) = s_pq * xp + c * xq;
  }
}

// Extends the first `filled` orthonormal columns of q to a full orthonormal set.
void complete_orthonormal(ComplexMatrix& q, std::vector<bool> filled) {
  const std::size_t m = q.rows();
  std::size_t candidate = 0;
  for (std::size_t c = 0; c < q.cols(); ++c) {
    if (filled[c]) continue;
    while (candidate < m) {
      std::vector<Complex> v(m, 0.0);
      v[candidate++] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t k = 0; k < q.cols(); ++k) {
          if (!filled[k]) continue;
          Complex proj = 0.0;
          for (std::size_t r = 0; r < m; ++r) proj += std::conj(q(r, k)) * v[r];
          for (std::size_t r = 0; r < m; ++r) v[r] -= proj * q(r, k);
        }
      }
      const double n = vector_norm(v);
      if (n > 0.5) {
        for (std::size_t r = 0; r < m; ++r) q(r, c) = v[r] / n;
        filled[c] = true;
        break;
      }
    }
  }
}

Svd svd_tall(const ComplexMatrix& m, const SvdOptions& options) {
  const std::size_t n = m.cols();
  ComplexMatrix w = m;
  ComplexMatrix v = ComplexMatrix::identity(n);

  double worst = 0.0;
  bool converged = false;
  for (int sweep = 0; sweep < options.max_sweeps && !converged; ++sweep) {
    converged = true;
    worst = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = column_norm2(w, p);
        const double beta = column_norm2(w, q);
        const Complex gamma = column_dot(w, p, q);
        const double g = std::abs(gamma);
        if (alpha == 0.0 || beta == 0.0 || g == 0.0) continue;
        const double rel = g / std::sqrt(alpha * beta);
        if (!(rel > options.rotation_tol)) continue;
        worst = std::max(worst, rel);
        converged = false;
        const Complex phase = gamma / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        // [w_p, w_q] J with J = [[c, s e^{i phi}], [-s e^{-i phi}, c]]
        rotate_columns(w, p, q, c, s * phase, -s * std::conj(phase));
        rotate_columns(v, p, q, c, s * phase, -s * std::conj(phase));
      }
    }
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "svd: one-sided Jacobi did not converge in " << options.max_sweeps
        << " sweeps (largest relative off-diagonal " << worst << ")";
    throw NumericalError(msg.str(), worst);
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(column_norm2(w, j));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

  Svd out;
  out.left = ComplexMatrix(m.rows(), n);
  out.right = ComplexMatrix(n, n);
  out.spectrum.values.resize(n);
  const double floor = (n > 0 ? sigma[order[0]] : 0.0) * static_cast<double>(m.rows()) *
                       std::numeric_limits<double>::epsilon();
  std::vector<bool> filled(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.spectrum.values[k] = sigma[j];
    for (std::size_t r = 0; r < n; ++r) out.right(r, k) = v(r, j);
    if (sigma[j] > floor && sigma[j] > 0.0) {
      for (std::size_t r = 0; r < m.rows(); ++r) out.left(r, k) = w(r, j) / sigma[j];
      filled[k] = true;
    }
  }
  complete_orthonormal(out.left, filled);
  return out;
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : ComplexMatrix(rows, cols, std::vector<Complex>(rows * cols, Complex{})) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("ComplexMatrix: dimensions must be positive");
  if (entries_.size() != rows * cols) throw std::invalid_argument("ComplexMatrix: entry count mismatch");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.begin()->size() : 0;
  std::vector<Complex> entries;
  entries.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw std::invalid_argument("ComplexMatrix::from_rows: ragged rows");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return ComplexMatrix(r, c, std::move(entries));
}

std::vector<Complex> ComplexMatrix::column(std::size_t c) const {
  std::vector<Complex> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void ComplexMatrix::set_column(std::size_t c, std::span<const Complex> values) {
  if (values.size() != rows_) throw std::invalid_argument("set_column: length mismatch");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = values[r];
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

bool ComplexMatrix::all_finite() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator-=");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& z : entries_) z *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: inner dimension mismatch");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

std::vector<Complex> operator*(const ComplexMatrix& a, std::span<const Complex> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("matrix-vector product: size mismatch");
  std::vector<Complex> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) out[i] += a(i, k) * x[k];
  return out;
}

double frobenius_norm(const ComplexMatrix& m) {
  double s = 0.0;
  for (const auto& z : m.entries()) s += std::norm(z);
  return std::sqrt(s);
}

double max_abs(const ComplexMatrix& m) {
  double s = 0.0;
  for (const auto& z : m.entries()) s = std::max(s, std::abs(z));
  return s;
}

double vector_norm(std::span<const Complex> x) {
  double s = 0.0;
  for (const auto& z : x) s += std::norm(z);
  return std::sqrt(s);
}

Svd svd(const ComplexMatrix& m, const SvdOptions& options) {
  if (m.empty()) throw std::invalid_argument("svd: empty matrix");
  if (!m.all_finite()) throw std::invalid_argument("svd: matrix has non-finite entries");
  if (m.rows() >= m.cols()) return svd_tall(m, options);
  Svd t = svd_tall(m.adjoint(), options);
  return Svd{std::move(t.right), std::move(t.spectrum), std::move(t.left)};
}

SingularSpectrum singular_values(const ComplexMatrix& m) { return svd(m).spectrum; }

double schatten_norm(const SingularSpectrum& spectrum, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("schatten_norm: p must be positive");
  const auto& s = spectrum.values;
  if (s.empty()) return 0.0;
  const double top = *std::max_element(s.begin(), s.end());
  if (std::isinf(p) || top == 0.0) return top;
  double acc = 0.0;
  for (double v : s) acc += std::pow(v / top, p);
  return top * std::pow(acc, 1.0 / p);
}

double schatten_norm(const ComplexMatrix& m, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("schatten_norm: p must be positive");
  return schatten_norm(singular_values(m), p);
}

double lp_norm(std::span<const Complex> values, double p) {
  SingularSpectrum s;
  s.values.reserve(values.size());
  for (const auto& z : values) s.values.push_back(std::abs(z));
  return schatten_norm(s, p);
}

HermitianEigen hermitian_eigen(const ComplexMatrix& h_in, int max_sweeps) {
  if (!h_in.square()) throw std::invalid_argument("hermitian_eigen: matrix must be square");
  const std::size_t n = h_in.rows();
  ComplexMatrix h = h_in;
  // Symmetrize away rounding asymmetry; the diagonal is taken as real.
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) = h(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex avg = 0.5 * (h(i, j) + std::conj(h(j, i)));
      h(i, j) = avg;
      h(j, i) = std::conj(avg);
    }
  }
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double scale = std::max(frobenius_norm(h), std::numeric_limits<double>::min());

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += std::norm(h(i, j));
    if (std::sqrt(off) <= 1e-15 * scale) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double g = std::abs(h(p, q));
        if (g <= 1e-300) continue;
        const Complex phase = h(p, q) / g;
        // Phase step: column q times conj(phase), row q times phase.
        for (std::size_t k = 0; k < n; ++k) h(k, q) *= std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) h(q, k) *= phase;
        for (std::size_t k = 0; k < n; ++k) v(k, q) *= std::conj(phase);
        const double a = h(p, p).real();
        const double b = h(q, q).real();
        const double theta = (b - a) / (2.0 * g);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(1.0, theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const Complex hp = h(k, p), hq = h(k, q);
          h(k, p) = c * hp - s * hq;
          h(k, q) = s * hp + c * hq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex hp = h(p, k), hq = h(q, k);
          h(p, k) = c * hp - s * hq;
          h(q, k) = s * hp + c * hq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vp = v(k, p), vq = v(k, q);
          v(k, p) = c * vp - s * vq;
          v(k, q) = s * vp + c * vq;
        }
        h(p, q) = 0.0;
        h(q, p) = 0.0;
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return h(a, a).real() < h(b, b).real(); });
  HermitianEigen out;
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values.push_back(h(order[k], order[k]).real());
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

Qr qr(const ComplexMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  if (rows < cols) throw std::invalid_argument("qr: matrix must be tall (rows >= cols)");
  ComplexMatrix r = m;
  std::vector<std::vector<Complex>> reflectors;
  for (std::size_t k = 0; k < cols; ++k) {
    std::vector<Complex> x(rows - k);
    for (std::size_t i = k; i < rows; ++i) x[i - k] = r(i, k);
    const double xn = vector_norm(x);
    std::vector<Complex> vk(rows - k, 0.0);
    if (xn > 0.0) {
      const Complex phase = std::abs(x[0]) > 0.0 ? x[0] / std::abs(x[0]) : Complex{1.0};
      vk = x;
      vk[0] += phase * xn;
      const double vn = vector_norm(vk);
      for (auto& z : vk) z /= vn;
      for (std::size_t j = k; j < cols; ++j) {
        Complex dot = 0.0;
        for (std::size_t i = k; i < rows; ++i) dot += std::conj(vk[i - k]) * r(i, j);
        for (std::size_t i = k; i < rows; ++i) r(i, j) -= 2.0 * vk[i - k] * dot;
      }
    }
    reflectors.push_back(std::move(vk));
  }
  ComplexMatrix q(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) q(j, j) = 1.0;
  for (std::size_t kk = cols; kk-- > 0;) {
    const auto& vk = reflectors[kk];
    for (std::size_t j = 0; j < cols; ++j) {
      Complex dot = 0.0;
      for (std::size_t i = kk; i < rows; ++i) dot += std::conj(vk[i - kk]) * q(i, j);
      for (std::size_t i = kk; i < rows; ++i) q(i, j) -= 2.0 * vk[i - kk] * dot;
    }
  }
  ComplexMatrix rr(cols, cols);
  for (std::size_t i = 0; i < cols; ++i)
    for (std::size_t j = i; j < cols; ++j) rr(i, j) = r(i, j);
  return Qr{std::move(q), std::move(rr)};
}

ComplexMatrix cholesky(const ComplexMatrix& h) {
  if (!h.square()) throw std::invalid_argument("cholesky: matrix must be square");
  const std::size_t n = h.rows();
  ComplexMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = h(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!(d > 0.0)) throw NumericalError("cholesky: matrix is not positive definite", d);
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      Complex s = h(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / ljj;
    }
  }
  return l;
}

ComplexMatrix triangular_inverse(const ComplexMatrix& t, bool lower) {
  if (!t.square()) throw std::invalid_argument("triangular_inverse: matrix must be square");
  const std::size_t n = t.rows();
  const ComplexMatrix work = lower ? t : t.transpose();
  ComplexMatrix inv(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = c; i < n; ++i) {
      Complex s = (i == c) ? Complex{1.0} : Complex{};
      for (std::size_t k = c; k < i; ++k) s -= work(i, k) * inv(k, c);
      if (work(i, i) == Complex{}) throw NumericalError("triangular_inverse: singular matrix", 0.0);
      inv(i, c) = s / work(i, i);
    }
  }
  return lower ? inv : inv.transpose();
}

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.square() || a.rows() != b.rows()) throw std::invalid_argument("solve: dimension mismatch");
  const std::size_t n = a.rows();
  ComplexMatrix lu = a;
  ComplexMatrix x = b;
  const double scale = max_abs(a);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
    if (std::abs(lu(piv, k)) <= scale * 1e-300 || lu(piv, k) == Complex{})
      throw NumericalError("solve: matrix is singular", std::abs(lu(piv, k)));
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
      for (std::size_t j = 0; j < x.cols(); ++j) std::swap(x(k, j), x(piv, j));
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex f = lu(i, k) / lu(k, k);
      lu(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
      for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) -= f * x(k, j);
    }
  }
  for (std::size_t j = 0; j < x.cols(); ++j) {
    for (std::size_t i = n; i-- > 0;) {
      Complex s = x(i, j);
      for (std::size_t k = i + 1; k < n; ++k) s -= lu(i, k) * x(k, j);
      x(i, j) = s / lu(i, i);
    }
  }
  return x;
}

ComplexMatrix inverse(const ComplexMatrix& a) { return solve(a, ComplexMatrix::identity(a.rows())); }

NestPartition::NestPartition(std::vector<std::size_t> boundaries) : boundaries_(std::move(boundaries)) {
  if (boundaries_.size() < 2 || boundaries_.front() != 0)
    throw std::invalid_argument("NestPartition: boundaries must start at 0 and have at least two entries");
  for (std::size_t i = 1; i < boundaries_.size(); ++i)
    if (boundaries_[i] <= boundaries_[i - 1])
      throw std::invalid_argument("NestPartition: boundaries must be strictly increasing");
}

NestPartition NestPartition::full_refinement(std::size_t dim) {
  std::vector<std::size_t> b(dim + 1);
  std::iota(b.begin(), b.end(), std::size_t{0});
  return NestPartition(std::move(b));
}

NestPartition NestPartition::trivial(std::size_t dim) { return NestPartition({0, dim}); }

std::size_t NestPartition::block_of(std::size_t index) const {
  if (index >= dim()) throw std::out_of_range("NestPartition::block_of: index out of range");
  auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), index);
  return static_cast<std::size_t>(it - boundaries_.begin()) - 1;
}

NestProjections nest_projections(const ComplexMatrix& m, const NestPartition& nest) {
  if (!m.square() || m.rows() != nest.dim())
    throw std::invalid_argument("nest_projections: nest does not match a square matrix of its dimension");
  const std::size_t n = m.rows();
  NestProjections out{ComplexMatrix(n, n), ComplexMatrix(n, n), ComplexMatrix(n, n)};
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t br = nest.block_of(r);
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t bc = nest.block_of(c);
      if (br < bc) out.strictly_upper(r, c) = m(r, c);
      if (br == bc) out.block_diagonal(r, c) = m(r, c);
      if (br <= bc) out.upper(r, c) = m(r, c);
    }
  }
  return out;
}

std::vector<Complex> diagonal_map(const ComplexMatrix& m) {
  if (!m.square()) throw std::invalid_argument("diagonal_map: matrix must be square");
  std::vector<Complex> d(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) d[i] = m(i, i);
  return d;
}

}  // namespace modelspace
