#pragma once

// Analytic Besov norms by area quadrature and singular-value decay tables.

#include <cstddef>
#include <span>
#include <vector>

#include "modelspace/boundary.hpp"
#include "modelspace/linalg.hpp"

namespace modelspace {

struct BesovEstimate {
  double p = 2.0;
  std::size_t n = 2;
  double value = 0.0;
  std::size_t rings = 0;
  std::size_t angular_points = 0;
  /// Value at each ring count, rings doubling from the first entry.
  std::vector<double> history;
  /// Set when the outermost ring still carries a significant share of the
  /// integral, i.e. the weighted derivative does not decay at the rim.
  bool flagged = false;
};

struct BesovOptions {
  std::size_t n = 2;
  std::size_t rings = 256;
  std::size_t doublings = 3;
};

/// value^p = sum_{k<n} |f^(k)(0)|^p
///         + (1/pi) int_D ((1-|z|^2)^n |f^(n)(z)|)^p (1-|z|^2)^-2 dA(z).
/// Midpoint rings in s with r = 1 - e^{-s}, trapezoid in angle on f's grid.
/// Throws std::invalid_argument if n * p <= 1 or f is not analytic.
BesovEstimate besov_norm(const BoundaryFunction& f, double p, const BesovOptions& options = {});

struct CompactnessRow {
  std::size_t n = 0;
  std::vector<double> sigma;
  /// tail[K] = sum_{k>=K} sigma_k^2 / sum sigma_k^2 (zero-based K).
  std::vector<double> tail;
};

/// Singular values and tail fractions of each member of a family.
std::vector<CompactnessRow> compactness_proxy(std::span<const ComplexMatrix> family);

}  // namespace modelspace
