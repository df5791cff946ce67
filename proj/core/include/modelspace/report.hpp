#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace modelspace {

/// Tolerances used by the named checks.  Kept in one place so that a report
/// and the check that produced it always agree.
namespace tolerances {
inline constexpr double kTriangularity = 1e-10;
inline constexpr double kDiagonal = 1e-8;
inline constexpr double kAdjoint = 1e-10;
inline constexpr double kFactorization = 1e-8;
inline constexpr double kLemma3 = 1e-8;
inline constexpr double kBoundSlack = 1e-10;
inline constexpr double kShiftPower = 1e-10;
inline constexpr double kBerezin = 1e-8;
inline constexpr double kCrofoot = 1e-6;
inline constexpr double kGramIdentity = 1e-8;
inline constexpr double kKernelEigen = 1e-8;
inline constexpr double kDualEigen = 1e-7;
inline constexpr double kTransform = 1e-8;
inline constexpr double kHilbertSchmidt = 1e-6;
inline constexpr double kSplit = 1e-10;
}  // namespace tolerances

struct Residual {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;

  /// NaN never passes.
  bool passed() const noexcept { return value <= tolerance; }
};

/// Outcome of one named check.  Residuals are judged against their own
/// tolerances; metrics are recorded without a verdict.
struct VerificationReport {
  std::string check;
  std::string anchor;
  std::vector<Residual> residuals;
  std::vector<std::pair<std::string, double>> metrics;
  std::size_t grid_m = 0;
  double wall_ms = 0.0;
  /// Set when the check could not run to completion.
  std::optional<std::string> error;
  /// The error came from a NumericalError (as opposed to a rejected input).
  bool numerical_failure = false;

  void add_residual(std::string name, double value, double tolerance) {
    residuals.push_back({std::move(name), value, tolerance});
  }
  void add_metric(std::string name, double value) { metrics.emplace_back(std::move(name), value); }
  void note_grid(std::size_t m) { grid_m = std::max(grid_m, m); }

  bool passed() const noexcept {
    if (error || residuals.empty()) return false;
    for (const auto& r : residuals)
      if (!r.passed()) return false;
    return true;
  }
  /// Largest tolerance among the residuals (0 if there are none).
  double tolerance() const noexcept {
    double t = 0.0;
    for (const auto& r : residuals) t = std::max(t, r.tolerance);
    return t;
  }
  const Residual* find(const std::string& name) const {
    for (const auto& r : residuals)
      if (r.name == name) return &r;
    return nullptr;
  }
  std::optional<double> metric(const std::string& name) const {
    for (const auto& [k, v] : metrics)
      if (k == name) return v;
    return std::nullopt;
  }
};

}  // namespace modelspace
