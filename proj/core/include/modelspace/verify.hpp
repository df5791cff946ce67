#pragma once

// Named, reproducible checks of the operator identities, and parameter sweeps
// for the norm comparability experiments.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "modelspace/config.hpp"
#include "modelspace/model_space.hpp"
#include "modelspace/report.hpp"
#include "modelspace/symbol.hpp"

namespace modelspace {

class UnknownCheck : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CheckInfo {
  std::string name;
  std::string anchor;
  std::function<VerificationReport(const RunConfig&, std::uint64_t seed)> run;
};

/// All registered checks, in a fixed order.
const std::vector<CheckInfo>& check_registry();
const CheckInfo* find_check(std::string_view name);

/// Expands "all" and removes duplicates, keeping registry order.  Throws
/// UnknownCheck for names not in the registry.
std::vector<std::string> resolve_selection(std::span<const std::string> selection);

/// Seed of one check: the config seed mixed with a hash of the check name, so
/// outcomes do not depend on which other checks run or in what order.
std::uint64_t check_seed(std::uint64_t seed, std::string_view name);

/// Worker count from MODELSPACE_LAB_WORKERS, else the hardware concurrency.
std::size_t default_workers();

/// Runs the selected checks on up to `workers` threads.  Reports come back in
/// registry order; a check that throws yields a failed report carrying the
/// error message.  Throws UnknownCheck before running anything.
std::vector<VerificationReport> run_suite(std::span<const std::string> selection, const RunConfig& config,
                                          std::size_t workers = 1);

struct SweepRow {
  std::size_t n = 0;
  double p = 2.0;
  double schatten_norm = 0.0;
  double node_lp_norm = 0.0;
  double ratio = 0.0;
  double min_delta = 0.0;
  std::size_t grid_m = 0;
};

struct SweepResult {
  std::string axis;
  std::vector<SweepRow> rows;  // sorted by (N, p)
  /// Set when the separation constants of the family appear to collapse.
  bool non_interpolating = false;
  std::string warning;
};

inline constexpr double kRatioBand = 50.0;
inline constexpr double kRatioSpread = 10.0;

/// ||A_phi||_{S_p} against (sum |phi(z_i)|^p)^{1/p} for each N and p.
SweepResult comparability_sweep(const ZeroSource& family, const SymbolSpec& phi, std::span<const double> p_values,
                                std::span<const std::size_t> ns, const QuadratureControl& control);

/// ratio_band: max over rows of max(ratio, 1/ratio), against kRatioBand.
/// ratio_spread: max over p of max/min ratio across N, against kRatioSpread.
/// operator_bound (only with p = inf rows): max(0, max|phi(z_i)| - ||A_phi||).
VerificationReport sweep_report(const SweepResult& sweep);

/// Header N,p,schatten_norm,node_lp_norm,ratio,min_delta,grid_M; p = inf as "inf".
std::string sweep_csv(const SweepResult& sweep);

struct CancellationResult {
  double magnitude = 0.0;
  double p = 2.0;
  double norm_sum = 0.0;   // ||A_{phi + conj(psi)}||_{S_p}
  double norm_phi = 0.0;   // ||A_phi||_{S_p}
  double norm_psi = 0.0;   // ||A_conj(psi)||_{S_p}
  double norm_base = 0.0;  // ||A_z||_{S_p}
  /// min(norm_phi, norm_psi) / norm_sum.
  double gap = 0.0;
};

/// phi and psi given by node values z_n + m and -m (m = magnitude), so that
/// phi + conj(psi) = z on the nodes while each part is of size m.
CancellationResult remark5_experiment(const ModelBasis& basis, double p, double magnitude);

/// One line of JSON: check, anchor, residuals, tolerance, passed, grid_M,
/// wall_ms, then tolerances, metrics and error when present.
std::string report_json(const VerificationReport& report, bool include_wall_time = true);

}  // namespace modelspace
