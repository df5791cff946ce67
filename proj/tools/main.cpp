#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "modelspace/config.hpp"
#include "modelspace/model_space.hpp"
#include "modelspace/symbol_norms.hpp"
#include "modelspace/verify.hpp"

namespace fs = std::filesystem;
using namespace modelspace;

namespace {

enum Exit : int { kPass = 0, kFailed = 1, kConfig = 2, kNumerical = 3 };

RunConfig load(const std::string& path) { return path.empty() ? RunConfig{} : load_config(path); }

std::vector<std::string> split_names(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& item : raw) {
    std::stringstream ss(item);
    std::string name;
    while (std::getline(ss, name, ','))
      if (!name.empty()) out.push_back(name);
  }
  return out;
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

int suite_exit(const std::vector<VerificationReport>& reports) {
  bool failed = false;
  for (const auto& r : reports) {
    if (r.numerical_failure) return kNumerical;
    failed = failed || !r.passed();
  }
  return failed ? kFailed : kPass;
}

int run_checks(const std::vector<std::string>& selection, const RunConfig& cfg, const std::string& out_dir,
               bool json_lines) {
  const auto reports = run_suite(selection, cfg, default_workers());
  if (!out_dir.empty()) {
    for (const auto& r : reports) write_file(fs::path(out_dir) / (r.check + ".json"), report_json(r) + "\n");
  }
  for (const auto& r : reports) {
    if (json_lines) std::cout << report_json(r) << '\n';
    std::fprintf(stderr, "%-18s %s  grid_M=%-8zu %9.1f ms%s%s\n", r.check.c_str(), r.passed() ? "pass" : "FAIL",
                 r.grid_m, r.wall_ms, r.error ? "  " : "", r.error ? r.error->c_str() : "");
  }
  std::cout.flush();
  return suite_exit(reports);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for truncated Toeplitz and Hankel operators on model spaces"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::vector<std::string> suite;
  bool json_lines = false;
  auto* verify = app.add_subcommand("verify", "Run named checks and write one JSON report per check");
  verify->add_option("--suite", suite, "Check names (comma separated or repeated), or 'all'");
  verify->add_option("--config", config_path, "Run configuration (JSON)");
  verify->add_option("--out", out_dir, "Directory for the JSON reports (default: outputDir of the config)");
  verify->add_flag("--json", json_lines, "Also stream the reports to standard output as JSON lines");

  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Schatten norm against node l^p norm across N and p, as CSV");
  sweep->add_option("--config", config_path, "Run configuration (JSON)");
  sweep->add_option("--out", sweep_out, "CSV file (default: standard output)");

  auto* hs = app.add_subcommand("hs-check", "Hilbert-Schmidt identity and T-transform checks");
  hs->add_option("--config", config_path, "Run configuration (JSON)");
  hs->add_option("--out", out_dir, "Directory for the JSON reports");

  double p = 2.0;
  std::size_t order = 2, rings = 256, doublings = 3;
  bool conjugated = false;
  auto* besov = app.add_subcommand("besov", "Besov norm estimates of the configured symbols");
  besov->add_option("--config", config_path, "Run configuration (JSON)");
  besov->add_option("-p", p, "Exponent p")->check(CLI::PositiveNumber);
  besov->add_option("-n", order, "Derivative order n (n p > 1)")->check(CLI::PositiveNumber);
  besov->add_option("--rings", rings, "Radial rings of the first pass")->check(CLI::PositiveNumber);
  besov->add_option("--doublings", doublings, "Ring doublings after the first pass");
  besov->add_flag("--conjugated", conjugated, "Estimate the norm of C phi instead of phi");

  auto* list = app.add_subcommand("list-checks", "Print the registered checks with their statements");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfig;
  }

  try {
    if (*list) {
      for (const auto& c : check_registry()) std::cout << c.name << '\t' << c.anchor << '\n';
      return kPass;
    }
    RunConfig cfg = load(config_path);
    if (*verify) {
      const auto selection = suite.empty() ? cfg.checks : split_names(suite);
      (void)resolve_selection(selection);
      return run_checks(selection, cfg, out_dir.empty() ? cfg.output_dir : out_dir, json_lines);
    }
    if (*hs) return run_checks({"theorem8", "theorem9"}, cfg, out_dir, true);
    if (*sweep) {
      const ZeroSource family = cfg.zeros ? *cfg.zeros : ZeroSource{zeros::RadialExponential{0.5}, 16};
      const auto phi = cfg.symbols.empty() ? symbols::monomial(1) : cfg.symbols.front();
      const auto result = comparability_sweep(family, phi, cfg.p_values, cfg.ns, cfg.quadrature);
      const auto csv = sweep_csv(result);
      if (sweep_out.empty()) {
        std::cout << csv;
      } else {
        write_file(sweep_out, csv);
      }
      if (result.non_interpolating) std::cerr << "warning: " << result.warning << '\n';
      const auto rep = sweep_report(result);
      for (const auto& r : rep.residuals)
        std::fprintf(stderr, "%-14s %.6g (limit %g) %s\n", r.name.c_str(), r.value, r.tolerance,
                     r.passed() ? "ok" : "exceeded");
      return kPass;
    }
    if (*besov) {
      const auto spec = cfg.zeros ? cfg.zeros->spec() : generate_zeros(zeros::RadialExponential{0.5}, 8);
      const auto basis = build_basis(spec, cfg.quadrature);
      const std::size_t m = std::max<std::size_t>(256, 2 * basis.grid_size());
      std::vector<SymbolSpec> targets = cfg.symbols;
      if (targets.empty()) targets.push_back(symbols::model_kernel(0.5));
      for (const auto& s : targets) {
        SymbolEvaluator ev(s, spec);
        auto f = BoundaryFunction::sample(m, [&](const CirclePoint& pt) { return ev.at(pt); });
        if (conjugated) f = conjugation_C(f, spec);
        BesovEstimate est;
        try {
          est = besov_norm(f, p, BesovOptions{order, rings, doublings});
        } catch (const std::invalid_argument& e) {
          if (!conjugated) throw;
          throw std::invalid_argument(std::string(e.what()) + " (--conjugated needs a symbol in K_u)");
        }
        nlohmann::ordered_json j;
        j["symbol"] = describe(s);
        j["p"] = est.p;
        j["n"] = est.n;
        j["value"] = est.value;
        j["rings"] = est.rings;
        j["angular_points"] = est.angular_points;
        j["history"] = est.history;
        j["flagged"] = est.flagged;
        std::cout << j.dump() << '\n';
      }
      return kPass;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const UnknownCheck& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kPass;
}
