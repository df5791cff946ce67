#pragma once

// Run configuration: a strict JSON document validated before any computation.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "modelspace/blaschke.hpp"
#include "modelspace/boundary.hpp"
#include "modelspace/symbol.hpp"

namespace modelspace {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Zeros given either by a generator with a count or as an explicit list.
struct ZeroSource {
  std::variant<ZeroGenerator, std::vector<Complex>> source;
  std::size_t count = 0;

  /// The configured zeros, or the first `n` from the generator when given.
  BlaschkeSpec spec(std::optional<std::size_t> n = std::nullopt) const;
  bool explicit_list() const noexcept { return std::holds_alternative<std::vector<Complex>>(source); }
};

struct RunConfig {
  std::optional<ZeroSource> zeros;
  std::vector<std::size_t> ns{2, 4, 8, 16};
  std::vector<SymbolSpec> symbols;
  QuadratureControl quadrature{256, std::size_t{1} << 22, 1e-10};
  std::vector<double> p_values{1.0, 2.0, kInfinity};
  std::vector<std::string> checks{"all"};
  std::uint64_t seed = 1;
  std::string output_dir = "reports";
};

/// Parses and validates a configuration document.  Rejects malformed JSON,
/// duplicate and unknown keys, zeros outside the open disk, unknown checks
/// and out-of-range parameters with a ConfigError naming the line or field.
RunConfig parse_config(std::string_view text);

/// Reads and parses a file; I/O failures are reported as ConfigError.
RunConfig load_config(const std::string& path);

}  // namespace modelspace
