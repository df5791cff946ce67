#include "modelspace/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "modelspace/verify.hpp"

namespace modelspace {

using json = nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError(field + ": " + what);
}

void allow_keys(const json& obj, const std::string& field, std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* x) { return k == x; }))
      fail(field, "unknown key \"" + k + "\"");
  }
}

const json& require(const json& obj, const std::string& field, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(field, std::string("missing key \"") + key + "\"");
  return *it;
}

double as_real(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "expected a number");
  return v.get<double>();
}

std::size_t as_count(const json& v, const std::string& field) {
  if (!v.is_number_integer() || v.get<long long>() < 0) fail(field, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

std::uint64_t as_u64(const json& v, const std::string& field) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
  fail(field, "expected a nonnegative integer");
}

Complex as_complex(const json& v, const std::string& field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  fail(field, "expected a number or [re, im]");
}

Complex optional_coeff(const json& obj, const std::string& field) {
  auto it = obj.find("coeff");
  return it == obj.end() ? Complex(1.0) : as_complex(*it, field + ".coeff");
}

ZeroSource parse_zeros(const json& v) {
  const std::string field = "zeros";
  if (v.is_array()) {
    std::vector<Complex> list;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string f = field + "[" + std::to_string(i) + "]";
      if (!v[i].is_array()) fail(f, "expected [re, im]");
      const Complex z = as_complex(v[i], f);
      if (!(std::abs(z) < 1.0)) {
        std::ostringstream msg;
        msg << "modulus " << std::abs(z) << " is outside the open unit disk";
        fail(f, msg.str());
      }
      list.push_back(z);
    }
    if (list.empty()) fail(field, "at least one zero is required");
    ZeroSource src{list, list.size()};
    return src;
  }
  if (!v.is_object()) fail(field, "expected a list of [re, im] pairs or a generator object");
  const auto kind = require(v, field, "generator");
  if (!kind.is_string()) fail(field + ".generator", "expected a string");
  const auto name = kind.get<std::string>();
  const std::size_t count = as_count(require(v, field, "N"), field + ".N");
  ZeroSource src;
  src.count = count;
  if (name == "radialExponential") {
    allow_keys(v, field, {"generator", "N", "c"});
    src.source = zeros::RadialExponential{as_real(require(v, field, "c"), field + ".c")};
  } else if (name == "thin") {
    allow_keys(v, field, {"generator", "N", "base"});
    src.source = zeros::Thin{as_real(require(v, field, "base"), field + ".base")};
  } else if (name == "spokes") {
    allow_keys(v, field, {"generator", "N", "rays", "radii"});
    zeros::Spokes s{as_count(require(v, field, "rays"), field + ".rays"), {}};
    const auto& radii = require(v, field, "radii");
    if (!radii.is_array()) fail(field + ".radii", "expected a list of numbers");
    for (std::size_t i = 0; i < radii.size(); ++i)
      s.radii.push_back(as_real(radii[i], field + ".radii[" + std::to_string(i) + "]"));
    src.source = s;
  } else if (name == "randomDisk") {
    allow_keys(v, field, {"generator", "N", "seed", "maxRadius"});
    src.source = zeros::RandomDisk{as_u64(require(v, field, "seed"), field + ".seed"),
                                   as_real(require(v, field, "maxRadius"), field + ".maxRadius")};
  } else {
    fail(field + ".generator", "unknown generator \"" + name + "\"");
  }
  try {
    (void)src.spec();
  } catch (const std::invalid_argument& e) {
    fail(field, e.what());
  }
  return src;
}

SymbolSpec parse_symbol(const json& v, const std::string& field) {
  if (!v.is_object()) fail(field, "expected a symbol object");
  const auto& kind_v = require(v, field, "kind");
  if (!kind_v.is_string()) fail(field + ".kind", "expected a string");
  const auto kind = kind_v.get<std::string>();
  const auto index = [&] {
    const auto& x = require(v, field, "index");
    return as_count(x, field + ".index");
  };
  if (kind == "constant") {
    allow_keys(v, field, {"kind", "value"});
    return symbols::constant(as_complex(require(v, field, "value"), field + ".value"));
  }
  if (kind == "monomial") {
    allow_keys(v, field, {"kind", "power", "coeff"});
    const auto& pw = require(v, field, "power");
    if (!pw.is_number_integer()) fail(field + ".power", "expected an integer");
    return symbols::monomial(pw.get<long>(), optional_coeff(v, field));
  }
  if (kind == "szego" || kind == "modelKernel") {
    allow_keys(v, field, {"kind", "point", "coeff"});
    const Complex w = as_complex(require(v, field, "point"), field + ".point");
    if (!(std::abs(w) < 1.0)) fail(field + ".point", "must lie in the open unit disk");
    return kind == "szego" ? symbols::szego_kernel(w, optional_coeff(v, field))
                           : symbols::model_kernel(w, optional_coeff(v, field));
  }
  if (kind == "basis") {
    allow_keys(v, field, {"kind", "index", "coeff"});
    return symbols::basis_element(index(), optional_coeff(v, field));
  }
  if (kind == "lagrange") {
    allow_keys(v, field, {"kind", "index", "coeff"});
    return symbols::lagrange(index(), optional_coeff(v, field));
  }
  if (kind == "nodeValues") {
    allow_keys(v, field, {"kind", "values"});
    const auto& vals = require(v, field, "values");
    if (!vals.is_array()) fail(field + ".values", "expected a list");
    std::vector<Complex> out;
    for (std::size_t i = 0; i < vals.size(); ++i)
      out.push_back(as_complex(vals[i], field + ".values[" + std::to_string(i) + "]"));
    return symbols::node_values(std::move(out));
  }
  if (kind == "conjugate") {
    allow_keys(v, field, {"kind", "of"});
    return symbols::conjugate(parse_symbol(require(v, field, "of"), field + ".of"));
  }
  if (kind == "sum") {
    allow_keys(v, field, {"kind", "terms"});
    const auto& terms = require(v, field, "terms");
    if (!terms.is_array() || terms.empty()) fail(field + ".terms", "expected a nonempty list");
    SymbolSpec acc = parse_symbol(terms[0], field + ".terms[0]");
    for (std::size_t i = 1; i < terms.size(); ++i)
      acc = symbols::add(acc, parse_symbol(terms[i], field + ".terms[" + std::to_string(i) + "]"));
    return acc;
  }
  fail(field + ".kind", "unknown symbol kind \"" + kind + "\"");
}

json parse_strict(std::string_view text) {
  // Tracks the keys seen in each open object to reject duplicates.
  std::vector<std::set<std::string>> open;
  auto callback = [&](int, json::parse_event_t event, json& parsed) {
    switch (event) {
      case json::parse_event_t::object_start:
        open.emplace_back();
        break;
      case json::parse_event_t::object_end:
        open.pop_back();
        break;
      case json::parse_event_t::key: {
        const auto key = parsed.get<std::string>();
        if (!open.back().insert(key).second) throw ConfigError("duplicate key \"" + key + "\"");
        break;
      }
      default:
        break;
    }
    return true;
  };
  try {
    return json::parse(text.begin(), text.end(), callback, true, false);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(column) +
                      ": malformed JSON (" + e.what() + ")");
  }
}

}  // namespace

BlaschkeSpec ZeroSource::spec(std::optional<std::size_t> n) const {
  if (const auto* list = std::get_if<std::vector<Complex>>(&source)) return BlaschkeSpec(*list);
  return generate_zeros(std::get<ZeroGenerator>(source), n.value_or(count));
}

RunConfig parse_config(std::string_view text) {
  const json doc = parse_strict(text);
  if (!doc.is_object()) fail("$", "expected a JSON object at the top level");
  allow_keys(doc, "$", {"zeros", "Ns", "symbols", "quadrature", "pValues", "checks", "seed", "outputDir"});
  RunConfig cfg;
  if (auto it = doc.find("zeros"); it != doc.end()) cfg.zeros = parse_zeros(*it);
  if (auto it = doc.find("Ns"); it != doc.end()) {
    if (!it->is_array() || it->empty()) fail("Ns", "expected a nonempty list of positive integers");
    cfg.ns.clear();
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto n = as_count((*it)[i], "Ns[" + std::to_string(i) + "]");
      if (n == 0) fail("Ns[" + std::to_string(i) + "]", "must be positive");
      cfg.ns.push_back(n);
    }
  }
  if (auto it = doc.find("symbols"); it != doc.end()) {
    if (!it->is_array()) fail("symbols", "expected a list");
    for (std::size_t i = 0; i < it->size(); ++i)
      cfg.symbols.push_back(parse_symbol((*it)[i], "symbols[" + std::to_string(i) + "]"));
  }
  if (auto it = doc.find("quadrature"); it != doc.end()) {
    if (!it->is_object()) fail("quadrature", "expected an object");
    allow_keys(*it, "quadrature", {"initialM", "maxM", "relTol"});
    if (auto q = it->find("initialM"); q != it->end()) cfg.quadrature.initial_m = as_count(*q, "quadrature.initialM");
    if (auto q = it->find("maxM"); q != it->end()) cfg.quadrature.max_m = as_count(*q, "quadrature.maxM");
    if (auto q = it->find("relTol"); q != it->end()) cfg.quadrature.rel_tol = as_real(*q, "quadrature.relTol");
    try {
      cfg.quadrature.validate();
    } catch (const std::exception& e) {
      fail("quadrature", e.what());
    }
  }
  if (auto it = doc.find("pValues"); it != doc.end()) {
    if (!it->is_array() || it->empty()) fail("pValues", "expected a nonempty list");
    cfg.p_values.clear();
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto& v = (*it)[i];
      const std::string f = "pValues[" + std::to_string(i) + "]";
      if (v.is_string() && v.get<std::string>() == "inf") {
        cfg.p_values.push_back(kInfinity);
      } else {
        const double p = as_real(v, f);
        if (!(p > 0.0)) fail(f, "p must be positive");
        cfg.p_values.push_back(p);
      }
    }
  }
  if (auto it = doc.find("checks"); it != doc.end()) {
    if (!it->is_array()) fail("checks", "expected a list of check names");
    cfg.checks.clear();
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string f = "checks[" + std::to_string(i) + "]";
      if (!(*it)[i].is_string()) fail(f, "expected a string");
      const auto name = (*it)[i].get<std::string>();
      if (name != "all" && !find_check(name)) fail(f, "unknown check \"" + name + "\"");
      cfg.checks.push_back(name);
    }
  }
  if (auto it = doc.find("seed"); it != doc.end()) cfg.seed = as_u64(*it, "seed");
  if (auto it = doc.find("outputDir"); it != doc.end()) {
    if (!it->is_string()) fail("outputDir", "expected a string");
    cfg.output_dir = it->get<std::string>();
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open configuration file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace modelspace
