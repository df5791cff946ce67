#include "modelspace/symbol.hpp"

#include "modelspace/model_space.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace modelspace {

namespace {

ClosedFormSymbol to_closed(const SymbolSpec& s) {
  ClosedFormSymbol out;
  if (const auto* l = std::get_if<LaurentSymbol>(&s)) {
    for (const auto& [k, c] : l->coefficients) out.terms.push_back({ClosedTerm::Kind::monomial, c, k, {}, false});
  } else if (const auto* n = std::get_if<NodeValuesSymbol>(&s)) {
    for (std::size_t i = 0; i < n->values.size(); ++i)
      out.terms.push_back({ClosedTerm::Kind::lagrange, n->values[i], static_cast<long>(i), {}, false});
  } else if (const auto* c = std::get_if<ClosedFormSymbol>(&s)) {
    out = *c;
  } else {
    throw std::invalid_argument("symbol: sampled symbols cannot be combined with closed forms");
  }
  return out;
}

Complex power(Complex z, long k) {
  Complex r = 1.0;
  for (long i = 0; i < k; ++i) r *= z;
  return r;
}

}  // namespace

namespace symbols {

SymbolSpec constant(Complex c) { return LaurentSymbol{{{0, c}}}; }
SymbolSpec monomial(long power, Complex coeff) { return LaurentSymbol{{{power, coeff}}}; }

SymbolSpec szego_kernel(Complex w, Complex coeff) {
  return ClosedFormSymbol{{{ClosedTerm::Kind::szego_kernel, coeff, 0, w, false}}};
}

SymbolSpec model_kernel(Complex w, Complex coeff) {
  return ClosedFormSymbol{{{ClosedTerm::Kind::model_kernel, coeff, 0, w, false}}};
}

SymbolSpec basis_element(std::size_t n, Complex coeff) {
  return ClosedFormSymbol{{{ClosedTerm::Kind::basis_element, coeff, static_cast<long>(n), {}, false}}};
}

SymbolSpec basis_combination(std::span<const Complex> coords) {
  ClosedFormSymbol out;
  for (std::size_t n = 0; n < coords.size(); ++n)
    out.terms.push_back({ClosedTerm::Kind::basis_element, coords[n], static_cast<long>(n), {}, false});
  return out;
}

SymbolSpec lagrange(std::size_t n, Complex coeff) {
  return ClosedFormSymbol{{{ClosedTerm::Kind::lagrange, coeff, static_cast<long>(n), {}, false}}};
}

SymbolSpec node_values(std::vector<Complex> values) { return NodeValuesSymbol{std::move(values)}; }
SymbolSpec sampled(BoundaryFunction samples) { return SampledSymbol{std::move(samples)}; }

SymbolSpec conjugate(const SymbolSpec& s) {
  if (const auto* l = std::get_if<LaurentSymbol>(&s)) {
    LaurentSymbol out;
    for (const auto& [k, c] : l->coefficients) out.coefficients[-k] += std::conj(c);
    return out;
  }
  if (const auto* f = std::get_if<SampledSymbol>(&s)) return SampledSymbol{f->samples.conj()};
  auto out = to_closed(s);
  for (auto& t : out.terms) {
    t.coeff = std::conj(t.coeff);
    t.conjugated = !t.conjugated;
  }
  return out;
}

SymbolSpec scale(Complex c, const SymbolSpec& s) {
  if (const auto* l = std::get_if<LaurentSymbol>(&s)) {
    LaurentSymbol out = *l;
    for (auto& [k, v] : out.coefficients) v *= c;
    return out;
  }
  if (const auto* n = std::get_if<NodeValuesSymbol>(&s)) {
    NodeValuesSymbol out = *n;
    for (auto& v : out.values) v *= c;
    return out;
  }
  if (const auto* f = std::get_if<SampledSymbol>(&s)) return SampledSymbol{c * f->samples};
  auto out = std::get<ClosedFormSymbol>(s);
  for (auto& t : out.terms) t.coeff *= c;
  return out;
}

SymbolSpec add(const SymbolSpec& a, const SymbolSpec& b) {
  const auto* la = std::get_if<LaurentSymbol>(&a);
  const auto* lb = std::get_if<LaurentSymbol>(&b);
  if (la && lb) {
    LaurentSymbol out = *la;
    for (const auto& [k, c] : lb->coefficients) out.coefficients[k] += c;
    return out;
  }
  const auto* sa = std::get_if<SampledSymbol>(&a);
  const auto* sb = std::get_if<SampledSymbol>(&b);
  if (sa && sb) return SampledSymbol{sa->samples + sb->samples};
  auto out = to_closed(a);
  const auto rest = to_closed(b);
  out.terms.insert(out.terms.end(), rest.terms.begin(), rest.terms.end());
  return out;
}

}  // namespace symbols

bool is_analytic(const SymbolSpec& s) {
  if (const auto* l = std::get_if<LaurentSymbol>(&s)) {
    for (const auto& [k, c] : l->coefficients)
      if (k < 0 && c != Complex{}) return false;
    return true;
  }
  if (std::holds_alternative<NodeValuesSymbol>(s)) return true;
  if (const auto* c = std::get_if<ClosedFormSymbol>(&s)) {
    for (const auto& t : c->terms) {
      if (t.coeff == Complex{}) continue;
      if (t.conjugated) return false;
      if (t.kind == ClosedTerm::Kind::monomial && t.index < 0) return false;
    }
    return true;
  }
  const auto& f = std::get<SampledSymbol>(s).samples;
  const long half = static_cast<long>(f.grid_size() / 2);
  for (long n = 1; n < half; ++n)
    if (std::abs(f.fourier(-n)) > 1e-12) return false;
  return true;
}

std::string describe(const SymbolSpec& s) {
  std::ostringstream out;
  if (const auto* l = std::get_if<LaurentSymbol>(&s)) {
    out << "laurent{";
    bool first = true;
    for (const auto& [k, c] : l->coefficients) {
      out << (first ? "" : ", ") << k << ": (" << c.real() << ", " << c.imag() << ")";
      first = false;
    }
    out << "}";
  } else if (const auto* n = std::get_if<NodeValuesSymbol>(&s)) {
    out << "nodeValues[" << n->values.size() << "]";
  } else if (const auto* c = std::get_if<ClosedFormSymbol>(&s)) {
    out << "closedForm[" << c->terms.size() << " terms]";
  } else {
    out << "sampled[M=" << std::get<SampledSymbol>(s).samples.grid_size() << "]";
  }
  return out.str();
}

SymbolEvaluator::SymbolEvaluator(const SymbolSpec& symbol, const BlaschkeSpec& spec) : spec_(&spec) {
  if (const auto* f = std::get_if<SampledSymbol>(&symbol)) {
    samples_ = f->samples;
    return;
  }
  if (const auto* n = std::get_if<NodeValuesSymbol>(&symbol))
    if (n->values.size() != spec.size())
      throw std::invalid_argument("symbol: node-value count does not match the number of zeros");
  for (const auto& t : to_closed(symbol).terms) collect(t);
}

void SymbolEvaluator::collect(const ClosedTerm& t) {
  const std::size_t n = spec_->size();
  auto checked_index = [&](const char* what) {
    if (t.index < 0 || static_cast<std::size_t>(t.index) >= n) {
      std::ostringstream msg;
      msg << "symbol: " << what << " index " << t.index << " outside 0.." << n - 1;
      throw std::invalid_argument(msg.str());
    }
    return static_cast<std::size_t>(t.index);
  };
  switch (t.kind) {
    case ClosedTerm::Kind::monomial:
      if (t.conjugated)
        laurent_[-t.index] += t.coeff;
      else
        laurent_[t.index] += t.coeff;
      break;
    case ClosedTerm::Kind::szego_kernel:
    case ClosedTerm::Kind::model_kernel: {
      if (!(std::abs(t.point) < 1.0)) throw std::invalid_argument("symbol: kernel anchor must lie in the open disk");
      const bool model = t.kind == ClosedTerm::Kind::model_kernel;
      kernels_.push_back({t.coeff, t.point, model ? spec_->eval(t.point) : Complex{}, model, t.conjugated});
      break;
    }
    case ClosedTerm::Kind::basis_element: {
      const auto i = checked_index("basis");
      if (!has_basis_) {
        basis_.assign(n, 0.0);
        basis_conj_.assign(n, 0.0);
        has_basis_ = true;
      }
      (t.conjugated ? basis_conj_ : basis_)[i] += t.coeff;
      break;
    }
    case ClosedTerm::Kind::lagrange: {
      const auto i = checked_index("node");
      if (!spec_->simple_zeros()) throw std::invalid_argument("symbol: node interpolants need simple zeros");
      if (!has_lagrange_) {
        lagrange_.assign(n, 0.0);
        lagrange_conj_.assign(n, 0.0);
        node_scale_.resize(n);
        for (std::size_t k = 0; k < n; ++k) node_scale_[k] = 1.0 / spec_->eval(spec_->zero(k), k);
        has_lagrange_ = true;
      }
      (t.conjugated ? lagrange_conj_ : lagrange_)[i] += t.coeff;
      break;
    }
  }
}

std::optional<std::size_t> SymbolEvaluator::fixed_grid() const {
  if (samples_) return samples_->grid_size();
  return std::nullopt;
}

Complex SymbolEvaluator::at(const CirclePoint& p) const {
  if (samples_) {
    const std::size_t m = samples_->grid_size();
    const double pos = p.theta * static_cast<double>(m) / (2.0 * std::numbers::pi);
    const double k = std::round(pos);
    if (std::abs(pos - k) > 1e-6) throw std::invalid_argument("symbol: sampled symbol evaluated off its grid");
    return (*samples_)[static_cast<std::size_t>(static_cast<long long>(k)) % m];
  }
  Complex total = 0.0;
  for (const auto& [k, c] : laurent_) total += c * std::polar(1.0, static_cast<double>(k) * p.theta);
  for (const auto& k : kernels_) {
    Complex v = 1.0 / (1.0 - std::conj(k.point) * p.z);
    if (k.model) v *= 1.0 - std::conj(k.u_at_point) * spec_->eval(p);
    total += k.conjugated ? k.coeff * std::conj(v) : k.coeff * v;
  }
  const std::size_t n = spec_->size();
  if (has_basis_) {
    scratch_.resize(n);
    takenaka_values(*spec_, p, scratch_);
    for (std::size_t i = 0; i < n; ++i) total += basis_[i] * scratch_[i] + basis_conj_[i] * std::conj(scratch_[i]);
  }
  if (has_lagrange_) {
    scratch_.resize(2 * n);
    // scratch_[i] = prod_{k < i} b_k, then multiplied by the suffix product.
    Complex prefix = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      scratch_[n + i] = spec_->factor(i, p);
      scratch_[i] = prefix;
      prefix *= scratch_[n + i];
    }
    Complex suffix = 1.0;
    for (std::size_t i = n; i-- > 0;) {
      const Complex alpha = scratch_[i] * suffix * node_scale_[i];
      total += lagrange_[i] * alpha + lagrange_conj_[i] * std::conj(alpha);
      suffix *= scratch_[n + i];
    }
  }
  return total;
}

Complex SymbolEvaluator::at(Complex z) const {
  if (!(std::abs(z) < 1.0)) throw std::domain_error("symbol: interior evaluation needs |z| < 1");
  if (samples_) {
    const auto analytic = cauchy_project(*samples_);
    const auto rest = antianalytic_project(*samples_, false).conj();
    return eval_in_disk(analytic, z, 0) + std::conj(eval_in_disk(rest, z, 0));
  }
  Complex total = 0.0;
  for (const auto& [k, c] : laurent_) total += c * (k >= 0 ? power(z, k) : power(std::conj(z), -k));
  for (const auto& k : kernels_) {
    Complex v = 1.0 / (1.0 - std::conj(k.point) * z);
    if (k.model) v *= 1.0 - std::conj(k.u_at_point) * spec_->eval(z);
    total += k.conjugated ? k.coeff * std::conj(v) : k.coeff * v;
  }
  const std::size_t n = spec_->size();
  if (has_basis_) {
    std::vector<Complex> e(n);
    takenaka_values(*spec_, z, e);
    for (std::size_t i = 0; i < n; ++i) total += basis_[i] * e[i] + basis_conj_[i] * std::conj(e[i]);
  }
  if (has_lagrange_) {
    for (std::size_t i = 0; i < n; ++i) {
      const Complex alpha = spec_->eval(z, i) * node_scale_[i];
      total += lagrange_[i] * alpha + lagrange_conj_[i] * std::conj(alpha);
    }
  }
  return total;
}

}  // namespace modelspace
