#include "cayley/symbol.hpp"

#include "cayley/error.hpp"
#include "cayley/polynomials.hpp"
#include "cayley/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace cayley {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

[[noreturn]] void bad_token(std::string_view token, std::string_view why) {
  throw ValidationError("bad symbol spec token '" + std::string(token) + "': " + std::string(why));
}

double parse_real(std::string_view token, int kappa) {
  token = trim(token);
  if (token == "c") return support_edge(kappa);
  if (token == "-c") return -support_edge(kappa);
  try {
    return to_double(parse_rational(token));
  } catch (const ValidationError&) {
    bad_token(token, "expected a number, p/q, c or -c");
  }
}

// "(a,b)" -> {a, b}
std::pair<double, double> parse_interval(std::string_view token, int kappa) {
  token = trim(token);
  if (token.size() < 2 || token.front() != '(' || token.back() != ')') bad_token(token, "expected (a,b)");
  auto ends = split(token.substr(1, token.size() - 2), ',');
  if (ends.size() != 2) bad_token(token, "expected exactly two endpoints");
  return {parse_real(ends[0], kappa), parse_real(ends[1], kappa)};
}

SymbolFunction step_from_pieces(std::vector<std::pair<std::pair<double, double>, double>> pieces, std::string_view spec) {
  std::sort(pieces.begin(), pieces.end());
  std::vector<double> breaks;
  std::vector<double> values;
  for (const auto& [iv, v] : pieces) {
    const auto [a, b] = iv;
    if (!(a < b)) bad_token(spec, "interval endpoints must be increasing");
    if (breaks.empty()) {
      breaks.push_back(a);
    } else if (a < breaks.back()) {
      bad_token(spec, "pieces overlap");
    } else if (a > breaks.back()) {
      values.push_back(0.0);
      breaks.push_back(a);
    }
    breaks.push_back(b);
    values.push_back(v);
  }
  return SymbolFunction::step(std::move(breaks), std::move(values));
}

}  // namespace

SymbolFunction SymbolFunction::polynomial(std::vector<Rational> coeffs) {
  while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
  return SymbolFunction(PolynomialSymbol{std::move(coeffs)});
}

SymbolFunction SymbolFunction::step(std::vector<double> breakpoints, std::vector<double> values) {
  if (breakpoints.size() < 2 || values.size() + 1 != breakpoints.size()) {
    throw ValidationError("step symbol needs n+1 breakpoints for n values");
  }
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i - 1] < breakpoints[i])) throw ValidationError("step breakpoints must be strictly increasing");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw ValidationError("step values must be finite");
  }
  return SymbolFunction(StepSymbol{std::move(breakpoints), std::move(values)});
}

SymbolFunction SymbolFunction::indicator(double lo, double hi) { return step({lo, hi}, {1.0}); }

SymbolFunction SymbolFunction::constant(const Rational& c) { return polynomial({c}); }

double SymbolFunction::operator()(double t) const {
  if (const auto* p = std::get_if<PolynomialSymbol>(&v_)) {
    double acc = 0.0;
    for (auto it = p->coeffs.rbegin(); it != p->coeffs.rend(); ++it) acc = acc * t + to_double(*it);
    return acc;
  }
  if (const auto* s = std::get_if<StepSymbol>(&v_)) {
    const auto& b = s->breakpoints;
    if (t < b.front() || t > b.back()) return 0.0;
    if (t == b.back()) return s->values.back();
    const auto it = std::upper_bound(b.begin(), b.end(), t);
    return s->values[static_cast<std::size_t>(it - b.begin()) - 1];
  }
  throw ValidationError("grid symbols have no pointwise evaluation");
}

int SymbolFunction::degree() const {
  const auto* p = std::get_if<PolynomialSymbol>(&v_);
  if (!p) throw ValidationError("degree() requires a polynomial symbol");
  return static_cast<int>(p->coeffs.size()) - 1;
}

void SymbolFunction::validate_for(int kappa) const {
  const double c = support_edge(kappa);
  constexpr double kSlack = 1e-12;
  if (const auto* s = std::get_if<StepSymbol>(&v_)) {
    if (s->breakpoints.front() < -c - kSlack || s->breakpoints.back() > c + kSlack) {
      std::ostringstream os;
      os << "step breakpoints must lie in [-" << c << ", " << c << "] for kappa=" << kappa;
      throw ValidationError(os.str());
    }
  }
  if (const auto* g = std::get_if<GridSymbol>(&v_)) {
    if (g->rule.kappa != kappa) throw ValidationError("grid symbol was sampled for a different kappa");
    if (g->values.size() != g->rule.size()) throw ValidationError("grid symbol value count does not match its rule");
  }
}

std::pair<double, double> SymbolFunction::range(int kappa) const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const double c = support_edge(kappa);
  if (const auto* s = std::get_if<StepSymbol>(&v_)) {
    for (double v : s->values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    // Implicit zero outside the breakpoints, if that part of the support has mass.
    if (s->breakpoints.front() > -c || s->breakpoints.back() < c) {
      lo = std::min(lo, 0.0);
      hi = std::max(hi, 0.0);
    }
    return {lo, hi};
  }
  if (const auto* g = std::get_if<GridSymbol>(&v_)) {
    for (double v : g->values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return {lo, hi};
  }
  constexpr int kSamples = 4096;
  for (int i = 0; i <= kSamples; ++i) {
    const double t = -c + 2.0 * c * i / kSamples;
    const double v = (*this)(t);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

std::string SymbolFunction::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (const auto* p = std::get_if<PolynomialSymbol>(&v_)) {
    os << "poly:";
    if (p->coeffs.empty()) os << "0";
    for (std::size_t i = 0; i < p->coeffs.size(); ++i) os << (i ? "," : "") << to_string(p->coeffs[i]);
  } else if (const auto* s = std::get_if<StepSymbol>(&v_)) {
    os << "step:";
    for (std::size_t i = 0; i < s->values.size(); ++i) {
      os << (i ? ";" : "") << "(" << s->breakpoints[i] << "," << s->breakpoints[i + 1] << ")=" << s->values[i];
    }
  } else {
    os << "grid:" << std::get<GridSymbol>(v_).values.size();
  }
  return os.str();
}

SymbolFunction multiply(const SymbolFunction& a, const SymbolFunction& b) {
  if (a.is_polynomial() && b.is_polynomial()) {
    const auto& p = std::get<PolynomialSymbol>(a.variant()).coeffs;
    const auto& q = std::get<PolynomialSymbol>(b.variant()).coeffs;
    if (p.empty() || q.empty()) return SymbolFunction::polynomial({});
    std::vector<Rational> r(p.size() + q.size() - 1, Rational(0));
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    }
    return SymbolFunction::polynomial(std::move(r));
  }
  if (a.is_step() && b.is_step()) {
    const auto& sa = std::get<StepSymbol>(a.variant());
    const auto& sb = std::get<StepSymbol>(b.variant());
    std::vector<double> breaks;
    std::merge(sa.breakpoints.begin(), sa.breakpoints.end(), sb.breakpoints.begin(), sb.breakpoints.end(),
               std::back_inserter(breaks));
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    std::vector<double> values;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      const double mid = 0.5 * (breaks[i] + breaks[i + 1]);
      values.push_back(a(mid) * b(mid));
    }
    return SymbolFunction::step(std::move(breaks), std::move(values));
  }
  throw ValidationError("multiply supports polynomial*polynomial and step*step only");
}

SymbolFunction parse_symbol_spec(std::string_view spec, int kappa) {
  spec = trim(spec);
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) bad_token(spec, "missing kind prefix (poly:, step:, indicator:, const:)");
  const auto kind = trim(spec.substr(0, colon));
  const auto body = trim(spec.substr(colon + 1));
  if (body.empty()) bad_token(spec, "empty body");

  if (kind == "poly") {
    std::vector<Rational> coeffs;
    for (auto tok : split(body, ',')) {
      try {
        coeffs.push_back(parse_rational(tok));
      } catch (const ValidationError&) {
        bad_token(tok, "expected an exact rational coefficient");
      }
    }
    return SymbolFunction::polynomial(std::move(coeffs));
  }
  if (kind == "const") {
    try {
      return SymbolFunction::constant(parse_rational(body));
    } catch (const ValidationError&) {
      bad_token(body, "expected an exact rational constant");
    }
  }
  if (kind == "indicator") {
    const auto [a, b] = parse_interval(body, kappa);
    if (!(a < b)) bad_token(body, "interval endpoints must be increasing");
    auto f = SymbolFunction::indicator(a, b);
    try {
      f.validate_for(kappa);
    } catch (const ValidationError& e) {
      bad_token(body, e.what());
    }
    return f;
  }
  if (kind == "step") {
    if (body.starts_with("a=")) {
      const double a = parse_real(body.substr(2), kappa);
      if (!(a > 0.0 && a <= 1.0)) bad_token(body, "a must lie in (0, 1]");
      const double c = support_edge(kappa);
      return SymbolFunction::indicator(c * std::cos(a * std::numbers::pi), c);
    }
    std::vector<std::pair<std::pair<double, double>, double>> pieces;
    for (auto piece : split(body, ';')) {
      const auto eq = piece.rfind('=');
      if (eq == std::string_view::npos) bad_token(piece, "expected (a,b)=v");
      pieces.push_back({parse_interval(piece.substr(0, eq), kappa), parse_real(piece.substr(eq + 1), kappa)});
    }
    auto f = step_from_pieces(std::move(pieces), spec);
    try {
      f.validate_for(kappa);
    } catch (const ValidationError& e) {
      bad_token(body, e.what());
    }
    return f;
  }
  bad_token(kind, "unknown symbol kind");
}

// ---------------------------------------------------------------------------

RadialSymbol RadialSymbol::exact(int kappa, std::vector<Rational> values) {
  if (kappa < 1) throw ValidationError("kappa must be >= 1");
  while (!values.empty() && values.back() == 0) values.pop_back();
  RadialSymbol s;
  s.kappa_ = kappa;
  s.exact_ = true;
  s.values_ = to_doubles(values);
  s.exact_values_ = std::move(values);
  return s;
}

RadialSymbol RadialSymbol::numeric(int kappa, std::vector<double> values, int quad_nodes, std::optional<double> l2_mass) {
  if (kappa < 1) throw ValidationError("kappa must be >= 1");
  RadialSymbol s;
  s.kappa_ = kappa;
  s.exact_ = false;
  s.values_ = std::move(values);
  s.quad_nodes_ = quad_nodes;
  s.l2_mass_ = l2_mass;
  return s;
}

RadialSymbol RadialSymbol::delta(int kappa, int n) {
  if (n < 0) throw ValidationError("delta index must be >= 0");
  std::vector<Rational> v(static_cast<std::size_t>(n) + 1, Rational(0));
  v.back() = 1;
  return exact(kappa, std::move(v));
}

Rational RadialSymbol::exact_at(std::size_t n) const {
  if (!exact_) throw ValidationError("numeric radial symbol has no exact values");
  return n < exact_values_.size() ? exact_values_[n] : Rational(0);
}

const std::vector<Rational>& RadialSymbol::exact_values() const {
  if (!exact_) throw ValidationError("numeric radial symbol has no exact values");
  return exact_values_;
}

int RadialSymbol::support() const {
  for (auto i = static_cast<int>(values_.size()) - 1; i >= 0; --i) {
    if (exact_ ? exact_values_[static_cast<std::size_t>(i)] != 0 : values_[static_cast<std::size_t>(i)] != 0.0) return i;
  }
  return -1;
}

double RadialSymbol::row_norm_sq() const {
  double sum = 0.0;
  for (std::size_t l = 0; l < values_.size(); ++l) {
    sum += static_cast<double>(sphere_size(kappa_, static_cast<int>(l))) * values_[l] * values_[l];
  }
  return sum;
}

std::optional<double> RadialSymbol::tail_mass() const {
  if (exact_) return 0.0;
  if (!l2_mass_) return std::nullopt;
  return std::max(0.0, *l2_mass_ - row_norm_sq());
}

bool operator==(const RadialSymbol& a, const RadialSymbol& b) {
  if (a.kappa_ != b.kappa_ || a.exact_ != b.exact_) return false;
  return a.exact_ ? a.exact_values_ == b.exact_values_ : a.values_ == b.values_;
}

RadialSymbol parse_alpha_list(std::string_view text, int kappa) {
  std::vector<Rational> values;
  for (auto tok : split(trim(text), ',')) {
    try {
      values.push_back(parse_rational(tok));
    } catch (const ValidationError&) {
      bad_token(tok, "expected an exact rational alpha value");
    }
  }
  return RadialSymbol::exact(kappa, std::move(values));
}

nlohmann::json to_json(const RadialSymbol& alpha) {
  nlohmann::json values = nlohmann::json::array();
  nlohmann::json j = {{"kappa", alpha.kappa()}, {"exact", alpha.is_exact()}};
  if (alpha.is_exact()) {
    for (const auto& r : alpha.exact_values()) values.push_back(to_string(r));
  } else {
    for (double v : alpha.values()) values.push_back(v);
    j["quad_nodes"] = alpha.quad_nodes();
    if (alpha.l2_mass()) j["l2_mass"] = *alpha.l2_mass();
  }
  j["values"] = std::move(values);
  return j;
}

RadialSymbol radial_symbol_from_json(const nlohmann::json& j) {
  try {
    const int kappa = j.at("kappa").get<int>();
    const bool exact = j.at("exact").get<bool>();
    const auto& values = j.at("values");
    if (!values.is_array()) throw ValidationError("radial symbol 'values' must be an array");
    if (exact) {
      std::vector<Rational> v;
      for (const auto& x : values) {
        if (x.is_string()) v.push_back(parse_rational(x.get<std::string>()));
        else if (x.is_number_integer()) v.push_back(Rational(x.get<long long>()));
        else throw ValidationError("exact radial symbol values must be strings or integers");
      }
      return RadialSymbol::exact(kappa, std::move(v));
    }
    std::vector<double> v;
    for (const auto& x : values) v.push_back(x.get<double>());
    std::optional<double> mass;
    if (j.contains("l2_mass")) mass = j["l2_mass"].get<double>();
    return RadialSymbol::numeric(kappa, std::move(v), j.value("quad_nodes", 0), mass);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed radial symbol JSON: ") + e.what());
  }
}

}  // namespace cayley
