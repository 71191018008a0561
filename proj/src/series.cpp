#include "involute/series.hpp"

#include <algorithm>

namespace involute {

std::string_view mode_name(Mode mode) noexcept { return mode == Mode::exact ? "exact" : "float"; }

Mode parse_mode(std::string_view text) {
  if (text == "exact") return Mode::exact;
  if (text == "float") return Mode::floating;
  throw Error(Errc::parse_error, "unknown mode '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// Coefficient

Coefficient Coefficient::zero(Mode mode) {
  return mode == Mode::exact ? Coefficient(ExactComplex{}) : Coefficient(std::complex<double>{});
}

Coefficient Coefficient::from_rational(const Rational& q, Mode mode) {
  if (mode == Mode::exact) return Coefficient(ExactComplex(q, Rational(0)));
  return Coefficient(std::complex<double>(q.get_d(), 0.0));
}

bool Coefficient::is_zero() const {
  if (auto* e = std::get_if<ExactComplex>(&value_)) return e->is_zero();
  return std::get<std::complex<double>>(value_) == std::complex<double>{};
}

const ExactComplex& Coefficient::exact() const {
  if (auto* e = std::get_if<ExactComplex>(&value_)) return *e;
  throw Error(Errc::mode_mismatch, "exact value requested from a float coefficient");
}

const std::complex<double>& Coefficient::floating() const {
  if (auto* f = std::get_if<std::complex<double>>(&value_)) return *f;
  throw Error(Errc::mode_mismatch, "float value requested from an exact coefficient");
}

std::complex<double> Coefficient::to_complex() const {
  if (auto* e = std::get_if<ExactComplex>(&value_)) return to_std(*e);
  return std::get<std::complex<double>>(value_);
}

Rational Coefficient::sup_norm_exact() const {
  if (auto* e = std::get_if<ExactComplex>(&value_)) return involute::sup_norm(*e);
  return Rational(sup_norm());
}

double Coefficient::sup_norm() const {
  auto c = to_complex();
  return std::max(std::abs(c.real()), std::abs(c.imag()));
}

Coefficient Coefficient::scaled(const Rational& q) const {
  if (auto* e = std::get_if<ExactComplex>(&value_)) return ExactComplex(e->re * q, e->im * q);
  return std::get<std::complex<double>>(value_) * q.get_d();
}

namespace {

void check_modes(const Coefficient& a, const Coefficient& b) {
  if (a.mode() != b.mode()) throw Error(Errc::mode_mismatch, "mixed exact/float coefficient arithmetic");
}

}  // namespace

Coefficient operator+(const Coefficient& a, const Coefficient& b) {
  check_modes(a, b);
  if (a.mode() == Mode::exact) return a.exact() + b.exact();
  return a.floating() + b.floating();
}

Coefficient operator-(const Coefficient& a, const Coefficient& b) {
  check_modes(a, b);
  if (a.mode() == Mode::exact) return a.exact() - b.exact();
  return a.floating() - b.floating();
}

Coefficient operator*(const Coefficient& a, const Coefficient& b) {
  check_modes(a, b);
  if (a.mode() == Mode::exact) return a.exact() * b.exact();
  return a.floating() * b.floating();
}

Coefficient operator-(const Coefficient& a) {
  if (a.mode() == Mode::exact) return -a.exact();
  return -a.floating();
}

bool operator==(const Coefficient& a, const Coefficient& b) {
  if (a.mode() != b.mode()) return false;
  if (a.mode() == Mode::exact) return a.exact() == b.exact();
  return a.floating() == b.floating();
}

// ---------------------------------------------------------------------------
// Variable conventions

namespace {

Variables numbered(std::string_view stem, std::size_t count) {
  Variables v;
  for (std::size_t j = 1; j <= count; ++j) v.push_back(std::string(stem) + std::to_string(j));
  return v;
}

Variables concat(Variables a, const Variables& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

Variables chart_variables(std::size_t m) {
  return concat({"z", "zbar"}, st_variables(m));
}
Variables germ_variables(std::size_t m) { return concat({"z"}, numbered("w", m)); }
Variables s_variables(std::size_t m) { return numbered("s", m); }
Variables st_variables(std::size_t m) { return concat(numbered("s", m), numbered("t", m)); }
Variables ambient_variables(std::size_t n) { return numbered("z", n); }

// ---------------------------------------------------------------------------
// Series

Series::Series(Variables variables, unsigned truncation, Mode mode)
    : variables_(std::move(variables)), truncation_(truncation), mode_(mode) {
  for (std::size_t i = 0; i < variables_.size(); ++i)
    for (std::size_t j = i + 1; j < variables_.size(); ++j)
      if (variables_[i] == variables_[j])
        throw Error(Errc::variable_mismatch, "duplicate variable '" + variables_[i] + "'");
}

Series Series::constant(Variables variables, unsigned truncation, const Coefficient& value) {
  std::size_t arity = variables.size();
  return monomial(std::move(variables), truncation, MultiIndex(arity), value);
}

Series Series::variable(Variables variables, unsigned truncation, Mode mode, std::string_view name) {
  Series probe(variables, truncation, mode);
  MultiIndex e = MultiIndex(variables.size()).with(probe.index_of(name), 1);
  return monomial(std::move(variables), truncation, e, Coefficient::from_integer(1, mode));
}

Series Series::monomial(Variables variables, unsigned truncation, const MultiIndex& exps,
                        const Coefficient& value) {
  Builder b(std::move(variables), truncation, value.mode());
  b.add(exps, value);
  return std::move(b).build();
}

std::size_t Series::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i)
    if (variables_[i] == name) return i;
  throw Error(Errc::unknown_variable, "no variable '" + std::string(name) + "'");
}

bool Series::has_variable(std::string_view name) const {
  return std::find(variables_.begin(), variables_.end(), name) != variables_.end();
}

Coefficient Series::coefficient(const MultiIndex& exps) const {
  auto it = terms_.find(exps);
  return it == terms_.end() ? Coefficient::zero(mode_) : it->second;
}

unsigned Series::degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first.degree(); }

unsigned Series::degree_in(std::string_view name) const {
  std::size_t i = index_of(name);
  unsigned d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[i]);
  return d;
}

bool operator==(const Series& a, const Series& b) {
  return a.variables_ == b.variables_ && a.truncation_ == b.truncation_ && a.mode_ == b.mode_ &&
         a.terms_ == b.terms_;
}

Series::Builder::Builder(Variables variables, unsigned truncation, Mode mode)
    : result_(std::move(variables), truncation, mode) {}

void Series::Builder::add(const MultiIndex& exps, const Coefficient& value) {
  if (exps.size() != result_.variables_.size())
    throw Error(Errc::arity_mismatch, "exponent vector length differs from variable count");
  if (value.mode() != result_.mode_) throw Error(Errc::mode_mismatch, "term mode differs from series mode");
  if (exps.degree() > result_.truncation_) return;
  auto [it, inserted] = result_.terms_.try_emplace(exps, value);
  if (!inserted) it->second = it->second + value;
}

Series Series::Builder::build() && {
  std::erase_if(result_.terms_, [](const auto& kv) { return kv.second.is_zero(); });
  return std::move(result_);
}

// ---------------------------------------------------------------------------
// Operations

namespace {

void check_compatible(const Series& a, const Series& b) {
  if (a.variables() != b.variables()) throw Error(Errc::variable_mismatch, "series have different variables");
  if (a.mode() != b.mode()) throw Error(Errc::mode_mismatch, "series have different modes");
}

Series combine(const Series& a, const Series& b, bool subtract) {
  check_compatible(a, b);
  Series::Builder out(a.variables(), std::min(a.truncation(), b.truncation()), a.mode());
  for (const auto& [e, c] : a.terms()) out.add(e, c);
  for (const auto& [e, c] : b.terms()) out.add(e, subtract ? -c : c);
  return std::move(out).build();
}

}  // namespace

Series add(const Series& a, const Series& b) { return combine(a, b, false); }
Series sub(const Series& a, const Series& b) { return combine(a, b, true); }

Series neg(const Series& a) {
  Series::Builder out(a.variables(), a.truncation(), a.mode());
  for (const auto& [e, c] : a.terms()) out.add(e, -c);
  return std::move(out).build();
}

Series scale(const Series& a, const Coefficient& k) {
  Series::Builder out(a.variables(), a.truncation(), a.mode());
  for (const auto& [e, c] : a.terms()) out.add(e, c * k);
  return std::move(out).build();
}

Series mul(const Series& a, const Series& b) {
  check_compatible(a, b);
  unsigned d = std::min(a.truncation(), b.truncation());
  Series::Builder out(a.variables(), d, a.mode());
  for (const auto& [ea, ca] : a.terms()) {
    if (ea.degree() > d) continue;
    for (const auto& [eb, cb] : b.terms()) {
      if (ea.degree() + eb.degree() > d) break;  // graded order: later terms are no smaller
      out.add(ea + eb, ca * cb);
    }
  }
  return std::move(out).build();
}

Series derive(const Series& a, std::string_view var) {
  std::size_t i = a.index_of(var);
  Series::Builder out(a.variables(), a.truncation(), a.mode());
  for (const auto& [e, c] : a.terms()) {
    if (e[i] == 0) continue;
    out.add(e.with(i, e[i] - 1), c.scaled(Rational(e[i])));
  }
  return std::move(out).build();
}

Series truncated(const Series& a, unsigned degree) {
  Series::Builder out(a.variables(), std::min(degree, a.truncation()), a.mode());
  for (const auto& [e, c] : a.terms()) out.add(e, c);
  return std::move(out).build();
}

Series restrict_degree(const Series& a, unsigned degree) {
  Series::Builder out(a.variables(), a.truncation(), a.mode());
  for (const auto& [e, c] : a.terms())
    if (e.degree() <= degree) out.add(e, c);
  return std::move(out).build();
}

Series substitute(const Series& h, unsigned target_truncation) {
  const std::size_t m = h.arity() == 0 ? 0 : h.arity() - 1;
  if (h.variables() != germ_variables(m))
    throw Error(Errc::variable_mismatch, "substitute expects a germ series in (z, w1..wm)");
  if (target_truncation < h.truncation())
    throw Error(Errc::truncation_too_small, "target truncation " + std::to_string(target_truncation) +
                                                " is below the germ truncation " +
                                                std::to_string(h.truncation()));

  Series::Builder out(chart_variables(m), target_truncation, h.mode());
  const std::size_t arity = 2 + 2 * m;
  for (const auto& [e, c] : h.terms()) {
    // z^k w^alpha -> sum_{beta <= alpha} binom(alpha, beta) z^{k+|beta|} s^{alpha-beta} t^beta
    std::vector<unsigned> beta(m, 0);
    while (true) {
      Integer binom(1);
      std::vector<unsigned> exps(arity, 0);
      unsigned bsum = 0;
      for (std::size_t j = 0; j < m; ++j) {
        Integer b;
        mpz_bin_uiui(b.get_mpz_t(), e[j + 1], beta[j]);
        binom *= b;
        exps[2 + j] = e[j + 1] - beta[j];
        exps[2 + m + j] = beta[j];
        bsum += beta[j];
      }
      exps[0] = e[0] + bsum;
      out.add(MultiIndex(std::move(exps)), c.scaled(Rational(binom)));

      std::size_t j = 0;
      while (j < m && beta[j] == e[j + 1]) beta[j++] = 0;
      if (j == m) break;
      ++beta[j];
    }
  }
  return std::move(out).build();
}

Series substitute_affine(const Series& a, const Variables& new_variables,
                         std::span<const Coefficient> offset,
                         const std::vector<std::vector<Coefficient>>& matrix,
                         unsigned target_truncation) {
  if (offset.size() != a.arity() || matrix.size() != a.arity())
    throw Error(Errc::arity_mismatch, "affine substitution needs one row per variable");
  const Mode mode = a.mode();
  std::vector<Series> images;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (matrix[i].size() != new_variables.size())
      throw Error(Errc::arity_mismatch, "affine substitution row has the wrong length");
    Series::Builder b(new_variables, target_truncation, mode);
    b.add(MultiIndex(new_variables.size()), offset[i]);
    for (std::size_t j = 0; j < new_variables.size(); ++j)
      b.add(MultiIndex(new_variables.size()).with(j, 1), matrix[i][j]);
    images.push_back(std::move(b).build());
  }

  // powers[i][p] = images[i]^p, built lazily.
  std::vector<std::vector<Series>> powers(a.arity());
  auto power = [&](std::size_t i, unsigned p) -> const Series& {
    auto& cache = powers[i];
    if (cache.empty())
      cache.push_back(Series::constant(new_variables, target_truncation, Coefficient::from_integer(1, mode)));
    while (cache.size() <= p) cache.push_back(mul(cache.back(), images[i]));
    return cache[p];
  };

  Series::Builder out(new_variables, target_truncation, mode);
  for (const auto& [e, c] : a.terms()) {
    Series term = Series::constant(new_variables, target_truncation, c);
    for (std::size_t i = 0; i < a.arity(); ++i)
      if (e[i] > 0) term = mul(term, power(i, e[i]));
    for (const auto& [te, tc] : term.terms()) out.add(te, tc);
  }
  return std::move(out).build();
}

Coefficient eval(const Series& a, std::span<const Coefficient> point) {
  if (point.size() != a.arity())
    throw Error(Errc::arity_mismatch, "point has " + std::to_string(point.size()) + " entries, series has " +
                                          std::to_string(a.arity()) + " variables");
  for (const auto& p : point)
    if (p.mode() != a.mode()) throw Error(Errc::mode_mismatch, "point mode differs from series mode");

  // Power tables per variable, filled up to the largest exponent used.
  std::vector<std::vector<Coefficient>> pw(a.arity());
  for (std::size_t i = 0; i < a.arity(); ++i) pw[i].push_back(Coefficient::from_integer(1, a.mode()));

  Coefficient sum = Coefficient::zero(a.mode());
  for (const auto& [e, c] : a.terms()) {
    Coefficient term = c;
    for (std::size_t i = 0; i < a.arity(); ++i) {
      while (pw[i].size() <= e[i]) pw[i].push_back(pw[i].back() * point[i]);
      if (e[i] > 0) term = term * pw[i][e[i]];
    }
    sum = sum + term;
  }
  return sum;
}

Series extract_layer(const Series& f, std::string_view var, unsigned k) {
  std::size_t i = f.index_of(var);
  if (k > f.truncation())
    throw Error(Errc::degree_out_of_range, "layer " + std::to_string(k) + " exceeds truncation " +
                                               std::to_string(f.truncation()));
  Variables rest;
  for (std::size_t j = 0; j < f.arity(); ++j)
    if (j != i) rest.push_back(f.variables()[j]);

  Series::Builder out(rest, f.truncation() - k, f.mode());
  for (const auto& [e, c] : f.terms()) {
    if (e[i] != k) continue;
    std::vector<unsigned> r;
    r.reserve(rest.size());
    for (std::size_t j = 0; j < f.arity(); ++j)
      if (j != i) r.push_back(e[j]);
    out.add(MultiIndex(std::move(r)), c);
  }
  return std::move(out).build();
}

Series embed(const Series& a, const Variables& target, unsigned truncation) {
  std::vector<std::size_t> where;
  for (const auto& v : a.variables()) {
    auto it = std::find(target.begin(), target.end(), v);
    if (it == target.end()) throw Error(Errc::variable_mismatch, "target lacks variable '" + v + "'");
    where.push_back(static_cast<std::size_t>(it - target.begin()));
  }
  Series::Builder out(target, truncation, a.mode());
  for (const auto& [e, c] : a.terms()) {
    std::vector<unsigned> r(target.size(), 0);
    for (std::size_t j = 0; j < where.size(); ++j) r[where[j]] = e[j];
    out.add(MultiIndex(std::move(r)), c);
  }
  return std::move(out).build();
}

Series drop_variables(const Series& a, const Variables& target) {
  std::vector<std::size_t> keep;
  for (const auto& v : target) keep.push_back(a.index_of(v));
  Series::Builder out(target, a.truncation(), a.mode());
  for (const auto& [e, c] : a.terms()) {
    std::vector<unsigned> r;
    unsigned kept = 0;
    for (std::size_t j : keep) {
      r.push_back(e[j]);
      kept += e[j];
    }
    if (kept != e.degree())
      throw Error(Errc::variable_mismatch, "a dropped variable occurs in the series");
    out.add(MultiIndex(std::move(r)), c);
  }
  return std::move(out).build();
}

Series set_variable(const Series& a, std::string_view var, const Coefficient& value) {
  std::size_t i = a.index_of(var);
  Variables rest;
  for (std::size_t j = 0; j < a.arity(); ++j)
    if (j != i) rest.push_back(a.variables()[j]);
  Series::Builder out(rest, a.truncation(), a.mode());
  std::vector<Coefficient> pw{Coefficient::from_integer(1, a.mode())};
  for (const auto& [e, c] : a.terms()) {
    while (pw.size() <= e[i]) pw.push_back(pw.back() * value);
    std::vector<unsigned> r;
    for (std::size_t j = 0; j < a.arity(); ++j)
      if (j != i) r.push_back(e[j]);
    out.add(MultiIndex(std::move(r)), c * pw[e[i]]);
  }
  return std::move(out).build();
}

Series rename(const Series& a, const Variables& names) {
  if (names.size() != a.arity()) throw Error(Errc::arity_mismatch, "rename needs one name per variable");
  Series::Builder out(names, a.truncation(), a.mode());
  for (const auto& [e, c] : a.terms()) out.add(e, c);
  return std::move(out).build();
}

Rational sup_coefficient_exact(const Series& a) {
  Rational m(0);
  for (const auto& [e, c] : a.terms()) {
    Rational v = c.sup_norm_exact();
    if (v > m) m = v;
  }
  return m;
}

double sup_coefficient(const Series& a) {
  double m = 0;
  for (const auto& [e, c] : a.terms()) m = std::max(m, c.sup_norm());
  return m;
}

Series to_floating(const Series& a) {
  Series::Builder out(a.variables(), a.truncation(), Mode::floating);
  for (const auto& [e, c] : a.terms()) out.add(e, Coefficient(c.to_complex()));
  return std::move(out).build();
}

Series to_exact(const Series& a) {
  if (a.mode() == Mode::exact) return a;
  Series::Builder out(a.variables(), a.truncation(), Mode::exact);
  for (const auto& [e, c] : a.terms()) out.add(e, Coefficient(exact_from_double(c.floating())));
  return std::move(out).build();
}

}  // namespace involute
