#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "involute/error.hpp"
#include "involute/multi_index.hpp"
#include "involute/rational.hpp"

namespace involute {

enum class Mode { exact, floating };

std::string_view mode_name(Mode mode) noexcept;
Mode parse_mode(std::string_view text);

/// A complex coefficient, either exact (rational real and imaginary parts,
/// always canonical) or double precision. Arithmetic between the two modes
/// throws ModeMismatch instead of promoting.
class Coefficient {
 public:
  Coefficient() : value_(ExactComplex{}) {}
  Coefficient(ExactComplex value) : value_(std::move(value)) {}
  Coefficient(std::complex<double> value) : value_(value) {}

  static Coefficient zero(Mode mode);
  static Coefficient from_rational(const Rational& q, Mode mode);
  static Coefficient from_integer(long n, Mode mode) { return from_rational(Rational(n), mode); }

  Mode mode() const noexcept { return value_.index() == 0 ? Mode::exact : Mode::floating; }
  bool is_zero() const;

  const ExactComplex& exact() const;
  const std::complex<double>& floating() const;
  std::complex<double> to_complex() const;

  /// max(|re|, |im|), exact in exact mode.
  Rational sup_norm_exact() const;
  double sup_norm() const;
  double abs() const { return std::abs(to_complex()); }

  Coefficient scaled(const Rational& q) const;

  friend Coefficient operator+(const Coefficient& a, const Coefficient& b);
  friend Coefficient operator-(const Coefficient& a, const Coefficient& b);
  friend Coefficient operator*(const Coefficient& a, const Coefficient& b);
  friend Coefficient operator-(const Coefficient& a);
  friend bool operator==(const Coefficient& a, const Coefficient& b);

 private:
  std::variant<ExactComplex, std::complex<double>> value_;
};

using Variables = std::vector<std::string>;
using TermMap = std::map<MultiIndex, Coefficient>;

/// Variable naming conventions. Chart series live in (z, zbar, s1..sm,
/// t1..tm); germ series in (z, w1..wm); ambient functions in (z1..zn).
Variables chart_variables(std::size_t m);
Variables germ_variables(std::size_t m);
Variables s_variables(std::size_t m);
Variables st_variables(std::size_t m);
Variables ambient_variables(std::size_t n);

/// Truncated multivariate power series, truncated by total degree. Values
/// are immutable: every operation returns a new series.
class Series {
 public:
  class Builder;

  Series(Variables variables, unsigned truncation, Mode mode);

  static Series constant(Variables variables, unsigned truncation, const Coefficient& value);
  static Series variable(Variables variables, unsigned truncation, Mode mode, std::string_view name);
  static Series monomial(Variables variables, unsigned truncation, const MultiIndex& exps,
                         const Coefficient& value);

  const Variables& variables() const noexcept { return variables_; }
  std::size_t arity() const noexcept { return variables_.size(); }
  unsigned truncation() const noexcept { return truncation_; }
  Mode mode() const noexcept { return mode_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  /// Index of `name` in the variable list; throws UnknownVariable.
  std::size_t index_of(std::string_view name) const;
  bool has_variable(std::string_view name) const;

  Coefficient coefficient(const MultiIndex& exps) const;

  /// Highest total degree of a stored term (0 for the zero series).
  unsigned degree() const;
  /// Highest exponent of `name` among stored terms.
  unsigned degree_in(std::string_view name) const;

  friend bool operator==(const Series& a, const Series& b);

 private:
  Variables variables_;
  unsigned truncation_;
  Mode mode_;
  TermMap terms_;
};

/// Accumulates terms, then produces a normalized Series (zeros dropped,
/// terms above the truncation dropped).
class Series::Builder {
 public:
  Builder(Variables variables, unsigned truncation, Mode mode);

  void add(const MultiIndex& exps, const Coefficient& value);
  Series build() &&;

 private:
  Series result_;
};

// Arithmetic. Binary operations require identical variable lists and modes;
// the result is truncated to the smaller truncation.
Series add(const Series& a, const Series& b);
Series sub(const Series& a, const Series& b);
Series neg(const Series& a);
Series scale(const Series& a, const Coefficient& c);
Series mul(const Series& a, const Series& b);

/// Formal partial derivative. The truncation is kept as is, so the top
/// degree of the result is not fully determined; callers that compare
/// derivatives should restrict to degree D - 1.
Series derive(const Series& a, std::string_view var);

/// Same series with a lower truncation (terms above `degree` dropped).
Series truncated(const Series& a, unsigned degree);

/// Drops every term whose total degree exceeds `degree` but keeps the
/// truncation; used to compare only the reliably known part.
Series restrict_degree(const Series& a, unsigned degree);

/// Germ (z, w1..wm) to chart (z, zbar, s, t) via w_j := s_j + z t_j.
/// Throws TruncationTooSmall when `target_truncation` < h.truncation().
/// A degree-d monomial expands to degree <= 2d, so lossless round trips
/// need target_truncation >= 2 deg(h); this is not enforced.
Series substitute(const Series& h, unsigned target_truncation);

/// Substitutes every variable of `a` by an affine form in `new_variables`:
/// old_i := offset[i] + sum_j matrix[i][j] * new_j. Exact when all inputs
/// are exact; the result is truncated at `target_truncation`.
Series substitute_affine(const Series& a, const Variables& new_variables,
                         std::span<const Coefficient> offset,
                         const std::vector<std::vector<Coefficient>>& matrix,
                         unsigned target_truncation);

/// Evaluates the truncated polynomial. Point entries must match the mode.
Coefficient eval(const Series& a, std::span<const Coefficient> point);

/// Coefficient of var^k: a series in the remaining variables with
/// truncation D - k.
Series extract_layer(const Series& f, std::string_view var, unsigned k);

/// Re-embeds `a` into a larger variable list containing all of a's
/// variables (absent variables get exponent zero).
Series embed(const Series& a, const Variables& target, unsigned truncation);

/// Removes variables that do not occur in any stored term. Throws
/// VariableMismatch if one of them does occur.
Series drop_variables(const Series& a, const Variables& target);

/// Sets `var` := value and removes it from the variable list.
Series set_variable(const Series& a, std::string_view var, const Coefficient& value);

/// Renames variables positionally; arity must match.
Series rename(const Series& a, const Variables& names);

/// Largest coefficient size, max(|re|, |im|) over stored terms.
Rational sup_coefficient_exact(const Series& a);
double sup_coefficient(const Series& a);

/// Converts exact coefficients to doubles (identity on float series).
Series to_floating(const Series& a);

/// Converts double coefficients to the rationals they represent exactly.
Series to_exact(const Series& a);

}  // namespace involute
