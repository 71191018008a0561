#pragma once

#include <complex>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace involute {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p/q" (or a bare integer "p"). Throws Error(parse_error) on
/// malformed input or a zero denominator. With `require_canonical` the
/// string must already be in lowest terms with q > 0 and carry the "/q".
Rational parse_rational(std::string_view text, bool require_canonical = false);

/// Canonical "p/q" spelling, always with an explicit denominator.
std::string format_rational(const Rational& q);

Integer factorial(unsigned n);

/// Cartesian complex number over an arbitrary ordered field. Used with
/// Rational for exact work; numeric code uses std::complex<double>.
template <class T>
struct Complex {
  T re{};
  T im{};

  Complex() = default;
  Complex(T r) : re(std::move(r)), im(0) {}
  Complex(T r, T i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return re == 0 && im == 0; }
  Complex conj() const { return {re, -im}; }
  T norm() const { return re * re + im * im; }

  Complex inverse() const {
    T d = norm();
    return {re / d, -im / d};
  }

  friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
  friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator/(const Complex& a, const Complex& b) { return a * b.inverse(); }
  friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const Complex& a, const Complex& b) { return !(a == b); }

  Complex& operator+=(const Complex& b) { return *this = *this + b; }
  Complex& operator-=(const Complex& b) { return *this = *this - b; }
  Complex& operator*=(const Complex& b) { return *this = *this * b; }
};

using ExactComplex = Complex<Rational>;

inline std::complex<double> to_std(const ExactComplex& c) { return {c.re.get_d(), c.im.get_d()}; }
inline std::complex<double> to_std(const Complex<double>& c) { return {c.re, c.im}; }

/// Doubles are dyadic rationals; this conversion is exact.
inline Rational exact_from_double(double x) { return Rational(x); }
inline ExactComplex exact_from_double(std::complex<double> z) {
  return {Rational(z.real()), Rational(z.imag())};
}

/// max(|re|, |im|); the exact-arithmetic stand-in for a modulus.
inline Rational sup_norm(const ExactComplex& c) {
  Rational a = abs(c.re);
  Rational b = abs(c.im);
  return a > b ? a : b;
}

}  // namespace involute
