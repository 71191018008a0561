#include "involute/rational.hpp"

#include <cctype>

#include "involute/error.hpp"

namespace involute {

namespace {

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text, bool require_canonical) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{} : text.substr(slash + 1);
  if (!is_integer_literal(num) || (slash != std::string_view::npos && !is_integer_literal(den)))
    throw Error(Errc::parse_error, "malformed rational '" + std::string(text) + "'");
  if (require_canonical && slash == std::string_view::npos)
    throw Error(Errc::parse_error, "rational '" + std::string(text) + "' lacks a denominator");

  Integer p(std::string(num.front() == '+' ? num.substr(1) : num), 10);
  Integer q(1);
  if (slash != std::string_view::npos) q = Integer(std::string(den.front() == '+' ? den.substr(1) : den), 10);
  if (q == 0) throw Error(Errc::parse_error, "zero denominator in '" + std::string(text) + "'");

  Rational r(p, q);
  r.canonicalize();
  if (require_canonical && (r.get_num() != p || r.get_den() != q))
    throw Error(Errc::parse_error, "rational '" + std::string(text) + "' is not in lowest terms");
  return r;
}

std::string format_rational(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Integer factorial(unsigned n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

}  // namespace involute
