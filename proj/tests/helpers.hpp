#pragma once

#include <random>
#include <utility>
#include <vector>

#include "involute/series.hpp"
#include "involute/series_io.hpp"

namespace involute {

inline void PrintTo(const Series& s, std::ostream* os) { *os << series_to_string(s); }

}  // namespace involute

namespace involute::test {

inline Coefficient q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return Coefficient(ExactComplex(r, Rational(0)));
}

inline Coefficient cq(long re, long im) { return Coefficient(ExactComplex(Rational(re), Rational(im))); }

using Terms = std::vector<std::pair<std::vector<unsigned>, Coefficient>>;

inline Series poly(const Variables& vars, unsigned truncation, const Terms& terms, Mode mode = Mode::exact) {
  Series::Builder b(vars, truncation, mode);
  for (const auto& [e, c] : terms) b.add(MultiIndex(e), mode == Mode::exact ? c : Coefficient(c.to_complex()));
  return std::move(b).build();
}

inline Rational random_rational(std::mt19937_64& rng, long range = 9, long den = 6) {
  std::uniform_int_distribution<long> num(-range, range);
  std::uniform_int_distribution<long> d(1, den);
  Rational r(num(rng), d(rng));
  r.canonicalize();
  return r;
}

/// Random exact polynomial with roughly `density` of the monomials of
/// degree <= max_degree populated.
inline Series random_series(const Variables& vars, unsigned truncation, unsigned max_degree, std::mt19937_64& rng,
                            double density = 0.4) {
  std::bernoulli_distribution keep(density);
  Series::Builder b(vars, truncation, Mode::exact);
  for (const MultiIndex& e : indices_up_to(vars.size(), max_degree))
    if (keep(rng)) b.add(e, Coefficient(ExactComplex(random_rational(rng), random_rational(rng))));
  return std::move(b).build();
}

/// Random germ in (z, w1..wm) with a term of exact degree `degree`.
inline Series random_germ(std::size_t m, unsigned degree, std::mt19937_64& rng, unsigned truncation) {
  const Variables vars = germ_variables(m);
  Series base = random_series(vars, truncation, degree, rng, 0.3);
  if (base.degree() < degree) {
    const auto top = indices_of_degree(vars.size(), degree);
    std::uniform_int_distribution<std::size_t> pick(0, top.size() - 1);
    base = add(base, Series::monomial(vars, truncation, top[pick(rng)], q(1)));
  }
  return base;
}

inline std::vector<Coefficient> exact_point(const std::vector<std::pair<long, long>>& parts) {
  std::vector<Coefficient> p;
  for (const auto& [re, im] : parts) p.push_back(cq(re, im));
  return p;
}

}  // namespace involute::test
