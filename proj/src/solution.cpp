#include "involute/solution.hpp"

#include <algorithm>
#include <cmath>

#include "involute/geometry.hpp"

namespace involute::solution {

namespace {

Rational norm_of(const Series& r) {
  return r.mode() == Mode::exact ? sup_coefficient_exact(r) : Rational(sup_coefficient(r));
}

/// Degree up to which a first-order residual of a truncation-D series is
/// fully determined; -1 when nothing is.
int reliable_degree(unsigned truncation) { return static_cast<int>(truncation) - 1; }

Series restrict_or_empty(const Series& a, int degree) {
  if (degree < 0) return Series(a.variables(), a.truncation(), a.mode());
  return restrict_degree(a, static_cast<unsigned>(degree));
}

std::string t_name(std::size_t j) { return "t" + std::to_string(j + 1); }
std::string s_name(std::size_t j) { return "s" + std::to_string(j + 1); }

/// d_s^alpha of a series in s.
Series s_derivative(const Series& b, const MultiIndex& alpha) {
  Series out = b;
  for (std::size_t j = 0; j < alpha.size(); ++j)
    for (unsigned r = 0; r < alpha[j]; ++r) out = derive(out, s_name(j));
  return out;
}

}  // namespace

bool ResidualReport::all_zero() const {
  return std::all_of(norms.begin(), norms.end(), [](const auto& kv) { return kv.second == 0; });
}

double ResidualReport::max_norm() const {
  double m = 0;
  for (const auto& [name, v] : norms) m = std::max(m, v.get_d());
  return m;
}

std::size_t chart_dimension(const Series& f) {
  if (f.arity() < 2 || f.arity() % 2 != 0 || f.variables() != chart_variables((f.arity() - 2) / 2))
    throw Error(Errc::variable_mismatch, "expected a chart series in (z, zbar, s1..sm, t1..tm)");
  return (f.arity() - 2) / 2;
}

Series pullback(const Series& h) { return pullback(h, std::max(h.truncation(), 2 * h.degree())); }

Series pullback(const Series& h, unsigned target_truncation) { return substitute(h, target_truncation); }

ResidualReport verify_solution(const Series& f) {
  const std::size_t m = chart_dimension(f);
  ResidualReport report;
  report.exact = f.mode() == Mode::exact;
  const int upto = reliable_degree(f.truncation());
  for (std::size_t i = 0; i <= m; ++i) {
    Series r = restrict_or_empty(geometry::apply_field(geometry::frame_field(m + 1, i), f), upto);
    report.norms.emplace_back("L" + std::to_string(i), norm_of(r));
  }
  return report;
}

LayerDecomposition decompose_layers(const Series& f) {
  const std::size_t m = chart_dimension(f);
  if (f.degree_in("zbar") > 0) throw Error(Errc::zbar_dependence, "series depends on zbar");

  Variables holomorphic{"z"};
  for (const auto& v : st_variables(m)) holomorphic.push_back(v);
  Series g = drop_variables(f, holomorphic);

  LayerDecomposition out{m, f.truncation(), {}};
  for (unsigned k = 0; k <= f.truncation(); ++k) out.layers.push_back(extract_layer(g, "z", k));
  return out;
}

Series closed_form_layer(const BSequence& b, unsigned k) {
  const std::size_t m = b.m;
  const Variables st = st_variables(m);
  const unsigned d = b.truncation - k;
  const Mode mode = b.b.empty() ? Mode::exact : b.b.front().mode();
  Series::Builder out(st, d, mode);
  for (const MultiIndex& alpha : indices_up_to(m, k)) {
    const Series deriv = s_derivative(b.b[k - alpha.degree()], alpha);
    const Rational inv_fact(Integer(1), alpha.factorial());
    for (const auto& [beta, c] : deriv.terms()) {
      std::vector<unsigned> e(2 * m, 0);
      for (std::size_t j = 0; j < m; ++j) {
        e[j] = beta[j];
        e[m + j] = alpha[j];
      }
      out.add(MultiIndex(std::move(e)), c.scaled(inv_fact));
    }
  }
  return std::move(out).build();
}

BSequence reconstruct_b(const LayerDecomposition& ld) {
  const std::size_t m = ld.m;
  const unsigned d = ld.truncation;
  if (ld.layers.size() != d + 1) throw Error(Errc::invalid_argument, "layer count must be D + 1");

  BSequence out{m, d, {}};
  for (unsigned k = 0; k <= d; ++k) {
    const Series& a = ld.layers[k];
    const int upto = static_cast<int>(d) - static_cast<int>(k) - 1;
    for (std::size_t j = 0; j < m && upto >= 0; ++j) {
      Series lhs = derive(a, t_name(j));
      Series residual = k == 0 ? lhs : sub(lhs, derive(ld.layers[k - 1], s_name(j)));
      residual = restrict_or_empty(residual, upto);
      if (!residual.is_zero()) {
        const std::string norm = format_rational(norm_of(residual));
        throw NotASolution(static_cast<int>(k), norm,
                           "layer " + std::to_string(k) + ": d/dt" + std::to_string(j + 1) +
                               (k == 0 ? " a_0 != 0" : " a_k != d/ds a_{k-1}") + " (residual " + norm + ")");
      }
    }
    Series bk = a;
    for (std::size_t j = 0; j < m; ++j) bk = set_variable(bk, t_name(j), Coefficient::zero(a.mode()));
    out.b.push_back(std::move(bk));
  }

  for (unsigned k = 0; k <= d; ++k) {
    Series residual = sub(ld.layers[k], closed_form_layer(out, k));
    if (!residual.is_zero()) {
      const std::string norm = format_rational(norm_of(residual));
      throw NotASolution(static_cast<int>(k), norm,
                         "layer " + std::to_string(k) + " differs from its closed form (residual " + norm + ")");
    }
  }
  return out;
}

GermCoefficients germ_coefficients(const BSequence& b) {
  GermCoefficients out;
  for (unsigned k = 0; k < b.b.size(); ++k)
    for (const auto& [alpha, c] : b.b[k].terms()) out.emplace(std::make_pair(k, alpha), c.scaled(Rational(alpha.factorial())));
  return out;
}

Series assemble_germ(const BSequence& b) {
  const Mode mode = b.b.empty() ? Mode::exact : b.b.front().mode();
  Series::Builder out(germ_variables(b.m), b.truncation, mode);
  for (const auto& [key, c] : germ_coefficients(b)) {
    const auto& [k, alpha] = key;
    std::vector<unsigned> e{k};
    e.insert(e.end(), alpha.exponents().begin(), alpha.exponents().end());
    out.add(MultiIndex(std::move(e)), c.scaled(Rational(Integer(1), alpha.factorial())));
  }
  return std::move(out).build();
}

Series hypocomplex_reconstruct(const Series& f) { return assemble_germ(reconstruct_b(decompose_layers(f))); }

// ---------------------------------------------------------------------------
// Inhomogeneous system

bool CompatibilityReport::closed() const {
  return std::all_of(residuals.begin(), residuals.end(), [](const auto& r) { return r.second.is_zero(); });
}

Rational CompatibilityReport::max_residual() const {
  Rational m(0);
  for (const auto& [jk, r] : residuals) m = std::max(m, norm_of(r));
  return m;
}

namespace {

void check_one_form(const OneForm& v) {
  const Variables s = s_variables(v.m());
  for (const auto& c : v.components) {
    if (c.variables() != s) throw Error(Errc::variable_mismatch, "one-form components must be series in s1..sm");
    if (c.mode() != v.components.front().mode()) throw Error(Errc::mode_mismatch, "one-form components differ in mode");
  }
}

}  // namespace

CompatibilityReport check_compatibility(const OneForm& v, const Series& u) {
  if (!u.is_zero()) throw Error(Errc::unsupported_inhomogeneity, "only u = 0 is supported");
  return check_compatibility(v);
}

CompatibilityReport check_compatibility(const OneForm& v) {
  check_one_form(v);
  CompatibilityReport report;
  for (std::size_t j = 0; j < v.m(); ++j) {
    for (std::size_t k = j + 1; k < v.m(); ++k) {
      const Series& vj = v.components[j];
      const Series& vk = v.components[k];
      Series r = sub(derive(vk, s_name(j)), derive(vj, s_name(k)));
      const int upto = reliable_degree(std::min(vj.truncation(), vk.truncation()));
      report.residuals.push_back({{j, k}, restrict_or_empty(r, upto)});
    }
  }
  return report;
}

Series inhomogeneous_solve(const OneForm& v, unsigned truncation) {
  check_one_form(v);
  const std::size_t m = v.m();
  const Mode mode = m == 0 ? Mode::exact : v.components.front().mode();
  if (!check_compatibility(v).closed()) throw Error(Errc::not_closed, "the one-form v_j ds^j is not closed");

  unsigned deg = 0;
  bool nonzero = false;
  for (const auto& c : v.components) {
    deg = std::max(deg, c.degree());
    nonzero = nonzero || !c.is_zero();
  }
  if (nonzero && deg + 1 > truncation)
    throw Error(Errc::truncation_too_small, "one-form degree " + std::to_string(deg) + " needs truncation >= " +
                                                std::to_string(deg + 1));

  const Variables vars = chart_variables(m);
  Series::Builder out(vars, truncation, mode);
  for (unsigned k = 0; k <= deg && k <= truncation; ++k) {
    for (const MultiIndex& alpha : indices_of_degree(m, k + 1)) {
      std::size_t i = 0;
      while (alpha[i] == 0) ++i;
      // (d_s^k v)_alpha: symmetric in its slots because v is closed.
      const Series component = s_derivative(v.components[i], alpha.with(i, alpha[i] - 1));
      const Rational inv_fact(Integer(1), alpha.factorial());
      for (const auto& [beta, c] : component.terms()) {
        std::vector<unsigned> e(vars.size(), 0);
        e[0] = k;
        for (std::size_t j = 0; j < m; ++j) {
          e[2 + j] = beta[j];
          e[2 + m + j] = alpha[j];
        }
        out.add(MultiIndex(std::move(e)), c.scaled(inv_fact));
      }
    }
  }
  Series f = std::move(out).build();

  const int upto = reliable_degree(truncation);
  for (std::size_t i = 0; i <= m; ++i) {
    Series applied = geometry::apply_field(geometry::frame_field(m + 1, i), f);
    Series target = i == 0 ? Series(vars, truncation, mode) : embed(v.components[i - 1], vars, truncation);
    if (!restrict_or_empty(sub(applied, target), upto).is_zero())
      throw Error(Errc::not_a_solution, "constructed solution fails residual check for L" + std::to_string(i));
  }
  return f;
}

OneForm recover_inhomogeneity(const Series& f) {
  const std::size_t m = chart_dimension(f);
  const int upto = reliable_degree(f.truncation());
  const unsigned out_truncation = upto < 0 ? 0 : static_cast<unsigned>(upto);

  Series l0 = restrict_or_empty(geometry::apply_field(geometry::frame_field(m + 1, 0), f), upto);
  if (!l0.is_zero()) throw Error(Errc::zbar_dependence, "d/dzbar f is not zero");

  OneForm out;
  const Variables s = s_variables(m);
  for (std::size_t j = 0; j < m; ++j) {
    Series r = restrict_or_empty(geometry::apply_field(geometry::frame_field(m + 1, j + 1), f), upto);
    for (const auto& [e, c] : r.terms()) {
      bool pure = e[0] == 0 && e[1] == 0;
      for (std::size_t i = 0; i < m; ++i) pure = pure && e[2 + m + i] == 0;
      if (!pure)
        throw Error(Errc::not_pure_s, "L" + std::to_string(j + 1) + " f depends on z, zbar or t");
    }
    out.components.push_back(truncated(drop_variables(r, s), out_truncation));
  }
  return out;
}

Certificate analyticity_certificate(const Series& g) {
  if (g.is_zero()) throw Error(Errc::empty_series, "certificate needs a nonzero series");

  Certificate cert;
  const MultiIndex origin(g.arity());
  cert.c = std::max(g.coefficient(origin).abs(), 1.0);

  // Pick the maximizing exponent exactly: |a|^{1/i} >= |b|^{1/j} iff
  // (|a|^2)^j >= (|b|^2)^i.
  const MultiIndex* best = nullptr;
  Rational best_sq;
  double best_log = 0;
  for (const auto& [e, c] : g.terms()) {
    if (e.degree() == 0) continue;
    if (g.mode() == Mode::exact) {
      Rational sq = c.exact().norm();
      bool better = best == nullptr;
      if (!better) {
        Rational lhs, rhs;
        mpq_class base_l = sq, base_r = best_sq;
        mpz_pow_ui(lhs.get_num_mpz_t(), base_l.get_num_mpz_t(), best->degree());
        mpz_pow_ui(lhs.get_den_mpz_t(), base_l.get_den_mpz_t(), best->degree());
        mpz_pow_ui(rhs.get_num_mpz_t(), base_r.get_num_mpz_t(), e.degree());
        mpz_pow_ui(rhs.get_den_mpz_t(), base_r.get_den_mpz_t(), e.degree());
        better = lhs > rhs;
      }
      if (better) {
        best = &e;
        best_sq = sq;
      }
    } else {
      double lg = std::log(c.abs()) / e.degree();
      if (best == nullptr || lg > best_log) {
        best = &e;
        best_log = lg;
      }
    }
  }
  if (best != nullptr) {
    cert.m = std::pow(g.coefficient(*best).abs(), 1.0 / best->degree());
    cert.argmax.assign(best->exponents().begin(), best->exponents().end());
  }
  return cert;
}

}  // namespace involute::solution
