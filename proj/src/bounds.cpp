#include "involute/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace involute::bounds {

double RealPoly::max_abs_coefficient() const {
  double m = 0;
  if (mode == Mode::exact)
    for (const auto& [e, c] : exact) m = std::max(m, std::abs(c.get_d()));
  else
    for (const auto& [e, c] : values) m = std::max(m, std::abs(c));
  return m;
}

std::string_view node_family_name(NodeFamily f) noexcept {
  return f == NodeFamily::equispaced ? "equispaced" : "chebyshev";
}

NodeFamily parse_node_family(std::string_view text) {
  if (text == "equispaced") return NodeFamily::equispaced;
  if (text == "chebyshev") return NodeFamily::chebyshev;
  throw Error(Errc::parse_error, "unknown node family '" + std::string(text) + "'");
}

std::string_view method_name(Method m) noexcept {
  return m == Method::interpolation ? "INTERPOLATION" : "CHEBYSHEV_WITNESS";
}

std::vector<Rational> interpolation_nodes(unsigned k, NodeFamily family) {
  if (k == 0) return {Rational(0)};
  std::vector<Rational> nodes;
  for (unsigned i = 0; i <= k; ++i) {
    if (family == NodeFamily::equispaced) {
      nodes.push_back(Rational(-1) + Rational(2 * i) / k);
    } else {
      // Increasing order; rounded to a multiple of 2^-40.
      double x = -std::cos((2.0 * i + 1.0) * std::numbers::pi / (2.0 * k + 2.0));
      Rational q(std::round(std::ldexp(x, 40)));
      q /= Rational(Integer(1) << 40);
      nodes.push_back(q);
    }
  }
  return nodes;
}

std::vector<std::vector<Rational>> inverse_vandermonde(const std::vector<Rational>& nodes) {
  const std::size_t n = nodes.size();
  // Augmented [V | I], Gauss-Jordan.
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    Rational p(1);
    for (std::size_t j = 0; j < n; ++j) {
      a[i][j] = p;
      p *= nodes[i];
    }
    a[i][n + i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) throw Error(Errc::invalid_argument, "interpolation nodes are not distinct");
    std::swap(a[c], a[piv]);
    const Rational inv = 1 / a[c][c];
    for (auto& x : a[c]) x *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const Rational f = a[r][c];
      for (std::size_t k = 0; k < 2 * n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  // V^{-1} maps values to coefficients: c = V^{-1} p(x).
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = a[i][n + j];
  return inv;
}

namespace {

std::vector<Rational> row_sums(const std::vector<std::vector<Rational>>& inv) {
  std::vector<Rational> sums;
  for (const auto& row : inv) {
    Rational s(0);
    for (const auto& x : row) s += abs(x);
    sums.push_back(s);
  }
  return sums;
}

Rational rational_pow(const Rational& base, unsigned e) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), e);
  return r;
}

/// Smallest double (from `guess` upward) whose exact value satisfies
/// value^k >= target.
double round_up_root(double guess, unsigned k, const Rational& target) {
  double r = guess;
  while (rational_pow(Rational(r), k) < target) r = std::nextafter(r, std::numeric_limits<double>::infinity());
  // Step down while still valid, in case the guess was generous.
  while (true) {
    double lower = std::nextafter(r, 0.0);
    if (lower < 1.0 || rational_pow(Rational(lower), k) < target) break;
    r = lower;
  }
  return r;
}

double double_from_rational_up(const Rational& q) {
  double d = q.get_d();
  while (Rational(d) < q) d = std::nextafter(d, std::numeric_limits<double>::infinity());
  return d;
}

}  // namespace

BoundReport bound_constant(std::size_t m, unsigned k, NodeFamily family) {
  if (m < 1) throw Error(Errc::invalid_argument, "bound_constant needs m >= 1");

  BoundReport rep;
  rep.m = m;
  rep.k = k;
  rep.method = Method::interpolation;
  rep.nodes = family;
  rep.node_values = interpolation_nodes(k, family);

  const auto sums = row_sums(inverse_vandermonde(rep.node_values));
  rep.lambda = *std::max_element(sums.begin(), sums.end());

  if (k == 0) {
    rep.r_exact = 1;
    rep.r = 1.0;
    rep.r1_raw = 1.0;
  } else {
    // 1-D constants for every degree up to k; R_1 is their running maximum.
    double r1 = 0;
    for (unsigned j = 1; j <= k; ++j) {
      const auto sj = row_sums(inverse_vandermonde(interpolation_nodes(j, family)));
      const Rational lj = *std::max_element(sj.begin(), sj.end());
      const double raw = round_up_root(std::pow(lj.get_d(), 1.0 / j), j, lj);
      if (j == k) rep.r1_raw = raw;
      if (raw < r1) rep.running_max_applied = true;
      r1 = std::max(r1, raw);
    }
    const Rational target = rational_pow(rep.lambda, static_cast<unsigned>(m));
    rep.r = round_up_root(std::max(1.0, std::pow(r1, static_cast<double>(m))), k, target);
    rep.r = std::max(rep.r, std::pow(r1, static_cast<double>(m)));
    rep.r_exact = Rational(rep.r);
  }

  std::ostringstream comp;
  comp << "c_alpha = sum over the (k+1)^m tensor node grid of prod_i W[alpha_i][node_i] p(node), "
          "W = inverse Vandermonde; |c_alpha| <= prod_i rowsum(W, alpha_i) * max_grid|p| <= lambda^m * "
          "max_grid|p| <= R^k * max_grid|p| with R = R_1^m, R_1 = running max over degrees j <= k of lambda_j^(1/j)";
  rep.composition = comp.str();

  std::ostringstream grid;
  grid << "(" << k + 1 << ")^" << m << " tensor grid of " << node_family_name(family) << " nodes on [-1,1]";
  rep.sample_grid = grid.str();

  // Every coefficient functional is bounded by R^k on the node grid.
  const Rational rk = rational_pow(rep.r_exact, k);
  bool ok = true;
  for (const MultiIndex& alpha : indices_up_to(m, k)) {
    Rational prod(1);
    for (std::size_t i = 0; i < m; ++i) prod *= sums[alpha[i]];
    if (prod > rk) ok = false;
  }
  rep.verified = ok && rep.r >= 1.0;
  return rep;
}

namespace {

std::vector<double> grid_axis(double eps, std::size_t g) {
  std::vector<double> xs(g);
  for (std::size_t i = 0; i < g; ++i)
    xs[i] = g == 1 ? 0.0 : -eps + 2.0 * eps * static_cast<double>(i) / static_cast<double>(g - 1);
  return xs;
}

/// Values of a dense coefficient tensor on the product grid, by contracting
/// one axis at a time.
std::vector<double> tensor_grid_values(const RealPoly& p, const std::vector<double>& xs) {
  const std::size_t m = p.m;
  const std::size_t d = p.degree + 1;
  const std::size_t g = xs.size();

  // pt[a * g + i] = xs[i]^a
  std::vector<double> pt(d * g);
  for (std::size_t i = 0; i < g; ++i) {
    double v = 1.0;
    for (std::size_t a = 0; a < d; ++a) {
      pt[a * g + i] = v;
      v *= xs[i];
    }
  }

  std::size_t total = 1;
  for (std::size_t i = 0; i < m; ++i) total *= d;
  std::vector<double> cur(total, 0.0);
  for (const auto& [e, c] : p.values) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < m; ++i) idx = idx * d + e[i];
    cur[idx] = c;
  }

  // Shape (d_0, rest...) -> (rest..., g)
  std::size_t rest = total / d;
  std::size_t lead = d;
  for (std::size_t step = 0; step < m; ++step) {
    std::vector<double> next(rest * g, 0.0);
    for (std::size_t a = 0; a < lead; ++a) {
      const double* row = &pt[a * g];
      for (std::size_t r = 0; r < rest; ++r) {
        const double c = cur[a * rest + r];
        if (c == 0.0) continue;
        double* out = &next[r * g];
        for (std::size_t i = 0; i < g; ++i) out[i] += c * row[i];
      }
    }
    cur = std::move(next);
    // Next axis to contract is the leading one of the remaining shape.
    if (step + 1 < m) {
      lead = d;
      rest = cur.size() / d;
    }
  }
  return cur;
}

Rational eval_exact(const RealPoly& p, const std::vector<Rational>& point) {
  Rational sum(0);
  for (const auto& [e, c] : p.exact) {
    Rational term = c;
    for (std::size_t i = 0; i < p.m; ++i)
      for (unsigned r = 0; r < e[i]; ++r) term *= point[i];
    sum += term;
  }
  return sum;
}

}  // namespace

Verification verify_bound(const RealPoly& p, const BoundReport& report, std::size_t grid_density) {
  if (p.m != report.m) throw Error(Errc::dimension_mismatch, "polynomial dimension differs from report");
  if (p.degree > report.k) throw Error(Errc::dimension_mismatch, "polynomial degree exceeds report degree");
  if (grid_density < 1) throw Error(Errc::invalid_argument, "grid density must be positive");

  Verification v;
  v.grid_points_per_axis = grid_density;
  const Rational rk = rational_pow(report.r_exact, report.k);

  if (p.mode == Mode::exact) {
    Rational max_c(0);
    for (const auto& [e, c] : p.exact) max_c = std::max(max_c, Rational(abs(c)));
    std::vector<Rational> axis;
    for (std::size_t i = 0; i < grid_density; ++i)
      axis.push_back(grid_density == 1 ? Rational(0)
                                       : report.eps * (Rational(-1) + Rational(2 * i) / Rational(grid_density - 1)));
    Rational sup(0);
    std::vector<std::size_t> idx(p.m, 0);
    std::vector<Rational> point(p.m);
    while (true) {
      for (std::size_t i = 0; i < p.m; ++i) point[i] = axis[idx[i]];
      sup = std::max(sup, Rational(abs(eval_exact(p, point))));
      std::size_t i = 0;
      while (i < p.m && ++idx[i] == grid_density) idx[i++] = 0;
      if (i == p.m) break;
    }
    v.exact_margin = rk * sup - max_c;
    v.margin = v.exact_margin.get_d();
    v.sup = sup.get_d();
    v.max_coefficient = max_c.get_d();
    v.pass = v.exact_margin >= 0;
    return v;
  }

  RealPoly dense = p;
  dense.degree = report.k;
  const auto values = tensor_grid_values(dense, grid_axis(report.eps.get_d(), grid_density));
  double sup = 0;
  for (double x : values) sup = std::max(sup, std::abs(x));
  v.sup = sup;
  v.max_coefficient = p.max_abs_coefficient();
  v.margin = rk.get_d() * sup - v.max_coefficient;
  v.pass = v.margin >= 0;
  return v;
}

ChebyshevWitness chebyshev_witness(unsigned k) {
  if (k < 1) throw Error(Errc::invalid_argument, "Chebyshev witness needs k >= 1");
  std::vector<Integer> prev{1};      // T_0
  std::vector<Integer> cur{0, 1};    // T_1
  for (unsigned j = 1; j < k; ++j) {
    std::vector<Integer> next(cur.size() + 1, 0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += 2 * cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }

  ChebyshevWitness w;
  w.poly.m = 1;
  w.poly.degree = k;
  w.poly.mode = Mode::exact;
  w.max_coefficient = 0;
  for (std::size_t i = 0; i < cur.size(); ++i) {
    if (cur[i] == 0) continue;
    w.poly.exact.emplace(MultiIndex{static_cast<unsigned>(i)}, Rational(cur[i]));
    Integer a = abs(cur[i]);
    if (a > w.max_coefficient) w.max_coefficient = a;
  }
  w.lower_bound = std::pow(w.max_coefficient.get_d(), 1.0 / k);
  return w;
}

bool respects_witness(const BoundReport& report, const ChebyshevWitness& witness) {
  if (report.m != 1 || report.k != witness.poly.degree) return false;
  return rational_pow(report.r_exact, report.k) >= Rational(witness.max_coefficient);
}

BoundReport rescale_bound(const BoundReport& report, double eps) {
  if (!(eps > 0) || !std::isfinite(eps)) throw Error(Errc::nonpositive_eps, "eps must be positive");
  return rescale_bound(report, Rational(eps));
}

BoundReport rescale_bound(const BoundReport& report, const Rational& eps) {
  if (eps <= 0) throw Error(Errc::nonpositive_eps, "eps must be positive");
  BoundReport out = report;
  // Relative to the report's own box.
  const Rational factor = report.eps / (report.eps * eps);
  out.eps = report.eps * eps;
  out.r_exact = factor > 1 ? Rational(report.r_exact * factor) : report.r_exact;
  out.r = double_from_rational_up(out.r_exact);
  std::ostringstream grid;
  grid << report.sample_grid << ", rescaled to |t_j| <= " << out.eps.get_d();
  out.sample_grid = grid.str();
  return out;
}

RealPoly random_poly(std::size_t m, unsigned k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  RealPoly p;
  p.m = m;
  p.degree = k;
  p.mode = Mode::floating;
  for (const MultiIndex& alpha : indices_up_to(m, k)) p.values.emplace(alpha, coeff(rng));
  return p;
}

}  // namespace involute::bounds
