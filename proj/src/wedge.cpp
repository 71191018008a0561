#include "involute/wedge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "involute/solution.hpp"

namespace involute::wedge {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

double dot(const RPoint& a, const RPoint& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const RPoint& a) { return std::sqrt(dot(a, a)); }

RPoint scaled(const RPoint& a, double k) {
  RPoint out(a);
  for (double& x : out) x *= k;
  return out;
}

RPoint negated(const RPoint& a) { return scaled(a, -1.0); }

std::string describe(const RPoint& p) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

Callable evaluator(const SampledFunction& f) {
  if (!f.analytic()) return f.callable;
  Series g = to_floating(*f.germ);
  return [g = std::move(g)](std::span<const cd> z) {
    std::vector<Coefficient> point(z.begin(), z.end());
    return eval(g, point).floating();
  };
}

/// Quadratic extrapolation to eps = 0 through the last three samples.
cd richardson(const std::vector<double>& eps, const std::vector<cd>& v) {
  const std::size_t n = eps.size();
  const double a = eps[n - 3], b = eps[n - 2], c = eps[n - 1];
  const double la = b * c / ((a - b) * (a - c));
  const double lb = a * c / ((b - a) * (b - c));
  const double lc = a * b / ((c - a) * (c - b));
  return la * v[n - 3] + lb * v[n - 2] + lc * v[n - 1];
}

/// Limit of g(eps) along eps_l, with the divergence test shared by every
/// boundary computation. `where` names the point in error messages.
cd limit_along(const std::function<cd(double)>& g, const std::vector<double>& eps, double tolerance,
               std::vector<double>* increments, const std::string& where) {
  std::vector<cd> v;
  for (double e : eps) {
    cd value = g(e);
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
      throw Error(Errc::limit_diverged, "non-finite value at " + where);
    v.push_back(value);
  }
  std::vector<double> d(eps.size(), 0.0);
  for (std::size_t l = 1; l < v.size(); ++l) d[l] = std::abs(v[l] - v[l - 1]);
  const std::size_t last = v.size() - 1;
  if (d[last] > tolerance && d[last] > 0.75 * d[last - 1])
    throw Error(Errc::limit_diverged, "increments do not contract at " + where);
  if (increments)
    for (std::size_t l = 0; l < d.size(); ++l) (*increments)[l] = std::max((*increments)[l], d[l]);
  return richardson(eps, v);
}

std::vector<double> geometric_eps(double first, const BoundaryOptions& options) {
  if (options.levels < 3) throw Error(Errc::invalid_argument, "need at least three epsilon levels");
  if (!(options.ratio > 0 && options.ratio < 1)) throw Error(Errc::invalid_argument, "epsilon ratio must be in (0, 1)");
  std::vector<double> eps;
  for (unsigned l = 0; l < options.levels; ++l) eps.push_back(first * std::pow(options.ratio, l));
  return eps;
}

/// Uniform point of the open ball of the given dimension and radius.
RPoint ball_point(std::size_t dim, double radius, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RPoint p(dim);
  for (double& x : p) x = gauss(rng);
  const double len = norm2(p);
  const double r = radius * std::pow(unit(rng), 1.0 / static_cast<double>(dim));
  return scaled(p, r / len);
}

struct ChartSample {
  cd z;
  RPoint s, t;
};

/// Splits a ball point into (z, s, t), forcing the sign of Im z.
ChartSample split(const RPoint& p, std::size_t m, double sign) {
  ChartSample c{cd(p[0], sign * std::abs(p[1])), RPoint(m), RPoint(m)};
  for (std::size_t j = 0; j < m; ++j) {
    c.s[j] = p[2 + j];
    c.t[j] = p[2 + m + j];
  }
  return c;
}

CPoint germ_point(const ChartSample& c) {
  CPoint g{c.z};
  for (std::size_t j = 0; j < c.s.size(); ++j) g.push_back(c.s[j] + c.z * c.t[j]);
  return g;
}

cd eval_float(const Series& s, const CPoint& z) {
  std::vector<Coefficient> point;
  if (s.mode() == Mode::exact)
    for (const cd& x : z) point.emplace_back(exact_from_double(x));
  else
    point.assign(z.begin(), z.end());
  return eval(s, point).to_complex();
}

std::size_t pivot_of(const RPoint& g) {
  std::size_t p = 0;
  for (std::size_t i = 1; i < g.size(); ++i)
    if (std::abs(g[i]) > std::abs(g[p])) p = i;
  return p;
}

std::vector<std::size_t> others(std::size_t n, std::size_t pivot) {
  std::vector<std::size_t> q;
  for (std::size_t i = 0; i < n; ++i)
    if (i != pivot) q.push_back(i);
  return q;
}

}  // namespace

// ---------------------------------------------------------------------------

WedgeSpec wedge_from_json(const nlohmann::json& doc) {
  try {
    WedgeSpec w;
    w.n = doc.at("n").get<std::size_t>();
    for (const auto& iv : doc.at("edge")) {
      if (!iv.is_array() || iv.size() != 2) throw Error(Errc::parse_error, "edge intervals are [lo, hi] pairs");
      w.edge.emplace_back(iv[0].get<double>(), iv[1].get<double>());
    }
    for (const auto& g : doc.at("cone_generators")) w.generators.push_back(g.get<RPoint>());
    w.radius = doc.at("radius").get<double>();
    if (doc.contains("aperture")) w.aperture = doc.at("aperture").get<double>();
    validate(w);
    return w;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, std::string("wedge spec: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::parse_error) throw;
    throw Error(Errc::parse_error, std::string("wedge spec: ") + e.what());
  }
}

nlohmann::json wedge_to_json(const WedgeSpec& spec) {
  nlohmann::json edge = nlohmann::json::array();
  for (const auto& [lo, hi] : spec.edge) edge.push_back({lo, hi});
  return {{"n", spec.n},
          {"edge", edge},
          {"cone_generators", spec.generators},
          {"radius", spec.radius},
          {"aperture", spec.aperture}};
}

void validate(const WedgeSpec& spec) {
  if (spec.n < 1) throw Error(Errc::invalid_argument, "wedge dimension must be positive");
  if (spec.edge.size() != spec.n) throw Error(Errc::invalid_argument, "edge box needs one interval per coordinate");
  for (const auto& [lo, hi] : spec.edge)
    if (!(lo < hi)) throw Error(Errc::invalid_argument, "edge intervals must be nonempty");
  if (!(spec.radius > 0)) throw Error(Errc::invalid_argument, "localization radius must be positive");
  if (!(spec.aperture > 0 && spec.aperture < std::numbers::pi / 2))
    throw Error(Errc::invalid_argument, "aperture must lie in (0, pi/2)");
  if (spec.generators.empty()) throw Error(Errc::invalid_argument, "cone needs generators");
  for (const auto& g : spec.generators) {
    if (g.size() != spec.n) throw Error(Errc::invalid_argument, "generator has the wrong length");
    if (norm2(g) == 0) throw Error(Errc::invalid_argument, "generators must be nonzero");
    if (std::find(spec.generators.begin(), spec.generators.end(), negated(g)) == spec.generators.end())
      throw Error(Errc::invalid_argument, "cone must be symmetric; missing -" + describe(g));
  }
}

bool in_edge(const WedgeSpec& spec, const RPoint& x) {
  for (std::size_t i = 0; i < spec.n; ++i)
    if (!(x[i] > spec.edge[i].first && x[i] < spec.edge[i].second)) return false;
  return true;
}

bool in_cone(const WedgeSpec& spec, const RPoint& y) {
  const double ny = norm2(y);
  if (!(ny > 0) || !(ny < spec.radius)) return false;
  const double c = std::cos(spec.aperture);
  for (const auto& g : spec.generators)
    if (dot(y, g) > c * ny * norm2(g)) return true;
  return false;
}

bool in_wedge(const WedgeSpec& spec, const CPoint& z) {
  if (z.size() != spec.n) return false;
  RPoint x(spec.n), y(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    x[i] = z[i].real();
    y[i] = z[i].imag();
  }
  return in_edge(spec, x) && in_cone(spec, y);
}

RPoint edge_center(const WedgeSpec& spec) {
  RPoint c;
  for (const auto& [lo, hi] : spec.edge) c.push_back(0.5 * (lo + hi));
  return c;
}

std::size_t SampledFunction::n() const { return germ ? germ->arity() : arity; }

SampledFunction from_germ(Series germ) {
  if (germ.variables() != ambient_variables(germ.arity()))
    throw Error(Errc::variable_mismatch, "wedge functions are series in z1..zn");
  SampledFunction f;
  f.arity = germ.arity();
  f.germ = std::move(germ);
  return f;
}

SampledFunction from_callable(std::size_t n, Callable fn) {
  SampledFunction f;
  f.arity = n;
  f.callable = std::move(fn);
  return f;
}

SampledFunction rational_example(std::size_t n) {
  return from_callable(n, [](std::span<const cd> z) {
    cd d = 2.0;
    for (const cd& x : z) d -= x;
    return 1.0 / d;
  });
}

SampledFunction direction_dependent_example(const WedgeSpec& spec) {
  auto gens = spec.generators;
  return from_callable(spec.n, [gens](std::span<const cd> z) {
    RPoint y;
    for (const cd& x : z) y.push_back(x.imag());
    std::size_t best = 0;
    double best_cos = -2;
    for (std::size_t k = 0; k < gens.size(); ++k) {
      const double c = dot(y, gens[k]) / (norm2(y) * norm2(gens[k]));
      if (c > best_cos) {
        best_cos = c;
        best = k;
      }
    }
    return cd(static_cast<double>(best + 1), 0.0);
  });
}

std::vector<Coefficient> sample_wedge(const SampledFunction& f, const WedgeSpec& spec,
                                      const std::vector<CPoint>& points) {
  if (f.n() != spec.n) throw Error(Errc::dimension_mismatch, "function and wedge dimensions differ");
  std::vector<Coefficient> out;
  const Callable fn = f.analytic() && f.germ->mode() == Mode::floating ? evaluator(f) : f.callable;
  for (const CPoint& z : points) {
    if (!in_wedge(spec, z)) throw Error(Errc::outside_wedge, "sample point is not in E + iC");
    if (f.analytic() && f.germ->mode() == Mode::exact) {
      std::vector<Coefficient> point;
      for (const cd& x : z) point.emplace_back(exact_from_double(x));
      out.push_back(eval(*f.germ, point));
    } else {
      out.emplace_back(fn(z));
    }
  }
  return out;
}

std::complex<double> evaluate(const SampledFunction& f, const CPoint& z) { return evaluator(f)(z); }

// ---------------------------------------------------------------------------
// Boundary values

std::vector<double> eps_sequence(const RPoint& direction, const BoundaryOptions& options) {
  const double len = norm2(direction);
  if (!(len > 0)) throw Error(Errc::invalid_argument, "direction must be nonzero");
  if (!(options.eps0 > 0)) throw Error(Errc::nonpositive_eps, "eps0 must be positive");
  return geometric_eps(options.eps0 / len, options);
}

BoundaryData boundary_value(const SampledFunction& f, const WedgeSpec& spec, const RPoint& direction,
                            const std::vector<RPoint>& points, const BoundaryOptions& options) {
  validate(spec);
  if (f.n() != spec.n || direction.size() != spec.n)
    throw Error(Errc::dimension_mismatch, "function, direction and wedge dimensions differ");
  const auto eps = eps_sequence(direction, options);
  if (!in_cone(spec, scaled(direction, eps.front())))
    throw Error(Errc::outside_wedge, "direction " + describe(direction) + " is not in the cone");

  const Callable fn = evaluator(f);
  BoundaryData bd;
  bd.points = points;
  bd.directions = {direction};
  bd.eps = {eps};
  bd.increments = {std::vector<double>(eps.size(), 0.0)};
  std::vector<cd> limits;
  for (const RPoint& x : points) {
    if (!in_edge(spec, x)) throw Error(Errc::outside_wedge, "edge point " + describe(x) + " is not in E");
    auto along = [&](double e) {
      CPoint z(spec.n);
      for (std::size_t i = 0; i < spec.n; ++i) z[i] = cd(x[i], e * direction[i]);
      if (!in_wedge(spec, z)) throw Error(Errc::outside_wedge, "approach leaves the wedge at " + describe(x));
      return fn(z);
    };
    limits.push_back(limit_along(along, eps, options.tolerance, &bd.increments[0], describe(x)));
  }
  bd.values = limits;
  bd.per_direction = {limits};
  return bd;
}

std::vector<RPoint> check_directions(const WedgeSpec& spec) {
  std::vector<RPoint> dirs = spec.generators;
  std::sort(dirs.begin(), dirs.end());
  dirs.erase(std::unique(dirs.begin(), dirs.end()), dirs.end());
  std::vector<RPoint> mids;
  for (std::size_t i = 0; i < dirs.size(); ++i)
    for (std::size_t j = i + 1; j < dirs.size(); ++j) {
      RPoint mid(spec.n);
      const double a = norm2(dirs[i]), b = norm2(dirs[j]);
      for (std::size_t k = 0; k < spec.n; ++k) mid[k] = 0.5 * (dirs[i][k] / a + dirs[j][k] / b);
      const double len = norm2(mid);
      if (len < 1e-12) continue;
      mid = scaled(mid, 1.0 / len);
      if (in_cone(spec, scaled(mid, 0.5 * spec.radius))) mids.push_back(mid);
    }
  std::sort(mids.begin(), mids.end());
  mids.erase(std::unique(mids.begin(), mids.end()), mids.end());
  dirs.insert(dirs.end(), mids.begin(), mids.end());
  return dirs;
}

BoundaryData boundary_values(const SampledFunction& f, const WedgeSpec& spec, const std::vector<RPoint>& points,
                             const BoundaryOptions& options) {
  BoundaryData all;
  all.points = points;
  for (const RPoint& dir : check_directions(spec)) {
    BoundaryData one = boundary_value(f, spec, dir, points, options);
    all.directions.push_back(dir);
    all.per_direction.push_back(one.values);
    all.eps.push_back(one.eps[0]);
    all.increments.push_back(one.increments[0]);
  }
  all.values = all.per_direction.front();
  for (std::size_t d = 1; d < all.per_direction.size(); ++d)
    for (std::size_t p = 0; p < points.size(); ++p)
      all.max_direction_gap = std::max(all.max_direction_gap, std::abs(all.per_direction[d][p] - all.values[p]));
  all.direction_independent = all.max_direction_gap <= options.tolerance;
  if (!all.direction_independent) {
    std::ostringstream os;
    os << "boundary limits differ by " << all.max_direction_gap << " across directions";
    throw Error(Errc::direction_mismatch, os.str());
  }
  return all;
}

std::vector<RPoint> edge_grid(const WedgeSpec& spec, std::size_t per_axis) {
  if (per_axis < 1) throw Error(Errc::invalid_argument, "edge grid needs at least one point per axis");
  std::vector<RPoint> out;
  std::vector<std::size_t> idx(spec.n, 0);
  while (true) {
    RPoint x(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
      const auto [lo, hi] = spec.edge[i];
      x[i] = lo + (hi - lo) * static_cast<double>(idx[i] + 1) / static_cast<double>(per_axis + 1);
    }
    out.push_back(std::move(x));
    std::size_t i = 0;
    while (i < spec.n && ++idx[i] == per_axis) idx[i++] = 0;
    if (i == spec.n) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Weak identity

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(unsigned order) {
  if (order < 1) throw Error(Errc::invalid_argument, "quadrature order must be positive");
  std::vector<double> x(order), w(order);
  for (unsigned i = 0; i < order; ++i) {
    double r = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = r;
      for (unsigned k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1) * r * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (r * p1 - p0) / (r * r - 1);
      const double step = p1 / dp;
      r -= step;
      if (std::abs(step) < 1e-16) break;
    }
    x[order - 1 - i] = r;
    w[order - 1 - i] = 2.0 / ((1 - r * r) * dp * dp);
  }
  return {x, w};
}

double weak_cr_residual(const Fn1& fplus, const Fn1& fminus, const EdgeFn& f0plus, const EdgeFn& f0minus,
                        const Bump& bump, unsigned order) {
  if (!(bump.rho > 0)) throw Error(Errc::invalid_argument, "bump radius must be positive");
  const auto [xs, ws] = gauss_legendre(order);
  const double rho = bump.rho, c = bump.center, rho2 = rho * rho;

  cd area = 0;
  for (int half : {1, -1}) {
    const Fn1& f = half > 0 ? fplus : fminus;
    for (unsigned j = 0; j < order; ++j) {
      const double y = half * 0.5 * rho * (1 + xs[j]);
      const double wy = 0.5 * rho * ws[j];
      for (unsigned i = 0; i < order; ++i) {
        const double x = c + rho * xs[i];
        const double u = ((x - c) * (x - c) + y * y) / rho2;
        if (u >= 1) continue;
        const double phi = std::exp(-1 / (1 - u));
        const double dphi = -phi / ((1 - u) * (1 - u));
        const double phix = dphi * 2 * (x - c) / rho2;
        const double phiy = dphi * 2 * y / rho2;
        area += wy * rho * ws[i] * f(cd(x, y)) * (-0.5 * cd(phix, phiy));
      }
    }
  }

  cd edge = 0;
  for (unsigned i = 0; i < order; ++i) {
    const double x = c + rho * xs[i];
    const double u = (x - c) * (x - c) / rho2;
    if (u >= 1) continue;
    edge += rho * ws[i] * (f0plus(x) - f0minus(x)) * std::exp(-1 / (1 - u));
  }
  return std::abs(area - 0.5 * I * edge);
}

WeakCrStudy weak_cr_study(const Fn1& fplus, const Fn1& fminus, const EdgeFn& f0plus, const EdgeFn& f0minus,
                          const Bump& bump, const std::vector<unsigned>& orders) {
  if (orders.size() < 2) throw Error(Errc::invalid_argument, "need at least two quadrature orders");
  constexpr double floor = 1e-12;
  constexpr double resolved = 1e-10;
  WeakCrStudy study;
  study.orders = orders;
  for (unsigned q : orders) study.residuals.push_back(weak_cr_residual(fplus, fminus, f0plus, f0minus, bump, q));
  study.observed_order = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < orders.size(); ++i) {
    const double a = study.residuals[i], b = study.residuals[i + 1];
    if (b <= floor) continue;
    if (b >= a && b > resolved) {
      std::ostringstream os;
      os << "residual " << b << " at order " << orders[i + 1] << " did not improve on " << a;
      throw Error(Errc::quadrature_under_resolved, os.str());
    }
    const double rate = std::log(a / b) / std::log(static_cast<double>(orders[i + 1]) / orders[i]);
    study.observed_order = std::min(study.observed_order, rate);
  }
  return study;
}

// ---------------------------------------------------------------------------
// Charts

CPoint WedgeChart::blow_down(cd z, const RPoint& s, const RPoint& t) const {
  CPoint g{z};
  for (std::size_t j = 0; j < s.size(); ++j) g.push_back(s[j] + z * t[j]);
  return from_germ(g);
}

CPoint WedgeChart::to_germ(const CPoint& ambient) const {
  const cd z = (ambient[pivot] - center[pivot]) / direction[pivot];
  CPoint g{z};
  for (std::size_t q : others(n(), pivot)) g.push_back(ambient[q] - center[q] - direction[q] * z);
  return g;
}

CPoint WedgeChart::from_germ(const CPoint& germ) const {
  CPoint out(n());
  for (std::size_t i = 0; i < n(); ++i) out[i] = center[i] + germ[0] * direction[i];
  const auto q = others(n(), pivot);
  for (std::size_t j = 0; j < q.size(); ++j) out[q[j]] += germ[1 + j];
  return out;
}

double max_ball_radius(const WedgeSpec& spec, const RPoint& center, const RPoint& direction) {
  const double g = norm2(direction);
  double ginf = 0;
  for (double x : direction) ginf = std::max(ginf, std::abs(x));
  // Positive root of r^2 + b r - c.
  auto root = [](double b, double c) { return c <= 0 ? 0.0 : 0.5 * (-b + std::sqrt(b * b + 4 * c)); };

  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < spec.n; ++i)
    margin = std::min({margin, center[i] - spec.edge[i].first, spec.edge[i].second - center[i]});

  const double cone = g * std::sin(spec.aperture);
  const double height = root(g, spec.radius);
  const double real = root(ginf + 1, margin);
  return std::min({cone, height, real});
}

WedgeChart make_wedge_chart(const WedgeSpec& spec, const RPoint& center, const RPoint& direction,
                            double ball_radius) {
  validate(spec);
  if (center.size() != spec.n || direction.size() != spec.n)
    throw Error(Errc::dimension_mismatch, "chart center and direction need n coordinates");
  if (!in_edge(spec, center)) throw Error(Errc::outside_wedge, "chart center is not in E");
  if (!in_cone(spec, scaled(direction, 0.5 * spec.radius / norm2(direction))))
    throw Error(Errc::outside_wedge, "chart direction is not in the cone");
  if (!(ball_radius > 0)) throw Error(Errc::invalid_argument, "ball radius must be positive");
  const double limit = max_ball_radius(spec, center, direction);
  if (!(ball_radius < limit)) {
    std::ostringstream os;
    os << "ball radius " << ball_radius << " exceeds the admissible " << limit;
    throw Error(Errc::ball_too_large, os.str());
  }
  return {center, direction, pivot_of(direction), ball_radius};
}

Series ambient_to_chart_germ(const Series& ambient, const WedgeChart& chart) {
  const std::size_t n = chart.n();
  if (ambient.variables() != ambient_variables(n))
    throw Error(Errc::variable_mismatch, "expected a series in z1..zn");
  const Mode mode = ambient.mode();
  std::vector<Coefficient> offset;
  std::vector<std::vector<Coefficient>> matrix(n, std::vector<Coefficient>(n, Coefficient::zero(mode)));
  const auto q = others(n, chart.pivot);
  for (std::size_t i = 0; i < n; ++i) {
    offset.push_back(Coefficient::from_rational(Rational(chart.center[i]), mode));
    matrix[i][0] = Coefficient::from_rational(Rational(chart.direction[i]), mode);
  }
  for (std::size_t j = 0; j < q.size(); ++j) matrix[q[j]][1 + j] = Coefficient::from_integer(1, mode);
  return substitute_affine(ambient, germ_variables(n - 1), offset, matrix, ambient.truncation());
}

Series chart_to_ambient_germ(const Series& germ, const WedgeChart& chart, unsigned truncation) {
  const std::size_t n = chart.n();
  if (germ.variables() != germ_variables(n - 1)) throw Error(Errc::variable_mismatch, "expected a germ in (z, w)");
  const Mode mode = germ.mode();
  const std::size_t p = chart.pivot;
  const Rational gp(chart.direction[p]);
  const Rational cp(chart.center[p]);
  std::vector<Coefficient> offset;
  std::vector<std::vector<Coefficient>> matrix(n, std::vector<Coefficient>(n, Coefficient::zero(mode)));
  offset.push_back(Coefficient::from_rational(-cp / gp, mode));
  matrix[0][p] = Coefficient::from_rational(1 / gp, mode);
  const auto q = others(n, p);
  for (std::size_t j = 0; j < q.size(); ++j) {
    const Rational gq(chart.direction[q[j]]);
    const Rational cq(chart.center[q[j]]);
    offset.push_back(Coefficient::from_rational(-cq + gq * cp / gp, mode));
    matrix[1 + j][q[j]] = Coefficient::from_integer(1, mode);
    matrix[1 + j][p] = Coefficient::from_rational(-gq / gp, mode);
  }
  return substitute_affine(germ, ambient_variables(n), offset, matrix, truncation);
}

ChartData lift_to_blowup(const SampledFunction& f, const WedgeSpec& spec, const WedgeChart& chart,
                         const LiftOptions& options) {
  if (f.n() != spec.n || chart.n() != spec.n) throw Error(Errc::dimension_mismatch, "dimensions differ");
  make_wedge_chart(spec, chart.center, chart.direction, chart.ball_radius);

  ChartData data;
  data.chart = chart;
  const Callable fn = evaluator(f);
  data.plus_fn = [fn, chart](cd z, const RPoint& s, const RPoint& t) { return fn(chart.blow_down(z, s, t)); };
  data.minus_fn = data.plus_fn;

  if (f.analytic()) {
    const Series h = to_exact(*f.germ);
    const Series chart_series = solution::pullback(ambient_to_chart_germ(h, chart), 2 * h.truncation());
    data.plus = chart_series;
    data.minus = chart_series;
    return data;
  }

  const std::size_t m = spec.n - 1;
  std::mt19937_64 rng(options.seed);
  for (double sign : {1.0, -1.0}) {
    auto& pts = sign > 0 ? data.plus_points : data.minus_points;
    auto& vals = sign > 0 ? data.plus_values : data.minus_values;
    while (pts.size() < options.samples) {
      const ChartSample c = split(ball_point(2 + 2 * m, 0.95 * chart.ball_radius, rng), m, sign);
      if (c.z.imag() == 0) continue;
      const CPoint ambient = chart.blow_down(c.z, c.s, c.t);
      if (!in_wedge(spec, ambient)) throw Error(Errc::ball_too_large, "half-ball point blows down outside the wedge");
      pts.push_back(germ_point(c));
      vals.push_back(fn(ambient));
    }
  }
  return data;
}

Extension edge_extend(const ChartData& data, const ExtendOptions& options) {
  Extension ext;
  if (data.plus || data.minus) {
    if (!data.plus || !data.minus) throw Error(Errc::invalid_argument, "analytic lift needs both half-ball series");
    if (!(*data.plus == *data.minus))
      throw Error(Errc::boundary_mismatch, "the two half-ball series differ, so their edge values differ");
    ext.germ = solution::hypocomplex_reconstruct(*data.plus);
    return ext;
  }

  const std::size_t n = data.chart.n();
  const std::size_t m = n - 1;
  const double r = data.chart.ball_radius;
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  // One-sided edge limits must agree.
  BoundaryOptions bopt;
  bopt.eps0 = 0.05 * r;
  bopt.tolerance = options.tolerance;
  const auto eps = geometric_eps(bopt.eps0, bopt);
  for (int k = 0; k < 20; ++k) {
    const double x = 0.5 * r * unit(rng);
    const RPoint st = ball_point(2 * m, 0.3 * r, rng);
    const RPoint s(st.begin(), st.begin() + static_cast<std::ptrdiff_t>(m));
    const RPoint t(st.begin() + static_cast<std::ptrdiff_t>(m), st.end());
    const std::string where = "chart edge point x = " + std::to_string(x);
    const cd above = limit_along([&](double e) { return data.plus_fn(cd(x, e), s, t); }, eps, options.tolerance,
                                 nullptr, where);
    const cd below = limit_along([&](double e) { return data.minus_fn(cd(x, -e), s, t); }, eps, options.tolerance,
                                 nullptr, where);
    if (std::abs(above - below) > options.tolerance * std::max(1.0, std::abs(above))) {
      std::ostringstream os;
      os << "edge limits from the two sides differ by " << std::abs(above - below);
      throw Error(Errc::boundary_mismatch, os.str());
    }
  }

  const auto basis = indices_up_to(n, options.fit_degree);
  ext.unknowns = basis.size();
  ext.samples = data.plus_points.size() + data.minus_points.size();
  if (ext.samples < ext.unknowns) {
    std::ostringstream os;
    os << ext.samples << " samples for " << ext.unknowns << " unknowns";
    throw Error(Errc::fit_underdetermined, os.str());
  }

  Eigen::MatrixXcd a(ext.samples, ext.unknowns);
  Eigen::VectorXcd rhs(ext.samples);
  std::vector<std::vector<cd>> powers(n, std::vector<cd>(options.fit_degree + 1));
  std::size_t row = 0;
  auto fill = [&](const std::vector<CPoint>& pts, const std::vector<cd>& vals) {
    for (std::size_t k = 0; k < pts.size(); ++k, ++row) {
      for (std::size_t v = 0; v < n; ++v) {
        powers[v][0] = 1;
        for (unsigned d = 1; d <= options.fit_degree; ++d) powers[v][d] = powers[v][d - 1] * (pts[k][v] / r);
      }
      for (std::size_t c = 0; c < basis.size(); ++c) {
        cd mono = 1;
        for (std::size_t v = 0; v < n; ++v) mono *= powers[v][basis[c][v]];
        a(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c)) = mono;
      }
      rhs(static_cast<Eigen::Index>(row)) = vals[k];
    }
  };
  fill(data.plus_points, data.plus_values);
  fill(data.minus_points, data.minus_values);
  const Eigen::VectorXcd sol = a.colPivHouseholderQr().solve(rhs);

  Series::Builder b(germ_variables(m), options.fit_degree, Mode::floating);
  for (std::size_t c = 0; c < basis.size(); ++c)
    b.add(basis[c], Coefficient(sol(static_cast<Eigen::Index>(c)) / std::pow(r, basis[c].degree())));
  ext.germ = std::move(b).build();

  double err = 0;
  std::uniform_real_distribution<double> height(1e-3, 1e-2);
  for (std::size_t k = 0; k < options.holdout; ++k) {
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    RPoint p = ball_point(2 + 2 * m, 0.9 * r, rng);
    p[1] = height(rng) * r;
    const ChartSample c = split(p, m, sign);
    const cd truth = sign > 0 ? data.plus_fn(c.z, c.s, c.t) : data.minus_fn(c.z, c.s, c.t);
    err = std::max(err, std::abs(eval_float(ext.germ, germ_point(c)) - truth));
  }
  ext.holdout_error = err;
  return ext;
}

// ---------------------------------------------------------------------------

DemoReport full_eowt_demo(const WedgeSpec& spec, const SampledFunction& f, const DemoOptions& options) {
  validate(spec);
  if (f.n() != spec.n) throw Error(Errc::dimension_mismatch, "function and wedge dimensions differ");

  DemoReport report;
  const RPoint x0 = edge_center(spec);
  report.boundary = boundary_values(f, spec, edge_grid(spec, options.edge_points_per_axis), options.boundary);
  report.directions = report.boundary.directions;

  std::vector<RPoint> reps;
  for (const RPoint& g : spec.generators) reps.push_back(std::max(g, negated(g)));
  std::sort(reps.begin(), reps.end());
  reps.erase(std::unique(reps.begin(), reps.end()), reps.end());

  const std::size_t m = spec.n - 1;
  const RPoint zeros(m, 0.0);
  std::vector<WedgeChart> charts;
  for (const RPoint& g : reps) {
    const double r = std::min(options.max_chart_radius, 0.9 * max_ball_radius(spec, x0, g));
    const WedgeChart chart = make_wedge_chart(spec, x0, g, r);
    const ChartData data = lift_to_blowup(f, spec, chart, options.lift);
    const Extension ext = edge_extend(data, options.extend);

    ChartResult res;
    res.direction = g;
    res.ball_radius = r;
    res.chart_germ = ext.germ;
    res.holdout_error = ext.holdout_error;
    if (f.analytic()) {
      res.ambient_germ = chart_to_ambient_germ(ext.germ, chart, f.germ->truncation());
      if (f.germ->mode() == Mode::floating) res.ambient_germ = to_floating(res.ambient_germ);
    } else {
      res.ambient_germ = chart_to_ambient_germ(ext.germ, chart, options.extend.fit_degree);
    }

    // Weak identity on the complex line of the chart direction.
    const auto eps = geometric_eps(std::min(options.boundary.eps0, 0.05 * r), options.boundary);
    auto fplus = [&](cd z) { return data.plus_fn(z, zeros, zeros); };
    auto fminus = [&](cd z) { return data.minus_fn(z, zeros, zeros); };
    auto f0plus = [&](double x) {
      return limit_along([&](double e) { return fplus(cd(x, e)); }, eps, options.boundary.tolerance, nullptr,
                         "chart line");
    };
    auto f0minus = [&](double x) {
      return limit_along([&](double e) { return fminus(cd(x, -e)); }, eps, options.boundary.tolerance, nullptr,
                         "chart line");
    };
    res.weak_cr_residual = weak_cr_residual(fplus, fminus, f0plus, f0minus, Bump{0.0, 0.9 * r},
                                            options.quadrature_order);
    report.charts.push_back(std::move(res));
    charts.push_back(chart);
  }

  // Shared test points near the chart centers.
  double rmin = std::numeric_limits<double>::infinity();
  for (const auto& c : report.charts) rmin = std::min(rmin, c.ball_radius);
  std::mt19937_64 rng(options.lift.seed + 1);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double delta = 0.25 * rmin / static_cast<double>(spec.n);
  for (std::size_t k = 0; k < options.overlap_points && report.charts.size() > 1; ++k) {
    CPoint z(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) z[i] = x0[i] + delta * cd(unit(rng), unit(rng));
    std::vector<cd> values;
    for (std::size_t c = 0; c < charts.size(); ++c)
      values.push_back(f.analytic() ? eval_float(report.charts[c].ambient_germ, z)
                                    : eval_float(report.charts[c].chart_germ, charts[c].to_germ(z)));
    for (std::size_t a = 0; a < values.size(); ++a)
      for (std::size_t b = a + 1; b < values.size(); ++b)
        report.overlap_max_disagreement = std::max(report.overlap_max_disagreement, std::abs(values[a] - values[b]));
  }
  if (report.overlap_max_disagreement > options.glue_tolerance) {
    std::ostringstream os;
    os << "chart extensions disagree by " << report.overlap_max_disagreement;
    throw Error(Errc::overlap_disagreement, os.str());
  }
  return report;
}

}  // namespace involute::wedge
