#include "involute/geometry.hpp"

#include <Eigen/Dense>

namespace involute::geometry {

Chart make_chart(std::size_t n, std::size_t direction) {
  if (n < 1) throw Error(Errc::invalid_argument, "chart dimension must be at least 1");
  if (direction < 1 || direction > n)
    throw Error(Errc::invalid_argument, "chart direction " + std::to_string(direction) + " out of range 1.." +
                                            std::to_string(n));
  return Chart{n, direction};
}

namespace {

void check_point(const Chart& chart, std::size_t s_size, std::size_t t_size) {
  if (chart.n < 1 || chart.direction < 1 || chart.direction > chart.n)
    throw Error(Errc::invalid_argument, "invalid chart");
  if (s_size != chart.m() || t_size != chart.m())
    throw Error(Errc::dimension_mismatch, "chart point has the wrong number of (s, t) coordinates");
}

/// Ambient slots other than the chart direction, in increasing order.
std::vector<std::size_t> side_slots(const Chart& chart) {
  std::vector<std::size_t> slots;
  for (std::size_t k = 0; k < chart.n; ++k)
    if (k + 1 != chart.direction) slots.push_back(k);
  return slots;
}

}  // namespace

template <class Real>
CVector<Real> blow_down(const Chart& chart, const ChartPoint<Real>& p) {
  check_point(chart, p.s.size(), p.t.size());
  CVector<Real> out(chart.n);
  out[chart.direction - 1] = p.z;
  auto slots = side_slots(chart);
  for (std::size_t j = 0; j < slots.size(); ++j) {
    Real re = p.s[j] + p.z.re * p.t[j];
    Real im = p.z.im * p.t[j];
    out[slots[j]] = Complex<Real>(re, im);
  }
  return out;
}

template <class Real>
ChartPoint<Real> chart_transition(const Chart& from, const Chart& to, const ChartPoint<Real>& p) {
  check_point(from, p.s.size(), p.t.size());
  if (to.n != from.n) throw Error(Errc::dimension_mismatch, "charts of different dimensions");

  const std::size_t n = from.n;
  const CVector<Real> image = blow_down(from, p);

  // Normal direction of the point: Im(image) = Im z * direction.
  std::vector<Real> direction(n);
  direction[from.direction - 1] = Real(1);
  auto from_slots = side_slots(from);
  for (std::size_t j = 0; j < from_slots.size(); ++j) direction[from_slots[j]] = p.t[j];

  const std::size_t b = to.direction - 1;
  const Real vb = direction[b];
  if (vb == 0)
    throw Error(Errc::outside_chart, "normal direction has no component along target direction " +
                                         std::to_string(to.direction));

  const Real xb = image[b].re;
  ChartPoint<Real> q;
  Real imz = p.z.im * vb;
  q.z = Complex<Real>(xb, imz);
  for (std::size_t k : side_slots(to)) {
    Real tk = direction[k] / vb;
    Real sk = image[k].re - xb * tk;
    q.s.push_back(sk);
    q.t.push_back(tk);
  }
  return q;
}

template CVector<Rational> blow_down(const Chart&, const ChartPoint<Rational>&);
template CVector<double> blow_down(const Chart&, const ChartPoint<double>&);
template ChartPoint<Rational> chart_transition(const Chart&, const Chart&, const ChartPoint<Rational>&);
template ChartPoint<double> chart_transition(const Chart&, const Chart&, const ChartPoint<double>&);

// ---------------------------------------------------------------------------
// Frame

namespace {

// Coefficients are polynomials of degree <= 1; truncation 2 holds them and
// their commutator coefficients exactly.
constexpr unsigned kFrameTruncation = 2;

Series zero_chart(std::size_t m) { return Series(chart_variables(m), kFrameTruncation, Mode::exact); }

Series const_chart(std::size_t m, long c) {
  return Series::constant(chart_variables(m), kFrameTruncation, Coefficient::from_integer(c, Mode::exact));
}

}  // namespace

VectorField frame_field(std::size_t n, std::size_t index) {
  if (n < 1) throw Error(Errc::invalid_argument, "frame needs n >= 1");
  const std::size_t m = n - 1;
  if (index > m) throw Error(Errc::invalid_argument, "frame index out of range");

  VectorField f{chart_variables(m), std::vector<Series>(2 + 2 * m, zero_chart(m))};
  if (index == 0) {
    f.components[1] = const_chart(m, 1);
  } else {
    const std::size_t j = index - 1;
    f.components[2 + m + j] = const_chart(m, 1);
    f.components[2 + j] =
        neg(Series::variable(chart_variables(m), kFrameTruncation, Mode::exact, "z"));
  }
  return f;
}

std::vector<VectorField> frame(std::size_t n) {
  std::vector<VectorField> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(frame_field(n, i));
  return out;
}

Series apply_field(const VectorField& field, const Series& f) {
  if (f.variables() != field.variables)
    throw Error(Errc::variable_mismatch, "vector field and series use different variables");
  Series out(f.variables(), f.truncation(), f.mode());
  for (std::size_t v = 0; v < field.components.size(); ++v) {
    const Series& c = field.components[v];
    if (c.is_zero()) continue;
    Series coef = embed(c, f.variables(), f.truncation());
    if (f.mode() == Mode::floating) coef = to_floating(coef);
    out = add(out, mul(coef, derive(f, field.variables[v])));
  }
  return out;
}

VectorField commutator(const VectorField& x, const VectorField& y) {
  if (x.variables != y.variables) throw Error(Errc::variable_mismatch, "fields over different variables");
  VectorField out{x.variables, {}};
  for (std::size_t v = 0; v < x.components.size(); ++v)
    out.components.push_back(sub(apply_field(x, y.components[v]), apply_field(y, x.components[v])));
  return out;
}

bool CommutatorResidual::vanishes() const {
  for (const auto& r : residuals)
    if (!r.is_zero()) return false;
  return true;
}

std::vector<CommutatorResidual> check_involutivity(std::size_t n) {
  auto fields = frame(n);
  const Variables vars = chart_variables(n - 1);
  std::vector<CommutatorResidual> out;
  for (std::size_t a = 0; a < fields.size(); ++a) {
    for (std::size_t b = a + 1; b < fields.size(); ++b) {
      VectorField c = commutator(fields[a], fields[b]);
      CommutatorResidual r{a, b, {}};
      for (const auto& name : vars) {
        Series coordinate = Series::variable(vars, kFrameTruncation, Mode::exact, name);
        r.residuals.push_back(apply_field(c, coordinate));
      }
      out.push_back(std::move(r));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rank of V cap conj(V)

std::size_t exact_rank(std::vector<CVector<Rational>> rows) {
  std::size_t rank = 0;
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][c].is_zero()) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    const ExactComplex inv = rows[rank][c].inverse();
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][c].is_zero()) continue;
      const ExactComplex factor = rows[r][c] * inv;
      for (std::size_t k = c; k < cols; ++k) rows[r][k] -= factor * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

namespace {

/// Frame vectors of V (or conj V when `conjugate`) in the real coordinate
/// basis (x, y, s_1..s_m, t_1..t_m).
template <class Real>
std::vector<CVector<Real>> frame_vectors(const ChartPoint<Real>& p, bool conjugate) {
  const std::size_t m = p.s.size();
  const std::size_t dim = 2 + 2 * m;
  std::vector<CVector<Real>> rows;
  const Real one(1);
  const Real zero(0);

  CVector<Real> dzbar(dim, Complex<Real>(zero, zero));
  dzbar[0] = Complex<Real>(one, zero);
  dzbar[1] = Complex<Real>(zero, conjugate ? Real(-one) : one);
  rows.push_back(dzbar);

  const Complex<Real> z = conjugate ? p.z.conj() : p.z;
  for (std::size_t j = 0; j < m; ++j) {
    CVector<Real> l(dim, Complex<Real>(zero, zero));
    l[2 + j] = -z;
    l[2 + m + j] = Complex<Real>(one, zero);
    rows.push_back(l);
  }
  return rows;
}

std::size_t float_rank(const std::vector<CVector<double>>& rows, double relative_threshold) {
  if (rows.empty()) return 0;
  Eigen::MatrixXcd a(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) a(r, c) = to_std(rows[r][c]);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > relative_threshold * sv(0)) ++rank;
  return rank;
}

}  // namespace

std::size_t rank_v_cap_vbar(const ExactChartPoint& p) {
  if (p.s.size() != p.t.size()) throw Error(Errc::dimension_mismatch, "s and t lengths differ");
  auto v = frame_vectors(p, false);
  auto vbar = frame_vectors(p, true);
  std::vector<CVector<Rational>> both = v;
  both.insert(both.end(), vbar.begin(), vbar.end());
  return exact_rank(v) + exact_rank(vbar) - exact_rank(both);
}

std::size_t rank_v_cap_vbar(const ChartPoint<double>& p, double relative_threshold) {
  if (p.s.size() != p.t.size()) throw Error(Errc::dimension_mismatch, "s and t lengths differ");
  auto v = frame_vectors(p, false);
  auto vbar = frame_vectors(p, true);
  std::vector<CVector<double>> both = v;
  both.insert(both.end(), vbar.begin(), vbar.end());
  return float_rank(v, relative_threshold) + float_rank(vbar, relative_threshold) -
         float_rank(both, relative_threshold);
}

// ---------------------------------------------------------------------------
// Flags

template <class Real>
FlagPoint<Real> flag_lift(const ChartPoint<Real>& p) {
  const std::size_t m = p.s.size();
  if (p.t.size() != m) throw Error(Errc::dimension_mismatch, "s and t lengths differ");
  FlagPoint<Real> fp;
  fp.line.push_back(Complex<Real>(Real(1), Real(0)));
  fp.line.push_back(p.z);
  std::vector<Real> first{Real(1), Real(0)};
  std::vector<Real> second{Real(0), Real(1)};
  for (std::size_t j = 0; j < m; ++j) {
    fp.line.push_back(Complex<Real>(p.s[j] + p.z.re * p.t[j], p.z.im * p.t[j]));
    first.push_back(p.s[j]);
    second.push_back(p.t[j]);
  }
  fp.plane = {std::move(first), std::move(second)};
  return fp;
}

template <class Real>
CVector<Real> mu_projection(const FlagPoint<Real>& fp) {
  if (fp.line.empty() || fp.line.front().is_zero())
    throw Error(Errc::at_infinity, "line generator has vanishing first coordinate");
  const Complex<Real> inv = fp.line.front().inverse();
  CVector<Real> out;
  for (std::size_t i = 1; i < fp.line.size(); ++i) out.push_back(fp.line[i] * inv);
  return out;
}

template FlagPoint<Rational> flag_lift(const ChartPoint<Rational>&);
template FlagPoint<double> flag_lift(const ChartPoint<double>&);
template CVector<Rational> mu_projection(const FlagPoint<Rational>&);
template CVector<double> mu_projection(const FlagPoint<double>&);

namespace {

CVector<Rational> as_complex(const std::vector<Rational>& v) {
  CVector<Rational> out;
  for (const auto& x : v) out.emplace_back(x, Rational(0));
  return out;
}

}  // namespace

bool line_in_plane(const FlagPoint<Rational>& fp) {
  std::vector<Rational> re, im;
  for (const auto& c : fp.line) {
    re.push_back(c.re);
    im.push_back(c.im);
  }
  const auto& [p, q] = fp.plane;
  if (exact_rank({as_complex(p), as_complex(q)}) != 2) return false;
  return exact_rank({as_complex(p), as_complex(q), as_complex(re)}) == 2 &&
         exact_rank({as_complex(p), as_complex(q), as_complex(im)}) == 2;
}

std::optional<std::array<std::vector<Rational>, 2>> plane_from_line(const CVector<Rational>& generator) {
  std::vector<Rational> re, im;
  for (const auto& c : generator) {
    re.push_back(c.re);
    im.push_back(c.im);
  }
  if (exact_rank({as_complex(re), as_complex(im)}) != 2) return std::nullopt;
  return std::array<std::vector<Rational>, 2>{re, im};
}

bool same_plane(const std::array<std::vector<Rational>, 2>& a, const std::array<std::vector<Rational>, 2>& b) {
  if (exact_rank({as_complex(a[0]), as_complex(a[1])}) != 2) return false;
  if (exact_rank({as_complex(b[0]), as_complex(b[1])}) != 2) return false;
  return exact_rank({as_complex(a[0]), as_complex(a[1]), as_complex(b[0]), as_complex(b[1])}) == 2;
}

}  // namespace involute::geometry
