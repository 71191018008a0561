#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "involute/rational.hpp"
#include "involute/series.hpp"

namespace involute::geometry {

/// One chart of the real blow-up of R^n in C^n. `direction` (1-based)
/// names the real basis direction carried by the chart's z coordinate; the
/// remaining m = n - 1 directions carry (s, t) in increasing order.
struct Chart {
  std::size_t n = 1;
  std::size_t direction = 1;

  std::size_t m() const noexcept { return n - 1; }
};

Chart make_chart(std::size_t n, std::size_t direction);

/// (z, s, t) coordinates on a chart. The exceptional hypersurface is
/// {Im z = 0} in every chart.
template <class Real>
struct ChartPoint {
  Complex<Real> z;
  std::vector<Real> s;
  std::vector<Real> t;
};

using ExactChartPoint = ChartPoint<Rational>;

template <class Real>
using CVector = std::vector<Complex<Real>>;

/// (z, s + z t), with z placed in the chart's direction slot.
template <class Real>
CVector<Real> blow_down(const Chart& chart, const ChartPoint<Real>& p);

/// The point of chart `to` with the same blow-down image as `p`; on the
/// exceptional hypersurface it carries the same normal direction. Throws
/// OutsideChart when the target direction's projective coordinate is zero.
template <class Real>
ChartPoint<Real> chart_transition(const Chart& from, const Chart& to, const ChartPoint<Real>& p);

// ---------------------------------------------------------------------------
// Involutive frame

/// First-order operator sum_v components[v] * d/d(variables[v]) with
/// polynomial coefficients, over the chart variables (z, zbar, s, t).
struct VectorField {
  Variables variables;
  std::vector<Series> components;
};

/// index 0 -> d/dzbar; index j >= 1 -> d/dt_j - z d/ds_j.
VectorField frame_field(std::size_t n, std::size_t index);
std::vector<VectorField> frame(std::size_t n);

/// Applies the operator to a chart series. Coefficients are re-truncated
/// to f's truncation; the mode follows f.
Series apply_field(const VectorField& field, const Series& f);

/// [X, Y] as a vector field: component v is X(Y^v) - Y(X^v).
VectorField commutator(const VectorField& x, const VectorField& y);

struct CommutatorResidual {
  std::size_t first = 0;
  std::size_t second = 0;
  /// [L_first, L_second] applied to each coordinate function.
  std::vector<Series> residuals;

  bool vanishes() const;
};

/// All pairwise commutators of the frame for ambient dimension n.
std::vector<CommutatorResidual> check_involutivity(std::size_t n);

/// dim(V cap conj(V)) at p, by exact elimination.
std::size_t rank_v_cap_vbar(const ExactChartPoint& p);

/// Float variant: ranks use singular values above `relative_threshold`
/// times the largest one.
std::size_t rank_v_cap_vbar(const ChartPoint<double>& p, double relative_threshold = 1e-10);

// ---------------------------------------------------------------------------
// Flag correspondence

/// (L, P): a complex line in C^{n+1} given by a generator and a real
/// 2-plane in R^{n+1} given by two spanning vectors.
template <class Real>
struct FlagPoint {
  CVector<Real> line;
  std::array<std::vector<Real>, 2> plane;
};

/// L = span{[1, z, s + z t]}, P = span{[1, 0, s], [0, 1, t]}.
template <class Real>
FlagPoint<Real> flag_lift(const ChartPoint<Real>& p);

/// Dehomogenizes the generator of L. Throws AtInfinity when its first
/// coordinate vanishes.
template <class Real>
CVector<Real> mu_projection(const FlagPoint<Real>& fp);

/// L subset P + iP: real and imaginary parts of the generator lie in P.
bool line_in_plane(const FlagPoint<Rational>& fp);

/// For a line not defined over the reals, the unique plane containing it
/// is span{Re g, Im g}; nullopt for real lines.
std::optional<std::array<std::vector<Rational>, 2>> plane_from_line(const CVector<Rational>& generator);

bool same_plane(const std::array<std::vector<Rational>, 2>& a, const std::array<std::vector<Rational>, 2>& b);

/// Rank of a list of exact complex vectors.
std::size_t exact_rank(std::vector<CVector<Rational>> rows);

}  // namespace involute::geometry
