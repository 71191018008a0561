#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "involute/series.hpp"

namespace involute::wedge {

using CPoint = std::vector<std::complex<double>>;
using RPoint = std::vector<double>;

/// W = E + iC. The cone C is the union of open circular cones of half-angle
/// `aperture` around each generator, cut off at |Im Z| < radius.
struct WedgeSpec {
  std::size_t n = 1;
  std::vector<std::pair<double, double>> edge;
  std::vector<RPoint> generators;
  double radius = 1.0;
  double aperture = 0.5;
};

/// {n, edge, cone_generators, radius, aperture?}
WedgeSpec wedge_from_json(const nlohmann::json& doc);
nlohmann::json wedge_to_json(const WedgeSpec& spec);

/// Throws InvalidArgument unless the edge is a nonempty open box, the
/// generators are nonzero and closed under negation, and the radius and
/// aperture are positive (aperture < pi/2).
void validate(const WedgeSpec& spec);

bool in_edge(const WedgeSpec& spec, const RPoint& x);
bool in_cone(const WedgeSpec& spec, const RPoint& y);
bool in_wedge(const WedgeSpec& spec, const CPoint& z);

RPoint edge_center(const WedgeSpec& spec);

using Callable = std::function<std::complex<double>(std::span<const std::complex<double>>)>;

/// A germ polynomial in ambient variables z1..zn (analytic mode) or a
/// pointwise callable defined on the wedge (numeric mode).
struct SampledFunction {
  std::optional<Series> germ;
  Callable callable;
  /// Ambient dimension of the callable.
  std::size_t arity = 0;

  bool analytic() const noexcept { return germ.has_value(); }
  std::size_t n() const;
};

SampledFunction from_germ(Series germ);
SampledFunction from_callable(std::size_t n, Callable f);

/// 1 / (2 - z1 - ... - zn).
SampledFunction rational_example(std::size_t n);

/// Holomorphic on the wedge but with boundary values that depend on the
/// approach: the constant k + 1 on the component around generator k.
SampledFunction direction_dependent_example(const WedgeSpec& spec);

/// Values at each point; exact for an exact germ. Throws OutsideWedge.
std::vector<Coefficient> sample_wedge(const SampledFunction& f, const WedgeSpec& spec,
                                      const std::vector<CPoint>& points);

/// Pointwise double evaluation without the wedge check.
std::complex<double> evaluate(const SampledFunction& f, const CPoint& z);

struct BoundaryOptions {
  /// First epsilon is eps0 / |Y|; each level halves it.
  double eps0 = 0.01;
  double ratio = 0.5;
  unsigned levels = 6;
  double tolerance = 1e-8;
};

std::vector<double> eps_sequence(const RPoint& direction, const BoundaryOptions& options);

struct BoundaryData {
  std::vector<RPoint> points;
  /// Limits along the first direction.
  std::vector<std::complex<double>> values;
  std::vector<RPoint> directions;
  std::vector<std::vector<std::complex<double>>> per_direction;
  /// Epsilon sequence of each direction.
  std::vector<std::vector<double>> eps;
  /// max over points of |f(x + i eps_l Y) - f(x + i eps_{l-1} Y)| per level.
  std::vector<std::vector<double>> increments;
  double max_direction_gap = 0;
  bool direction_independent = true;
};

/// Richardson limit of f(x + i eps Y) as eps -> 0 at every point. Throws
/// LimitDiverged when the increments fail to contract.
BoundaryData boundary_value(const SampledFunction& f, const WedgeSpec& spec, const RPoint& direction,
                            const std::vector<RPoint>& points, const BoundaryOptions& options = {});

/// Directions used for the independence check: the generators, then the
/// normalized midpoints of generator pairs that lie in C.
std::vector<RPoint> check_directions(const WedgeSpec& spec);

/// boundary_value along every check direction; throws DirectionMismatch
/// when two limits differ by more than the tolerance.
BoundaryData boundary_values(const SampledFunction& f, const WedgeSpec& spec, const std::vector<RPoint>& points,
                             const BoundaryOptions& options = {});

/// Evenly spaced points of the edge, `per_axis` per coordinate, kept away
/// from the faces.
std::vector<RPoint> edge_grid(const WedgeSpec& spec, std::size_t per_axis);

// ---------------------------------------------------------------------------
// Weak boundary identity, one complex variable

/// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(unsigned order);

/// phi(x, y) = exp(-1 / (1 - r^2 / rho^2)) with r = |(x - center, y)|.
struct Bump {
  double center = 0;
  double rho = 0.5;
};

using Fn1 = std::function<std::complex<double>(std::complex<double>)>;
using EdgeFn = std::function<std::complex<double>(double)>;

/// |<f~, -d/dzbar phi> - (i/2) int (f0p - f0m)(x) phi(x, 0) dx| with
/// f~ = fplus on y > 0 and fminus on y < 0. The two halves are integrated
/// separately with an order x order tensor Gauss rule.
double weak_cr_residual(const Fn1& fplus, const Fn1& fminus, const EdgeFn& f0plus, const EdgeFn& f0minus,
                        const Bump& bump, unsigned order);

struct WeakCrStudy {
  std::vector<unsigned> orders;
  std::vector<double> residuals;
  /// Smallest observed rate log(r_i / r_{i+1}) / log(q_{i+1} / q_i);
  /// pairs already at round-off count as converged.
  double observed_order = 0;
};

/// Residuals over increasing quadrature orders. Throws
/// QuadratureUnderResolved when a refinement fails to reduce a residual
/// that is above round-off.
WeakCrStudy weak_cr_study(const Fn1& fplus, const Fn1& fminus, const EdgeFn& f0plus, const EdgeFn& f0minus,
                          const Bump& bump, const std::vector<unsigned>& orders);

// ---------------------------------------------------------------------------
// Charts of the blow-up placed at an edge point

/// Z = center + A (z, s + z t), A = [g, e_j for j != pivot], where the
/// pivot is the largest coordinate of g. The chart ball is
/// |z|^2 + |s|^2 + |t|^2 < ball_radius^2.
struct WedgeChart {
  RPoint center;
  RPoint direction;
  std::size_t pivot = 0;
  double ball_radius = 0;

  std::size_t n() const noexcept { return center.size(); }
  CPoint blow_down(std::complex<double> z, const RPoint& s, const RPoint& t) const;
  /// Germ coordinates (z, w) of an ambient point.
  CPoint to_germ(const CPoint& ambient) const;
  CPoint from_germ(const CPoint& germ) const;
};

/// Largest ball radius for which the containment bounds below hold:
/// arcsin(r / |g|) < aperture, r (|g| + r) < radius, and the real part
/// stays within the edge box.
double max_ball_radius(const WedgeSpec& spec, const RPoint& center, const RPoint& direction);

/// Throws BallTooLarge when `ball_radius` fails the containment bounds.
WedgeChart make_wedge_chart(const WedgeSpec& spec, const RPoint& center, const RPoint& direction,
                            double ball_radius);

/// f as a function of chart coordinates (z, s, t).
using ChartFn = std::function<std::complex<double>(std::complex<double>, const RPoint&, const RPoint&)>;

/// Chart-side data on the two half-balls. Analytic: chart series (z, zbar,
/// s, t). Numeric: samples in germ coordinates (z, w). Both carry the
/// pointwise functions used for edge limits and held-out checks.
struct ChartData {
  WedgeChart chart;
  ChartFn plus_fn;
  ChartFn minus_fn;
  std::optional<Series> plus;
  std::optional<Series> minus;
  std::vector<CPoint> plus_points;
  std::vector<std::complex<double>> plus_values;
  std::vector<CPoint> minus_points;
  std::vector<std::complex<double>> minus_values;
};

struct LiftOptions {
  /// Samples per half-ball (numeric mode).
  std::size_t samples = 600;
  std::uint64_t seed = 0;
};

/// Composes f with the blow-down of the chart. For a germ this is the
/// affine substitution followed by the pullback (truncation twice the
/// germ's); otherwise it resamples on both half-balls.
ChartData lift_to_blowup(const SampledFunction& f, const WedgeSpec& spec, const WedgeChart& chart,
                         const LiftOptions& options = {});

/// Ambient germ (z1..zn) to chart germ (z, w), exact when the input is.
Series ambient_to_chart_germ(const Series& ambient, const WedgeChart& chart);
/// Chart germ (z, w) to ambient (z1..zn), truncated at `truncation`.
Series chart_to_ambient_germ(const Series& germ, const WedgeChart& chart, unsigned truncation);

struct ExtendOptions {
  unsigned fit_degree = 12;
  std::size_t holdout = 100;
  double tolerance = 1e-8;
  std::uint64_t seed = 0;
};

struct Extension {
  /// Germ in chart coordinates (z, w1..wm).
  Series germ{Variables{}, 0, Mode::exact};
  /// Numeric mode only: max error on held-out points near the edge.
  std::optional<double> holdout_error;
  std::size_t unknowns = 0;
  std::size_t samples = 0;
};

/// Analytic: the two lifts must be the same series (BoundaryMismatch
/// otherwise), which is then reconstructed. Numeric: checks the one-sided
/// edge limits agree, fits a germ of degree `fit_degree` by least squares
/// (FitUnderdetermined with too few samples), and validates it against
/// the chart functions at held-out points close to the edge.
Extension edge_extend(const ChartData& data, const ExtendOptions& options = {});

struct DemoOptions {
  BoundaryOptions boundary;
  LiftOptions lift;
  ExtendOptions extend;
  double max_chart_radius = 0.15;
  unsigned quadrature_order = 64;
  double glue_tolerance = 1e-8;
  std::size_t edge_points_per_axis = 5;
  std::size_t overlap_points = 50;
};

struct ChartResult {
  RPoint direction;
  double ball_radius = 0;
  Series chart_germ{Variables{}, 0, Mode::exact};
  Series ambient_germ{Variables{}, 0, Mode::exact};
  std::optional<double> holdout_error;
  double weak_cr_residual = 0;
};

struct DemoReport {
  std::vector<RPoint> directions;
  BoundaryData boundary;
  std::vector<ChartResult> charts;
  double overlap_max_disagreement = 0;
};

/// Boundary values, one chart per generator pair at the edge center, lift,
/// extension, weak identity on each chart's complex line, and the overlap
/// check (OverlapDisagreement above the glue tolerance). Charts are ordered
/// by direction so the result does not depend on generator order.
DemoReport full_eowt_demo(const WedgeSpec& spec, const SampledFunction& f, const DemoOptions& options = {});

}  // namespace involute::wedge
