#pragma once

#include <cstddef>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "involute/multi_index.hpp"
#include "involute/rational.hpp"
#include "involute/series.hpp"

namespace involute::bounds {

/// Real polynomial sum_{|alpha| <= degree} c_alpha t^alpha on R^m, with
/// either exact or double coefficients (the map matching `mode` is used).
struct RealPoly {
  std::size_t m = 1;
  unsigned degree = 0;
  Mode mode = Mode::floating;
  std::map<MultiIndex, Rational> exact;
  std::map<MultiIndex, double> values;

  double max_abs_coefficient() const;
};

enum class NodeFamily { equispaced, chebyshev };
enum class Method { interpolation, chebyshev_witness };

std::string_view node_family_name(NodeFamily f) noexcept;
NodeFamily parse_node_family(std::string_view text);
std::string_view method_name(Method m) noexcept;

/// Constant R with max |c_alpha| <= R^k sup_{|t_j| <= eps} |p(t)| for
/// every polynomial of degree <= k in m variables.
struct BoundReport {
  std::size_t m = 1;
  unsigned k = 0;
  Method method = Method::interpolation;
  NodeFamily nodes = NodeFamily::equispaced;
  /// R as used for checks; `r` is the double rounded up from it.
  Rational r_exact{1};
  double r = 1.0;
  /// Largest absolute row sum of the inverse Vandermonde for degree k.
  Rational lambda{1};
  /// 1-D constants before taking the running maximum over degrees.
  double r1_raw = 1.0;
  bool running_max_applied = false;
  Rational eps{1};
  std::vector<Rational> node_values;
  std::string composition;
  std::string sample_grid;
  /// prod_i rowsum(alpha_i) <= R^k was confirmed exactly for every alpha.
  bool verified = false;
};

/// Interpolation nodes on [-1, 1]; Chebyshev nodes are rounded to exact
/// dyadic rationals (any distinct nodes give a valid bound).
std::vector<Rational> interpolation_nodes(unsigned k, NodeFamily family);

/// Exact inverse of the Vandermonde matrix V_{ij} = x_i^j. Row j maps
/// sample values to the coefficient of t^j.
std::vector<std::vector<Rational>> inverse_vandermonde(const std::vector<Rational>& nodes);

BoundReport bound_constant(std::size_t m, unsigned k, NodeFamily family = NodeFamily::equispaced);

struct Verification {
  bool pass = false;
  double margin = 0;
  double sup = 0;
  double max_coefficient = 0;
  /// Set for exact polynomials: the margin computed in rational arithmetic.
  Rational exact_margin{0};
  std::size_t grid_points_per_axis = 0;
};

/// Compares max |c_alpha| with R^k times the maximum of |p| over an evenly
/// spaced grid on [-eps, eps]^m. The grid maximum never exceeds the true
/// supremum, so a pass on the grid implies the bound holds.
Verification verify_bound(const RealPoly& p, const BoundReport& report, std::size_t grid_density = 64);

struct ChebyshevWitness {
  RealPoly poly;
  Integer max_coefficient;
  /// max |coefficient of T_k|^{1/k}: every valid R for degree k is at least this.
  double lower_bound = 0;
};

/// T_k from T_0 = 1, T_1 = t, T_{k+1} = 2 t T_k - T_{k-1}.
ChebyshevWitness chebyshev_witness(unsigned k);

/// True when R^k >= max |c(T_k)|, i.e. the report respects the witness.
bool respects_witness(const BoundReport& report, const ChebyshevWitness& witness);

/// Bound for the box |t_j| <= eps: R_eps = max(R / eps, R).
BoundReport rescale_bound(const BoundReport& report, double eps);
BoundReport rescale_bound(const BoundReport& report, const Rational& eps);

/// Coefficients uniform in [-1, 1] on every monomial of degree <= k.
RealPoly random_poly(std::size_t m, unsigned k, std::mt19937_64& rng);

}  // namespace involute::bounds
