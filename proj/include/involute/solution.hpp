#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "involute/series.hpp"

namespace involute::solution {

/// f = sum_k a_k(s, t) z^k. Layer k is a series in (s, t) with truncation
/// D - k.
struct LayerDecomposition {
  std::size_t m = 0;
  unsigned truncation = 0;
  std::vector<Series> layers;
};

/// b_k(s) = a_k(s, 0); b_k has truncation D - k.
struct BSequence {
  std::size_t m = 0;
  unsigned truncation = 0;
  std::vector<Series> b;
};

/// c_{k,alpha} = alpha! * [s^alpha] b_k for k + |alpha| <= D.
using GermCoefficients = std::map<std::pair<unsigned, MultiIndex>, Coefficient>;

/// Components v_1..v_m of the one-form v_j ds^j, each a series in s.
struct OneForm {
  std::vector<Series> components;

  std::size_t m() const noexcept { return components.size(); }
};

/// Size of each frame residual: "L0" for d/dzbar, "L1".."Lm" for the
/// d/dt_j - z d/ds_j fields.
struct ResidualReport {
  std::vector<std::pair<std::string, Rational>> norms;
  bool exact = true;

  bool all_zero() const;
  double max_norm() const;
};

/// m for a chart series; throws VariableMismatch for other variable lists.
std::size_t chart_dimension(const Series& f);

/// Pulls a germ h(z, w) back to the chart: w_j := s_j + z t_j. The default
/// target truncation is max(h.truncation, 2 deg h).
Series pullback(const Series& h);
Series pullback(const Series& h, unsigned target_truncation);

/// Applies d/dzbar and every d/dt_j - z d/ds_j; residuals are compared up
/// to degree D - 1 only.
ResidualReport verify_solution(const Series& f);

/// Splits a zbar-free chart series into z-layers. Throws ZbarDependence.
LayerDecomposition decompose_layers(const Series& f);

/// Checks d_t a_0 = 0 and d_t a_k = d_s a_{k-1} on the degrees where both
/// sides are known (<= D - k - 1), sets b_k = a_k|_{t=0}, then confirms
///   a_k = sum_{|alpha| <= k} t^alpha d_s^alpha b_{k-|alpha|} / alpha!
/// up to degree D - k. Throws NotASolution naming the first bad layer.
BSequence reconstruct_b(const LayerDecomposition& layers);

/// Right-hand side of the closed form above for layer k.
Series closed_form_layer(const BSequence& b, unsigned k);

GermCoefficients germ_coefficients(const BSequence& b);

/// h(z, w) = sum_{k + |alpha| <= D} c_{k,alpha} z^k w^alpha / alpha!.
Series assemble_germ(const BSequence& b);

/// decompose_layers -> reconstruct_b -> assemble_germ.
Series hypocomplex_reconstruct(const Series& f);

/// Closedness residuals d_{s_j} v_k - d_{s_k} v_j for j < k.
struct CompatibilityReport {
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, Series>> residuals;

  bool closed() const;
  Rational max_residual() const;
};

/// Only u = 0 is supported; a nonzero u throws UnsupportedInhomogeneity.
CompatibilityReport check_compatibility(const OneForm& v, const Series& u);
CompatibilityReport check_compatibility(const OneForm& v);

/// Canonical solution of d/dzbar f = 0, (d/dt_j - z d/ds_j) f = v_j with
/// all homogeneous freedom set to zero:
///   a_k = sum_{|alpha| = k+1} t^alpha (d_s^k v)_alpha / alpha!.
/// Needs deg(v) <= D - 1 (TruncationTooSmall otherwise); the returned f
/// has been checked against v up to degree D - 1.
Series inhomogeneous_solve(const OneForm& v, unsigned truncation);

/// v_j := (d/dt_j - z d/ds_j) f up to degree D - 1, which must depend on s
/// only (NotPureS otherwise). Components have truncation D - 1.
OneForm recover_inhomogeneity(const Series& f);

/// Finite-data growth estimate for a series in s:
///   M = max_{|alpha| >= 1} |c_alpha|^{1/|alpha|},  C = max(|c_0|, 1).
/// M = 0 when only the constant term is present.
struct Certificate {
  double c = 0;
  double m = 0;
  /// Exponent that attains M (empty when M = 0).
  std::vector<unsigned> argmax;
};

Certificate analyticity_certificate(const Series& g);

}  // namespace involute::solution
