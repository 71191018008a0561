#include "involute/error.hpp"

namespace involute {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::variable_mismatch: return "VariableMismatch";
    case Errc::mode_mismatch: return "ModeMismatch";
    case Errc::unknown_variable: return "UnknownVariable";
    case Errc::truncation_too_small: return "TruncationTooSmall";
    case Errc::arity_mismatch: return "ArityMismatch";
    case Errc::degree_out_of_range: return "DegreeOutOfRange";
    case Errc::parse_error: return "ParseError";
    case Errc::outside_chart: return "OutsideChart";
    case Errc::at_infinity: return "AtInfinity";
    case Errc::not_a_solution: return "NotASolution";
    case Errc::zbar_dependence: return "ZbarDependence";
    case Errc::unsupported_inhomogeneity: return "UnsupportedInhomogeneity";
    case Errc::not_closed: return "NotClosed";
    case Errc::not_pure_s: return "NotPureS";
    case Errc::empty_series: return "EmptySeries";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::nonpositive_eps: return "NonpositiveEps";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::outside_wedge: return "OutsideWedge";
    case Errc::limit_diverged: return "LimitDiverged";
    case Errc::direction_mismatch: return "DirectionMismatch";
    case Errc::quadrature_under_resolved: return "QuadratureUnderResolved";
    case Errc::ball_too_large: return "BallTooLarge";
    case Errc::boundary_mismatch: return "BoundaryMismatch";
    case Errc::fit_underdetermined: return "FitUnderdetermined";
    case Errc::overlap_disagreement: return "OverlapDisagreement";
  }
  return "Unknown";
}

}  // namespace involute
