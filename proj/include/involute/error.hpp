#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace involute {

/// Failure categories shared by every module. The CLI maps them onto exit
/// codes (input errors -> 2, mathematical failures -> 1).
enum class Errc {
  variable_mismatch,
  mode_mismatch,
  unknown_variable,
  truncation_too_small,
  arity_mismatch,
  degree_out_of_range,
  parse_error,
  outside_chart,
  at_infinity,
  not_a_solution,
  zbar_dependence,
  unsupported_inhomogeneity,
  not_closed,
  not_pure_s,
  empty_series,
  dimension_mismatch,
  nonpositive_eps,
  invalid_argument,
  outside_wedge,
  limit_diverged,
  direction_mismatch,
  quadrature_under_resolved,
  ball_too_large,
  boundary_mismatch,
  fit_underdetermined,
  overlap_disagreement,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }
  std::string_view name() const noexcept { return errc_name(code_); }

 private:
  Errc code_;
};

/// Raised by the reconstruction recursion; carries the first layer whose
/// consistency identity failed and the size of the offending residual.
class NotASolution : public Error {
 public:
  NotASolution(int layer, std::string residual, const std::string& what)
      : Error(Errc::not_a_solution, what), layer_(layer), residual_(std::move(residual)) {}

  int layer() const noexcept { return layer_; }
  const std::string& residual() const noexcept { return residual_; }

 private:
  int layer_;
  std::string residual_;
};

}  // namespace involute
