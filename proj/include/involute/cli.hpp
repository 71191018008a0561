#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "involute/series.hpp"

namespace involute::cli {

struct RunConfig {
  Mode mode = Mode::exact;
  /// Unset means the command's own default.
  std::optional<unsigned> truncation;
  double tau_bv = 1e-8;
  double tau_glue = 1e-8;
  double rank_threshold = 1e-10;
  unsigned quadrature_order = 64;
  std::uint64_t seed = 0;
};

nlohmann::json config_to_json(const RunConfig& config);

/// Overrides the fields present in `doc`; unknown keys are rejected.
void merge_config(RunConfig& config, const nlohmann::json& doc);

/// Throws InvalidArgument unless D >= 1, tolerances > 0 and the quadrature
/// order is positive.
void validate(const RunConfig& config);

/// Exit code for an error: 2 for malformed input, 1 otherwise.
int exit_code_for(Errc code) noexcept;

/// Runs one command. `args` starts with the program name. Reports go to
/// `out` (or the --out file), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace involute::cli
