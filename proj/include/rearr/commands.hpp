#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rearr/config.hpp"
#include "rearr/measure.hpp"
#include "rearr/profiles.hpp"
#include "rearr/report.hpp"

namespace rearr {

enum ExitCode : int { kExitOk = 0, kExitPrecondition = 1, kExitViolation = 2 };

struct CommandOptions {
  /// Write JSON only: no CSV summary and no SVG plots.
  bool json_only = false;
  /// Progress and diagnostics; violations are always reported here.
  std::ostream* log = nullptr;
};

/// Natural profile of a space: Gaussian for the Gaussian line, interval for the
/// unit segment, the cube lower bound for higher cubes, Euclidean for boxes.
Profile default_profile(const MeasureSpace& space);

/// One verification of one function.
struct ReportRecord {
  std::string space;
  /// Parameter tag such as "p2" or "k3"; empty when the check has none.
  std::string variant;
  /// Output path relative to the output directory, without extension.
  std::string stem;
  VerificationReport report;
};

/// Runs the selected checks over every space, profile and function of the
/// config. Results are ordered by space, profile, function and check.
std::vector<ReportRecord> run_verifications(const RunConfig& config);

/// Writes reports/<space>/..json, summary.csv and plots; returns 0, or 2 when a
/// check is violated.
int cmd_verify(const RunConfig& config, const CommandOptions& opt = {});

/// f*, f** and the oscillation on the t-grid, f* stepwise and at piece
/// midpoints, and the signed rearrangement, for `config.function` on the first space.
int cmd_rearrange(const RunConfig& config, const CommandOptions& opt = {});

/// transfer.csv: transference integral per profile and the Gamma-chain
/// constant per n with its closed form.
int cmd_transfer(const RunConfig& config, const CommandOptions& opt = {});

/// Profile tables and structure checks per space.
int cmd_profile(const RunConfig& config, const CommandOptions& opt = {});

/// verify, transfer and profile into one output directory.
int cmd_suite(const RunConfig& config, const CommandOptions& opt = {});

/// Dispatches by name and maps ConfigError and PreconditionError to exit 1.
int run_command(const std::string& name, const RunConfig& config, const CommandOptions& opt = {});

}  // namespace rearr
