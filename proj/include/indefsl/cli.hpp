#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "indefsl/bounds.hpp"
#include "indefsl/coeffs.hpp"
#include "indefsl/locate.hpp"

namespace indefsl {

enum class Command { bounds, solve, oracle, verify, report };
enum class OutputFormat { table, csv, json };

Command parse_command(std::string_view s);
OutputFormat parse_format(std::string_view s);
const char* to_string(Command c);

struct RunConfig {
  Command command = Command::solve;
  /// Exactly one of problem_path and preset is set.
  std::optional<std::string> problem_path;
  std::optional<std::string> preset;
  std::optional<double> mu;
  int n_oracle = 2000;
  double tol = 1e-12;          ///< integrator tolerance for Newton refinement
  double contour_tol = kDefaultContourTol;   ///< integrator tolerance for contour samples
  double margin = kDefaultMargin;
  std::optional<double> delta_im;
  OutputFormat format = OutputFormat::table;
  std::optional<std::string> output_path;
  /// Multiplies every bound before the containment checks of `verify`. Exists so the
  /// checks themselves can be tested; 1 in normal use.
  double box_scale = 1.0;
};

/// Throws InputError on inconsistent or out-of-range settings.
void validate(const RunConfig& cfg);

Problem problem_from_config(const RunConfig& cfg);

/// Executes the command. Exit codes: 0 success, 1 verification failure, 2 input
/// error, 3 numerical failure. Diagnostics go to err.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace indefsl
