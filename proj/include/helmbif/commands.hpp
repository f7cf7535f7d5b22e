#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "helmbif/config.hpp"

namespace helmbif {

/// Invalid command-line parameters (exit code 2).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string subcommand;
  int m = defaults::kM;
  int m_max = defaults::kMMax;
  std::vector<int> m_list{4, 5, 6};
  double eps = defaults::kBranchEps;
  bool eps_given = false;
  std::vector<double> eps_list{defaults::kEpsList.begin(), defaults::kEpsList.end()};
  int steps = defaults::kSteps;
  int modes = defaults::kModes;
  int shape_modes = defaults::kShapeModes;
  double tol = defaults::kNewtonTolerance;
  double control_offset = defaults::kControlOffset;
  bool first_order = false;
  bool accept_stationary = false;
  int grid_n = defaults::kGridN;
  std::string format = "csv";
  std::string out;
};

/// Throws UsageError unless every parameter the subcommand uses lies within
/// the library's preconditions.
void validate(const RunConfig& config);

struct OutputFile {
  std::string name;  // suffix appended to --out; empty for single-file commands
  std::string content;
};

struct CommandResult {
  int exit_code = 0;
  std::vector<OutputFile> files;
  std::string message;  // human-readable summary for stderr
};

CommandResult cmd_mu_table(const RunConfig& config);
CommandResult cmd_verify(const RunConfig& config);
CommandResult cmd_scaling(const RunConfig& config);
CommandResult cmd_branch(const RunConfig& config);
CommandResult cmd_figure(const RunConfig& config);

/// Validates and dispatches on config.subcommand. Library errors become exit
/// code 1, UsageError exit code 2.
CommandResult run(const RunConfig& config);

/// %.17g
std::string format_real(double value);

}  // namespace helmbif
