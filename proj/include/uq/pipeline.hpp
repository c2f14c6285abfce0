#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uq/calib.hpp"
#include "uq/config.hpp"
#include "uq/pce.hpp"
#include "uq/simulators.hpp"

namespace uq {

struct CommandOptions {
  /// Overrides sobol.time_variant when set.
  std::optional<bool> time_variant;
  /// Points for `predict`; empty means a small validation LHS.
  std::vector<std::vector<double>> points;
};

inline const std::vector<std::string> kCommands{"design", "simulate", "fit", "predict",
                                                "sobol", "calibrate", "map", "summarize"};

/// Runs one subcommand; throws uq::Error on failure.
void run_command(const std::string& command, const PipelineConfig& config, const CommandOptions& options = {});

/// Maps an exception to the CLI exit code (2 validation, 3 numerical).
int exit_code_for(const std::exception& e);

// Pieces shared with tests.
ForcingSeries load_forcing(const PipelineConfig& config);
Eigen::VectorXd synthetic_observations(const PipelineConfig& config, const ForcingSeries& forcing);
CalibrationProblem build_problem(const PipelineConfig& config, const MultiOutputSurrogate& surrogate,
                                 const Eigen::VectorXd& data, const std::vector<double>& times);

}  // namespace uq
