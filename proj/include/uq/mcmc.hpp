#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "uq/calib.hpp"

namespace uq {

using Block = std::vector<int>;

/// Samples of one random-walk Metropolis chain.
struct Chain {
  Eigen::MatrixXd samples;        // iterations x parameters
  Eigen::VectorXd log_posterior;  // per stored sample
  std::vector<Block> blocks;
  std::vector<std::int64_t> accepted;  // per block
  std::vector<std::int64_t> proposed;  // per block
  std::vector<double> proposal_scales; // per parameter, after adaptation
  std::uint64_t seed = 0;

  double acceptance_rate(std::size_t block) const {
    return proposed[block] > 0 ? static_cast<double>(accepted[block]) / static_cast<double>(proposed[block]) : 0.0;
  }
};

struct RwmConfig {
  int n_iter = 10'000;
  int n_chains = 1;
  /// Keep every thin-th iteration (n_iter / thin stored rows).
  int thin = 1;
  /// Empty: model 1 updates everything together, model 2 updates x and
  /// (sigma, tau, b) as two blocks.
  std::vector<Block> blocks;
  /// Per-parameter proposal sd; empty means prior sd / 10.
  std::vector<double> proposal_scales;
  /// Optional full proposal covariance per block (overrides scales).
  std::vector<Eigen::MatrixXd> block_covariances;
  std::uint64_t seed = 0;
  /// Iterations of Robbins-Monro scale adaptation toward target_acceptance,
  /// run before and discarded from the recorded chain.
  int adapt_iterations = 0;
  double target_acceptance = 0.3;
  /// Starting points (chain c uses entry c % size); empty means jittered prior means.
  std::vector<Eigen::VectorXd> initial_points;
  /// Jitter sd as a fraction of the prior sd.
  double init_jitter = 0.1;
};

std::vector<Block> default_blocks(const CalibrationProblem& problem);

/// Independent chains, run in parallel; chain c draws from derive_seed(seed, c).
std::vector<Chain> rwm_sample(const CalibrationProblem& problem, const RwmConfig& config);
/// Single-threaded reference for rwm_sample; identical output.
std::vector<Chain> rwm_sample_serial(const CalibrationProblem& problem, const RwmConfig& config);

struct MapOptions {
  /// Extra starting points tried in addition to the prior draws.
  std::vector<Eigen::VectorXd> extra_starts;
  int max_evaluations = 20'000;
  int max_restarts = 20;
  double tolerance = 1e-10;
};

struct MapResult {
  Eigen::VectorXd theta;
  double log_posterior = 0.0;
  int feasible_starts = 0;
};

/// Multi-start Nelder-Mead maximization of the log-posterior; parameters are
/// folded back into bounded supports by reflection.
MapResult map_estimate(const CalibrationProblem& problem, int n_starts, std::uint64_t seed,
                       const MapOptions& options = {});

}  // namespace uq
