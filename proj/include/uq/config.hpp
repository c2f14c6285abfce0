#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "uq/calib.hpp"
#include "uq/pce.hpp"
#include "uq/polybasis.hpp"

namespace uq {

struct ParameterConfig {
  std::string name;
  Bounds bounds;
  PriorSpec prior;
};

struct ForcingConfig {
  bool synthetic = true;
  int steps = 600;
  double dt = 120.0;
  double scale = 1.0;
  std::filesystem::path path;
};

struct DesignConfig {
  int size = 2048;
  std::uint64_t seed = 1;
  std::vector<int> chunks{1024, 1024};
};

struct SobolConfig {
  std::vector<std::string> inputs;  // empty: all
  bool time_variant = true;
};

struct ObservationConfig {
  bool synthetic = true;
  std::filesystem::path path;
  std::vector<double> truth{0.9, 1.2, 0.8, 1.1, 0.9, 1.2, 1.0, 1.2};
  std::vector<double> discrepancy{10.0, -8.0, 5.0};  // normalized Legendre coefficients, l/s
  double sigma = 20.0;
  double rho = 0.3;
  std::uint64_t seed = 7;
};

struct CalibrationConfig {
  bool correlated = true;
  int discrepancy_degree = 5;
  int iterations = 1'000'000;
  int chains = 30;
  int thin = 100;
  int summary_thin = 0;  // 0: automatic
  double burn_in = 0.2;
  std::uint64_t seed = 11;
  int adapt_iterations = 2000;
  std::vector<std::vector<std::string>> blocks;  // empty: default blocks
  int map_starts = 20;
  std::uint64_t map_seed = 13;
};

struct PathsConfig {
  std::filesystem::path workdir = "uq_run";
  std::string design = "design.csv";
  std::string forcing = "forcing.csv";
  std::string outputs = "outputs.csv";
  std::string observations = "observations.csv";
  std::string surrogate = "surrogate.json";
  std::string pca_scores = "pca_scores.csv";
  std::string predictions = "predictions.csv";
  std::string sobol_report = "sobol_report.csv";
  std::string sobol_t = "sobol_t.csv";
  std::string chains = "chains.json";
  std::string map = "map.json";
  std::string map_prediction = "map_prediction.csv";
  std::string summary = "posterior_summary.csv";
  std::string kde = "posterior_kde.csv";
};

struct PipelineConfig {
  std::vector<ParameterConfig> parameters;
  ForcingConfig forcing;
  DesignConfig design;
  double target_fraction = 0.99;
  MultiFitOptions pce;
  SobolConfig sobol;
  ObservationConfig observations;
  CalibrationConfig calibration;
  PathsConfig paths;

  std::vector<Bounds> bounds() const;
  std::vector<std::string> names() const;
  std::filesystem::path artifact(const std::string& file) const { return paths.workdir / file; }
};

/// The eight catchment multipliers x1..x8 with default truncated-normal priors.
std::vector<ParameterConfig> default_parameters();

/// Schema validation, then defaults for every omitted key. Relative paths
/// resolve against base_dir.
PipelineConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = ".");
/// Reads and parses a config file; UQ_WORKDIR overrides paths.workdir.
PipelineConfig load_config(const std::filesystem::path& file);

}  // namespace uq
