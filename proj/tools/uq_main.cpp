// uq: surrogate-based sensitivity analysis and calibration pipeline.
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <omp.h>

#include "uq/error.hpp"
#include "uq/log.hpp"
#include "uq/pipeline.hpp"

namespace {

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    uq::require(used > 0 && used == item.size(), uq::ErrorKind::parse_error, "--point: '" + item + "' is not a number");
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial-chaos surrogate pipeline: design, simulate, fit, predict, sobol, calibrate, map, summarize"};
  app.require_subcommand(1, 1);

  std::string config_path;
  int threads = 0;
  bool verbose = false, quiet = false;
  std::optional<bool> time_variant;
  std::vector<std::string> points;

  const std::map<std::string, std::string> help{
      {"design", "Write the Latin hypercube experimental design (design.csv)"},
      {"simulate", "Run the catchment simulator on the design; write outputs, forcing and synthetic observations"},
      {"fit", "Fit PCA plus sparse PCE surrogate (surrogate.json, pca_scores.csv)"},
      {"predict", "Compare surrogate and simulator traces; report the timing ratio"},
      {"sobol", "Sobol indices of the principal components and, optionally, over time"},
      {"calibrate", "Random-walk Metropolis sampling of the posterior (chains.json)"},
      {"map", "Maximum a posteriori estimate and corrected prediction"},
      {"summarize", "Posterior summary table and marginal density grids"},
  };
  for (const auto& name : uq::kCommands) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("-c,--config", config_path, "Pipeline configuration (JSON)")->required();
    sub->add_option("--threads", threads, "Cap on worker threads (0: OpenMP default)")->check(CLI::NonNegativeNumber);
    sub->add_flag("-v,--verbose", verbose, "Debug logging");
    sub->add_flag("-q,--quiet", quiet, "Warnings and errors only");
    if (name == "sobol") {
      sub->add_flag_function(
          "--time-variant,!--no-time-variant", [&](std::int64_t n) { time_variant = n > 0; },
          "Also write time-variant first-order indices (sobol_t.csv); overrides the config");
    }
    if (name == "predict")
      sub->add_option("--point", points, "Input point as comma-separated values (repeatable)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (verbose) uq::log::set_level(uq::log::Level::debug);
  if (quiet) uq::log::set_level(uq::log::Level::warning);
  if (threads > 0) omp_set_num_threads(threads);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    uq::CommandOptions options;
    options.time_variant = time_variant;
    for (const auto& p : points) options.points.push_back(parse_point(p));
    const uq::PipelineConfig config = uq::load_config(config_path);
    uq::run_command(command, config, options);
  } catch (const std::exception& e) {
    uq::log::error(command + ": " + e.what());
    return uq::exit_code_for(e);
  }
  return 0;
}
