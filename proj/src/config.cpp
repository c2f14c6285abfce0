#include "uq/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>

#include "uq/config_schema.hpp"
#include "uq/error.hpp"
#include "uq/io.hpp"
#include "uq/json_schema.hpp"
#include "uq/simulators.hpp"

namespace uq {
namespace {

using nlohmann::json;

template <class T>
void take(const json& obj, const char* key, T& dst) {
  if (obj.contains(key)) dst = obj.at(key).get<T>();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::filesystem::path& p) {
  return p.is_absolute() ? p : base / p;
}

}  // namespace

std::vector<Bounds> PipelineConfig::bounds() const {
  std::vector<Bounds> out;
  for (const auto& p : parameters) out.push_back(p.bounds);
  return out;
}

std::vector<std::string> PipelineConfig::names() const {
  std::vector<std::string> out;
  for (const auto& p : parameters) out.push_back(p.name);
  return out;
}

std::vector<ParameterConfig> default_parameters() {
  std::vector<ParameterConfig> out;
  const auto box = catchment_bounds();
  for (std::size_t i = 0; i < box.size(); ++i)
    out.push_back({"x" + std::to_string(i + 1), box[i], default_parameter_prior(box[i])});
  return out;
}

PipelineConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
  static const json schema = json::parse(kConfigSchema);
  const auto problems = schema_violations(schema, j);
  if (!problems.empty()) {
    std::string msg = "configuration does not match the schema:";
    for (const auto& p : problems) msg += "\n  " + p;
    fail(ErrorKind::invalid_argument, msg);
  }

  PipelineConfig c;
  if (j.contains("parameters")) {
    std::set<std::string> seen;
    for (const auto& p : j["parameters"]) {
      ParameterConfig pc;
      pc.name = p["name"].get<std::string>();
      require(seen.insert(pc.name).second, ErrorKind::invalid_argument, "duplicate parameter name '" + pc.name + "'");
      pc.bounds = {p["lower"].get<double>(), p["upper"].get<double>()};
      require(pc.bounds.lower < pc.bounds.upper, ErrorKind::degenerate_bounds,
              "parameter '" + pc.name + "': lower bound must be below upper bound");
      pc.prior = default_parameter_prior(pc.bounds);
      if (p.contains("prior")) {
        const json& pr = p["prior"];
        if (pr["type"] == "uniform") {
          require(!pr.contains("mean") && !pr.contains("sd"), ErrorKind::invalid_argument,
                  "parameter '" + pc.name + "': uniform prior takes no mean or sd");
          pc.prior = UniformPrior{pc.bounds.lower, pc.bounds.upper};
        } else {
          auto tn = std::get<TruncatedNormalPrior>(pc.prior);
          take(pr, "mean", tn.mean);
          take(pr, "sd", tn.sd);
          pc.prior = tn;
        }
      }
      validate_prior(pc.prior);
      c.parameters.push_back(std::move(pc));
    }
  } else {
    c.parameters = default_parameters();
  }

  if (j.contains("forcing")) {
    const json& f = j["forcing"];
    if (f.contains("source")) c.forcing.synthetic = f["source"] == "synthetic";
    take(f, "steps", c.forcing.steps);
    take(f, "dt", c.forcing.dt);
    take(f, "scale", c.forcing.scale);
    if (f.contains("path")) c.forcing.path = resolve(base_dir, f["path"].get<std::string>());
    require(c.forcing.synthetic || !c.forcing.path.empty(), ErrorKind::invalid_argument,
            "forcing source 'csv' needs a path");
  }

  if (j.contains("design")) {
    const json& d = j["design"];
    take(d, "size", c.design.size);
    take(d, "seed", c.design.seed);
    if (d.contains("chunks")) {
      c.design.chunks = d["chunks"].get<std::vector<int>>();
    } else if (d.contains("size")) {
      c.design.chunks = {c.design.size};
    }
  }
  require(std::accumulate(c.design.chunks.begin(), c.design.chunks.end(), 0) == c.design.size,
          ErrorKind::invalid_argument, "design chunks must sum to the design size");

  if (j.contains("pca")) take(j["pca"], "target_fraction", c.target_fraction);

  if (j.contains("pce")) {
    const json& p = j["pce"];
    take(p, "degree_min", c.pce.degree_min);
    take(p, "degree_max", c.pce.degree_max);
    take(p, "candidate_cap", c.pce.candidate_cap);
    take(p, "loo_correction", c.pce.lar.loo_correction);
  }
  require(c.pce.degree_min <= c.pce.degree_max, ErrorKind::invalid_argument, "pce degree_min exceeds degree_max");

  const std::vector<std::string> names = c.names();
  auto known = [&](const std::string& n) { return std::find(names.begin(), names.end(), n) != names.end(); };
  if (j.contains("sobol")) {
    const json& s = j["sobol"];
    take(s, "inputs", c.sobol.inputs);
    take(s, "time_variant", c.sobol.time_variant);
    for (const auto& n : c.sobol.inputs)
      require(known(n), ErrorKind::invalid_argument, "sobol input '" + n + "' is not a parameter");
  }

  if (j.contains("observations")) {
    const json& o = j["observations"];
    if (o.contains("source")) c.observations.synthetic = o["source"] == "synthetic";
    if (o.contains("path")) c.observations.path = resolve(base_dir, o["path"].get<std::string>());
    take(o, "truth", c.observations.truth);
    take(o, "discrepancy", c.observations.discrepancy);
    take(o, "sigma", c.observations.sigma);
    take(o, "rho", c.observations.rho);
    take(o, "seed", c.observations.seed);
    require(c.observations.synthetic || !c.observations.path.empty(), ErrorKind::invalid_argument,
            "observations source 'csv' needs a path");
  }
  if (c.observations.synthetic) {
    require(c.observations.truth.size() == c.parameters.size(), ErrorKind::dimension_mismatch,
            "observations truth needs one value per parameter");
    for (std::size_t i = 0; i < c.parameters.size(); ++i) {
      const Bounds& b = c.parameters[i].bounds;
      require(c.observations.truth[i] >= b.lower && c.observations.truth[i] <= b.upper, ErrorKind::domain_violation,
              "observations truth for '" + c.parameters[i].name + "' lies outside its bounds");
    }
  }

  if (j.contains("calibration")) {
    const json& k = j["calibration"];
    if (k.contains("error_model")) c.calibration.correlated = k["error_model"] == "correlated";
    take(k, "discrepancy_degree", c.calibration.discrepancy_degree);
    take(k, "iterations", c.calibration.iterations);
    take(k, "chains", c.calibration.chains);
    take(k, "thin", c.calibration.thin);
    take(k, "summary_thin", c.calibration.summary_thin);
    take(k, "burn_in", c.calibration.burn_in);
    take(k, "seed", c.calibration.seed);
    take(k, "adapt_iterations", c.calibration.adapt_iterations);
    take(k, "blocks", c.calibration.blocks);
    take(k, "map_starts", c.calibration.map_starts);
    take(k, "map_seed", c.calibration.map_seed);
  }
  require(c.calibration.thin <= c.calibration.iterations, ErrorKind::invalid_argument,
          "calibration thin exceeds the iteration count");

  if (j.contains("paths")) {
    const json& p = j["paths"];
    if (p.contains("workdir")) c.paths.workdir = p["workdir"].get<std::string>();
    take(p, "design", c.paths.design);
    take(p, "forcing", c.paths.forcing);
    take(p, "outputs", c.paths.outputs);
    take(p, "observations", c.paths.observations);
    take(p, "surrogate", c.paths.surrogate);
    take(p, "pca_scores", c.paths.pca_scores);
    take(p, "predictions", c.paths.predictions);
    take(p, "sobol_report", c.paths.sobol_report);
    take(p, "sobol_t", c.paths.sobol_t);
    take(p, "chains", c.paths.chains);
    take(p, "map", c.paths.map);
    take(p, "map_prediction", c.paths.map_prediction);
    take(p, "summary", c.paths.summary);
    take(p, "kde", c.paths.kde);
  }
  c.paths.workdir = resolve(base_dir, c.paths.workdir);
  return c;
}

PipelineConfig load_config(const std::filesystem::path& file) {
  require(std::filesystem::exists(file), ErrorKind::missing_artifact, "config file " + file.string() + " not found");
  const json j = io::read_json(file);
  PipelineConfig c = parse_config(j, file.has_parent_path() ? file.parent_path() : std::filesystem::path("."));
  if (const char* env = std::getenv("UQ_WORKDIR"); env && *env) c.paths.workdir = env;
  return c;
}

}  // namespace uq
