#include "uq/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <random>

#include "uq/doe.hpp"
#include "uq/error.hpp"
#include "uq/io.hpp"
#include "uq/log.hpp"
#include "uq/mcmc.hpp"
#include "uq/serialize.hpp"
#include "uq/sobol.hpp"
#include "uq/summary.hpp"

namespace uq {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

class StageTimer {
 public:
  explicit StageTimer(std::string name) : name_(std::move(name)), start_(Clock::now()) {}
  ~StageTimer() {
    const double s = std::chrono::duration<double>(Clock::now() - start_).count();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f s", s);
    log::info(name_ + " finished in " + buf);
  }

 private:
  std::string name_;
  Clock::time_point start_;
};

fs::path need(const PipelineConfig& c, const std::string& file, const std::string& producer) {
  const fs::path p = c.artifact(file);
  require(fs::exists(p), ErrorKind::missing_artifact,
          p.string() + " not found; run `uq " + producer + "` first");
  return p;
}

std::string fmt(double v) { return io::format_double(v); }

std::vector<std::string> series_header(std::size_t n) {
  std::vector<std::string> h;
  for (std::size_t i = 0; i < n; ++i) h.push_back("y" + std::to_string(i));
  return h;
}

int input_position(const PipelineConfig& c, const std::string& name) {
  const auto names = c.names();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  fail(ErrorKind::invalid_argument, "unknown input '" + name + "'");
}

std::vector<int> sobol_inputs(const PipelineConfig& c) {
  std::vector<int> out;
  if (c.sobol.inputs.empty())
    for (std::size_t i = 0; i < c.parameters.size(); ++i) out.push_back(static_cast<int>(i));
  else
    for (const auto& n : c.sobol.inputs) out.push_back(input_position(c, n));
  return out;
}

void require_toy_parameters(const PipelineConfig& c) {
  require(static_cast<int>(c.parameters.size()) == kCatchmentParameters, ErrorKind::dimension_mismatch,
          "the catchment simulator takes " + std::to_string(kCatchmentParameters) + " parameters, config lists " +
              std::to_string(c.parameters.size()));
}

ExperimentalDesign load_design(const PipelineConfig& c) {
  const io::CsvTable t = io::read_csv(need(c, c.paths.design, "design"));
  require(t.header == c.names(), ErrorKind::shape_error, "design.csv columns do not match the configured parameters");
  ExperimentalDesign d;
  d.points = t.values;
  d.bounds = c.bounds();
  d.seed = c.design.seed;
  d.chunk_sizes = c.design.chunks;
  return d;
}

MultiOutputSurrogate load_surrogate(const PipelineConfig& c) {
  MultiOutputSurrogate s = surrogate_from_json(io::read_json(need(c, c.paths.surrogate, "fit")));
  require(s.spec().dimension() == c.parameters.size(), ErrorKind::dimension_mismatch,
          "surrogate input dimension differs from the configured parameters");
  return s;
}

struct Observations {
  std::vector<double> times;
  Eigen::VectorXd y;
};

Observations load_observations(const PipelineConfig& c) {
  const fs::path p = c.observations.synthetic ? need(c, c.paths.observations, "simulate") : c.observations.path;
  require(fs::exists(p), ErrorKind::missing_artifact, "observation file " + p.string() + " not found");
  const io::CsvTable t = io::read_csv(p);
  const int ct = t.column("t"), cy = t.column("y");
  require(ct >= 0 && cy >= 0, ErrorKind::shape_error, p.string() + ": needs columns t and y");
  Observations o;
  o.y = t.values.col(cy);
  o.times.assign(t.values.col(ct).data(), t.values.col(ct).data() + t.values.rows());
  return o;
}

// ---- commands ------------------------------------------------------------

void cmd_design(const PipelineConfig& c) {
  StageTimer timer("design");
  const auto bounds = c.bounds();
  const ExperimentalDesign d = chunked_lhs_design(bounds, c.design.chunks, c.design.seed);
  io::write_csv(c.artifact(c.paths.design), c.names(), d.points);
  log::info("wrote " + c.artifact(c.paths.design).string() + " (" + std::to_string(d.size()) + " points)");
}

void cmd_simulate(const PipelineConfig& c) {
  StageTimer timer("simulate");
  require_toy_parameters(c);
  const ForcingSeries forcing = load_forcing(c);
  const ExperimentalDesign d = load_design(c);
  const Eigen::MatrixXd outputs = simulate_design(d.points, forcing);

  Eigen::MatrixXd f(static_cast<Eigen::Index>(forcing.size()), 2);
  for (std::size_t i = 0; i < forcing.size(); ++i) {
    f(static_cast<Eigen::Index>(i), 0) = forcing.times[i];
    f(static_cast<Eigen::Index>(i), 1) = forcing.intensities[i];
  }
  io::write_csv(c.artifact(c.paths.forcing), std::vector<std::string>{"t", "intensity"}, f);
  io::write_csv(c.artifact(c.paths.outputs), series_header(forcing.size()), outputs);
  log::info("wrote " + c.artifact(c.paths.outputs).string() + " (" + std::to_string(outputs.rows()) + " x " +
            std::to_string(outputs.cols()) + ")");

  if (c.observations.synthetic) {
    const Eigen::VectorXd y = synthetic_observations(c, forcing);
    const Eigen::VectorXd sim = toy_catchment(c.observations.truth, forcing);
    const Eigen::VectorXd delta = discrepancy(c.observations.discrepancy, forcing.times);
    Eigen::MatrixXd obs(y.size(), 4);
    for (Eigen::Index i = 0; i < y.size(); ++i) obs.row(i) << forcing.times[static_cast<std::size_t>(i)], y[i], sim[i], delta[i];
    io::write_csv(c.artifact(c.paths.observations), std::vector<std::string>{"t", "y", "simulator", "discrepancy"}, obs);
    log::info("wrote " + c.artifact(c.paths.observations).string());
  }
}

void cmd_fit(const PipelineConfig& c) {
  StageTimer timer("fit");
  const ExperimentalDesign d = load_design(c);
  const io::CsvTable out = io::read_csv(need(c, c.paths.outputs, "simulate"));
  require(out.values.rows() == d.size(), ErrorKind::shape_error,
          "outputs.csv has " + std::to_string(out.values.rows()) + " rows, design has " + std::to_string(d.size()));
  const MultiOutputSurrogate s = fit_multi(d, out.values, c.target_fraction, c.pce);
  io::write_json(c.artifact(c.paths.surrogate), to_json(s));

  log::info("retained " + std::to_string(s.rb.retained) + " components, explained variance " +
            fmt(s.rb.explained_fraction));
  log::info("component  degree  terms  normalized LOO");
  for (std::size_t p = 0; p < s.pces.size(); ++p) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "Z%-9zu %-7d %-6zu %.3e", p, s.pces[p].degree_selected, s.pces[p].size(),
                  s.pces[p].loo_normalized);
    log::info(buf);
  }

  const Eigen::MatrixXd z = compress_rows(s.rb, out.values);
  Eigen::MatrixXd table(d.size(), d.dimension() + z.cols());
  table << d.points, z;
  std::vector<std::string> header = c.names();
  for (Eigen::Index p = 0; p < z.cols(); ++p) header.push_back("Z" + std::to_string(p));
  io::write_csv(c.artifact(c.paths.pca_scores), header, table);
}

void cmd_predict(const PipelineConfig& c, const CommandOptions& o) {
  StageTimer timer("predict");
  require_toy_parameters(c);
  const MultiOutputSurrogate s = load_surrogate(c);
  const ForcingSeries forcing = load_forcing(c);
  require(static_cast<Eigen::Index>(forcing.size()) == s.rb.output_size(), ErrorKind::shape_error,
          "forcing length differs from the surrogate output length");

  Eigen::MatrixXd points;
  if (o.points.empty()) {
    points = chunked_lhs_design(c.bounds(), std::vector<int>{5}, derive_seed(c.design.seed, 0x70726564)).points;
  } else {
    points.resize(static_cast<Eigen::Index>(o.points.size()), static_cast<Eigen::Index>(c.parameters.size()));
    for (std::size_t k = 0; k < o.points.size(); ++k) {
      require(o.points[k].size() == c.parameters.size(), ErrorKind::dimension_mismatch,
              "--point needs " + std::to_string(c.parameters.size()) + " values");
      for (std::size_t i = 0; i < o.points[k].size(); ++i) points(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = o.points[k][i];
    }
  }

  std::vector<std::vector<std::string>> rows;
  for (Eigen::Index k = 0; k < points.rows(); ++k) {
    std::vector<double> xv(static_cast<std::size_t>(points.cols()));
    for (Eigen::Index i = 0; i < points.cols(); ++i) xv[static_cast<std::size_t>(i)] = points(k, i);
    const Eigen::VectorXd sim = toy_catchment(xv, forcing);
    const Eigen::VectorXd sur = predict_series(s, xv);
    for (Eigen::Index t = 0; t < sim.size(); ++t)
      rows.push_back({std::to_string(k + 1), fmt(forcing.times[static_cast<std::size_t>(t)]), fmt(sim[t]), fmt(sur[t])});
  }
  io::write_text_csv(c.artifact(c.paths.predictions), std::vector<std::string>{"sample", "t", "simulator", "surrogate"}, rows);

  // wall-clock ratio of one simulator run to one surrogate evaluation
  std::vector<double> x0(static_cast<std::size_t>(points.cols()));
  for (Eigen::Index i = 0; i < points.cols(); ++i) x0[static_cast<std::size_t>(i)] = points(0, i);
  auto time_per_call = [](auto&& f) {
    int reps = 1;
    while (true) {
      const auto t0 = Clock::now();
      for (int r = 0; r < reps; ++r) f();
      const double s = std::chrono::duration<double>(Clock::now() - t0).count();
      if (s > 0.2 || reps >= (1 << 20)) return s / reps;
      reps *= 2;
    }
  };
  double sink = 0.0;
  const double t_sim = time_per_call([&] { sink += toy_catchment(x0, forcing)[0]; });
  const double t_sur = time_per_call([&] { sink += predict_series(s, x0)[0]; });
  char buf[160];
  std::snprintf(buf, sizeof buf, "simulator %.3e s/run, surrogate %.3e s/run, ratio %.1f", t_sim, t_sur, t_sim / t_sur);
  log::info(buf);
  if (std::isnan(sink)) log::debug("nan in timing loop");
}

void cmd_sobol(const PipelineConfig& c, const CommandOptions& o) {
  StageTimer timer("sobol");
  const MultiOutputSurrogate s = load_surrogate(c);
  const auto names = c.names();
  const std::vector<int> inputs = sobol_inputs(c);
  const SobolReport rep = component_report(s);

  std::vector<std::vector<std::string>> rows;
  for (std::size_t p = 0; p < rep.subjects.size(); ++p)
    for (int i : inputs) {
      const auto ii = static_cast<std::size_t>(i);
      rows.push_back({rep.subjects[p], names[ii], "first_order", fmt(rep.first_order[p][ii]),
                      std::string(to_string(rep.first_order[p][ii] < 0 ? IndexFlag::negative : IndexFlag::ok))});
      rows.push_back({rep.subjects[p], names[ii], "total", fmt(rep.total[p][ii]),
                      std::string(to_string(rep.total[p][ii] < 0 ? IndexFlag::negative : IndexFlag::ok))});
    }
  io::write_text_csv(c.artifact(c.paths.sobol_report),
                     std::vector<std::string>{"subject", "input", "index_type", "value", "flag"}, rows);
  log::info("wrote " + c.artifact(c.paths.sobol_report).string());

  if (!o.time_variant.value_or(c.sobol.time_variant)) return;
  const ForcingSeries forcing = load_forcing(c);
  require(static_cast<Eigen::Index>(forcing.size()) == s.rb.output_size(), ErrorKind::shape_error,
          "forcing length differs from the surrogate output length");
  std::vector<TimeVariantIndices> tv;
  for (int i : inputs) tv.push_back(timevariant_first_order(s, i));
  std::vector<std::vector<std::string>> trows;
  std::size_t undefined = 0, negative = 0;
  for (std::size_t t = 0; t < forcing.size(); ++t)
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      const IndexFlag f = tv[k].flags[t];
      undefined += f == IndexFlag::undefined;
      negative += f == IndexFlag::negative;
      trows.push_back({fmt(forcing.times[t]), names[static_cast<std::size_t>(inputs[k])],
                       f == IndexFlag::undefined ? "nan" : fmt(tv[k].values[t])});
    }
  io::write_text_csv(c.artifact(c.paths.sobol_t), std::vector<std::string>{"t", "input", "S"}, trows);
  log::info("wrote " + c.artifact(c.paths.sobol_t).string() + " (" + std::to_string(undefined) +
            " undefined, " + std::to_string(negative) + " negative entries)");
}

std::vector<Block> named_blocks(const PipelineConfig& c, const CalibrationProblem& problem) {
  std::vector<Block> blocks;
  const auto names = problem.parameter_names();
  for (const auto& b : c.calibration.blocks) {
    Block blk;
    for (const auto& n : b) {
      const auto it = std::find(names.begin(), names.end(), n);
      require(it != names.end(), ErrorKind::invalid_argument, "block member '" + n + "' is not a calibration parameter");
      blk.push_back(static_cast<int>(it - names.begin()));
    }
    blocks.push_back(std::move(blk));
  }
  return blocks;
}

void cmd_calibrate(const PipelineConfig& c) {
  StageTimer timer("calibrate");
  const MultiOutputSurrogate s = load_surrogate(c);
  const Observations obs = load_observations(c);
  const CalibrationProblem problem = build_problem(c, s, obs.y, obs.times);
  RwmConfig rc;
  rc.n_iter = c.calibration.iterations;
  rc.n_chains = c.calibration.chains;
  rc.thin = c.calibration.thin;
  rc.seed = c.calibration.seed;
  rc.adapt_iterations = c.calibration.adapt_iterations;
  rc.blocks = named_blocks(c, problem);
  const std::vector<Chain> chains = rwm_sample(problem, rc);
  io::write_json(c.artifact(c.paths.chains), chains_to_json(chains, problem.parameter_names()));
  for (std::size_t b = 0; b < chains.front().blocks.size(); ++b) {
    double acc = 0.0;
    for (const auto& ch : chains) acc += ch.acceptance_rate(b);
    log::info("block " + std::to_string(b + 1) + " mean acceptance " + fmt(acc / static_cast<double>(chains.size())));
  }
  log::info("wrote " + c.artifact(c.paths.chains).string());
}

void cmd_map(const PipelineConfig& c) {
  StageTimer timer("map");
  const MultiOutputSurrogate s = load_surrogate(c);
  const Observations obs = load_observations(c);
  const CalibrationProblem problem = build_problem(c, s, obs.y, obs.times);
  MapOptions mo;
  if (fs::exists(c.artifact(c.paths.chains))) {
    // best recorded sample as an extra start
    const auto chains = chains_from_json(io::read_json(c.artifact(c.paths.chains)));
    double best = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd start;
    for (const auto& ch : chains)
      for (Eigen::Index k = 0; k < ch.log_posterior.size(); ++k)
        if (ch.log_posterior[k] > best && ch.samples.cols() == static_cast<Eigen::Index>(problem.dimension())) {
          best = ch.log_posterior[k];
          start = ch.samples.row(k).transpose();
        }
    if (start.size() > 0) mo.extra_starts.push_back(start);
  }
  const MapResult r = map_estimate(problem, c.calibration.map_starts, c.calibration.map_seed, mo);
  const auto names = problem.parameter_names();
  json theta = json::object();
  for (std::size_t i = 0; i < names.size(); ++i) theta[names[i]] = r.theta[static_cast<Eigen::Index>(i)];
  io::write_json(c.artifact(c.paths.map), {{"schema_version", io::kSchemaVersion},
                                           {"kind", "map"},
                                           {"parameters", names},
                                           {"theta", io::vector_to_json(r.theta)},
                                           {"values", theta},
                                           {"log_posterior", r.log_posterior},
                                           {"feasible_starts", r.feasible_starts}});

  const ParameterLayout l = problem.layout();
  const std::span<const double> x(r.theta.data(), static_cast<std::size_t>(l.n_x));
  const Eigen::VectorXd sur = predict_series(s, x);
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(sur.size());
  if (l.n_b > 0) delta = discrepancy(std::span<const double>(r.theta.data() + l.b_offset, static_cast<std::size_t>(l.n_b)), obs.times);
  std::vector<std::vector<std::string>> rows;
  std::size_t negatives = 0;
  for (Eigen::Index t = 0; t < sur.size(); ++t) {
    const double corrected = sur[t] + delta[t];
    const bool neg = sur[t] < 0.0 || corrected < 0.0;
    negatives += neg;
    rows.push_back({fmt(obs.times[static_cast<std::size_t>(t)]), fmt(obs.y[t]), fmt(sur[t]), fmt(delta[t]),
                    fmt(corrected), neg ? "1" : "0"});
  }
  io::write_text_csv(c.artifact(c.paths.map_prediction),
                     std::vector<std::string>{"t", "observed", "surrogate", "discrepancy", "corrected", "negative"}, rows);
  log::info("MAP log-posterior " + fmt(r.log_posterior) + "; " + std::to_string(negatives) +
            " time points with negative predicted outflow (kept and flagged)");
}

void cmd_summarize(const PipelineConfig& c) {
  StageTimer timer("summarize");
  std::vector<std::string> names;
  const auto chains = chains_from_json(io::read_json(need(c, c.paths.chains, "calibrate")), &names);
  std::optional<Eigen::VectorXd> map;
  if (fs::exists(c.artifact(c.paths.map))) {
    const json mj = io::read_json(c.artifact(c.paths.map));
    io::check_schema_version(mj, "map");
    map = io::vector_from_json(mj.at("theta"));
  } else {
    log::warning("no " + c.paths.map + "; run `uq map` to fill the mode column");
  }
  const PosteriorSummary ps = summarize(chains, c.calibration.burn_in, c.calibration.summary_thin, names, map);
  std::vector<std::vector<std::string>> rows, kde_rows;
  for (std::size_t j = 0; j < ps.parameters.size(); ++j) {
    const ParameterSummary& p = ps.parameters[j];
    std::vector<std::string> r{p.name, fmt(p.mean), map ? fmt((*map)[static_cast<Eigen::Index>(j)]) : "nan", fmt(p.sd)};
    for (double q : p.quantiles) r.push_back(fmt(q));
    r.push_back(fmt(p.rhat));
    rows.push_back(std::move(r));
    for (Eigen::Index g = 0; g < p.density.grid.size(); ++g)
      kde_rows.push_back({p.name, fmt(p.density.grid[g]), fmt(p.density.density[g])});
    if (p.rhat > 1.1) log::warning(p.name + ": split R-hat " + fmt(p.rhat) + " > 1.1");
  }
  io::write_text_csv(c.artifact(c.paths.summary),
                     std::vector<std::string>{"parameter", "mean", "mode", "sd", "q2.5", "q25", "q50", "q75", "q97.5", "rhat"},
                     rows);
  io::write_text_csv(c.artifact(c.paths.kde), std::vector<std::string>{"parameter", "x", "density"}, kde_rows);
  log::info("summarized " + std::to_string(ps.pooled_samples) + " pooled samples (thin " + std::to_string(ps.thin) + ")");
}

}  // namespace

ForcingSeries load_forcing(const PipelineConfig& c) {
  if (c.forcing.synthetic) return synthetic_storm(c.forcing.steps, c.forcing.dt, c.forcing.scale);
  require(fs::exists(c.forcing.path), ErrorKind::missing_artifact, "forcing file " + c.forcing.path.string() + " not found");
  const io::CsvTable t = io::read_csv(c.forcing.path);
  const int ct = t.column("t"), ci = t.column("intensity");
  require(ct >= 0 && ci >= 0, ErrorKind::shape_error, c.forcing.path.string() + ": needs columns t and intensity");
  ForcingSeries f;
  for (Eigen::Index i = 0; i < t.values.rows(); ++i) {
    f.times.push_back(t.values(i, ct));
    f.intensities.push_back(t.values(i, ci));
  }
  f.validate();
  return f;
}

Eigen::VectorXd synthetic_observations(const PipelineConfig& c, const ForcingSeries& forcing) {
  const ObservationConfig& o = c.observations;
  Eigen::VectorXd y = toy_catchment(o.truth, forcing);
  if (!o.discrepancy.empty()) y += discrepancy(o.discrepancy, forcing.times);
  Rng rng(derive_seed(o.seed, 0));
  std::normal_distribution<double> normal;
  const double innov = o.sigma * std::sqrt(1.0 - o.rho * o.rho);
  double e = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    e = i == 0 ? o.sigma * normal(rng) : o.rho * e + innov * normal(rng);
    y[i] += e;
  }
  return y;
}

CalibrationProblem build_problem(const PipelineConfig& c, const MultiOutputSurrogate& surrogate,
                                 const Eigen::VectorXd& data, const std::vector<double>& times) {
  require(data.size() == surrogate.rb.output_size(), ErrorKind::shape_error,
          "observations have " + std::to_string(data.size()) + " points, surrogate predicts " +
              std::to_string(surrogate.rb.output_size()));
  CalibrationProblem p;
  p.forward = [&surrogate](std::span<const double> x) { return predict_series(surrogate, x); };
  p.data = data;
  p.times = times;
  for (const auto& pc : c.parameters) {
    p.x_priors.push_back(pc.prior);
    p.x_names.push_back(pc.name);
  }
  if (c.calibration.correlated)
    p.error = CorrelatedDiscrepancyError::with_defaults(c.calibration.discrepancy_degree);
  else
    p.error = IidError{};
  p.validate();
  return p;
}

void run_command(const std::string& command, const PipelineConfig& config, const CommandOptions& options) {
  fs::create_directories(config.paths.workdir);
  if (command == "design") cmd_design(config);
  else if (command == "simulate") cmd_simulate(config);
  else if (command == "fit") cmd_fit(config);
  else if (command == "predict") cmd_predict(config, options);
  else if (command == "sobol") cmd_sobol(config, options);
  else if (command == "calibrate") cmd_calibrate(config);
  else if (command == "map") cmd_map(config);
  else if (command == "summarize") cmd_summarize(config);
  else fail(ErrorKind::invalid_argument, "unknown command '" + command + "'");
}

int exit_code_for(const std::exception& e) {
  if (const auto* ue = dynamic_cast<const Error*>(&e)) return is_numerical(ue->kind()) ? 3 : 2;
  if (dynamic_cast<const nlohmann::json::exception*>(&e)) return 2;
  return 3;
}

}  // namespace uq
