#include "uq/mcmc.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <string>

#include "uq/error.hpp"

namespace uq {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kInitAttempts = 50;

// Posterior evaluation with the prior list and the forward prediction cached.
class PosteriorState {
 public:
  PosteriorState(const CalibrationProblem& problem, std::vector<PriorSpec> priors)
      : problem_(problem), priors_(std::move(priors)), n_x_(problem.layout().n_x) {}

  double log_prior(const Eigen::VectorXd& theta) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < priors_.size(); ++i) {
      const double v = log_density(priors_[i], theta[static_cast<Eigen::Index>(i)]);
      if (v == kNegInf) return kNegInf;
      sum += v;
    }
    return sum;
  }

  // Evaluates theta; `prediction` is reused when x is unchanged.
  double evaluate(const Eigen::VectorXd& theta, bool x_changed, Eigen::VectorXd& prediction) const {
    const double lp = log_prior(theta);
    if (lp == kNegInf) return kNegInf;
    try {
      if (x_changed)
        prediction = problem_.forward(std::span<const double>(theta.data(), static_cast<std::size_t>(n_x_)));
      if (prediction.size() != problem_.data.size())
        fail(ErrorKind::shape_error, "forward model output length differs from data length");
      const double ll = log_likelihood(problem_, std::span<const double>(theta.data(), static_cast<std::size_t>(theta.size())), prediction);
      return std::isnan(ll) ? kNegInf : lp + ll;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::shape_error) throw;
      return kNegInf;
    }
  }

  int n_x() const { return n_x_; }

 private:
  const CalibrationProblem& problem_;
  std::vector<PriorSpec> priors_;
  int n_x_;
};

struct BlockProposal {
  Block indices;
  Eigen::MatrixXd factor;  // lower Cholesky factor of the proposal covariance
  bool touches_x = false;
};

std::vector<BlockProposal> make_proposals(const CalibrationProblem& problem, const RwmConfig& config,
                                          const std::vector<Block>& blocks,
                                          const std::vector<PriorSpec>& priors) {
  const std::size_t d = priors.size();
  std::vector<double> scales = config.proposal_scales;
  if (scales.empty()) {
    for (const auto& p : priors) scales.push_back(prior_sd(p) / 10.0);
  }
  require(scales.size() == d, ErrorKind::dimension_mismatch, "one proposal scale per parameter required");
  for (double s : scales) require(s > 0.0, ErrorKind::invalid_argument, "proposal scales must be positive");
  require(config.block_covariances.empty() || config.block_covariances.size() == blocks.size(),
          ErrorKind::shape_error, "one proposal covariance per block required");

  const int n_x = problem.layout().n_x;
  std::vector<bool> covered(d, false);
  std::vector<BlockProposal> out;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    BlockProposal prop;
    prop.indices = blocks[b];
    require(!prop.indices.empty(), ErrorKind::invalid_argument, "empty proposal block");
    const auto n = static_cast<Eigen::Index>(prop.indices.size());
    for (int i : prop.indices) {
      require(i >= 0 && static_cast<std::size_t>(i) < d, ErrorKind::invalid_argument, "block index out of range");
      require(!covered[static_cast<std::size_t>(i)], ErrorKind::invalid_argument, "parameter appears in two blocks");
      covered[static_cast<std::size_t>(i)] = true;
      prop.touches_x = prop.touches_x || i < n_x;
    }
    if (!config.block_covariances.empty()) {
      const Eigen::MatrixXd& cov = config.block_covariances[b];
      require(cov.rows() == n && cov.cols() == n, ErrorKind::shape_error, "proposal covariance has wrong size");
      Eigen::LLT<Eigen::MatrixXd> llt(cov);
      require(llt.info() == Eigen::Success, ErrorKind::invalid_argument, "proposal covariance is not positive definite");
      prop.factor = llt.matrixL();
    } else {
      prop.factor = Eigen::MatrixXd::Zero(n, n);
      for (Eigen::Index i = 0; i < n; ++i) prop.factor(i, i) = scales[static_cast<std::size_t>(prop.indices[static_cast<std::size_t>(i)])];
    }
    out.push_back(std::move(prop));
  }
  for (std::size_t i = 0; i < d; ++i)
    require(covered[i], ErrorKind::invalid_argument, "parameter " + std::to_string(i) + " is in no block");
  return out;
}

Chain run_chain(const CalibrationProblem& problem, const RwmConfig& config,
                const std::vector<BlockProposal>& proposals, const std::vector<PriorSpec>& priors,
                int chain_index) {
  const auto d = static_cast<Eigen::Index>(priors.size());
  PosteriorState post(problem, priors);
  Chain chain;
  chain.seed = derive_seed(config.seed, static_cast<std::uint64_t>(chain_index));
  Rng rng(chain.seed);
  std::normal_distribution<double> normal;

  Eigen::VectorXd theta(d);
  Eigen::VectorXd prediction;
  double lp = kNegInf;
  const bool given = !config.initial_points.empty();
  for (int attempt = 0; attempt < kInitAttempts && lp == kNegInf; ++attempt) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const auto& prior = priors[static_cast<std::size_t>(i)];
      double base = prior_mean(prior);
      if (given) {
        const Eigen::VectorXd& start = config.initial_points[static_cast<std::size_t>(chain_index) % config.initial_points.size()];
        require(start.size() == d, ErrorKind::dimension_mismatch, "initial point has wrong dimension");
        base = start[i];
      }
      const double jitter = (given && attempt == 0) ? 0.0 : config.init_jitter * prior_sd(prior) * normal(rng);
      theta[i] = base + jitter;
    }
    lp = post.evaluate(theta, true, prediction);
  }
  require(lp != kNegInf, ErrorKind::cannot_initialize,
          "chain " + std::to_string(chain_index) + ": log-posterior is -inf at every start");

  const std::size_t n_blocks = proposals.size();
  std::vector<double> log_scale(n_blocks, 0.0);
  chain.accepted.assign(n_blocks, 0);
  chain.proposed.assign(n_blocks, 0);

  Eigen::VectorXd candidate(d);
  Eigen::VectorXd candidate_prediction;
  auto step = [&](std::size_t b) {
    const BlockProposal& prop = proposals[b];
    const auto n = static_cast<Eigen::Index>(prop.indices.size());
    Eigen::VectorXd z(n);
    for (Eigen::Index i = 0; i < n; ++i) z[i] = normal(rng);
    const Eigen::VectorXd delta = std::exp(log_scale[b]) * (prop.factor * z);
    candidate = theta;
    for (Eigen::Index i = 0; i < n; ++i) candidate[prop.indices[static_cast<std::size_t>(i)]] += delta[i];
    const double log_u = std::log(uniform01(rng));
    if (prop.touches_x) {
      candidate_prediction.resize(0);
    } else {
      candidate_prediction = prediction;
    }
    const double lp_new = post.evaluate(candidate, prop.touches_x, candidate_prediction);
    const bool accept = lp_new != kNegInf && log_u < lp_new - lp;
    if (accept) {
      theta.swap(candidate);
      prediction.swap(candidate_prediction);
      lp = lp_new;
    }
    return accept;
  };

  for (int k = 0; k < config.adapt_iterations; ++k) {
    const double gain = 1.0 / std::pow(k + 1.0, 0.6);
    for (std::size_t b = 0; b < n_blocks; ++b) {
      const bool acc = step(b);
      log_scale[b] += gain * ((acc ? 1.0 : 0.0) - config.target_acceptance);
    }
  }

  const int stored = config.n_iter / config.thin;
  chain.samples.resize(stored, d);
  chain.log_posterior.resize(stored);
  for (int k = 0; k < stored * config.thin; ++k) {
    for (std::size_t b = 0; b < n_blocks; ++b) {
      ++chain.proposed[b];
      if (step(b)) ++chain.accepted[b];
    }
    if ((k + 1) % config.thin == 0) {
      chain.samples.row(k / config.thin) = theta.transpose();
      chain.log_posterior[k / config.thin] = lp;
    }
  }

  chain.blocks.reserve(n_blocks);
  chain.proposal_scales.assign(static_cast<std::size_t>(d), 0.0);
  for (std::size_t b = 0; b < n_blocks; ++b) {
    chain.blocks.push_back(proposals[b].indices);
    for (std::size_t i = 0; i < proposals[b].indices.size(); ++i)
      chain.proposal_scales[static_cast<std::size_t>(proposals[b].indices[i])] =
          std::exp(log_scale[b]) * proposals[b].factor.row(static_cast<Eigen::Index>(i)).norm();
  }
  return chain;
}

std::vector<Chain> sample_impl(const CalibrationProblem& problem, const RwmConfig& config, bool parallel) {
  problem.validate();
  require(config.n_iter >= 1 && config.n_chains >= 1, ErrorKind::invalid_argument,
          "need at least one chain and one iteration");
  require(config.thin >= 1 && config.thin <= config.n_iter, ErrorKind::invalid_argument,
          "thin must lie in [1, n_iter]");
  require(config.adapt_iterations >= 0, ErrorKind::invalid_argument, "adapt_iterations must be >= 0");
  const std::vector<PriorSpec> priors = problem.priors();
  const std::vector<Block> blocks = config.blocks.empty() ? default_blocks(problem) : config.blocks;
  const std::vector<BlockProposal> proposals = make_proposals(problem, config, blocks, priors);

  std::vector<Chain> chains(static_cast<std::size_t>(config.n_chains));
  std::vector<std::exception_ptr> errors(chains.size());
  auto run = [&](int c) {
    try {
      chains[static_cast<std::size_t>(c)] = run_chain(problem, config, proposals, priors, c);
    } catch (...) {
      errors[static_cast<std::size_t>(c)] = std::current_exception();
    }
  };
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int c = 0; c < config.n_chains; ++c) run(c);
  } else {
    for (int c = 0; c < config.n_chains; ++c) run(c);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return chains;
}

}  // namespace

std::vector<Block> default_blocks(const CalibrationProblem& problem) {
  const ParameterLayout l = problem.layout();
  if (!problem.correlated()) {
    Block all;
    for (int i = 0; i < l.size; ++i) all.push_back(i);
    return {all};
  }
  Block x, noise{l.sigma, l.tau};
  for (int i = 0; i < l.n_x; ++i) x.push_back(i);
  for (int a = 0; a < l.n_b; ++a) noise.push_back(l.b_offset + a);
  if (x.empty()) return {noise};
  return {x, noise};
}

std::vector<Chain> rwm_sample(const CalibrationProblem& problem, const RwmConfig& config) {
  return sample_impl(problem, config, true);
}

std::vector<Chain> rwm_sample_serial(const CalibrationProblem& problem, const RwmConfig& config) {
  return sample_impl(problem, config, false);
}

}  // namespace uq
