#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "uq/polybasis.hpp"
#include "uq/random.hpp"

namespace uq {

struct TruncatedNormalPrior {
  double mean = 0.0;
  double sd = 1.0;
  double lower = -1.0;
  double upper = 1.0;
};

struct UniformPrior {
  double lower = 0.0;
  double upper = 1.0;
};

struct LaplacePrior {
  double mean = 0.0;
  double scale = 1.0;
};

using PriorSpec = std::variant<TruncatedNormalPrior, UniformPrior, LaplacePrior>;

/// Normal centred on the box midpoint with sd = width / 6, truncated to the box.
TruncatedNormalPrior default_parameter_prior(const Bounds& box);

void validate_prior(const PriorSpec& prior);
/// Normalized log-density; -infinity outside the support.
double log_density(const PriorSpec& prior, double value);
double prior_mean(const PriorSpec& prior);
double prior_sd(const PriorSpec& prior);
double prior_mode(const PriorSpec& prior);
/// Closed support; infinite ends for Laplace.
Bounds prior_support(const PriorSpec& prior);
double sample_prior(const PriorSpec& prior, Rng& rng);

/// Model 1: independent Gaussian noise with unknown level sigma. When
/// known_sigma is set, sigma is not a parameter.
struct IidError {
  PriorSpec sigma = UniformPrior{0.0, 100.0};
  std::optional<double> known_sigma;
};

/// Model 2: polynomial discrepancy in time plus exponentially correlated noise.
struct CorrelatedDiscrepancyError {
  PriorSpec sigma = UniformPrior{0.0, 100.0};
  PriorSpec tau = UniformPrior{0.0, 100.0 * 120.0};
  int degree = 5;
  std::vector<PriorSpec> b;  // degree + 1 entries

  static CorrelatedDiscrepancyError with_defaults(int degree = 5);
};

using ErrorModel = std::variant<IidError, CorrelatedDiscrepancyError>;

/// Forward map x -> predicted series. Called concurrently by parallel chains.
using ForwardModel = std::function<Eigen::VectorXd(std::span<const double>)>;

/// Positions of each parameter group in the flat parameter vector theta.
/// Model 1: (x, sigma). Model 2: (x, b_0..b_M, sigma, tau).
struct ParameterLayout {
  int n_x = 0;
  int b_offset = -1;
  int n_b = 0;
  int sigma = -1;
  int tau = -1;
  int size = 0;
};

struct CalibrationProblem {
  ForwardModel forward;
  Eigen::VectorXd data;
  std::vector<double> times;
  std::vector<PriorSpec> x_priors;
  std::vector<std::string> x_names;
  ErrorModel error = IidError{};

  ParameterLayout layout() const;
  std::size_t dimension() const { return static_cast<std::size_t>(layout().size); }
  std::vector<std::string> parameter_names() const;
  std::vector<PriorSpec> priors() const;  // aligned with theta
  void validate() const;
  bool correlated() const { return std::holds_alternative<CorrelatedDiscrepancyError>(error); }
};

double log_prior(const CalibrationProblem& problem, std::span<const double> theta);

double log_likelihood_iid(std::span<const double> y, std::span<const double> pred, double sigma);

/// delta(t) = sum_a b_a psi_a(s(t)), normalized Legendre in s mapped from
/// [t_0, t_T] onto [-1, 1].
Eigen::VectorXd discrepancy(std::span<const double> b, std::span<const double> times);

/// Gaussian log-density with covariance sigma^2 exp(-|t_i - t_j| / tau).
/// Uniform grids use the O(T) AR(1) innovations form; otherwise a dense
/// Cholesky fallback runs with a warning.
double log_likelihood_corr(std::span<const double> y, std::span<const double> mean, double sigma,
                           double tau, std::span<const double> times);
/// Dense O(T^3) evaluation of the same density.
double log_likelihood_corr_dense(std::span<const double> y, std::span<const double> mean,
                                 double sigma, double tau, std::span<const double> times);

bool is_uniform_grid(std::span<const double> times);

/// Log-likelihood of theta given a precomputed forward prediction.
double log_likelihood(const CalibrationProblem& problem, std::span<const double> theta,
                      const Eigen::VectorXd& prediction);
/// Unnormalized log-posterior; -infinity outside the prior support.
double log_posterior(const CalibrationProblem& problem, std::span<const double> theta);

}  // namespace uq
