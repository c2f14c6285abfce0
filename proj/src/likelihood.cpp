#include <atomic>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "uq/calib.hpp"
#include "uq/error.hpp"
#include "uq/log.hpp"

namespace uq {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kLog2Pi = std::log(2.0 * std::numbers::pi);

void check_lengths(std::span<const double> y, std::span<const double> m) {
  require(y.size() == m.size(), ErrorKind::shape_error,
          "data length " + std::to_string(y.size()) + " differs from prediction length " +
              std::to_string(m.size()));
  require(!y.empty(), ErrorKind::invalid_argument, "empty data vector");
}

std::atomic<bool> g_dense_warned{false};

}  // namespace

ParameterLayout CalibrationProblem::layout() const {
  ParameterLayout l;
  l.n_x = static_cast<int>(x_priors.size());
  int next = l.n_x;
  if (const auto* iid = std::get_if<IidError>(&error)) {
    if (!iid->known_sigma) l.sigma = next++;
  } else {
    const auto& corr = std::get<CorrelatedDiscrepancyError>(error);
    l.b_offset = next;
    l.n_b = corr.degree + 1;
    next += l.n_b;
    l.sigma = next++;
    l.tau = next++;
  }
  l.size = next;
  return l;
}

std::vector<std::string> CalibrationProblem::parameter_names() const {
  const ParameterLayout l = layout();
  std::vector<std::string> names(static_cast<std::size_t>(l.size));
  for (int i = 0; i < l.n_x; ++i)
    names[static_cast<std::size_t>(i)] =
        static_cast<std::size_t>(i) < x_names.size() ? x_names[static_cast<std::size_t>(i)] : "x" + std::to_string(i + 1);
  for (int a = 0; a < l.n_b; ++a) names[static_cast<std::size_t>(l.b_offset + a)] = "b" + std::to_string(a);
  if (l.sigma >= 0) names[static_cast<std::size_t>(l.sigma)] = "sigma";
  if (l.tau >= 0) names[static_cast<std::size_t>(l.tau)] = "tau";
  return names;
}

std::vector<PriorSpec> CalibrationProblem::priors() const {
  const ParameterLayout l = layout();
  std::vector<PriorSpec> out(x_priors.begin(), x_priors.end());
  if (const auto* iid = std::get_if<IidError>(&error)) {
    if (l.sigma >= 0) out.push_back(iid->sigma);
  } else {
    const auto& corr = std::get<CorrelatedDiscrepancyError>(error);
    out.insert(out.end(), corr.b.begin(), corr.b.end());
    out.push_back(corr.sigma);
    out.push_back(corr.tau);
  }
  return out;
}

void CalibrationProblem::validate() const {
  require(static_cast<bool>(forward), ErrorKind::invalid_argument, "calibration needs a forward model");
  require(data.size() >= 1, ErrorKind::invalid_argument, "calibration needs data");
  require(static_cast<Eigen::Index>(times.size()) == data.size(), ErrorKind::shape_error,
          "time grid and data differ in length");
  for (std::size_t i = 1; i < times.size(); ++i)
    require(times[i] > times[i - 1], ErrorKind::invalid_argument, "time grid must be strictly increasing");
  require(is_uniform_grid(times), ErrorKind::invalid_argument, "time grid must be uniform");
  if (const auto* iid = std::get_if<IidError>(&error)) {
    if (iid->known_sigma) require(*iid->known_sigma > 0.0, ErrorKind::invalid_argument, "known sigma must be positive");
  } else {
    const auto& corr = std::get<CorrelatedDiscrepancyError>(error);
    require(corr.degree >= 0, ErrorKind::invalid_argument, "discrepancy degree must be >= 0");
    require(static_cast<int>(corr.b.size()) == corr.degree + 1, ErrorKind::shape_error,
            "need one coefficient prior per discrepancy term");
  }
  for (const auto& p : priors()) validate_prior(p);
}

double log_prior(const CalibrationProblem& problem, std::span<const double> theta) {
  const auto priors = problem.priors();
  require(theta.size() == priors.size(), ErrorKind::dimension_mismatch,
          "parameter vector has " + std::to_string(theta.size()) + " entries, model expects " +
              std::to_string(priors.size()));
  double sum = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double v = log_density(priors[i], theta[i]);
    if (v == kNegInf) return kNegInf;
    sum += v;
  }
  return sum;
}

double log_likelihood_iid(std::span<const double> y, std::span<const double> pred, double sigma) {
  check_lengths(y, pred);
  require(sigma > 0.0, ErrorKind::invalid_argument, "sigma must be positive");
  double ss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) ss += (y[i] - pred[i]) * (y[i] - pred[i]);
  const double n = static_cast<double>(y.size());
  return -0.5 * n * (kLog2Pi + 2.0 * std::log(sigma)) - ss / (2.0 * sigma * sigma);
}

Eigen::VectorXd discrepancy(std::span<const double> b, std::span<const double> times) {
  require(!times.empty(), ErrorKind::invalid_argument, "empty time grid");
  require(!b.empty(), ErrorKind::invalid_argument, "discrepancy needs at least one coefficient");
  const double t0 = times.front();
  const double span = times.back() - times.front();
  Eigen::VectorXd delta(static_cast<Eigen::Index>(times.size()));
  std::vector<double> psi(b.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double s = span > 0.0 ? std::clamp(2.0 * (times[i] - t0) / span - 1.0, -1.0, 1.0) : 0.0;
    eval_univariate_all(Family::legendre, s, psi);
    double v = 0.0;
    for (std::size_t a = 0; a < b.size(); ++a) v += b[a] * psi[a];
    delta[static_cast<Eigen::Index>(i)] = v;
  }
  return delta;
}

bool is_uniform_grid(std::span<const double> times) {
  if (times.size() < 3) return true;
  const double step = times[1] - times[0];
  for (std::size_t i = 1; i < times.size(); ++i)
    if (std::abs((times[i] - times[i - 1]) - step) > 1e-9 * std::abs(step)) return false;
  return true;
}

double log_likelihood_corr_dense(std::span<const double> y, std::span<const double> mean,
                                 double sigma, double tau, std::span<const double> times) {
  check_lengths(y, mean);
  require(times.size() == y.size(), ErrorKind::shape_error, "time grid and data differ in length");
  require(sigma > 0.0 && tau > 0.0, ErrorKind::invalid_argument, "sigma and tau must be positive");
  const auto n = static_cast<Eigen::Index>(y.size());
  Eigen::MatrixXd cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      cov(i, j) = sigma * sigma * std::exp(-std::abs(times[static_cast<std::size_t>(i)] - times[static_cast<std::size_t>(j)]) / tau);
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  require(llt.info() == Eigen::Success, ErrorKind::numerical_failure,
          "covariance matrix is not positive definite");
  Eigen::VectorXd r(n);
  for (Eigen::Index i = 0; i < n; ++i) r[i] = y[static_cast<std::size_t>(i)] - mean[static_cast<std::size_t>(i)];
  const Eigen::VectorXd w = llt.matrixL().solve(r);
  const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return -0.5 * (static_cast<double>(n) * kLog2Pi + logdet + w.squaredNorm());
}

double log_likelihood_corr(std::span<const double> y, std::span<const double> mean, double sigma,
                           double tau, std::span<const double> times) {
  check_lengths(y, mean);
  require(times.size() == y.size(), ErrorKind::shape_error, "time grid and data differ in length");
  require(sigma > 0.0 && tau > 0.0, ErrorKind::invalid_argument, "sigma and tau must be positive");
  if (!is_uniform_grid(times)) {
    if (!g_dense_warned.exchange(true))
      log::warning("non-uniform time grid: correlated likelihood falls back to dense Cholesky");
    return log_likelihood_corr_dense(y, mean, sigma, tau, times);
  }
  const std::size_t n = y.size();
  const double dt = n > 1 ? times[1] - times[0] : 0.0;
  const double rho = std::exp(-dt / tau);
  const double one_minus_rho2 = -std::expm1(-2.0 * dt / tau);
  const double var = sigma * sigma;
  const double r0 = y[0] - mean[0];
  double innovations = 0.0;
  double prev = r0;
  for (std::size_t k = 1; k < n; ++k) {
    const double r = y[k] - mean[k];
    const double e = r - rho * prev;
    innovations += e * e;
    prev = r;
  }
  const double steps = static_cast<double>(n - 1);
  const double log_terms = static_cast<double>(n) * (kLog2Pi + std::log(var)) +
                           (n > 1 ? steps * std::log(one_minus_rho2) : 0.0);
  const double quad = r0 * r0 / var + (n > 1 ? innovations / (var * one_minus_rho2) : 0.0);
  return -0.5 * (log_terms + quad);
}

double log_likelihood(const CalibrationProblem& problem, std::span<const double> theta,
                      const Eigen::VectorXd& prediction) {
  const ParameterLayout l = problem.layout();
  const std::span<const double> y(problem.data.data(), static_cast<std::size_t>(problem.data.size()));
  if (const auto* iid = std::get_if<IidError>(&problem.error)) {
    const double sigma = iid->known_sigma ? *iid->known_sigma : theta[static_cast<std::size_t>(l.sigma)];
    if (!(sigma > 0.0)) return kNegInf;
    return log_likelihood_iid(y, std::span<const double>(prediction.data(), static_cast<std::size_t>(prediction.size())), sigma);
  }
  const double sigma = theta[static_cast<std::size_t>(l.sigma)];
  const double tau = theta[static_cast<std::size_t>(l.tau)];
  if (!(sigma > 0.0) || !(tau > 0.0)) return kNegInf;
  const Eigen::VectorXd mean =
      prediction + discrepancy(theta.subspan(static_cast<std::size_t>(l.b_offset), static_cast<std::size_t>(l.n_b)), problem.times);
  return log_likelihood_corr(y, std::span<const double>(mean.data(), static_cast<std::size_t>(mean.size())), sigma, tau,
                             problem.times);
}

double log_posterior(const CalibrationProblem& problem, std::span<const double> theta) {
  const double lp = log_prior(problem, theta);
  if (lp == kNegInf) return kNegInf;
  const int n_x = problem.layout().n_x;
  const Eigen::VectorXd pred = problem.forward(theta.first(static_cast<std::size_t>(n_x)));
  require(pred.size() == problem.data.size(), ErrorKind::shape_error,
          "forward model output length differs from data length");
  return lp + log_likelihood(problem, theta, pred);
}

}  // namespace uq
