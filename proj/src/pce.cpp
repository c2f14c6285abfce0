#include "uq/pce.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <string>

#include "uq/error.hpp"
#include "uq/log.hpp"

namespace uq {
namespace {

constexpr double kLeverageLimit = 1.0 - 1e-12;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double sample_variance(const Eigen::VectorXd& y) {
  const double n = static_cast<double>(y.size());
  return (y.array() - y.mean()).square().sum() / (n - 1.0);
}

void check_target(const Eigen::VectorXd& y) {
  require(y.allFinite(), ErrorKind::invalid_argument, "targets contain non-finite values");
  const double scale = y.cwiseAbs().maxCoeff();
  const double var = sample_variance(y);
  require(var > 0.0 && std::sqrt(var) > 1e-14 * scale, ErrorKind::degenerate_target,
          "target has zero variance");
}

// Least squares on a growing column set via classical Gram-Schmidt with one
// reorthogonalization pass;
// tracks residuals and hat-matrix diagonal for the analytic LOO error.
class IncrementalLeastSquares {
 public:
  explicit IncrementalLeastSquares(const Eigen::VectorXd& y)
      : y_(y), variance_(sample_variance(y)) {
    reset();
  }

  void reset() {
    n_ = 0;
    h_ = Eigen::VectorXd::Zero(y_.size());
    r_ = y_;
  }

  bool add(const Eigen::VectorXd& column) {
    if (n_ == q_.cols()) q_.conservativeResize(y_.size(), std::max<Eigen::Index>(16, 2 * n_));
    Eigen::VectorXd v = column;
    const double norm0 = column.norm();
    const auto q = q_.leftCols(n_);
    for (int pass = 0; pass < 2; ++pass) v.noalias() -= q * (q.transpose() * v);
    const double norm = v.norm();
    if (!(norm > 1e-10 * norm0)) return false;
    v /= norm;
    h_ += v.cwiseAbs2();
    r_ -= v.dot(r_) * v;
    q_.col(n_++) = v;
    return true;
  }

  std::size_t columns() const { return static_cast<std::size_t>(n_); }

  /// NaN when some leverage saturates.
  double loo() const {
    if (h_.maxCoeff() >= kLeverageLimit) return kNaN;
    return (r_.array() / (1.0 - h_.array())).square().mean() / variance_;
  }

 private:
  const Eigen::VectorXd& y_;
  double variance_;
  Eigen::MatrixXd q_;
  Eigen::Index n_ = 0;
  Eigen::VectorXd h_;
  Eigen::VectorXd r_;
};

Eigen::MatrixXd gather_columns(const Eigen::MatrixXd& psi, std::span<const int> cols) {
  Eigen::MatrixXd d(psi.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) d.col(static_cast<Eigen::Index>(j)) = psi.col(cols[j]);
  return d;
}

struct ComponentFit {
  SparsePce pce;
  std::exception_ptr error;
};

std::vector<std::size_t> admissible_sizes(int m, const MultiFitOptions& options) {
  require(options.degree_min >= 0 && options.degree_min <= options.degree_max,
          ErrorKind::invalid_argument, "degree range is empty");
  std::vector<std::size_t> sizes;
  for (int d = options.degree_min; d <= options.degree_max; ++d) {
    const std::size_t n = total_degree_cardinality(m, d);
    if (n > options.candidate_cap) {
      log::warning("degree " + std::to_string(d) + " skipped: " + std::to_string(n) +
                   " candidates exceed the cap of " + std::to_string(options.candidate_cap));
      break;
    }
    sizes.push_back(n);
  }
  require(!sizes.empty(), ErrorKind::basis_too_large,
          "no degree in range fits under the candidate cap");
  return sizes;
}

SparsePce fit_over_degrees(const BasisSpec& spec, const Eigen::MatrixXd& psi_max,
                           std::span<const MultiIndex> candidates_max,
                           std::span<const std::size_t> sizes, const Eigen::VectorXd& targets,
                           const MultiFitOptions& options) {
  SparsePce best;
  bool have = false;
  int stale = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const int degree = options.degree_min + static_cast<int>(i);
    SparsePce fit = fit_lar_matrix(spec, psi_max.leftCols(static_cast<Eigen::Index>(sizes[i])),
                                   targets, candidates_max.first(sizes[i]), options.lar);
    fit.degree_selected = degree;
    if (!have || fit.loo_normalized < best.loo_normalized) {
      best = std::move(fit);
      have = true;
      stale = 0;
    } else if (++stale >= options.degree_patience) {
      break;
    }
  }
  return best;
}

MultiOutputSurrogate fit_multi_impl(const ExperimentalDesign& design, const Eigen::MatrixXd& outputs,
                                    double target_fraction, const MultiFitOptions& options,
                                    bool parallel) {
  require(design.size() == outputs.rows(), ErrorKind::shape_error,
          "design has " + std::to_string(design.size()) + " rows, outputs have " +
              std::to_string(outputs.rows()));
  const BasisSpec spec = BasisSpec::legendre(design.bounds);
  const auto m = static_cast<int>(spec.dimension());
  const std::vector<std::size_t> sizes = admissible_sizes(m, options);
  if (static_cast<std::size_t>(design.size()) <= total_degree_cardinality(m, options.degree_min))
    log::warning("experimental design (K = " + std::to_string(design.size()) +
                 ") is not larger than the smallest candidate set");

  const Eigen::MatrixXd u = standardize_rows(spec, design.points);
  MultiOutputSurrogate surr;
  surr.rb = fit_pca(outputs, target_fraction);
  const Eigen::MatrixXd scores = compress_rows(surr.rb, outputs);

  const int max_degree = options.degree_min + static_cast<int>(sizes.size()) - 1;
  const std::vector<MultiIndex> candidates = total_degree_set(m, max_degree, options.candidate_cap);
  const Eigen::MatrixXd psi = basis_matrix(spec, candidates, u);

  const int r = surr.rb.retained;
  std::vector<ComponentFit> fits(static_cast<std::size_t>(r));
  auto run = [&](int p) {
    try {
      const Eigen::VectorXd z = scores.col(p);
      fits[static_cast<std::size_t>(p)].pce =
          fit_over_degrees(spec, psi, candidates, sizes, z, options);
    } catch (...) {
      fits[static_cast<std::size_t>(p)].error = std::current_exception();
    }
  };
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int p = 0; p < r; ++p) run(p);
  } else {
    for (int p = 0; p < r; ++p) run(p);
  }

  for (int p = 0; p < r; ++p) {
    auto& fit = fits[static_cast<std::size_t>(p)];
    if (!fit.error) continue;
    try {
      std::rethrow_exception(fit.error);
    } catch (const Error& e) {
      fail(e.kind(), "component " + std::to_string(p) + ": " + e.what());
    }
  }
  surr.pces.reserve(static_cast<std::size_t>(r));
  for (auto& fit : fits) surr.pces.push_back(std::move(fit.pce));
  return surr;
}

std::vector<std::vector<double>> shared_tables(const MultiOutputSurrogate& surr,
                                               const Eigen::VectorXd& u) {
  const BasisSpec& spec = surr.spec();
  std::vector<int> max_deg(spec.dimension(), 0);
  for (const auto& pce : surr.pces)
    for (const auto& a : pce.active)
      for (std::size_t i = 0; i < max_deg.size(); ++i) max_deg[i] = std::max(max_deg[i], a[i]);
  std::vector<std::vector<double>> table(spec.dimension());
  for (std::size_t i = 0; i < table.size(); ++i) {
    table[i].resize(static_cast<std::size_t>(max_deg[i]) + 1);
    eval_univariate_all(spec.families[i], u[static_cast<Eigen::Index>(i)], table[i]);
  }
  return table;
}

}  // namespace

double loo_error(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets, bool correction) {
  const Eigen::Index k = design.rows();
  const Eigen::Index p = design.cols();
  require(targets.size() == k, ErrorKind::shape_error, "target length does not match design rows");
  require(p >= 1 && k > p, ErrorKind::invalid_argument, "need more samples than columns");
  const double var = sample_variance(targets);
  require(var > 0.0, ErrorKind::degenerate_target, "target has zero variance");

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(design);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
  const double rmax = r.diagonal().cwiseAbs().maxCoeff();
  require(r.diagonal().cwiseAbs().minCoeff() > 1e-12 * rmax, ErrorKind::ill_conditioned,
          "design columns are rank deficient");
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(k, p);
  const Eigen::VectorXd h = q.rowwise().squaredNorm();
  require(h.maxCoeff() < kLeverageLimit, ErrorKind::leverage_saturation,
          "a sample has leverage of one");
  const Eigen::VectorXd resid = targets - q * (q.transpose() * targets);
  double loo = (resid.array() / (1.0 - h.array())).square().mean() / var;
  if (correction) {
    const Eigen::MatrixXd rinv =
        r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
    const double kd = static_cast<double>(k);
    loo *= kd / (kd - static_cast<double>(p)) * (1.0 + rinv.squaredNorm());
  }
  return loo;
}

SparsePce fit_lar(const BasisSpec& spec, const Eigen::MatrixXd& u_design,
                  const Eigen::VectorXd& targets, std::span<const MultiIndex> candidates,
                  const LarFitOptions& options) {
  spec.validate();
  return fit_lar_matrix(spec, basis_matrix(spec, candidates, u_design), targets, candidates, options);
}

SparsePce fit_lar_matrix(const BasisSpec& spec, const Eigen::MatrixXd& psi,
                         const Eigen::VectorXd& targets, std::span<const MultiIndex> candidates,
                         const LarFitOptions& options) {
  const Eigen::Index k = psi.rows();
  require(k > 1, ErrorKind::invalid_argument, "need more than one sample");
  require(targets.size() == k, ErrorKind::shape_error, "target length does not match design");
  require(!candidates.empty(), ErrorKind::invalid_argument, "candidate set is empty");
  require(static_cast<Eigen::Index>(candidates.size()) == psi.cols(), ErrorKind::shape_error,
          "basis matrix does not match candidate set");
  check_target(targets);

  int zero = -1;
  std::vector<int> regressor_to_candidate;
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    if (candidates[j].is_zero()) {
      zero = static_cast<int>(j);
    } else {
      regressor_to_candidate.push_back(static_cast<int>(j));
    }
  }
  require(zero >= 0, ErrorKind::invalid_argument, "candidate set lacks the constant term");

  const Eigen::MatrixXd regressors = gather_columns(psi, regressor_to_candidate);
  IncrementalLeastSquares ols(targets);
  ols.add(psi.col(zero));

  auto model_loo = [&](const std::vector<int>& active_candidates) {
    if (!options.loo_correction) return ols.loo();
    std::vector<int> cols{zero};
    cols.insert(cols.end(), active_candidates.begin(), active_candidates.end());
    try {
      return loo_error(gather_columns(psi, cols), targets, true);
    } catch (const Error&) {
      return kNaN;
    }
  };

  std::vector<int> best_active;
  double best_loo = model_loo({});
  if (std::isnan(best_loo)) fail(ErrorKind::leverage_saturation, "constant model saturates");

  const std::size_t max_active =
      std::min<std::size_t>(regressor_to_candidate.size(), static_cast<std::size_t>(k - 2));
  const std::size_t patience =
      options.patience > 0 ? options.patience : std::max<std::size_t>(10, max_active / 10);
  std::size_t stale = 0;
  std::vector<int> current;

  auto visit = [&](const LarStep& step) {
    current.clear();
    for (int j : step.active) current.push_back(regressor_to_candidate[static_cast<std::size_t>(j)]);
    if (step.dropped >= 0) {
      ols.reset();
      ols.add(psi.col(zero));
      for (int c : current)
        if (!ols.add(psi.col(c))) return false;
    } else if (!ols.add(psi.col(current.back()))) {
      return false;  // collinear in the unscaled basis: stop at the last good point
    }
    const double loo = model_loo(current);
    if (std::isnan(loo)) return false;
    if (loo < best_loo) {
      best_loo = loo;
      best_active = current;
      stale = 0;
    } else if (++stale >= patience) {
      return false;
    }
    return true;
  };
  const LarPath path = lar_path(regressors, targets, options.lar, visit);
  if (path.ill_conditioned)
    log::debug("lar path stopped at an ill-conditioned step after " +
               std::to_string(path.steps.size()) + " steps");

  std::vector<int> cols{zero};
  cols.insert(cols.end(), best_active.begin(), best_active.end());
  std::sort(cols.begin(), cols.end(),
            [&](int a, int b) { return candidates[static_cast<std::size_t>(a)] < candidates[static_cast<std::size_t>(b)]; });

  const Eigen::MatrixXd d = gather_columns(psi, cols);
  const Eigen::VectorXd coef = d.colPivHouseholderQr().solve(targets);

  SparsePce pce;
  pce.spec = spec;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    pce.active.push_back(candidates[static_cast<std::size_t>(cols[j])]);
    pce.coeffs.push_back(coef[static_cast<Eigen::Index>(j)]);
  }
  pce.loo_normalized = loo_error(d, targets, options.loo_correction);
  pce.degree_selected = 0;
  for (const auto& a : pce.active) pce.degree_selected = std::max(pce.degree_selected, a.total_degree());
  return pce;
}

double predict(const SparsePce& pce, std::span<const double> x, bool allow_extrapolation) {
  const Eigen::VectorXd u =
      allow_extrapolation ? standardize_unchecked(pce.spec, x) : standardize(pce.spec, x);
  return eval_expansion(pce.active, pce.coeffs, pce.spec, std::span<const double>(u.data(), u.size()));
}

PceMoments moments(const SparsePce& pce) {
  PceMoments m;
  for (std::size_t j = 0; j < pce.active.size(); ++j) {
    if (pce.active[j].is_zero()) {
      m.mean += pce.coeffs[j];
    } else {
      m.variance += pce.coeffs[j] * pce.coeffs[j];
    }
  }
  return m;
}

void MultiOutputSurrogate::validate() const {
  require(!pces.empty(), ErrorKind::invalid_argument, "surrogate has no components");
  require(static_cast<int>(pces.size()) == rb.retained, ErrorKind::shape_error,
          "component count does not match retained principal components");
  for (const auto& pce : pces)
    require(pce.spec == pces.front().spec, ErrorKind::incompatible_expansions,
            "components use different bases");
}

SparsePce fit_degree_range(const BasisSpec& spec, const Eigen::MatrixXd& u_design,
                           const Eigen::VectorXd& targets, const MultiFitOptions& options) {
  spec.validate();
  const auto m = static_cast<int>(spec.dimension());
  const std::vector<std::size_t> sizes = admissible_sizes(m, options);
  const int max_degree = options.degree_min + static_cast<int>(sizes.size()) - 1;
  const std::vector<MultiIndex> candidates = total_degree_set(m, max_degree, options.candidate_cap);
  const Eigen::MatrixXd psi = basis_matrix(spec, candidates, u_design);
  return fit_over_degrees(spec, psi, candidates, sizes, targets, options);
}

MultiOutputSurrogate fit_multi(const ExperimentalDesign& design, const Eigen::MatrixXd& outputs,
                               double target_fraction, const MultiFitOptions& options) {
  return fit_multi_impl(design, outputs, target_fraction, options, true);
}

MultiOutputSurrogate fit_multi_serial(const ExperimentalDesign& design,
                                      const Eigen::MatrixXd& outputs, double target_fraction,
                                      const MultiFitOptions& options) {
  return fit_multi_impl(design, outputs, target_fraction, options, false);
}

Eigen::VectorXd predict_scores(const MultiOutputSurrogate& surr, std::span<const double> x,
                               bool allow_extrapolation) {
  const BasisSpec& spec = surr.spec();
  const Eigen::VectorXd u = allow_extrapolation ? standardize_unchecked(spec, x) : standardize(spec, x);
  const auto table = shared_tables(surr, u);
  Eigen::VectorXd z(static_cast<Eigen::Index>(surr.pces.size()));
  for (std::size_t p = 0; p < surr.pces.size(); ++p) {
    const SparsePce& pce = surr.pces[p];
    double sum = 0.0;
    for (std::size_t j = 0; j < pce.active.size(); ++j) {
      double v = pce.coeffs[j];
      const auto& e = pce.active[j].exponents();
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] != 0) v *= table[i][static_cast<std::size_t>(e[i])];
      sum += v;
    }
    z[static_cast<Eigen::Index>(p)] = sum;
  }
  return z;
}

Eigen::VectorXd predict_series(const MultiOutputSurrogate& surr, std::span<const double> x,
                               bool allow_extrapolation) {
  const Eigen::VectorXd z = predict_scores(surr, x, allow_extrapolation);
  return reconstruct(surr.rb, std::span<const double>(z.data(), static_cast<std::size_t>(z.size())));
}

}  // namespace uq
