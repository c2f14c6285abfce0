#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace uq {

struct LarOptions {
  /// Lasso modification: a coefficient that crosses zero leaves the active set.
  bool lasso_drop = true;
  /// Largest active-set size; 0 means min(eligible columns, K - 2).
  std::size_t max_active = 0;
  /// A joining column whose residual norm (after projecting out the active
  /// columns, unit-norm scaling) is below this is treated as collinear.
  double collinearity_tol = 1e-10;
  /// Correlations below this fraction of the initial maximum end the path.
  double exact_fit_tol = 1e-12;
};

struct LarStep {
  std::vector<int> active;  // regressor columns, in order of entry
  int added = -1;
  int dropped = -1;
};

struct LarPath {
  std::vector<LarStep> steps;
  bool ill_conditioned = false;  // a joining column was collinear; path cut there
};

/// Least-angle regression path of y on the columns of `regressors` (K x P).
/// Columns are centered and scaled to unit norm internally; zero-variance
/// columns are never eligible. `visit` is called after every step with the
/// new active set; returning false ends the path early.
LarPath lar_path(const Eigen::MatrixXd& regressors, const Eigen::VectorXd& y,
                 const LarOptions& options = {},
                 const std::function<bool(const LarStep&)>& visit = {});

}  // namespace uq
