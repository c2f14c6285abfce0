#include "uq/lar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uq/error.hpp"

namespace uq {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lower Cholesky factor of the active Gram matrix, grown one column at a time.
class ActiveCholesky {
 public:
  ActiveCholesky(const Eigen::MatrixXd& x, std::size_t capacity)
      : x_(x),
        cols_(x.rows(), static_cast<Eigen::Index>(capacity)),
        l_(static_cast<Eigen::Index>(capacity), static_cast<Eigen::Index>(capacity)) {}

  Eigen::Index size() const { return n_; }
  auto columns() const { return cols_.leftCols(n_); }

  // Returns false (and leaves the factor unchanged) when column j is collinear.
  // active columns are mirrored contiguously in cols_
  bool push(int j, double tol) {
    const auto col = x_.col(j);
    Eigen::VectorXd r = cols_.leftCols(n_).transpose() * col;
    if (n_ > 0) l_.topLeftCorner(n_, n_).triangularView<Eigen::Lower>().solveInPlace(r);
    const double d2 = col.squaredNorm() - r.squaredNorm();
    if (!(d2 > tol)) return false;
    l_.row(n_).head(n_) = r.transpose();
    l_(n_, n_) = std::sqrt(d2);
    cols_.col(n_) = col;
    ++n_;
    return true;
  }

  void rebuild(const std::vector<int>& active, double tol) {
    n_ = 0;
    for (int j : active)
      if (!push(j, tol)) fail(ErrorKind::ill_conditioned, "active set lost rank after a drop");
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    const auto l = l_.topLeftCorner(n_, n_).triangularView<Eigen::Lower>();
    Eigen::VectorXd v = l.solve(rhs);
    return l.transpose().solve(v);
  }

 private:
  const Eigen::MatrixXd& x_;
  Eigen::MatrixXd cols_;
  Eigen::MatrixXd l_;
  Eigen::Index n_ = 0;
};

}  // namespace

LarPath lar_path(const Eigen::MatrixXd& regressors, const Eigen::VectorXd& y,
                 const LarOptions& options, const std::function<bool(const LarStep&)>& visit) {
  const Eigen::Index k = regressors.rows();
  const Eigen::Index p = regressors.cols();
  require(y.size() == k, ErrorKind::shape_error, "target length does not match regressor rows");
  require(k >= 3, ErrorKind::invalid_argument, "lar needs at least three samples");

  // center and scale to unit norm
  Eigen::MatrixXd x = regressors.rowwise() - regressors.colwise().mean();
  std::vector<bool> eligible(static_cast<std::size_t>(p), false);
  std::size_t n_eligible = 0;
  for (Eigen::Index j = 0; j < p; ++j) {
    const double norm = x.col(j).norm();
    const double scale = regressors.col(j).cwiseAbs().maxCoeff();
    if (norm > 1e-12 * std::max(scale, 1e-300) * std::sqrt(static_cast<double>(k))) {
      x.col(j) /= norm;
      eligible[static_cast<std::size_t>(j)] = true;
      ++n_eligible;
    } else {
      x.col(j).setZero();
    }
  }
  const Eigen::VectorXd yc = y.array() - y.mean();

  std::size_t max_active = std::min<std::size_t>(n_eligible, static_cast<std::size_t>(k - 2));
  if (options.max_active > 0) max_active = std::min(max_active, options.max_active);

  LarPath path;
  if (max_active == 0) return path;

  Eigen::VectorXd c = x.transpose() * yc;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  std::vector<int> active;
  std::vector<bool> in_active(static_cast<std::size_t>(p), false);
  ActiveCholesky chol(x, max_active + 1);

  auto argmax_inactive = [&]() {
    int best = -1;
    double best_abs = -1.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (!eligible[static_cast<std::size_t>(j)] || in_active[static_cast<std::size_t>(j)]) continue;
      if (std::abs(c[j]) > best_abs) {
        best_abs = std::abs(c[j]);
        best = static_cast<int>(j);
      }
    }
    return best;
  };

  auto record = [&](int added, int dropped) {
    LarStep step{active, added, dropped};
    path.steps.push_back(step);
    return visit ? visit(path.steps.back()) : true;
  };

  const int first = argmax_inactive();
  const double c0 = std::abs(c[first]);
  if (!(c0 > 0.0)) return path;
  chol.push(first, options.collinearity_tol);
  active.push_back(first);
  in_active[static_cast<std::size_t>(first)] = true;
  if (!record(first, -1)) return path;

  const std::size_t max_iterations = 8 * max_active + 16;
  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    const auto s = static_cast<Eigen::Index>(active.size());
    double big_c = 0.0;
    Eigen::VectorXd signs(s);
    for (Eigen::Index i = 0; i < s; ++i) {
      const double ci = c[active[static_cast<std::size_t>(i)]];
      big_c = std::max(big_c, std::abs(ci));
      signs[i] = ci >= 0.0 ? 1.0 : -1.0;
    }
    if (big_c <= options.exact_fit_tol * c0) break;

    // equiangular direction: G v = s, A = (s'v)^(-1/2), beta moves along A v
    const Eigen::VectorXd v = chol.solve(signs);
    const double sv = signs.dot(v);
    if (!(sv > 0.0)) {
      path.ill_conditioned = true;
      break;
    }
    const double a_norm = 1.0 / std::sqrt(sv);
    const Eigen::VectorXd dir = a_norm * v;
    const Eigen::VectorXd u = chol.columns() * dir;
    const Eigen::VectorXd a = x.transpose() * u;

    const bool can_grow = active.size() < max_active;
    double gamma = big_c / a_norm;
    int joining = -1;
    if (can_grow) {
      for (Eigen::Index j = 0; j < p; ++j) {
        if (!eligible[static_cast<std::size_t>(j)] || in_active[static_cast<std::size_t>(j)]) continue;
        for (double g : {(big_c - c[j]) / (a_norm - a[j]), (big_c + c[j]) / (a_norm + a[j])}) {
          if (g > 1e-15 * gamma && g < gamma) {
            gamma = g;
            joining = static_cast<int>(j);
          }
        }
      }
    }

    int leaving = -1;
    if (options.lasso_drop) {
      double gamma_drop = kInf;
      for (Eigen::Index i = 0; i < s; ++i) {
        const int j = active[static_cast<std::size_t>(i)];
        if (dir[i] == 0.0) continue;
        const double g = -beta[j] / dir[i];
        if (g > 1e-15 * gamma && g < gamma_drop) {
          gamma_drop = g;
          leaving = static_cast<int>(i);
        }
      }
      if (leaving >= 0 && gamma_drop < gamma) {
        gamma = gamma_drop;
        joining = -1;
      } else {
        leaving = -1;
      }
    }

    for (Eigen::Index i = 0; i < s; ++i) beta[active[static_cast<std::size_t>(i)]] += gamma * dir[i];
    c -= gamma * a;

    if (leaving >= 0) {
      const int j = active[static_cast<std::size_t>(leaving)];
      beta[j] = 0.0;
      in_active[static_cast<std::size_t>(j)] = false;
      active.erase(active.begin() + leaving);
      chol.rebuild(active, options.collinearity_tol);
      if (!record(-1, j)) break;
      if (active.empty()) break;
      continue;
    }
    if (joining < 0) break;  // full least-squares step on the final active set
    if (!chol.push(joining, options.collinearity_tol)) {
      path.ill_conditioned = true;
      break;
    }
    active.push_back(joining);
    in_active[static_cast<std::size_t>(joining)] = true;
    if (!record(joining, -1)) break;
  }
  return path;
}

}  // namespace uq
