#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "uq/error.hpp"
#include "uq/log.hpp"
#include "uq/mcmc.hpp"

namespace uq {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Folds x into [lo, hi] by mirroring at the bounds.
double reflect(double x, double lo, double hi) {
  const bool has_lo = std::isfinite(lo), has_hi = std::isfinite(hi);
  if (has_lo && has_hi) {
    const double w = hi - lo;
    double y = std::fmod(x - lo, 2.0 * w);
    if (y < 0.0) y += 2.0 * w;
    if (y > w) y = 2.0 * w - y;
    return lo + y;
  }
  if (has_lo && x < lo) return 2.0 * lo - x;
  if (has_hi && x > hi) return 2.0 * hi - x;
  return x;
}

struct Objective {
  const CalibrationProblem& problem;
  std::vector<Bounds> support;
  int evaluations = 0;

  Eigen::VectorXd fold(const Eigen::VectorXd& raw) const {
    Eigen::VectorXd t(raw.size());
    for (Eigen::Index i = 0; i < raw.size(); ++i)
      t[i] = reflect(raw[i], support[static_cast<std::size_t>(i)].lower, support[static_cast<std::size_t>(i)].upper);
    return t;
  }

  double operator()(const Eigen::VectorXd& raw) {
    ++evaluations;
    const Eigen::VectorXd t = fold(raw);
    double lp;
    try {
      lp = log_posterior(problem, std::span<const double>(t.data(), static_cast<std::size_t>(t.size())));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::shape_error) throw;
      return kInf;
    }
    return std::isfinite(lp) ? -lp : kInf;
  }
};

struct Simplex {
  Eigen::VectorXd x;
  double f;
};

// Plain Nelder-Mead from x0 with per-axis initial steps.
Simplex nelder_mead(Objective& obj, const Eigen::VectorXd& x0, double f0, const Eigen::VectorXd& steps,
                    int max_evals, double tol) {
  const auto n = x0.size();
  std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(n + 1), x0);
  std::vector<double> fs(static_cast<std::size_t>(n + 1), f0);
  for (Eigen::Index i = 0; i < n; ++i) {
    pts[static_cast<std::size_t>(i + 1)][i] += steps[i];
    fs[static_cast<std::size_t>(i + 1)] = obj(pts[static_cast<std::size_t>(i + 1)]);
  }
  std::vector<std::size_t> order(pts.size());
  const int budget_end = obj.evaluations + max_evals;
  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];
    double diameter = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k)
      diameter = std::max(diameter, (pts[k] - pts[best]).lpNorm<Eigen::Infinity>());
    const double fspread = fs[worst] - fs[best];
    const bool flat = std::isfinite(fspread) && fspread <= tol * (1.0 + std::abs(fs[best]));
    if ((flat && diameter <= tol * (1.0 + pts[best].lpNorm<Eigen::Infinity>())) ||
        obj.evaluations >= budget_end)
      return {pts[best], fs[best]};

    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < pts.size(); ++k)
      if (k != worst) c += pts[k];
    c /= static_cast<double>(n);

    const Eigen::VectorXd xr = c + (c - pts[worst]);
    const double fr = obj(xr);
    if (fr < fs[best]) {
      const Eigen::VectorXd xe = c + 2.0 * (c - pts[worst]);
      const double fe = obj(xe);
      if (fe < fr) {
        pts[worst] = xe;
        fs[worst] = fe;
      } else {
        pts[worst] = xr;
        fs[worst] = fr;
      }
      continue;
    }
    if (fr < fs[second]) {
      pts[worst] = xr;
      fs[worst] = fr;
      continue;
    }
    const bool outside = fr < fs[worst];
    const Eigen::VectorXd xc = outside ? Eigen::VectorXd(c + 0.5 * (xr - c)) : Eigen::VectorXd(c + 0.5 * (pts[worst] - c));
    const double fc = obj(xc);
    if (fc < (outside ? fr : fs[worst])) {
      pts[worst] = xc;
      fs[worst] = fc;
      continue;
    }
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (k == best) continue;
      pts[k] = pts[best] + 0.5 * (pts[k] - pts[best]);
      fs[k] = obj(pts[k]);
    }
  }
}

}  // namespace

MapResult map_estimate(const CalibrationProblem& problem, int n_starts, std::uint64_t seed,
                       const MapOptions& options) {
  problem.validate();
  require(n_starts >= 0, ErrorKind::invalid_argument, "n_starts must be >= 0");
  require(n_starts > 0 || !options.extra_starts.empty(), ErrorKind::invalid_argument, "no starting points");
  const std::vector<PriorSpec> priors = problem.priors();
  const auto d = static_cast<Eigen::Index>(priors.size());

  Objective obj{problem, {}};
  Eigen::VectorXd steps(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    obj.support.push_back(prior_support(priors[static_cast<std::size_t>(i)]));
    steps[i] = 0.1 * prior_sd(priors[static_cast<std::size_t>(i)]);
  }

  std::vector<Eigen::VectorXd> starts;
  Rng rng(seed);
  for (int s = 0; s < n_starts; ++s) {
    Eigen::VectorXd x(d);
    for (Eigen::Index i = 0; i < d; ++i) x[i] = sample_prior(priors[static_cast<std::size_t>(i)], rng);
    starts.push_back(std::move(x));
  }
  for (const auto& x : options.extra_starts) {
    require(x.size() == d, ErrorKind::dimension_mismatch, "extra start has wrong dimension");
    starts.push_back(x);
  }

  MapResult result;
  double best_f = kInf;
  for (const auto& x0 : starts) {
    const double f0 = obj(x0);
    if (!std::isfinite(f0)) continue;
    ++result.feasible_starts;
    Simplex s = nelder_mead(obj, x0, f0, steps, options.max_evaluations, options.tolerance);
    for (int r = 0; r < options.max_restarts; ++r) {
      Simplex next = nelder_mead(obj, s.x, s.f, steps, options.max_evaluations, options.tolerance);
      const double gain = s.f - next.f;
      if (next.f < s.f) s = next;
      if (gain <= options.tolerance * (1.0 + std::abs(s.f))) break;
    }
    if (s.f < best_f) {
      best_f = s.f;
      result.theta = obj.fold(s.x);
    }
  }
  require(result.feasible_starts > 0, ErrorKind::infeasible_starts,
          "log-posterior is -inf at all " + std::to_string(starts.size()) + " starting points");
  result.log_posterior = -best_f;
  log::debug("map: " + std::to_string(obj.evaluations) + " evaluations");
  return result;
}

}  // namespace uq
