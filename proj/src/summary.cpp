#include "uq/summary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "uq/error.hpp"

namespace uq {
namespace {

constexpr std::size_t kMinPooled = 100;
constexpr std::size_t kMaxPooled = 100'000;

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double var_of(std::span<const double> v, double m) {
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

struct KdeSetup {
  std::vector<double> sorted;
  double h = 0.0;
  double lo = 0.0, step = 0.0;
};

KdeSetup kde_setup(std::span<const double> samples, int grid_points) {
  require(samples.size() >= 2, ErrorKind::insufficient_samples, "kde needs at least 2 samples");
  require(grid_points >= 2, ErrorKind::invalid_argument, "kde grid needs at least 2 points");
  KdeSetup s;
  s.sorted.assign(samples.begin(), samples.end());
  std::sort(s.sorted.begin(), s.sorted.end());
  const double m = mean_of(s.sorted);
  const double sd = std::sqrt(var_of(s.sorted, m));
  const double iqr = quantile_sorted(s.sorted, 0.75) - quantile_sorted(s.sorted, 0.25);
  double spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) spread = sd;
  if (!(spread > 0.0)) spread = std::max(1e-12, 1e-6 * std::abs(m));  // constant sample
  s.h = 0.9 * spread * std::pow(static_cast<double>(samples.size()), -0.2);
  s.lo = s.sorted.front() - 3.0 * s.h;
  const double hi = s.sorted.back() + 3.0 * s.h;
  s.step = (hi - s.lo) / (grid_points - 1);
  return s;
}

double kde_at(const KdeSetup& s, double g) {
  // kernels beyond 8 bandwidths contribute below double precision
  const auto first = std::lower_bound(s.sorted.begin(), s.sorted.end(), g - 8.0 * s.h);
  const auto last = std::upper_bound(s.sorted.begin(), s.sorted.end(), g + 8.0 * s.h);
  double acc = 0.0;
  for (auto it = first; it != last; ++it) {
    const double z = (g - *it) / s.h;
    acc += std::exp(-0.5 * z * z);
  }
  return acc / (static_cast<double>(s.sorted.size()) * s.h * std::sqrt(2.0 * std::numbers::pi));
}

KernelDensity kde_impl(std::span<const double> samples, int grid_points, bool parallel) {
  const KdeSetup s = kde_setup(samples, grid_points);
  KernelDensity out;
  out.bandwidth = s.h;
  out.grid.resize(grid_points);
  out.density.resize(grid_points);
  for (int k = 0; k < grid_points; ++k) out.grid[k] = s.lo + k * s.step;
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int k = 0; k < grid_points; ++k) out.density[k] = kde_at(s, out.grid[k]);
  } else {
    for (int k = 0; k < grid_points; ++k) out.density[k] = kde_at(s, out.grid[k]);
  }
  return out;
}

}  // namespace

KernelDensity kde(std::span<const double> samples, int grid_points) {
  return kde_impl(samples, grid_points, true);
}

KernelDensity kde_serial(std::span<const double> samples, int grid_points) {
  return kde_impl(samples, grid_points, false);
}

double quantile_sorted(std::span<const double> sorted, double q) {
  require(!sorted.empty(), ErrorKind::insufficient_samples, "quantile of empty sample");
  require(q >= 0.0 && q <= 1.0, ErrorKind::invalid_argument, "quantile level outside [0, 1]");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double split_rhat(std::span<const Eigen::VectorXd> chains) {
  require(!chains.empty(), ErrorKind::insufficient_samples, "rhat needs at least one chain");
  Eigen::Index n = chains.front().size();
  for (const auto& c : chains) n = std::min(n, c.size());
  n /= 2;
  require(n >= 2, ErrorKind::insufficient_samples, "rhat needs at least 4 draws per chain");
  std::vector<double> means, vars;
  for (const auto& c : chains) {
    for (int half = 0; half < 2; ++half) {
      std::span<const double> seg(c.data() + half * n, static_cast<std::size_t>(n));
      const double m = mean_of(seg);
      means.push_back(m);
      vars.push_back(var_of(seg, m));
    }
  }
  const double w = mean_of(vars);
  const double b = static_cast<double>(n) * var_of(means, mean_of(means));
  if (w <= 0.0) return b <= 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  const double nd = static_cast<double>(n);
  const double var_plus = (nd - 1.0) / nd * w + b / nd;
  return std::sqrt(var_plus / w);
}

PosteriorSummary summarize(std::span<const Chain> chains, double burn_in_fraction, int thin,
                           const std::vector<std::string>& names, const std::optional<Eigen::VectorXd>& map) {
  require(!chains.empty(), ErrorKind::insufficient_samples, "no chains to summarize");
  require(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0, ErrorKind::invalid_argument,
          "burn-in fraction must lie in [0, 1)");
  require(thin >= 0, ErrorKind::invalid_argument, "thin must be >= 0");
  const Eigen::Index d = chains.front().samples.cols();
  Eigen::Index n_iter = chains.front().samples.rows();
  for (const auto& c : chains) {
    require(c.samples.cols() == d, ErrorKind::dimension_mismatch, "chains have different parameter counts");
    n_iter = std::min(n_iter, c.samples.rows());
  }
  require(names.empty() || static_cast<Eigen::Index>(names.size()) == d, ErrorKind::dimension_mismatch,
          "one name per parameter required");
  require(!map || map->size() == d, ErrorKind::dimension_mismatch, "MAP vector has wrong dimension");

  const auto burn = static_cast<Eigen::Index>(std::floor(burn_in_fraction * static_cast<double>(n_iter)));
  const Eigen::Index kept = n_iter - burn;
  const std::size_t total = static_cast<std::size_t>(kept) * chains.size();
  if (thin == 0) thin = static_cast<int>(std::max<std::size_t>(1, (total + kMaxPooled - 1) / kMaxPooled));
  const Eigen::Index per_chain = kept > 0 ? (kept + thin - 1) / thin : 0;
  const std::size_t pooled = static_cast<std::size_t>(per_chain) * chains.size();
  require(pooled >= kMinPooled, ErrorKind::insufficient_samples,
          "only " + std::to_string(pooled) + " post-burn-in samples; need at least " + std::to_string(kMinPooled));

  PosteriorSummary out;
  out.map = map;
  out.pooled_samples = pooled;
  out.thin = thin;
  for (Eigen::Index j = 0; j < d; ++j) {
    std::vector<Eigen::VectorXd> per(chains.size());
    std::vector<double> all;
    all.reserve(pooled);
    for (std::size_t c = 0; c < chains.size(); ++c) {
      per[c].resize(per_chain);
      for (Eigen::Index k = 0; k < per_chain; ++k) {
        per[c][k] = chains[c].samples(burn + k * thin, j);
        all.push_back(per[c][k]);
      }
    }
    ParameterSummary p;
    p.name = names.empty() ? "theta" + std::to_string(j) : names[static_cast<std::size_t>(j)];
    p.mean = mean_of(all);
    p.sd = std::sqrt(var_of(all, p.mean));
    p.rhat = split_rhat(per);
    p.density = kde(all);
    std::sort(all.begin(), all.end());
    for (std::size_t q = 0; q < kSummaryQuantiles.size(); ++q) p.quantiles[q] = quantile_sorted(all, kSummaryQuantiles[q]);
    out.parameters.push_back(std::move(p));
  }
  return out;
}

}  // namespace uq
