#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "uq/mcmc.hpp"

namespace uq {

inline constexpr std::array<double, 5> kSummaryQuantiles{0.025, 0.25, 0.5, 0.75, 0.975};
inline constexpr int kKdeGridPoints = 512;

struct KernelDensity {
  Eigen::VectorXd grid;
  Eigen::VectorXd density;
  double bandwidth = 0.0;
};

/// Gaussian KDE with Silverman's bandwidth on a grid spanning the sample range
/// padded by three bandwidths. Parallel over grid points.
KernelDensity kde(std::span<const double> samples, int grid_points = kKdeGridPoints);
/// Single-threaded reference for kde.
KernelDensity kde_serial(std::span<const double> samples, int grid_points = kKdeGridPoints);

/// Linear-interpolation sample quantile (sorted input).
double quantile_sorted(std::span<const double> sorted, double q);

/// Split-chain potential scale reduction factor.
double split_rhat(std::span<const Eigen::VectorXd> chains);

struct ParameterSummary {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  std::array<double, 5> quantiles{};
  double rhat = 0.0;
  KernelDensity density;
};

struct PosteriorSummary {
  std::vector<ParameterSummary> parameters;
  std::optional<Eigen::VectorXd> map;  // joint mode, when supplied
  std::size_t pooled_samples = 0;
  int thin = 1;
};

/// thin = 0 picks the smallest thinning that keeps the pooled sample <= 1e5.
PosteriorSummary summarize(std::span<const Chain> chains, double burn_in_fraction = 0.2, int thin = 0,
                           const std::vector<std::string>& names = {},
                           const std::optional<Eigen::VectorXd>& map = std::nullopt);

}  // namespace uq
