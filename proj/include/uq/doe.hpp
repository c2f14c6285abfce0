#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "uq/polybasis.hpp"

namespace uq {

/// Input points at which the simulator is run (physical units).
struct ExperimentalDesign {
  Eigen::MatrixXd points;  // K x M
  std::vector<Bounds> bounds;
  std::uint64_t seed = 0;
  std::vector<int> chunk_sizes;

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dimension() const { return points.cols(); }
};

/// Latin hypercube sample in [0,1)^dim: each column hits every stratum
/// [(k-1)/n, k/n) exactly once, uniformly jittered within the stratum.
Eigen::MatrixXd lhs(int n, int dim, std::uint64_t seed);

/// Affine map of a unit design onto the box.
ExperimentalDesign scale(std::span<const Bounds> bounds, const Eigen::MatrixXd& unit_design);

/// Independent LHS chunks stacked row-wise; chunk c is drawn with
/// derive_seed(seed, c). The union is generally not itself a Latin hypercube.
ExperimentalDesign chunked_lhs_design(std::span<const Bounds> bounds,
                                      std::span<const int> chunk_sizes, std::uint64_t seed);

}  // namespace uq
