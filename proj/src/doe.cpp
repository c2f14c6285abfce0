#include "uq/doe.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "uq/error.hpp"
#include "uq/random.hpp"

namespace uq {

Eigen::MatrixXd lhs(int n, int dim, std::uint64_t seed) {
  require(n >= 1 && dim >= 1, ErrorKind::invalid_argument, "lhs needs n >= 1 and dim >= 1");
  Rng rng(seed);
  Eigen::MatrixXd u(n, dim);
  std::vector<int> perm(static_cast<std::size_t>(n));
  const double nd = static_cast<double>(n);
  for (int j = 0; j < dim; ++j) {
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) {
      std::uniform_int_distribution<int> pick(0, i);
      std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(pick(rng))]);
    }
    for (int k = 0; k < n; ++k) {
      const int stratum = perm[static_cast<std::size_t>(k)];
      double v = (stratum + uniform01(rng)) / nd;
      // rounding may push v onto the next stratum boundary
      while (std::floor(v * nd) > stratum) v = std::nextafter(v, 0.0);
      while (std::floor(v * nd) < stratum) v = std::nextafter(v, 1.0);
      u(k, j) = v;
    }
  }
  return u;
}

ExperimentalDesign scale(std::span<const Bounds> bounds, const Eigen::MatrixXd& unit_design) {
  require(static_cast<Eigen::Index>(bounds.size()) == unit_design.cols(), ErrorKind::shape_error,
          "bounds count does not match design columns");
  for (std::size_t i = 0; i < bounds.size(); ++i)
    require(bounds[i].lower < bounds[i].upper, ErrorKind::degenerate_bounds,
            "dimension " + std::to_string(i + 1) + " has lower >= upper");
  require((unit_design.array() >= 0.0).all() && (unit_design.array() <= 1.0).all(),
          ErrorKind::domain_violation, "unit design leaves [0, 1]");

  ExperimentalDesign design;
  design.bounds.assign(bounds.begin(), bounds.end());
  design.points.resize(unit_design.rows(), unit_design.cols());
  for (Eigen::Index i = 0; i < unit_design.cols(); ++i) {
    const Bounds& b = bounds[static_cast<std::size_t>(i)];
    design.points.col(i) = (b.lower + unit_design.col(i).array() * b.width()).matrix();
  }
  design.chunk_sizes = {static_cast<int>(unit_design.rows())};
  return design;
}

ExperimentalDesign chunked_lhs_design(std::span<const Bounds> bounds,
                                      std::span<const int> chunk_sizes, std::uint64_t seed) {
  require(!chunk_sizes.empty(), ErrorKind::invalid_argument, "at least one chunk required");
  const int total = std::accumulate(chunk_sizes.begin(), chunk_sizes.end(), 0);
  const int dim = static_cast<int>(bounds.size());
  Eigen::MatrixXd unit(total, dim);
  int row = 0;
  for (std::size_t c = 0; c < chunk_sizes.size(); ++c) {
    require(chunk_sizes[c] >= 1, ErrorKind::invalid_argument, "chunk sizes must be positive");
    unit.middleRows(row, chunk_sizes[c]) = lhs(chunk_sizes[c], dim, derive_seed(seed, c));
    row += chunk_sizes[c];
  }
  ExperimentalDesign design = scale(bounds, unit);
  design.seed = seed;
  design.chunk_sizes.assign(chunk_sizes.begin(), chunk_sizes.end());
  return design;
}

}  // namespace uq
