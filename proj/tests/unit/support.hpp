#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "uq/random.hpp"

namespace testsupport {

// Gauss-Legendre nodes and weights on [-1, 1] from the Jacobi matrix.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    j(k, k - 1) = j(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  Eigen::VectorXd w = 2.0 * es.eigenvectors().row(0).transpose().array().square();
  return {es.eigenvalues(), w};
}

// Probabilists' Gauss-Hermite rule (weights sum to 1).
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_hermite(int n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) j(k, k - 1) = j(k - 1, k) = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  Eigen::VectorXd w = es.eigenvectors().row(0).transpose().array().square();
  return {es.eigenvalues(), w};
}

inline Eigen::MatrixXd random_matrix(int rows, int cols, std::uint64_t seed) {
  uq::Rng rng(seed);
  std::normal_distribution<double> n;
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) m(i, k) = n(rng);
  return m;
}

inline std::span<const double> sp(const Eigen::VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testsupport
