#pragma once

#include <span>

#include <Eigen/Dense>

namespace uq {

/// Empirical principal-component basis of a K x (T+1) sample matrix.
struct ReducedBasis {
  Eigen::VectorXd mean;         // (T+1)
  Eigen::MatrixXd eigvecs;      // (T+1) x retained, orthonormal columns
  Eigen::VectorXd eigvals_all;  // (T+1), non-increasing, >= 0
  int retained = 0;
  double explained_fraction = 0.0;

  Eigen::Index output_size() const { return mean.size(); }
};

/// Eigenpairs of the 1/(K-1) sample covariance, computed from the SVD of the
/// centered data. Keeps the smallest number of components whose cumulative
/// variance fraction reaches target_fraction. Each eigenvector is signed so
/// that its largest-magnitude entry is positive.
ReducedBasis fit_pca(const Eigen::MatrixXd& samples, double target_fraction);

Eigen::VectorXd compress(const ReducedBasis& rb, std::span<const double> y);
Eigen::VectorXd reconstruct(const ReducedBasis& rb, std::span<const double> z);

/// Row-wise compress: K x retained score matrix.
Eigen::MatrixXd compress_rows(const ReducedBasis& rb, const Eigen::MatrixXd& samples);
Eigen::MatrixXd reconstruct_rows(const ReducedBasis& rb, const Eigen::MatrixXd& scores);

}  // namespace uq
