#include "uq/pca.hpp"

#include <cmath>
#include <string>

#include "uq/error.hpp"

namespace uq {
namespace {

constexpr double kClampRelative = 1e-12;
constexpr double kFractionSlack = 1e-12;

}  // namespace

ReducedBasis fit_pca(const Eigen::MatrixXd& samples, double target_fraction) {
  require(samples.rows() >= 2, ErrorKind::invalid_argument, "pca needs at least two samples");
  require(samples.cols() >= 1, ErrorKind::invalid_argument, "pca needs at least one output");
  require(target_fraction > 0.0 && target_fraction <= 1.0, ErrorKind::invalid_argument,
          "target fraction must lie in (0, 1]");
  require(samples.allFinite(), ErrorKind::invalid_argument, "sample matrix contains non-finite values");

  const Eigen::Index k = samples.rows();
  const Eigen::Index n = samples.cols();
  ReducedBasis rb;
  rb.mean = samples.colwise().mean().transpose();
  const Eigen::MatrixXd centered = samples.rowwise() - rb.mean.transpose();
  require(centered.squaredNorm() > 0.0, ErrorKind::degenerate_sample,
          "sample has zero total variance");

  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  rb.eigvals_all = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < s.size(); ++i)
    rb.eigvals_all[i] = s[i] * s[i] / static_cast<double>(k - 1);
  const double leading = rb.eigvals_all[0];
  for (Eigen::Index i = 0; i < n; ++i)
    if (rb.eigvals_all[i] < kClampRelative * leading) rb.eigvals_all[i] = 0.0;

  const double total = rb.eigvals_all.sum();
  double cumulative = 0.0;
  int retained = 0;
  while (retained < s.size()) {
    cumulative += rb.eigvals_all[retained];
    ++retained;
    if (cumulative >= (target_fraction - kFractionSlack) * total) break;
  }
  rb.retained = retained;
  rb.explained_fraction = cumulative / total;

  rb.eigvecs = svd.matrixV().leftCols(retained);
  for (Eigen::Index p = 0; p < retained; ++p) {
    Eigen::Index arg = 0;
    rb.eigvecs.col(p).cwiseAbs().maxCoeff(&arg);
    if (rb.eigvecs(arg, p) < 0.0) rb.eigvecs.col(p) *= -1.0;
  }
  return rb;
}

Eigen::VectorXd compress(const ReducedBasis& rb, std::span<const double> y) {
  require(static_cast<Eigen::Index>(y.size()) == rb.output_size(), ErrorKind::shape_error,
          "output vector has length " + std::to_string(y.size()) + ", basis expects " +
              std::to_string(rb.output_size()));
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), rb.output_size());
  return rb.eigvecs.transpose() * (yv - rb.mean);
}

Eigen::VectorXd reconstruct(const ReducedBasis& rb, std::span<const double> z) {
  require(static_cast<int>(z.size()) == rb.retained, ErrorKind::shape_error,
          "score vector has length " + std::to_string(z.size()) + ", basis retains " +
              std::to_string(rb.retained));
  const Eigen::Map<const Eigen::VectorXd> zv(z.data(), rb.retained);
  return rb.mean + rb.eigvecs * zv;
}

Eigen::MatrixXd compress_rows(const ReducedBasis& rb, const Eigen::MatrixXd& samples) {
  require(samples.cols() == rb.output_size(), ErrorKind::shape_error,
          "sample width does not match basis");
  return (samples.rowwise() - rb.mean.transpose()) * rb.eigvecs;
}

Eigen::MatrixXd reconstruct_rows(const ReducedBasis& rb, const Eigen::MatrixXd& scores) {
  require(scores.cols() == rb.retained, ErrorKind::shape_error,
          "score width does not match retained count");
  return (scores * rb.eigvecs.transpose()).rowwise() + rb.mean.transpose();
}

}  // namespace uq
