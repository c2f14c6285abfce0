#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "uq/error.hpp"
#include "uq/pca.hpp"

using namespace uq;
using testsupport::random_matrix;

namespace {

Eigen::MatrixXd sample_cov(const Eigen::MatrixXd& y) {
  const Eigen::MatrixXd c = y.rowwise() - y.colwise().mean();
  return c.transpose() * c / static_cast<double>(y.rows() - 1);
}

// Correlated data with a decaying spectrum.
Eigen::MatrixXd decaying(int k, int t, std::uint64_t seed) {
  Eigen::MatrixXd z = random_matrix(k, t, seed);
  for (int j = 0; j < t; ++j) z.col(j) *= std::pow(0.8, j);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(random_matrix(t, t, seed + 1)).householderQ();
  return (z * q.transpose()).rowwise() + Eigen::RowVectorXd::LinSpaced(t, 3.0, 5.0);
}

}  // namespace

TEST_CASE("two point hand example") {
  Eigen::MatrixXd y(6, 2);
  y << 1, 1, -1, -1, 1, 1, -1, -1, 1, 1, -1, -1;
  const ReducedBasis rb = fit_pca(y, 0.99);
  CHECK(rb.retained == 1);
  CHECK(rb.eigvecs(0, 0) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(rb.eigvecs(1, 0) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(rb.eigvals_all[1] == 0.0);
  CHECK(rb.eigvals_all[0] == doctest::Approx(2.0 * 6 / 5).epsilon(1e-14));
  CHECK(rb.explained_fraction == doctest::Approx(1.0));
}

TEST_CASE("target fraction one keeps the rank") {
  const Eigen::MatrixXd base = random_matrix(40, 3, 5);
  const Eigen::MatrixXd mix = random_matrix(3, 10, 6);
  const Eigen::MatrixXd y = base * mix;  // rank 3 after centering at most
  const ReducedBasis rb = fit_pca(y, 1.0);
  CHECK(rb.retained == 3);
  for (int k = 0; k < 40; ++k) {
    const Eigen::VectorXd row = y.row(k).transpose();
    const Eigen::VectorXd z = compress(rb, testsupport::sp(row));
    const Eigen::VectorXd back = reconstruct(rb, testsupport::sp(z));
    CHECK((back - row).norm() <= 1e-10 * row.norm());
  }
}

TEST_CASE("degenerate sample") {
  Eigen::MatrixXd y = Eigen::MatrixXd::Constant(10, 4, 2.5);
  try {
    fit_pca(y, 0.99);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_sample);
  }
  CHECK_THROWS_AS(fit_pca(random_matrix(1, 4, 1), 0.99), Error);
  CHECK_THROWS_AS(fit_pca(random_matrix(5, 4, 1), 0.0), Error);
  CHECK_THROWS_AS(fit_pca(random_matrix(5, 4, 1), 1.5), Error);
}

TEST_CASE("compress and reconstruct examples") {
  const Eigen::MatrixXd y = decaying(60, 12, 3);
  const ReducedBasis rb = fit_pca(y, 1.0);
  const Eigen::VectorXd z0 = compress(rb, std::span<const double>(rb.mean.data(), 12));
  CHECK(z0.norm() <= 1e-12 * rb.mean.norm());
  const Eigen::VectorXd shifted = rb.mean + 2.5 * rb.eigvecs.col(0);
  const Eigen::VectorXd z1 = compress(rb, std::span<const double>(shifted.data(), 12));
  CHECK(z1[0] == doctest::Approx(2.5).epsilon(1e-12));
  for (int p = 1; p < z1.size(); ++p) CHECK(std::abs(z1[p]) < 1e-12);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(rb.retained);
  CHECK((reconstruct(rb, std::span<const double>(e.data(), e.size())) - rb.mean).norm() == 0.0);
  e[2] = 1.0;
  CHECK((reconstruct(rb, std::span<const double>(e.data(), e.size())) - rb.mean - rb.eigvecs.col(2)).norm() < 1e-14);
  const Eigen::VectorXd zr = testsupport::random_matrix(rb.retained, 1, 8).col(0);
  const Eigen::VectorXd yr = reconstruct(rb, std::span<const double>(zr.data(), zr.size()));
  CHECK((compress(rb, std::span<const double>(yr.data(), yr.size())) - zr).norm() <= 1e-12 * zr.norm());
  CHECK_THROWS_AS(compress(rb, std::span<const double>(shifted.data(), 5)), Error);
}

TEST_CASE("basis invariants") {
  const Eigen::MatrixXd y = decaying(80, 30, 11);
  const ReducedBasis rb = fit_pca(y, 0.95);
  const Eigen::MatrixXd gram = rb.eigvecs.transpose() * rb.eigvecs;
  CHECK((gram - Eigen::MatrixXd::Identity(rb.retained, rb.retained)).cwiseAbs().maxCoeff() < 1e-10);
  for (int i = 1; i < rb.eigvals_all.size(); ++i) CHECK(rb.eigvals_all[i] <= rb.eigvals_all[i - 1]);
  CHECK(rb.eigvals_all.minCoeff() >= 0.0);
  const double total = rb.eigvals_all.sum();
  CHECK(rb.explained_fraction == doctest::Approx(rb.eigvals_all.head(rb.retained).sum() / total));
  CHECK(rb.explained_fraction >= 0.95);
  CHECK(rb.eigvals_all.head(rb.retained - 1).sum() / total < 0.95);
  for (int p = 0; p < rb.retained; ++p) {
    Eigen::Index imax;
    rb.eigvecs.col(p).cwiseAbs().maxCoeff(&imax);
    CHECK(rb.eigvecs(imax, p) > 0);
  }
}

TEST_CASE("diagonalization and trace") {
  const Eigen::MatrixXd y = decaying(100, 20, 21);
  const ReducedBasis rb = fit_pca(y, 1.0);
  const Eigen::MatrixXd cov = sample_cov(y);
  CHECK(testsupport::rel_diff(cov.trace(), rb.eigvals_all.sum()) < 1e-8);
  const Eigen::MatrixXd d = rb.eigvecs.transpose() * cov * rb.eigvecs;
  for (int i = 0; i < d.rows(); ++i)
    for (int j = 0; j < d.cols(); ++j)
      if (i != j) CHECK(std::abs(d(i, j)) <= 1e-8 * rb.eigvals_all[0]);
  // covariance eigenvalues by an independent symmetric solver
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  for (int i = 0; i < 20; ++i) CHECK(testsupport::rel_diff(rb.eigvals_all[i], es.eigenvalues()[19 - i]) < 1e-8);
}
