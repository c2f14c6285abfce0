#include <doctest.h>

#include <cmath>
#include <set>

#include "support.hpp"
#include "uq/error.hpp"
#include "uq/polybasis.hpp"
#include "uq/simulators.hpp"

using namespace uq;
using doctest::Approx;

TEST_CASE("univariate legendre values") {
  CHECK(eval_univariate(Family::legendre, 0, 0.7) == Approx(1.0).epsilon(1e-15));
  CHECK(eval_univariate(Family::legendre, 1, 0.5) == Approx(std::sqrt(3.0) * 0.5).epsilon(1e-14));
  CHECK(eval_univariate(Family::legendre, 2, 0.0) == Approx(-std::sqrt(5.0) / 2).epsilon(1e-14));
  CHECK(eval_univariate(Family::legendre, 1, 1.0) == Approx(std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("univariate hermite values") {
  // He_2 = u^2 - 1, He_3 = u^3 - 3u, normalized by sqrt(n!)
  CHECK(eval_univariate(Family::hermite, 2, 1.5) == Approx((1.5 * 1.5 - 1) / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(eval_univariate(Family::hermite, 3, -0.7) ==
        Approx((-0.343 + 2.1) / std::sqrt(6.0)).epsilon(1e-13));
  CHECK(eval_univariate(Family::hermite, 1, 12.0) == Approx(12.0));
}

TEST_CASE("univariate errors") {
  auto kind_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::numerical_failure;
  };
  CHECK(kind_of([] { eval_univariate(Family::legendre, 31, 0.0); }) == ErrorKind::degree_overflow);
  CHECK(kind_of([] { eval_univariate(Family::legendre, -1, 0.0); }) == ErrorKind::invalid_argument);
  CHECK(kind_of([] { eval_univariate(Family::legendre, 2, 1.01); }) == ErrorKind::domain_violation);
  CHECK(kind_of([] { eval_univariate(Family::legendre, 2, std::nan("")); }) == ErrorKind::domain_violation);
}

TEST_CASE("legendre orthonormality by quadrature") {
  const auto [x, w] = testsupport::gauss_legendre(20);
  for (int a = 0; a <= 10; ++a)
    for (int b = 0; b <= 10; ++b) {
      double s = 0;
      for (int k = 0; k < x.size(); ++k)
        s += 0.5 * w[k] * eval_univariate(Family::legendre, a, x[k]) * eval_univariate(Family::legendre, b, x[k]);
      CHECK(std::abs(s - (a == b ? 1.0 : 0.0)) < 1e-10);
    }
}

TEST_CASE("hermite orthonormality by quadrature") {
  const auto [x, w] = testsupport::gauss_hermite(30);
  for (int a = 0; a <= 10; ++a)
    for (int b = 0; b <= 10; ++b) {
      double s = 0;
      for (int k = 0; k < x.size(); ++k)
        s += w[k] * eval_univariate(Family::hermite, a, x[k]) * eval_univariate(Family::hermite, b, x[k]);
      CHECK(std::abs(s - (a == b ? 1.0 : 0.0)) < 1e-9);
    }
}

TEST_CASE("tensor orthonormality in two dimensions") {
  const auto [x, w] = testsupport::gauss_legendre(8);
  const BasisSpec spec = BasisSpec::legendre({{-1, 1}, {-1, 1}});
  const auto set = total_degree_set(2, 4);
  for (const auto& a : set)
    for (const auto& b : set) {
      double s = 0;
      for (int i = 0; i < x.size(); ++i)
        for (int j = 0; j < x.size(); ++j) {
          const double u[2] = {x[i], x[j]};
          s += 0.25 * w[i] * w[j] * eval_basis(spec, a, u) * eval_basis(spec, b, u);
        }
      CHECK(std::abs(s - (a == b ? 1.0 : 0.0)) < 1e-10);
    }
}

TEST_CASE("multivariate basis values") {
  const BasisSpec spec = BasisSpec::legendre({{-1, 1}, {-1, 1}});
  const double u1[2] = {0.5, 0.9};
  const double u2[2] = {0.5, 0.5};
  CHECK(eval_basis(spec, MultiIndex::zero(2), u1) == 1.0);
  CHECK(eval_basis(spec, MultiIndex({1, 0}), u1) == Approx(std::sqrt(3.0) * 0.5));
  CHECK(eval_basis(spec, MultiIndex({1, 1}), u2) == Approx(0.75).epsilon(1e-14));
  const double u3[3] = {0.1, 0.2, 0.3};
  CHECK_THROWS_AS(eval_basis(spec, MultiIndex({1, 0}), u3), Error);
}

TEST_CASE("total degree sets") {
  auto s12 = total_degree_set(1, 2);
  REQUIRE(s12.size() == 3);
  CHECK(s12[0] == MultiIndex({0}));
  CHECK(s12[1] == MultiIndex({1}));
  CHECK(s12[2] == MultiIndex({2}));
  CHECK(total_degree_set(8, 3).size() == 165);
  CHECK(total_degree_cardinality(8, 3) == 165);
  auto s21 = total_degree_set(2, 1);
  REQUIRE(s21.size() == 3);
  CHECK(s21[0] == MultiIndex({0, 0}));
  CHECK(s21[1] == MultiIndex({1, 0}));
  CHECK(s21[2] == MultiIndex({0, 1}));
  CHECK_THROWS_AS(total_degree_set(20, 10, 1000), Error);
}

TEST_CASE("total degree set is exhaustive, duplicate free and downward closed") {
  const int m = 4, p = 5;
  const auto set = total_degree_set(m, p);
  std::set<std::vector<int>> seen;
  for (const auto& a : set) seen.insert(a.exponents());
  CHECK(seen.size() == set.size());
  // brute-force enumeration of the box {0..p}^m
  std::size_t count = 0;
  for (int a = 0; a <= p; ++a)
    for (int b = 0; b <= p; ++b)
      for (int c = 0; c <= p; ++c)
        for (int d = 0; d <= p; ++d)
          if (a + b + c + d <= p) {
            ++count;
            CHECK(seen.count({a, b, c, d}) == 1);
          }
  CHECK(count == set.size());
  for (const auto& a : set)
    for (int i = 0; i < m; ++i)
      if (a[static_cast<std::size_t>(i)] > 0) {
        auto lower = a.exponents();
        --lower[static_cast<std::size_t>(i)];
        CHECK(seen.count(lower) == 1);
      }
  for (std::size_t k = 1; k < set.size(); ++k) CHECK(set[k - 1] < set[k]);
}

TEST_CASE("standardize against the catchment box") {
  const BasisSpec spec = BasisSpec::legendre(catchment_bounds());
  std::vector<double> x = catchment_nominal();
  x[0] = 0.8;
  x[7] = 1.125;
  const auto u = standardize(spec, x);
  CHECK(u[0] == Approx(0.0).epsilon(1e-15));
  CHECK(u[7] == Approx(-0.5).epsilon(1e-15));
  x[0] = 1.1;
  CHECK(standardize(spec, x)[0] == Approx(1.0).epsilon(1e-15));
  x[0] = 1.2;
  CHECK_THROWS_AS(standardize(spec, x), Error);
}

TEST_CASE("standardize round trip") {
  const BasisSpec spec = BasisSpec::legendre(catchment_bounds());
  Rng rng(4);
  const auto box = catchment_bounds();
  for (int r = 0; r < 1000; ++r) {
    std::vector<double> x(8);
    for (int i = 0; i < 8; ++i) x[i] = box[i].lower + uniform01(rng) * box[i].width();
    const Eigen::VectorXd u = standardize(spec, x);
    const Eigen::VectorXd back = unstandardize(spec, std::span<const double>(u.data(), 8));
    for (int i = 0; i < 8; ++i) {
      CHECK(std::abs(back[i] - x[i]) <= 1e-14 * std::max(1.0, std::abs(x[i])));
      CHECK(std::abs(u[i]) <= 1.0);
    }
  }
}

TEST_CASE("basis matrix parallel equals serial") {
  const BasisSpec spec = BasisSpec::legendre(catchment_bounds());
  const auto idx = total_degree_set(8, 3);
  Rng rng(9);
  Eigen::MatrixXd u(300, 8);
  for (int i = 0; i < u.size(); ++i) u.data()[i] = 2 * uniform01(rng) - 1;
  const Eigen::MatrixXd a = basis_matrix(spec, idx, u);
  const Eigen::MatrixXd b = basis_matrix_serial(spec, idx, u);
  CHECK(a == b);
  for (int k = 0; k < 300; k += 37)
    for (std::size_t j = 0; j < idx.size(); j += 11) {
      const double row[8] = {u(k, 0), u(k, 1), u(k, 2), u(k, 3), u(k, 4), u(k, 5), u(k, 6), u(k, 7)};
      CHECK(a(k, static_cast<Eigen::Index>(j)) == Approx(eval_basis(spec, idx[j], row)).epsilon(1e-13));
    }
}

TEST_CASE("spec validation") {
  BasisSpec bad;
  bad.families = {Family::legendre};
  bad.bounds = {Bounds{1.0, 1.0}};
  CHECK_THROWS_AS(bad.validate(), Error);
  BasisSpec h;
  h.families = {Family::hermite};
  h.bounds = {std::nullopt};
  CHECK_NOTHROW(h.validate());
}
