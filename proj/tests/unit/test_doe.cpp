#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "uq/doe.hpp"
#include "uq/error.hpp"
#include "uq/simulators.hpp"

using namespace uq;

TEST_CASE("lhs stratification, n = 4") {
  for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
    const Eigen::MatrixXd u = lhs(4, 1, seed);
    std::vector<double> v(u.data(), u.data() + 4);
    std::sort(v.begin(), v.end());
    for (int k = 0; k < 4; ++k) {
      CHECK(v[k] >= 0.25 * k);
      CHECK(v[k] < 0.25 * (k + 1));
    }
  }
}

TEST_CASE("lhs stratification property") {
  for (int n : {1, 7, 100, 1024}) {
    const Eigen::MatrixXd u = lhs(n, 5, 1234 + n);
    for (int j = 0; j < 5; ++j) {
      std::vector<int> strata;
      for (int i = 0; i < n; ++i) strata.push_back(static_cast<int>(std::floor(n * u(i, j))));
      std::sort(strata.begin(), strata.end());
      for (int i = 0; i < n; ++i) CHECK(strata[i] == i);
    }
  }
}

TEST_CASE("lhs determinism") {
  CHECK(lhs(50, 8, 3) == lhs(50, 8, 3));
  CHECK(lhs(50, 8, 3) != lhs(50, 8, 4));
}

TEST_CASE("lhs rejects bad arguments") {
  CHECK_THROWS_AS(lhs(0, 2, 1), Error);
  CHECK_THROWS_AS(lhs(3, 0, 1), Error);
}

TEST_CASE("scaling") {
  const Eigen::MatrixXd u = lhs(20, 3, 5);
  const std::vector<Bounds> unit(3, Bounds{0, 1});
  CHECK(scale(unit, u).points == u);

  const std::vector<Bounds> b1{{0.5, 1.1}};
  Eigen::MatrixXd half(1, 1);
  half << 0.5;
  CHECK(scale(b1, half).points(0, 0) == doctest::Approx(0.8).epsilon(1e-15));

  const auto box = catchment_bounds();
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(1, 8);
  const Eigen::RowVectorXd lower = scale(box, zero).points.row(0);
  const double expected[8] = {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 1.0};
  for (int i = 0; i < 8; ++i) CHECK(lower[i] == expected[i]);

  const std::vector<Bounds> bad{{1.0, 1.0}};
  CHECK_THROWS_AS(scale(bad, half), Error);
}

TEST_CASE("chunked design") {
  const auto box = catchment_bounds();
  const std::vector<int> chunks{1024, 1024};
  const ExperimentalDesign d = chunked_lhs_design(box, chunks, 17);
  CHECK(d.size() == 2048);
  CHECK(d.dimension() == 8);
  for (Eigen::Index i = 0; i < d.size(); ++i)
    for (int j = 0; j < 8; ++j) {
      CHECK(d.points(i, j) >= box[j].lower);
      CHECK(d.points(i, j) <= box[j].upper);
    }
  // each chunk is itself a Latin hypercube in the unit cube
  for (int c = 0; c < 2; ++c)
    for (int j = 0; j < 8; ++j) {
      std::vector<int> strata;
      for (int i = 0; i < 1024; ++i) {
        const double u = (d.points(c * 1024 + i, j) - box[j].lower) / box[j].width();
        strata.push_back(std::min(1023, static_cast<int>(std::floor(1024 * u))));
      }
      std::sort(strata.begin(), strata.end());
      int mismatches = 0;
      for (int i = 0; i < 1024; ++i) mismatches += strata[i] != i;
      CHECK(mismatches == 0);
    }
  CHECK(chunked_lhs_design(box, chunks, 17).points == d.points);
  CHECK(d.points.topRows(1024) != d.points.bottomRows(1024));
}
