#include <doctest.h>

#include <cmath>
#include <numbers>

#include "uq/doe.hpp"
#include "uq/error.hpp"
#include "uq/io.hpp"
#include "uq/random.hpp"
#include "uq/simulators.hpp"

using namespace uq;

namespace {

std::vector<double> random_point(Rng& rng) {
  const auto box = catchment_bounds();
  std::vector<double> x(8);
  for (int i = 0; i < 8; ++i) x[i] = box[i].lower + uniform01(rng) * box[i].width();
  return x;
}

}  // namespace

TEST_CASE("synthetic storm shape") {
  const ForcingSeries f = synthetic_storm();
  CHECK(f.size() == 601);
  CHECK(f.dt() == 120.0);
  CHECK(f.times.back() == 72000.0);
  CHECK_NOTHROW(f.validate());
  double peak = 0;
  for (double v : f.intensities) {
    CHECK(v >= 0.0);
    peak = std::max(peak, v);
  }
  CHECK(peak == doctest::Approx(6.0).epsilon(0.05));
  CHECK(f.intensities.front() == 0.0);
}

TEST_CASE("forcing validation") {
  ForcingSeries f{{0, 120, 250}, {0, 1, 1}};
  CHECK_THROWS_AS(f.validate(), Error);
  ForcingSeries g{{0, 120, 240}, {0, -1, 1}};
  CHECK_THROWS_AS(g.validate(), Error);
}

TEST_CASE("zero rainfall gives zero outflow") {
  ForcingSeries f = synthetic_storm(100, 120.0, 0.0);
  const Eigen::VectorXd q = toy_catchment(catchment_nominal(), f);
  CHECK(q.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("outflow is non-negative and monotone in forcing") {
  Rng rng(8);
  const ForcingSeries f = synthetic_storm();
  const ForcingSeries f2 = synthetic_storm(600, 120.0, 2.0);
  for (int r = 0; r < 50; ++r) {
    const auto x = random_point(rng);
    const Eigen::VectorXd q = toy_catchment(x, f);
    const Eigen::VectorXd q2 = toy_catchment(x, f2);
    CHECK(q.minCoeff() >= 0.0);
    CHECK((q2 - q).minCoeff() >= -1e-9);
  }
}

TEST_CASE("out of bounds parameters are refused") {
  auto x = catchment_nominal();
  x[0] = 1.2;
  CHECK_THROWS_AS(toy_catchment(x, synthetic_storm(10)), Error);
  CHECK_THROWS_AS(toy_catchment(std::vector<double>(7, 1.0), synthetic_storm(10)), Error);
}

TEST_CASE("nominal run matches the frozen golden trace") {
  const Eigen::VectorXd q = toy_catchment(catchment_nominal(), synthetic_storm());
  const io::CsvTable golden = io::read_csv(std::string(UQ_TEST_DATA_DIR) + "/toy_nominal.csv");
  REQUIRE(golden.values.rows() == q.size());
  const int col = golden.column("q");
  REQUIRE(col >= 0);
  for (Eigen::Index i = 0; i < q.size(); ++i)
    CHECK(std::abs(q[i] - golden.values(i, col)) <= 1e-10 * std::max(1.0, std::abs(golden.values(i, col))));
  // hundreds of l/s at the peak
  CHECK(q.maxCoeff() > 100.0);
  CHECK(q.maxCoeff() < 1000.0);
}

TEST_CASE("deterministic reruns and parallel design equals serial") {
  const ForcingSeries f = synthetic_storm();
  CHECK(toy_catchment(catchment_nominal(), f) == toy_catchment(catchment_nominal(), f));
  const ExperimentalDesign d = chunked_lhs_design(catchment_bounds(), std::vector<int>{64}, 2);
  CHECK(simulate_design(d.points, f) == simulate_design_serial(d.points, f));
}

TEST_CASE("finite differences vary continuously across the box") {
  const ForcingSeries f = synthetic_storm(300, 120.0);
  const auto box = catchment_bounds();
  const int t_peak = 120;
  for (int i = 0; i < 8; ++i) {
    std::vector<double> d;
    for (int s = 0; s < 21; ++s) {
      auto x = catchment_nominal();
      const double h = 1e-5 * box[i].width();
      x[i] = box[i].lower + h + (box[i].width() - 2 * h) * s / 20.0;
      auto xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      d.push_back((toy_catchment(xp, f)[t_peak] - toy_catchment(xm, f)[t_peak]) / (2 * h));
    }
    for (int s = 1; s < 20; ++s) {
      const double nb = std::max({std::abs(d[s - 1]), std::abs(d[s + 1]), 1e-6});
      CHECK(std::abs(d[s]) <= 10 * nb);
    }
  }
}

TEST_CASE("ishigami values") {
  const double pi = std::numbers::pi;
  CHECK(ishigami(std::vector<double>{0, 0, 0}) == 0.0);
  CHECK(ishigami(std::vector<double>{pi / 2, 0, 0}) == doctest::Approx(1.0));
  CHECK(ishigami(std::vector<double>{pi / 2, pi / 2, 0}) == doctest::Approx(8.0));
}

TEST_CASE("g-function values") {
  const std::vector<double> zero{0, 0, 0};
  CHECK(g_function(std::vector<double>{0.5, 0.5, 0.5}, zero) == 0.0);
  const std::vector<double> big{1e12, 1e12};
  CHECK(g_function(std::vector<double>{0.1, 0.9}, big) == doctest::Approx(1.0));
  const auto gi = g_function_analytic_indices(std::vector<double>{0, 1, 9});
  CHECK(gi.first_order[0] > gi.first_order[1]);
  CHECK(gi.first_order[1] > gi.first_order[2]);
}
