// OpenMP kernels against their serial references, and simulator vs surrogate.
#include <benchmark/benchmark.h>

#include "uq/doe.hpp"
#include "uq/pce.hpp"
#include "uq/polybasis.hpp"
#include "uq/simulators.hpp"
#include "uq/sobol.hpp"
#include "uq/summary.hpp"

namespace {

const uq::ForcingSeries& storm() {
  static const uq::ForcingSeries f = uq::synthetic_storm();
  return f;
}

const uq::ExperimentalDesign& design() {
  static const uq::ExperimentalDesign d = uq::chunked_lhs_design(uq::catchment_bounds(), std::vector<int>{256}, 3);
  return d;
}

const uq::MultiOutputSurrogate& surrogate() {
  static const uq::MultiOutputSurrogate s = [] {
    uq::MultiFitOptions o;
    o.degree_max = 4;
    return uq::fit_multi(design(), uq::simulate_design(design().points, storm()), 0.99, o);
  }();
  return s;
}

void BM_BasisMatrix(benchmark::State& state) {
  const auto spec = uq::BasisSpec::legendre(uq::catchment_bounds());
  const auto idx = uq::total_degree_set(8, 4);
  const Eigen::MatrixXd u = uq::standardize_rows(spec, design().points);
  for (auto _ : state)
    benchmark::DoNotOptimize(state.range(0) ? uq::basis_matrix(spec, idx, u) : uq::basis_matrix_serial(spec, idx, u));
}
BENCHMARK(BM_BasisMatrix)->Arg(0)->Arg(1)->ArgNames({"parallel"});

void BM_SimulateDesign(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(state.range(0) ? uq::simulate_design(design().points, storm())
                                            : uq::simulate_design_serial(design().points, storm()));
}
BENCHMARK(BM_SimulateDesign)->Arg(0)->Arg(1)->ArgNames({"parallel"});

void BM_FitMulti(benchmark::State& state) {
  const Eigen::MatrixXd y = uq::simulate_design(design().points, storm());
  uq::MultiFitOptions o;
  o.degree_max = 3;
  for (auto _ : state)
    benchmark::DoNotOptimize(state.range(0) ? uq::fit_multi(design(), y, 0.99, o)
                                            : uq::fit_multi_serial(design(), y, 0.99, o));
}
BENCHMARK(BM_FitMulti)->Arg(0)->Arg(1)->ArgNames({"parallel"})->Unit(benchmark::kMillisecond);

void BM_TimeVariantSobol(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(state.range(0) ? uq::timevariant_first_order(surrogate(), 0)
                                            : uq::timevariant_first_order_serial(surrogate(), 0));
}
BENCHMARK(BM_TimeVariantSobol)->Arg(0)->Arg(1)->ArgNames({"parallel"});

void BM_Kde(benchmark::State& state) {
  std::vector<double> xs(100'000);
  uq::Rng rng(5);
  for (auto& x : xs) x = uq::uniform01(rng);
  for (auto _ : state) benchmark::DoNotOptimize(state.range(0) ? uq::kde(xs) : uq::kde_serial(xs));
}
BENCHMARK(BM_Kde)->Arg(0)->Arg(1)->ArgNames({"parallel"});

void BM_ToyCatchment(benchmark::State& state) {
  const auto x = uq::catchment_nominal();
  for (auto _ : state) benchmark::DoNotOptimize(uq::toy_catchment(x, storm()));
}
BENCHMARK(BM_ToyCatchment);

void BM_PredictSeries(benchmark::State& state) {
  const auto x = uq::catchment_nominal();
  for (auto _ : state) benchmark::DoNotOptimize(uq::predict_series(surrogate(), x));
}
BENCHMARK(BM_PredictSeries);

}  // namespace

BENCHMARK_MAIN();
