#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "uq/polybasis.hpp"

namespace uq {

/// Rainfall intensities (mm/h) on a uniform time grid (s).
struct ForcingSeries {
  std::vector<double> times;
  std::vector<double> intensities;

  std::size_t size() const { return times.size(); }
  double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
  /// Throws unless the grid is strictly increasing, uniform within 1e-9
  /// relative, and intensities are non-negative.
  void validate() const;
};

/// Two superposed gamma-shaped bursts; steps + 1 grid points spaced dt apart.
ForcingSeries synthetic_storm(int steps = 600, double dt = 120.0, double scale = 1.0);

/// Fixed constants of the toy catchment. Defaults reproduce the spatial
/// averages of the eight scaled hydrological parameters at x = 1.
struct CatchmentConstants {
  double area_m2 = 1.6e6;
  double impervious_fraction = 0.36;
  double flow_width_m = 35.7;
  double slope = 0.114;
  double depression_impervious_mm = 2.0;
  double manning_impervious = 0.12;
  double depression_pervious_mm = 2.0;
  double zero_storage_fraction = 0.1904;
  double manning_channel = 0.012;
  double surface_time_s = 1800.0;  // 1/k_s at nominal parameters
  double channel_time_s = 1200.0;  // 1/k_c at nominal parameters
  double evaporation_mm_per_step = 0.05;
  double ramp_width_mm = 0.2;
  double pervious_runoff_coefficient = 0.1;
};

inline constexpr int kCatchmentParameters = 8;

/// Admissible boxes of the eight scale factors x1..x8.
std::vector<Bounds> catchment_bounds();
/// Scale factors reproducing the spatial averages (all ones).
std::vector<double> catchment_nominal();

/// Outflow (l/s) at every forcing time. Deterministic, non-negative, zero
/// under zero rainfall and C1 in x.
Eigen::VectorXd toy_catchment(std::span<const double> x, const ForcingSeries& forcing,
                              const CatchmentConstants& constants = {});

/// Runs toy_catchment for every design row; K x (T+1). Parallel over rows.
Eigen::MatrixXd simulate_design(const Eigen::MatrixXd& points, const ForcingSeries& forcing,
                                const CatchmentConstants& constants = {});
/// Single-threaded reference for simulate_design.
Eigen::MatrixXd simulate_design_serial(const Eigen::MatrixXd& points, const ForcingSeries& forcing,
                                       const CatchmentConstants& constants = {});

double ishigami(std::span<const double> x, double a = 7.0, double b = 0.1);

struct IshigamiIndices {
  double variance = 0.0;
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;
  double t1 = 0.0, t2 = 0.0, t3 = 0.0;
};

IshigamiIndices ishigami_analytic_indices(double a = 7.0, double b = 0.1);

/// Sobol' g-function on [0,1]^M.
double g_function(std::span<const double> x, std::span<const double> a);

struct GFunctionIndices {
  double variance = 0.0;
  std::vector<double> first_order;
  std::vector<double> total;
};

GFunctionIndices g_function_analytic_indices(std::span<const double> a);

}  // namespace uq
