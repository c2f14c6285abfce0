#include "uq/simulators.hpp"

#include <cmath>
#include <exception>
#include <numbers>
#include <string>

#include "uq/error.hpp"

namespace uq {
namespace {

// C1 step from 0 to 1 over [0, width].
double smooth_step(double e, double width) {
  if (e <= 0.0) return 0.0;
  if (e >= width) return 1.0;
  const double s = e / width;
  return s * s * (3.0 - 2.0 * s);
}

// Antiderivative of smooth_step: a C2 version of max(e, 0).
double smooth_excess(double e, double width) {
  if (e <= 0.0) return 0.0;
  if (e >= width) return e - 0.5 * width;
  const double s = e / width;
  return width * s * s * s * (1.0 - 0.5 * s);
}

// Depression store: rain fills it, overflow beyond capacity becomes runoff,
// then a smoothly throttled evaporation empties it.
double update_store(double& store, double rain, double capacity, const CatchmentConstants& c) {
  const double water = store + rain;
  const double overflow = smooth_excess(water - capacity, c.ramp_width_mm);
  store = water - overflow;
  store -= c.evaporation_mm_per_step * smooth_step(store, c.ramp_width_mm);
  return overflow;
}

void check_parameters(std::span<const double> x) {
  require(x.size() == kCatchmentParameters, ErrorKind::shape_error,
          "toy catchment takes 8 parameters, got " + std::to_string(x.size()));
  const auto box = catchment_bounds();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double slack = 1e-12 * box[i].width();
    require(x[i] >= box[i].lower - slack && x[i] <= box[i].upper + slack, ErrorKind::domain_violation,
            "x" + std::to_string(i + 1) + " = " + std::to_string(x[i]) + " outside its bounds");
  }
}

}  // namespace

void ForcingSeries::validate() const {
  require(!times.empty(), ErrorKind::invalid_argument, "forcing is empty");
  require(times.size() == intensities.size(), ErrorKind::shape_error,
          "forcing times and intensities differ in length");
  for (double d : intensities)
    require(std::isfinite(d) && d >= 0.0, ErrorKind::domain_violation,
            "rainfall intensities must be finite and non-negative");
  if (times.size() < 2) return;
  const double step = dt();
  require(step > 0.0, ErrorKind::invalid_argument, "time grid must be strictly increasing");
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double d = times[i] - times[i - 1];
    require(d > 0.0, ErrorKind::invalid_argument, "time grid must be strictly increasing");
    require(std::abs(d - step) <= 1e-9 * step, ErrorKind::invalid_argument,
            "time grid must be uniform");
  }
}

ForcingSeries synthetic_storm(int steps, double dt, double scale) {
  require(steps >= 1 && dt > 0.0 && scale >= 0.0, ErrorKind::invalid_argument,
          "storm needs steps >= 1, dt > 0, scale >= 0");
  struct Burst {
    double start_h, rise_h, peak_mm_h, shape;
  };
  constexpr Burst bursts[] = {{1.0, 1.5, 6.0, 3.0}, {7.0, 1.0, 4.0, 4.0}};
  ForcingSeries f;
  for (int i = 0; i <= steps; ++i) {
    const double t = i * dt;
    const double hours = t / 3600.0;
    double intensity = 0.0;
    for (const auto& b : bursts) {
      const double s = (hours - b.start_h) / b.rise_h;
      if (s > 0.0) intensity += b.peak_mm_h * std::pow(s, b.shape) * std::exp(b.shape * (1.0 - s));
    }
    f.times.push_back(t);
    f.intensities.push_back(scale * intensity);
  }
  return f;
}

std::vector<Bounds> catchment_bounds() {
  return {{0.5, 1.1}, {0.5, 1.5}, {0.5, 1.5}, {0.5, 1.5},
          {0.5, 1.5}, {0.5, 1.5}, {0.5, 1.5}, {1.0, 1.5}};
}

std::vector<double> catchment_nominal() { return std::vector<double>(kCatchmentParameters, 1.0); }

Eigen::VectorXd toy_catchment(std::span<const double> x, const ForcingSeries& forcing,
                              const CatchmentConstants& c) {
  check_parameters(x);
  forcing.validate();
  const double dt = forcing.size() > 1 ? forcing.dt() : 120.0;

  const double phi = c.impervious_fraction * x[0];
  const double h_imp = c.depression_impervious_mm * x[3];
  const double h_perv = c.depression_pervious_mm * x[5];
  const double f0 = c.zero_storage_fraction * x[6];

  const double surface_shape = std::sqrt(c.slope) * c.flow_width_m / c.manning_impervious;
  const double c_s = 1.0 / (c.surface_time_s * surface_shape);
  const double k_s = c_s * std::sqrt(c.slope * x[2]) * (c.flow_width_m * x[1]) /
                     (c.manning_impervious * x[4]);
  const double c_c = c.manning_channel / c.channel_time_s;
  const double k_c = c_c / (c.manning_channel * x[7]);

  // mm over the catchment drained at rate k_c -> l/s
  const double to_litres = c.area_m2 * k_c;

  const std::size_t n = forcing.size();
  Eigen::VectorXd q(static_cast<Eigen::Index>(n));
  double store_imp = 0.0, store_perv = 0.0, surface = 0.0, channel = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    q[static_cast<Eigen::Index>(i)] = to_litres * channel;
    if (i + 1 == n) break;
    const double rain = forcing.intensities[i] * dt / 3600.0;
    const double over_imp = update_store(store_imp, rain, h_imp, c);
    const double over_perv = update_store(store_perv, rain, h_perv, c);
    const double runoff = phi * (f0 * rain + (1.0 - f0) * over_imp) +
                          (1.0 - phi) * c.pervious_runoff_coefficient * over_perv;
    const double surface_out = k_s * dt * surface;
    const double channel_out = k_c * dt * channel;
    surface += runoff - surface_out;
    channel += surface_out - channel_out;
  }
  return q;
}

Eigen::MatrixXd simulate_design(const Eigen::MatrixXd& points, const ForcingSeries& forcing,
                                const CatchmentConstants& constants) {
  forcing.validate();
  require(points.cols() == kCatchmentParameters, ErrorKind::shape_error,
          "design must have 8 columns");
  const Eigen::Index k = points.rows();
  Eigen::MatrixXd out(k, static_cast<Eigen::Index>(forcing.size()));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(k));
#pragma omp parallel for schedule(static)
  for (Eigen::Index r = 0; r < k; ++r) {
    try {
      const Eigen::VectorXd x = points.row(r).transpose();
      out.row(r) = toy_catchment(std::span<const double>(x.data(), 8), forcing, constants).transpose();
    } catch (...) {
      errors[static_cast<std::size_t>(r)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

Eigen::MatrixXd simulate_design_serial(const Eigen::MatrixXd& points, const ForcingSeries& forcing,
                                       const CatchmentConstants& constants) {
  forcing.validate();
  require(points.cols() == kCatchmentParameters, ErrorKind::shape_error,
          "design must have 8 columns");
  Eigen::MatrixXd out(points.rows(), static_cast<Eigen::Index>(forcing.size()));
  for (Eigen::Index r = 0; r < points.rows(); ++r) {
    const Eigen::VectorXd x = points.row(r).transpose();
    out.row(r) = toy_catchment(std::span<const double>(x.data(), 8), forcing, constants).transpose();
  }
  return out;
}

double ishigami(std::span<const double> x, double a, double b) {
  require(x.size() == 3, ErrorKind::shape_error, "ishigami takes three inputs");
  const double s1 = std::sin(x[0]);
  const double s2 = std::sin(x[1]);
  return s1 + a * s2 * s2 + b * std::pow(x[2], 4) * s1;
}

IshigamiIndices ishigami_analytic_indices(double a, double b) {
  constexpr double pi = std::numbers::pi;
  const double pi4 = std::pow(pi, 4);
  const double pi8 = std::pow(pi, 8);
  IshigamiIndices r;
  r.variance = a * a / 8.0 + b * pi4 / 5.0 + b * b * pi8 / 18.0 + 0.5;
  const double v1 = 0.5 * std::pow(1.0 + b * pi4 / 5.0, 2);
  const double v2 = a * a / 8.0;
  const double v13 = b * b * pi8 * (1.0 / 18.0 - 1.0 / 50.0);
  r.s1 = v1 / r.variance;
  r.s2 = v2 / r.variance;
  r.s3 = 0.0;
  r.t1 = (v1 + v13) / r.variance;
  r.t2 = r.s2;
  r.t3 = v13 / r.variance;
  return r;
}

double g_function(std::span<const double> x, std::span<const double> a) {
  require(x.size() == a.size(), ErrorKind::shape_error, "g-function input and weight lengths differ");
  double v = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) v *= (std::abs(4.0 * x[i] - 2.0) + a[i]) / (1.0 + a[i]);
  return v;
}

GFunctionIndices g_function_analytic_indices(std::span<const double> a) {
  GFunctionIndices r;
  std::vector<double> partial;
  double prod = 1.0;
  for (double ai : a) {
    require(ai >= 0.0, ErrorKind::invalid_argument, "g-function weights must be non-negative");
    const double vi = 1.0 / (3.0 * (1.0 + ai) * (1.0 + ai));
    partial.push_back(vi);
    prod *= 1.0 + vi;
  }
  r.variance = prod - 1.0;
  for (double vi : partial) {
    r.first_order.push_back(vi / r.variance);
    r.total.push_back(vi * (prod / (1.0 + vi)) / r.variance);
  }
  return r;
}

}  // namespace uq
