#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "uq/calib.hpp"
#include "uq/error.hpp"

namespace uq {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();

double std_normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

struct TruncationTerms {
  double alpha, beta, mass;
};

TruncationTerms truncation(const TruncatedNormalPrior& p) {
  const double a = (p.lower - p.mean) / p.sd;
  const double b = (p.upper - p.mean) / p.sd;
  return {a, b, std_normal_cdf(b) - std_normal_cdf(a)};
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

TruncatedNormalPrior default_parameter_prior(const Bounds& box) {
  return {box.midpoint(), box.width() / 6.0, box.lower, box.upper};
}

CorrelatedDiscrepancyError CorrelatedDiscrepancyError::with_defaults(int degree) {
  CorrelatedDiscrepancyError e;
  e.degree = degree;
  e.b.assign(static_cast<std::size_t>(degree) + 1, LaplacePrior{0.0, 10.0});
  return e;
}

void validate_prior(const PriorSpec& prior) {
  std::visit(overloaded{
                 [](const TruncatedNormalPrior& p) {
                   require(p.lower < p.upper, ErrorKind::degenerate_bounds,
                           "truncated normal needs lower < upper");
                   require(p.sd > 0.0, ErrorKind::invalid_argument, "truncated normal needs sd > 0");
                   require(truncation(p).mass > 0.0, ErrorKind::invalid_argument,
                           "truncated normal has no mass inside its bounds");
                 },
                 [](const UniformPrior& p) {
                   require(p.lower < p.upper, ErrorKind::degenerate_bounds, "uniform needs lower < upper");
                 },
                 [](const LaplacePrior& p) {
                   require(p.scale > 0.0, ErrorKind::invalid_argument, "laplace needs scale > 0");
                 }},
             prior);
}

double log_density(const PriorSpec& prior, double v) {
  return std::visit(
      overloaded{[v](const TruncatedNormalPrior& p) {
                   if (!(v >= p.lower && v <= p.upper)) return kNegInf;
                   const double z = (v - p.mean) / p.sd;
                   return -0.5 * z * z - std::log(p.sd * std::sqrt(2.0 * std::numbers::pi)) -
                          std::log(truncation(p).mass);
                 },
                 [v](const UniformPrior& p) {
                   if (!(v >= p.lower && v <= p.upper)) return kNegInf;
                   return -std::log(p.upper - p.lower);
                 },
                 [v](const LaplacePrior& p) {
                   if (!std::isfinite(v)) return kNegInf;
                   return -std::log(2.0 * p.scale) - std::abs(v - p.mean) / p.scale;
                 }},
      prior);
}

double prior_mean(const PriorSpec& prior) {
  return std::visit(overloaded{[](const TruncatedNormalPrior& p) {
                                 const auto t = truncation(p);
                                 return p.mean + p.sd * (std_normal_pdf(t.alpha) - std_normal_pdf(t.beta)) / t.mass;
                               },
                               [](const UniformPrior& p) { return 0.5 * (p.lower + p.upper); },
                               [](const LaplacePrior& p) { return p.mean; }},
                    prior);
}

double prior_sd(const PriorSpec& prior) {
  return std::visit(
      overloaded{[](const TruncatedNormalPrior& p) {
                   const auto t = truncation(p);
                   const double pa = std_normal_pdf(t.alpha), pb = std_normal_pdf(t.beta);
                   const double shift = (pa - pb) / t.mass;
                   const double var = 1.0 + (t.alpha * pa - t.beta * pb) / t.mass - shift * shift;
                   return p.sd * std::sqrt(std::max(var, 0.0));
                 },
                 [](const UniformPrior& p) { return (p.upper - p.lower) / std::sqrt(12.0); },
                 [](const LaplacePrior& p) { return p.scale * std::numbers::sqrt2; }},
      prior);
}

double prior_mode(const PriorSpec& prior) {
  return std::visit(overloaded{[](const TruncatedNormalPrior& p) { return std::clamp(p.mean, p.lower, p.upper); },
                               [](const UniformPrior& p) { return 0.5 * (p.lower + p.upper); },
                               [](const LaplacePrior& p) { return p.mean; }},
                    prior);
}

Bounds prior_support(const PriorSpec& prior) {
  return std::visit(overloaded{[](const TruncatedNormalPrior& p) { return Bounds{p.lower, p.upper}; },
                               [](const UniformPrior& p) { return Bounds{p.lower, p.upper}; },
                               [](const LaplacePrior&) { return Bounds{-kInf, kInf}; }},
                    prior);
}

double sample_prior(const PriorSpec& prior, Rng& rng) {
  return std::visit(
      overloaded{[&rng](const TruncatedNormalPrior& p) {
                   const auto t = truncation(p);
                   if (t.mass > 0.05) {
                     std::normal_distribution<double> normal(p.mean, p.sd);
                     for (;;) {
                       const double v = normal(rng);
                       if (v >= p.lower && v <= p.upper) return v;
                     }
                   }
                   // narrow window: uniform proposal on the box
                   const double peak = std::clamp(p.mean, p.lower, p.upper);
                   const double zpeak = (peak - p.mean) / p.sd;
                   for (;;) {
                     const double v = p.lower + uniform01(rng) * (p.upper - p.lower);
                     const double z = (v - p.mean) / p.sd;
                     if (uniform01(rng) < std::exp(-0.5 * (z * z - zpeak * zpeak))) return v;
                   }
                 },
                 [&rng](const UniformPrior& p) { return p.lower + uniform01(rng) * (p.upper - p.lower); },
                 [&rng](const LaplacePrior& p) {
                   const double u = uniform01(rng) - 0.5;
                   return p.mean - p.scale * (u < 0 ? -1.0 : 1.0) * std::log1p(-2.0 * std::abs(u));
                 }},
      prior);
}

}  // namespace uq
