#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "uq/doe.hpp"
#include "uq/lar.hpp"
#include "uq/pca.hpp"
#include "uq/polybasis.hpp"

namespace uq {

/// Sparse polynomial chaos expansion of one scalar quantity.
struct SparsePce {
  BasisSpec spec;
  std::vector<MultiIndex> active;  // graded order, always contains the zero index
  std::vector<double> coeffs;      // aligned with active
  double loo_normalized = 0.0;
  int degree_selected = 0;

  std::size_t size() const { return active.size(); }
};

struct PceMoments {
  double mean = 0.0;
  double variance = 0.0;
};

struct LarFitOptions {
  LarOptions lar;
  /// Multiply the LOO error by the finite-sample correction factor.
  bool loo_correction = false;
  /// Path points without LOO improvement before the path is abandoned;
  /// 0 means max(10, 10% of the largest admissible active-set size).
  std::size_t patience = 0;
};

/// Analytic leave-one-out error of the least-squares fit of `targets` on the
/// columns of `design` (full column rank), divided by the sample variance of
/// the targets.
double loo_error(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets,
                 bool correction = false);

/// Hybrid LAR: selection by the LAR path, coefficients by least squares on
/// each path model, model chosen by minimal leave-one-out error.
SparsePce fit_lar(const BasisSpec& spec, const Eigen::MatrixXd& u_design,
                  const Eigen::VectorXd& targets, std::span<const MultiIndex> candidates,
                  const LarFitOptions& options = {});

/// Same, with the K x P basis matrix of `candidates` already evaluated.
SparsePce fit_lar_matrix(const BasisSpec& spec, const Eigen::MatrixXd& psi,
                         const Eigen::VectorXd& targets, std::span<const MultiIndex> candidates,
                         const LarFitOptions& options = {});

double predict(const SparsePce& pce, std::span<const double> x, bool allow_extrapolation = false);
PceMoments moments(const SparsePce& pce);

/// Principal-component basis plus one sparse expansion per retained component.
struct MultiOutputSurrogate {
  ReducedBasis rb;
  std::vector<SparsePce> pces;

  const BasisSpec& spec() const { return pces.front().spec; }
  void validate() const;
};

struct MultiFitOptions {
  int degree_min = 1;
  int degree_max = 10;
  /// Degrees whose candidate set exceeds this are skipped.
  std::size_t candidate_cap = 10'000;
  /// Stop raising the degree after this many consecutive non-improving degrees.
  int degree_patience = 2;
  LarFitOptions lar;
};

MultiOutputSurrogate fit_multi(const ExperimentalDesign& design, const Eigen::MatrixXd& outputs,
                               double target_fraction, const MultiFitOptions& options = {});
/// Single-threaded reference for fit_multi.
MultiOutputSurrogate fit_multi_serial(const ExperimentalDesign& design,
                                      const Eigen::MatrixXd& outputs, double target_fraction,
                                      const MultiFitOptions& options = {});

/// Fits one scalar target over a degree range with shared candidate matrices.
SparsePce fit_degree_range(const BasisSpec& spec, const Eigen::MatrixXd& u_design,
                           const Eigen::VectorXd& targets, const MultiFitOptions& options);

/// Component scores z_p(x), p = 0..retained-1.
Eigen::VectorXd predict_scores(const MultiOutputSurrogate& surr, std::span<const double> x,
                               bool allow_extrapolation = false);
Eigen::VectorXd predict_series(const MultiOutputSurrogate& surr, std::span<const double> x,
                               bool allow_extrapolation = false);

}  // namespace uq
