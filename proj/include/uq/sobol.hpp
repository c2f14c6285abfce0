#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "uq/pce.hpp"

namespace uq {

/// S_u from the coefficients whose support is exactly u (0-based inputs).
double subset_index(const SparsePce& pce, std::span<const int> subset);
double first_order_index(const SparsePce& pce, int input);
double total_index(const SparsePce& pce, int input);

/// Every non-empty subset u of the inputs with its index; keys are sorted
/// input lists. Intended for small dimensions.
std::map<std::vector<int>, double> all_subset_indices(const SparsePce& pce);

/// Cov[E[Z_p|X_i], E[Z_q|X_i]] from the coefficients supported on {i} only.
double cond_cov(const SparsePce& p, const SparsePce& q, int input);

struct SobolReport {
  std::vector<std::string> subjects;
  std::vector<std::vector<double>> first_order;  // [subject][input]
  std::vector<std::vector<double>> total;        // [subject][input]
};

/// First-order and total indices of every principal component.
SobolReport component_report(const MultiOutputSurrogate& surr);

enum class IndexFlag { ok, negative, undefined };

std::string_view to_string(IndexFlag flag);

struct TimeVariantIndices {
  std::vector<double> values;  // NaN where undefined
  std::vector<IndexFlag> flags;
};

/// First-order index of every reconstructed output Y_t with respect to one
/// input, recombined from the component expansions. The denominator Var[Y_t]
/// includes the cross-component coefficient products.
TimeVariantIndices timevariant_first_order(const MultiOutputSurrogate& surr, int input);
/// Single-threaded reference for timevariant_first_order.
TimeVariantIndices timevariant_first_order_serial(const MultiOutputSurrogate& surr, int input);

/// One independent input: uniform on [a, b] or normal with mean a, sd b.
struct Marginal {
  Family family = Family::legendre;
  double a = 0.0;
  double b = 1.0;

  static Marginal uniform(double lower, double upper) { return {Family::legendre, lower, upper}; }
  static Marginal normal(double mean, double sd) { return {Family::hermite, mean, sd}; }
};

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

using ScalarFunction = std::function<double(std::span<const double>)>;
using VectorFunction = std::function<void(std::span<const double>, std::span<double>)>;

/// Pick-freeze estimate of S_i with a bootstrap standard error. f is called
/// concurrently and must be thread-safe.
McEstimate mc_first_order_oracle(const ScalarFunction& f, std::span<const Marginal> inputs,
                                 int input, int n, std::uint64_t seed, int bootstrap = 200);

/// Vector-valued version: estimates for every output of f and every input in
/// `which`; result[w][o] for which[w], output o.
std::vector<std::vector<McEstimate>> mc_first_order_oracle_vector(
    const VectorFunction& f, int n_outputs, std::span<const Marginal> inputs,
    std::span<const int> which, int n, std::uint64_t seed, int bootstrap = 200);

}  // namespace uq
