#include "uq/sobol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "uq/error.hpp"
#include "uq/random.hpp"

namespace uq {
namespace {

constexpr double kUndefinedRelative = 1e-12;

double variance_of(const SparsePce& pce) {
  const double v = moments(pce).variance;
  require(v > 0.0, ErrorKind::degenerate_pce, "expansion has zero variance");
  return v;
}

void check_input(const SparsePce& pce, int input) {
  require(input >= 0 && static_cast<std::size_t>(input) < pce.spec.dimension(),
          ErrorKind::invalid_argument, "input index out of range");
}

// Coefficients of all components aligned on the union of their active sets.
struct AlignedCoefficients {
  std::vector<MultiIndex> indices;
  Eigen::MatrixXd coeffs;  // components x indices
};

AlignedCoefficients align(const MultiOutputSurrogate& surr) {
  std::map<MultiIndex, Eigen::Index> position;
  for (const auto& pce : surr.pces)
    for (const auto& a : pce.active) position.emplace(a, 0);
  AlignedCoefficients out;
  Eigen::Index next = 0;
  for (auto& [a, pos] : position) {
    pos = next++;
    out.indices.push_back(a);
  }
  out.coeffs = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(surr.pces.size()), next);
  for (std::size_t p = 0; p < surr.pces.size(); ++p) {
    const auto& pce = surr.pces[p];
    for (std::size_t j = 0; j < pce.active.size(); ++j)
      out.coeffs(static_cast<Eigen::Index>(p), position.at(pce.active[j])) = pce.coeffs[j];
  }
  return out;
}

// Conditional covariance matrix C (numerator) and full covariance V (denominator).
struct RecombinationTerms {
  Eigen::MatrixXd conditional;
  Eigen::MatrixXd full;
};

RecombinationTerms recombination_terms(const MultiOutputSurrogate& surr, int input) {
  surr.validate();
  check_input(surr.pces.front(), input);
  const AlignedCoefficients al = align(surr);
  const int single[] = {input};
  const auto r = al.coeffs.rows();
  RecombinationTerms terms{Eigen::MatrixXd::Zero(r, r), Eigen::MatrixXd::Zero(r, r)};
  for (std::size_t j = 0; j < al.indices.size(); ++j) {
    if (al.indices[j].is_zero()) continue;
    const Eigen::VectorXd col = al.coeffs.col(static_cast<Eigen::Index>(j));
    const Eigen::MatrixXd outer = col * col.transpose();
    terms.full += outer;
    if (al.indices[j].has_support(single)) terms.conditional += outer;
  }
  return terms;
}

void finalize_flags(TimeVariantIndices& out, const Eigen::VectorXd& denominators) {
  const double vmax = denominators.maxCoeff();
  for (std::size_t t = 0; t < out.values.size(); ++t) {
    if (!(denominators[static_cast<Eigen::Index>(t)] > kUndefinedRelative * vmax)) {
      out.values[t] = std::numeric_limits<double>::quiet_NaN();
      out.flags[t] = IndexFlag::undefined;
    } else if (out.values[t] < 0.0) {
      out.flags[t] = IndexFlag::negative;
    }
  }
}

double pick_freeze(std::span<const double> fa, std::span<const double> fb,
                   std::span<const double> fab, std::span<const std::size_t> rows) {
  const double n = static_cast<double>(rows.size());
  double sa = 0.0, sb = 0.0, sab = 0.0, s2 = 0.0;
  for (std::size_t r : rows) {
    sa += fa[r];
    sb += fb[r];
    sab += fb[r] * fab[r];
  }
  const double ma = sa / n;
  const double mb = sb / n;
  const double pooled_mean = 0.5 * (ma + mb);
  for (std::size_t r : rows) {
    s2 += (fa[r] - pooled_mean) * (fa[r] - pooled_mean) + (fb[r] - pooled_mean) * (fb[r] - pooled_mean);
  }
  const double var = s2 / (2.0 * n - 1.0);
  if (!(var > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return (sab / n - ma * mb) / var;
}

double draw(const Marginal& m, Rng& rng, std::normal_distribution<double>& normal) {
  if (m.family == Family::legendre) return m.a + uniform01(rng) * (m.b - m.a);
  return m.a + m.b * normal(rng);
}

}  // namespace

double subset_index(const SparsePce& pce, std::span<const int> subset) {
  require(!subset.empty(), ErrorKind::invalid_argument, "subset must be non-empty");
  for (int i : subset) check_input(pce, i);
  std::vector<int> sorted(subset.begin(), subset.end());
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
          ErrorKind::invalid_argument, "subset has repeated inputs");
  const double var = variance_of(pce);
  double part = 0.0;
  for (std::size_t j = 0; j < pce.active.size(); ++j)
    if (pce.active[j].has_support(sorted)) part += pce.coeffs[j] * pce.coeffs[j];
  return part / var;
}

double first_order_index(const SparsePce& pce, int input) {
  const int single[] = {input};
  return subset_index(pce, single);
}

double total_index(const SparsePce& pce, int input) {
  check_input(pce, input);
  const double var = variance_of(pce);
  double part = 0.0;
  for (std::size_t j = 0; j < pce.active.size(); ++j)
    if (pce.active[j][static_cast<std::size_t>(input)] != 0) part += pce.coeffs[j] * pce.coeffs[j];
  return part / var;
}

std::map<std::vector<int>, double> all_subset_indices(const SparsePce& pce) {
  const std::size_t m = pce.spec.dimension();
  require(m <= 20, ErrorKind::invalid_argument, "subset lattice too large");
  const double var = variance_of(pce);
  std::map<std::vector<int>, double> out;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> u;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (1u << i)) u.push_back(static_cast<int>(i));
    out.emplace(std::move(u), 0.0);
  }
  for (std::size_t j = 0; j < pce.active.size(); ++j) {
    if (pce.active[j].is_zero()) continue;
    std::vector<int> support;
    for (std::size_t i = 0; i < m; ++i)
      if (pce.active[j][i] != 0) support.push_back(static_cast<int>(i));
    out[support] += pce.coeffs[j] * pce.coeffs[j] / var;
  }
  return out;
}

double cond_cov(const SparsePce& p, const SparsePce& q, int input) {
  require(p.spec == q.spec, ErrorKind::incompatible_expansions, "expansions use different bases");
  check_input(p, input);
  const int single[] = {input};
  std::map<MultiIndex, double> q_coeffs;
  for (std::size_t j = 0; j < q.active.size(); ++j)
    if (q.active[j].has_support(single)) q_coeffs.emplace(q.active[j], q.coeffs[j]);
  double sum = 0.0;
  for (std::size_t j = 0; j < p.active.size(); ++j) {
    if (!p.active[j].has_support(single)) continue;
    if (auto it = q_coeffs.find(p.active[j]); it != q_coeffs.end()) sum += p.coeffs[j] * it->second;
  }
  return sum;
}

SobolReport component_report(const MultiOutputSurrogate& surr) {
  surr.validate();
  const auto m = static_cast<int>(surr.spec().dimension());
  SobolReport report;
  for (std::size_t p = 0; p < surr.pces.size(); ++p) {
    report.subjects.push_back("Z" + std::to_string(p));
    std::vector<double> s(static_cast<std::size_t>(m)), t(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      s[static_cast<std::size_t>(i)] = first_order_index(surr.pces[p], i);
      t[static_cast<std::size_t>(i)] = total_index(surr.pces[p], i);
    }
    report.first_order.push_back(std::move(s));
    report.total.push_back(std::move(t));
  }
  return report;
}

std::string_view to_string(IndexFlag flag) {
  switch (flag) {
    case IndexFlag::ok: return "";
    case IndexFlag::negative: return "negative";
    case IndexFlag::undefined: return "undefined";
  }
  return "";
}

TimeVariantIndices timevariant_first_order(const MultiOutputSurrogate& surr, int input) {
  const RecombinationTerms terms = recombination_terms(surr, input);
  const Eigen::MatrixXd& phi = surr.rb.eigvecs;
  const Eigen::Index n = phi.rows();
  TimeVariantIndices out{std::vector<double>(static_cast<std::size_t>(n)),
                         std::vector<IndexFlag>(static_cast<std::size_t>(n), IndexFlag::ok)};
  Eigen::VectorXd den(n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index t = 0; t < n; ++t) {
    const Eigen::VectorXd row = phi.row(t).transpose();
    const double num = row.dot(terms.conditional * row);
    den[t] = row.dot(terms.full * row);
    out.values[static_cast<std::size_t>(t)] = num / den[t];
  }
  finalize_flags(out, den);
  return out;
}

TimeVariantIndices timevariant_first_order_serial(const MultiOutputSurrogate& surr, int input) {
  const RecombinationTerms terms = recombination_terms(surr, input);
  const Eigen::MatrixXd& phi = surr.rb.eigvecs;
  const Eigen::Index n = phi.rows();
  TimeVariantIndices out{std::vector<double>(static_cast<std::size_t>(n)),
                         std::vector<IndexFlag>(static_cast<std::size_t>(n), IndexFlag::ok)};
  Eigen::VectorXd den(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    const Eigen::VectorXd row = phi.row(t).transpose();
    const double num = row.dot(terms.conditional * row);
    den[t] = row.dot(terms.full * row);
    out.values[static_cast<std::size_t>(t)] = num / den[t];
  }
  finalize_flags(out, den);
  return out;
}

std::vector<std::vector<McEstimate>> mc_first_order_oracle_vector(
    const VectorFunction& f, int n_outputs, std::span<const Marginal> inputs,
    std::span<const int> which, int n, std::uint64_t seed, int bootstrap) {
  require(n >= 1000, ErrorKind::invalid_argument, "pick-freeze needs n >= 1000");
  require(n_outputs >= 1 && bootstrap >= 2, ErrorKind::invalid_argument,
          "need at least one output and two bootstrap replicates");
  const auto m = static_cast<Eigen::Index>(inputs.size());
  for (int i : which)
    require(i >= 0 && i < m, ErrorKind::invalid_argument, "input index out of range");

  Rng rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(n, m), b(n, m);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index i = 0; i < m; ++i) a(k, i) = draw(inputs[static_cast<std::size_t>(i)], rng, normal);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index i = 0; i < m; ++i) b(k, i) = draw(inputs[static_cast<std::size_t>(i)], rng, normal);

  // output-major storage: values[o * n + k]
  auto evaluate = [&](const Eigen::MatrixXd& x) {
    std::vector<double> values(static_cast<std::size_t>(n_outputs) * static_cast<std::size_t>(n));
#pragma omp parallel
    {
      std::vector<double> point(static_cast<std::size_t>(m));
      std::vector<double> out(static_cast<std::size_t>(n_outputs));
#pragma omp for schedule(static)
      for (int k = 0; k < n; ++k) {
        for (Eigen::Index i = 0; i < m; ++i) point[static_cast<std::size_t>(i)] = x(k, i);
        f(point, out);
        for (int o = 0; o < n_outputs; ++o)
          values[static_cast<std::size_t>(o) * static_cast<std::size_t>(n) + static_cast<std::size_t>(k)] =
              out[static_cast<std::size_t>(o)];
      }
    }
    return values;
  };
  const std::vector<double> fa = evaluate(a);
  const std::vector<double> fb = evaluate(b);

  std::vector<std::size_t> all_rows(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < all_rows.size(); ++k) all_rows[k] = k;
  std::vector<std::vector<std::size_t>> resamples(static_cast<std::size_t>(bootstrap),
                                                  std::vector<std::size_t>(static_cast<std::size_t>(n)));
  for (int r = 0; r < bootstrap; ++r) {
    Rng boot(derive_seed(seed, 1'000'000 + static_cast<std::uint64_t>(r)));
    std::uniform_int_distribution<std::size_t> pick(0, static_cast<std::size_t>(n) - 1);
    for (auto& row : resamples[static_cast<std::size_t>(r)]) row = pick(boot);
  }

  const auto un = static_cast<std::size_t>(n);
  std::vector<std::vector<McEstimate>> result;
  for (int i : which) {
    Eigen::MatrixXd ab = a;
    ab.col(i) = b.col(i);
    const std::vector<double> fab = evaluate(ab);
    std::vector<McEstimate> per_output(static_cast<std::size_t>(n_outputs));
    for (int o = 0; o < n_outputs; ++o) {
      const std::size_t off = static_cast<std::size_t>(o) * un;
      const std::span<const double> sa(fa.data() + off, un), sb(fb.data() + off, un),
          sab(fab.data() + off, un);
      const double est = pick_freeze(sa, sb, sab, all_rows);
      require(std::isfinite(est), ErrorKind::degenerate_function,
              "function output " + std::to_string(o) + " has zero variance");
      std::vector<double> reps(static_cast<std::size_t>(bootstrap));
#pragma omp parallel for schedule(static)
      for (int r = 0; r < bootstrap; ++r)
        reps[static_cast<std::size_t>(r)] = pick_freeze(sa, sb, sab, resamples[static_cast<std::size_t>(r)]);
      double mean = 0.0;
      for (double v : reps) mean += v;
      mean /= bootstrap;
      double ss = 0.0;
      for (double v : reps) ss += (v - mean) * (v - mean);
      per_output[static_cast<std::size_t>(o)] = {est, std::sqrt(ss / (bootstrap - 1))};
    }
    result.push_back(std::move(per_output));
  }
  return result;
}

McEstimate mc_first_order_oracle(const ScalarFunction& f, std::span<const Marginal> inputs,
                                 int input, int n, std::uint64_t seed, int bootstrap) {
  const VectorFunction g = [&f](std::span<const double> x, std::span<double> out) { out[0] = f(x); };
  const int which[] = {input};
  return mc_first_order_oracle_vector(g, 1, inputs, which, n, seed, bootstrap).front().front();
}

}  // namespace uq
