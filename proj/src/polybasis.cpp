#include "uq/polybasis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "uq/error.hpp"

namespace uq {
namespace {

constexpr double kDomainSlack = 1e-12;

void check_degree(int degree, int max_degree) {
  require(degree >= 0, ErrorKind::invalid_argument, "negative polynomial degree");
  require(degree <= max_degree, ErrorKind::degree_overflow,
          "degree " + std::to_string(degree) + " exceeds maximum " + std::to_string(max_degree));
}

void append_compositions(int remaining, std::size_t position, std::vector<int>& current,
                         std::vector<MultiIndex>& out) {
  if (position + 1 == current.size()) {
    current[position] = remaining;
    out.emplace_back(current);
    return;
  }
  for (int d = remaining; d >= 0; --d) {
    current[position] = d;
    append_compositions(remaining - d, position + 1, current, out);
  }
  current[position] = 0;
}

int max_exponent(std::span<const MultiIndex> indices, std::size_t dim) {
  int m = 0;
  for (const auto& a : indices) m = std::max(m, a[dim]);
  return m;
}

void fill_row(const BasisSpec& spec, std::span<const MultiIndex> indices, std::span<const double> u,
              std::vector<std::vector<double>>& table, double* out, Eigen::Index stride) {
  const std::size_t m = spec.dimension();
  for (std::size_t i = 0; i < m; ++i) eval_univariate_all(spec.families[i], u[i], table[i]);
  for (std::size_t j = 0; j < indices.size(); ++j) {
    double v = 1.0;
    const auto& e = indices[j].exponents();
    for (std::size_t i = 0; i < m; ++i) {
      if (e[i] != 0) v *= table[i][static_cast<std::size_t>(e[i])];
    }
    out[static_cast<Eigen::Index>(j) * stride] = v;
  }
}

std::vector<std::vector<double>> make_table(const BasisSpec& spec, const std::vector<int>& max_deg) {
  std::vector<std::vector<double>> table(spec.dimension());
  for (std::size_t i = 0; i < table.size(); ++i)
    table[i].resize(static_cast<std::size_t>(max_deg[i]) + 1);
  return table;
}

void check_matrix_inputs(const BasisSpec& spec, std::span<const MultiIndex> indices,
                         const Eigen::MatrixXd& u) {
  require(static_cast<std::size_t>(u.cols()) == spec.dimension(), ErrorKind::shape_error,
          "design has " + std::to_string(u.cols()) + " columns, basis expects " +
              std::to_string(spec.dimension()));
  for (const auto& a : indices)
    require(a.dimension() == spec.dimension(), ErrorKind::shape_error,
            "multi-index dimension does not match basis");
}

}  // namespace

MultiIndex::MultiIndex(std::vector<int> exponents) : exponents_(std::move(exponents)) {
  for (int e : exponents_) require(e >= 0, ErrorKind::invalid_argument, "negative exponent");
}

MultiIndex MultiIndex::zero(std::size_t dimension) {
  return MultiIndex(std::vector<int>(dimension, 0));
}

int MultiIndex::total_degree() const {
  return std::accumulate(exponents_.begin(), exponents_.end(), 0);
}

bool MultiIndex::is_zero() const {
  return std::all_of(exponents_.begin(), exponents_.end(), [](int e) { return e == 0; });
}

bool MultiIndex::has_support(std::span<const int> subset) const {
  std::size_t nonzero = 0;
  for (int e : exponents_) nonzero += e != 0 ? 1 : 0;
  if (nonzero != subset.size()) return false;
  for (int i : subset) {
    if (i < 0 || static_cast<std::size_t>(i) >= exponents_.size() || exponents_[i] == 0)
      return false;
  }
  return true;
}

std::strong_ordering MultiIndex::operator<=>(const MultiIndex& other) const {
  if (auto c = total_degree() <=> other.total_degree(); c != 0) return c;
  const std::size_t n = std::min(exponents_.size(), other.exponents_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (exponents_[i] != other.exponents_[i]) return other.exponents_[i] <=> exponents_[i];
  }
  return exponents_.size() <=> other.exponents_.size();
}

BasisSpec BasisSpec::legendre(std::vector<Bounds> box) {
  BasisSpec spec;
  spec.families.assign(box.size(), Family::legendre);
  for (const auto& b : box) spec.bounds.emplace_back(b);
  spec.validate();
  return spec;
}

void BasisSpec::validate() const {
  require(!families.empty(), ErrorKind::invalid_argument, "basis needs at least one dimension");
  require(bounds.size() == families.size(), ErrorKind::shape_error,
          "bounds count does not match family count");
  for (std::size_t i = 0; i < families.size(); ++i) {
    if (families[i] == Family::legendre) {
      require(bounds[i].has_value(), ErrorKind::invalid_argument,
              "Legendre dimension " + std::to_string(i + 1) + " needs bounds");
      require(bounds[i]->lower < bounds[i]->upper, ErrorKind::degenerate_bounds,
              "dimension " + std::to_string(i + 1) + " has lower >= upper");
    } else {
      require(!bounds[i].has_value(), ErrorKind::invalid_argument,
              "Hermite dimension " + std::to_string(i + 1) + " cannot carry bounds");
    }
  }
}

void eval_univariate_all(Family family, double u, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  if (family == Family::legendre) {
    // classical recurrence, normalized afterwards by sqrt(2n+1)
    double p_prev = 1.0;
    double p = u;
    out[1] = std::sqrt(3.0) * u;
    for (std::size_t n = 1; n + 1 < out.size(); ++n) {
      const double nd = static_cast<double>(n);
      const double p_next = ((2.0 * nd + 1.0) * u * p - nd * p_prev) / (nd + 1.0);
      p_prev = p;
      p = p_next;
      out[n + 1] = std::sqrt(2.0 * nd + 3.0) * p;
    }
  } else {
    // probabilists' Hermite, normalized recurrence psi_n = He_n / sqrt(n!)
    out[1] = u;
    for (std::size_t n = 1; n + 1 < out.size(); ++n) {
      const double nd = static_cast<double>(n);
      out[n + 1] = (u * out[n] - std::sqrt(nd) * out[n - 1]) / std::sqrt(nd + 1.0);
    }
  }
}

double eval_univariate(Family family, int degree, double u, int max_degree) {
  check_degree(degree, max_degree);
  if (family == Family::legendre) {
    require(std::isfinite(u) && std::abs(u) <= 1.0 + kDomainSlack, ErrorKind::domain_violation,
            "Legendre argument " + std::to_string(u) + " outside [-1, 1]");
  } else {
    require(std::isfinite(u), ErrorKind::domain_violation, "Hermite argument is not finite");
  }
  std::vector<double> values(static_cast<std::size_t>(degree) + 1);
  eval_univariate_all(family, u, values);
  return values.back();
}

double eval_basis(const BasisSpec& spec, const MultiIndex& index, std::span<const double> u) {
  require(index.dimension() == spec.dimension() && u.size() == spec.dimension(),
          ErrorKind::shape_error, "multi-index, point and basis dimensions differ");
  double v = 1.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    v *= eval_univariate(spec.families[i], index[i], u[i], spec.max_degree);
  return v;
}

std::size_t total_degree_cardinality(int dimension, int max_degree) {
  require(dimension >= 1 && max_degree >= 0, ErrorKind::invalid_argument,
          "need dimension >= 1 and degree >= 0");
  // binomial(M + p, p), saturating on overflow
  long double c = 1.0L;
  for (int k = 1; k <= max_degree; ++k) c = c * (dimension + k) / k;
  const long double limit = static_cast<long double>(std::numeric_limits<std::size_t>::max());
  return c >= limit ? std::numeric_limits<std::size_t>::max()
                    : static_cast<std::size_t>(std::llround(c));
}

std::vector<MultiIndex> total_degree_set(int dimension, int max_degree, std::size_t cap) {
  const std::size_t n = total_degree_cardinality(dimension, max_degree);
  require(n <= cap, ErrorKind::basis_too_large,
          std::to_string(n) + " terms exceed the cap of " + std::to_string(cap));
  std::vector<MultiIndex> out;
  out.reserve(n);
  std::vector<int> current(static_cast<std::size_t>(dimension), 0);
  for (int d = 0; d <= max_degree; ++d) append_compositions(d, 0, current, out);
  return out;
}

Eigen::VectorXd standardize_unchecked(const BasisSpec& spec, std::span<const double> x) {
  require(x.size() == spec.dimension(), ErrorKind::shape_error, "point dimension mismatch");
  Eigen::VectorXd u(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (spec.families[i] == Family::legendre) {
      const Bounds& b = *spec.bounds[i];
      u[static_cast<Eigen::Index>(i)] = (2.0 * x[i] - b.lower - b.upper) / b.width();
    } else {
      u[static_cast<Eigen::Index>(i)] = x[i];
    }
  }
  return u;
}

Eigen::VectorXd standardize(const BasisSpec& spec, std::span<const double> x) {
  require(x.size() == spec.dimension(), ErrorKind::shape_error, "point dimension mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (spec.families[i] != Family::legendre) continue;
    const Bounds& b = *spec.bounds[i];
    const double slack = kDomainSlack * b.width();
    require(x[i] >= b.lower - slack && x[i] <= b.upper + slack, ErrorKind::domain_violation,
            "x" + std::to_string(i + 1) + " = " + std::to_string(x[i]) + " outside [" +
                std::to_string(b.lower) + ", " + std::to_string(b.upper) + "]");
  }
  return standardize_unchecked(spec, x);
}

Eigen::VectorXd unstandardize(const BasisSpec& spec, std::span<const double> u) {
  require(u.size() == spec.dimension(), ErrorKind::shape_error, "point dimension mismatch");
  Eigen::VectorXd x(static_cast<Eigen::Index>(u.size()));
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (spec.families[i] == Family::legendre) {
      require(std::abs(u[i]) <= 1.0 + kDomainSlack, ErrorKind::domain_violation,
              "standard coordinate outside [-1, 1]");
      const Bounds& b = *spec.bounds[i];
      x[static_cast<Eigen::Index>(i)] = 0.5 * (b.lower + b.upper) + 0.5 * u[i] * b.width();
    } else {
      x[static_cast<Eigen::Index>(i)] = u[i];
    }
  }
  return x;
}

Eigen::MatrixXd standardize_rows(const BasisSpec& spec, const Eigen::MatrixXd& x) {
  Eigen::MatrixXd u(x.rows(), x.cols());
  std::vector<double> row(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index k = 0; k < x.rows(); ++k) {
    for (Eigen::Index i = 0; i < x.cols(); ++i) row[static_cast<std::size_t>(i)] = x(k, i);
    u.row(k) = standardize(spec, row).transpose();
  }
  return u;
}

Eigen::MatrixXd basis_matrix(const BasisSpec& spec, std::span<const MultiIndex> indices,
                             const Eigen::MatrixXd& u) {
  check_matrix_inputs(spec, indices, u);
  const Eigen::Index k_rows = u.rows();
  const auto m = static_cast<Eigen::Index>(spec.dimension());
  std::vector<int> max_deg(spec.dimension());
  for (std::size_t i = 0; i < max_deg.size(); ++i) max_deg[i] = max_exponent(indices, i);

  Eigen::MatrixXd psi(k_rows, static_cast<Eigen::Index>(indices.size()));
#pragma omp parallel
  {
    auto table = make_table(spec, max_deg);
    std::vector<double> row(static_cast<std::size_t>(m));
#pragma omp for schedule(static)
    for (Eigen::Index k = 0; k < k_rows; ++k) {
      for (Eigen::Index i = 0; i < m; ++i) row[static_cast<std::size_t>(i)] = u(k, i);
      fill_row(spec, indices, row, table, psi.data() + k, k_rows);
    }
  }
  return psi;
}

Eigen::MatrixXd basis_matrix_serial(const BasisSpec& spec, std::span<const MultiIndex> indices,
                                    const Eigen::MatrixXd& u) {
  check_matrix_inputs(spec, indices, u);
  Eigen::MatrixXd psi(u.rows(), static_cast<Eigen::Index>(indices.size()));
  for (Eigen::Index k = 0; k < u.rows(); ++k) {
    for (std::size_t j = 0; j < indices.size(); ++j) {
      double v = 1.0;
      for (Eigen::Index i = 0; i < u.cols(); ++i) {
        const int d = indices[j][static_cast<std::size_t>(i)];
        if (d == 0) continue;
        std::vector<double> vals(static_cast<std::size_t>(d) + 1);
        eval_univariate_all(spec.families[static_cast<std::size_t>(i)], u(k, i), vals);
        v *= vals.back();
      }
      psi(k, static_cast<Eigen::Index>(j)) = v;
    }
  }
  return psi;
}

double eval_expansion(std::span<const MultiIndex> indices, std::span<const double> coeffs,
                      const BasisSpec& spec, std::span<const double> u) {
  const std::size_t m = spec.dimension();
  std::vector<int> max_deg(m);
  for (std::size_t i = 0; i < m; ++i) max_deg[i] = max_exponent(indices, i);
  auto table = make_table(spec, max_deg);
  for (std::size_t i = 0; i < m; ++i) eval_univariate_all(spec.families[i], u[i], table[i]);
  double sum = 0.0;
  for (std::size_t j = 0; j < indices.size(); ++j) {
    double v = coeffs[j];
    const auto& e = indices[j].exponents();
    for (std::size_t i = 0; i < m; ++i) {
      if (e[i] != 0) v *= table[i][static_cast<std::size_t>(e[i])];
    }
    sum += v;
  }
  return sum;
}

}  // namespace uq
