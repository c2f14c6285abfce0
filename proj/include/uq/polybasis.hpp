#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace uq {

enum class Family { legendre, hermite };

inline constexpr int kDefaultMaxDegree = 30;
inline constexpr std::size_t kDefaultBasisCap = 1'000'000;

struct Bounds {
  double lower = 0.0;
  double upper = 1.0;

  double width() const { return upper - lower; }
  double midpoint() const { return 0.5 * (lower + upper); }
  bool operator==(const Bounds&) const = default;
};

/// Exponent vector alpha of a multivariate polynomial.
///
/// Ordering is graded: lower total degree first, and within one degree the
/// exponent vectors compare in descending lexicographic order, so in two
/// dimensions the first grade reads (1,0), (0,1).
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exponents);
  static MultiIndex zero(std::size_t dimension);

  std::size_t dimension() const { return exponents_.size(); }
  int operator[](std::size_t i) const { return exponents_[i]; }
  const std::vector<int>& exponents() const { return exponents_; }
  int total_degree() const;
  bool is_zero() const;
  /// True when exactly the inputs in `subset` carry non-zero exponents.
  bool has_support(std::span<const int> subset) const;

  bool operator==(const MultiIndex&) const = default;
  std::strong_ordering operator<=>(const MultiIndex& other) const;

 private:
  std::vector<int> exponents_;
};

/// Per-dimension polynomial family plus, for Legendre dimensions, the
/// physical box mapped onto [-1, 1].
struct BasisSpec {
  std::vector<Family> families;
  std::vector<std::optional<Bounds>> bounds;
  int max_degree = kDefaultMaxDegree;

  static BasisSpec legendre(std::vector<Bounds> box);
  std::size_t dimension() const { return families.size(); }
  void validate() const;
  bool operator==(const BasisSpec&) const = default;
};

/// Orthonormal polynomial of the given degree at u (uniform on [-1,1] for
/// Legendre, standard normal for Hermite).
double eval_univariate(Family family, int degree, double u, int max_degree = kDefaultMaxDegree);

/// Fills out[0..out.size()-1] with psi_0(u) ... psi_{n-1}(u). No domain check.
void eval_univariate_all(Family family, double u, std::span<double> out);

double eval_basis(const BasisSpec& spec, const MultiIndex& index, std::span<const double> u);

std::size_t total_degree_cardinality(int dimension, int max_degree);
std::vector<MultiIndex> total_degree_set(int dimension, int max_degree,
                                         std::size_t cap = kDefaultBasisCap);

Eigen::VectorXd standardize(const BasisSpec& spec, std::span<const double> x);
Eigen::VectorXd unstandardize(const BasisSpec& spec, std::span<const double> u);
/// Row-wise standardize of a K x M design.
Eigen::MatrixXd standardize_rows(const BasisSpec& spec, const Eigen::MatrixXd& x);

/// Same as standardize but without the bounds check (extrapolation).
Eigen::VectorXd standardize_unchecked(const BasisSpec& spec, std::span<const double> x);

/// K x P matrix Psi(k, j) = psi_{indices[j]}(U.row(k)). Parallel over rows.
Eigen::MatrixXd basis_matrix(const BasisSpec& spec, std::span<const MultiIndex> indices,
                             const Eigen::MatrixXd& u);
/// Single-threaded reference for basis_matrix.
Eigen::MatrixXd basis_matrix_serial(const BasisSpec& spec, std::span<const MultiIndex> indices,
                                    const Eigen::MatrixXd& u);

/// Evaluates sum_j coeffs[j] * psi_{indices[j]}(u) without domain checks.
double eval_expansion(std::span<const MultiIndex> indices, std::span<const double> coeffs,
                      const BasisSpec& spec, std::span<const double> u);

}  // namespace uq
