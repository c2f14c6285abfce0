#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace uq {

enum class ErrorKind {
  // validation failures (CLI exit code 2)
  invalid_argument,
  shape_error,
  domain_violation,
  degree_overflow,
  basis_too_large,
  degenerate_bounds,
  dimension_mismatch,
  incompatible_expansions,
  parse_error,
  schema_mismatch,
  missing_artifact,
  io_error,
  // numerical failures (CLI exit code 3)
  degenerate_sample,
  degenerate_target,
  ill_conditioned,
  leverage_saturation,
  degenerate_pce,
  degenerate_function,
  cannot_initialize,
  infeasible_starts,
  insufficient_samples,
  numerical_failure,
};

std::string_view to_string(ErrorKind kind);

/// True for failures caused by the numbers rather than by the inputs' shape or validity.
bool is_numerical(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace uq
