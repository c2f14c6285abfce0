#include "uq/error.hpp"

namespace uq {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid argument";
    case ErrorKind::shape_error: return "shape error";
    case ErrorKind::domain_violation: return "domain violation";
    case ErrorKind::degree_overflow: return "degree overflow";
    case ErrorKind::basis_too_large: return "basis too large";
    case ErrorKind::degenerate_bounds: return "degenerate bounds";
    case ErrorKind::dimension_mismatch: return "dimension mismatch";
    case ErrorKind::incompatible_expansions: return "incompatible expansions";
    case ErrorKind::parse_error: return "parse error";
    case ErrorKind::schema_mismatch: return "schema mismatch";
    case ErrorKind::missing_artifact: return "missing artifact";
    case ErrorKind::io_error: return "i/o error";
    case ErrorKind::degenerate_sample: return "degenerate sample";
    case ErrorKind::degenerate_target: return "degenerate target";
    case ErrorKind::ill_conditioned: return "ill-conditioned model";
    case ErrorKind::leverage_saturation: return "leverage saturation";
    case ErrorKind::degenerate_pce: return "degenerate pce";
    case ErrorKind::degenerate_function: return "degenerate function";
    case ErrorKind::cannot_initialize: return "cannot initialize chain";
    case ErrorKind::infeasible_starts: return "all starts infeasible";
    case ErrorKind::insufficient_samples: return "insufficient samples";
    case ErrorKind::numerical_failure: return "numerical failure";
  }
  return "unknown error";
}

bool is_numerical(ErrorKind kind) {
  return kind >= ErrorKind::degenerate_sample;
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace uq
