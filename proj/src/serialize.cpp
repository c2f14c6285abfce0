#include "uq/serialize.hpp"

#include "uq/error.hpp"
#include "uq/io.hpp"

namespace uq {
namespace {

using nlohmann::json;

const json& field(const json& j, const char* key) {
  require(j.is_object() && j.contains(key), ErrorKind::parse_error, std::string("missing field '") + key + "'");
  return j.at(key);
}

template <class T>
T get(const json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorKind::parse_error, std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

json to_json(const BasisSpec& spec) {
  json fam = json::array(), bounds = json::array();
  for (std::size_t i = 0; i < spec.dimension(); ++i) {
    fam.push_back(spec.families[i] == Family::legendre ? "legendre" : "hermite");
    if (spec.bounds[i])
      bounds.push_back({spec.bounds[i]->lower, spec.bounds[i]->upper});
    else
      bounds.push_back(nullptr);
  }
  return {{"families", fam}, {"bounds", bounds}};
}

BasisSpec basis_spec_from_json(const json& j) {
  BasisSpec spec;
  const json& fam = field(j, "families");
  const json& bounds = field(j, "bounds");
  require(fam.is_array() && bounds.is_array() && fam.size() == bounds.size(), ErrorKind::parse_error,
          "families and bounds must be arrays of equal length");
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const std::string f = fam[i].is_string() ? fam[i].get<std::string>() : "";
    if (f == "legendre")
      spec.families.push_back(Family::legendre);
    else if (f == "hermite")
      spec.families.push_back(Family::hermite);
    else
      fail(ErrorKind::parse_error, "unknown polynomial family " + fam[i].dump());
    if (bounds[i].is_null()) {
      spec.bounds.emplace_back(std::nullopt);
    } else {
      require(bounds[i].is_array() && bounds[i].size() == 2, ErrorKind::parse_error, "bounds entry must be [lo, hi] or null");
      spec.bounds.emplace_back(Bounds{bounds[i][0].get<double>(), bounds[i][1].get<double>()});
    }
  }
  spec.validate();
  return spec;
}

json to_json(const ReducedBasis& rb) {
  return {{"mean", io::vector_to_json(rb.mean)},
          {"eigvecs", io::matrix_to_json(rb.eigvecs)},
          {"eigvals_all", io::vector_to_json(rb.eigvals_all)},
          {"retained", rb.retained},
          {"explained_fraction", rb.explained_fraction}};
}

ReducedBasis reduced_basis_from_json(const json& j) {
  ReducedBasis rb;
  rb.mean = io::vector_from_json(field(j, "mean"));
  rb.eigvecs = io::matrix_from_json(field(j, "eigvecs"));
  rb.eigvals_all = io::vector_from_json(field(j, "eigvals_all"));
  rb.retained = get<int>(j, "retained");
  rb.explained_fraction = j.value("explained_fraction", 0.0);
  require(rb.eigvecs.rows() == rb.mean.size() && rb.eigvecs.cols() == rb.retained &&
              rb.eigvals_all.size() == rb.mean.size(),
          ErrorKind::parse_error, "reduced basis payload sizes are inconsistent");
  return rb;
}

json to_json(const SparsePce& pce) {
  json active = json::array();
  for (const auto& a : pce.active) active.push_back(a.exponents());
  Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(pce.coeffs.data(), static_cast<Eigen::Index>(pce.coeffs.size()));
  return {{"active", active}, {"coeffs", io::vector_to_json(c)}, {"loo", pce.loo_normalized},
          {"degree", pce.degree_selected}};
}

SparsePce sparse_pce_from_json(const json& j, const BasisSpec& spec) {
  SparsePce pce;
  pce.spec = spec;
  for (const auto& a : field(j, "active")) {
    MultiIndex idx(a.get<std::vector<int>>());
    require(idx.dimension() == spec.dimension(), ErrorKind::parse_error, "multi-index dimension differs from basis");
    pce.active.push_back(std::move(idx));
  }
  const Eigen::VectorXd c = io::vector_from_json(field(j, "coeffs"));
  pce.coeffs.assign(c.data(), c.data() + c.size());
  require(pce.coeffs.size() == pce.active.size(), ErrorKind::parse_error, "one coefficient per multi-index required");
  pce.loo_normalized = get<double>(j, "loo");
  pce.degree_selected = get<int>(j, "degree");
  return pce;
}

json to_json(const MultiOutputSurrogate& surr) {
  json comps = json::array();
  for (const auto& p : surr.pces) comps.push_back(to_json(p));
  return {{"schema_version", io::kSchemaVersion},
          {"kind", "surrogate"},
          {"basis", to_json(surr.spec())},
          {"reduced_basis", to_json(surr.rb)},
          {"components", comps}};
}

MultiOutputSurrogate surrogate_from_json(const json& j) {
  io::check_schema_version(j, "surrogate");
  MultiOutputSurrogate surr;
  const BasisSpec spec = basis_spec_from_json(field(j, "basis"));
  surr.rb = reduced_basis_from_json(field(j, "reduced_basis"));
  for (const auto& c : field(j, "components")) surr.pces.push_back(sparse_pce_from_json(c, spec));
  surr.validate();
  return surr;
}

json chains_to_json(const std::vector<Chain>& chains, const std::vector<std::string>& names) {
  json arr = json::array();
  for (const auto& c : chains) {
    arr.push_back({{"seed", c.seed},
                   {"blocks", c.blocks},
                   {"accepted", c.accepted},
                   {"proposed", c.proposed},
                   {"proposal_scales", c.proposal_scales},
                   {"samples", io::matrix_to_json(c.samples)},
                   {"log_posterior", io::vector_to_json(c.log_posterior)}});
  }
  return {{"schema_version", io::kSchemaVersion}, {"kind", "chains"}, {"parameters", names}, {"chains", arr}};
}

std::vector<Chain> chains_from_json(const json& j, std::vector<std::string>* names) {
  io::check_schema_version(j, "chains");
  if (names) *names = get<std::vector<std::string>>(j, "parameters");
  std::vector<Chain> out;
  for (const auto& e : field(j, "chains")) {
    Chain c;
    c.seed = get<std::uint64_t>(e, "seed");
    c.blocks = get<std::vector<Block>>(e, "blocks");
    c.accepted = get<std::vector<std::int64_t>>(e, "accepted");
    c.proposed = get<std::vector<std::int64_t>>(e, "proposed");
    c.proposal_scales = get<std::vector<double>>(e, "proposal_scales");
    c.samples = io::matrix_from_json(field(e, "samples"));
    c.log_posterior = io::vector_from_json(field(e, "log_posterior"));
    require(c.log_posterior.size() == c.samples.rows(), ErrorKind::parse_error,
            "log_posterior length differs from sample count");
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace uq
