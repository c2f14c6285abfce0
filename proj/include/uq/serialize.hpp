#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "uq/mcmc.hpp"
#include "uq/pca.hpp"
#include "uq/pce.hpp"
#include "uq/polybasis.hpp"

namespace uq {

nlohmann::json to_json(const BasisSpec& spec);
BasisSpec basis_spec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ReducedBasis& rb);
ReducedBasis reduced_basis_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SparsePce& pce);
SparsePce sparse_pce_from_json(const nlohmann::json& j, const BasisSpec& spec);

/// Versioned artifact: basis spec, reduced basis and per-component expansions.
nlohmann::json to_json(const MultiOutputSurrogate& surr);
MultiOutputSurrogate surrogate_from_json(const nlohmann::json& j);

/// Versioned artifact with one entry per chain.
nlohmann::json chains_to_json(const std::vector<Chain>& chains, const std::vector<std::string>& names);
std::vector<Chain> chains_from_json(const nlohmann::json& j, std::vector<std::string>* names = nullptr);

}  // namespace uq
