#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace uq {

/// Validates `doc` against the subset of JSON Schema used by the pipeline
/// configuration: type, enum, properties, required, additionalProperties
/// (boolean), items, minItems/maxItems, minLength, minimum/maximum and their
/// exclusive forms. Returns one message per violation, prefixed by a JSON
/// pointer to the offending value.
std::vector<std::string> schema_violations(const nlohmann::json& schema, const nlohmann::json& doc);

}  // namespace uq
