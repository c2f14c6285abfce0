#include "uq/json_schema.hpp"

#include <algorithm>

namespace uq {
namespace {

using nlohmann::json;

bool has_type(const json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  if (t == "integer") return v.is_number_integer() || (v.is_number_float() && v.get<double>() == static_cast<double>(static_cast<long long>(v.get<double>())));
  if (t == "number") return v.is_number();
  return false;
}

void check(const json& schema, const json& v, const std::string& path, std::vector<std::string>& out) {
  const std::string where = path.empty() ? "/" : path;
  if (schema.contains("type")) {
    const json& t = schema["type"];
    bool ok = false;
    if (t.is_string()) ok = has_type(v, t.get<std::string>());
    else
      for (const auto& e : t) ok = ok || has_type(v, e.get<std::string>());
    if (!ok) {
      out.push_back(where + ": expected " + (t.is_string() ? t.get<std::string>() : t.dump()) + ", got " + v.type_name());
      return;
    }
  }
  if (schema.contains("enum")) {
    const json& e = schema["enum"];
    if (std::find(e.begin(), e.end(), v) == e.end()) out.push_back(where + ": " + v.dump() + " is not one of " + e.dump());
  }
  if (v.is_number()) {
    const double x = v.get<double>();
    if (schema.contains("minimum") && x < schema["minimum"].get<double>())
      out.push_back(where + ": " + v.dump() + " is below the minimum " + schema["minimum"].dump());
    if (schema.contains("maximum") && x > schema["maximum"].get<double>())
      out.push_back(where + ": " + v.dump() + " is above the maximum " + schema["maximum"].dump());
    if (schema.contains("exclusiveMinimum") && x <= schema["exclusiveMinimum"].get<double>())
      out.push_back(where + ": " + v.dump() + " must exceed " + schema["exclusiveMinimum"].dump());
    if (schema.contains("exclusiveMaximum") && x >= schema["exclusiveMaximum"].get<double>())
      out.push_back(where + ": " + v.dump() + " must be below " + schema["exclusiveMaximum"].dump());
  }
  if (v.is_string() && schema.contains("minLength") && v.get<std::string>().size() < schema["minLength"].get<std::size_t>())
    out.push_back(where + ": string shorter than " + schema["minLength"].dump());
  if (v.is_array()) {
    if (schema.contains("minItems") && v.size() < schema["minItems"].get<std::size_t>())
      out.push_back(where + ": needs at least " + schema["minItems"].dump() + " items");
    if (schema.contains("maxItems") && v.size() > schema["maxItems"].get<std::size_t>())
      out.push_back(where + ": allows at most " + schema["maxItems"].dump() + " items");
    if (schema.contains("items"))
      for (std::size_t i = 0; i < v.size(); ++i) check(schema["items"], v[i], path + "/" + std::to_string(i), out);
  }
  if (v.is_object()) {
    if (schema.contains("required"))
      for (const auto& r : schema["required"])
        if (!v.contains(r.get<std::string>())) out.push_back(where + ": missing required key '" + r.get<std::string>() + "'");
    const json* props = schema.contains("properties") ? &schema["properties"] : nullptr;
    const bool closed = schema.contains("additionalProperties") && schema["additionalProperties"] == false;
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (props && props->contains(it.key()))
        check((*props)[it.key()], it.value(), path + "/" + it.key(), out);
      else if (closed)
        out.push_back(where + ": unknown key '" + it.key() + "'");
    }
  }
}

}  // namespace

std::vector<std::string> schema_violations(const json& schema, const json& doc) {
  std::vector<std::string> out;
  check(schema, doc, "", out);
  return out;
}

}  // namespace uq
