#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace uq::io {

inline constexpr int kSchemaVersion = 1;

/// 17 significant digits; parses back to the identical double.
std::string format_double(double value);

struct CsvTable {
  std::vector<std::string> header;
  Eigen::MatrixXd values;  // one record per row

  /// Column position by header name, or -1.
  int column(std::string_view name) const;
};

std::string to_csv(std::span<const std::string> header, const Eigen::MatrixXd& values);
void write_csv(const std::filesystem::path& path, std::span<const std::string> header,
               const Eigen::MatrixXd& values);

/// Mixed text/number records, written verbatim.
void write_text_csv(const std::filesystem::path& path, std::span<const std::string> header,
                    const std::vector<std::vector<std::string>>& rows);

/// Numeric CSV with a header row. `source` prefixes diagnostics ("name:line:col: ...").
CsvTable parse_csv(std::string_view text, std::string_view source = "<csv>");
CsvTable read_csv(const std::filesystem::path& path);

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

/// {"rows", "cols", "data"}; data is base64 of little-endian float64, row-major.
nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);
nlohmann::json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const nlohmann::json& j);

/// Refuses artifacts written with another schema version.
void check_schema_version(const nlohmann::json& j, std::string_view what);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace uq::io
