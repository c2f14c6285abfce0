#include "uq/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "uq/error.hpp"

namespace uq::io {
namespace {

constexpr std::string_view kAlphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

[[noreturn]] void parse_fail(std::string_view source, std::size_t line, std::size_t col, const std::string& msg) {
  fail(ErrorKind::parse_error,
       std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
}

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) return __builtin_bswap64(v);
  return v;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

int CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

std::string to_csv(std::span<const std::string> header, const Eigen::MatrixXd& values) {
  require(header.size() == static_cast<std::size_t>(values.cols()), ErrorKind::shape_error,
          "CSV header has " + std::to_string(header.size()) + " names for " + std::to_string(values.cols()) + " columns");
  std::string out;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j) out += ',';
    out += header[j];
  }
  out += '\n';
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (j) out += ',';
      out += format_double(values(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_csv(const std::filesystem::path& path, std::span<const std::string> header, const Eigen::MatrixXd& values) {
  write_text(path, to_csv(header, values));
}

void write_text_csv(const std::filesystem::path& path, std::span<const std::string> header,
                    const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  auto line = [&](auto const& fields) {
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (j) out += ',';
      out += fields[j];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) {
    require(r.size() == header.size(), ErrorKind::shape_error, "CSV record length differs from header");
    line(r);
  }
  write_text(path, out);
}

CsvTable parse_csv(std::string_view text, std::string_view source) {
  CsvTable table;
  std::vector<double> data;
  std::size_t line_no = 0, pos = 0, n_rows = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      if (line_no == 1) parse_fail(source, 1, 1, "missing header row");
      continue;
    }
    std::size_t field_start = 0, field_no = 0;
    std::vector<std::string_view> fields;
    while (true) {
      const std::size_t comma = line.find(',', field_start);
      fields.push_back(line.substr(field_start, comma == std::string_view::npos ? std::string_view::npos : comma - field_start));
      if (comma == std::string_view::npos) break;
      field_start = comma + 1;
    }
    if (line_no == 1) {
      for (auto f : fields) {
        if (f.empty()) parse_fail(source, 1, 1, "empty column name in header");
        table.header.emplace_back(f);
      }
      continue;
    }
    if (fields.size() != table.header.size())
      parse_fail(source, line_no, 1,
                 "row " + std::to_string(n_rows + 1) + " has " + std::to_string(fields.size()) +
                     " fields, header has " + std::to_string(table.header.size()));
    std::size_t col = 1;
    for (auto f : fields) {
      ++field_no;
      double v = 0.0;
      const char* first = f.data();
      const char* last = f.data() + f.size();
      if (!f.empty() && *first == '+') ++first;
      const auto res = std::from_chars(first, last, v);
      if (f.empty() || res.ec != std::errc() || res.ptr != last)
        parse_fail(source, line_no, col,
                   "field " + std::to_string(field_no) + " ('" + std::string(f) + "') is not a number");
      data.push_back(v);
      col += f.size() + 1;
    }
    ++n_rows;
  }
  if (table.header.empty()) parse_fail(source, 1, 1, "missing header row");
  const auto cols = static_cast<Eigen::Index>(table.header.size());
  table.values = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      data.data(), static_cast<Eigen::Index>(n_rows), cols);
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  return parse_csv(read_text(path), path.string());
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  const std::size_t rest = bytes.size() - i;
  if (rest > 0) {
    std::uint32_t v = bytes[i] << 16;
    if (rest == 2) v |= bytes[i + 1] << 8;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += rest == 2 ? kAlphabet[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  require(text.size() % 4 == 0, ErrorKind::parse_error, "base64 payload length is not a multiple of 4");
  std::array<int, 256> lookup;
  lookup.fill(-1);
  for (std::size_t k = 0; k < kAlphabet.size(); ++k) lookup[static_cast<unsigned char>(kAlphabet[k])] = static_cast<int>(k);
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int pad = 0;
    std::uint32_t v = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      const char c = text[i + k];
      int d = 0;
      if (c == '=' && i + 4 == text.size() && k >= 2) {
        ++pad;
      } else {
        d = lookup[static_cast<unsigned char>(c)];
        if (d < 0 || pad > 0)
          fail(ErrorKind::parse_error, "invalid base64 character at offset " + std::to_string(i + k));
      }
      v = (v << 6) | static_cast<std::uint32_t>(d);
    }
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>(v >> 8));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(v));
  }
  return out;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(m.size()) * 8);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j, k += 8) {
      const std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(m(i, j)));
      std::memcpy(bytes.data() + k, &bits, 8);
    }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", base64_encode(bytes)}};
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  require(j.is_object() && j.contains("rows") && j.contains("cols") && j.contains("data"), ErrorKind::parse_error,
          "matrix payload needs rows, cols and data");
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  require(rows >= 0 && cols >= 0, ErrorKind::parse_error, "negative matrix size");
  const auto bytes = base64_decode(j.at("data").get<std::string>());
  require(bytes.size() == static_cast<std::size_t>(rows * cols) * 8, ErrorKind::parse_error,
          "matrix payload holds " + std::to_string(bytes.size()) + " bytes, expected " +
              std::to_string(rows * cols * 8));
  Eigen::MatrixXd m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index c = 0; c < cols; ++c, k += 8) {
      std::uint64_t bits;
      std::memcpy(&bits, bytes.data() + k, 8);
      m(i, c) = std::bit_cast<double>(to_little(bits));
    }
  return m;
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) { return matrix_to_json(v.transpose()); }

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  const Eigen::MatrixXd m = matrix_from_json(j);
  require(m.rows() == 1 || m.size() == 0, ErrorKind::parse_error, "vector payload must have one row");
  return m.transpose();
}

void check_schema_version(const nlohmann::json& j, std::string_view what) {
  require(j.is_object() && j.contains("schema_version"), ErrorKind::schema_mismatch,
          std::string(what) + ": no schema_version field");
  const auto& v = j.at("schema_version");
  require(v.is_number_integer() && v.get<int>() == kSchemaVersion, ErrorKind::schema_mismatch,
          std::string(what) + ": schema_version " + v.dump() + " does not match supported version " +
              std::to_string(kSchemaVersion));
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::io_error, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorKind::io_error, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  require(static_cast<bool>(out), ErrorKind::io_error, "write failed for " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text(path, j.dump(1) + "\n");
}

nlohmann::json read_json(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::parse_error, path.string() + ": " + e.what());
  }
}

}  // namespace uq::io
