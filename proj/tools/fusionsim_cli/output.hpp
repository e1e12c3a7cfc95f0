#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace cli {

enum class Format { kCsv, kJson };

/// Shortest representation that parses back to the same double.
std::string format_double(double value);

/// Column-oriented table written as versioned CSV or as a JSON array of rows.
class Table {
 public:
  Table(std::string kind, int version, std::vector<std::string> columns);

  void add_row(std::vector<nlohmann::json> cells);
  std::string to_csv() const;
  nlohmann::json to_json() const;
  void write(const std::filesystem::path& stem, Format format) const;

 private:
  std::string kind_;
  int version_;
  std::vector<std::string> columns_;
  std::vector<std::vector<nlohmann::json>> rows_;
};

void write_text(const std::filesystem::path& path, std::string_view text);
void write_json(const std::filesystem::path& path, const nlohmann::json& value);

}  // namespace cli
