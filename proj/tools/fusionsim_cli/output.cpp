#include "output.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace cli {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

Table::Table(std::string kind, int version, std::vector<std::string> columns)
    : kind_(std::move(kind)), version_(version), columns_(std::move(columns)) {}

void Table::add_row(std::vector<nlohmann::json> cells) {
  if (cells.size() != columns_.size()) throw std::logic_error("row width does not match the header");
  rows_.push_back(std::move(cells));
}

namespace {

std::string cell_text(const nlohmann::json& cell) {
  if (cell.is_number_float()) return format_double(cell.get<double>());
  if (cell.is_string()) return cell.get<std::string>();
  return cell.dump();
}

}  // namespace

std::string Table::to_csv() const {
  std::string out = "# fusionsim " + kind_ + " v" + std::to_string(version_) + "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) out += (i ? "," : "") + columns_[i];
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
    out += '\n';
  }
  return out;
}

nlohmann::json Table::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : rows_) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[columns_[i]] = row[i];
    rows.push_back(std::move(obj));
  }
  return {{"kind", kind_}, {"version", version_}, {"columns", columns_}, {"rows", std::move(rows)}};
}

void Table::write(const std::filesystem::path& stem, Format format) const {
  if (format == Format::kCsv) {
    auto path = stem;
    write_text(path.replace_extension(".csv"), to_csv());
  } else {
    auto path = stem;
    write_json(path.replace_extension(".json"), to_json());
  }
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& value) {
  write_text(path, value.dump(2) + "\n");
}

}  // namespace cli
