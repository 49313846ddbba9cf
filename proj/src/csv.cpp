#include "ramcast/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace ramcast {

std::string format_number(double value) { return fmt::format("{}", value); }
std::string format_number(long long value) { return fmt::format("{}", value); }
std::string format_number(int value) { return fmt::format("{}", value); }
std::string format_number(unsigned long long value) { return fmt::format("{}", value); }

double parse_number(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument(fmt::format("cannot parse '{}' as a number", text));
  }
  return value;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw std::invalid_argument("CSV header must not be empty");
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) {
    throw std::invalid_argument(
        fmt::format("CSV row has {} fields, header has {}", row.size(), header_.size()));
  }
  for (const auto& field : row) {
    if (field.find_first_of(",\n\r") != std::string::npos) {
      throw std::invalid_argument(fmt::format("CSV field '{}' contains a separator", field));
    }
  }
  rows_.push_back(std::move(row));
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t c = 0; c < header_.size(); ++c) {
    if (header_[c] == name) return c;
  }
  throw std::out_of_range(fmt::format("no CSV column '{}'", name));
}

const std::string& CsvTable::cell(std::size_t row, std::string_view name) const {
  return rows_.at(row).at(column(name));
}

double CsvTable::number(std::size_t row, std::string_view name) const {
  return parse_number(cell(row, name));
}

std::string CsvTable::str() const {
  std::string out;
  auto append_line = [&out](const std::vector<std::string>& fields) {
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (c > 0) out += ',';
      out += fields[c];
    }
    out += '\n';
  };
  append_line(header_);
  for (const auto& row : rows_) append_line(row);
  return out;
}

void CsvTable::write(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  out << str();
  if (!out) throw std::runtime_error(fmt::format("error writing {}", path.string()));
}

CsvTable CsvTable::parse(std::string_view text) {
  std::vector<std::vector<std::string>> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields.emplace_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    lines.push_back(std::move(fields));
  }
  if (lines.empty()) throw std::invalid_argument("CSV has no header");
  CsvTable table(std::move(lines.front()));
  for (std::size_t r = 1; r < lines.size(); ++r) table.add_row(std::move(lines[r]));
  return table;
}

CsvTable CsvTable::read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot read {}", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

}  // namespace ramcast
