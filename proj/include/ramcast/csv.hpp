#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ramcast {

// Shortest decimal text that parses back to the same double.
std::string format_number(double value);
std::string format_number(long long value);
std::string format_number(int value);
std::string format_number(unsigned long long value);

double parse_number(std::string_view text);

/// Comma-separated table with a mandatory header row, `.` decimal
/// separator and LF line endings. Fields are never quoted; a field holding a
/// comma or newline is rejected.
class CsvTable {
 public:
  CsvTable() = default;
  explicit CsvTable(std::vector<std::string> header);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  void add_row(std::vector<std::string> row);

  std::size_t column(std::string_view name) const;
  const std::string& cell(std::size_t row, std::string_view name) const;
  double number(std::size_t row, std::string_view name) const;

  std::string str() const;
  void write(const std::filesystem::path& path) const;

  static CsvTable parse(std::string_view text);
  static CsvTable read(const std::filesystem::path& path);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace ramcast
