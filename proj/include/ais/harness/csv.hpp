#pragma once

// Minimal comma-separated tables: header row, no quoting, blank lines skipped.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ais::harness {

/// Malformed or missing input data. Messages carry "path:line:".
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CsvTable {
  std::filesystem::path source;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// 1-based file line of each row.
  std::vector<std::size_t> lines;

  std::optional<std::size_t> find_column(const std::string& name) const;
  std::size_t column(const std::string& name) const;

  [[noreturn]] void fail(std::size_t row, const std::string& message) const;
  double number(std::size_t row, std::size_t col) const;
  std::int64_t integer(std::size_t row, std::size_t col) const;
};

CsvTable read_csv(const std::filesystem::path& path);

std::vector<std::string> split_csv_line(const std::string& line);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

}  // namespace ais::harness
