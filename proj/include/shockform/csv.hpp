#pragma once

// Deterministic CSV output: fixed header, numbers with 17 significant
// digits so that values round-trip exactly.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <variant>
#include <vector>

namespace shockform {

using CsvCell = std::variant<double, std::int64_t, std::string>;

std::string format_double(double v);

class CsvWriter {
 public:
  /// Creates parent directories; throws std::runtime_error on I/O failure.
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);

  void row(const std::vector<CsvCell>& cells);
  void row(std::initializer_list<CsvCell> cells) { row(std::vector<CsvCell>(cells)); }

  std::size_t rows() const { return rows_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_ = 0;
  std::size_t rows_ = 0;
};

/// Header row of a CSV file (for schema checks).
std::vector<std::string> read_csv_header(const std::filesystem::path& path);

}  // namespace shockform
