#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace riskrates::csv {

struct Row {
  std::size_t line = 0;  // 1-based line in the file
  std::vector<std::string> cells;
};

struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;

  /// Index of a header name; throws SchemaError if absent.
  std::size_t column(std::string_view name) const;
};

/// Comma-separated, first row is the header, no quoting. Blank lines are
/// skipped. Throws IoError if the file cannot be read.
Table read(const std::filesystem::path& path);

/// Strict decimal parse of a finite real. Throws ParseError mentioning `line`.
double parse_real(std::string_view cell, std::size_t line);

}  // namespace riskrates::csv
