#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace plap {

using Cell = std::variant<double, std::int64_t, std::string>;

/// Rectangular table: one header row, then rows of equal width.
struct Table {
  std::vector<std::string> headers;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

/// Shortest decimal form that parses back to the same double, "nan", "inf" or "-inf".
std::string format_double(double v);

/// Comma-separated text with LF line endings. Strings containing a comma,
/// quote or newline are quoted.
std::string format_csv(const Table& table);

/// Writes format_csv(table) to path. Throws std::runtime_error when the file
/// cannot be written.
void emit_csv(const Table& table, const std::filesystem::path& path);

}  // namespace plap
