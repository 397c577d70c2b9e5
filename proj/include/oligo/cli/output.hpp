#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace oligo::cli {

// NaN doubles are written as empty CSV cells and JSON nulls.
using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::size_t column(const std::string& name) const;  // throws std::out_of_range
  double number(std::size_t row, const std::string& name) const;
};

// Shortest representation that reads back to the same double.
std::string format_double(double x);
std::string csv_escape(const std::string& s);

// RFC 4180: header row, CRLF line ends, quotes only where needed.
void write_csv(std::ostream& out, const Table& t);
nlohmann::ordered_json table_to_json(const Table& t, const std::string& schema);

// Writes to `path`, or to stdout when path is empty or "-".
void write_text(const std::string& path, const std::string& text);

}  // namespace oligo::cli
