#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace jcd {

/// 17 significant digits, '.' decimal point, independent of locale.
std::string format_double(double v);

using Cell = std::variant<double, long long, std::string>;

/// Column-oriented record set written as CSV (header row, comma separator,
/// LF endings) or as a JSON array of objects.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
  void write_csv(std::ostream& out) const;
  void write_json(std::ostream& out) const;
};

}  // namespace jcd
