#pragma once

// Minimal numeric CSV: header row, comma separator, '.' decimal, LF endings,
// 17 significant digits.

#include <iosfwd>
#include <string>
#include <vector>

#include "polaronlab/units.hpp"

namespace polaronlab::csv {

/// Malformed or inconsistent input file.
class CsvError : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

/// Shortest-safe round-trip text for a double (17 significant digits).
std::string format_double(double v);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column_index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
};

Table read(std::istream& is);

/// Column-major write; every column must have the same length.
void write(std::ostream& os, const std::vector<std::string>& header,
           const std::vector<std::vector<double>>& columns);

}  // namespace polaronlab::csv
