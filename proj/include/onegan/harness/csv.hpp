#pragma once

#include <string>
#include <vector>

namespace onegan {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

// Shortest-round-trip decimal formatting used for every numeric cell.
std::string format_double(double v);
double parse_double(const std::string& cell);

CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const CsvTable& table);

}  // namespace onegan
