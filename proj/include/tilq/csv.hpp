#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tilq {

// Column-oriented numeric table. NaN cells serialize as empty fields
// (curves of different lengths share one table). Values are written with
// 17 significant digits so re-parsing reproduces each double exactly.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;  // equal lengths

  std::size_t n_rows() const { return columns.empty() ? 0 : columns.front().size(); }
  void validate() const;
};

std::string format_double(double x);  // %.17g
void write_csv(std::ostream& out, const CsvTable& table);
void write_csv_file(const std::string& path, const CsvTable& table);
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

}  // namespace tilq
