#include "tilq/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tilq {

void CsvTable::validate() const {
  if (header.size() != columns.size())
    throw std::invalid_argument("csv: header/column count mismatch");
  for (const auto& c : columns)
    if (c.size() != n_rows()) throw std::invalid_argument("csv: ragged columns");
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_csv(std::ostream& out, const CsvTable& table) {
  table.validate();
  for (std::size_t c = 0; c < table.header.size(); ++c)
    out << (c ? "," : "") << table.header[c];
  out << '\n';
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out << ',';
      const double v = table.columns[c][r];
      if (!std::isnan(v)) out << format_double(v);
    }
    out << '\n';
  }
}

void write_csv_file(const std::string& path, const CsvTable& table) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("csv: cannot open " + path + " for writing");
  write_csv(f, table);
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) table.header.push_back(cell);
  table.columns.assign(table.header.size(), {});
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::size_t c = 0;
    while (c < table.columns.size() && std::getline(ls, cell, ',')) {
      table.columns[c].push_back(cell.empty() ? std::nan("") : std::strtod(cell.c_str(), nullptr));
      ++c;
    }
    for (; c < table.columns.size(); ++c) table.columns[c].push_back(std::nan(""));
  }
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("csv: cannot open " + path);
  return read_csv(f);
}

}  // namespace tilq
