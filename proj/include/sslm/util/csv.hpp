#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace sslm {

// Minimal RFC-4180-style CSV support. Quoted fields may contain commas,
// doubled quotes and newlines; everything is kept as strings.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;        // -1 when absent
  int require_column(const std::string& name) const;  // throws DataError
};

CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);

std::string csv_escape(const std::string& field);

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  void write_row(const std::vector<std::string>& fields);
  void close();

 private:
  std::ofstream out_;
};

// Shortest-round-trip formatting; byte-stable across runs.
std::string format_double(double x);

std::string format_fixed(double x, int digits);

}  // namespace sslm
