#pragma once

#include <string>
#include <vector>

namespace kglab {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  bool operator==(const CsvTable&) const = default;
};

// Doubles are written with enough digits to round-trip exactly.
std::string format_double(double v);

std::string csv_to_string(const CsvTable& table);
CsvTable csv_from_string(const std::string& text);

void write_csv_file(const std::string& path, const CsvTable& table);
CsvTable read_csv_file(const std::string& path);

}  // namespace kglab
