#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

namespace lcsamp::detail {

/// Appends v with full round-trip precision.
inline void append_double(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

/// Parses one CSV line of doubles; returns false when a field is empty or
/// not a plain number.
inline bool parse_row(const std::string& line, std::vector<double>& row) {
  row.clear();
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) comma = line.size();
    std::string field = line.substr(pos, comma - pos);
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    while (!field.empty() && field.back() == ' ') field.pop_back();
    if (field.empty()) return false;
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0') return false;
    row.push_back(v);
    if (comma == line.size()) break;
    pos = comma + 1;
  }
  return !row.empty();
}

inline std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

/// True when some field parses as a number; used to tell a header line
/// (all labels) from a malformed data row.
inline bool any_numeric_field(const std::string& line) {
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) comma = line.size();
    std::string field = line.substr(pos, comma - pos);
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    while (!field.empty() && field.back() == ' ') field.pop_back();
    if (!field.empty()) {
      char* end = nullptr;
      (void)std::strtod(field.c_str(), &end);
      if (end != field.c_str() && *end == '\0') return true;
    }
    if (comma == line.size()) break;
    pos = comma + 1;
  }
  return false;
}

}  // namespace lcsamp::detail
