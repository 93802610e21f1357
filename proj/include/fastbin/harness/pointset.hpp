#pragma once

// Plain-text datasets: one vector per line, entries separated by commas
// and/or whitespace. Blank lines and lines starting with '#' are skipped.

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fastbin/core/types.hpp"

namespace fastbin {

inline PointSet parse_pointset(std::istream& in, bool normalize) {
  std::vector<RealVector> rows;
  std::string line;
  std::size_t lineno = 0;
  std::size_t dim = 0;
  std::vector<std::size_t> source_line;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    RealVector row;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
      while (p < end && (*p == ',' || *p == ' ' || *p == '\t' || *p == '\r')) ++p;
      if (p == end) break;
      // from_chars rejects a leading '+'.
      if (*p == '+') ++p;
      double v = 0.0;
      const auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc{} || (next < end && *next != ',' && *next != ' ' && *next != '\t' && *next != '\r')) {
        throw ParseError(lineno, "not a number: '" + line.substr(static_cast<std::size_t>(p - line.data()), 16) + "'");
      }
      if (!std::isfinite(v)) throw ParseError(lineno, "non-finite entry");
      row.push_back(v);
      p = next;
    }
    if (row.empty()) throw ParseError(lineno, "no entries");
    if (rows.empty()) {
      dim = row.size();
    } else if (row.size() != dim) {
      throw ParseError(lineno, "expected " + std::to_string(dim) + " columns, found " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
    source_line.push_back(lineno);
  }
  if (rows.empty()) throw ParseError(lineno, "no data rows");
  PointSet ps = PointSet::from_rows(rows);
  if (normalize) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (norm2(rows[i]) == 0.0) throw ParseError(source_line[i], "zero row cannot be normalized");
    }
    ps.normalize();
  }
  return ps;
}

inline PointSet load_pointset(const std::string& path, bool normalize) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_pointset(in, normalize);
}

}  // namespace fastbin
