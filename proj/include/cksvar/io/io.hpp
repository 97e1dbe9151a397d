// File-level utilities shared by ingestion and the CLI: CSV reading with a
// header row, deterministic dataset serialization, and content hashing for
// provenance manifests.
#pragma once
#include <cstdint>
#include <fstream>
#include <sstream>

#include "cksvar/core/types.hpp"

namespace cksvar {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

// FNV-1a, hex-encoded; stable fingerprint for input provenance.
inline std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline CsvTable parse_csv(const std::string& content) {
  CsvTable t;
  std::istringstream in(content);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.push_back("");
    if (first) {
      t.header = cells;
      first = false;
    } else {
      if (cells.size() != t.header.size())
        throw std::runtime_error("csv: ragged row '" + line + "'");
      t.rows.push_back(cells);
    }
  }
  if (first) throw std::runtime_error("csv: empty file");
  return t;
}

inline CsvTable read_csv(const std::string& path) {
  return parse_csv(read_file(path));
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Deterministic CSV serialization: date, observed columns, exogenous
// columns, bound. Writing the same Dataset twice is byte-identical.
inline std::string dataset_to_csv(const Dataset& d) {
  std::ostringstream out;
  out << "date";
  for (const auto& n : d.names) out << "," << n;
  out << ",bound\n";
  for (int t = 0; t < d.T(); ++t) {
    out << (t < static_cast<int>(d.dates.size()) ? d.dates[t].str()
                                                 : std::to_string(t));
    for (int j = 0; j < d.k(); ++j) out << "," << format_double(d.values(t, j));
    for (int e = 0; e < d.m(); ++e) out << "," << format_double(d.exog(t, e));
    out << "," << format_double(d.bound[t]) << "\n";
  }
  return out.str();
}

}  // namespace cksvar
