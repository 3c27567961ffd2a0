#pragma once

// Rectangular result tables with a provenance header, rendered as CSV or
// JSON. Both renderings print values through the same %.12g tokens so they
// agree digit for digit.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <fisherop/core.hpp>

namespace fisherop {

// FNV-1a, 64 bit; used to fingerprint scenario inputs in output headers.
inline std::uint64_t fnv1a64(const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001b3ull;
  }
  return hash;
}

inline std::uint64_t fnv1a64(const std::string& text) { return fnv1a64(text.data(), text.size()); }

namespace detail {

inline std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

// %.12g output is a valid JSON number except for the non-finite spellings.
inline std::string json_number(double value) {
  if (!std::isfinite(value)) return "\"" + format_real(value) + "\"";
  return format_real(value);
}

inline std::string hex_hash(std::uint64_t hash) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace detail

struct Provenance {
  std::uint64_t scenario_hash = 0;
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;
};

struct ScanTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  Provenance provenance;

  explicit ScanTable(std::vector<std::string> names, Provenance origin = {})
      : columns(std::move(names)), provenance(std::move(origin)) {
    if (columns.empty()) throw std::invalid_argument("ScanTable: no columns");
  }

  void add_row(std::vector<double> row) {
    if (row.size() != columns.size())
      throw std::invalid_argument("ScanTable::add_row: expected " +
                                  std::to_string(columns.size()) + " values, got " +
                                  std::to_string(row.size()));
    rows.push_back(std::move(row));
  }

  std::string to_csv() const {
    std::string out;
    out += "# scenario_hash: " + detail::hex_hash(provenance.scenario_hash) + "\n";
    out += "# seed: " + std::to_string(provenance.seed) + "\n";
    out += "# tool_version: " + provenance.tool_version + "\n";
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ",";
      out += columns[c];
    }
    out += "\n";
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out += ",";
        out += detail::format_real(row[c]);
      }
      out += "\n";
    }
    return out;
  }

  std::string to_json() const {
    std::string out = "{\n  \"provenance\": {\n";
    out += "    \"scenario_hash\": \"" + detail::hex_hash(provenance.scenario_hash) + "\",\n";
    out += "    \"seed\": " + std::to_string(provenance.seed) + ",\n";
    out += "    \"tool_version\": \"" + provenance.tool_version + "\"\n  },\n";
    out += "  \"columns\": [";
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ", ";
      out += "\"" + columns[c] + "\"";
    }
    out += "],\n  \"rows\": [\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
      out += "    [";
      for (std::size_t c = 0; c < rows[r].size(); ++c) {
        if (c) out += ", ";
        out += detail::json_number(rows[r][c]);
      }
      out += r + 1 < rows.size() ? "],\n" : "]\n";
    }
    out += "  ]\n}\n";
    return out;
  }
};

}  // namespace fisherop
