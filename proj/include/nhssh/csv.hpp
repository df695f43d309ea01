#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace nhssh {

/// 17 significant digits: lossless round trip for IEEE doubles.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_int(long v) { return std::to_string(v); }

/// Writes one CSV row (no quoting needed: cells never contain commas).
inline void csv_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

/// Provenance header: one `# key = value` line per resolved config entry.
inline void csv_provenance(std::ostream& out,
                           const std::vector<std::pair<std::string, std::string>>& entries) {
  for (const auto& [key, value] : entries) out << "# " << key << " = " << value << '\n';
}

}  // namespace nhssh
