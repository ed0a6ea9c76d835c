#pragma once

#include <cstdio>
#include <string>

namespace benthos {

// 17 significant digits: enough to round-trip any double exactly.
inline std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Quote a CSV field only when it needs quoting (comma, quote, newline).
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace benthos
