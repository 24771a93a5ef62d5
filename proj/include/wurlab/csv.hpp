#pragma once

#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wurlab {

// All CSV numbers are written with 9 significant digits. Parsing the emitted
// text and re-formatting it reproduces the same bytes, which is what the
// round-trip and determinism guarantees are stated against.
inline std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

inline double parse_csv_number(std::string_view text, const char* what) {
  const std::string owned(text);
  char* end = nullptr;
  const double value = std::strtod(owned.c_str(), &end);
  if (end == owned.c_str() || *end != '\0') {
    throw std::invalid_argument(std::string("bad numeric field for ") + what + ": '" + owned + "'");
  }
  return value;
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      break;
    }
    fields.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

}  // namespace wurlab
