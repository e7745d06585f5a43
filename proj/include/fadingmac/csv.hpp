#ifndef FADINGMAC_CSV_HPP
#define FADINGMAC_CSV_HPP

#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace fadingmac::csv {

/// Round-trip representation: 17 significant digits.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::vector<std::string> split(std::string_view line, char sep = ',') {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
  return out;
}

}  // namespace fadingmac::csv

#endif  // FADINGMAC_CSV_HPP
