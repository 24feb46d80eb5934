#pragma once

#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace precs::csv {

/// 17 significant digits, enough to round-trip any double.
inline std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void header(std::ostream& out, std::initializer_list<std::string_view> cols) {
  bool first = true;
  for (auto c : cols) {
    if (!first) out << ',';
    out << c;
    first = false;
  }
  out << '\n';
}

template <class Range>
void row(std::ostream& out, const Range& values) {
  bool first = true;
  for (double v : values) {
    if (!first) out << ',';
    out << number(v);
    first = false;
  }
  out << '\n';
}

}  // namespace precs::csv
