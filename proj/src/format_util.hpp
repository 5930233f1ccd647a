#pragma once

#include <cstdio>
#include <ostream>
#include <string>

namespace gpelab::detail {

// Shortest round-trip-exact decimal form; CSV output must be
// bitwise-reproducible across runs, so all floats go through here.
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void put_row(std::ostream& out, const double* vals, int count) {
  for (int i = 0; i < count; ++i) {
    if (i) out << ',';
    out << fmt_double(vals[i]);
  }
  out << '\n';
}

}  // namespace gpelab::detail
