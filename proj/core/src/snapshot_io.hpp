#pragma once

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

// Token helpers for the text snapshot format. Reals are written as
// hexadecimal floats so they round-trip exactly.
namespace lmcma::snapshot_io {

inline void put_real(std::ostream& os, double v) {
  char buffer[48];
  std::snprintf(buffer, sizeof buffer, " %a", v);
  os << buffer;
}

inline double get_real(std::istream& is) {
  std::string token;
  is >> token;
  if (!is) throw std::runtime_error("snapshot: truncated real");
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0') throw std::runtime_error("snapshot: malformed real '" + token + "'");
  return v;
}

inline void expect(std::istream& is, const char* key) {
  std::string token;
  is >> token;
  if (token != key) throw std::runtime_error(std::string("snapshot: expected '") + key + "', got '" + token + "'");
}

}  // namespace lmcma::snapshot_io
