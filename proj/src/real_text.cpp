#include "senstrace/real_text.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace senstrace {

std::string format_real(double r) {
  if (std::isinf(r)) {
    return r > 0 ? "inf" : "-inf";
  }
  if (std::isnan(r)) {
    return "nan";
  }
  if (r == std::floor(r) && std::abs(r) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.0f", r);
    return buf;
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), r); // shortest round-trip
  return std::string(buf, res.ptr);
}

} // namespace senstrace
