#include "senstrace/extreal.hpp"

#include <cmath>
#include <stdexcept>

#include "senstrace/real_text.hpp"

namespace senstrace {

ExtReal::ExtReal(double v) : v_(v) {
  if (std::isnan(v) || v < 0.0) {
    throw std::invalid_argument("extended real must be >= 0, got " +
                                std::to_string(v));
  }
}

ExtReal operator+(ExtReal a, ExtReal b) {
  ExtReal q;
  q.v_ = a.v_ + b.v_; // inf absorbs
  return q;
}

ExtReal operator*(ExtReal a, ExtReal b) {
  ExtReal q;
  if (a.v_ == 0.0 || b.v_ == 0.0) {
    q.v_ = 0.0; // 0 * inf = 0
  } else {
    q.v_ = a.v_ * b.v_;
  }
  return q;
}

std::string to_string(ExtReal q) {
  return q.is_infinite() ? "inf" : format_real(q.value());
}

ExtReal truncated(ExtReal probe, ExtReal bound) {
  return probe.is_zero() ? ExtReal(0.0) : bound;
}

} // namespace senstrace
