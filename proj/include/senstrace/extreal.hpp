#pragma once

#include <compare>
#include <limits>
#include <string>

namespace senstrace {

// Non-negative extended real: a finite value >= 0 or +infinity.
// Sensitivities and distance bounds live in this domain. The one non-IEEE
// convention is 0 * inf = 0, so that scaling by a non-sensitive zero
// annihilates sensitivity.
class ExtReal {
public:
  ExtReal() : v_(0.0) {}
  ExtReal(double v); // throws std::invalid_argument on negative or NaN

  static ExtReal infinity() {
    ExtReal q;
    q.v_ = std::numeric_limits<double>::infinity();
    return q;
  }

  bool is_finite() const { return v_ != std::numeric_limits<double>::infinity(); }
  bool is_infinite() const { return !is_finite(); }
  bool is_zero() const { return v_ == 0.0; }

  // +inf when infinite.
  double value() const { return v_; }

  friend ExtReal operator+(ExtReal a, ExtReal b);
  friend ExtReal operator*(ExtReal a, ExtReal b); // 0 * inf = 0
  friend bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
  friend auto operator<=>(ExtReal a, ExtReal b) { return a.v_ <=> b.v_; }

private:
  double v_;
};

// "inf" or the shortest decimal form of the finite value.
std::string to_string(ExtReal q);

// Truncation: 0 when the probe value is 0, otherwise the replacement bound.
// Defined by the semantics' metafunction table; no evaluation rule invokes
// it, but it is part of the core algebra surface.
ExtReal truncated(ExtReal probe, ExtReal bound);

} // namespace senstrace
