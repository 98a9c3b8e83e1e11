#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "senstrace/metric.hpp"
#include "senstrace/senv.hpp"

namespace senstrace::sens {

// Distance metric for vector values: L1/L2 parameterized by an element
// metric, plus the LInf shorthand for L1 over the absolute-difference base.
struct VecMetric {
  enum class Kind { L1, L2, LInf };

  Kind kind = Kind::LInf;
  Metric inner = Metric::Diff;

  static VecMetric l1(Metric inner = Metric::Diff) {
    return VecMetric{Kind::L1, inner};
  }
  static VecMetric l2(Metric inner = Metric::Diff) {
    return VecMetric{Kind::L2, inner};
  }
  static VecMetric linf() { return VecMetric{Kind::LInf, Metric::Diff}; }

  friend bool operator==(const VecMetric &a, const VecMetric &b) = default;
};

std::string to_string(const VecMetric &m);

// A scalar the analyst may compute with but whose provenance is tracked.
// `l2_derived` marks values whose sensitivity was calibrated through an L2
// norm bound; such values satisfy only the Gaussian mechanism's
// compatibility rule, not the Laplace one.
class SensScalar {
public:
  SensScalar(double value, SensEnv senv, Metric metric,
             bool l2_derived = false)
      : value_(value), senv_(std::move(senv)), metric_(metric),
        l2_derived_(l2_derived) {}

  double value() const { return value_; }
  const SensEnv &senv() const { return senv_; }
  Metric metric() const { return metric_; }
  bool l2_derived() const { return l2_derived_; }

private:
  double value_;
  SensEnv senv_;
  Metric metric_;
  bool l2_derived_;
};

std::string to_string(const SensScalar &s);

// Wraps a raw value as 1-sensitive in the named source.
SensScalar lift_scalar(double value, const SourceId &source,
                       Metric metric = Metric::Diff);

SensScalar s_add(const SensScalar &a, const SensScalar &b);
SensScalar s_add(const SensScalar &a, double c); // constants change nothing
SensScalar s_add(double c, const SensScalar &b);

// Multiplication: with a non-sensitive side, scales the other side's senv by
// the magnitude of that operand; with two sensitive sides, every involved
// source becomes infinitely sensitive.
SensScalar s_mul(const SensScalar &a, const SensScalar &b);
SensScalar s_mul(const SensScalar &a, double c);
SensScalar s_mul(double c, const SensScalar &b);

inline SensScalar operator+(const SensScalar &a, const SensScalar &b) {
  return s_add(a, b);
}
inline SensScalar operator+(const SensScalar &a, double c) {
  return s_add(a, c);
}
inline SensScalar operator+(double c, const SensScalar &b) {
  return s_add(c, b);
}
inline SensScalar operator*(const SensScalar &a, const SensScalar &b) {
  return s_mul(a, b);
}
inline SensScalar operator*(const SensScalar &a, double c) {
  return s_mul(a, c);
}
inline SensScalar operator*(double c, const SensScalar &b) {
  return s_mul(c, b);
}

// Host-level branching discipline: returns the raw value only when it
// carries no sensitivity; otherwise reports SensitiveGuard. Host code that
// needs to branch on a wrapped value must go through this.
double guard_value(const SensScalar &s);

// A vector of reals with one sensitivity tag for the whole container.
// clip_bound records the norm radius established by the last clip so that
// summation can calibrate.
struct SensVector {
  std::vector<double> values;
  SensEnv senv;
  VecMetric metric = VecMetric::linf();
  std::optional<double> clip_bound;
};

SensVector lift_vector(std::vector<double> values, const SourceId &source);

// Rescales into the norm ball of the given radius (leaves shorter vectors
// untouched) and switches the vector's metric to the clip's norm.
SensVector clip_l2(const SensVector &v, double bound);
SensVector clip_l1(const SensVector &v, double bound);

using ScalarFn = std::function<SensScalar(const SensScalar &)>;

// Result of probing a host function with a fresh 1-sensitive source:
// `scale` is the coefficient the probe picked up in the output, `extras` any
// other sensitive sources the function smuggled into its result.
struct ProbeMeasurement {
  ExtReal scale{0.0};
  SensEnv extras;
};

ProbeMeasurement measure_scaling(const ScalarFn &f, double sample_value);

// Elementwise map. The function's scaling factor is measured through the
// probe protocol; the output senv is that factor times the input senv plus
// any foreign sources the function's outputs carried.
SensVector s_map(const ScalarFn &f, const SensVector &v);

// Sum of a clipped vector. The senv is calibrated by the recorded clip
// bound; L2-clipped inputs yield a scalar usable only by Gaussian noise.
SensScalar vec_sum(const SensVector &v);

} // namespace senstrace::sens
