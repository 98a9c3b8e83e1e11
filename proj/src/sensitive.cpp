#include "senstrace/sensitive.hpp"

#include <atomic>
#include <cmath>

#include "senstrace/errors.hpp"
#include "senstrace/real_text.hpp"

namespace senstrace::sens {

namespace {

SourceId fresh_probe_source() {
  static std::atomic<std::uint64_t> counter{0};
  return SourceId("__probe:" + std::to_string(counter.fetch_add(1)));
}

SensEnv senv_without(const SensEnv &s, const SourceId &source) {
  SensEnv out = s;
  out.set(source, ExtReal(0.0));
  return out;
}

SensEnv senv_pointwise_max(const SensEnv &a, const SensEnv &b) {
  SensEnv out = a;
  for (const auto &[source, sensitivity] : b) {
    if (sensitivity > out.get(source)) {
      out.set(source, sensitivity);
    }
  }
  return out;
}

SensEnv infinite_over(const SensEnv &a, const SensEnv &b) {
  SensEnv out;
  for (const auto &[source, sensitivity] : a) {
    out.set(source, ExtReal::infinity());
  }
  for (const auto &[source, sensitivity] : b) {
    out.set(source, ExtReal::infinity());
  }
  return out;
}

} // namespace

std::string to_string(const VecMetric &m) {
  switch (m.kind) {
  case VecMetric::Kind::LInf: return "LInf";
  case VecMetric::Kind::L1:
    return "L1(" + std::string(metric_name(m.inner)) + ")";
  case VecMetric::Kind::L2:
    return "L2(" + std::string(metric_name(m.inner)) + ")";
  }
  return "?";
}

std::string to_string(const SensScalar &s) {
  return "Sensitive(" + format_real(s.value()) + ", " + to_string(s.senv()) +
         ", " + std::string(metric_name(s.metric())) + ")";
}

SensScalar lift_scalar(double value, const SourceId &source, Metric metric) {
  return SensScalar(value, SensEnv::single(source, ExtReal(1.0)), metric);
}

SensScalar s_add(const SensScalar &a, const SensScalar &b) {
  return SensScalar(a.value() + b.value(), senv_add(a.senv(), b.senv()),
                    metric_join(a.metric(), b.metric()),
                    a.l2_derived() || b.l2_derived());
}

SensScalar s_add(const SensScalar &a, double c) {
  return SensScalar(a.value() + c, a.senv(), a.metric(), a.l2_derived());
}

SensScalar s_add(double c, const SensScalar &b) { return s_add(b, c); }

SensScalar s_mul(const SensScalar &a, const SensScalar &b) {
  const double product = a.value() * b.value();
  const bool l2 = a.l2_derived() || b.l2_derived();
  if (a.senv().is_zero()) {
    return SensScalar(product, senv_scale(ExtReal(std::abs(a.value())), b.senv()),
                      b.metric(), l2);
  }
  if (b.senv().is_zero()) {
    return SensScalar(product, senv_scale(ExtReal(std::abs(b.value())), a.senv()),
                      a.metric(), l2);
  }
  // Both sides sensitive: no finite bound exists.
  return SensScalar(product, infinite_over(a.senv(), b.senv()),
                    metric_join(a.metric(), b.metric()), l2);
}

SensScalar s_mul(const SensScalar &a, double c) {
  return SensScalar(a.value() * c, senv_scale(ExtReal(std::abs(c)), a.senv()),
                    a.metric(), a.l2_derived());
}

SensScalar s_mul(double c, const SensScalar &b) { return s_mul(b, c); }

double guard_value(const SensScalar &s) {
  if (!s.senv().is_zero()) {
    throw Error(ErrorKind::SensitiveGuard,
                "branching on a value with sensitivity " + to_string(s.senv()));
  }
  return s.value();
}

SensVector lift_vector(std::vector<double> values, const SourceId &source) {
  return SensVector{std::move(values), SensEnv::single(source, ExtReal(1.0)),
                    VecMetric::linf(), std::nullopt};
}

namespace {

SensVector clip(const SensVector &v, double bound, VecMetric::Kind kind) {
  if (!(bound > 0)) {
    throw Error(ErrorKind::NonPositiveBound,
                "clip bound must be > 0, got " + format_real(bound));
  }
  const VecMetric target{kind, Metric::Diff};
  if (v.metric.kind != VecMetric::Kind::LInf && v.metric != target) {
    throw Error(ErrorKind::MetricIncompatible,
                "clip expects an LInf or " + to_string(target) +
                    " vector, got " + to_string(v.metric));
  }

  double norm = 0;
  for (double x : v.values) {
    norm += kind == VecMetric::Kind::L2 ? x * x : std::abs(x);
  }
  if (kind == VecMetric::Kind::L2) {
    norm = std::sqrt(norm);
  }

  SensVector out = v;
  if (norm > bound) {
    const double scale = bound / norm;
    for (double &x : out.values) {
      x *= scale;
    }
  }
  out.metric = target;
  out.clip_bound = bound;
  return out;
}

} // namespace

SensVector clip_l2(const SensVector &v, double bound) {
  return clip(v, bound, VecMetric::Kind::L2);
}

SensVector clip_l1(const SensVector &v, double bound) {
  return clip(v, bound, VecMetric::Kind::L1);
}

ProbeMeasurement measure_scaling(const ScalarFn &f, double sample_value) {
  const SourceId probe = fresh_probe_source();
  SensScalar out =
      f(SensScalar(sample_value, SensEnv::single(probe, ExtReal(1.0)),
                   Metric::Diff));
  ProbeMeasurement m;
  m.scale = out.senv().get(probe);
  m.extras = senv_without(out.senv(), probe);
  return m;
}

SensVector s_map(const ScalarFn &f, const SensVector &v) {
  if (v.metric.kind != VecMetric::Kind::LInf) {
    throw Error(ErrorKind::MetricIncompatible,
                "map expects an LInf vector, got " + to_string(v.metric));
  }

  const SourceId probe = fresh_probe_source();
  const SensEnv probe_env = SensEnv::single(probe, ExtReal(1.0));

  ExtReal scale(0.0);
  SensEnv extras;
  std::vector<double> mapped;
  mapped.reserve(v.values.size());

  auto probe_one = [&](double x) {
    SensScalar out = f(SensScalar(x, probe_env, Metric::Diff));
    ExtReal k = out.senv().get(probe);
    SensEnv others = senv_without(out.senv(), probe);
    if (k.is_zero() && !others.is_zero()) {
      // The function dropped its argument and returned foreign sensitive
      // data; no per-element scaling factor describes that.
      throw Error(ErrorKind::ProbeEscape,
                  "mapped function ignores its argument but returns data "
                  "sensitive in " +
                      to_string(others));
    }
    if (k > scale) {
      scale = k;
    }
    extras = senv_pointwise_max(extras, others);
    return out.value();
  };

  if (v.values.empty()) {
    probe_one(0.0); // still measure, so the output tag is well defined
  } else {
    for (double x : v.values) {
      mapped.push_back(probe_one(x));
    }
  }

  return SensVector{std::move(mapped),
                    senv_add(senv_scale(scale, v.senv), extras),
                    VecMetric::linf(), std::nullopt};
}

SensScalar vec_sum(const SensVector &v) {
  if (v.metric.kind == VecMetric::Kind::LInf) {
    throw Error(ErrorKind::UnboundedSum,
                "sum of an LInf vector has no finite sensitivity; clip first");
  }
  if (v.metric.inner != Metric::Diff) {
    throw Error(ErrorKind::MetricIncompatible,
                "sum expects a clipped vector over diff, got " +
                    to_string(v.metric));
  }
  if (!v.clip_bound) {
    throw Error(ErrorKind::UnboundedSum,
                "vector carries no recorded clip bound");
  }
  double total = 0;
  for (double x : v.values) {
    total += x;
  }
  const bool from_l2 = v.metric.kind == VecMetric::Kind::L2;
  return SensScalar(total, senv_scale(ExtReal(*v.clip_bound), v.senv),
                    Metric::Diff, from_l2);
}

} // namespace senstrace::sens
