#include "senstrace/mechanisms.hpp"

#include <cmath>
#include <exception>
#include <stdexcept>

#include "senstrace/real_text.hpp"

namespace senstrace::priv {

namespace {

std::vector<SourceId> sources_of(const SensEnv &senv) {
  std::vector<SourceId> out;
  for (const auto &[source, sensitivity] : senv) {
    out.push_back(source);
  }
  return out;
}

// L1 compatibility: additive noise scaled to an absolute-difference bound.
// Values whose sensitivity came through an L2 norm bound only satisfy the
// Gaussian rule.
void require_metric(const sens::SensScalar &x, bool allow_l2,
                    const char *mechanism) {
  if (x.metric() == Metric::Disc || x.metric() == Metric::Top) {
    throw Error(ErrorKind::MetricIncompatible,
                std::string(mechanism) + " requires the diff metric, got " +
                    std::string(metric_name(x.metric())));
  }
  if (x.l2_derived() && !allow_l2) {
    throw Error(ErrorKind::MetricIncompatible,
                std::string(mechanism) +
                    " cannot be used with an L2-derived sensitivity");
  }
}

double finite_sensitivity(const SensEnv &senv, const char *mechanism) {
  const ExtReal max = senv.max_sensitivity();
  if (max.is_infinite()) {
    throw Error(ErrorKind::InfiniteSensitivity,
                std::string(mechanism) +
                    " applied to an infinitely sensitive value " +
                    to_string(senv));
  }
  return max.value();
}

} // namespace

double laplace_scale(double sensitivity, double eps) {
  return sensitivity / eps;
}

double gauss_sigma(double sensitivity, double eps, double delta) {
  return sensitivity * std::sqrt(2.0 * std::log(1.25 / delta)) / eps;
}

double renyi_gauss_sigma(double sensitivity, double alpha, double eps) {
  return sensitivity * std::sqrt(alpha / (2.0 * eps));
}

double laplace(AccountantScope &scope, const sens::SensScalar &x, double eps) {
  if (!(eps > 0)) {
    throw std::invalid_argument("laplace: eps must be > 0");
  }
  require_metric(x, /*allow_l2=*/false, "laplace");
  const double sensitivity = finite_sensitivity(x.senv(), "laplace");
  scope.charge(Charge::pure(eps, sources_of(x.senv())));
  return x.value() + scope.rng().laplace(laplace_scale(sensitivity, eps));
}

double gauss(AccountantScope &scope, const sens::SensScalar &x, double eps,
             double delta) {
  if (!(eps > 0)) {
    throw std::invalid_argument("gauss: eps must be > 0");
  }
  if (!(delta > 0 && delta < 1)) {
    throw Error(ErrorKind::DeltaOutOfRange,
                "gauss: delta must be in (0,1), got " + format_real(delta));
  }
  require_metric(x, /*allow_l2=*/true, "gauss");
  const double sensitivity = finite_sensitivity(x.senv(), "gauss");
  scope.charge(Charge::ed(eps, delta, sources_of(x.senv())));
  return x.value() + scope.rng().normal(gauss_sigma(sensitivity, eps, delta));
}

double renyi_gauss(AccountantScope &scope, const sens::SensScalar &x,
                   double alpha, double eps) {
  if (!(alpha > 1)) {
    throw std::invalid_argument("renyi_gauss: alpha must be > 1");
  }
  if (!(eps > 0)) {
    throw std::invalid_argument("renyi_gauss: eps must be > 0");
  }
  require_metric(x, /*allow_l2=*/true, "renyi_gauss");
  const double sensitivity = finite_sensitivity(x.senv(), "renyi_gauss");
  scope.charge(Charge::renyi(alpha, eps, sources_of(x.senv())));
  return x.value() +
         scope.rng().normal(renyi_gauss_sigma(sensitivity, alpha, eps));
}

std::vector<double> renyi_gauss_vec(AccountantScope &scope,
                                    const sens::SensVector &x, double alpha,
                                    double eps) {
  if (!(alpha > 1)) {
    throw std::invalid_argument("renyi_gauss_vec: alpha must be > 1");
  }
  if (!(eps > 0)) {
    throw std::invalid_argument("renyi_gauss_vec: eps must be > 0");
  }
  if (x.metric.kind == sens::VecMetric::Kind::LInf ||
      x.metric.inner != Metric::Diff || !x.clip_bound) {
    throw Error(ErrorKind::MetricIncompatible,
                "renyi_gauss_vec requires a clipped vector, got " +
                    to_string(x.metric));
  }
  const ExtReal max = x.senv.max_sensitivity();
  if (max.is_infinite()) {
    throw Error(ErrorKind::InfiniteSensitivity,
                "renyi_gauss_vec applied to an infinitely sensitive vector");
  }
  const double sensitivity = *x.clip_bound * max.value();
  const double sigma = renyi_gauss_sigma(sensitivity, alpha, eps);
  scope.charge(Charge::renyi(alpha, eps, sources_of(x.senv)));
  std::vector<double> out = x.values;
  for (double &v : out) {
    v += scope.rng().normal(sigma);
  }
  return out;
}

std::size_t svt(AccountantScope &scope, const std::vector<Query> &queries,
                const sens::SensScalar &data, double threshold, double eps) {
  if (!(eps > 0)) {
    throw std::invalid_argument("svt: eps must be > 0");
  }
  constexpr double kTolerance = 1e-9;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const sens::ProbeMeasurement m =
        sens::measure_scaling(queries[i], data.value());
    if (m.scale > ExtReal(1.0 + kTolerance) || !m.extras.is_zero()) {
      throw Error(ErrorKind::QuerySensitivityViolation,
                  "query " + std::to_string(i) + " measures " +
                      to_string(m.scale) + "-sensitive with extras " +
                      to_string(m.extras));
    }
  }

  // One charge regardless of how many queries end up inspected.
  scope.charge(Charge::pure(eps, sources_of(data.senv())));

  const double noisy_threshold = threshold + scope.rng().laplace(2.0 / eps);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const double answer = queries[i](data).value();
    if (answer + scope.rng().laplace(4.0 / eps) >= noisy_threshold) {
      return i;
    }
  }
  throw Error(ErrorKind::NoQueryAboveThreshold,
              "no query among " + std::to_string(queries.size()) +
                  " cleared the threshold");
}

std::size_t exponential_index(AccountantScope &scope,
                              const std::vector<double> &scores,
                              const SensEnv &data_senv, double eps,
                              double sensitivity) {
  if (scores.empty()) {
    throw Error(ErrorKind::EmptyOptions, "no options to select from");
  }
  if (!(eps > 0)) {
    throw std::invalid_argument("exponential: eps must be > 0");
  }
  if (!(sensitivity > 0)) {
    throw std::invalid_argument("exponential: sensitivity must be > 0");
  }
  scope.charge(Charge::pure(eps, sources_of(data_senv)));

  double best = scores.front();
  for (double s : scores) {
    best = std::max(best, s);
  }
  std::vector<double> weights;
  weights.reserve(scores.size());
  double total = 0;
  for (double s : scores) {
    const double w = std::exp(eps * (s - best) / (2.0 * sensitivity));
    weights.push_back(w);
    total += w;
  }
  double u = scope.rng().uniform01() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    u -= weights[i];
    if (u < 0) {
      return i;
    }
  }
  return weights.size() - 1; // rounding fell off the end
}

RenyiVariantScope::RenyiVariantScope(AccountantScope &scope, double alpha,
                                     double delta)
    : scope_(scope), inner_(alpha), delta_(delta),
      uncaught_(std::uncaught_exceptions()) {
  if (!(delta > 0 && delta < 1)) {
    throw Error(ErrorKind::DeltaOutOfRange,
                "variant conversion delta must be in (0,1)");
  }
  AccountantScope::Accountants isolated;
  isolated.odometers.push_back(&inner_);
  saved_ = scope_.swap_accountants(std::move(isolated));
}

RenyiVariantScope::~RenyiVariantScope() noexcept(false) {
  scope_.swap_accountants(std::move(saved_));
  const bool unwinding = std::uncaught_exceptions() > uncaught_;
  for (const auto &[source, eps_r] : inner_.totals()) {
    const EdCost converted = renyi_to_ed(inner_.alpha(), eps_r, delta_);
    Charge charge = Charge::ed(converted.eps, converted.delta, {source});
    if (unwinding) {
      // Privacy was already spent inside the block; offer the conversion to
      // the enclosing accountants but let the original exception continue.
      try {
        scope_.charge(charge);
      } catch (const Error &) {
      }
    } else {
      scope_.charge(charge);
    }
  }
}

} // namespace senstrace::priv
