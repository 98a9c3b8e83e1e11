#include "senstrace/gd_demo.hpp"

#include <cmath>

#include "senstrace/mechanisms.hpp"

namespace senstrace::harness {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double dot(const std::vector<double> &a, const std::vector<double> &b) {
  double out = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out += a[i] * b[i];
  }
  return out;
}

double accuracy(const std::vector<double> &theta, const GdDataset &data) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.features.size(); ++i) {
    const int predicted = sigmoid(dot(theta, data.features[i])) >= 0.5 ? 1 : 0;
    if (predicted == data.labels[i]) {
      ++correct;
    }
  }
  return static_cast<double>(correct) /
         static_cast<double>(data.features.size());
}

// Sum of per-example logistic gradients, each clipped into the L2 ball of
// the given radius. One example's change moves this sum by at most
// 2 * clip_bound in L2; the vector tag records the bound for calibration.
sens::SensVector clipped_gradient_sum(const std::vector<double> &theta,
                                      const GdDataset &data, double clip_bound,
                                      const SourceId &source) {
  const std::size_t dim = theta.size();
  std::vector<double> total(dim, 0.0);
  for (std::size_t i = 0; i < data.features.size(); ++i) {
    const double err =
        sigmoid(dot(theta, data.features[i])) - data.labels[i];
    std::vector<double> gradient(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      gradient[j] = err * data.features[i][j];
    }
    sens::SensVector clipped =
        sens::clip_l2(sens::lift_vector(std::move(gradient), source),
                      clip_bound);
    for (std::size_t j = 0; j < dim; ++j) {
      total[j] += clipped.values[j];
    }
  }
  return sens::SensVector{std::move(total),
                          SensEnv::single(source, ExtReal(1.0)),
                          sens::VecMetric::l2(), clip_bound};
}

} // namespace

GdDataset make_synthetic_blobs(std::size_t n, std::uint64_t seed) {
  priv::Rng rng(seed);
  GdDataset data;
  data.features.reserve(n);
  data.labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int label = i % 2;
    const double cx = label == 0 ? -2.0 : 2.0;
    const double cy = label == 0 ? -2.0 : 2.0;
    data.features.push_back(
        {cx + rng.normal(1.0), cy + rng.normal(1.0), 1.0});
    data.labels.push_back(label);
  }
  return data;
}

GdDemoResult dp_gradient_descent_demo(const GdDataset &data,
                                      const GdDemoConfig &config) {
  if (!(config.alpha > 1)) {
    throw std::invalid_argument("renyi order must be > 1");
  }
  if (!(config.eps_budget > 0)) {
    throw std::invalid_argument("budget must be > 0");
  }

  const SourceId source(data.source_name);
  const std::size_t n = data.features.size();
  const std::size_t dim = data.features.empty() ? 0 : data.features[0].size();

  priv::AccountantScope scope(config.seed);
  priv::RenyiFilter filter(config.alpha, config.eps_budget);
  priv::RenyiOdometer odometer(config.alpha);
  priv::AccountantScope::FilterGuard filter_guard(scope, filter);
  priv::AccountantScope::OdometerGuard odometer_guard(scope, odometer);

  GdDemoResult result;

  const sens::SensScalar count(static_cast<double>(n),
                               SensEnv::single(source, ExtReal(1.0)),
                               Metric::Diff);
  double noisy_count =
      priv::renyi_gauss(scope, count, config.alpha, config.eps_aux());
  ++result.aux_queries;
  noisy_count = std::max(noisy_count, 1.0);

  // Each example contributes 1/n to the accuracy fraction.
  const SensEnv accuracy_senv =
      SensEnv::single(source, ExtReal(1.0 / static_cast<double>(n)));

  std::vector<double> theta(dim, 0.0);
  double previous_accuracy = 0.0;
  double accuracy_change = 1.0;

  while (accuracy_change > config.plateau &&
         result.iterations < config.max_iters) {
    sens::SensVector grad_sum =
        clipped_gradient_sum(theta, data, config.clip_bound, source);
    const std::vector<double> noisy_grad =
        priv::renyi_gauss_vec(scope, grad_sum, config.alpha, config.eps_iter);
    for (std::size_t j = 0; j < dim; ++j) {
      theta[j] -= noisy_grad[j] / noisy_count;
    }
    ++result.iterations;

    const sens::SensScalar acc(accuracy(theta, data), accuracy_senv,
                               Metric::Diff);
    const double current =
        priv::renyi_gauss(scope, acc, config.alpha, config.eps_aux());
    ++result.aux_queries;
    accuracy_change = std::abs(current - previous_accuracy);
    previous_accuracy = current;
  }

  const sens::SensScalar final_acc(accuracy(theta, data), accuracy_senv,
                                   Metric::Diff);
  result.noisy_accuracy =
      priv::renyi_gauss(scope, final_acc, config.alpha, config.eps_aux());
  ++result.aux_queries;

  result.theta = std::move(theta);
  result.renyi_total = odometer.total(source);
  result.odometer_json = odometer.to_json();
  return result;
}

} // namespace senstrace::harness
