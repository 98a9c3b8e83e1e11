#pragma once

#include <functional>
#include <vector>

#include "senstrace/accountant.hpp"
#include "senstrace/errors.hpp"
#include "senstrace/sensitive.hpp"

namespace senstrace::priv {

// Noise scales. The Gaussian calibration uses the analytic-style constant
// 1.25; the Renyi Gaussian uses the alpha/(2 sigma^2) divergence bound.
double laplace_scale(double sensitivity, double eps);
double gauss_sigma(double sensitivity, double eps, double delta);
double renyi_gauss_sigma(double sensitivity, double alpha, double eps);

// Basic mechanisms. Each one validates its metric compatibility, rejects
// infinite sensitivity, charges every source carried by the input to all
// active accountants, then returns a plain (post-processed) value.
double laplace(AccountantScope &scope, const sens::SensScalar &x, double eps);
double gauss(AccountantScope &scope, const sens::SensScalar &x, double eps,
             double delta);
double renyi_gauss(AccountantScope &scope, const sens::SensScalar &x,
                   double alpha, double eps);

// Per-coordinate Gaussian noise on a clipped vector at one Renyi charge for
// the whole vector; the noise is calibrated to the recorded clip bound.
std::vector<double> renyi_gauss_vec(AccountantScope &scope,
                                    const sens::SensVector &x, double alpha,
                                    double eps);

// Above-threshold sparse vector: returns the index of the first query whose
// noisy answer clears the noisy threshold, at a single charge of eps. Every
// query must measure at most 1-sensitive under the probe protocol.
using Query = std::function<sens::SensScalar(const sens::SensScalar &)>;
std::size_t svt(AccountantScope &scope, const std::vector<Query> &queries,
                const sens::SensScalar &data, double threshold, double eps);

// Exponential mechanism over an explicit option list; non-template core.
std::size_t exponential_index(AccountantScope &scope,
                              const std::vector<double> &scores,
                              const SensEnv &data_senv, double eps,
                              double sensitivity);

template <typename Option>
Option exponential(AccountantScope &scope, const std::vector<Option> &options,
                   const std::function<double(double, const Option &)> &score,
                   const sens::SensScalar &data, double eps,
                   double sensitivity) {
  if (options.empty()) {
    throw Error(ErrorKind::EmptyOptions, "no options to select from");
  }
  std::vector<double> scores;
  scores.reserve(options.size());
  for (const Option &option : options) {
    scores.push_back(score(data.value(), option));
  }
  return options[exponential_index(scope, scores, data.senv(), eps,
                                   sensitivity)];
}

// Runs the body under a fresh Renyi odometer at the given order, isolated
// from the enclosing accountants; at exit the accumulated Renyi cost is
// converted through renyi_to_ed and charged to the enclosing scope as an
// (eps, delta) cost. If the body throws, the partial cost is still converted
// and offered to the enclosing accountants before the exception continues.
class RenyiVariantScope {
public:
  RenyiVariantScope(AccountantScope &scope, double alpha, double delta);
  ~RenyiVariantScope() noexcept(false);

  RenyiVariantScope(const RenyiVariantScope &) = delete;
  RenyiVariantScope &operator=(const RenyiVariantScope &) = delete;

  const RenyiOdometer &inner() const { return inner_; }

private:
  AccountantScope &scope_;
  RenyiOdometer inner_;
  double delta_;
  AccountantScope::Accountants saved_;
  int uncaught_;
};

template <typename F>
auto renyi_scope(AccountantScope &scope, double alpha, double delta, F &&body) {
  RenyiVariantScope variant(scope, alpha, delta);
  return body();
}

} // namespace senstrace::priv
