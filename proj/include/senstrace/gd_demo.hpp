#pragma once

#include <cstdint>
#include <vector>

#include "senstrace/json_io.hpp"

namespace senstrace::harness {

// Two-class points with a trailing bias feature, plus 0/1 labels.
struct GdDataset {
  std::vector<std::vector<double>> features;
  std::vector<int> labels;
  std::string source_name = "synthetic";
};

// Two linearly separable Gaussian blobs in the plane.
GdDataset make_synthetic_blobs(std::size_t n, std::uint64_t seed);

struct GdDemoConfig {
  double alpha = 10.0;      // Renyi order
  double eps_iter = 0.5;    // per-iteration gradient charge
  double eps_budget = 50.0; // Renyi filter budget
  std::uint64_t seed = 7;
  double clip_bound = 1.0;  // L2 radius for per-example gradients
  double plateau = 0.05;    // stop once noisy accuracy moves less than this
  std::size_t max_iters = 100;

  // Auxiliary queries (noisy count, noisy accuracy) each cost a quarter of
  // the gradient charge.
  double eps_aux() const { return eps_iter / 4.0; }
};

struct GdDemoResult {
  std::vector<double> theta;
  double noisy_accuracy = 0;
  std::size_t iterations = 0;  // gradient steps taken
  std::size_t aux_queries = 0; // count query + accuracy queries
  double renyi_total = 0;      // odometer total for the dataset source
  ojson odometer_json;
};

// Clipped-gradient logistic descent with per-iteration Gaussian noise under
// a Renyi filter and odometer, stopping early when the noisy accuracy
// plateaus. Throws FilterHalt when the budget runs out first.
GdDemoResult dp_gradient_descent_demo(const GdDataset &data,
                                      const GdDemoConfig &config);

} // namespace senstrace::harness
