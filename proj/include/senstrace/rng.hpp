#pragma once

#include <cstdint>
#include <random>

namespace senstrace::priv {

// Seedable, splittable noise stream. The exact draw procedures are part of
// the reproducibility contract:
//   - uniform01 takes the top 53 bits of one mt19937_64 output
//   - laplace is the inverse CDF applied to a single uniform draw
//   - normal is Box-Muller (cosine branch) on a pair of uniform draws
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // [0, 1)
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  double laplace(double scale);
  double normal(double stddev);

  // Independent child stream; advances this stream by one draw.
  Rng split() { return Rng(gen_() ^ 0x9e3779b97f4a7c15ULL); }

private:
  std::mt19937_64 gen_;
};

} // namespace senstrace::priv
