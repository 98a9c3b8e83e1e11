#include "senstrace/rng.hpp"

#include <cmath>

namespace senstrace::priv {

double Rng::laplace(double scale) {
  if (scale == 0) {
    return 0;
  }
  // Centered uniform, kept away from the endpoints where the CDF inverse
  // diverges.
  double u = uniform01() - 0.5;
  constexpr double kEdge = 0.5 - 1e-16;
  if (u > kEdge) u = kEdge;
  if (u < -kEdge) u = -kEdge;
  const double sign = u < 0 ? -1.0 : 1.0;
  return -scale * sign * std::log(1.0 - 2.0 * std::abs(u));
}

double Rng::normal(double stddev) {
  if (stddev == 0) {
    return 0;
  }
  const double u1 = 1.0 - uniform01(); // (0, 1]
  const double u2 = uniform01();
  const double z =
      std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  return stddev * z;
}

} // namespace senstrace::priv
