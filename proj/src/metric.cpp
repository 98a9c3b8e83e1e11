#include "senstrace/metric.hpp"

#include <cmath>

namespace senstrace {

bool metric_leq(Metric a, Metric b) {
  if (a == b || a == Metric::Bot || b == Metric::Top) {
    return true;
  }
  return false; // diff and disc are incomparable
}

Metric metric_join(Metric a, Metric b) {
  if (metric_leq(a, b)) {
    return b;
  }
  if (metric_leq(b, a)) {
    return a;
  }
  return Metric::Top; // join of diff and disc
}

Metric metric_meet(Metric a, Metric b) {
  if (metric_leq(a, b)) {
    return a;
  }
  if (metric_leq(b, a)) {
    return b;
  }
  return Metric::Bot; // meet of diff and disc
}

std::string_view metric_name(Metric m) {
  switch (m) {
  case Metric::Bot: return "bot";
  case Metric::Diff: return "diff";
  case Metric::Disc: return "disc";
  case Metric::Top: return "top";
  }
  return "?";
}

std::optional<Metric> metric_from_name(std::string_view name) {
  if (name == "bot") return Metric::Bot;
  if (name == "diff") return Metric::Diff;
  if (name == "disc") return Metric::Disc;
  if (name == "top") return Metric::Top;
  return std::nullopt;
}

bool within_distance(double r1, double r2, ExtReal bound, Metric m) {
  if (bound.is_infinite()) {
    return true;
  }
  const double b = bound.value();
  const bool diff_ok = std::abs(r1 - r2) <= b;
  const bool disc_ok = (r1 == r2) ? true : 1.0 <= b;
  switch (m) {
  case Metric::Diff: return diff_ok;
  case Metric::Disc: return disc_ok;
  case Metric::Bot: return diff_ok && disc_ok;
  case Metric::Top: return diff_ok || disc_ok;
  }
  return false;
}

} // namespace senstrace
