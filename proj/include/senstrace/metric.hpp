#pragma once

#include <optional>
#include <string_view>

#include "senstrace/extreal.hpp"

namespace senstrace {

// Four-point metric lattice. diff (absolute difference) and disc (discrete)
// are the base metrics; bot and top are the lattice bounds below and above
// both. Order: Bot < Diff < Top, Bot < Disc < Top, Diff and Disc incomparable.
enum class Metric { Bot, Diff, Disc, Top };

bool metric_leq(Metric a, Metric b);
Metric metric_join(Metric a, Metric b);
Metric metric_meet(Metric a, Metric b);

std::string_view metric_name(Metric m); // "bot" / "diff" / "disc" / "top"
std::optional<Metric> metric_from_name(std::string_view name);

// Distance relation on base values:
//   diff: |r1 - r2| <= bound
//   disc: 0 <= bound when r1 = r2, 1 <= bound when r1 != r2
//   bot:  both of the above; top: either of the above
// An infinite bound is always satisfied.
bool within_distance(double r1, double r2, ExtReal bound, Metric m);

} // namespace senstrace
