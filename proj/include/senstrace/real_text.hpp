#pragma once

#include <string>

namespace senstrace {

// Canonical text form of a real: integers print without a decimal point
// ("42"), everything else in the shortest round-trip decimal form,
// infinities as "inf"/"-inf".
std::string format_real(double r);

} // namespace senstrace
