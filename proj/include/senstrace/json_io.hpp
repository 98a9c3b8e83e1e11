#pragma once

#include <string_view>

#include <json.hpp>

#include "senstrace/senv.hpp"

namespace senstrace {

// Order-preserving JSON document; file formats in this project fix the key
// order, so all serialization goes through this alias.
using ojson = nlohmann::ordered_json;

// Integral values serialize as JSON integers, other finite values as
// doubles, infinity as the string "inf" (JSON has no infinity literal).
ojson extreal_json(ExtReal q);
ojson finite_number_json(double v);

ojson senv_json(const SensEnv &s);

} // namespace senstrace
