#pragma once

#include <string>
#include <string_view>

#include "senstrace/eval.hpp"

namespace senstrace {

// Parses an input-environment document:
//   {"x": {"value": 21, "source": "o", "metric": "diff"}}
// metric is "diff" or "disc". Rejects malformed documents, duplicate names
// and unknown metric strings.
InputMap parse_inputs(std::string_view text);

// Serializes an evaluation result as one JSON document:
//   {"value":"42","senv":{"o":2},"metric":"diff","steps":0}
// Pairs, closures and locations render their canonical text form into
// "value" with an empty senv and null metric.
std::string render_result(const EvalResult &r);

} // namespace senstrace
