#include "senstrace/json_io.hpp"

#include <cmath>
#include <cstdint>

namespace senstrace {

ojson finite_number_json(double v) {
  if (v == std::floor(v) && std::abs(v) < 9.0e15) {
    return ojson(static_cast<std::int64_t>(v));
  }
  return ojson(v);
}

ojson extreal_json(ExtReal q) {
  if (q.is_infinite()) {
    return ojson("inf");
  }
  return finite_number_json(q.value());
}

ojson senv_json(const SensEnv &s) {
  ojson out = ojson::object();
  for (const auto &[source, sensitivity] : s) {
    out[source.str()] = extreal_json(sensitivity);
  }
  return out;
}

} // namespace senstrace
