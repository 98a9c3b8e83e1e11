#include "senstrace/senv.hpp"

#include <stdexcept>

namespace senstrace {

SourceId::SourceId(std::string name) : name_(std::move(name)) {
  if (name_.empty()) {
    throw std::invalid_argument("source id must be non-empty");
  }
}

SensEnv::SensEnv(std::initializer_list<std::pair<SourceId, ExtReal>> items) {
  for (const auto &[source, sensitivity] : items) {
    set(source, sensitivity);
  }
}

const SensEnv &SensEnv::zero() {
  static const SensEnv z;
  return z;
}

SensEnv SensEnv::single(const SourceId &source, ExtReal sensitivity) {
  SensEnv s;
  s.set(source, sensitivity);
  return s;
}

ExtReal SensEnv::get(const SourceId &source) const {
  auto it = entries_.find(source);
  return it == entries_.end() ? ExtReal(0.0) : it->second;
}

ExtReal SensEnv::max_sensitivity() const {
  ExtReal best(0.0);
  for (const auto &[source, sensitivity] : entries_) {
    if (sensitivity > best) {
      best = sensitivity;
    }
  }
  return best;
}

bool SensEnv::has_infinite_entry() const {
  for (const auto &[source, sensitivity] : entries_) {
    if (sensitivity.is_infinite()) {
      return true;
    }
  }
  return false;
}

void SensEnv::set(const SourceId &source, ExtReal sensitivity) {
  if (sensitivity.is_zero()) {
    entries_.erase(source);
  } else {
    entries_.insert_or_assign(source, sensitivity);
  }
}

SensEnv senv_add(const SensEnv &a, const SensEnv &b) {
  SensEnv out = a;
  for (const auto &[source, sensitivity] : b) {
    out.set(source, out.get(source) + sensitivity);
  }
  return out;
}

SensEnv senv_scale(ExtReal c, const SensEnv &s) {
  SensEnv out;
  for (const auto &[source, sensitivity] : s) {
    out.set(source, c * sensitivity);
  }
  return out;
}

ExtReal senv_dot(const SensEnv &distances, const SensEnv &coefficients) {
  // Absent entries are 0 and 0 * q = 0, so the intersection carries the sum.
  ExtReal total(0.0);
  for (const auto &[source, coefficient] : coefficients) {
    total = total + distances.get(source) * coefficient;
  }
  return total;
}

SensEnv truncated(const SensEnv &s, ExtReal bound) {
  SensEnv out;
  for (const auto &[source, sensitivity] : s) {
    out.set(source, truncated(sensitivity, bound));
  }
  return out;
}

std::string to_string(const SensEnv &s) {
  std::string out = "{";
  bool first = true;
  for (const auto &[source, sensitivity] : s) {
    if (!first) {
      out += ",";
    }
    first = false;
    out += source.str();
    out += ":";
    out += to_string(sensitivity);
  }
  out += "}";
  return out;
}

} // namespace senstrace
