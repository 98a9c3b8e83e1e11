#pragma once

#include <compare>
#include <initializer_list>
#include <map>
#include <string>
#include <utility>

#include "senstrace/extreal.hpp"

namespace senstrace {

// Opaque name of a sensitive data source (conventionally a file name).
class SourceId {
public:
  explicit SourceId(std::string name); // throws on empty name

  const std::string &str() const { return name_; }

  friend bool operator==(const SourceId &a, const SourceId &b) = default;
  friend auto operator<=>(const SourceId &a, const SourceId &b) = default;

private:
  std::string name_;
};

// Sensitivity environment: finite map from sources to sensitivities.
// Canonical form never stores a zero entry, so structural equality is
// semantic equality and the zero environment is the empty map.
class SensEnv {
public:
  SensEnv() = default;
  SensEnv(std::initializer_list<std::pair<SourceId, ExtReal>> items);

  static const SensEnv &zero();
  static SensEnv single(const SourceId &source, ExtReal sensitivity);

  // 0 for absent sources.
  ExtReal get(const SourceId &source) const;
  bool is_zero() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  // Largest per-source sensitivity; 0 on the zero environment.
  ExtReal max_sensitivity() const;
  bool has_infinite_entry() const;

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const SensEnv &a, const SensEnv &b) = default;

  // Canonicalizing insert: dropping to zero removes the entry.
  void set(const SourceId &source, ExtReal sensitivity);

private:
  std::map<SourceId, ExtReal> entries_;
};

// Element-wise sum over the union of domains.
SensEnv senv_add(const SensEnv &a, const SensEnv &b);

// Pointwise scaling, with 0 * inf = 0 so a zero coefficient yields Z.
SensEnv senv_scale(ExtReal c, const SensEnv &s);

// Sum over the union of domains of distances(o) * coefficients(o); this is
// how a sensitivity environment is applied to per-source input distances.
ExtReal senv_dot(const SensEnv &distances, const SensEnv &coefficients);

// Pointwise truncation of every entry (see truncated on ExtReal).
SensEnv truncated(const SensEnv &s, ExtReal bound);

// `{a:2,b:4}`; sources sorted, empty env renders as `{}`.
std::string to_string(const SensEnv &s);

} // namespace senstrace
