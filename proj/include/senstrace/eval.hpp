#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "senstrace/value.hpp"

namespace senstrace {

// Test-only semantic mutations. Each one breaks a single clause of the
// analysis; the preservation harness is expected to catch every one of them.
// Production paths always run with None.
enum class SemanticMutation {
  None,
  PlusDropsSenv,   // Plus keeps only the left operand's senv
  JoinAsMeet,      // Plus combines metrics with meet instead of join
  SkipScalarZCheck, // scalar side of a scaling op may be sensitive
  SkipGuardZCheck, // if0 guard may be sensitive
  TimesNoScale,    // scaling ops forget to scale the senv
};

struct EvalOptions {
  // Nested evaluation frames allowed before DepthExceeded is reported.
  std::size_t max_depth = 100000;
  SemanticMutation mutation = SemanticMutation::None;
};

struct EvalResult {
  Store store;
  Value value;
  std::uint64_t steps = 0; // number of function applications
};

// Big-step, step-indexed evaluation. Runs on an explicit frame stack so deep
// programs report DepthExceeded instead of crashing.
EvalResult eval(const EnvPtr &env, Store store, const ExprPtr &e,
                const EvalOptions &opts = {});

// One program input: initial value, owning source and base metric. Every
// declared input is bound 1-sensitive in its source.
struct InputBinding {
  double value = 0;
  SourceId source;
  Metric metric = Metric::Diff;
};

using InputMap = std::map<std::string, InputBinding>;

EvalResult eval_entry(const InputMap &inputs, const ExprPtr &program,
                      const EvalOptions &opts = {});

} // namespace senstrace
