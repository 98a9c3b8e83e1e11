#pragma once

#include <optional>
#include <string>
#include <vector>

#include "senstrace/errors.hpp"
#include "senstrace/eval.hpp"
#include "senstrace/json_io.hpp"

namespace senstrace::harness {

// How to draw related input pairs around a base environment: each source may
// move by at most its entry in `allowed` (the initial-distance environment).
// Absent sources are pinned. Entries must be finite.
struct NeighborSpec {
  InputMap base_inputs;
  SensEnv allowed;
  std::size_t trials = 1000;
  std::optional<ErrorKind> expect_error; // fixture expects the base run to fail
};

NeighborSpec parse_neighbor_spec(std::string_view json_text);

// Raised when the base (analysis) run of a checked program fails; carries
// the underlying error kind so error-expectation fixtures can match it.
class BaseEvaluationError : public Error {
public:
  BaseEvaluationError(ErrorKind inner, const std::string &message)
      : Error(ErrorKind::BaseEvaluationFailed, message), inner_(inner) {}
  ErrorKind inner() const { return inner_; }

private:
  ErrorKind inner_;
};

struct Violation {
  std::uint64_t trial = 0;
  std::string where;
  std::string detail;
  ojson inputs1, inputs2;
};

struct StepMismatch {
  std::uint64_t trial = 0;
  std::uint64_t steps1 = 0, steps2 = 0;
};

struct TagMismatch {
  std::uint64_t trial = 0;
  std::string detail;
};

struct PreservationReport {
  std::size_t trials = 0;
  std::vector<Violation> violations;
  std::vector<StepMismatch> step_mismatches;
  std::vector<TagMismatch> tag_mismatches;
  // Largest |r1 - r2| seen on a tagged-real result, for calibration checks.
  double max_result_distance = 0;

  bool passed() const {
    return violations.empty() && step_mismatches.empty() &&
           tag_mismatches.empty();
  }
  ojson to_json() const;
};

// Runs the analysis once on the base inputs, then draws `trials` related
// input pairs and asserts the metric-preservation conclusions on every pair:
// equal step counts, equal analysis tags, and result distance within the
// analysis-predicted bound.
PreservationReport check_preservation(const ExprPtr &program,
                                      const NeighborSpec &spec,
                                      std::size_t trials, std::uint64_t seed,
                                      const EvalOptions &opts = {});

struct CorpusEntry {
  std::string name;
  bool error_fixture = false;
  bool ok = false;
  std::string missed_error; // set when an expected error did not happen
  PreservationReport report;
};

struct CorpusSummary {
  std::vector<CorpusEntry> entries;
  std::size_t programs = 0;
  std::size_t failed = 0;

  bool passed() const { return failed == 0; }
  ojson to_json() const;
};

// Runs every {name}.sdl + {name}.spec.json fixture under the directory.
// trials_override of 0 keeps each fixture's own trial count.
CorpusSummary run_corpus(const std::string &dir, std::size_t trials_override,
                         std::uint64_t seed, const EvalOptions &opts = {});

} // namespace senstrace::harness
