#include "senstrace/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "senstrace/inputs.hpp"
#include "senstrace/parser.hpp"
#include "senstrace/real_text.hpp"
#include "senstrace/rng.hpp"

namespace senstrace::harness {

namespace {

namespace fs = std::filesystem;

// Distance check with floating-point slack: sensitivities flow through
// sums and products, so the accumulated bound may differ from the ideal
// one in the last few ulps.
bool within_slack(double r1, double r2, ExtReal bound, Metric m) {
  if (bound.is_infinite()) {
    return true;
  }
  const double b = bound.value() * (1.0 + 1e-9) + 1e-12;
  const bool diff_ok = std::abs(r1 - r2) <= b;
  const bool disc_ok = r1 == r2 || 1.0 <= b;
  switch (m) {
  case Metric::Diff: return diff_ok;
  case Metric::Disc: return disc_ok;
  case Metric::Bot: return diff_ok && disc_ok;
  case Metric::Top: return diff_ok || disc_ok;
  }
  return false;
}

ojson inputs_json(const InputMap &inputs) {
  ojson out = ojson::object();
  for (const auto &[name, binding] : inputs) {
    out[name] = ojson{{"value", binding.value},
                      {"source", binding.source.str()},
                      {"metric", std::string(metric_name(binding.metric))}};
  }
  return out;
}

struct TrialContext {
  PreservationReport &report;
  std::uint64_t trial;
  const InputMap &inputs1, &inputs2;

  void violation(const std::string &where, const std::string &detail) {
    report.violations.push_back(Violation{trial, where, detail,
                                          inputs_json(inputs1),
                                          inputs_json(inputs2)});
  }

  void tag_mismatch(const std::string &detail) {
    report.tag_mismatches.push_back(TagMismatch{trial, detail});
  }
};

std::string value_shape(const Value &v) {
  return std::visit(
      [](const auto &n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Value::TaggedReal>) return "real";
        else if constexpr (std::is_same_v<T, Value::Pair>) return "pair";
        else if constexpr (std::is_same_v<T, Value::Closure>) return "closure";
        else return "loc";
      },
      v.node);
}

// Checks the value relation at the drawn input distance: identical tags and
// shapes, and base values within the senv-predicted distance.
void relate_values(TrialContext &ctx, const SensEnv &allowed, const Value &v1,
                   const Value &v2, const std::string &where, bool top_level) {
  if (v1.node.index() != v2.node.index()) {
    ctx.tag_mismatch(where + ": shapes differ (" + value_shape(v1) + " vs " +
                     value_shape(v2) + ")");
    return;
  }
  if (v1.is_tagged_real()) {
    const auto &a = v1.as_tagged_real();
    const auto &b = v2.as_tagged_real();
    if (!(a.senv == b.senv) || a.metric != b.metric) {
      ctx.tag_mismatch(where + ": analysis tags differ (" + to_string(a.senv) +
                       "#" + std::string(metric_name(a.metric)) + " vs " +
                       to_string(b.senv) + "#" +
                       std::string(metric_name(b.metric)) + ")");
      return;
    }
    const ExtReal bound = senv_dot(allowed, a.senv);
    if (top_level) {
      ctx.report.max_result_distance =
          std::max(ctx.report.max_result_distance, std::abs(a.value - b.value));
    }
    if (!within_slack(a.value, b.value, bound, a.metric)) {
      ctx.violation(where, "distance |" + format_real(a.value) + " - " +
                               format_real(b.value) + "| exceeds bound " +
                               to_string(bound) + " under " +
                               std::string(metric_name(a.metric)));
    }
    return;
  }
  if (std::holds_alternative<Value::Pair>(v1.node)) {
    const auto &p1 = std::get<Value::Pair>(v1.node);
    const auto &p2 = std::get<Value::Pair>(v2.node);
    relate_values(ctx, allowed, *p1.first, *p2.first, where + ".1", top_level);
    relate_values(ctx, allowed, *p1.second, *p2.second, where + ".2",
                  top_level);
    return;
  }
  if (std::holds_alternative<Value::Loc>(v1.node)) {
    if (std::get<Value::Loc>(v1.node).index !=
        std::get<Value::Loc>(v2.node).index) {
      ctx.tag_mismatch(where + ": locations differ");
    }
    return;
  }
  // Closures: the relation proper is extensional; structurally we require
  // the same code and relate the captured environments.
  const auto &c1 = std::get<Value::Closure>(v1.node);
  const auto &c2 = std::get<Value::Closure>(v2.node);
  if (c1.param != c2.param || !expr_equal(c1.body, c2.body)) {
    ctx.tag_mismatch(where + ": closure code differs");
    return;
  }
  if (c1.env->vars.size() != c2.env->vars.size()) {
    ctx.tag_mismatch(where + ": closure environments differ in domain");
    return;
  }
  auto i1 = c1.env->vars.begin();
  auto i2 = c2.env->vars.begin();
  for (; i1 != c1.env->vars.end(); ++i1, ++i2) {
    if (i1->first != i2->first) {
      ctx.tag_mismatch(where + ": closure environments differ in domain");
      return;
    }
    relate_values(ctx, allowed, i1->second, i2->second,
                  where + ".env[" + i1->first + "]", false);
  }
}

// Tag-only comparison between the base analysis run and a trial run; the
// analysis result must not depend on which related inputs were used.
bool tags_stable(const Value &base, const Value &trial) {
  if (base.node.index() != trial.node.index()) {
    return false;
  }
  if (base.is_tagged_real()) {
    const auto &a = base.as_tagged_real();
    const auto &b = trial.as_tagged_real();
    return a.senv == b.senv && a.metric == b.metric;
  }
  if (std::holds_alternative<Value::Pair>(base.node)) {
    const auto &p1 = std::get<Value::Pair>(base.node);
    const auto &p2 = std::get<Value::Pair>(trial.node);
    return tags_stable(*p1.first, *p2.first) &&
           tags_stable(*p1.second, *p2.second);
  }
  return true; // closure/loc carry no analysis information of their own
}

} // namespace

ojson PreservationReport::to_json() const {
  ojson violations_json = ojson::array();
  for (const Violation &v : violations) {
    violations_json.push_back(ojson{{"trial", v.trial},
                                    {"where", v.where},
                                    {"detail", v.detail},
                                    {"inputs1", v.inputs1},
                                    {"inputs2", v.inputs2}});
  }
  ojson steps_json = ojson::array();
  for (const StepMismatch &s : step_mismatches) {
    steps_json.push_back(
        ojson{{"trial", s.trial}, {"steps1", s.steps1}, {"steps2", s.steps2}});
  }
  ojson tags_json = ojson::array();
  for (const TagMismatch &t : tag_mismatches) {
    tags_json.push_back(ojson{{"trial", t.trial}, {"detail", t.detail}});
  }
  return ojson{{"trials", trials},
               {"passed", passed()},
               {"violations", violations_json},
               {"step_mismatches", steps_json},
               {"tag_mismatches", tags_json},
               {"max_result_distance", max_result_distance}};
}

NeighborSpec parse_neighbor_spec(std::string_view json_text) {
  ojson doc;
  try {
    doc = ojson::parse(json_text);
  } catch (const std::exception &e) {
    throw Error(ErrorKind::MalformedInput, e.what());
  }
  if (!doc.is_object() || !doc.contains("inputs") ||
      !doc.contains("neighborhood")) {
    throw Error(ErrorKind::MalformedInput,
                "fixture spec needs inputs and neighborhood");
  }
  NeighborSpec spec;
  spec.base_inputs = parse_inputs(doc["inputs"].dump());
  if (!doc["neighborhood"].is_object()) {
    throw Error(ErrorKind::MalformedInput, "neighborhood must be an object");
  }
  for (const auto &[source, distance] : doc["neighborhood"].items()) {
    if (!distance.is_number() || distance.get<double>() < 0) {
      throw Error(ErrorKind::MalformedInput,
                  "neighborhood distance for '" + source +
                      "' must be a non-negative number");
    }
    spec.allowed.set(SourceId(source), ExtReal(distance.get<double>()));
  }
  if (doc.contains("trials")) {
    spec.trials = doc["trials"].get<std::size_t>();
  }
  if (doc.contains("expect_error")) {
    const std::string name = doc["expect_error"].get<std::string>();
    spec.expect_error.reset();
    for (int k = 0; k <= static_cast<int>(ErrorKind::BadCorpus); ++k) {
      if (error_kind_name(static_cast<ErrorKind>(k)) == name) {
        spec.expect_error = static_cast<ErrorKind>(k);
        break;
      }
    }
    if (!spec.expect_error) {
      throw Error(ErrorKind::MalformedInput,
                  "unknown expect_error kind '" + name + "'");
    }
  }
  return spec;
}

PreservationReport check_preservation(const ExprPtr &program,
                                      const NeighborSpec &spec,
                                      std::size_t trials, std::uint64_t seed,
                                      const EvalOptions &opts) {
  if (spec.allowed.has_infinite_entry()) {
    throw std::invalid_argument(
        "neighborhood distances must be finite on every perturbed source");
  }

  EvalResult base;
  try {
    base = eval_entry(spec.base_inputs, program, opts);
  } catch (const Error &e) {
    throw BaseEvaluationError(e.kind(), e.what());
  }

  PreservationReport report;
  report.trials = trials;
  priv::Rng root(seed);

  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    priv::Rng rng = root.split();

    // Draw a related pair around the base environment. diff sources move
    // uniformly within half the allowance on each side so the pair stays
    // within the allowance of each other; disc sources with allowance >= 1
    // are independently kept or resampled.
    std::map<std::string, std::pair<double, double>> drawn;
    for (const auto &[name, binding] : spec.base_inputs) {
      const ExtReal d = spec.allowed.get(binding.source);
      double a = binding.value, b = binding.value;
      if (!d.is_zero()) {
        if (binding.metric == Metric::Diff) {
          const double half = d.value() / 2.0;
          a = binding.value + rng.uniform(-half, half);
          b = binding.value + rng.uniform(-half, half);
        } else if (d.value() >= 1.0) {
          auto resample = [&](double base_value) {
            return rng.uniform01() < 0.5 ? base_value
                                         : base_value + rng.uniform(1.0, 2.0);
          };
          a = resample(binding.value);
          b = resample(binding.value);
        }
      }
      drawn.emplace(name, std::make_pair(a, b));
    }

    InputMap inputs1 = spec.base_inputs, inputs2 = spec.base_inputs;
    for (auto &[name, binding] : inputs1) {
      binding.value = drawn.at(name).first;
    }
    for (auto &[name, binding] : inputs2) {
      binding.value = drawn.at(name).second;
    }

    TrialContext ctx{report, trial, inputs1, inputs2};

    EvalResult r1, r2;
    try {
      r1 = eval_entry(inputs1, program, opts);
      r2 = eval_entry(inputs2, program, opts);
    } catch (const Error &e) {
      ctx.violation("evaluation", std::string("trial run failed: ") + e.what());
      continue;
    }

    if (r1.steps != r2.steps || r1.steps != base.steps) {
      report.step_mismatches.push_back(StepMismatch{trial, r1.steps, r2.steps});
    }
    if (!tags_stable(base.value, r1.value)) {
      ctx.tag_mismatch("analysis tags changed relative to the base run");
    }
    relate_values(ctx, spec.allowed, r1.value, r2.value, "result", true);

    // The theorem also relates the final stores.
    if (r1.store.size() != r2.store.size()) {
      ctx.tag_mismatch("store domains differ");
    } else {
      for (std::size_t i = 0; i < r1.store.size(); ++i) {
        relate_values(ctx, spec.allowed, r1.store.read(i), r2.store.read(i),
                      "store[" + std::to_string(i) + "]", false);
      }
    }
  }
  return report;
}

ojson CorpusSummary::to_json() const {
  ojson entries_json = ojson::array();
  for (const CorpusEntry &e : entries) {
    ojson entry{{"name", e.name}, {"ok", e.ok}};
    if (e.error_fixture) {
      entry["kind"] = "expect_error";
      if (!e.missed_error.empty()) {
        entry["missed_error"] = e.missed_error;
      }
    } else {
      entry["kind"] = "preservation";
      entry["report"] = e.report.to_json();
    }
    entries_json.push_back(entry);
  }
  return ojson{
      {"programs", programs}, {"failed", failed}, {"entries", entries_json}};
}

CorpusSummary run_corpus(const std::string &dir, std::size_t trials_override,
                         std::uint64_t seed, const EvalOptions &opts) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorKind::BadCorpus, "'" + dir + "' is not a directory");
  }
  std::vector<fs::path> programs;
  for (const auto &entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".sdl") {
      programs.push_back(entry.path());
    }
  }
  if (programs.empty()) {
    throw Error(ErrorKind::BadCorpus,
                "no .sdl fixtures found under '" + dir + "'");
  }
  std::sort(programs.begin(), programs.end());

  auto slurp = [](const fs::path &p) {
    std::ifstream in(p);
    if (!in) {
      throw Error(ErrorKind::BadCorpus, "cannot read '" + p.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };

  CorpusSummary summary;
  priv::Rng seeds(seed);
  for (const fs::path &program_path : programs) {
    fs::path spec_path = program_path;
    spec_path.replace_extension(".spec.json");
    if (!fs::exists(spec_path)) {
      throw Error(ErrorKind::BadCorpus,
                  "missing spec for '" + program_path.string() + "'");
    }
    const ExprPtr program = parse_program(slurp(program_path));
    const NeighborSpec spec = parse_neighbor_spec(slurp(spec_path));

    CorpusEntry entry;
    entry.name = program_path.stem().string();

    if (spec.expect_error) {
      entry.error_fixture = true;
      try {
        eval_entry(spec.base_inputs, program, opts);
        entry.ok = false;
        entry.missed_error = "expected " +
                             std::string(error_kind_name(*spec.expect_error)) +
                             ", but evaluation succeeded";
      } catch (const Error &e) {
        if (e.kind() == *spec.expect_error) {
          entry.ok = true;
        } else {
          entry.ok = false;
          entry.missed_error =
              "expected " + std::string(error_kind_name(*spec.expect_error)) +
              ", got " + std::string(error_kind_name(e.kind()));
        }
      }
    } else {
      const std::size_t trials =
          trials_override > 0 ? trials_override : spec.trials;
      try {
        entry.report =
            check_preservation(program, spec, trials, seeds.next_u64(), opts);
        entry.ok = entry.report.passed();
      } catch (const BaseEvaluationError &e) {
        entry.ok = false;
        entry.missed_error = std::string("base run failed: ") + e.what();
      }
    }

    if (!entry.ok) {
      ++summary.failed;
    }
    summary.entries.push_back(std::move(entry));
  }
  summary.programs = summary.entries.size();
  return summary;
}

} // namespace senstrace::harness
