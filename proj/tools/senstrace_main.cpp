// senstrace: interpreter and privacy runtime for sensitivity-tagged
// programs.
//
// Subcommands:
//   run      evaluate a program with declared inputs, print the result
//   check    paired-execution preservation check for one program
//   corpus   run the preservation suite over a fixture directory
//   demo-gd  differentially private gradient descent on synthetic data
//
// Exit codes: 0 success; 1 usage, IO or parse error; 2 analysis error
// (e.g. SensitiveGuard); 3 preservation violation; 4 privacy filter halt.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "senstrace/gd_demo.hpp"
#include "senstrace/harness.hpp"
#include "senstrace/inputs.hpp"
#include "senstrace/parser.hpp"
#include "senstrace/real_text.hpp"

namespace {

using namespace senstrace;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitAnalysis = 2;
constexpr int kExitViolation = 3;
constexpr int kExitFilterHalt = 4;

std::string slurp(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::MalformedInput, "cannot read '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::uint64_t resolve_seed(std::uint64_t flag_seed, bool seed_given) {
  if (seed_given) {
    return flag_seed;
  }
  if (const char *env = std::getenv("SENSTRACE_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

SemanticMutation mutation_from_name(const std::string &name) {
  if (name.empty() || name == "none") return SemanticMutation::None;
  if (name == "plus-drop-senv") return SemanticMutation::PlusDropsSenv;
  if (name == "join-as-meet") return SemanticMutation::JoinAsMeet;
  if (name == "skip-scalar-check") return SemanticMutation::SkipScalarZCheck;
  if (name == "skip-guard-check") return SemanticMutation::SkipGuardZCheck;
  if (name == "times-no-scale") return SemanticMutation::TimesNoScale;
  throw CLI::ValidationError("--mutate", "unknown mutation '" + name + "'");
}

int exit_code_for(const Error &e) {
  switch (e.kind()) {
  case ErrorKind::FilterHalt:
    return kExitFilterHalt;
  case ErrorKind::ParseError:
  case ErrorKind::MalformedInput:
  case ErrorKind::UnknownMetric:
  case ErrorKind::DuplicateName:
  case ErrorKind::BadCorpus:
    return kExitIo;
  default:
    return kExitAnalysis;
  }
}

int cmd_run(const std::string &program_path, const std::string &inputs_path) {
  const ExprPtr program = parse_program(slurp(program_path));
  const InputMap inputs = parse_inputs(slurp(inputs_path));
  const EvalResult result = eval_entry(inputs, program);
  std::cout << render_result(result) << "\n";
  return kExitOk;
}

int cmd_check(const std::string &program_path, const std::string &spec_path,
              std::size_t trials, std::uint64_t seed,
              const std::string &mutate, bool json_out) {
  const ExprPtr program = parse_program(slurp(program_path));
  const harness::NeighborSpec spec =
      harness::parse_neighbor_spec(slurp(spec_path));
  EvalOptions opts;
  opts.mutation = mutation_from_name(mutate);

  const harness::PreservationReport report =
      harness::check_preservation(program, spec, trials, seed, opts);
  if (json_out) {
    std::cout << report.to_json().dump() << "\n";
  } else {
    std::cout << "trials: " << report.trials
              << "  violations: " << report.violations.size()
              << "  step mismatches: " << report.step_mismatches.size()
              << "  tag mismatches: " << report.tag_mismatches.size() << "\n";
    if (!report.passed()) {
      std::cout << report.to_json().dump(2) << "\n";
    }
  }
  return report.passed() ? kExitOk : kExitViolation;
}

int cmd_corpus(const std::string &dir, std::size_t trials, std::uint64_t seed,
               const std::string &mutate, bool json_out) {
  EvalOptions opts;
  opts.mutation = mutation_from_name(mutate);
  const harness::CorpusSummary summary =
      harness::run_corpus(dir, trials, seed, opts);
  if (json_out) {
    std::cout << summary.to_json().dump() << "\n";
  } else {
    for (const harness::CorpusEntry &entry : summary.entries) {
      std::cout << (entry.ok ? "pass  " : "FAIL  ") << entry.name << "\n";
    }
    std::cout << summary.programs - summary.failed << "/" << summary.programs
              << " fixtures passed\n";
  }
  return summary.passed() ? kExitOk : kExitViolation;
}

int cmd_demo_gd(double alpha, double eps, double budget, std::uint64_t seed,
                bool json_out) {
  harness::GdDemoConfig config;
  config.alpha = alpha;
  config.eps_iter = eps;
  config.eps_budget = budget;
  config.seed = seed;
  const harness::GdDataset data = harness::make_synthetic_blobs(400, seed);
  const harness::GdDemoResult result =
      harness::dp_gradient_descent_demo(data, config);
  if (json_out) {
    ojson doc{{"accuracy", result.noisy_accuracy},
              {"iterations", result.iterations},
              {"aux_queries", result.aux_queries},
              {"odometer", result.odometer_json}};
    std::cout << doc.dump() << "\n";
  } else {
    std::cout << "final accuracy: " << format_real(result.noisy_accuracy)
              << "\n";
    std::cout << result.odometer_json.dump() << "\n";
  }
  return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Dynamic sensitivity analysis and differential privacy "
               "runtime for a small core language"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  bool json_out = false;

  // run
  auto *run = app.add_subcommand("run", "evaluate a program against inputs");
  std::string program_path, inputs_path;
  run->add_option("program", program_path, "program file (.sdl)")->required();
  run->add_option("inputs", inputs_path, "inputs file (.inputs.json)")
      ->required();
  bool run_seed_given = false;
  run->add_option("--seed", seed, "random seed (unused by run; accepted for "
                                  "interface uniformity)")
      ->each([&](const std::string &) { run_seed_given = true; });
  run->add_flag("--json", json_out, "machine-readable output");

  // check
  auto *check =
      app.add_subcommand("check", "paired-execution preservation check");
  std::string spec_path, mutate;
  std::size_t trials = 1000;
  check->add_option("program", program_path, "program file (.sdl)")
      ->required();
  check->add_option("spec", spec_path, "neighborhood spec (.spec.json)")
      ->required();
  bool check_seed_given = false;
  check->add_option("--trials", trials, "trials per program (default 1000)")
      ->check(CLI::PositiveNumber);
  check->add_option("--seed", seed, "random seed")
      ->each([&](const std::string &) { check_seed_given = true; });
  check->add_option("--mutate", mutate,
                    "run with a named evaluator mutation (plus-drop-senv, "
                    "join-as-meet, skip-scalar-check, skip-guard-check, "
                    "times-no-scale)");
  check->add_flag("--json", json_out, "machine-readable output");

  // corpus
  auto *corpus =
      app.add_subcommand("corpus", "run the preservation fixture suite");
  std::string corpus_dir;
  std::size_t corpus_trials = 0;
  corpus->add_option("dir", corpus_dir, "fixture directory")->required();
  bool corpus_seed_given = false;
  corpus->add_option("--trials", corpus_trials,
                     "override per-fixture trial counts");
  corpus->add_option("--seed", seed, "random seed")
      ->each([&](const std::string &) { corpus_seed_given = true; });
  corpus->add_option("--mutate", mutate, "run with a named evaluator mutation");
  corpus->add_flag("--json", json_out, "machine-readable output");

  // demo-gd
  auto *demo = app.add_subcommand(
      "demo-gd", "private gradient descent on synthetic data");
  double alpha = 10.0, eps = 0.5, budget = 50.0;
  bool demo_seed_given = false;
  demo->add_option("--alpha", alpha, "Renyi order (> 1)")
      ->check(CLI::Range(1.0 + 1e-9, 1e9));
  demo->add_option("--eps", eps, "per-iteration epsilon")
      ->check(CLI::PositiveNumber);
  demo->add_option("--budget", budget, "Renyi filter budget")
      ->check(CLI::PositiveNumber);
  demo->add_option("--seed", seed, "random seed")
      ->each([&](const std::string &) { demo_seed_given = true; });
  demo->add_flag("--json", json_out, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    // Collapse CLI11's exit-code zoo into the documented map: 0 for --help,
    // 1 for every usage error.
    return app.exit(e) == 0 ? kExitOk : kExitIo;
  }

  try {
    if (run->parsed()) {
      return cmd_run(program_path, inputs_path);
    }
    if (check->parsed()) {
      return cmd_check(program_path, spec_path, trials,
                       resolve_seed(seed, check_seed_given), mutate, json_out);
    }
    if (corpus->parsed()) {
      return cmd_corpus(corpus_dir, corpus_trials,
                        resolve_seed(seed, corpus_seed_given), mutate,
                        json_out);
    }
    if (demo->parsed()) {
      return cmd_demo_gd(alpha, eps, budget,
                         resolve_seed(seed, demo_seed_given), json_out);
    }
  } catch (const harness::BaseEvaluationError &e) {
    std::cerr << e.what() << "\n";
    return kExitAnalysis;
  } catch (const Error &e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}
