// Acceptance suite: end-to-end checks of the documented behavior, one
// printed line per criterion. Exits non-zero if any criterion fails.
//
// Usage: acceptance_tests [corpus-dir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "senstrace/gd_demo.hpp"
#include "senstrace/harness.hpp"
#include "senstrace/inputs.hpp"
#include "senstrace/mechanisms.hpp"
#include "senstrace/parser.hpp"

using namespace senstrace;

namespace {

struct Criterion {
  int number;
  std::string title;
  std::function<void()> body;
};

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string &what) {
  if (!ok) {
    throw Failure(what);
  }
}

template <typename T>
void require_eq(const T &got, const T &want, const std::string &what) {
  if (!(got == want)) {
    throw Failure(what);
  }
}

SourceId src(const char *name) { return SourceId(name); }

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

std::string g_corpus_dir = "corpus";

// ---------------------------------------------------------------------------
// 1. Worked-example fidelity: (+ x x) at x = 21 from source o.

void criterion_worked_example() {
  const ExprPtr program = parse_program("(+ x x)");
  const InputMap inputs =
      parse_inputs(R"({"x":{"value":21,"source":"o","metric":"diff"}})");

  const auto start = std::chrono::steady_clock::now();
  const EvalResult result = eval_entry(inputs, program);
  const std::string rendered = render_result(result);
  const double elapsed = ms_since(start);

  require_eq(rendered,
             std::string(
                 R"({"value":"42","senv":{"o":2},"metric":"diff","steps":0})"),
             "rendered result mismatch: " + rendered);
  const auto &t = result.value.as_tagged_real();
  require(t.value == 42.0, "value");
  require(t.senv == SensEnv::single(src("o"), ExtReal(2.0)), "senv");
  require(t.metric == Metric::Diff, "metric");
  require(result.steps == 0, "steps");
  require(elapsed < 1.0,
          "evaluation took " + std::to_string(elapsed) + " ms (limit 1 ms)");
}

// ---------------------------------------------------------------------------
// 2. Sensitivity-environment algebra.

void criterion_senv_algebra() {
  const SensEnv a{{src("a"), ExtReal(2.0)}, {src("b"), ExtReal(1.0)}};
  const SensEnv b{{src("b"), ExtReal(3.0)}, {src("c"), ExtReal(5.0)}};
  const SensEnv expected{{src("a"), ExtReal(2.0)},
                         {src("b"), ExtReal(4.0)},
                         {src("c"), ExtReal(5.0)}};
  require_eq(senv_add(a, b), expected, "element-wise sum mismatch");
}

// ---------------------------------------------------------------------------
// 3. Wrapper-layer arithmetic table.

void criterion_wrapper_table() {
  const sens::SensScalar df = sens::lift_scalar(10, src("d"));

  require_eq((df + 5.0).senv(), SensEnv::single(src("d"), ExtReal(1.0)),
             "constant addition must preserve the senv");
  require_eq((df + df).senv(), SensEnv::single(src("d"), ExtReal(2.0)),
             "self-addition must double the senv");
  require_eq((df * 5.0).senv(), SensEnv::single(src("d"), ExtReal(5.0)),
             "constant scaling must scale the senv");
  require_eq((df * df).senv(),
             SensEnv::single(src("d"), ExtReal::infinity()),
             "self-multiplication must be infinitely sensitive");
}

// ---------------------------------------------------------------------------
// 4. Odometer totals under repeated mechanisms.

void criterion_odometer_totals() {
  priv::AccountantScope scope(1);
  priv::EpsOdometer two;
  {
    priv::AccountantScope::OdometerGuard guard(scope, two);
    priv::laplace(scope, sens::lift_scalar(10, src("src")), 1.0);
    priv::laplace(scope, sens::lift_scalar(10, src("src")), 1.0);
  }
  require(two.total(src("src")) == 2.0, "two calls must cost exactly 2.0");

  priv::EpsOdometer twenty;
  {
    priv::AccountantScope::OdometerGuard guard(scope, twenty);
    for (int i = 0; i < 20; ++i) {
      priv::laplace(scope, sens::lift_scalar(10, src("src")), 1.0);
    }
  }
  require(twenty.total(src("src")) == 20.0,
          "twenty iterations must cost exactly 20.0");
}

// ---------------------------------------------------------------------------
// 5. Filter behavior at an exactly-consumed budget.

void criterion_filter() {
  priv::AccountantScope scope(1);
  priv::EdFilter filter(1.0, 1e-5);
  priv::AccountantScope::FilterGuard guard(scope, filter);

  priv::gauss(scope, sens::lift_scalar(10, src("src")), 1.0, 1e-5);
  bool halted = false;
  try {
    priv::gauss(scope, sens::lift_scalar(10, src("src")), 1.0, 1e-5);
  } catch (const Error &e) {
    halted = e.kind() == ErrorKind::FilterHalt;
  }
  require(halted, "second charge must raise FilterHalt");
}

// ---------------------------------------------------------------------------
// 6. Renyi pipeline: 200 mechanism calls and conversion.

void criterion_renyi_pipeline() {
  const auto start = std::chrono::steady_clock::now();
  priv::AccountantScope scope(1);
  priv::RenyiOdometer odometer(10.0);
  {
    priv::AccountantScope::OdometerGuard guard(scope, odometer);
    for (int i = 0; i < 200; ++i) {
      priv::renyi_gauss(scope, sens::lift_scalar(10, src("data.csv")), 10.0,
                        0.2);
    }
  }
  const priv::EdCost converted = odometer.to_ed(src("data.csv"), 1e-5);
  require(std::abs(converted.eps - 41.28) <= 0.01,
          "converted epsilon " + std::to_string(converted.eps) +
              " not within 0.01 of 41.28");
  require(converted.delta == 1e-5, "converted delta");
  require(ms_since(start) < 1000.0, "pipeline exceeded 1 s");
}

// ---------------------------------------------------------------------------
// 7. Metric-preservation suite over the shipped corpus plus mutation kill.

void count_forms(const Expr &e, std::map<std::string, int> &seen) {
  std::visit(
      [&seen](const auto &n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, VarExpr>) {
          ++seen["var"];
        } else if constexpr (std::is_same_v<T, RealExpr>) {
          ++seen["real"];
        } else if constexpr (std::is_same_v<T, BinOpExpr>) {
          ++seen[n.op == BinOpKind::Plus     ? "plus"
                 : n.op == BinOpKind::TimesL ? "times-l"
                                             : "times-r"];
          count_forms(*n.lhs, seen);
          count_forms(*n.rhs, seen);
        } else if constexpr (std::is_same_v<T, If0Expr>) {
          // distinguish statically decided branches so both if0 rules are
          // known to be exercised
          if (const auto *lit = std::get_if<RealExpr>(&n.guard->node)) {
            ++seen[lit->value == 0 ? "if0-true" : "if0-false"];
          }
          ++seen["if0"];
          count_forms(*n.guard, seen);
          count_forms(*n.then_branch, seen);
          count_forms(*n.else_branch, seen);
        } else if constexpr (std::is_same_v<T, PairExpr>) {
          ++seen["pair"];
          count_forms(*n.first, seen);
          count_forms(*n.second, seen);
        } else if constexpr (std::is_same_v<T, ProjExpr>) {
          ++seen["proj"];
          count_forms(*n.inner, seen);
        } else if constexpr (std::is_same_v<T, LamExpr>) {
          ++seen["lam"];
          count_forms(*n.body, seen);
        } else if constexpr (std::is_same_v<T, AppExpr>) {
          ++seen["app"];
          count_forms(*n.fn, seen);
          count_forms(*n.arg, seen);
        } else if constexpr (std::is_same_v<T, RefExpr>) {
          ++seen["ref"];
          count_forms(*n.inner, seen);
        } else if constexpr (std::is_same_v<T, ReadExpr>) {
          ++seen["read"];
          count_forms(*n.inner, seen);
        } else {
          ++seen["write"];
          count_forms(*n.target, seen);
          count_forms(*n.value, seen);
        }
      },
      e.node);
}

void criterion_preservation_suite() {
  namespace fs = std::filesystem;
  const auto start = std::chrono::steady_clock::now();

  std::size_t fixtures = 0;
  std::map<std::string, int> forms;
  for (const auto &entry : fs::directory_iterator(g_corpus_dir)) {
    if (entry.path().extension() != ".sdl") {
      continue;
    }
    ++fixtures;
    std::ifstream in(entry.path());
    std::ostringstream buf;
    buf << in.rdbuf();
    count_forms(*parse_program(buf.str()), forms);
  }
  require(fixtures >= 20, "corpus must ship at least 20 programs, found " +
                              std::to_string(fixtures));
  for (const char *form :
       {"var", "real", "plus", "times-l", "times-r", "if0-true", "if0-false",
        "pair", "proj", "lam", "app", "ref", "read", "write"}) {
    require(forms[form] > 0,
            std::string("corpus does not exercise the ") + form + " rule");
  }

  const harness::CorpusSummary clean =
      harness::run_corpus(g_corpus_dir, 1000, 20260810);
  require(clean.passed(), "clean evaluator must pass the whole corpus");

  const SemanticMutation mutations[] = {
      SemanticMutation::PlusDropsSenv, SemanticMutation::JoinAsMeet,
      SemanticMutation::SkipScalarZCheck, SemanticMutation::SkipGuardZCheck,
      SemanticMutation::TimesNoScale};
  for (SemanticMutation mutation : mutations) {
    EvalOptions opts;
    opts.mutation = mutation;
    const harness::CorpusSummary broken =
        harness::run_corpus(g_corpus_dir, 1000, 20260810, opts);
    require(!broken.passed(), "mutation " +
                                  std::to_string(static_cast<int>(mutation)) +
                                  " was not caught by the suite");
  }

  const double elapsed = ms_since(start);
  require(elapsed < 60000.0, "suite exceeded 60 s: " +
                                 std::to_string(elapsed / 1000.0) + " s");
}

// ---------------------------------------------------------------------------
// 8. Statistical indistinguishability of laplace outputs at distance 1.

void criterion_dp_smoke() {
  const auto start = std::chrono::steady_clock::now();
  const int samples = 200000;
  const double lo = -8.0, hi = 9.0, width = 0.25;
  const int bins = static_cast<int>((hi - lo) / width);

  std::vector<int> h0(bins, 0), h1(bins, 0);
  auto run = [&](double input, std::vector<int> &hist) {
    priv::AccountantScope scope(31415);
    for (int i = 0; i < samples; ++i) {
      const double y =
          priv::laplace(scope, sens::lift_scalar(input, src("o")), 1.0);
      const int bin = static_cast<int>(std::floor((y - lo) / width));
      if (bin >= 0 && bin < bins) {
        ++hist[bin];
      }
    }
  };
  run(0.0, h0);
  run(1.0, h1);

  int checked = 0;
  for (int b = 0; b < bins; ++b) {
    if (h0[b] >= 500 && h1[b] >= 500) {
      ++checked;
      const double ratio = std::log(static_cast<double>(h0[b]) / h1[b]);
      require(std::abs(ratio) <= 1.15,
              "bin " + std::to_string(b) + " log-ratio " +
                  std::to_string(ratio) + " exceeds 1.15");
    }
  }
  require(checked >= 10, "too few populated bins to be meaningful");
  require(ms_since(start) < 30000.0, "smoke test exceeded 30 s");
}

// ---------------------------------------------------------------------------
// 9. Mechanism metric gating for clipped vectors.

void criterion_metric_gating() {
  const sens::SensScalar l2_sum =
      sens::vec_sum(sens::clip_l2(sens::lift_vector({3, 4}, src("d")), 5.0));

  priv::AccountantScope scope(1);
  bool rejected = false;
  try {
    priv::laplace(scope, l2_sum, 1.0);
  } catch (const Error &e) {
    rejected = e.kind() == ErrorKind::MetricIncompatible;
  }
  require(rejected, "laplace must reject an L2-derived sensitivity");
  priv::gauss(scope, l2_sum, 1.0, 1e-5); // must succeed
}

// ---------------------------------------------------------------------------
// 10. Gradient-descent case study at desk scale.

void criterion_gradient_descent() {
  const auto start = std::chrono::steady_clock::now();
  const harness::GdDataset data = harness::make_synthetic_blobs(400, 7);
  harness::GdDemoConfig config;
  config.seed = 7;

  const harness::GdDemoResult result =
      harness::dp_gradient_descent_demo(data, config);
  require(result.noisy_accuracy > 0.85,
          "noisy accuracy " + std::to_string(result.noisy_accuracy) +
              " below 0.85");
  const double expected =
      static_cast<double>(result.iterations) * config.eps_iter +
      static_cast<double>(result.aux_queries) * config.eps_aux();
  require(result.renyi_total == expected,
          "odometer total " + std::to_string(result.renyi_total) +
              " != iterations*eps + aux charges " + std::to_string(expected));
  require(ms_since(start) < 10000.0, "demo exceeded 10 s");
}

} // namespace

int main(int argc, char **argv) {
  if (argc > 1) {
    g_corpus_dir = argv[1];
  }

  const std::vector<Criterion> criteria = {
      {1, "worked-example fidelity", criterion_worked_example},
      {2, "sensitivity-environment algebra", criterion_senv_algebra},
      {3, "wrapper-layer arithmetic table", criterion_wrapper_table},
      {4, "odometer totals", criterion_odometer_totals},
      {5, "filter halt at budget", criterion_filter},
      {6, "renyi pipeline and conversion", criterion_renyi_pipeline},
      {7, "metric-preservation suite and mutation kill",
       criterion_preservation_suite},
      {8, "statistical dp smoke test", criterion_dp_smoke},
      {9, "mechanism metric gating", criterion_metric_gating},
      {10, "gradient-descent demo", criterion_gradient_descent},
  };

  int failed = 0;
  for (const Criterion &criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    try {
      criterion.body();
      std::printf("[PASS] %2d %s (%.1f ms)\n", criterion.number,
                  criterion.title.c_str(), ms_since(start));
    } catch (const std::exception &e) {
      ++failed;
      std::printf("[FAIL] %2d %s: %s\n", criterion.number,
                  criterion.title.c_str(), e.what());
    }
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
