#include <doctest.h>

#include "senstrace/errors.hpp"
#include "senstrace/eval.hpp"

using namespace senstrace;

namespace {

SourceId src(const char *name) { return SourceId(name); }

EnvPtr env_with(const char *name, Value v) {
  Env env;
  env.vars.insert_or_assign(name, std::move(v));
  return std::make_shared<const Env>(std::move(env));
}

Value one_sensitive(double value, const char *source,
                    Metric metric = Metric::Diff) {
  return Value::tagged(value, SensEnv::single(src(source), ExtReal(1.0)),
                       metric);
}

const Value::TaggedReal &result_real(const EvalResult &r) {
  REQUIRE(r.value.is_tagged_real());
  return r.value.as_tagged_real();
}

// total <- total + x unrolled `n` times through a reference cell, written
// with explicit sequencing lambdas:
//   (app (lam t (app (lam u ...) (write t (+ (read t) x)))) (ref 0))
ExprPtr unrolled_accumulator(int n) {
  ExprPtr body = expr::read(expr::var("t"));
  for (int i = 0; i < n; ++i) {
    body = expr::app(
        expr::lam("u" + std::to_string(i), body),
        expr::write(expr::var("t"),
                    expr::plus(expr::read(expr::var("t")), expr::var("x"))));
  }
  return expr::app(expr::lam("t", body), expr::ref(expr::real(0)));
}

} // namespace

TEST_CASE("doubling a sensitive variable doubles its sensitivity") {
  const EvalResult r = eval(env_with("x", one_sensitive(21, "o")), Store{},
                            expr::plus(expr::var("x"), expr::var("x")));
  const auto &t = result_real(r);
  CHECK(t.value == 42);
  CHECK(t.senv == SensEnv::single(src("o"), ExtReal(2.0)));
  CHECK(t.metric == Metric::Diff);
  CHECK(r.steps == 0);
}

TEST_CASE("literals evaluate to non-sensitive discrete values") {
  const EvalResult r = eval(
      empty_env(), Store{},
      expr::if0(expr::real(0), expr::real(7), expr::real(9)));
  const auto &t = result_real(r);
  CHECK(t.value == 7);
  CHECK(t.senv.is_zero());
  CHECK(t.metric == Metric::Disc);
  CHECK(r.steps == 0);
}

TEST_CASE("application counts one step and threads the argument") {
  const ExprPtr program =
      expr::app(expr::lam("y", expr::plus(expr::var("y"), expr::var("y"))),
                expr::var("x"));
  const EvalResult r =
      eval(env_with("x", one_sensitive(3, "o")), Store{}, program);
  const auto &t = result_real(r);
  CHECK(t.value == 6);
  CHECK(t.senv == SensEnv::single(src("o"), ExtReal(2.0)));
  CHECK(t.metric == Metric::Diff);
  CHECK(r.steps == 1);
}

TEST_CASE("sensitive guard is a runtime error") {
  const ExprPtr program =
      expr::if0(expr::var("x"), expr::real(1), expr::real(2));
  CHECK_THROWS_WITH_AS(
      eval(env_with("x", one_sensitive(3, "o")), Store{}, program),
      doctest::Contains("SensitiveGuard"), Error);
}

TEST_CASE("sensitive scalar operand is a runtime error") {
  const ExprPtr program = expr::scale_l(expr::var("x"), expr::var("x"));
  CHECK_THROWS_WITH_AS(
      eval(env_with("x", one_sensitive(3, "o")), Store{}, program),
      doctest::Contains("SensitiveScalar"), Error);

  const ExprPtr program_r = expr::scale_r(expr::var("x"), expr::var("x"));
  CHECK_THROWS_WITH_AS(
      eval(env_with("x", one_sensitive(3, "o")), Store{}, program_r),
      doctest::Contains("SensitiveScalar"), Error);
}

TEST_CASE("twenty accumulation rounds are twenty times as sensitive") {
  const EvalResult r = eval(env_with("x", one_sensitive(10, "o")), Store{},
                            unrolled_accumulator(20));
  const auto &t = result_real(r);
  CHECK(t.value == 200);
  CHECK(t.senv == SensEnv::single(src("o"), ExtReal(20.0)));
  CHECK(r.steps == 21); // one per unrolled round plus the outer binding
}

TEST_CASE("scaling keeps the sensitive side's metric and scales its senv") {
  const EvalResult l = eval(env_with("x", one_sensitive(2, "o")), Store{},
                            expr::scale_l(expr::real(3), expr::var("x")));
  CHECK(result_real(l).value == 6);
  CHECK(result_real(l).senv == SensEnv::single(src("o"), ExtReal(3.0)));
  CHECK(result_real(l).metric == Metric::Diff);

  const EvalResult rr =
      eval(env_with("x", one_sensitive(2, "o", Metric::Disc)), Store{},
           expr::scale_r(expr::var("x"), expr::real(4)));
  CHECK(result_real(rr).value == 8);
  CHECK(result_real(rr).senv == SensEnv::single(src("o"), ExtReal(4.0)));
  CHECK(result_real(rr).metric == Metric::Disc);
}

TEST_CASE("negative scalars scale sensitivity by their magnitude") {
  const EvalResult r = eval(env_with("x", one_sensitive(4, "o")), Store{},
                            expr::scale_l(expr::real(-2), expr::var("x")));
  CHECK(result_real(r).value == -8);
  CHECK(result_real(r).senv == SensEnv::single(src("o"), ExtReal(2.0)));
}

TEST_CASE("zero scalar annihilates sensitivity") {
  const EvalResult r = eval(env_with("x", one_sensitive(4, "o")), Store{},
                            expr::scale_l(expr::real(0), expr::var("x")));
  CHECK(result_real(r).value == 0);
  CHECK(result_real(r).senv.is_zero());
}

TEST_CASE("plus joins metrics") {
  const EvalResult r = eval(env_with("x", one_sensitive(1, "o")), Store{},
                            expr::plus(expr::var("x"), expr::real(5)));
  CHECK(result_real(r).metric == Metric::Top); // diff join disc
  CHECK(result_real(r).senv == SensEnv::single(src("o"), ExtReal(1.0)));
}

TEST_CASE("shape errors are type mismatches, not analysis errors") {
  const auto pair_env = env_with(
      "p", Value::pair(one_sensitive(1, "o"), one_sensitive(2, "o")));

  CHECK_THROWS_WITH_AS(
      eval(pair_env, Store{}, expr::plus(expr::var("p"), expr::real(1))),
      doctest::Contains("TypeMismatch"), Error);
  CHECK_THROWS_WITH_AS(
      eval(pair_env, Store{}, expr::app(expr::var("p"), expr::real(1))),
      doctest::Contains("TypeMismatch"), Error);
  CHECK_THROWS_WITH_AS(eval(pair_env, Store{}, expr::read(expr::var("p"))),
                       doctest::Contains("TypeMismatch"), Error);
  CHECK_THROWS_WITH_AS(
      eval(pair_env, Store{}, expr::write(expr::var("p"), expr::real(1))),
      doctest::Contains("TypeMismatch"), Error);
  CHECK_THROWS_WITH_AS(eval(pair_env, Store{}, expr::proj(1, expr::real(3))),
                       doctest::Contains("TypeMismatch"), Error);

  // a pair in guard position is a shape error, not SensitiveGuard
  CHECK_THROWS_WITH_AS(
      eval(pair_env, Store{},
           expr::if0(expr::var("p"), expr::real(1), expr::real(2))),
      doctest::Contains("TypeMismatch"), Error);
}

TEST_CASE("pairs and projections are structural") {
  const ExprPtr program = expr::proj(
      2,
      expr::pair(expr::real(7), expr::plus(expr::var("x"), expr::var("x"))));
  const EvalResult r =
      eval(env_with("x", one_sensitive(5, "o")), Store{}, program);
  CHECK(result_real(r).value == 10);
  CHECK(result_real(r).senv == SensEnv::single(src("o"), ExtReal(2.0)));
}

TEST_CASE("write returns the written value and updates the store") {
  const ExprPtr program = expr::write(
      expr::ref(expr::real(0)), expr::plus(expr::var("x"), expr::var("x")));
  const EvalResult r =
      eval(env_with("x", one_sensitive(4, "o")), Store{}, program);
  CHECK(result_real(r).value == 8);
  REQUIRE(r.store.size() == 1);
  CHECK(r.store.read(0).as_tagged_real().value == 8);
  CHECK(r.store.read(0).as_tagged_real().senv ==
        SensEnv::single(src("o"), ExtReal(2.0)));
}

TEST_CASE("step counting sums over subterms with one per application") {
  // ((lam a (lam b (+ a b))) x) y  -- two applications
  const ExprPtr curried = expr::app(
      expr::app(expr::lam("a", expr::lam("b", expr::plus(expr::var("a"),
                                                         expr::var("b")))),
                expr::var("x")),
      expr::var("y"));
  Env env;
  env.vars.insert_or_assign("x", one_sensitive(1, "o"));
  env.vars.insert_or_assign("y", one_sensitive(2, "q"));
  const EvalResult r =
      eval(std::make_shared<const Env>(std::move(env)), Store{}, curried);
  CHECK(r.steps == 2);
  CHECK(result_real(r).value == 3);

  // (lam f (f (f x))) (lam y (+ y 1))  -- three applications
  const ExprPtr thrice = expr::app(
      expr::lam("f", expr::app(expr::var("f"),
                               expr::app(expr::var("f"), expr::var("x")))),
      expr::lam("y", expr::plus(expr::var("y"), expr::real(1))));
  const EvalResult r2 =
      eval(env_with("x", one_sensitive(3, "o")), Store{}, thrice);
  CHECK(r2.steps == 3);
  CHECK(result_real(r2).value == 5);
}

TEST_CASE("evaluation is deterministic") {
  const ExprPtr program = unrolled_accumulator(5);
  const EnvPtr env = env_with("x", one_sensitive(2, "o"));
  const EvalResult a = eval(env, Store{}, program);
  const EvalResult b = eval(env, Store{}, program);
  CHECK(a.steps == b.steps);
  CHECK(value_equal(a.value, b.value));
  REQUIRE(a.store.size() == b.store.size());
  for (std::size_t i = 0; i < a.store.size(); ++i) {
    CHECK(value_equal(a.store.read(i), b.store.read(i)));
  }
}

TEST_CASE("store discipline: evaluation only appends or overwrites") {
  Store pre;
  pre.alloc(Value::tagged(1, SensEnv::zero(), Metric::Disc));
  pre.alloc(Value::tagged(2, SensEnv::zero(), Metric::Disc));

  const EvalResult r =
      eval(empty_env(), std::move(pre), expr::ref(expr::real(9)));
  CHECK(r.store.size() == 3);
  CHECK(r.store.read(0).as_tagged_real().value == 1);
  CHECK(r.store.read(1).as_tagged_real().value == 2);
  CHECK(std::get<Value::Loc>(r.value.node).index == 2);
}

TEST_CASE("programs without variables carry no sensitivity") {
  const ExprPtr program =
      expr::plus(expr::real(1), expr::scale_l(expr::real(2), expr::real(3)));
  const EvalResult r = eval(empty_env(), Store{}, program);
  CHECK(result_real(r).value == 7);
  CHECK(result_real(r).senv.is_zero());
}

TEST_CASE("deep recursion reports DepthExceeded instead of crashing") {
  ExprPtr program = expr::var("x");
  for (int i = 0; i < 200; ++i) {
    program = expr::plus(expr::real(1), program);
  }
  EvalOptions opts;
  opts.max_depth = 100;
  CHECK_THROWS_WITH_AS(
      eval(env_with("x", one_sensitive(0, "o")), Store{}, program, opts),
      doctest::Contains("DepthExceeded"), Error);
}

TEST_CASE("eval_entry binds declared inputs 1-sensitive") {
  InputMap inputs;
  inputs.insert_or_assign("x", InputBinding{21, src("o"), Metric::Diff});
  const EvalResult r =
      eval_entry(inputs, expr::plus(expr::var("x"), expr::var("x")));
  CHECK(result_real(r).value == 42);
  CHECK(result_real(r).senv == SensEnv::single(src("o"), ExtReal(2.0)));

  const EvalResult lit = eval_entry({}, expr::real(5));
  CHECK(result_real(lit).value == 5);
  CHECK(result_real(lit).senv.is_zero());
  CHECK(result_real(lit).metric == Metric::Disc);

  InputMap two;
  two.insert_or_assign("x", InputBinding{2, src("o"), Metric::Diff});
  const EvalResult scaled =
      eval_entry(two, expr::scale_l(expr::real(3), expr::var("x")));
  CHECK(result_real(scaled).value == 6);
  CHECK(result_real(scaled).senv == SensEnv::single(src("o"), ExtReal(3.0)));
  CHECK(result_real(scaled).metric == Metric::Diff);
}

TEST_CASE("unbound variables are reported by name") {
  CHECK_THROWS_WITH_AS(eval(empty_env(), Store{}, expr::var("ghost")),
                       doctest::Contains("ghost"), Error);
}

TEST_CASE("closures capture their definition environment") {
  const ExprPtr make_adder = expr::lam(
      "a", expr::lam("b", expr::plus(expr::var("a"), expr::var("b"))));
  const ExprPtr program = expr::app(
      expr::app(make_adder, expr::plus(expr::var("x"), expr::var("x"))),
      expr::real(10));
  const EvalResult r =
      eval(env_with("x", one_sensitive(1, "o")), Store{}, program);
  CHECK(result_real(r).value == 12);
  CHECK(result_real(r).senv == SensEnv::single(src("o"), ExtReal(2.0)));
}
