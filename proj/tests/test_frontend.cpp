#include <doctest.h>

#include <random>

#include "senstrace/errors.hpp"
#include "senstrace/inputs.hpp"
#include "senstrace/parser.hpp"

using namespace senstrace;

namespace {

// Random programs for the round-trip property; shrinks toward leaves with
// depth.
ExprPtr random_expr(std::mt19937_64 &gen, int depth) {
  std::uniform_int_distribution<int> leaf(0, 2);
  std::uniform_int_distribution<int> node(0, 10);
  std::uniform_real_distribution<double> lit(-100.0, 100.0);
  static const char *names[] = {"x", "y", "z", "acc", "f1"};
  std::uniform_int_distribution<int> name(0, 4);

  if (depth <= 0 || leaf(gen) == 0) {
    if (leaf(gen) == 0) {
      return expr::var(names[name(gen)]);
    }
    // mix of integral, fractional and exponent-heavy literals
    switch (node(gen) % 3) {
    case 0: return expr::real(std::floor(lit(gen)));
    case 1: return expr::real(lit(gen) / 7.0);
    default: return expr::real(lit(gen) * 1e-9);
    }
  }
  const int d = depth - 1;
  switch (node(gen)) {
  case 0: return expr::plus(random_expr(gen, d), random_expr(gen, d));
  case 1: return expr::scale_l(random_expr(gen, d), random_expr(gen, d));
  case 2: return expr::scale_r(random_expr(gen, d), random_expr(gen, d));
  case 3:
    return expr::if0(random_expr(gen, d), random_expr(gen, d),
                     random_expr(gen, d));
  case 4: return expr::pair(random_expr(gen, d), random_expr(gen, d));
  case 5: return expr::proj(1 + (node(gen) & 1), random_expr(gen, d));
  case 6: return expr::lam(names[name(gen)], random_expr(gen, d));
  case 7: return expr::app(random_expr(gen, d), random_expr(gen, d));
  case 8: return expr::ref(random_expr(gen, d));
  case 9: return expr::read(random_expr(gen, d));
  default: return expr::write(random_expr(gen, d), random_expr(gen, d));
  }
}

} // namespace

TEST_CASE("parser: spec examples") {
  CHECK(expr_equal(parse_program("(+ x x)"),
                   expr::plus(expr::var("x"), expr::var("x"))));
  CHECK(expr_equal(
      parse_program("(app (lam y (+ y y)) x)"),
      expr::app(expr::lam("y", expr::plus(expr::var("y"), expr::var("y"))),
                expr::var("x"))));
  CHECK_THROWS_AS(parse_program("(proj 3 x)"), ParseError);
}

TEST_CASE("parser: every construct and lexical details") {
  CHECK(expr_equal(parse_program("(scalel 2 x)"),
                   expr::scale_l(expr::real(2), expr::var("x"))));
  CHECK(expr_equal(parse_program("(scaler x -2.5)"),
                   expr::scale_r(expr::var("x"), expr::real(-2.5))));
  CHECK(expr_equal(parse_program("(if0 0 1 2)"),
                   expr::if0(expr::real(0), expr::real(1), expr::real(2))));
  CHECK(expr_equal(parse_program("(write (ref 0) (read r))"),
                   expr::write(expr::ref(expr::real(0)),
                               expr::read(expr::var("r")))));
  CHECK(expr_equal(parse_program("(proj 2 (pair x y))"),
                   expr::proj(2, expr::pair(expr::var("x"), expr::var("y")))));
  CHECK(expr_equal(parse_program("1.5e-7"), expr::real(1.5e-7)));

  // whitespace-insensitive, line comments
  CHECK(expr_equal(parse_program("; doubles x\n(+ x ; left\n   x)"),
                   expr::plus(expr::var("x"), expr::var("x"))));
}

TEST_CASE("parse errors carry a span and never crash") {
  struct Case {
    const char *text;
  };
  const Case cases[] = {
      {"("},         {"(+ x)"},      {")"},        {"(foo x y)"},
      {"(lam 1 x)"}, {"(+ x x) y"},  {""},         {"(proj x y)"},
      {"(if0 1 2)"}, {"4eels"},      {"-"},        {"(+ x 3..5)"},
  };
  for (const Case &c : cases) {
    CAPTURE(c.text);
    CHECK_THROWS_AS(parse_program(c.text), ParseError);
  }

  try {
    parse_program("(+ x");
  } catch (const ParseError &e) {
    CHECK(e.span().start <= 4);
    CHECK_FALSE(e.expected().empty());
  }
}

TEST_CASE("printer round-trips every generated program") {
  std::mt19937_64 gen(2024);
  for (int i = 0; i < 300; ++i) {
    const ExprPtr program = random_expr(gen, 5);
    const std::string text = print_program(program);
    CAPTURE(text);
    CHECK(expr_equal(parse_program(text), program));
  }
}

TEST_CASE("inputs: spec examples") {
  const InputMap m =
      parse_inputs(R"({"x":{"value":21,"source":"o","metric":"diff"}})");
  REQUIRE(m.size() == 1);
  CHECK(m.at("x").value == 21);
  CHECK(m.at("x").source == SourceId("o"));
  CHECK(m.at("x").metric == Metric::Diff);

  CHECK(parse_inputs("{}").empty());

  CHECK_THROWS_WITH_AS(
      parse_inputs(R"({"x":{"value":1,"source":"o","metric":"L7"}})"),
      doctest::Contains("UnknownMetric"), Error);
}

TEST_CASE("inputs: malformed documents are rejected") {
  CHECK_THROWS_WITH_AS(parse_inputs("{"), doctest::Contains("MalformedInput"),
                       Error);
  CHECK_THROWS_WITH_AS(parse_inputs("[1,2]"),
                       doctest::Contains("MalformedInput"), Error);
  CHECK_THROWS_WITH_AS(parse_inputs(R"({"x":{"value":1,"source":"o"}})"),
                       doctest::Contains("MalformedInput"), Error);
  CHECK_THROWS_WITH_AS(
      parse_inputs(R"({"x":{"value":"no","source":"o","metric":"diff"}})"),
      doctest::Contains("MalformedInput"), Error);
  CHECK_THROWS_WITH_AS(
      parse_inputs(R"({"x":{"value":1,"source":"","metric":"diff"}})"),
      doctest::Contains("MalformedInput"), Error);

  // bot/top are lattice bounds, not declarable input metrics
  CHECK_THROWS_WITH_AS(
      parse_inputs(R"({"x":{"value":1,"source":"o","metric":"top"}})"),
      doctest::Contains("UnknownMetric"), Error);

  CHECK_THROWS_WITH_AS(
      parse_inputs(R"({"x":{"value":1,"source":"o","metric":"diff"},
                       "x":{"value":2,"source":"o","metric":"diff"}})"),
      doctest::Contains("DuplicateName"), Error);
}

TEST_CASE("result rendering matches the documented wire format") {
  EvalResult r;
  r.value = Value::tagged(42, SensEnv::single(SourceId("o"), ExtReal(2.0)),
                          Metric::Diff);
  r.steps = 0;
  CHECK(render_result(r) ==
        R"({"value":"42","senv":{"o":2},"metric":"diff","steps":0})");

  EvalResult plain;
  plain.value = Value::tagged(5, SensEnv::zero(), Metric::Disc);
  plain.steps = 0;
  CHECK(render_result(plain) ==
        R"({"value":"5","senv":{},"metric":"disc","steps":0})");

  EvalResult infinite;
  infinite.value = Value::tagged(
      9, SensEnv::single(SourceId("o"), ExtReal::infinity()), Metric::Diff);
  infinite.steps = 2;
  CHECK(render_result(infinite) ==
        R"({"value":"9","senv":{"o":"inf"},"metric":"diff","steps":2})");

  // non-base results fall back to the canonical text rendering
  EvalResult pair_result;
  pair_result.value =
      Value::pair(Value::tagged(1, SensEnv::zero(), Metric::Disc),
                  Value::tagged(2, SensEnv::zero(), Metric::Disc));
  pair_result.steps = 1;
  CHECK(render_result(pair_result) ==
        R"({"value":"<1@{}#disc,2@{}#disc>","senv":{},"metric":null,"steps":1})");

  // fractional sensitivities stay fractional in JSON
  EvalResult frac;
  frac.value = Value::tagged(1, SensEnv::single(SourceId("o"), ExtReal(0.5)),
                             Metric::Diff);
  frac.steps = 0;
  CHECK(render_result(frac) ==
        R"({"value":"1","senv":{"o":0.5},"metric":"diff","steps":0})");
}
