#include "senstrace/eval.hpp"

#include <cmath>
#include <utility>
#include <variant>
#include <vector>

#include "senstrace/errors.hpp"

namespace senstrace {

namespace {

std::string describe_shape(const Value &v) {
  return std::visit(
      [](const auto &n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Value::TaggedReal>) {
          return "tagged real";
        } else if constexpr (std::is_same_v<T, Value::Pair>) {
          return "pair";
        } else if constexpr (std::is_same_v<T, Value::Closure>) {
          return "closure";
        } else {
          return "location";
        }
      },
      v.node);
}

const Value::TaggedReal &require_real(const Value &v, const char *where) {
  if (!v.is_tagged_real()) {
    throw Error(ErrorKind::TypeMismatch, std::string(where) +
                                             " expected a real, got a " +
                                             describe_shape(v));
  }
  return v.as_tagged_real();
}

// Scaling ops generalize the Times Respects lemma, which only holds for the
// magnitude of the coefficient; a signed coefficient flips the difference
// without shrinking it.
ExtReal scale_coefficient(double scalar) { return ExtReal(std::abs(scalar)); }

// Continuation frames for the explicit evaluation stack.
struct BinOpRhs {
  BinOpKind op;
  ExprPtr rhs;
  EnvPtr env;
};
struct BinOpCombine {
  BinOpKind op;
  Value lhs;
};
struct If0Branch {
  ExprPtr then_branch, else_branch;
  EnvPtr env;
};
struct PairRhs {
  ExprPtr rhs;
  EnvPtr env;
};
struct PairCombine {
  Value first;
};
struct ProjSelect {
  int index;
};
struct AppArg {
  ExprPtr arg;
  EnvPtr env;
};
struct AppCall {
  Value fn;
};
struct RefAlloc {};
struct ReadDeref {};
struct WriteRhs {
  ExprPtr value;
  EnvPtr env;
};
struct WriteStore {
  std::size_t loc;
};

using Frame =
    std::variant<BinOpRhs, BinOpCombine, If0Branch, PairRhs, PairCombine,
                 ProjSelect, AppArg, AppCall, RefAlloc, ReadDeref, WriteRhs,
                 WriteStore>;

struct Machine {
  const EvalOptions &opts;
  Store store;
  std::uint64_t steps = 0;
  std::vector<Frame> stack;

  // Current control: an expression to evaluate under env, or a value that
  // has just been produced.
  ExprPtr control_expr;
  EnvPtr control_env;
  Value produced;
  bool has_value = false;

  explicit Machine(const EvalOptions &o, Store s, ExprPtr e, EnvPtr env)
      : opts(o), store(std::move(s)), control_expr(std::move(e)),
        control_env(std::move(env)) {}

  void push(Frame f) {
    if (stack.size() >= opts.max_depth) {
      throw Error(ErrorKind::DepthExceeded,
                  "evaluation exceeded " + std::to_string(opts.max_depth) +
                      " nested frames");
    }
    stack.push_back(std::move(f));
  }

  void to_eval(ExprPtr e, EnvPtr env) {
    control_expr = std::move(e);
    control_env = std::move(env);
    has_value = false;
  }

  void to_value(Value v) {
    produced = std::move(v);
    has_value = true;
  }

  void step_expr() {
    const Expr &e = *control_expr;
    std::visit(
        [this](const auto &n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, VarExpr>) {
            to_value(control_env->lookup(n.name));
          } else if constexpr (std::is_same_v<T, RealExpr>) {
            to_value(Value::tagged(n.value, SensEnv::zero(), Metric::Disc));
          } else if constexpr (std::is_same_v<T, LamExpr>) {
            to_value(Value::closure(n.param, n.body, control_env));
          } else if constexpr (std::is_same_v<T, BinOpExpr>) {
            push(BinOpRhs{n.op, n.rhs, control_env});
            to_eval(n.lhs, control_env);
          } else if constexpr (std::is_same_v<T, If0Expr>) {
            push(If0Branch{n.then_branch, n.else_branch, control_env});
            to_eval(n.guard, control_env);
          } else if constexpr (std::is_same_v<T, PairExpr>) {
            push(PairRhs{n.second, control_env});
            to_eval(n.first, control_env);
          } else if constexpr (std::is_same_v<T, ProjExpr>) {
            push(ProjSelect{n.index});
            to_eval(n.inner, control_env);
          } else if constexpr (std::is_same_v<T, AppExpr>) {
            push(AppArg{n.arg, control_env});
            to_eval(n.fn, control_env);
          } else if constexpr (std::is_same_v<T, RefExpr>) {
            push(RefAlloc{});
            to_eval(n.inner, control_env);
          } else if constexpr (std::is_same_v<T, ReadExpr>) {
            push(ReadDeref{});
            to_eval(n.inner, control_env);
          } else {
            static_assert(std::is_same_v<T, WriteExpr>);
            push(WriteRhs{n.value, control_env});
            to_eval(n.target, control_env);
          }
        },
        e.node);
  }

  Value combine_binop(BinOpKind op, const Value &lhs, const Value &rhs) {
    switch (op) {
    case BinOpKind::Plus: {
      const auto &a = require_real(lhs, "+");
      const auto &b = require_real(rhs, "+");
      SensEnv senv = opts.mutation == SemanticMutation::PlusDropsSenv
                         ? a.senv
                         : senv_add(a.senv, b.senv);
      Metric m = opts.mutation == SemanticMutation::JoinAsMeet
                     ? metric_meet(a.metric, b.metric)
                     : metric_join(a.metric, b.metric);
      return Value::tagged(a.value + b.value, std::move(senv), m);
    }
    case BinOpKind::TimesL: {
      const auto &scalar = require_real(lhs, "scalel");
      const auto &sensitive = require_real(rhs, "scalel");
      if (!scalar.senv.is_zero() &&
          opts.mutation != SemanticMutation::SkipScalarZCheck) {
        throw Error(ErrorKind::SensitiveScalar,
                    "scalar side of scalel carries sensitivity " +
                        to_string(scalar.senv));
      }
      SensEnv senv = opts.mutation == SemanticMutation::TimesNoScale
                         ? sensitive.senv
                         : senv_scale(scale_coefficient(scalar.value),
                                      sensitive.senv);
      return Value::tagged(scalar.value * sensitive.value, std::move(senv),
                           sensitive.metric);
    }
    case BinOpKind::TimesR: {
      const auto &sensitive = require_real(lhs, "scaler");
      const auto &scalar = require_real(rhs, "scaler");
      if (!scalar.senv.is_zero() &&
          opts.mutation != SemanticMutation::SkipScalarZCheck) {
        throw Error(ErrorKind::SensitiveScalar,
                    "scalar side of scaler carries sensitivity " +
                        to_string(scalar.senv));
      }
      SensEnv senv = opts.mutation == SemanticMutation::TimesNoScale
                         ? sensitive.senv
                         : senv_scale(scale_coefficient(scalar.value),
                                      sensitive.senv);
      return Value::tagged(sensitive.value * scalar.value, std::move(senv),
                           sensitive.metric);
    }
    }
    throw Error(ErrorKind::TypeMismatch, "unknown binary operator");
  }

  // Applies the produced value to the top frame.
  void step_value() {
    Frame frame = std::move(stack.back());
    stack.pop_back();
    Value v = std::move(produced);
    std::visit(
        [this, &v](auto &f) {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, BinOpRhs>) {
            push(BinOpCombine{f.op, std::move(v)});
            to_eval(f.rhs, f.env);
          } else if constexpr (std::is_same_v<T, BinOpCombine>) {
            to_value(combine_binop(f.op, f.lhs, v));
          } else if constexpr (std::is_same_v<T, If0Branch>) {
            const auto &guard = require_real(v, "if0 guard");
            if (!guard.senv.is_zero() &&
                opts.mutation != SemanticMutation::SkipGuardZCheck) {
              throw Error(ErrorKind::SensitiveGuard,
                          "if0 guard carries sensitivity " +
                              to_string(guard.senv));
            }
            to_eval(guard.value == 0.0 ? f.then_branch : f.else_branch, f.env);
          } else if constexpr (std::is_same_v<T, PairRhs>) {
            push(PairCombine{std::move(v)});
            to_eval(f.rhs, f.env);
          } else if constexpr (std::is_same_v<T, PairCombine>) {
            to_value(Value::pair(std::move(f.first), std::move(v)));
          } else if constexpr (std::is_same_v<T, ProjSelect>) {
            if (!std::holds_alternative<Value::Pair>(v.node)) {
              throw Error(ErrorKind::TypeMismatch,
                          "proj expected a pair, got a " + describe_shape(v));
            }
            const auto &p = std::get<Value::Pair>(v.node);
            to_value(f.index == 1 ? *p.first : *p.second);
          } else if constexpr (std::is_same_v<T, AppArg>) {
            if (!std::holds_alternative<Value::Closure>(v.node)) {
              throw Error(ErrorKind::TypeMismatch,
                          "application of a non-function " + describe_shape(v));
            }
            push(AppCall{std::move(v)});
            to_eval(f.arg, f.env);
          } else if constexpr (std::is_same_v<T, AppCall>) {
            const auto &c = std::get<Value::Closure>(f.fn.node);
            steps += 1;
            to_eval(c.body, extend(c.env, c.param, std::move(v)));
          } else if constexpr (std::is_same_v<T, RefAlloc>) {
            to_value(Value::loc(store.alloc(std::move(v))));
          } else if constexpr (std::is_same_v<T, ReadDeref>) {
            if (!std::holds_alternative<Value::Loc>(v.node)) {
              throw Error(ErrorKind::TypeMismatch,
                          "read expected a location, got a " +
                              describe_shape(v));
            }
            to_value(store.read(std::get<Value::Loc>(v.node).index));
          } else if constexpr (std::is_same_v<T, WriteRhs>) {
            if (!std::holds_alternative<Value::Loc>(v.node)) {
              throw Error(ErrorKind::TypeMismatch,
                          "write expected a location, got a " +
                              describe_shape(v));
            }
            push(WriteStore{std::get<Value::Loc>(v.node).index});
            to_eval(f.value, f.env);
          } else {
            static_assert(std::is_same_v<T, WriteStore>);
            store.write(f.loc, v);
            to_value(std::move(v)); // write returns the written value
          }
        },
        frame);
  }

  EvalResult run() {
    while (true) {
      if (has_value) {
        if (stack.empty()) {
          return EvalResult{std::move(store), std::move(produced), steps};
        }
        step_value();
      } else {
        step_expr();
      }
    }
  }
};

} // namespace

EvalResult eval(const EnvPtr &env, Store store, const ExprPtr &e,
                const EvalOptions &opts) {
  Machine machine(opts, std::move(store), e, env);
  return machine.run();
}

EvalResult eval_entry(const InputMap &inputs, const ExprPtr &program,
                      const EvalOptions &opts) {
  Env env;
  for (const auto &[name, binding] : inputs) {
    env.vars.insert_or_assign(
        name, Value::tagged(binding.value,
                            SensEnv::single(binding.source, ExtReal(1.0)),
                            binding.metric));
  }
  return eval(std::make_shared<const Env>(std::move(env)), Store{}, program,
              opts);
}

} // namespace senstrace
