#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "senstrace/ast.hpp"
#include "senstrace/metric.hpp"
#include "senstrace/senv.hpp"

namespace senstrace {

struct Env;

// Runtime value. Only the base case carries analysis information; pairs,
// closures and locations carry none of their own.
struct Value {
  // No default member initializers here: the enclosing variant member needs
  // these types' implicit constructors before the outer class is complete.
  struct TaggedReal {
    double value;
    SensEnv senv;
    Metric metric;
  };
  struct Pair {
    std::shared_ptr<const Value> first, second;
  };
  struct Closure {
    std::string param;
    ExprPtr body;
    std::shared_ptr<const Env> env;
  };
  struct Loc {
    std::size_t index;
  };

  std::variant<TaggedReal, Pair, Closure, Loc> node;

  static Value tagged(double value, SensEnv senv, Metric metric);
  static Value pair(Value first, Value second);
  static Value closure(std::string param, ExprPtr body,
                       std::shared_ptr<const Env> env);
  static Value loc(std::size_t index);

  bool is_tagged_real() const {
    return std::holds_alternative<TaggedReal>(node);
  }
  const TaggedReal &as_tagged_real() const {
    return std::get<TaggedReal>(node);
  }
};

// Lexical environment. Lookup of an unbound name is an error, never a
// default value.
struct Env {
  std::map<std::string, Value> vars;

  const Value &lookup(const std::string &name) const; // UnboundVariable
  bool contains(const std::string &name) const {
    return vars.find(name) != vars.end();
  }
};

using EnvPtr = std::shared_ptr<const Env>;

EnvPtr empty_env();
EnvPtr extend(const EnvPtr &env, const std::string &name, Value v);

// Mutable store, confined to a single evaluation. Allocation is a monotone
// counter (the vector index), which keeps locations equal across paired runs
// of the same program.
class Store {
public:
  std::size_t alloc(Value v); // returns the fresh index
  const Value &read(std::size_t index) const;   // DanglingLocation
  void write(std::size_t index, Value v);        // DanglingLocation
  std::size_t size() const { return cells_.size(); }
  const std::vector<Value> &cells() const { return cells_; }

private:
  std::vector<Value> cells_;
};

// Structural equality; closures compare parameter, body and captured
// environment recursively.
bool value_equal(const Value &a, const Value &b);

// Canonical text rendering: `42@{o:2}#diff`, `<v1,v2>`, `<closure>`, `loc(3)`.
std::string render_value(const Value &v);

} // namespace senstrace
