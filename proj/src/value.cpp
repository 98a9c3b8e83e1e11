#include "senstrace/value.hpp"

#include "senstrace/errors.hpp"
#include "senstrace/real_text.hpp"

namespace senstrace {

Value Value::tagged(double value, SensEnv senv, Metric metric) {
  return Value{TaggedReal{value, std::move(senv), metric}};
}

Value Value::pair(Value first, Value second) {
  return Value{Pair{std::make_shared<const Value>(std::move(first)),
                    std::make_shared<const Value>(std::move(second))}};
}

Value Value::closure(std::string param, ExprPtr body,
                     std::shared_ptr<const Env> env) {
  return Value{Closure{std::move(param), std::move(body), std::move(env)}};
}

Value Value::loc(std::size_t index) { return Value{Loc{index}}; }

const Value &Env::lookup(const std::string &name) const {
  auto it = vars.find(name);
  if (it == vars.end()) {
    throw Error(ErrorKind::UnboundVariable, "'" + name + "' is not bound");
  }
  return it->second;
}

EnvPtr empty_env() {
  static const EnvPtr empty = std::make_shared<const Env>();
  return empty;
}

EnvPtr extend(const EnvPtr &env, const std::string &name, Value v) {
  Env next = *env;
  next.vars.insert_or_assign(name, std::move(v));
  return std::make_shared<const Env>(std::move(next));
}

std::size_t Store::alloc(Value v) {
  cells_.push_back(std::move(v));
  return cells_.size() - 1;
}

const Value &Store::read(std::size_t index) const {
  if (index >= cells_.size()) {
    throw Error(ErrorKind::DanglingLocation,
                "read of unallocated location " + std::to_string(index));
  }
  return cells_[index];
}

void Store::write(std::size_t index, Value v) {
  if (index >= cells_.size()) {
    throw Error(ErrorKind::DanglingLocation,
                "write to unallocated location " + std::to_string(index));
  }
  cells_[index] = std::move(v);
}

bool value_equal(const Value &a, const Value &b) {
  if (a.node.index() != b.node.index()) {
    return false;
  }
  return std::visit(
      [&b](const auto &na) -> bool {
        using T = std::decay_t<decltype(na)>;
        const auto &nb = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Value::TaggedReal>) {
          return na.value == nb.value && na.senv == nb.senv &&
                 na.metric == nb.metric;
        } else if constexpr (std::is_same_v<T, Value::Pair>) {
          return value_equal(*na.first, *nb.first) &&
                 value_equal(*na.second, *nb.second);
        } else if constexpr (std::is_same_v<T, Value::Closure>) {
          if (na.param != nb.param || !expr_equal(na.body, nb.body)) {
            return false;
          }
          const auto &va = na.env->vars;
          const auto &vb = nb.env->vars;
          if (va.size() != vb.size()) {
            return false;
          }
          for (auto ia = va.begin(), ib = vb.begin(); ia != va.end();
               ++ia, ++ib) {
            if (ia->first != ib->first || !value_equal(ia->second, ib->second)) {
              return false;
            }
          }
          return true;
        } else {
          static_assert(std::is_same_v<T, Value::Loc>);
          return na.index == nb.index;
        }
      },
      a.node);
}

std::string render_value(const Value &v) {
  return std::visit(
      [](const auto &n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Value::TaggedReal>) {
          return format_real(n.value) + "@" + to_string(n.senv) + "#" +
                 std::string(metric_name(n.metric));
        } else if constexpr (std::is_same_v<T, Value::Pair>) {
          return "<" + render_value(*n.first) + "," + render_value(*n.second) +
                 ">";
        } else if constexpr (std::is_same_v<T, Value::Closure>) {
          return "<closure>";
        } else {
          static_assert(std::is_same_v<T, Value::Loc>);
          return "loc(" + std::to_string(n.index) + ")";
        }
      },
      v.node);
}

} // namespace senstrace
