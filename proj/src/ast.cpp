#include "senstrace/ast.hpp"

#include <stdexcept>

namespace senstrace {
namespace expr {

namespace {
ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }
} // namespace

ExprPtr var(std::string name) {
  if (name.empty()) {
    throw std::invalid_argument("variable name must be non-empty");
  }
  return make(Expr{VarExpr{std::move(name)}});
}

ExprPtr real(double value) { return make(Expr{RealExpr{value}}); }

ExprPtr plus(ExprPtr lhs, ExprPtr rhs) {
  return make(Expr{BinOpExpr{BinOpKind::Plus, std::move(lhs), std::move(rhs)}});
}

ExprPtr scale_l(ExprPtr scalar, ExprPtr value) {
  return make(
      Expr{BinOpExpr{BinOpKind::TimesL, std::move(scalar), std::move(value)}});
}

ExprPtr scale_r(ExprPtr value, ExprPtr scalar) {
  return make(
      Expr{BinOpExpr{BinOpKind::TimesR, std::move(value), std::move(scalar)}});
}

ExprPtr if0(ExprPtr guard, ExprPtr then_branch, ExprPtr else_branch) {
  return make(Expr{If0Expr{std::move(guard), std::move(then_branch),
                           std::move(else_branch)}});
}

ExprPtr pair(ExprPtr first, ExprPtr second) {
  return make(Expr{PairExpr{std::move(first), std::move(second)}});
}

ExprPtr proj(int index, ExprPtr inner) {
  if (index != 1 && index != 2) {
    throw std::invalid_argument("projection index must be 1 or 2");
  }
  return make(Expr{ProjExpr{index, std::move(inner)}});
}

ExprPtr lam(std::string param, ExprPtr body) {
  if (param.empty()) {
    throw std::invalid_argument("parameter name must be non-empty");
  }
  return make(Expr{LamExpr{std::move(param), std::move(body)}});
}

ExprPtr app(ExprPtr fn, ExprPtr arg) {
  return make(Expr{AppExpr{std::move(fn), std::move(arg)}});
}

ExprPtr ref(ExprPtr inner) { return make(Expr{RefExpr{std::move(inner)}}); }

ExprPtr read(ExprPtr inner) { return make(Expr{ReadExpr{std::move(inner)}}); }

ExprPtr write(ExprPtr target, ExprPtr value) {
  return make(Expr{WriteExpr{std::move(target), std::move(value)}});
}

} // namespace expr

bool expr_equal(const Expr &a, const Expr &b) {
  if (a.node.index() != b.node.index()) {
    return false;
  }
  return std::visit(
      [&b](const auto &na) -> bool {
        using T = std::decay_t<decltype(na)>;
        const auto &nb = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, VarExpr>) {
          return na.name == nb.name;
        } else if constexpr (std::is_same_v<T, RealExpr>) {
          return na.value == nb.value;
        } else if constexpr (std::is_same_v<T, BinOpExpr>) {
          return na.op == nb.op && expr_equal(na.lhs, nb.lhs) &&
                 expr_equal(na.rhs, nb.rhs);
        } else if constexpr (std::is_same_v<T, If0Expr>) {
          return expr_equal(na.guard, nb.guard) &&
                 expr_equal(na.then_branch, nb.then_branch) &&
                 expr_equal(na.else_branch, nb.else_branch);
        } else if constexpr (std::is_same_v<T, PairExpr>) {
          return expr_equal(na.first, nb.first) &&
                 expr_equal(na.second, nb.second);
        } else if constexpr (std::is_same_v<T, ProjExpr>) {
          return na.index == nb.index && expr_equal(na.inner, nb.inner);
        } else if constexpr (std::is_same_v<T, LamExpr>) {
          return na.param == nb.param && expr_equal(na.body, nb.body);
        } else if constexpr (std::is_same_v<T, AppExpr>) {
          return expr_equal(na.fn, nb.fn) && expr_equal(na.arg, nb.arg);
        } else if constexpr (std::is_same_v<T, RefExpr>) {
          return expr_equal(na.inner, nb.inner);
        } else if constexpr (std::is_same_v<T, ReadExpr>) {
          return expr_equal(na.inner, nb.inner);
        } else {
          static_assert(std::is_same_v<T, WriteExpr>);
          return expr_equal(na.target, nb.target) &&
                 expr_equal(na.value, nb.value);
        }
      },
      a.node);
}

} // namespace senstrace
