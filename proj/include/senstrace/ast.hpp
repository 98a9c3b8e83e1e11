#pragma once

#include <memory>
#include <string>
#include <variant>

namespace senstrace {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class BinOpKind {
  Plus,   // e + e
  TimesL, // e |x e : left operand is the scalar side
  TimesR, // e x| e : right operand is the scalar side
};

struct VarExpr {
  std::string name;
};
struct RealExpr {
  double value;
};
struct BinOpExpr {
  BinOpKind op;
  ExprPtr lhs, rhs;
};
struct If0Expr {
  ExprPtr guard, then_branch, else_branch;
};
struct PairExpr {
  ExprPtr first, second;
};
struct ProjExpr {
  int index; // 1 or 2
  ExprPtr inner;
};
struct LamExpr {
  std::string param;
  ExprPtr body;
};
struct AppExpr {
  ExprPtr fn, arg;
};
struct RefExpr {
  ExprPtr inner;
};
struct ReadExpr {
  ExprPtr inner;
};
struct WriteExpr {
  ExprPtr target, value;
};

struct Expr {
  std::variant<VarExpr, RealExpr, BinOpExpr, If0Expr, PairExpr, ProjExpr,
               LamExpr, AppExpr, RefExpr, ReadExpr, WriteExpr>
      node;
};

// Construction helpers. These enforce the structural invariants (non-empty
// variable names, projection index in {1,2}) and are the only way tests and
// the parser build programs.
namespace expr {
ExprPtr var(std::string name);
ExprPtr real(double value);
ExprPtr plus(ExprPtr lhs, ExprPtr rhs);
ExprPtr scale_l(ExprPtr scalar, ExprPtr value);
ExprPtr scale_r(ExprPtr value, ExprPtr scalar);
ExprPtr if0(ExprPtr guard, ExprPtr then_branch, ExprPtr else_branch);
ExprPtr pair(ExprPtr first, ExprPtr second);
ExprPtr proj(int index, ExprPtr inner);
ExprPtr lam(std::string param, ExprPtr body);
ExprPtr app(ExprPtr fn, ExprPtr arg);
ExprPtr ref(ExprPtr inner);
ExprPtr read(ExprPtr inner);
ExprPtr write(ExprPtr target, ExprPtr value);
} // namespace expr

bool expr_equal(const Expr &a, const Expr &b);
inline bool expr_equal(const ExprPtr &a, const ExprPtr &b) {
  return expr_equal(*a, *b);
}

} // namespace senstrace
