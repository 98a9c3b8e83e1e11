#pragma once

#include <string>
#include <string_view>

#include "senstrace/ast.hpp"

namespace senstrace {

// Parses the s-expression surface syntax:
//   (+ e e) (scalel e e) (scaler e e) (if0 e e e) (pair e e)
//   (proj 1 e) (proj 2 e) (lam x e) (app e e) (ref e) (read e) (write e e)
// plus numeric literals and identifiers. Whitespace-insensitive; `;` starts
// a line comment. Malformed input raises ParseError with a byte span.
ExprPtr parse_program(std::string_view text);

// Canonical printer; parse_program(print_program(e)) reproduces e exactly.
std::string print_program(const ExprPtr &e);

} // namespace senstrace
