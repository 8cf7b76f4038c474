#pragma once

#include <string>

#include "zkforge/ast.hpp"

namespace zkforge {

/* Renders a program back to source form. parse_program(pretty_print(p))
 * yields a program structurally equal to p. */
std::string pretty_print(const ast::Program& p);

std::string expr_to_string(const ast::Expr& e);

} // namespace zkforge
