#pragma once

#include <memory>
#include <string>

#include "zkforge/ast.hpp"
#include "zkforge/circuit.hpp"

namespace zkforge {

struct CompileOptions {
    std::shared_ptr<const PrimeField> field;
    bool constraint_assert_disabled = false;
};

/* Lowers a parsed program to the straight-line computation plus the
 * constraint system. Throws CompileError. */
CompiledCircuit compile(const ast::Program& program, const CompileOptions& options);

/* Debug/dump rendering with signal names substituted. */
std::string render_rexpr(const CompiledCircuit& c, const RExpr& e);
std::string render_instr(const CompiledCircuit& c, const Instr& ins);
std::string render_constraint(const CompiledCircuit& c, const Constraint& k);

} // namespace zkforge
