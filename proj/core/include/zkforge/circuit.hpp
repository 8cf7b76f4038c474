#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "zkforge/ast.hpp"
#include "zkforge/field.hpp"

namespace zkforge {

struct RExpr;
using RExprPtr = std::shared_ptr<const RExpr>;

/* Runtime expression. Nodes are immutable and may be shared (symbolic
 * unfolding of vars reuses subtrees), so the structure is a DAG. */
enum class RKind { kConst, kSlot, kBin, kUn, kCond, kPow, kIndexLoad };

struct RExpr {
    RKind kind;
    FieldElement cval;           // kConst
    int slot = -1;               // kSlot
    ast::BinOp bop{};            // kBin
    ast::UnOp uop{};             // kUn
    mpz_class exp;               // kPow (compile-time exponent)
    int base_slot = -1;          // kIndexLoad: first slot of the array
    std::vector<int> dims;       // kIndexLoad: per-dimension extents
    std::vector<RExprPtr> kids;  // kBin 2, kUn 1, kCond 3, kPow 1, kIndexLoad one per dim
};

enum class InstrKind { kAssign, kAssert, kAssertEq };

struct Instr {
    InstrKind kind;
    int target = -1;    // kAssign
    bool weak = false;  // kAssign: <-- rather than <==
    RExprPtr rhs;       // value / assert condition / left side of ===
    RExprPtr rhs2;      // right side of ===
    /* For ===: the input slot when that side is a bare input reference,
     * else -1. */
    int bare_input_lhs = -1;
    int bare_input_rhs = -1;
    SrcLoc loc;
    std::string component;               // instance path, e.g. main.n2b
    std::vector<std::string> templates;  // template chain, outermost first
};

/* none (-1,-1) | linear (i,-1) | quadratic (i,j) with i <= j */
struct Monomial {
    int i = -1;
    int j = -1;
    auto operator<=>(const Monomial&) const = default;
};

/* Degree <= 2 polynomial over the signals in normal form (left minus right,
 * zero coefficients dropped, terms sorted). The constraint is p = 0. */
struct Constraint {
    std::vector<std::pair<Monomial, FieldElement>> terms;
    SrcLoc loc;
    std::string component;
    std::vector<std::string> templates;
};

struct SignalLayout {
    int n = 0;  // inputs,        slots [0, n)
    int k = 0;  // intermediates, slots [n, n+k)
    int m = 0;  // outputs,       slots [n+k, n+k+m)
    std::vector<std::string> names;  // size n+k+m
    int total() const { return n + k + m; }
};

/* Straight-line evaluation program for one instruction's expression:
 * registers are computed in order, each shared node once. Ternaries are
 * lazy, so they compile to conditional jumps rather than eager kids. */
enum class TapeKind {
    kConst, kSlot, kBin, kUn, kPow, kIndexLoad,
    kCopy,        // dst = reg a
    kJump,        // pc = jt
    kJumpIfZero,  // if reg a == 0 then pc = jt
};

struct TapeOp {
    TapeKind kind;
    ast::BinOp bop{};
    ast::UnOp uop{};
    int dst = -1;
    int a = -1, b = -1;  // kid registers
    int jt = -1;         // jump target (op index)
    FieldElement cval;
    mpz_class exp;
    int slot = -1;
    int base_slot = -1;
    std::vector<int> dims;
    std::vector<int> idx_regs;
    /* Operator occurrence index within the owning instruction, assigned to
     * binary operators in emission order; -1 elsewhere. */
    int occ = -1;
};

struct CompiledRhs {
    std::vector<TapeOp> ops;
    int result = -1;
    int num_regs = 0;
};

struct CompiledCircuit {
    std::shared_ptr<const PrimeField> field;
    SignalLayout layout;
    std::vector<Instr> instrs;
    std::vector<Constraint> constraints;
    std::vector<CompiledRhs> tape1;  // per instruction: rhs / condition / === left
    std::vector<CompiledRhs> tape2;  // per instruction: === right
    int max_regs = 0;
    /* Extents of every array that is subscripted with a runtime index
     * anywhere in the program. */
    std::vector<int> subscript_dims;
    std::string name;  // main template name
    std::string file;
    bool constraint_assert_disabled = false;
};

/* Evaluates a constraint polynomial over a full assignment (slot order). */
FieldElement eval_constraint(const PrimeField& f, const Constraint& c,
                             const std::vector<FieldElement>& assignment);

/* Shared operator semantics for compile-time folding and execution.
 * Throws DivisionByZero for /, \ and % with a zero right operand. */
FieldElement eval_bin_op(const PrimeField& f, ast::BinOp op, const FieldElement& a,
                         const FieldElement& b);
FieldElement eval_un_op(const PrimeField& f, ast::UnOp op, const FieldElement& a);
bool truthy(const FieldElement& v);

} // namespace zkforge
