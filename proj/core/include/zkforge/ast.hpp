#pragma once

#include <memory>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "zkforge/diag.hpp"

namespace zkforge {
namespace ast {

enum class BinOp {
    kAdd, kSub, kMul, kDiv, kIntDiv, kMod, kPow,
    kShl, kShr,
    kLt, kLe, kGt, kGe, kEq, kNe,
    kBitAnd, kBitOr, kBitXor,
    kLAnd, kLOr,
};

enum class UnOp { kNeg, kNot };

const char* bin_op_text(BinOp op);

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class ExprKind {
    kNumber,  // num
    kIdent,   // name
    kMember,  // base . member
    kIndex,   // base [ index ]
    kBin,     // lhs bop rhs
    kUn,      // uop lhs
    kTernary, // cond ? lhs : rhs
    kCall,    // callee ( targs ) ( inputs )
    kArray,   // [ elems ]  (call argument position only)
};

struct Expr {
    ExprKind kind;
    SrcLoc loc;

    mpz_class num;

    std::string name; // ident name / member name / callee

    ExprPtr base; // member base, index base, ternary condition
    ExprPtr index;

    BinOp bop{};
    UnOp uop{};
    ExprPtr lhs, rhs;

    std::vector<ExprPtr> targs;
    std::vector<ExprPtr> inputs;
    std::vector<ExprPtr> elems;
};

ExprPtr clone(const Expr& e);
bool expr_equal(const Expr& a, const Expr& b);

enum class SignalClass { kInput, kOutput, kIntermediate };

/* <-- and <== (the reversed forms are normalized by the parser); = is the
 * var assignment. */
enum class AssignOp { kWeak, kStrong, kVar };

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

enum class StmtKind {
    kSignalDecl,   // signal [input|output] name dims [  <==/<-- init ]
    kVarDecl,      // var name dims [= init]
    kComponentDecl,// component name = callee(targs)
    kAssign,       // lvalue op rhs
    kConstraintEq, // lhs === rhs
    kAssert,       // assert(cond)
    kFor,          // for (init; cond; post) body
    kIf,           // if (cond) then [else els]
    kBlock,        // { body }
};

struct Stmt {
    StmtKind kind;
    SrcLoc loc;

    // declarations (one name per statement; the parser splits lists)
    std::string name;
    std::vector<ExprPtr> dims;
    SignalClass sclass = SignalClass::kIntermediate;
    ExprPtr init;            // optional
    AssignOp init_op{};      // for signal init: kWeak or kStrong
    std::string callee;      // component decl
    std::vector<ExprPtr> targs;

    // assign / constraint / assert
    ExprPtr lhs;
    AssignOp op{};
    ExprPtr rhs;
    ExprPtr cond;

    // control flow
    StmtPtr for_init;
    ExprPtr for_cond;
    StmtPtr for_post;
    std::vector<StmtPtr> body;
    std::vector<StmtPtr> els;
};

bool stmt_equal(const Stmt& a, const Stmt& b);

struct Template {
    std::string name;
    std::vector<std::string> params;
    std::vector<StmtPtr> body;
    SrcLoc loc;
};

struct Program {
    std::vector<Template> templates;
    bool has_main = false;
    std::string main_template;
    std::vector<ExprPtr> main_args;
    SrcLoc main_loc;
    std::string file;
};

bool program_equal(const Program& a, const Program& b);

} // namespace ast
} // namespace zkforge
