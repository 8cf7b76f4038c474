#include "zkforge/pretty.hpp"

#include <sstream>

namespace zkforge {
namespace ast {

const char* bin_op_text(BinOp op) {
    switch (op) {
        case BinOp::kAdd: return "+";
        case BinOp::kSub: return "-";
        case BinOp::kMul: return "*";
        case BinOp::kDiv: return "/";
        case BinOp::kIntDiv: return "\\";
        case BinOp::kMod: return "%";
        case BinOp::kPow: return "**";
        case BinOp::kShl: return "<<";
        case BinOp::kShr: return ">>";
        case BinOp::kLt: return "<";
        case BinOp::kLe: return "<=";
        case BinOp::kGt: return ">";
        case BinOp::kGe: return ">=";
        case BinOp::kEq: return "==";
        case BinOp::kNe: return "!=";
        case BinOp::kBitAnd: return "&";
        case BinOp::kBitOr: return "|";
        case BinOp::kBitXor: return "^";
        case BinOp::kLAnd: return "&&";
        case BinOp::kLOr: return "||";
    }
    return "?";
}

ExprPtr clone(const Expr& e) {
    auto c = std::make_unique<Expr>();
    c->kind = e.kind;
    c->loc = e.loc;
    c->num = e.num;
    c->name = e.name;
    c->bop = e.bop;
    c->uop = e.uop;
    if (e.base) c->base = clone(*e.base);
    if (e.index) c->index = clone(*e.index);
    if (e.lhs) c->lhs = clone(*e.lhs);
    if (e.rhs) c->rhs = clone(*e.rhs);
    for (const auto& t : e.targs) c->targs.push_back(clone(*t));
    for (const auto& t : e.inputs) c->inputs.push_back(clone(*t));
    for (const auto& t : e.elems) c->elems.push_back(clone(*t));
    return c;
}

namespace {

bool ptr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    return expr_equal(*a, *b);
}

bool vec_equal(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!expr_equal(*a[i], *b[i])) return false;
    return true;
}

} // namespace

bool expr_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case ExprKind::kNumber: return a.num == b.num;
        case ExprKind::kIdent: return a.name == b.name;
        case ExprKind::kMember: return a.name == b.name && ptr_equal(a.base, b.base);
        case ExprKind::kIndex: return ptr_equal(a.base, b.base) && ptr_equal(a.index, b.index);
        case ExprKind::kBin:
            return a.bop == b.bop && ptr_equal(a.lhs, b.lhs) && ptr_equal(a.rhs, b.rhs);
        case ExprKind::kUn: return a.uop == b.uop && ptr_equal(a.lhs, b.lhs);
        case ExprKind::kTernary:
            return ptr_equal(a.base, b.base) && ptr_equal(a.lhs, b.lhs) &&
                   ptr_equal(a.rhs, b.rhs);
        case ExprKind::kCall:
            return a.name == b.name && vec_equal(a.targs, b.targs) &&
                   vec_equal(a.inputs, b.inputs);
        case ExprKind::kArray: return vec_equal(a.elems, b.elems);
    }
    return false;
}

namespace {

bool stmt_ptr_equal(const StmtPtr& a, const StmtPtr& b) {
    if (!a || !b) return !a && !b;
    return stmt_equal(*a, *b);
}

bool stmt_vec_equal(const std::vector<StmtPtr>& a, const std::vector<StmtPtr>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!stmt_equal(*a[i], *b[i])) return false;
    return true;
}

} // namespace

bool stmt_equal(const Stmt& a, const Stmt& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case StmtKind::kSignalDecl:
            if (a.init || b.init) {
                if (!ptr_equal(a.init, b.init) || a.init_op != b.init_op) return false;
            }
            return a.name == b.name && a.sclass == b.sclass && vec_equal(a.dims, b.dims);
        case StmtKind::kVarDecl:
            return a.name == b.name && vec_equal(a.dims, b.dims) && ptr_equal(a.init, b.init);
        case StmtKind::kComponentDecl:
            return a.name == b.name && a.callee == b.callee && vec_equal(a.targs, b.targs);
        case StmtKind::kAssign:
            return a.op == b.op && ptr_equal(a.lhs, b.lhs) && ptr_equal(a.rhs, b.rhs);
        case StmtKind::kConstraintEq:
            return ptr_equal(a.lhs, b.lhs) && ptr_equal(a.rhs, b.rhs);
        case StmtKind::kAssert: return ptr_equal(a.cond, b.cond);
        case StmtKind::kFor:
            return stmt_ptr_equal(a.for_init, b.for_init) &&
                   ptr_equal(a.for_cond, b.for_cond) &&
                   stmt_ptr_equal(a.for_post, b.for_post) && stmt_vec_equal(a.body, b.body);
        case StmtKind::kIf:
            return ptr_equal(a.cond, b.cond) && stmt_vec_equal(a.body, b.body) &&
                   stmt_vec_equal(a.els, b.els);
        case StmtKind::kBlock: return stmt_vec_equal(a.body, b.body);
    }
    return false;
}

bool program_equal(const Program& a, const Program& b) {
    if (a.templates.size() != b.templates.size()) return false;
    for (size_t i = 0; i < a.templates.size(); ++i) {
        const Template& x = a.templates[i];
        const Template& y = b.templates[i];
        if (x.name != y.name || x.params != y.params || !stmt_vec_equal(x.body, y.body))
            return false;
    }
    if (a.has_main != b.has_main) return false;
    if (a.has_main) {
        if (a.main_template != b.main_template) return false;
        if (!vec_equal(a.main_args, b.main_args)) return false;
    }
    return true;
}

} // namespace ast

namespace {

using namespace ast;

int bin_prec(BinOp op) {
    switch (op) {
        case BinOp::kLOr: return 2;
        case BinOp::kLAnd: return 3;
        case BinOp::kBitOr: return 4;
        case BinOp::kBitXor: return 5;
        case BinOp::kBitAnd: return 6;
        case BinOp::kEq:
        case BinOp::kNe: return 7;
        case BinOp::kLt:
        case BinOp::kLe:
        case BinOp::kGt:
        case BinOp::kGe: return 8;
        case BinOp::kShl:
        case BinOp::kShr: return 9;
        case BinOp::kAdd:
        case BinOp::kSub: return 10;
        case BinOp::kMul:
        case BinOp::kDiv:
        case BinOp::kIntDiv:
        case BinOp::kMod: return 11;
        case BinOp::kPow: return 13;
    }
    return 0;
}

constexpr int kPrecTernary = 1;
constexpr int kPrecUnary = 12;
constexpr int kPrecPostfix = 14;

void print_expr(std::ostream& os, const Expr& e, int min_prec) {
    switch (e.kind) {
        case ExprKind::kNumber:
            os << e.num.get_str();
            return;
        case ExprKind::kIdent:
            os << e.name;
            return;
        case ExprKind::kMember:
            print_expr(os, *e.base, kPrecPostfix);
            os << "." << e.name;
            return;
        case ExprKind::kIndex:
            print_expr(os, *e.base, kPrecPostfix);
            os << "[";
            print_expr(os, *e.index, kPrecTernary);
            os << "]";
            return;
        case ExprKind::kCall: {
            os << e.name << "(";
            for (size_t i = 0; i < e.targs.size(); ++i) {
                if (i) os << ", ";
                print_expr(os, *e.targs[i], kPrecTernary);
            }
            os << ")(";
            for (size_t i = 0; i < e.inputs.size(); ++i) {
                if (i) os << ", ";
                print_expr(os, *e.inputs[i], kPrecTernary);
            }
            os << ")";
            return;
        }
        case ExprKind::kArray: {
            os << "[";
            for (size_t i = 0; i < e.elems.size(); ++i) {
                if (i) os << ", ";
                print_expr(os, *e.elems[i], kPrecTernary);
            }
            os << "]";
            return;
        }
        case ExprKind::kUn: {
            bool parens = kPrecUnary < min_prec;
            if (parens) os << "(";
            os << (e.uop == UnOp::kNeg ? "-" : "!");
            print_expr(os, *e.lhs, kPrecUnary);
            if (parens) os << ")";
            return;
        }
        case ExprKind::kBin: {
            int p = bin_prec(e.bop);
            bool parens = p < min_prec;
            if (parens) os << "(";
            if (e.bop == BinOp::kPow) {
                // right associative, base binds at postfix level
                print_expr(os, *e.lhs, kPrecPostfix);
                os << " ** ";
                print_expr(os, *e.rhs, kPrecUnary);
            } else {
                print_expr(os, *e.lhs, p);
                os << " " << bin_op_text(e.bop) << " ";
                print_expr(os, *e.rhs, p + 1);
            }
            if (parens) os << ")";
            return;
        }
        case ExprKind::kTernary: {
            bool parens = kPrecTernary < min_prec;
            if (parens) os << "(";
            print_expr(os, *e.base, kPrecTernary + 1);
            os << " ? ";
            print_expr(os, *e.lhs, kPrecTernary);
            os << " : ";
            print_expr(os, *e.rhs, kPrecTernary);
            if (parens) os << ")";
            return;
        }
    }
}

void print_stmt(std::ostream& os, const Stmt& s, int indent);

void print_body(std::ostream& os, const std::vector<StmtPtr>& body, int indent) {
    for (const auto& s : body) print_stmt(os, *s, indent);
}

void do_indent(std::ostream& os, int indent) {
    for (int i = 0; i < indent; ++i) os << "    ";
}

void print_decl_head(std::ostream& os, const Stmt& s) {
    os << s.name;
    for (const auto& d : s.dims) {
        os << "[";
        print_expr(os, *d, kPrecTernary);
        os << "]";
    }
}

/* Prints an assignment without indentation or trailing ';' (shared by
 * statement position and for-headers). */
void print_assign(std::ostream& os, const Stmt& s) {
    if (s.kind == StmtKind::kVarDecl) {
        os << "var ";
        print_decl_head(os, s);
        if (s.init) {
            os << " = ";
            print_expr(os, *s.init, kPrecTernary);
        }
        return;
    }
    print_expr(os, *s.lhs, kPrecTernary);
    switch (s.op) {
        case AssignOp::kWeak: os << " <-- "; break;
        case AssignOp::kStrong: os << " <== "; break;
        case AssignOp::kVar: os << " = "; break;
    }
    print_expr(os, *s.rhs, kPrecTernary);
}

void print_stmt(std::ostream& os, const Stmt& s, int indent) {
    do_indent(os, indent);
    switch (s.kind) {
        case StmtKind::kSignalDecl:
            os << "signal ";
            if (s.sclass == SignalClass::kInput) os << "input ";
            if (s.sclass == SignalClass::kOutput) os << "output ";
            print_decl_head(os, s);
            if (s.init) {
                os << (s.init_op == AssignOp::kStrong ? " <== " : " <-- ");
                print_expr(os, *s.init, kPrecTernary);
            }
            os << ";\n";
            return;
        case StmtKind::kVarDecl:
            print_assign(os, s);
            os << ";\n";
            return;
        case StmtKind::kComponentDecl:
            os << "component " << s.name << " = " << s.callee << "(";
            for (size_t i = 0; i < s.targs.size(); ++i) {
                if (i) os << ", ";
                print_expr(os, *s.targs[i], kPrecTernary);
            }
            os << ");\n";
            return;
        case StmtKind::kAssign:
            print_assign(os, s);
            os << ";\n";
            return;
        case StmtKind::kConstraintEq:
            print_expr(os, *s.lhs, kPrecTernary);
            os << " === ";
            print_expr(os, *s.rhs, kPrecTernary);
            os << ";\n";
            return;
        case StmtKind::kAssert:
            os << "assert(";
            print_expr(os, *s.cond, kPrecTernary);
            os << ");\n";
            return;
        case StmtKind::kFor:
            os << "for (";
            print_assign(os, *s.for_init);
            os << "; ";
            print_expr(os, *s.for_cond, kPrecTernary);
            os << "; ";
            print_assign(os, *s.for_post);
            os << ") {\n";
            print_body(os, s.body, indent + 1);
            do_indent(os, indent);
            os << "}\n";
            return;
        case StmtKind::kIf:
            os << "if (";
            print_expr(os, *s.cond, kPrecTernary);
            os << ") {\n";
            print_body(os, s.body, indent + 1);
            do_indent(os, indent);
            if (!s.els.empty()) {
                os << "} else {\n";
                print_body(os, s.els, indent + 1);
                do_indent(os, indent);
            }
            os << "}\n";
            return;
        case StmtKind::kBlock:
            os << "{\n";
            print_body(os, s.body, indent + 1);
            do_indent(os, indent);
            os << "}\n";
            return;
    }
}

} // namespace

std::string pretty_print(const ast::Program& p) {
    std::ostringstream os;
    for (const auto& t : p.templates) {
        os << "template " << t.name << "(";
        for (size_t i = 0; i < t.params.size(); ++i) {
            if (i) os << ", ";
            os << t.params[i];
        }
        os << ") {\n";
        print_body(os, t.body, 1);
        os << "}\n\n";
    }
    if (p.has_main) {
        os << "component main = " << p.main_template << "(";
        for (size_t i = 0; i < p.main_args.size(); ++i) {
            if (i) os << ", ";
            print_expr(os, *p.main_args[i], kPrecTernary);
        }
        os << ");\n";
    }
    return os.str();
}

std::string expr_to_string(const ast::Expr& e) {
    std::ostringstream os;
    print_expr(os, e, kPrecTernary);
    return os.str();
}

} // namespace zkforge
