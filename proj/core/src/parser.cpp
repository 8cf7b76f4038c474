#include "zkforge/parser.hpp"

#include <fstream>
#include <sstream>

#include "zkforge/lexer.hpp"

namespace zkforge {

using namespace ast;

namespace {

class Parser {
  public:
    Parser(std::vector<Token> toks, std::string file)
        : toks_(std::move(toks)), file_(std::move(file)) {}

    Program parse() {
        Program p;
        p.file = file_;
        while (!at(Tok::kEof)) {
            if (at(Tok::kTemplate)) {
                p.templates.push_back(parse_template());
            } else if (at(Tok::kComponent)) {
                parse_main(p);
            } else {
                fail("expected 'template' or 'component main' at top level");
            }
        }
        if (!p.has_main) fail("no main component");
        return p;
    }

  private:
    std::vector<Token> toks_;
    std::string file_;
    size_t pos_ = 0;

    const Token& cur() const { return toks_[pos_]; }
    bool at(Tok t) const { return cur().kind == t; }
    Token take() { return toks_[pos_++]; }
    [[noreturn]] void fail(const std::string& msg) const {
        throw CompileError(file_, cur().loc, msg);
    }
    Token expect(Tok t, const char* what) {
        if (!at(t)) fail(std::string("expected ") + what);
        return take();
    }
    bool accept(Tok t) {
        if (at(t)) {
            ++pos_;
            return true;
        }
        return false;
    }

    Template parse_template() {
        Template tpl;
        tpl.loc = cur().loc;
        expect(Tok::kTemplate, "'template'");
        tpl.name = expect(Tok::kIdent, "template name").text;
        expect(Tok::kLParen, "'('");
        if (!at(Tok::kRParen)) {
            tpl.params.push_back(expect(Tok::kIdent, "parameter name").text);
            while (accept(Tok::kComma))
                tpl.params.push_back(expect(Tok::kIdent, "parameter name").text);
        }
        expect(Tok::kRParen, "')'");
        expect(Tok::kLBrace, "'{'");
        while (!at(Tok::kRBrace)) parse_stmt_into(tpl.body);
        expect(Tok::kRBrace, "'}'");
        return tpl;
    }

    void parse_main(Program& p) {
        SrcLoc loc = cur().loc;
        expect(Tok::kComponent, "'component'");
        expect(Tok::kMain, "'main'");
        expect(Tok::kAssign, "'='");
        std::string callee = expect(Tok::kIdent, "template name").text;
        expect(Tok::kLParen, "'('");
        std::vector<ExprPtr> args;
        if (!at(Tok::kRParen)) {
            args.push_back(parse_expr());
            while (accept(Tok::kComma)) args.push_back(parse_expr());
        }
        expect(Tok::kRParen, "')'");
        expect(Tok::kSemi, "';'");
        if (p.has_main) throw CompileError(file_, loc, "main component already declared");
        p.has_main = true;
        p.main_template = std::move(callee);
        p.main_args = std::move(args);
        p.main_loc = loc;
    }

    // ---- statements ----

    void parse_stmt_into(std::vector<StmtPtr>& out) {
        switch (cur().kind) {
            case Tok::kSignal: parse_signal_decl(out); return;
            case Tok::kVar: parse_var_decl(out); return;
            case Tok::kComponent: out.push_back(parse_component_decl()); return;
            case Tok::kAssert: out.push_back(parse_assert()); return;
            case Tok::kFor: out.push_back(parse_for()); return;
            case Tok::kIf: out.push_back(parse_if()); return;
            case Tok::kLBrace: out.push_back(parse_block_stmt()); return;
            default: out.push_back(parse_expr_stmt()); return;
        }
    }

    void parse_signal_decl(std::vector<StmtPtr>& out) {
        SrcLoc loc = cur().loc;
        expect(Tok::kSignal, "'signal'");
        SignalClass cls = SignalClass::kIntermediate;
        if (accept(Tok::kInput)) cls = SignalClass::kInput;
        else if (accept(Tok::kOutput)) cls = SignalClass::kOutput;

        std::vector<StmtPtr> decls;
        for (;;) {
            auto s = std::make_unique<Stmt>();
            s->kind = StmtKind::kSignalDecl;
            s->loc = loc;
            s->sclass = cls;
            s->name = expect(Tok::kIdent, "signal name").text;
            while (accept(Tok::kLBracket)) {
                s->dims.push_back(parse_expr());
                expect(Tok::kRBracket, "']'");
            }
            decls.push_back(std::move(s));
            if (!accept(Tok::kComma)) break;
        }
        if (at(Tok::kStrongL) || at(Tok::kWeakL)) {
            if (decls.size() != 1)
                fail("initializer requires a single declared signal");
            decls[0]->init_op = at(Tok::kStrongL) ? AssignOp::kStrong : AssignOp::kWeak;
            take();
            decls[0]->init = parse_expr();
        }
        expect(Tok::kSemi, "';'");
        for (auto& d : decls) out.push_back(std::move(d));
    }

    void parse_var_decl(std::vector<StmtPtr>& out, bool single = false, bool no_semi = false) {
        SrcLoc loc = cur().loc;
        expect(Tok::kVar, "'var'");
        for (;;) {
            auto s = std::make_unique<Stmt>();
            s->kind = StmtKind::kVarDecl;
            s->loc = loc;
            s->name = expect(Tok::kIdent, "variable name").text;
            while (accept(Tok::kLBracket)) {
                s->dims.push_back(parse_expr());
                expect(Tok::kRBracket, "']'");
            }
            if (accept(Tok::kAssign)) s->init = parse_expr();
            out.push_back(std::move(s));
            if (single) break;
            if (!accept(Tok::kComma)) break;
        }
        if (!no_semi) expect(Tok::kSemi, "';'");
    }

    StmtPtr parse_component_decl() {
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::kComponentDecl;
        s->loc = cur().loc;
        expect(Tok::kComponent, "'component'");
        if (at(Tok::kMain)) fail("main component must be declared at top level");
        s->name = expect(Tok::kIdent, "component name").text;
        expect(Tok::kAssign, "'='");
        s->callee = expect(Tok::kIdent, "template name").text;
        expect(Tok::kLParen, "'('");
        if (!at(Tok::kRParen)) {
            s->targs.push_back(parse_expr());
            while (accept(Tok::kComma)) s->targs.push_back(parse_expr());
        }
        expect(Tok::kRParen, "')'");
        expect(Tok::kSemi, "';'");
        return s;
    }

    StmtPtr parse_assert() {
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::kAssert;
        s->loc = cur().loc;
        expect(Tok::kAssert, "'assert'");
        expect(Tok::kLParen, "'('");
        s->cond = parse_expr();
        expect(Tok::kRParen, "')'");
        expect(Tok::kSemi, "';'");
        return s;
    }

    StmtPtr parse_for() {
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::kFor;
        s->loc = cur().loc;
        expect(Tok::kFor, "'for'");
        expect(Tok::kLParen, "'('");
        if (at(Tok::kVar)) {
            std::vector<StmtPtr> init;
            parse_var_decl(init, /*single=*/true, /*no_semi=*/true);
            s->for_init = std::move(init[0]);
            expect(Tok::kSemi, "';'");
        } else {
            s->for_init = parse_simple_assign(/*terminator=*/Tok::kSemi);
        }
        s->for_cond = parse_expr();
        expect(Tok::kSemi, "';'");
        s->for_post = parse_simple_assign(/*terminator=*/Tok::kRParen);
        s->body = parse_stmt_or_block();
        return s;
    }

    StmtPtr parse_if() {
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::kIf;
        s->loc = cur().loc;
        expect(Tok::kIf, "'if'");
        expect(Tok::kLParen, "'('");
        s->cond = parse_expr();
        expect(Tok::kRParen, "')'");
        s->body = parse_stmt_or_block();
        if (accept(Tok::kElse)) s->els = parse_stmt_or_block();
        return s;
    }

    StmtPtr parse_block_stmt() {
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::kBlock;
        s->loc = cur().loc;
        expect(Tok::kLBrace, "'{'");
        while (!at(Tok::kRBrace)) parse_stmt_into(s->body);
        expect(Tok::kRBrace, "'}'");
        return s;
    }

    std::vector<StmtPtr> parse_stmt_or_block() {
        std::vector<StmtPtr> body;
        if (accept(Tok::kLBrace)) {
            while (!at(Tok::kRBrace)) parse_stmt_into(body);
            expect(Tok::kRBrace, "'}'");
        } else {
            parse_stmt_into(body);
        }
        return body;
    }

    /* An assignment without trailing ';', used in for-headers. */
    StmtPtr parse_simple_assign(Tok terminator) {
        ExprPtr e = parse_expr();
        StmtPtr s = finish_assign(std::move(e));
        if (!at(terminator))
            fail(terminator == Tok::kSemi ? "expected ';'" : "expected ')'");
        take();
        return s;
    }

    StmtPtr parse_expr_stmt() {
        ExprPtr e = parse_expr();
        if (at(Tok::kConstraintEq)) {
            auto s = std::make_unique<Stmt>();
            s->kind = StmtKind::kConstraintEq;
            s->loc = take().loc;
            s->lhs = std::move(e);
            s->rhs = parse_expr();
            expect(Tok::kSemi, "';'");
            return s;
        }
        StmtPtr s = finish_assign(std::move(e));
        expect(Tok::kSemi, "';'");
        return s;
    }

    /* Parses the operator-and-rhs part of an assignment whose first
     * expression is already consumed. Normalizes reversed arrows and
     * compound assignments. */
    StmtPtr finish_assign(ExprPtr first) {
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::kAssign;
        s->loc = cur().loc;
        switch (cur().kind) {
            case Tok::kWeakL:
            case Tok::kStrongL: {
                s->op = at(Tok::kWeakL) ? AssignOp::kWeak : AssignOp::kStrong;
                take();
                s->lhs = std::move(first);
                s->rhs = parse_expr();
                break;
            }
            case Tok::kWeakR:
            case Tok::kStrongR: {
                s->op = at(Tok::kWeakR) ? AssignOp::kWeak : AssignOp::kStrong;
                take();
                s->rhs = std::move(first);
                s->lhs = parse_expr();
                break;
            }
            case Tok::kAssign: {
                s->op = AssignOp::kVar;
                take();
                s->lhs = std::move(first);
                s->rhs = parse_expr();
                break;
            }
            case Tok::kPlusEq:
            case Tok::kMinusEq:
            case Tok::kStarEq: {
                BinOp op = at(Tok::kPlusEq)    ? BinOp::kAdd
                           : at(Tok::kMinusEq) ? BinOp::kSub
                                               : BinOp::kMul;
                SrcLoc oploc = take().loc;
                s->op = AssignOp::kVar;
                ExprPtr rhs = parse_expr();
                auto bin = std::make_unique<Expr>();
                bin->kind = ExprKind::kBin;
                bin->loc = oploc;
                bin->bop = op;
                bin->lhs = clone(*first);
                bin->rhs = std::move(rhs);
                s->lhs = std::move(first);
                s->rhs = std::move(bin);
                break;
            }
            case Tok::kPlusPlus: {
                SrcLoc oploc = take().loc;
                s->op = AssignOp::kVar;
                auto one = std::make_unique<Expr>();
                one->kind = ExprKind::kNumber;
                one->loc = oploc;
                one->num = 1;
                auto bin = std::make_unique<Expr>();
                bin->kind = ExprKind::kBin;
                bin->loc = oploc;
                bin->bop = BinOp::kAdd;
                bin->lhs = clone(*first);
                bin->rhs = std::move(one);
                s->lhs = std::move(first);
                s->rhs = std::move(bin);
                break;
            }
            default:
                fail("expected an assignment or constraint operator");
        }
        check_lvalue(*s->lhs);
        return s;
    }

    void check_lvalue(const Expr& e) const {
        switch (e.kind) {
            case ExprKind::kIdent: return;
            case ExprKind::kIndex: check_lvalue(*e.base); return;
            case ExprKind::kMember: check_lvalue(*e.base); return;
            default:
                throw CompileError(file_, e.loc, "expression is not assignable");
        }
    }

    // ---- expressions, loosest binding first ----

    ExprPtr parse_expr() { return parse_ternary(); }

    ExprPtr parse_ternary() {
        ExprPtr cond = parse_lor();
        if (!at(Tok::kQuestion)) return cond;
        auto e = std::make_unique<Expr>();
        e->kind = ExprKind::kTernary;
        e->loc = take().loc;
        e->base = std::move(cond);
        e->lhs = parse_expr();
        expect(Tok::kColon, "':'");
        e->rhs = parse_expr();
        return e;
    }

    ExprPtr parse_binary_chain(ExprPtr (Parser::*next)(),
                               std::initializer_list<std::pair<Tok, BinOp>> ops) {
        ExprPtr lhs = (this->*next)();
        for (;;) {
            bool matched = false;
            for (auto [tok, op] : ops) {
                if (at(tok)) {
                    auto e = std::make_unique<Expr>();
                    e->kind = ExprKind::kBin;
                    e->loc = take().loc;
                    e->bop = op;
                    e->lhs = std::move(lhs);
                    e->rhs = (this->*next)();
                    lhs = std::move(e);
                    matched = true;
                    break;
                }
            }
            if (!matched) return lhs;
        }
    }

    ExprPtr parse_lor() {
        return parse_binary_chain(&Parser::parse_land, {{Tok::kOrOr, BinOp::kLOr}});
    }
    ExprPtr parse_land() {
        return parse_binary_chain(&Parser::parse_bor, {{Tok::kAndAnd, BinOp::kLAnd}});
    }
    ExprPtr parse_bor() {
        return parse_binary_chain(&Parser::parse_bxor, {{Tok::kPipe, BinOp::kBitOr}});
    }
    ExprPtr parse_bxor() {
        return parse_binary_chain(&Parser::parse_band, {{Tok::kCaret, BinOp::kBitXor}});
    }
    ExprPtr parse_band() {
        return parse_binary_chain(&Parser::parse_eq, {{Tok::kAmp, BinOp::kBitAnd}});
    }
    ExprPtr parse_eq() {
        return parse_binary_chain(&Parser::parse_rel,
                                  {{Tok::kEq, BinOp::kEq}, {Tok::kNe, BinOp::kNe}});
    }
    ExprPtr parse_rel() {
        return parse_binary_chain(&Parser::parse_shift,
                                  {{Tok::kLt, BinOp::kLt},
                                   {Tok::kLe, BinOp::kLe},
                                   {Tok::kGt, BinOp::kGt},
                                   {Tok::kGe, BinOp::kGe}});
    }
    ExprPtr parse_shift() {
        return parse_binary_chain(&Parser::parse_add,
                                  {{Tok::kShl, BinOp::kShl}, {Tok::kShr, BinOp::kShr}});
    }
    ExprPtr parse_add() {
        return parse_binary_chain(&Parser::parse_mul,
                                  {{Tok::kPlus, BinOp::kAdd}, {Tok::kMinus, BinOp::kSub}});
    }
    ExprPtr parse_mul() {
        return parse_binary_chain(&Parser::parse_unary,
                                  {{Tok::kStar, BinOp::kMul},
                                   {Tok::kSlash, BinOp::kDiv},
                                   {Tok::kBackslash, BinOp::kIntDiv},
                                   {Tok::kPercent, BinOp::kMod}});
    }

    ExprPtr parse_unary() {
        if (at(Tok::kMinus) || at(Tok::kBang)) {
            auto e = std::make_unique<Expr>();
            e->kind = ExprKind::kUn;
            e->uop = at(Tok::kMinus) ? UnOp::kNeg : UnOp::kNot;
            e->loc = take().loc;
            e->lhs = parse_unary();
            return e;
        }
        return parse_pow();
    }

    /* a ** b, right associative, binding tighter than unary on the left:
     * -a**b parses as -(a**b) while the exponent may itself carry a sign. */
    ExprPtr parse_pow() {
        ExprPtr base = parse_postfix();
        if (!at(Tok::kPow)) return base;
        auto e = std::make_unique<Expr>();
        e->kind = ExprKind::kBin;
        e->bop = BinOp::kPow;
        e->loc = take().loc;
        e->lhs = std::move(base);
        e->rhs = parse_unary();
        return e;
    }

    ExprPtr parse_postfix() {
        ExprPtr e = parse_primary();
        for (;;) {
            if (at(Tok::kLBracket)) {
                auto idx = std::make_unique<Expr>();
                idx->kind = ExprKind::kIndex;
                idx->loc = take().loc;
                idx->base = std::move(e);
                idx->index = parse_expr();
                expect(Tok::kRBracket, "']'");
                e = std::move(idx);
            } else if (at(Tok::kDot)) {
                auto mem = std::make_unique<Expr>();
                mem->kind = ExprKind::kMember;
                mem->loc = take().loc;
                mem->base = std::move(e);
                mem->name = expect(Tok::kIdent, "member name").text;
                e = std::move(mem);
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_primary() {
        if (at(Tok::kNumber)) {
            auto e = std::make_unique<Expr>();
            e->kind = ExprKind::kNumber;
            e->loc = cur().loc;
            e->num = take().num;
            return e;
        }
        if (at(Tok::kIdent)) {
            Token t = take();
            if (at(Tok::kLParen)) {
                // template call: Name(targs)(inputs)
                auto e = std::make_unique<Expr>();
                e->kind = ExprKind::kCall;
                e->loc = t.loc;
                e->name = t.text;
                take();
                if (!at(Tok::kRParen)) {
                    e->targs.push_back(parse_expr());
                    while (accept(Tok::kComma)) e->targs.push_back(parse_expr());
                }
                expect(Tok::kRParen, "')'");
                expect(Tok::kLParen, "input argument list");
                if (!at(Tok::kRParen)) {
                    e->inputs.push_back(parse_expr());
                    while (accept(Tok::kComma)) e->inputs.push_back(parse_expr());
                }
                expect(Tok::kRParen, "')'");
                return e;
            }
            auto e = std::make_unique<Expr>();
            e->kind = ExprKind::kIdent;
            e->loc = t.loc;
            e->name = t.text;
            return e;
        }
        if (at(Tok::kLParen)) {
            take();
            ExprPtr e = parse_expr();
            expect(Tok::kRParen, "')'");
            return e;
        }
        if (at(Tok::kLBracket)) {
            auto e = std::make_unique<Expr>();
            e->kind = ExprKind::kArray;
            e->loc = take().loc;
            if (!at(Tok::kRBracket)) {
                e->elems.push_back(parse_expr());
                while (accept(Tok::kComma)) e->elems.push_back(parse_expr());
            }
            expect(Tok::kRBracket, "']'");
            return e;
        }
        fail("expected an expression");
    }
};

} // namespace

ast::Program parse_program(const std::string& source, const std::string& file) {
    Parser p(lex(source, file), file);
    return p.parse();
}

ast::Program parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CompileError(path, {0, 0}, "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_program(ss.str(), path);
}

} // namespace zkforge
