#include "zkforge/compiler.hpp"

#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>

namespace zkforge {

using namespace ast;

namespace {

constexpr long long kMaxInstrs = 10'000'000;
constexpr long long kMaxSteps = 10'000'000;
constexpr int kMaxInlineDepth = 512;

struct ComponentInst;

struct SignalInfo {
    int base = -1;  // internal slot id of element 0
    std::vector<int> dims;
    int flat = 1;
    SignalClass cls = SignalClass::kIntermediate;
    std::string qualname;
    std::vector<bool> assigned;
    ComponentInst* owner = nullptr;  // set for sub-component ports
};

struct PortDecl {
    std::string name;
    std::vector<int> dims;
    int flat = 1;
    SignalClass cls;
};

struct ComponentInst {
    std::string path;
    const Template* tpl = nullptr;
    std::vector<FieldElement> targs;
    std::vector<PortDecl> inputs, outputs;
    std::map<std::string, SignalInfo*> ports;
    int wires_expected = 0;
    int wires_done = 0;
    bool inlined = false;
    std::vector<std::string> chain;
    SrcLoc loc;
};

struct CValue {
    enum class Kind { kConst, kSym, kArray, kComp };
    Kind kind = Kind::kConst;
    FieldElement c;
    RExprPtr sym;
    std::vector<CValue> arr;
    int prov_base = -1;  // internal base slot when this is a signal array slice
    std::vector<int> prov_dims;
    ComponentInst* comp = nullptr;
};

struct Frame {
    std::map<std::string, FieldElement> params;
    std::map<std::string, SignalInfo*> signals;
    std::map<std::string, ComponentInst*> comps;
    std::vector<std::map<std::string, CValue>> vars;
    std::map<std::string, SignalInfo*> pending_ports;
    std::string path;
    std::vector<std::string> chain;
    int depth = 0;
};

using Poly = std::map<Monomial, FieldElement>;

class Lowerer {
  public:
    Lowerer(const Program& prog, const CompileOptions& opt)
        : prog_(prog), opt_(opt), F(*opt.field) {
        for (const auto& t : prog.templates) {
            if (!templates_.emplace(t.name, &t).second)
                throw CompileError(prog_.file, t.loc, "template '" + t.name + "' redefined");
        }
    }

    CompiledCircuit run() {
        const Template* main_tpl = find_template(prog_.main_template, prog_.main_loc);
        std::vector<FieldElement> targs;
        Frame empty;
        empty.vars.emplace_back();
        for (const auto& a : prog_.main_args)
            targs.push_back(require_const(lower_value(*a, empty), a->loc,
                                          "main template argument"));
        if (targs.size() != main_tpl->params.size())
            throw CompileError(prog_.file, prog_.main_loc,
                               "main expects " + std::to_string(main_tpl->params.size()) +
                                   " template argument(s)");

        Frame f;
        f.path = "main";
        f.chain = {main_tpl->name};
        f.vars.emplace_back();
        for (size_t i = 0; i < targs.size(); ++i) f.params[main_tpl->params[i]] = targs[i];
        lower_body(main_tpl->body, f);

        return finalize(main_tpl->name);
    }

  private:
    const Program& prog_;
    CompileOptions opt_;
    const PrimeField& F;
    std::map<std::string, const Template*> templates_;
    std::deque<SignalInfo> sig_store_;
    std::deque<ComponentInst> inst_store_;
    std::vector<std::pair<std::string, SignalClass>> slots_;  // internal id order
    std::vector<Instr> instrs_;
    std::vector<Constraint> constraints_;
    std::vector<int> subscript_dims_;
    std::map<int, RExprPtr> slot_nodes_;
    long long steps_ = 0;
    int inline_depth_ = 0;
    int anon_counter_ = 0;

    [[noreturn]] void err(SrcLoc loc, const std::string& msg) const {
        throw CompileError(prog_.file, loc, msg);
    }

    const Template* find_template(const std::string& name, SrcLoc loc) const {
        auto it = templates_.find(name);
        if (it == templates_.end()) err(loc, "unknown template '" + name + "'");
        return it->second;
    }

    // ---- expression node construction ----

    RExprPtr mk_const(FieldElement v) {
        auto n = std::make_shared<RExpr>();
        n->kind = RKind::kConst;
        n->cval = std::move(v);
        return n;
    }

    RExprPtr mk_slot(int slot) {
        auto it = slot_nodes_.find(slot);
        if (it != slot_nodes_.end()) return it->second;
        auto n = std::make_shared<RExpr>();
        n->kind = RKind::kSlot;
        n->slot = slot;
        slot_nodes_[slot] = n;
        return n;
    }

    static RExprPtr node_of(const CValue& v) {
        return v.kind == CValue::Kind::kConst
                   ? nullptr
                   : v.sym;  // caller handles const via mk_const
    }

    RExprPtr sym_of(const CValue& v) {
        if (v.kind == CValue::Kind::kConst) return mk_const(v.c);
        return v.sym;
    }

    // ---- compile-time helpers ----

    FieldElement require_const(const CValue& v, SrcLoc loc, const char* what) const {
        if (v.kind != CValue::Kind::kConst)
            throw CompileError(prog_.file, loc,
                               std::string(what) + " must be a compile-time constant");
        return v.c;
    }

    int to_extent(const FieldElement& v, SrcLoc loc) const {
        mpz_class z = v.to_mpz();
        if (z > 1'000'000) err(loc, "array dimension too large");
        return static_cast<int>(z.get_ui());
    }

    // ---- allocation ----

    static void append_suffix(std::string& s, const std::vector<int>& dims, int flat_idx) {
        // row-major unflatten
        std::vector<int> idx(dims.size());
        for (size_t d = dims.size(); d-- > 0;) {
            idx[d] = flat_idx % dims[d];
            flat_idx /= dims[d];
        }
        for (int v : idx) s += "[" + std::to_string(v) + "]";
    }

    SignalInfo* alloc_signal(const std::string& qualname, std::vector<int> dims,
                             SignalClass port_cls, SignalClass slot_cls,
                             ComponentInst* owner) {
        int flat = 1;
        for (int d : dims) flat *= d;
        sig_store_.push_back({});
        SignalInfo* info = &sig_store_.back();
        info->base = static_cast<int>(slots_.size());
        info->dims = std::move(dims);
        info->flat = flat;
        info->cls = port_cls;
        info->qualname = qualname;
        info->assigned.assign(static_cast<size_t>(flat), false);
        info->owner = owner;
        for (int i = 0; i < flat; ++i) {
            std::string nm = qualname;
            if (!info->dims.empty()) append_suffix(nm, info->dims, i);
            slots_.emplace_back(std::move(nm), slot_cls);
        }
        return info;
    }

    // ---- instruction emission ----

    void emit(Instr ins, const Frame& f, SrcLoc loc) {
        if (static_cast<long long>(instrs_.size()) >= kMaxInstrs)
            err(loc, "program exceeds the unrolled instruction limit");
        ins.loc = loc;
        ins.component = f.path;
        ins.templates = f.chain;
        instrs_.push_back(std::move(ins));
    }

    void add_constraint(Poly p, const Frame& f, SrcLoc loc) {
        Constraint c;
        for (auto& [m, coeff] : p)
            if (!coeff.is_zero()) c.terms.emplace_back(m, coeff);
        c.loc = loc;
        c.component = f.path;
        c.templates = f.chain;
        constraints_.push_back(std::move(c));
    }

    // ---- polynomial conversion ----

    Poly poly_scale(const Poly& p, const FieldElement& s) const {
        Poly r;
        if (s.is_zero()) return r;
        for (const auto& [m, c] : p) r[m] = F.mul(c, s);
        return r;
    }

    void poly_acc(Poly& into, const Poly& p, bool negate) const {
        for (const auto& [m, c] : p) {
            auto it = into.find(m);
            FieldElement v = negate ? F.neg(c) : c;
            if (it == into.end()) {
                into[m] = v;
            } else {
                it->second = F.add(it->second, v);
                if (it->second.is_zero()) into.erase(it);
            }
        }
    }

    static int mono_degree(const Monomial& m) { return (m.i >= 0 ? 1 : 0) + (m.j >= 0 ? 1 : 0); }

    Poly poly_mul(const Poly& a, const Poly& b, SrcLoc loc) const {
        Poly r;
        for (const auto& [ma, ca] : a) {
            for (const auto& [mb, cb] : b) {
                int deg = mono_degree(ma) + mono_degree(mb);
                if (deg > 2)
                    err(loc, "constraint degree exceeds 2");
                Monomial m;
                // merge the at most two variables
                std::vector<int> vs;
                if (ma.i >= 0) vs.push_back(ma.i);
                if (ma.j >= 0) vs.push_back(ma.j);
                if (mb.i >= 0) vs.push_back(mb.i);
                if (mb.j >= 0) vs.push_back(mb.j);
                if (vs.size() == 1) {
                    m.i = vs[0];
                } else if (vs.size() == 2) {
                    m.i = std::min(vs[0], vs[1]);
                    m.j = std::max(vs[0], vs[1]);
                }
                FieldElement c = F.mul(ca, cb);
                auto it = r.find(m);
                if (it == r.end()) {
                    if (!c.is_zero()) r[m] = c;
                } else {
                    it->second = F.add(it->second, c);
                    if (it->second.is_zero()) r.erase(it);
                }
            }
        }
        return r;
    }

    /* Lowers a runtime expression into a quadratic polynomial; rejects
     * anything that is not expressible as one. */
    Poly to_poly(const RExpr& e, SrcLoc loc) const {
        switch (e.kind) {
            case RKind::kConst: {
                Poly p;
                if (!e.cval.is_zero()) p[{}] = e.cval;
                return p;
            }
            case RKind::kSlot: {
                Poly p;
                p[{e.slot, -1}] = F.one();
                return p;
            }
            case RKind::kUn: {
                if (e.uop == UnOp::kNeg) return poly_scale(to_poly(*e.kids[0], loc), F.neg(F.one()));
                err(loc, "operator '!' is not allowed in constraints");
            }
            case RKind::kPow: {
                if (e.exp == 0) {
                    Poly p;
                    p[{}] = F.one();
                    return p;
                }
                Poly base = to_poly(*e.kids[0], loc);
                if (e.exp == 1) return base;
                if (e.exp == 2) return poly_mul(base, base, loc);
                err(loc, "constraint degree exceeds 2");
            }
            case RKind::kBin: {
                switch (e.bop) {
                    case BinOp::kAdd: {
                        Poly p = to_poly(*e.kids[0], loc);
                        poly_acc(p, to_poly(*e.kids[1], loc), false);
                        return p;
                    }
                    case BinOp::kSub: {
                        Poly p = to_poly(*e.kids[0], loc);
                        poly_acc(p, to_poly(*e.kids[1], loc), true);
                        return p;
                    }
                    case BinOp::kMul:
                        return poly_mul(to_poly(*e.kids[0], loc), to_poly(*e.kids[1], loc), loc);
                    case BinOp::kDiv: {
                        Poly d = to_poly(*e.kids[1], loc);
                        if (d.empty()) err(loc, "division by zero in a constraint");
                        if (d.size() != 1 || d.begin()->first != Monomial{})
                            err(loc, "division by a signal is not allowed in constraints");
                        return poly_scale(to_poly(*e.kids[0], loc), F.inv(d.begin()->second));
                    }
                    default:
                        err(loc, std::string("operator '") + bin_op_text(e.bop) +
                                     "' is not allowed in constraints");
                }
            }
            default:
                err(loc, "expression is not expressible as a quadratic constraint");
        }
    }

    // ---- pre-scan of template ports ----

    void scan_ports(const Template* tpl, const std::vector<FieldElement>& targs,
                    const std::string& path, const std::vector<std::string>& chain,
                    SrcLoc loc, std::vector<PortDecl>& inputs, std::vector<PortDecl>& outputs) {
        if (targs.size() != tpl->params.size())
            err(loc, "template '" + tpl->name + "' expects " +
                         std::to_string(tpl->params.size()) + " argument(s), got " +
                         std::to_string(targs.size()));
        Frame pf;
        pf.path = path;
        pf.chain = chain;
        pf.vars.emplace_back();
        for (size_t i = 0; i < targs.size(); ++i) pf.params[tpl->params[i]] = targs[i];
        for (const auto& s : tpl->body) {
            if (s->kind != StmtKind::kSignalDecl) continue;
            if (s->sclass == SignalClass::kIntermediate) continue;
            PortDecl pd;
            pd.name = s->name;
            for (const auto& d : s->dims) {
                int ext = to_extent(
                    require_const(lower_value(*d, pf), d->loc, "signal dimension"), d->loc);
                pd.dims.push_back(ext);
                }
            pd.flat = 1;
            for (int d : pd.dims) pd.flat *= d;
            pd.cls = s->sclass;
            (s->sclass == SignalClass::kInput ? inputs : outputs).push_back(std::move(pd));
        }
    }

    ComponentInst* make_instance(const Template* tpl, std::vector<FieldElement> targs,
                                 const std::string& path, const Frame& parent, SrcLoc loc) {
        inst_store_.push_back({});
        ComponentInst* inst = &inst_store_.back();
        inst->path = path;
        inst->tpl = tpl;
        inst->targs = std::move(targs);
        inst->chain = parent.chain;
        inst->chain.push_back(tpl->name);
        inst->loc = loc;
        scan_ports(tpl, inst->targs, path, inst->chain, loc, inst->inputs, inst->outputs);
        for (const auto& pd : inst->inputs) {
            SignalInfo* info = alloc_signal(path + "." + pd.name, pd.dims, pd.cls,
                                            SignalClass::kIntermediate, inst);
            inst->ports[pd.name] = info;
            inst->wires_expected += pd.flat;
        }
        for (const auto& pd : inst->outputs) {
            SignalInfo* info = alloc_signal(path + "." + pd.name, pd.dims, pd.cls,
                                            SignalClass::kIntermediate, inst);
            inst->ports[pd.name] = info;
        }
        if (inst->wires_expected == 0) inline_component(*inst);
        return inst;
    }

    void inline_component(ComponentInst& inst) {
        if (inline_depth_ >= kMaxInlineDepth)
            err(inst.loc, "component nesting too deep");
        ++inline_depth_;
        inst.inlined = true;
        Frame f;
        f.path = inst.path;
        f.chain = inst.chain;
        f.vars.emplace_back();
        for (size_t i = 0; i < inst.targs.size(); ++i)
            f.params[inst.tpl->params[i]] = inst.targs[i];
        f.pending_ports = inst.ports;
        lower_body(inst.tpl->body, f);
        --inline_depth_;
    }

    // ---- statement lowering ----

    void lower_body(const std::vector<StmtPtr>& body, Frame& f) {
        for (const auto& s : body) lower_stmt(*s, f);
    }

    void bump_steps(SrcLoc loc) {
        if (++steps_ > kMaxSteps) err(loc, "program exceeds the unrolling limit");
    }

    void check_fresh_name(const Frame& f, const std::string& name, SrcLoc loc) const {
        if (f.params.count(name) || f.signals.count(name) || f.comps.count(name))
            err(loc, "'" + name + "' is already declared");
        for (const auto& scope : f.vars)
            if (scope.count(name)) err(loc, "'" + name + "' is already declared");
    }

    void lower_stmt(const Stmt& s, Frame& f) {
        bump_steps(s.loc);
        switch (s.kind) {
            case StmtKind::kSignalDecl: lower_signal_decl(s, f); return;
            case StmtKind::kVarDecl: lower_var_decl(s, f); return;
            case StmtKind::kComponentDecl: lower_component_decl(s, f); return;
            case StmtKind::kAssign: lower_assign(s, f); return;
            case StmtKind::kConstraintEq: lower_constraint_eq(s, f); return;
            case StmtKind::kAssert: {
                CValue cond = lower_value(*s.cond, f);
                if (cond.kind == CValue::Kind::kArray || cond.kind == CValue::Kind::kComp)
                    err(s.loc, "assert condition must be a scalar");
                Instr ins;
                ins.kind = InstrKind::kAssert;
                ins.rhs = sym_of(cond);
                emit(std::move(ins), f, s.loc);
                return;
            }
            case StmtKind::kFor: {
                f.vars.emplace_back();
                ++f.depth;
                lower_stmt(*s.for_init, f);
                for (;;) {
                    bump_steps(s.loc);
                    CValue c = lower_value(*s.for_cond, f);
                    if (!truthy(require_const(c, s.for_cond->loc, "loop condition"))) break;
                    f.vars.emplace_back();
                    lower_body(s.body, f);
                    f.vars.pop_back();
                    lower_stmt(*s.for_post, f);
                }
                --f.depth;
                f.vars.pop_back();
                return;
            }
            case StmtKind::kIf: {
                CValue c = lower_value(*s.cond, f);
                bool taken = truthy(require_const(c, s.cond->loc, "branch condition"));
                f.vars.emplace_back();
                ++f.depth;
                lower_body(taken ? s.body : s.els, f);
                --f.depth;
                f.vars.pop_back();
                return;
            }
            case StmtKind::kBlock: {
                f.vars.emplace_back();
                ++f.depth;
                lower_body(s.body, f);
                --f.depth;
                f.vars.pop_back();
                return;
            }
        }
    }

    void lower_signal_decl(const Stmt& s, Frame& f) {
        auto pend = f.pending_ports.find(s.name);
        SignalInfo* info = nullptr;
        if (pend != f.pending_ports.end() && s.sclass != SignalClass::kIntermediate) {
            if (f.depth > 0)
                err(s.loc, "input/output signals must be declared at the template top level");
            info = pend->second;
            f.pending_ports.erase(pend);
            if (f.signals.count(s.name)) err(s.loc, "'" + s.name + "' is already declared");
            f.signals[s.name] = info;
        } else {
            check_fresh_name(f, s.name, s.loc);
            if (s.sclass != SignalClass::kIntermediate) {
                if (f.depth > 0)
                    err(s.loc,
                        "input/output signals must be declared at the template top level");
                if (!f.pending_ports.empty() || f.path != "main")
                    err(s.loc, "internal error: unexpected port declaration");
            }
            std::vector<int> dims;
            for (const auto& d : s.dims)
                dims.push_back(to_extent(
                    require_const(lower_value(*d, f), d->loc, "signal dimension"), d->loc));
            SignalClass slot_cls =
                f.path == "main" ? s.sclass : SignalClass::kIntermediate;
            info = alloc_signal(f.path + "." + s.name, dims, s.sclass, slot_cls, nullptr);
            f.signals[s.name] = info;
        }
        if (s.init) {
            if (s.sclass == SignalClass::kInput)
                err(s.loc, "cannot assign to an input signal");
            wire(info, 0, info->flat, lower_value(*s.init, f),
                 s.init_op == AssignOp::kStrong, f, s.loc);
        }
    }

    void lower_var_decl(const Stmt& s, Frame& f) {
        // vars shadow outer scopes but not other kinds of names
        if (f.params.count(s.name) || f.signals.count(s.name) || f.comps.count(s.name))
            err(s.loc, "'" + s.name + "' is already declared");
        if (f.vars.back().count(s.name)) err(s.loc, "'" + s.name + "' is already declared");
        std::vector<int> dims;
        for (const auto& d : s.dims)
            dims.push_back(to_extent(
                require_const(lower_value(*d, f), d->loc, "array dimension"), d->loc));
        CValue v;
        if (dims.empty()) {
            if (s.init) {
                v = lower_value(*s.init, f);
                if (v.kind == CValue::Kind::kArray || v.kind == CValue::Kind::kComp)
                    err(s.loc, "variable initializer must be a scalar");
            } else {
                v.kind = CValue::Kind::kConst;
                v.c = F.zero();
            }
        } else {
            if (s.init) err(s.loc, "array variables cannot take an initializer");
            v = make_zero_array(dims, 0);
        }
        f.vars.back()[s.name] = std::move(v);
    }

    CValue make_zero_array(const std::vector<int>& dims, size_t level) {
        CValue v;
        if (level == dims.size()) {
            v.kind = CValue::Kind::kConst;
            v.c = F.zero();
            return v;
        }
        v.kind = CValue::Kind::kArray;
        for (int i = 0; i < dims[level]; ++i) v.arr.push_back(make_zero_array(dims, level + 1));
        return v;
    }

    void lower_component_decl(const Stmt& s, Frame& f) {
        check_fresh_name(f, s.name, s.loc);
        const Template* tpl = find_template(s.callee, s.loc);
        std::vector<FieldElement> targs;
        for (const auto& a : s.targs)
            targs.push_back(
                require_const(lower_value(*a, f), a->loc, "template argument"));
        ComponentInst* inst =
            make_instance(tpl, std::move(targs), f.path + "." + s.name, f, s.loc);
        f.comps[s.name] = inst;
    }

    // ---- assignment ----

    struct StoreTarget {
        SignalInfo* info = nullptr;
        int offset = 0;    // flat element offset
        int count = 0;     // number of consecutive elements
        int consumed = 0;  // subscripts applied so far
    };

    /* Resolves an assignable expression down to a signal plus a flat slice.
     * Subscripts here must be compile-time constants. */
    StoreTarget resolve_store(const Expr& e, Frame& f) {
        switch (e.kind) {
            case ExprKind::kIdent: {
                for (auto it = f.vars.rbegin(); it != f.vars.rend(); ++it)
                    if (it->count(e.name))
                        err(e.loc, "use '=' to assign variable '" + e.name + "'");
                auto sit = f.signals.find(e.name);
                if (sit == f.signals.end()) {
                    if (f.comps.count(e.name))
                        err(e.loc, "cannot assign a component");
                    err(e.loc, "unknown signal '" + e.name + "'");
                }
                return {sit->second, 0, sit->second->flat};
            }
            case ExprKind::kMember: {
                if (e.base->kind != ExprKind::kIdent)
                    err(e.loc, "invalid assignment target");
                auto cit = f.comps.find(e.base->name);
                if (cit == f.comps.end())
                    err(e.base->loc, "unknown component '" + e.base->name + "'");
                auto pit = cit->second->ports.find(e.name);
                if (pit == cit->second->ports.end())
                    err(e.loc, "component '" + e.base->name + "' has no signal '" + e.name + "'");
                return {pit->second, 0, pit->second->flat};
            }
            case ExprKind::kIndex: {
                StoreTarget base = resolve_store(*e.base, f);
                const std::vector<int>& dims = base.info->dims;
                if (base.consumed >= static_cast<int>(dims.size()))
                    err(e.loc, "too many subscripts");
                CValue idx = lower_value(*e.index, f);
                if (idx.kind != CValue::Kind::kConst)
                    err(e.index->loc, "assignment subscript must be a compile-time constant");
                int i = to_extent(idx.c, e.index->loc);
                if (i >= dims[base.consumed])
                    err(e.index->loc, "subscript out of range");
                int stride = base.count / dims[base.consumed];
                return {base.info, base.offset + i * stride, stride, base.consumed + 1};
            }
            default:
                err(e.loc, "invalid assignment target");
        }
    }

    void lower_assign(const Stmt& s, Frame& f) {
        if (s.op == AssignOp::kVar) {
            lower_var_assign(s, f);
            return;
        }
        StoreTarget t = resolve_store(*s.lhs, f);
        CValue v = lower_value(*s.rhs, f);
        wire(t.info, t.offset, t.count, std::move(v), s.op == AssignOp::kStrong, f, s.loc);
    }

    void lower_var_assign(const Stmt& s, Frame& f) {
        // locate the variable binding
        const Expr* root = s.lhs.get();
        std::vector<const Expr*> subs;
        while (root->kind == ExprKind::kIndex) {
            subs.push_back(root->index.get());
            root = root->base.get();
        }
        if (root->kind != ExprKind::kIdent)
            err(s.lhs->loc, "invalid assignment target");
        CValue* slot = nullptr;
        for (auto it = f.vars.rbegin(); it != f.vars.rend(); ++it) {
            auto vit = it->find(root->name);
            if (vit != it->end()) {
                slot = &vit->second;
                break;
            }
        }
        if (!slot) {
            if (f.signals.count(root->name))
                err(s.loc, "use '<--' or '<==' to assign signal '" + root->name + "'");
            err(root->loc, "unknown variable '" + root->name + "'");
        }
        // apply constant subscripts innermost-last
        for (auto it = subs.rbegin(); it != subs.rend(); ++it) {
            if (slot->kind != CValue::Kind::kArray)
                err((*it)->loc, "cannot subscript a scalar variable");
            CValue idx = lower_value(**it, f);
            if (idx.kind != CValue::Kind::kConst)
                err((*it)->loc, "assignment subscript must be a compile-time constant");
            int i = to_extent(idx.c, (*it)->loc);
            if (i >= static_cast<int>(slot->arr.size())) err((*it)->loc, "subscript out of range");
            slot = &slot->arr[static_cast<size_t>(i)];
        }
        CValue v = lower_value(*s.rhs, f);
        if (slot->kind == CValue::Kind::kArray) {
            if (v.kind != CValue::Kind::kArray || v.arr.size() != slot->arr.size())
                err(s.loc, "array shape mismatch in assignment");
        } else if (v.kind == CValue::Kind::kArray || v.kind == CValue::Kind::kComp) {
            err(s.loc, "variable assignment requires a scalar value");
        }
        *slot = std::move(v);
    }

    /* Flattens an array value into scalars. */
    void flatten_value(const CValue& v, std::vector<CValue>& out, SrcLoc loc) {
        switch (v.kind) {
            case CValue::Kind::kConst:
            case CValue::Kind::kSym: out.push_back(v); return;
            case CValue::Kind::kArray:
                for (const auto& e : v.arr) flatten_value(e, out, loc);
                return;
            case CValue::Kind::kComp:
                err(loc, "component used as a value");
        }
    }

    void wire(SignalInfo* info, int offset, int count, CValue value, bool strong,
              Frame& f, SrcLoc loc) {
        bool inside_owner = info->owner != nullptr && f.path == info->owner->path;
        if (info->cls == SignalClass::kInput && (info->owner == nullptr || inside_owner))
            err(loc, "cannot assign to an input signal");
        if (info->cls == SignalClass::kOutput && info->owner != nullptr && !inside_owner)
            err(loc, "cannot assign to an output of a sub-component");
        std::vector<CValue> flat;
        flatten_value(value, flat, loc);
        if (static_cast<int>(flat.size()) != count)
            err(loc, "shape mismatch: expected " + std::to_string(count) + " value(s), got " +
                         std::to_string(flat.size()));
        for (int i = 0; i < count; ++i) {
            int off = offset + i;
            if (info->assigned[static_cast<size_t>(off)])
                err(loc, "signal '" + info->qualname + "' is already assigned");
            info->assigned[static_cast<size_t>(off)] = true;
            int slot = info->base + off;
            RExprPtr rhs = sym_of(flat[static_cast<size_t>(i)]);
            Instr ins;
            ins.kind = InstrKind::kAssign;
            ins.target = slot;
            ins.weak = !strong;
            ins.rhs = rhs;
            emit(std::move(ins), f, loc);
            if (strong) {
                Poly p;
                p[{slot, -1}] = F.one();
                poly_acc(p, to_poly(*rhs, loc), true);
                add_constraint(std::move(p), f, loc);
            }
        }
        if (info->owner && info->cls == SignalClass::kInput) {
            info->owner->wires_done += count;
            if (info->owner->wires_done == info->owner->wires_expected &&
                !info->owner->inlined)
                inline_component(*info->owner);
        }
    }

    void lower_constraint_eq(const Stmt& s, Frame& f) {
        CValue l = lower_value(*s.lhs, f);
        CValue r = lower_value(*s.rhs, f);
        std::vector<CValue> lf, rf;
        flatten_value(l, lf, s.lhs->loc);
        flatten_value(r, rf, s.rhs->loc);
        if (lf.size() != rf.size())
            err(s.loc, "shape mismatch in '==='");
        for (size_t i = 0; i < lf.size(); ++i) {
            RExprPtr ln = sym_of(lf[i]);
            RExprPtr rn = sym_of(rf[i]);
            Poly p = to_poly(*ln, s.loc);
            poly_acc(p, to_poly(*rn, s.loc), true);
            add_constraint(std::move(p), f, s.loc);
            if (!opt_.constraint_assert_disabled) {
                Instr ins;
                ins.kind = InstrKind::kAssertEq;
                ins.rhs = ln;
                ins.rhs2 = rn;
                emit(std::move(ins), f, s.loc);
            }
        }
    }

    // ---- expression lowering ----

    CValue signal_value(SignalInfo* info, int offset, int count,
                        const std::vector<int>& dims, SrcLoc loc) {
        if (info->owner && info->cls == SignalClass::kOutput && !info->owner->inlined)
            err(loc, "output '" + info->qualname +
                         "' is read before the component is fully wired");
        if (dims.empty()) {
            CValue v;
            v.kind = CValue::Kind::kSym;
            v.sym = mk_slot(info->base + offset);
            return v;
        }
        CValue v;
        v.kind = CValue::Kind::kArray;
        v.prov_base = info->base + offset;
        v.prov_dims = dims;
        int stride = count / dims[0];
        std::vector<int> rest(dims.begin() + 1, dims.end());
        for (int i = 0; i < dims[0]; ++i)
            v.arr.push_back(signal_value(info, offset + i * stride, stride, rest, loc));
        return v;
    }

    CValue deref(CValue v, SrcLoc loc) {
        if (v.kind != CValue::Kind::kComp) return v;
        ComponentInst* inst = v.comp;
        if (inst->outputs.empty())
            err(loc, "component '" + inst->path + "' has no output");
        if (inst->outputs.size() > 1)
            err(loc, "component '" + inst->path +
                         "' has several outputs; select one with '.'");
        SignalInfo* info = inst->ports[inst->outputs[0].name];
        return signal_value(info, 0, info->flat, info->dims, loc);
    }

    CValue lower_value(const Expr& e, Frame& f) { return deref(lower_expr(e, f), e.loc); }

    CValue lower_expr(const Expr& e, Frame& f) {
        switch (e.kind) {
            case ExprKind::kNumber: {
                CValue v;
                v.kind = CValue::Kind::kConst;
                v.c = F.from_mpz(e.num);
                return v;
            }
            case ExprKind::kIdent: return lower_ident(e, f);
            case ExprKind::kMember: return lower_member(e, f);
            case ExprKind::kIndex: return lower_index(e, f);
            case ExprKind::kBin: return lower_bin(e, f);
            case ExprKind::kUn: {
                CValue a = lower_value(*e.lhs, f);
                require_scalar(a, e.loc);
                if (a.kind == CValue::Kind::kConst) {
                    CValue v;
                    v.kind = CValue::Kind::kConst;
                    v.c = eval_un_op(F, e.uop, a.c);
                    return v;
                }
                auto n = std::make_shared<RExpr>();
                n->kind = RKind::kUn;
                n->uop = e.uop;
                n->kids = {a.sym};
                CValue v;
                v.kind = CValue::Kind::kSym;
                v.sym = std::move(n);
                return v;
            }
            case ExprKind::kTernary: {
                CValue c = lower_value(*e.base, f);
                require_scalar(c, e.base->loc);
                if (c.kind == CValue::Kind::kConst)
                    return truthy(c.c) ? lower_value(*e.lhs, f) : lower_value(*e.rhs, f);
                CValue a = lower_value(*e.lhs, f);
                CValue b = lower_value(*e.rhs, f);
                require_scalar(a, e.lhs->loc);
                require_scalar(b, e.rhs->loc);
                auto n = std::make_shared<RExpr>();
                n->kind = RKind::kCond;
                n->kids = {c.sym, sym_of(a), sym_of(b)};
                CValue v;
                v.kind = CValue::Kind::kSym;
                v.sym = std::move(n);
                return v;
            }
            case ExprKind::kCall: return lower_call(e, f);
            case ExprKind::kArray: {
                CValue v;
                v.kind = CValue::Kind::kArray;
                for (const auto& el : e.elems) v.arr.push_back(lower_value(*el, f));
                return v;
            }
        }
        err(e.loc, "unsupported expression");
    }

    void require_scalar(const CValue& v, SrcLoc loc) const {
        if (v.kind == CValue::Kind::kArray)
            err(loc, "array value used where a scalar is required");
        if (v.kind == CValue::Kind::kComp)
            err(loc, "component used as a value");
    }

    CValue lower_ident(const Expr& e, Frame& f) {
        for (auto it = f.vars.rbegin(); it != f.vars.rend(); ++it) {
            auto vit = it->find(e.name);
            if (vit != it->end()) return vit->second;
        }
        auto pit = f.params.find(e.name);
        if (pit != f.params.end()) {
            CValue v;
            v.kind = CValue::Kind::kConst;
            v.c = pit->second;
            return v;
        }
        auto sit = f.signals.find(e.name);
        if (sit != f.signals.end())
            return signal_value(sit->second, 0, sit->second->flat, sit->second->dims, e.loc);
        auto cit = f.comps.find(e.name);
        if (cit != f.comps.end()) {
            CValue v;
            v.kind = CValue::Kind::kComp;
            v.comp = cit->second;
            return v;
        }
        err(e.loc, "unknown identifier '" + e.name + "'");
    }

    CValue lower_member(const Expr& e, Frame& f) {
        CValue base = lower_expr(*e.base, f);
        if (base.kind != CValue::Kind::kComp)
            err(e.loc, "'.' requires a component");
        auto pit = base.comp->ports.find(e.name);
        if (pit == base.comp->ports.end())
            err(e.loc, "component '" + base.comp->path + "' has no signal '" + e.name + "'");
        SignalInfo* info = pit->second;
        return signal_value(info, 0, info->flat, info->dims, e.loc);
    }

    CValue lower_index(const Expr& e, Frame& f) {
        CValue base = lower_value(*e.base, f);
        if (base.kind != CValue::Kind::kArray)
            err(e.loc, "cannot subscript a scalar");
        CValue idx = lower_value(*e.index, f);
        if (idx.kind == CValue::Kind::kConst) {
            int i = to_extent(idx.c, e.index->loc);
            if (i >= static_cast<int>(base.arr.size()))
                err(e.index->loc, "subscript out of range");
            return base.arr[static_cast<size_t>(i)];
        }
        require_scalar(idx, e.index->loc);
        // runtime subscript: needs a one-dimensional signal array
        if (base.prov_base < 0)
            err(e.index->loc, "runtime subscript requires a signal array");
        if (base.prov_dims.size() != 1)
            err(e.index->loc,
                "runtime subscripts are only supported on one-dimensional arrays");
        auto n = std::make_shared<RExpr>();
        n->kind = RKind::kIndexLoad;
        n->base_slot = base.prov_base;
        n->dims = base.prov_dims;
        n->kids = {idx.sym};
        subscript_dims_.push_back(base.prov_dims[0]);
        CValue v;
        v.kind = CValue::Kind::kSym;
        v.sym = std::move(n);
        return v;
    }

    CValue lower_bin(const Expr& e, Frame& f) {
        if (e.bop == BinOp::kPow) {
            CValue a = lower_value(*e.lhs, f);
            require_scalar(a, e.lhs->loc);
            CValue b = lower_value(*e.rhs, f);
            FieldElement exp = require_const(b, e.rhs->loc, "the '**' exponent");
            if (a.kind == CValue::Kind::kConst) {
                CValue v;
                v.kind = CValue::Kind::kConst;
                v.c = F.pow_m(a.c, exp.to_mpz());
                return v;
            }
            auto n = std::make_shared<RExpr>();
            n->kind = RKind::kPow;
            n->exp = exp.to_mpz();
            n->kids = {a.sym};
            CValue v;
            v.kind = CValue::Kind::kSym;
            v.sym = std::move(n);
            return v;
        }
        CValue a = lower_value(*e.lhs, f);
        CValue b = lower_value(*e.rhs, f);
        require_scalar(a, e.lhs->loc);
        require_scalar(b, e.rhs->loc);
        if (a.kind == CValue::Kind::kConst && b.kind == CValue::Kind::kConst) {
            try {
                CValue v;
                v.kind = CValue::Kind::kConst;
                v.c = eval_bin_op(F, e.bop, a.c, b.c);
                return v;
            } catch (const DivisionByZero&) {
                // constant division by zero keeps its runtime abort semantics
            }
        }
        auto n = std::make_shared<RExpr>();
        n->kind = RKind::kBin;
        n->bop = e.bop;
        n->kids = {sym_of(a), sym_of(b)};
        CValue v;
        v.kind = CValue::Kind::kSym;
        v.sym = std::move(n);
        return v;
    }

    CValue lower_call(const Expr& e, Frame& f) {
        const Template* tpl = find_template(e.name, e.loc);
        std::vector<FieldElement> targs;
        for (const auto& a : e.targs)
            targs.push_back(require_const(lower_value(*a, f), a->loc, "template argument"));
        std::string path =
            f.path + "." + e.name + "_" + std::to_string(anon_counter_++);
        ComponentInst* inst = make_instance(tpl, std::move(targs), path, f, e.loc);
        if (e.inputs.size() != inst->inputs.size())
            err(e.loc, "template '" + e.name + "' takes " +
                           std::to_string(inst->inputs.size()) + " input(s), got " +
                           std::to_string(e.inputs.size()));
        for (size_t i = 0; i < e.inputs.size(); ++i) {
            CValue v = lower_value(*e.inputs[i], f);
            SignalInfo* port = inst->ports[inst->inputs[i].name];
            wire(port, 0, port->flat, std::move(v), /*strong=*/true, f, e.inputs[i]->loc);
        }
        CValue v;
        v.kind = CValue::Kind::kComp;
        v.comp = inst;
        return v;
    }

    // ---- finalization ----

    CompiledCircuit finalize(const std::string& main_name) {
        for (const auto& inst : inst_store_)
            if (!inst.inlined)
                err(inst.loc, "component '" + inst.path + "' is never fully wired");

        int total = static_cast<int>(slots_.size());
        std::vector<int> remap(static_cast<size_t>(total), -1);
        SignalLayout layout;
        int next = 0;
        for (int pass = 0; pass < 3; ++pass) {
            SignalClass want = pass == 0   ? SignalClass::kInput
                               : pass == 1 ? SignalClass::kIntermediate
                                           : SignalClass::kOutput;
            for (int i = 0; i < total; ++i)
                if (slots_[static_cast<size_t>(i)].second == want)
                    remap[static_cast<size_t>(i)] = next++;
            if (pass == 0) layout.n = next;
            if (pass == 1) layout.k = next - layout.n;
            if (pass == 2) layout.m = next - layout.n - layout.k;
        }
        layout.names.resize(static_cast<size_t>(total));
        for (int i = 0; i < total; ++i)
            layout.names[static_cast<size_t>(remap[static_cast<size_t>(i)])] =
                slots_[static_cast<size_t>(i)].first;

        std::unordered_map<const RExpr*, RExprPtr> memo;
        auto rebuild = [&](auto&& self, const RExprPtr& node) -> RExprPtr {
            if (!node) return nullptr;
            auto it = memo.find(node.get());
            if (it != memo.end()) return it->second;
            auto n = std::make_shared<RExpr>(*node);
            if (n->kind == RKind::kSlot) n->slot = remap[static_cast<size_t>(n->slot)];
            if (n->kind == RKind::kIndexLoad)
                n->base_slot = remap[static_cast<size_t>(n->base_slot)];
            for (auto& kid : n->kids) kid = self(self, kid);
            RExprPtr res = n;
            memo.emplace(node.get(), res);
            return res;
        };

        CompiledCircuit cc;
        cc.field = opt_.field;
        cc.layout = std::move(layout);
        cc.name = main_name;
        cc.file = prog_.file;
        cc.constraint_assert_disabled = opt_.constraint_assert_disabled;
        cc.subscript_dims = subscript_dims_;

        for (auto& ins : instrs_) {
            Instr out = ins;
            if (out.target >= 0) out.target = remap[static_cast<size_t>(out.target)];
            out.rhs = rebuild(rebuild, out.rhs);
            out.rhs2 = rebuild(rebuild, out.rhs2);
            if (out.kind == InstrKind::kAssertEq) {
                if (out.rhs->kind == RKind::kSlot && out.rhs->slot < cc.layout.n)
                    out.bare_input_lhs = out.rhs->slot;
                if (out.rhs2->kind == RKind::kSlot && out.rhs2->slot < cc.layout.n)
                    out.bare_input_rhs = out.rhs2->slot;
            }
            cc.instrs.push_back(std::move(out));
        }

        for (auto& k : constraints_) {
            Constraint out;
            out.loc = k.loc;
            out.component = k.component;
            out.templates = k.templates;
            for (auto& [m, c] : k.terms) {
                Monomial nm;
                if (m.i >= 0) nm.i = remap[static_cast<size_t>(m.i)];
                if (m.j >= 0) nm.j = remap[static_cast<size_t>(m.j)];
                if (nm.i >= 0 && nm.j >= 0 && nm.i > nm.j) std::swap(nm.i, nm.j);
                if (nm.i < 0 && nm.j >= 0) std::swap(nm.i, nm.j);
                out.terms.emplace_back(nm, c);
            }
            std::sort(out.terms.begin(), out.terms.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            cc.constraints.push_back(std::move(out));
        }

        compile_tapes(cc);
        return cc;
    }

    // ---- tape compilation ----

    void compile_tapes(CompiledCircuit& cc) {
        cc.tape1.resize(cc.instrs.size());
        cc.tape2.resize(cc.instrs.size());
        for (size_t i = 0; i < cc.instrs.size(); ++i) {
            const Instr& ins = cc.instrs[i];
            int occ = 0;
            if (ins.rhs) cc.tape1[i] = compile_rhs(ins.rhs, occ);
            if (ins.rhs2) cc.tape2[i] = compile_rhs(ins.rhs2, occ);
            cc.max_regs = std::max({cc.max_regs, cc.tape1[i].num_regs, cc.tape2[i].num_regs});
        }
    }

    CompiledRhs compile_rhs(const RExprPtr& root, int& occ) {
        CompiledRhs t;
        std::unordered_map<const RExpr*, int> memo;
        t.result = emit_tape(*root, t, memo, occ);
        return t;
    }

    int emit_tape(const RExpr& e, CompiledRhs& t,
                  std::unordered_map<const RExpr*, int>& memo, int& occ) {
        auto it = memo.find(&e);
        if (it != memo.end()) return it->second;
        TapeOp op;
        int dst = t.num_regs++;
        op.dst = dst;
        switch (e.kind) {
            case RKind::kConst:
                op.kind = TapeKind::kConst;
                op.cval = e.cval;
                break;
            case RKind::kSlot:
                op.kind = TapeKind::kSlot;
                op.slot = e.slot;
                break;
            case RKind::kUn:
                op.kind = TapeKind::kUn;
                op.uop = e.uop;
                op.a = emit_tape(*e.kids[0], t, memo, occ);
                break;
            case RKind::kPow:
                op.kind = TapeKind::kPow;
                op.exp = e.exp;
                op.a = emit_tape(*e.kids[0], t, memo, occ);
                break;
            case RKind::kBin:
                op.kind = TapeKind::kBin;
                op.bop = e.bop;
                op.a = emit_tape(*e.kids[0], t, memo, occ);
                op.b = emit_tape(*e.kids[1], t, memo, occ);
                op.occ = occ++;
                break;
            case RKind::kIndexLoad: {
                op.kind = TapeKind::kIndexLoad;
                op.base_slot = e.base_slot;
                op.dims = e.dims;
                for (const auto& kid : e.kids)
                    op.idx_regs.push_back(emit_tape(*kid, t, memo, occ));
                break;
            }
            case RKind::kCond: {
                int creg = emit_tape(*e.kids[0], t, memo, occ);
                TapeOp jz;
                jz.kind = TapeKind::kJumpIfZero;
                jz.a = creg;
                jz.dst = -1;
                size_t jz_at = t.ops.size();
                t.ops.push_back(jz);
                {
                    // then-branch: shared nodes computed before the branch stay
                    // valid; nodes first seen inside must not leak out
                    auto branch_memo = memo;
                    int r = emit_tape(*e.kids[1], t, branch_memo, occ);
                    TapeOp cp;
                    cp.kind = TapeKind::kCopy;
                    cp.dst = dst;
                    cp.a = r;
                    t.ops.push_back(cp);
                }
                TapeOp jmp;
                jmp.kind = TapeKind::kJump;
                jmp.dst = -1;
                size_t jmp_at = t.ops.size();
                t.ops.push_back(jmp);
                t.ops[jz_at].jt = static_cast<int>(t.ops.size());
                {
                    auto branch_memo = memo;
                    int r = emit_tape(*e.kids[2], t, branch_memo, occ);
                    TapeOp cp;
                    cp.kind = TapeKind::kCopy;
                    cp.dst = dst;
                    cp.a = r;
                    t.ops.push_back(cp);
                }
                t.ops[jmp_at].jt = static_cast<int>(t.ops.size());
                memo.emplace(&e, dst);
                return dst;
            }
        }
        t.ops.push_back(std::move(op));
        memo.emplace(&e, dst);
        return dst;
    }
};

} // namespace

CompiledCircuit compile(const Program& program, const CompileOptions& options) {
    if (!options.field) throw FieldError("compile requires a field");
    Lowerer lw(program, options);
    return lw.run();
}

// ---- rendering ----

namespace {

void render(const CompiledCircuit& c, const RExpr& e, std::ostream& os, int min_prec);

int rprec(const RExpr& e) {
    switch (e.kind) {
        case RKind::kBin:
            switch (e.bop) {
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
                default: return 11;
            }
        case RKind::kUn: return 12;
        case RKind::kPow: return 13;
        case RKind::kCond: return 1;
        default: return 15;
    }
}

void render(const CompiledCircuit& c, const RExpr& e, std::ostream& os, int min_prec) {
    int p = rprec(e);
    bool parens = p < min_prec;
    switch (e.kind) {
        case RKind::kConst: os << e.cval.to_string(); return;
        case RKind::kSlot: os << c.layout.names[static_cast<size_t>(e.slot)]; return;
        case RKind::kUn:
            if (parens) os << "(";
            os << (e.uop == UnOp::kNeg ? "-" : "!");
            render(c, *e.kids[0], os, 12);
            if (parens) os << ")";
            return;
        case RKind::kPow:
            if (parens) os << "(";
            render(c, *e.kids[0], os, 15);
            os << " ** " << e.exp.get_str();
            if (parens) os << ")";
            return;
        case RKind::kBin:
            if (parens) os << "(";
            render(c, *e.kids[0], os, p);
            os << " " << bin_op_text(e.bop) << " ";
            render(c, *e.kids[1], os, p + 1);
            if (parens) os << ")";
            return;
        case RKind::kCond:
            if (parens) os << "(";
            render(c, *e.kids[0], os, 2);
            os << " ? ";
            render(c, *e.kids[1], os, 1);
            os << " : ";
            render(c, *e.kids[2], os, 1);
            if (parens) os << ")";
            return;
        case RKind::kIndexLoad: {
            // the array is contiguous; recover its name from the base slot
            std::string nm = c.layout.names[static_cast<size_t>(e.base_slot)];
            size_t br = nm.rfind('[');
            if (br != std::string::npos) nm = nm.substr(0, br);
            os << nm << "[";
            render(c, *e.kids[0], os, 1);
            os << "]";
            return;
        }
    }
}

} // namespace

std::string render_rexpr(const CompiledCircuit& c, const RExpr& e) {
    std::ostringstream os;
    render(c, e, os, 1);
    return os.str();
}

std::string render_instr(const CompiledCircuit& c, const Instr& ins) {
    std::ostringstream os;
    switch (ins.kind) {
        case InstrKind::kAssign:
            os << c.layout.names[static_cast<size_t>(ins.target)]
               << (ins.weak ? " <-- " : " <== ") << render_rexpr(c, *ins.rhs);
            break;
        case InstrKind::kAssert:
            os << "assert(" << render_rexpr(c, *ins.rhs) << ")";
            break;
        case InstrKind::kAssertEq:
            os << "assert " << render_rexpr(c, *ins.rhs) << " == "
               << render_rexpr(c, *ins.rhs2);
            break;
    }
    return os.str();
}

std::string render_constraint(const CompiledCircuit& c, const Constraint& k) {
    std::ostringstream os;
    if (k.terms.empty()) {
        os << "0 = 0";
        return os.str();
    }
    bool first = true;
    for (const auto& [m, coeff] : k.terms) {
        FieldElement a = coeff;
        bool neg = false;
        // prefer the small signed form for readability
        mpz_class sr = c.field->signed_repr(a);
        std::string cs;
        if (sr < 0) {
            neg = true;
            cs = mpz_class(-sr).get_str();
        } else {
            cs = sr.get_str();
        }
        if (first) {
            if (neg) os << "-";
            first = false;
        } else {
            os << (neg ? " - " : " + ");
        }
        std::string vars;
        if (m.i >= 0) vars = c.layout.names[static_cast<size_t>(m.i)];
        if (m.j >= 0) vars += "*" + c.layout.names[static_cast<size_t>(m.j)];
        if (vars.empty()) {
            os << cs;
        } else if (cs == "1") {
            os << vars;
        } else {
            os << cs << "*" << vars;
        }
    }
    os << " = 0";
    return os.str();
}

} // namespace zkforge
