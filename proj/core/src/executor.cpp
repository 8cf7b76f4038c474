#include "zkforge/executor.hpp"

#include <stdexcept>

namespace zkforge {

namespace {

/* Internal signal for out-of-range array subscripts; converted to an abort
 * trace by the instruction loop. */
struct SubscriptError {
    mpz_class value;
    int length;
};

} // namespace

const char* abort_kind_name(AbortKind k) {
    switch (k) {
        case AbortKind::kAssertionFailure: return "assertion-failure";
        case AbortKind::kDivisionByZero: return "division-by-zero";
        case AbortKind::kOutOfRangeSubscript: return "out-of-range-subscript";
    }
    return "?";
}

bool outputs_equal(const CompiledCircuit& c, const ExecutionTrace& a,
                   const ExecutionTrace& b) {
    int lo = c.layout.n + c.layout.k;
    int hi = lo + c.layout.m;
    for (int i = lo; i < hi; ++i)
        if (a.slots[static_cast<size_t>(i)] != b.slots[static_cast<size_t>(i)])
            return false;
    return true;
}

Executor::Executor(const CompiledCircuit& c, long long budget)
    : c_(c), budget_(budget) {
    regs_.assign(static_cast<size_t>(std::max(c.max_regs, 1)), c.field->zero());
}

bool Executor::eval(const CompiledRhs& tape, int instr_idx, ExecutionTrace& tr,
                    FieldElement& out) {
    const PrimeField& F = *c_.field;
    int n = c_.layout.n;
    try {
        size_t pc = 0;
        while (pc < tape.ops.size()) {
            const TapeOp& op = tape.ops[pc];
            switch (op.kind) {
                case TapeKind::kConst:
                    regs_[static_cast<size_t>(op.dst)] = op.cval;
                    break;
                case TapeKind::kSlot:
                    if (op.slot < n && first_read_[static_cast<size_t>(op.slot)] < 0)
                        first_read_[static_cast<size_t>(op.slot)] = instr_idx;
                    regs_[static_cast<size_t>(op.dst)] =
                        tr.slots[static_cast<size_t>(op.slot)];
                    break;
                case TapeKind::kBin: {
                    ast::BinOp bop = op.bop;
                    if (!op_subs_.empty() && op.occ >= 0) {
                        for (const auto& [occ, repl] : op_subs_)
                            if (occ == op.occ) {
                                bop = repl;
                                break;
                            }
                    }
                    regs_[static_cast<size_t>(op.dst)] =
                        eval_bin_op(F, bop, regs_[static_cast<size_t>(op.a)],
                                    regs_[static_cast<size_t>(op.b)]);
                    break;
                }
                case TapeKind::kUn:
                    regs_[static_cast<size_t>(op.dst)] =
                        eval_un_op(F, op.uop, regs_[static_cast<size_t>(op.a)]);
                    break;
                case TapeKind::kPow:
                    regs_[static_cast<size_t>(op.dst)] =
                        F.pow_m(regs_[static_cast<size_t>(op.a)], op.exp);
                    break;
                case TapeKind::kIndexLoad: {
                    const FieldElement& iv = regs_[static_cast<size_t>(op.idx_regs[0])];
                    int len = op.dims[0];
                    bool in_range;
                    uint64_t off = 0;
                    if (F.is_small()) {
                        off = iv.to_uint64();
                        in_range = off < static_cast<uint64_t>(len);
                    } else {
                        mpz_class z = iv.to_mpz();
                        in_range = z < len;
                        if (in_range) off = z.get_ui();
                    }
                    if (!in_range) throw SubscriptError{iv.to_mpz(), len};
                    int slot = op.base_slot + static_cast<int>(off);
                    if (slot < n && first_read_[static_cast<size_t>(slot)] < 0)
                        first_read_[static_cast<size_t>(slot)] = instr_idx;
                    regs_[static_cast<size_t>(op.dst)] =
                        tr.slots[static_cast<size_t>(slot)];
                    break;
                }
                case TapeKind::kCopy:
                    regs_[static_cast<size_t>(op.dst)] = regs_[static_cast<size_t>(op.a)];
                    break;
                case TapeKind::kJump:
                    pc = static_cast<size_t>(op.jt);
                    continue;
                case TapeKind::kJumpIfZero:
                    if (regs_[static_cast<size_t>(op.a)].is_zero()) {
                        pc = static_cast<size_t>(op.jt);
                        continue;
                    }
                    break;
            }
            ++pc;
        }
        out = regs_[static_cast<size_t>(tape.result)];
        return true;
    } catch (const DivisionByZero&) {
        tr.status = ExecStatus::kAbort;
        tr.abort.kind = AbortKind::kDivisionByZero;
        tr.abort.instr = instr_idx;
        return false;
    } catch (const SubscriptError& e) {
        tr.status = ExecStatus::kAbort;
        tr.abort.kind = AbortKind::kOutOfRangeSubscript;
        tr.abort.instr = instr_idx;
        tr.abort.subscript = e.value;
        tr.abort.length = e.length;
        return false;
    }
}

ExecutionTrace Executor::run(const std::vector<FieldElement>& x,
                             const MutantGenome* mutant) {
    const PrimeField& F = *c_.field;
    const SignalLayout& lay = c_.layout;
    if (static_cast<int>(x.size()) != lay.n)
        throw std::invalid_argument("input vector size does not match the circuit");

    ExecutionTrace tr;
    tr.slots.assign(static_cast<size_t>(lay.total()), F.zero());
    for (int i = 0; i < lay.n; ++i) tr.slots[static_cast<size_t>(i)] = x[static_cast<size_t>(i)];
    first_read_.assign(static_cast<size_t>(lay.n), -1);

    const bool is_mutant = mutant != nullptr;

    for (size_t idx = 0; idx < c_.instrs.size(); ++idx) {
        if (++tr.executed > budget_) {
            tr.status = ExecStatus::kBudget;
            return tr;
        }
        const Instr& ins = c_.instrs[idx];

        const MutationAction* rhs_act = nullptr;
        op_subs_.clear();
        if (is_mutant && !mutant->empty()) {
            auto it = mutant->lower_bound({static_cast<int>(idx), SiteKind::kRhs, -1});
            for (; it != mutant->end() && it->first.instr == static_cast<int>(idx); ++it) {
                if (it->first.kind == SiteKind::kRhs)
                    rhs_act = &it->second;
                else
                    op_subs_.emplace_back(it->first.occ, it->second.replacement);
            }
        }

        switch (ins.kind) {
            case InstrKind::kAssign: {
                if (rhs_act && rhs_act->kind == ActionKind::kDelete) break;
                if (rhs_act && rhs_act->kind == ActionKind::kRhsConst) {
                    tr.slots[static_cast<size_t>(ins.target)] = rhs_act->value;
                    break;
                }
                FieldElement v;
                if (!eval(c_.tape1[idx], static_cast<int>(idx), tr, v)) return tr;
                if (rhs_act && rhs_act->kind == ActionKind::kAddConst)
                    v = F.add(v, rhs_act->value);
                tr.slots[static_cast<size_t>(ins.target)] = v;
                break;
            }
            case InstrKind::kAssert: {
                if (is_mutant) break;
                FieldElement v;
                if (!eval(c_.tape1[idx], static_cast<int>(idx), tr, v)) return tr;
                if (v.is_zero()) {
                    tr.status = ExecStatus::kAbort;
                    tr.abort.kind = AbortKind::kAssertionFailure;
                    tr.abort.instr = static_cast<int>(idx);
                    return tr;
                }
                break;
            }
            case InstrKind::kAssertEq: {
                if (is_mutant) break;
                FieldElement a, b;
                if (!eval(c_.tape1[idx], static_cast<int>(idx), tr, a)) return tr;
                if (!eval(c_.tape2[idx], static_cast<int>(idx), tr, b)) return tr;
                if (a != b) {
                    /* An input slot no earlier instruction has read can be
                     * re-bound to the other side's value; record the
                     * opportunity, left side taking priority. */
                    auto unread = [&](int slot) {
                        int r = first_read_[static_cast<size_t>(slot)];
                        return r < 0 || r == static_cast<int>(idx);
                    };
                    if (ins.bare_input_lhs >= 0 && unread(ins.bare_input_lhs))
                        tr.hash_patch = HashPatch{ins.bare_input_lhs, b};
                    else if (ins.bare_input_rhs >= 0 && unread(ins.bare_input_rhs))
                        tr.hash_patch = HashPatch{ins.bare_input_rhs, a};
                    tr.status = ExecStatus::kAbort;
                    tr.abort.kind = AbortKind::kAssertionFailure;
                    tr.abort.instr = static_cast<int>(idx);
                    return tr;
                }
                break;
            }
        }
    }
    tr.status = ExecStatus::kOk;
    return tr;
}

ExecutionTrace execute(const CompiledCircuit& c, const std::vector<FieldElement>& x,
                       const MutantGenome* mutant, long long budget) {
    Executor ex(c, budget);
    return ex.run(x, mutant);
}

} // namespace zkforge
