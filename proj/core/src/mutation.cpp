#include "zkforge/mutation.hpp"

#include <sstream>

#include "zkforge/selectors.hpp"

namespace zkforge {

using ast::BinOp;

OpCategory op_category(BinOp op) {
    switch (op) {
        case BinOp::kAdd:
        case BinOp::kSub:
        case BinOp::kMul:
        case BinOp::kDiv:
        case BinOp::kIntDiv:
        case BinOp::kMod: return OpCategory::kArithmetic;
        case BinOp::kShl:
        case BinOp::kShr:
        case BinOp::kBitAnd:
        case BinOp::kBitOr:
        case BinOp::kBitXor: return OpCategory::kBitwise;
        case BinOp::kEq:
        case BinOp::kNe:
        case BinOp::kLt:
        case BinOp::kLe:
        case BinOp::kGt:
        case BinOp::kGe:
        case BinOp::kLAnd:
        case BinOp::kLOr: return OpCategory::kLogical;
        default: return OpCategory::kNone;  // ** is not an operator site
    }
}

const std::vector<BinOp>& category_members(OpCategory cat) {
    static const std::vector<BinOp> arith = {BinOp::kAdd,    BinOp::kSub, BinOp::kMul,
                                             BinOp::kDiv,    BinOp::kIntDiv,
                                             BinOp::kMod};
    static const std::vector<BinOp> bitw = {BinOp::kShl, BinOp::kShr, BinOp::kBitAnd,
                                            BinOp::kBitOr, BinOp::kBitXor};
    static const std::vector<BinOp> logi = {BinOp::kEq, BinOp::kNe, BinOp::kLt,
                                            BinOp::kLe, BinOp::kGt, BinOp::kGe,
                                            BinOp::kLAnd, BinOp::kLOr};
    static const std::vector<BinOp> none;
    switch (cat) {
        case OpCategory::kArithmetic: return arith;
        case OpCategory::kBitwise: return bitw;
        case OpCategory::kLogical: return logi;
        default: return none;
    }
}

std::string genome_key(const MutantGenome& g) {
    std::ostringstream os;
    for (const auto& [site, act] : g) {
        os << site.instr << (site.kind == SiteKind::kRhs ? "r" : "o");
        if (site.kind == SiteKind::kOp) os << site.occ;
        os << "=";
        switch (act.kind) {
            case ActionKind::kRhsConst: os << "c" << act.value.to_string(); break;
            case ActionKind::kOpSub:
                os << "s" << ast::bin_op_text(act.replacement);
                break;
            case ActionKind::kAddConst: os << "a" << act.value.to_string(); break;
            case ActionKind::kDelete: os << "d"; break;
        }
        os << ";";
    }
    return os.str();
}

SiteSet enumerate_sites(const CompiledCircuit& circuit,
                        const std::set<std::string>& whitelist, bool core_mode) {
    SiteSet out;
    for (size_t i = 0; i < circuit.instrs.size(); ++i) {
        const Instr& ins = circuit.instrs[i];
        if (ins.kind != InstrKind::kAssign) continue;
        if (!core_mode && !ins.weak) continue;
        bool skipped = false;
        for (const auto& t : ins.templates) {
            if (whitelist.count(t)) {
                skipped = true;
                break;
            }
        }
        if (skipped) continue;

        MutableInstr mi;
        mi.instr = static_cast<int>(i);
        for (const auto& op : circuit.tape1[i].ops)
            if (op.kind == TapeKind::kBin && op.occ >= 0)
                mi.op_occs.emplace_back(op.occ, op.bop);

        out.sites.push_back({mi.instr, SiteKind::kRhs, -1});
        for (const auto& [occ, bop] : mi.op_occs)
            out.sites.push_back({mi.instr, SiteKind::kOp, occ});
        out.by_instr.push_back(std::move(mi));
    }
    return out;
}

MutantGenome random_mutant(const SiteSet& sites, const SkewedSampler& sampler,
                           const MutationParams& params, Rng& rng) {
    MutantGenome g;
    for (const auto& mi : sites.by_instr) {
        if (!rng.chance(params.mutation_prob)) continue;
        if (!mi.op_occs.empty() && rng.chance(params.op_sub_prob)) {
            size_t pick = mi.op_occs.size() == 1 ? 0 : rng.bounded(mi.op_occs.size());
            auto [occ, orig] = mi.op_occs[pick];
            const auto& peers = category_members(op_category(orig));
            // uniform over the category minus the original operator
            size_t r = rng.bounded(peers.size() - 1);
            BinOp repl = BinOp::kAdd;
            size_t seen = 0;
            for (BinOp cand : peers) {
                if (cand == orig) continue;
                if (seen++ == r) {
                    repl = cand;
                    break;
                }
            }
            MutationAction act;
            act.kind = ActionKind::kOpSub;
            act.original = orig;
            act.replacement = repl;
            g[{mi.instr, SiteKind::kOp, occ}] = act;
            continue;
        }
        if (params.extra_operators && rng.chance(params.extra_prob)) {
            MutationAction act;
            if (rng.chance(0.5)) {
                act.kind = ActionKind::kAddConst;
                act.value = sampler.draw(rng);
            } else {
                act.kind = ActionKind::kDelete;
            }
            g[{mi.instr, SiteKind::kRhs, -1}] = act;
            continue;
        }
        MutationAction act;
        act.kind = ActionKind::kRhsConst;
        act.value = sampler.draw(rng);
        g[{mi.instr, SiteKind::kRhs, -1}] = act;
    }
    return g;
}

MutantGenome crossover(const MutantGenome& a, const MutantGenome& b, Rng& rng) {
    MutantGenome g;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
            g.insert(*ia++);
        } else if (ia == a.end() || ib->first < ia->first) {
            g.insert(*ib++);
        } else {
            g.insert(rng.chance(0.5) ? *ia : *ib);
            ++ia;
            ++ib;
        }
    }
    return g;
}

} // namespace zkforge
