#pragma once

#include <map>
#include <set>
#include <vector>

#include "zkforge/circuit.hpp"
#include "zkforge/rng.hpp"

namespace zkforge {

class SkewedSampler;

/* Where a mutation can act: either the whole right-hand side of an
 * assignment, or one binary-operator occurrence inside it. */
enum class SiteKind { kRhs = 0, kOp = 1 };

struct MutationSite {
    int instr = -1;
    SiteKind kind = SiteKind::kRhs;
    int occ = -1;  // operator occurrence for kOp, -1 for kRhs
    auto operator<=>(const MutationSite&) const = default;
};

enum class ActionKind {
    kRhsConst,  // replace the RHS value with a constant
    kOpSub,     // substitute one operator occurrence
    kAddConst,  // optional extra: add a constant to the RHS value
    kDelete,    // optional extra: drop the assignment entirely
};

struct MutationAction {
    ActionKind kind = ActionKind::kRhsConst;
    FieldElement value;        // kRhsConst / kAddConst
    ast::BinOp original{};     // kOpSub
    ast::BinOp replacement{};  // kOpSub
};

/* Empty map = identity mutant. Note that executing any mutant, the identity
 * included, still strips assertions. */
using MutantGenome = std::map<MutationSite, MutationAction>;

/* Stable text key used for deduplication and report serialization. */
std::string genome_key(const MutantGenome& g);

enum class OpCategory { kArithmetic, kBitwise, kLogical, kNone };

OpCategory op_category(ast::BinOp op);
const std::vector<ast::BinOp>& category_members(OpCategory cat);

/* One mutable assignment: its instruction index plus every binary-operator
 * occurrence in its RHS tape. */
struct MutableInstr {
    int instr = -1;
    std::vector<std::pair<int, ast::BinOp>> op_occs;  // (occurrence, original op)
};

struct SiteSet {
    std::vector<MutationSite> sites;     // flat enumeration
    std::vector<MutableInstr> by_instr;  // grouped by owning instruction
    bool empty() const { return by_instr.empty(); }
};

struct MutationParams {
    double mutation_prob = 0.3;
    double op_sub_prob = 0.1;
    bool core_mode = false;        // core mutates any assignment, ++ only weak ones
    bool extra_operators = false;  // enable add-constant / delete-statement
    double extra_prob = 0.2;
};

/* All mutable sites outside whitelisted template subtrees. An instruction is
 * excluded when any template on its instantiation chain is whitelisted. */
SiteSet enumerate_sites(const CompiledCircuit& circuit,
                        const std::set<std::string>& whitelist, bool core_mode);

MutantGenome random_mutant(const SiteSet& sites, const SkewedSampler& sampler,
                           const MutationParams& params, Rng& rng);

MutantGenome crossover(const MutantGenome& a, const MutantGenome& b, Rng& rng);

} // namespace zkforge
