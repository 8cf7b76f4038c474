#include "zkforge/fitness.hpp"

#include <stdexcept>

namespace zkforge {

static void require_ok(const ExecutionTrace& t, const char* fn) {
    if (!t.ok())
        throw std::logic_error(std::string(fn) + " requires an ok trace");
}

bool satisfies(const CompiledCircuit& c, const ExecutionTrace& trace) {
    require_ok(trace, "satisfies");
    for (const auto& k : c.constraints)
        if (!eval_constraint(*c.field, k, trace.slots).is_zero()) return false;
    return true;
}

mpz_class constraint_error(const CompiledCircuit& c, const ExecutionTrace& trace) {
    require_ok(trace, "constraint_error");
    const PrimeField& F = *c.field;
    if (F.is_small()) {
        uint64_t q = F.small_modulus();
        unsigned long acc = 0;
        for (const auto& k : c.constraints) {
            uint64_t d = eval_constraint(F, k, trace.slots).to_uint64();
            if (d) acc += std::min(d, q - d);
        }
        return mpz_class(acc);
    }
    mpz_class acc = 0;
    for (const auto& k : c.constraints) {
        mpz_class d = eval_constraint(F, k, trace.slots).to_mpz();
        if (d != 0) {
            mpz_class alt = F.modulus() - d;
            acc += (d < alt ? d : alt);
        }
    }
    return acc;
}

FitnessScore score_from_traces(const CompiledCircuit& c,
                               const std::vector<ExecutionTrace>& mutant_traces,
                               const std::vector<ExecutionTrace>& original_traces) {
    if (mutant_traces.empty() || mutant_traces.size() != original_traces.size())
        throw std::logic_error("score_from_traces requires aligned, non-empty trace lists");
    FitnessScore best = FitnessScore::inf();
    for (size_t j = 0; j < mutant_traces.size(); ++j) {
        const ExecutionTrace& mt = mutant_traces[j];
        if (!mt.ok()) continue;
        const ExecutionTrace& ot = original_traces[j];
        bool divergent = !ot.ok() || !outputs_equal(c, mt, ot);
        if (!divergent) continue;
        FitnessScore s = FitnessScore::finite(constraint_error(c, mt));
        if (s < best) best = s;
    }
    return best;
}

FitnessScore mutant_fitness(const CompiledCircuit& c, const MutantGenome& mutant,
                            const std::vector<std::vector<FieldElement>>& inputs,
                            const std::vector<ExecutionTrace>& original_traces) {
    if (inputs.empty() || inputs.size() != original_traces.size())
        throw std::logic_error("mutant_fitness requires aligned, non-empty input lists");
    Executor ex(c);
    std::vector<ExecutionTrace> mts;
    mts.reserve(inputs.size());
    for (const auto& x : inputs) mts.push_back(ex.run(x, &mutant));
    return score_from_traces(c, mts, original_traces);
}

RouletteTable make_roulette(const std::vector<FitnessScore>& scores) {
    if (scores.empty()) throw std::logic_error("roulette over an empty population");
    static const mpz_class cap = mpz_class(1) << 64;
    size_t n = scores.size();
    std::vector<mpz_class> denom(n);
    for (size_t i = 0; i < n; ++i) {
        if (scores[i].infinite)
            denom[i] = cap + 2;
        else
            denom[i] = 1 + (scores[i].value < cap ? scores[i].value : cap);
    }
    // weight_i = prod_{j != i} denom_j via prefix/suffix products
    std::vector<mpz_class> prefix(n + 1), suffix(n + 1);
    prefix[0] = 1;
    for (size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] * denom[i];
    suffix[n] = 1;
    for (size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] * denom[i];

    RouletteTable t;
    t.cumulative.resize(n);
    t.total = 0;
    for (size_t i = 0; i < n; ++i) {
        t.total += prefix[i] * suffix[i + 1];
        t.cumulative[i] = t.total;
    }
    return t;
}

size_t roulette_pick(const RouletteTable& table, Rng& rng) {
    mpz_class r = rng.bounded_mpz(table.total);
    for (size_t i = 0; i < table.cumulative.size(); ++i)
        if (r < table.cumulative[i]) return i;
    return table.cumulative.size() - 1;  // unreachable
}

size_t roulette_select(const std::vector<FitnessScore>& scores, Rng& rng) {
    RouletteTable t = make_roulette(scores);
    return roulette_pick(t, rng);
}

} // namespace zkforge
