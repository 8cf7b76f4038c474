#pragma once

#include <vector>

#include "zkforge/circuit.hpp"
#include "zkforge/executor.hpp"

namespace zkforge {

/* Extended non-negative integer: a finite error sum or infinity. Zero is the
 * optimum and certifies a violation witness. */
struct FitnessScore {
    bool infinite = true;
    mpz_class value;

    static FitnessScore inf() { return {}; }
    static FitnessScore finite(mpz_class v) { return {false, std::move(v)}; }

    bool is_zero() const { return !infinite && value == 0; }

    bool operator==(const FitnessScore& o) const {
        return infinite == o.infinite && (infinite || value == o.value);
    }
    bool operator<(const FitnessScore& o) const {
        if (infinite) return false;
        if (o.infinite) return true;
        return value < o.value;
    }
};

/* True iff every constraint evaluates to zero at the trace. Requires an ok
 * trace. */
bool satisfies(const CompiledCircuit& c, const ExecutionTrace& trace);

/* Sum over constraints of the cyclic distance to zero: for each polynomial
 * value d, the term is min(d, q - d). Requires an ok trace. */
mpz_class constraint_error(const CompiledCircuit& c, const ExecutionTrace& trace);

/* Score a mutant from already-computed traces: per input, the constraint
 * error when the mutant trace is ok and its outputs differ from the
 * original's (an aborted original differs from every ok output), infinity
 * otherwise; overall the minimum across inputs. */
FitnessScore score_from_traces(const CompiledCircuit& c,
                               const std::vector<ExecutionTrace>& mutant_traces,
                               const std::vector<ExecutionTrace>& original_traces);

/* Execute the genome on every input and fold with score_from_traces. */
FitnessScore mutant_fitness(const CompiledCircuit& c, const MutantGenome& mutant,
                            const std::vector<std::vector<FieldElement>>& inputs,
                            const std::vector<ExecutionTrace>& original_traces);

/* Roulette wheel over fitness scores. The weight of score s is
 * 1/(1 + min(s, 2^64)), infinity weighing 1/(2 + 2^64), realized exactly
 * with integer arithmetic: weight_i = prod of every other member's
 * denominator. Lower scores always get strictly larger weights. */
struct RouletteTable {
    std::vector<mpz_class> cumulative;  // inclusive prefix sums of weights
    mpz_class total;
};

RouletteTable make_roulette(const std::vector<FitnessScore>& scores);
size_t roulette_pick(const RouletteTable& table, Rng& rng);
size_t roulette_select(const std::vector<FitnessScore>& scores, Rng& rng);

} // namespace zkforge
