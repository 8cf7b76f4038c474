#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "zkforge/circuit.hpp"
#include "zkforge/executor.hpp"
#include "zkforge/rng.hpp"

namespace zkforge {

/* Banded input distribution: binary values 15%, small values 34%, values
 * near the field order 50%, everything else 1%. Bands are clipped to the
 * field, overlapping bands merged and the mass renormalized, so small
 * fields still get a total of 1. */
class SkewedSampler {
  public:
    struct Band {
        mpz_class lo, hi;  // inclusive
        double prob;
    };

    explicit SkewedSampler(std::shared_ptr<const PrimeField> field);

    /* §6.4-style flatter preset: small band [2,100], near-top [q-1000,q-1]. */
    static SkewedSampler less_skewed(std::shared_ptr<const PrimeField> field);

    FieldElement draw(Rng& rng) const;

    const std::vector<Band>& bands() const { return bands_; }
    const PrimeField& field() const { return *field_; }

  private:
    SkewedSampler(std::shared_ptr<const PrimeField> field, const mpz_class& small_hi,
                  const mpz_class& top_span);

    std::shared_ptr<const PrimeField> field_;
    std::vector<Band> bands_;
};

/* Watches original-execution aborts; after `threshold` consecutive
 * out-of-range subscript aborts, input generation is capped to the smallest
 * runtime-subscripted array extent. */
class ArrayGuardState {
  public:
    explicit ArrayGuardState(const CompiledCircuit& c, int threshold = 8);

    void observe_abort(const AbortInfo& info);
    std::optional<uint64_t> cap() const { return cap_; }
    int consecutive() const { return consecutive_; }

  private:
    int threshold_;
    int consecutive_ = 0;
    bool has_arrays_ = false;
    uint64_t min_dim_ = 0;
    std::optional<uint64_t> cap_;
};

/* One input tuple: skewed draws, or uniform [0, cap] when the guard fired. */
std::vector<FieldElement> sample_input(const SkewedSampler& sampler,
                                       const SignalLayout& layout,
                                       const ArrayGuardState& guard, Rng& rng);

/* Polynomial over input slots only, as monomial -> coefficient. */
struct InputPoly {
    std::map<Monomial, FieldElement> terms;
};

/* A division inside a weak assignment whose numerator and denominator are
 * both polynomial in the inputs; the analytic zero-divisor selector steers
 * inputs onto their roots. */
struct ZeroDivTarget {
    int instr = -1;
    InputPoly num, den;
};

std::vector<ZeroDivTarget> find_zero_div_targets(const CompiledCircuit& c);

/* All roots of a*v^2 + b*v + c over the field: empty when there is no root
 * (or the polynomial is constant), one entry for linear or double roots,
 * two for distinct quadratic roots. */
std::vector<FieldElement> solve_roots(const PrimeField& f, const FieldElement& a,
                                      const FieldElement& b, const FieldElement& c);

/* Reduce the polynomial to one variable: the lowest-indexed input slot with
 * symbolic degree >= 1; every other slot is substituted from env. Returns
 * nullopt for constant polynomials. */
struct Univariate {
    int var = -1;
    FieldElement a, b, c;  // a*v^2 + b*v + c
};
std::optional<Univariate> reduce_to_var(const PrimeField& f, const InputPoly& p,
                                        const std::vector<FieldElement>& env);

/* Solve p = 0 for its chosen variable under env; picks uniformly among the
 * roots. Returns the variable index and root value, or nullopt. */
std::optional<std::pair<int, FieldElement>> solve_zero(const PrimeField& f,
                                                       const InputPoly& p,
                                                       const std::vector<FieldElement>& env,
                                                       Rng& rng);

/* Mutate the candidate input in place: per division target, denominator
 * first and then numerator against the updated vector, each attempted with
 * an independent probability draw. */
void apply_zero_div(const CompiledCircuit& c, const std::vector<ZeroDivTarget>& targets,
                    std::vector<FieldElement>& input, double prob, Rng& rng);

} // namespace zkforge
