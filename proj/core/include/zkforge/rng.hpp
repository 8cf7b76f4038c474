#pragma once

#include <cstdint>

#include "zkforge/field.hpp"

namespace zkforge {

/* splitmix64, used for seeding and stream derivation. */
struct SplitMix64 {
    uint64_t state = 0;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

/* xoshiro256** 1.0 */
class Rng {
  public:
    Rng() : Rng(0) {}
    explicit Rng(uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
    }

    uint64_t next() {
        uint64_t result = rotl(s_[1] * 5, 7) * 9;
        uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /* Unbiased draw from [0, n), n >= 1, by rejection. */
    uint64_t bounded(uint64_t n) {
        if (n <= 1) return 0;
        uint64_t threshold = (0 - n) % n; // 2^64 mod n
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    /* Uniform draw from [0, n), n >= 1, rejection sampling on bit windows. */
    mpz_class bounded_mpz(const mpz_class& n);

    /* Uniform field element. */
    FieldElement field_uniform(const PrimeField& f);

    /* Bernoulli(p): true with probability p. Consumes one draw. */
    bool chance(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        // 53-bit uniform in [0,1)
        double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
        return u < p;
    }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t s_[4];
};

/* Stream purposes. Every random decision in the fuzzer comes from a stream
 * derived from (seed, generation, purpose, index), so results do not depend
 * on scheduling or thread count. */
enum class Stream : uint64_t {
    kInput = 1,   // per (generation, input index): input tuple sampling
    kZeroDiv = 2, // per (generation, input index): zero-denominator patching
    kHash = 3,    // per (generation, input index): hash-check patching
    kSlot = 4,    // per (generation, population slot): mutant construction
};

Rng derive_rng(uint64_t seed, uint64_t generation, Stream purpose, uint64_t index);

} // namespace zkforge
