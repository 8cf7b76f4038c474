#include "zkforge/rng.hpp"

#include <vector>

namespace zkforge {

mpz_class Rng::bounded_mpz(const mpz_class& n) {
    if (n <= 1) return 0;
    size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    size_t words = (bits + 63) / 64;
    unsigned topbits = bits % 64 == 0 ? 64 : static_cast<unsigned>(bits % 64);
    uint64_t topmask = topbits == 64 ? ~uint64_t(0) : ((uint64_t(1) << topbits) - 1);
    std::vector<uint64_t> buf(words);
    for (;;) {
        for (size_t i = 0; i < words; ++i) buf[i] = next();
        buf[words - 1] &= topmask;
        mpz_class r;
        mpz_import(r.get_mpz_t(), words, -1, sizeof(uint64_t), 0, 0, buf.data());
        if (r < n) return r;
    }
}

FieldElement Rng::field_uniform(const PrimeField& f) {
    if (f.is_small()) return f.from_uint(bounded(f.small_modulus()));
    return f.from_mpz(bounded_mpz(f.modulus()));
}

Rng derive_rng(uint64_t seed, uint64_t generation, Stream purpose, uint64_t index) {
    SplitMix64 sm(seed);
    auto absorb = [&](uint64_t x) {
        sm.state ^= x * 0xD1B54A32D192ED03ULL;
        sm.next();
    };
    absorb(generation);
    absorb(static_cast<uint64_t>(purpose));
    absorb(index);
    return Rng(sm.next());
}

} // namespace zkforge
