#include "zkforge/field.hpp"

namespace zkforge {

namespace {

constexpr uint64_t kSmallLimit = uint64_t(1) << 32;

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t q) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % q);
}

uint64_t powmod_u64(uint64_t base, uint64_t exp, uint64_t q) {
    uint64_t r = 1 % q;
    base %= q;
    while (exp) {
        if (exp & 1) r = mulmod_u64(r, base, q);
        base = mulmod_u64(base, base, q);
        exp >>= 1;
    }
    return r;
}

} // namespace

mpz_class FieldElement::to_mpz() const {
    if (!fp_) return 0;
    if (fp_->is_small()) {
        mpz_class r;
        mpz_import(r.get_mpz_t(), 1, -1, sizeof(uint64_t), 0, 0, &sv_);
        return r;
    }
    return bv_;
}

std::string FieldElement::to_string() const {
    if (!fp_) return "0";
    if (fp_->is_small()) return std::to_string(sv_);
    return bv_.get_str();
}

uint64_t FieldElement::to_uint64() const {
    if (!fp_) return 0;
    if (fp_->is_small()) return sv_;
    if (!bv_.fits_ulong_p()) throw FieldError("value does not fit in 64 bits");
    return bv_.get_ui();
}

bool FieldElement::is_zero() const {
    if (!fp_) return true;
    return fp_->is_small() ? sv_ == 0 : bv_ == 0;
}

bool FieldElement::is_one() const {
    if (!fp_) return false;
    return fp_->is_small() ? sv_ == 1 : bv_ == 1;
}

bool FieldElement::operator==(const FieldElement& o) const {
    if (fp_ == nullptr || o.fp_ == nullptr) return is_zero() && o.is_zero();
    if (fp_->is_small() != o.fp_->is_small()) return false;
    return fp_->is_small() ? sv_ == o.sv_ : bv_ == o.bv_;
}

size_t FieldElementHash::operator()(const FieldElement& e) const {
    uint64_t h;
    if (!e.fp_ || e.fp_->is_small()) {
        h = e.sv_;
    } else {
        h = mpz_get_ui(e.bv_.get_mpz_t()); // low limb is enough for hashing
        h ^= static_cast<uint64_t>(mpz_size(e.bv_.get_mpz_t())) << 56;
    }
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return static_cast<size_t>(h);
}

PrimeField::PrimeField(const mpz_class& modulus) : q_(modulus) {
    if (q_ < 2 || mpz_probab_prime_p(q_.get_mpz_t(), 30) == 0)
        throw NotPrime("modulus is not prime: " + q_.get_str());
    half_ = (q_ - 1) / 2;
    qm2_ = q_ - 2;
    bits_ = mpz_sizeinbase(q_.get_mpz_t(), 2);
    small_ = q_ < kSmallLimit;
    if (small_) {
        qs_ = q_.get_ui();
        halfs_ = (qs_ - 1) / 2;
    }
}

const mpz_class& PrimeField::bn254_modulus() {
    static const mpz_class q(
        "21888242871839275222246405745257275088548364400416034343698204186575808495617");
    return q;
}

FieldElement PrimeField::make_small(uint64_t v) const {
    FieldElement e;
    e.sv_ = v;
    e.fp_ = this;
    return e;
}

FieldElement PrimeField::make_big(mpz_class v) const {
    FieldElement e;
    e.bv_ = std::move(v);
    e.fp_ = this;
    return e;
}

FieldElement PrimeField::from_uint(uint64_t v) const {
    if (small_) return make_small(v % qs_);
    mpz_class t;
    mpz_import(t.get_mpz_t(), 1, -1, sizeof(uint64_t), 0, 0, &v);
    return make_big(t % q_);
}

FieldElement PrimeField::from_mpz(const mpz_class& v) const {
    mpz_class r = v % q_;
    if (r < 0) r += q_;
    if (small_) return make_small(r.get_ui());
    return make_big(std::move(r));
}

FieldElement PrimeField::from_string(const std::string& decimal) const {
    return from_mpz(mpz_class(decimal, 10));
}

bool PrimeField::same_field(const FieldElement& a) const {
    if (a.fp_ == this) return true;
    return a.fp_ != nullptr && a.fp_->q_ == q_;
}

void PrimeField::check(const FieldElement& a) const {
    if (!same_field(a)) throw FieldMismatch("operand from a different field");
}

void PrimeField::check2(const FieldElement& a, const FieldElement& b) const {
    check(a);
    check(b);
}

FieldElement PrimeField::add(const FieldElement& a, const FieldElement& b) const {
    check2(a, b);
    if (small_) {
        uint64_t s = a.sv_ + b.sv_; // q < 2^32, no overflow
        if (s >= qs_) s -= qs_;
        return make_small(s);
    }
    mpz_class r = a.bv_ + b.bv_;
    if (r >= q_) r -= q_;
    return make_big(std::move(r));
}

FieldElement PrimeField::sub(const FieldElement& a, const FieldElement& b) const {
    check2(a, b);
    if (small_) {
        uint64_t s = a.sv_ >= b.sv_ ? a.sv_ - b.sv_ : a.sv_ + qs_ - b.sv_;
        return make_small(s);
    }
    mpz_class r = a.bv_ - b.bv_;
    if (r < 0) r += q_;
    return make_big(std::move(r));
}

FieldElement PrimeField::mul(const FieldElement& a, const FieldElement& b) const {
    check2(a, b);
    if (small_) return make_small(mulmod_u64(a.sv_, b.sv_, qs_));
    mpz_class r = a.bv_ * b.bv_;
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), q_.get_mpz_t());
    return make_big(std::move(r));
}

FieldElement PrimeField::neg(const FieldElement& a) const {
    check(a);
    if (small_) return make_small(a.sv_ == 0 ? 0 : qs_ - a.sv_);
    if (a.bv_ == 0) return make_big(0);
    return make_big(q_ - a.bv_);
}

FieldElement PrimeField::inv(const FieldElement& a) const {
    check(a);
    if (a.is_zero()) throw DivisionByZero("inverse of zero");
    if (small_) return make_small(powmod_u64(a.sv_, qs_ - 2, qs_));
    mpz_class r;
    mpz_powm(r.get_mpz_t(), a.bv_.get_mpz_t(), qm2_.get_mpz_t(), q_.get_mpz_t());
    return make_big(std::move(r));
}

FieldElement PrimeField::div(const FieldElement& a, const FieldElement& b) const {
    check2(a, b);
    if (b.is_zero()) throw DivisionByZero("division by zero");
    return mul(a, inv(b));
}

mpz_class PrimeField::signed_repr(const FieldElement& a) const {
    check(a);
    mpz_class v = a.to_mpz();
    if (v > half_) v -= q_;
    return v;
}

int PrimeField::cmp_signed(const FieldElement& a, const FieldElement& b) const {
    check2(a, b);
    if (small_) {
        int64_t x = a.sv_ > halfs_ ? static_cast<int64_t>(a.sv_) - static_cast<int64_t>(qs_)
                                   : static_cast<int64_t>(a.sv_);
        int64_t y = b.sv_ > halfs_ ? static_cast<int64_t>(b.sv_) - static_cast<int64_t>(qs_)
                                   : static_cast<int64_t>(b.sv_);
        return x < y ? -1 : (x > y ? 1 : 0);
    }
    mpz_class x = signed_repr(a);
    mpz_class y = signed_repr(b);
    int c = cmp(x, y);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

FieldElement PrimeField::int_div(const FieldElement& a, const FieldElement& b) const {
    check2(a, b);
    if (b.is_zero()) throw DivisionByZero("integer division by zero");
    if (small_) return make_small(a.sv_ / b.sv_);
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), a.bv_.get_mpz_t(), b.bv_.get_mpz_t());
    return make_big(std::move(r));
}

FieldElement PrimeField::int_mod(const FieldElement& a, const FieldElement& b) const {
    check2(a, b);
    if (b.is_zero()) throw DivisionByZero("modulo by zero");
    if (small_) return make_small(a.sv_ % b.sv_);
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), a.bv_.get_mpz_t(), b.bv_.get_mpz_t());
    return make_big(std::move(r));
}

bool PrimeField::is_quadratic_residue(const FieldElement& a) const {
    check(a);
    if (a.is_zero()) return true;
    if (q_ == 2) return true;
    if (small_) return powmod_u64(a.sv_, halfs_, qs_) == 1;
    mpz_class r;
    mpz_powm(r.get_mpz_t(), a.bv_.get_mpz_t(), half_.get_mpz_t(), q_.get_mpz_t());
    return r == 1;
}

std::optional<FieldElement> PrimeField::sqrt(const FieldElement& a) const {
    check(a);
    if (a.is_zero()) return zero();
    if (q_ == 2) return a; // 1 -> 1
    if (!is_quadratic_residue(a)) return std::nullopt;

    mpz_class av = a.to_mpz();
    if (mpz_tstbit(q_.get_mpz_t(), 0) && mpz_tstbit(q_.get_mpz_t(), 1)) {
        // q = 3 (mod 4): a^((q+1)/4)
        mpz_class e = (q_ + 1) / 4;
        mpz_class r;
        mpz_powm(r.get_mpz_t(), av.get_mpz_t(), e.get_mpz_t(), q_.get_mpz_t());
        return from_mpz(r);
    }

    // Tonelli-Shanks. q - 1 = s * 2^e with s odd.
    mpz_class s = q_ - 1;
    unsigned long e = mpz_scan1(s.get_mpz_t(), 0);
    mpz_fdiv_q_2exp(s.get_mpz_t(), s.get_mpz_t(), e);

    // Smallest quadratic non-residue as generator of the 2-Sylow part.
    mpz_class n = 2;
    while (is_quadratic_residue(from_mpz(n))) ++n;

    mpz_class x, b, g, t;
    mpz_powm(x.get_mpz_t(), av.get_mpz_t(), mpz_class((s + 1) / 2).get_mpz_t(), q_.get_mpz_t());
    mpz_powm(b.get_mpz_t(), av.get_mpz_t(), s.get_mpz_t(), q_.get_mpz_t());
    mpz_powm(g.get_mpz_t(), n.get_mpz_t(), s.get_mpz_t(), q_.get_mpz_t());
    unsigned long r = e;

    while (b != 1) {
        t = b;
        unsigned long m = 0;
        while (t != 1 && m < r) {
            t = (t * t) % q_;
            ++m;
        }
        if (m == r) return std::nullopt; // unreachable for residues
        mpz_class gs;
        mpz_class two_exp = 1;
        mpz_mul_2exp(two_exp.get_mpz_t(), two_exp.get_mpz_t(), r - m - 1);
        mpz_powm(gs.get_mpz_t(), g.get_mpz_t(), two_exp.get_mpz_t(), q_.get_mpz_t());
        x = (x * gs) % q_;
        g = (gs * gs) % q_;
        b = (b * g) % q_;
        r = m;
    }
    return from_mpz(x);
}

FieldElement PrimeField::shl(const FieldElement& a, const FieldElement& b) const {
    check2(a, b);
    // a * 2^b mod q, identical to shifting the unbounded integer then reducing.
    if (small_) {
        uint64_t p2 = powmod_u64(2, b.sv_, qs_);
        return make_small(mulmod_u64(a.sv_, p2, qs_));
    }
    mpz_class p2;
    mpz_class two = 2;
    mpz_powm(p2.get_mpz_t(), two.get_mpz_t(), b.bv_.get_mpz_t(), q_.get_mpz_t());
    return mul(a, make_big(std::move(p2)));
}

FieldElement PrimeField::shr(const FieldElement& a, const FieldElement& b) const {
    check2(a, b);
    if (small_) {
        if (b.sv_ >= 64) return make_small(0);
        return make_small(a.sv_ >> b.sv_);
    }
    size_t abits = a.bv_ == 0 ? 0 : mpz_sizeinbase(a.bv_.get_mpz_t(), 2);
    if (b.bv_ >= static_cast<unsigned long>(abits)) return make_big(0);
    mpz_class r;
    mpz_fdiv_q_2exp(r.get_mpz_t(), a.bv_.get_mpz_t(), b.bv_.get_ui());
    return make_big(std::move(r));
}

FieldElement PrimeField::bit_and(const FieldElement& a, const FieldElement& b) const {
    check2(a, b);
    if (small_) return make_small(a.sv_ & b.sv_);
    mpz_class r;
    mpz_and(r.get_mpz_t(), a.bv_.get_mpz_t(), b.bv_.get_mpz_t());
    return make_big(std::move(r)); // result <= min(a, b) < q
}

FieldElement PrimeField::bit_or(const FieldElement& a, const FieldElement& b) const {
    check2(a, b);
    if (small_) return make_small((a.sv_ | b.sv_) % qs_);
    mpz_class r;
    mpz_ior(r.get_mpz_t(), a.bv_.get_mpz_t(), b.bv_.get_mpz_t());
    if (r >= q_) r -= q_; // or can exceed q-1 by at most setting bits below the top
    if (r >= q_) mpz_mod(r.get_mpz_t(), r.get_mpz_t(), q_.get_mpz_t());
    return make_big(std::move(r));
}

FieldElement PrimeField::bit_xor(const FieldElement& a, const FieldElement& b) const {
    check2(a, b);
    if (small_) return make_small((a.sv_ ^ b.sv_) % qs_);
    mpz_class r;
    mpz_xor(r.get_mpz_t(), a.bv_.get_mpz_t(), b.bv_.get_mpz_t());
    if (r >= q_) r -= q_;
    if (r >= q_) mpz_mod(r.get_mpz_t(), r.get_mpz_t(), q_.get_mpz_t());
    return make_big(std::move(r));
}

FieldElement PrimeField::pow_m(const FieldElement& a, const mpz_class& e) const {
    check(a);
    if (e < 0) throw FieldError("negative exponent");
    mpz_class base = a.to_mpz();
    mpz_class r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), q_.get_mpz_t());
    return from_mpz(r);
}

FieldElement PrimeField::pow_u(const FieldElement& a, uint64_t e) const {
    check(a);
    if (small_) return make_small(powmod_u64(a.sv_, e, qs_));
    mpz_class ee;
    mpz_import(ee.get_mpz_t(), 1, -1, sizeof(uint64_t), 0, 0, &e);
    mpz_class r;
    mpz_powm(r.get_mpz_t(), a.bv_.get_mpz_t(), ee.get_mpz_t(), q_.get_mpz_t());
    return make_big(std::move(r));
}

} // namespace zkforge
