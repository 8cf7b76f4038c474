#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace zkforge {

struct FieldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* Operands belong to different prime fields. */
struct FieldMismatch : FieldError {
    using FieldError::FieldError;
};

/* Division (or integer division/modulo) by zero. This is the runtime event
 * that turns an execution into an abort trace downstream; at the library
 * level it is a throwing error. */
struct DivisionByZero : FieldError {
    using FieldError::FieldError;
};

struct NotPrime : FieldError {
    using FieldError::FieldError;
};

class PrimeField;

/* A canonical residue in [0, q). Value storage is dual: fields with q < 2^32
 * keep the value in a machine word, larger fields use GMP. Both paths run the
 * same algorithms on the same canonical values, so results are identical. */
class FieldElement {
  public:
    FieldElement() = default;

    const PrimeField* field() const { return fp_; }

    /* Canonical residue as an arbitrary-precision integer. */
    mpz_class to_mpz() const;
    std::string to_string() const;
    uint64_t to_uint64() const; // requires value < 2^64

    bool is_zero() const;
    bool is_one() const;

    bool operator==(const FieldElement& o) const;
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

  private:
    friend class PrimeField;
    friend struct FieldElementHash;

    uint64_t sv_ = 0;   // value when the field is small
    mpz_class bv_;      // value otherwise
    const PrimeField* fp_ = nullptr;
};

struct FieldElementHash {
    size_t operator()(const FieldElement& e) const;
};

class PrimeField {
  public:
    /* Throws NotPrime unless modulus is a probable prime >= 2. */
    explicit PrimeField(const mpz_class& modulus);
    explicit PrimeField(uint64_t modulus) : PrimeField(mpz_class(static_cast<unsigned long>(modulus))) {}

    PrimeField(const PrimeField&) = delete;
    PrimeField& operator=(const PrimeField&) = delete;

    static const mpz_class& bn254_modulus();

    const mpz_class& modulus() const { return q_; }
    bool is_small() const { return small_; }
    uint64_t small_modulus() const { return qs_; }
    /* Number of bits in q. */
    size_t bits() const { return bits_; }

    FieldElement zero() const { return from_uint(0); }
    FieldElement one() const { return from_uint(1); }
    FieldElement from_uint(uint64_t v) const;
    /* Reduces an arbitrary integer (possibly negative) into [0, q). */
    FieldElement from_mpz(const mpz_class& v) const;
    FieldElement from_string(const std::string& decimal) const;

    bool same_field(const FieldElement& a) const;

    FieldElement add(const FieldElement& a, const FieldElement& b) const;
    FieldElement sub(const FieldElement& a, const FieldElement& b) const;
    FieldElement mul(const FieldElement& a, const FieldElement& b) const;
    FieldElement neg(const FieldElement& a) const;
    /* a^(-1); throws DivisionByZero for a = 0. */
    FieldElement inv(const FieldElement& a) const;
    /* a * b^(q-2); throws DivisionByZero for b = 0. */
    FieldElement div(const FieldElement& a, const FieldElement& b) const;

    /* a.value if a.value <= (q-1)/2, else a.value - q. */
    mpz_class signed_repr(const FieldElement& a) const;
    /* Compare signed representatives: -1, 0 or 1. */
    int cmp_signed(const FieldElement& a, const FieldElement& b) const;

    /* Integer quotient/remainder of the canonical residues; throws
     * DivisionByZero for b = 0. */
    FieldElement int_div(const FieldElement& a, const FieldElement& b) const;
    FieldElement int_mod(const FieldElement& a, const FieldElement& b) const;

    /* Euler's criterion; 0 counts as a residue. */
    bool is_quadratic_residue(const FieldElement& a) const;
    /* Tonelli-Shanks. Returns one of the two roots (unspecified which), or
     * nullopt for a non-residue. */
    std::optional<FieldElement> sqrt(const FieldElement& a) const;

    /* Bit operations treat canonical residues as unbounded non-negative
     * integers and reduce the result mod q. Left shift is computed as
     * a * 2^b mod q so huge shift amounts stay cheap. */
    FieldElement shl(const FieldElement& a, const FieldElement& b) const;
    FieldElement shr(const FieldElement& a, const FieldElement& b) const;
    FieldElement bit_and(const FieldElement& a, const FieldElement& b) const;
    FieldElement bit_or(const FieldElement& a, const FieldElement& b) const;
    FieldElement bit_xor(const FieldElement& a, const FieldElement& b) const;

    /* a^e mod q by repeated squaring (e is a plain machine integer; the
     * compiler restricts ** exponents to compile-time constants). */
    FieldElement pow_u(const FieldElement& a, uint64_t e) const;
    /* Same with an arbitrary non-negative exponent. */
    FieldElement pow_m(const FieldElement& a, const mpz_class& e) const;

  private:
    FieldElement make_small(uint64_t v) const;
    FieldElement make_big(mpz_class v) const;
    void check(const FieldElement& a) const;
    void check2(const FieldElement& a, const FieldElement& b) const;

    mpz_class q_;
    mpz_class half_;     // (q-1)/2
    mpz_class qm2_;      // q-2
    uint64_t qs_ = 0;    // q when small
    uint64_t halfs_ = 0; // (q-1)/2 when small
    size_t bits_ = 0;
    bool small_ = false;
};

} // namespace zkforge
