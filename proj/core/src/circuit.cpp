#include "zkforge/circuit.hpp"

namespace zkforge {

bool truthy(const FieldElement& v) { return !v.is_zero(); }

FieldElement eval_bin_op(const PrimeField& f, ast::BinOp op, const FieldElement& a,
                         const FieldElement& b) {
    using ast::BinOp;
    auto boolean = [&](bool v) { return v ? f.one() : f.zero(); };
    switch (op) {
        case BinOp::kAdd: return f.add(a, b);
        case BinOp::kSub: return f.sub(a, b);
        case BinOp::kMul: return f.mul(a, b);
        case BinOp::kDiv: return f.div(a, b);
        case BinOp::kIntDiv: return f.int_div(a, b);
        case BinOp::kMod: return f.int_mod(a, b);
        case BinOp::kPow: return f.pow_m(a, b.to_mpz());
        case BinOp::kShl: return f.shl(a, b);
        case BinOp::kShr: return f.shr(a, b);
        case BinOp::kLt: return boolean(f.cmp_signed(a, b) < 0);
        case BinOp::kLe: return boolean(f.cmp_signed(a, b) <= 0);
        case BinOp::kGt: return boolean(f.cmp_signed(a, b) > 0);
        case BinOp::kGe: return boolean(f.cmp_signed(a, b) >= 0);
        case BinOp::kEq: return boolean(a == b);
        case BinOp::kNe: return boolean(!(a == b));
        case BinOp::kBitAnd: return f.bit_and(a, b);
        case BinOp::kBitOr: return f.bit_or(a, b);
        case BinOp::kBitXor: return f.bit_xor(a, b);
        case BinOp::kLAnd: return boolean(truthy(a) && truthy(b));
        case BinOp::kLOr: return boolean(truthy(a) || truthy(b));
    }
    throw FieldError("unknown binary operator");
}

FieldElement eval_un_op(const PrimeField& f, ast::UnOp op, const FieldElement& a) {
    switch (op) {
        case ast::UnOp::kNeg: return f.neg(a);
        case ast::UnOp::kNot: return a.is_zero() ? f.one() : f.zero();
    }
    throw FieldError("unknown unary operator");
}

FieldElement eval_constraint(const PrimeField& f, const Constraint& c,
                             const std::vector<FieldElement>& assignment) {
    FieldElement acc = f.zero();
    for (const auto& [m, coeff] : c.terms) {
        FieldElement t = coeff;
        if (m.i >= 0) t = f.mul(t, assignment[static_cast<size_t>(m.i)]);
        if (m.j >= 0) t = f.mul(t, assignment[static_cast<size_t>(m.j)]);
        acc = f.add(acc, t);
    }
    return acc;
}

} // namespace zkforge
