#include "zkforge/selectors.hpp"

#include <algorithm>

namespace zkforge {

// ---- skewed sampler ----

SkewedSampler::SkewedSampler(std::shared_ptr<const PrimeField> field)
    : SkewedSampler(std::move(field), 10, 100) {}

SkewedSampler SkewedSampler::less_skewed(std::shared_ptr<const PrimeField> field) {
    return SkewedSampler(std::move(field), 100, 1000);
}

SkewedSampler::SkewedSampler(std::shared_ptr<const PrimeField> field,
                             const mpz_class& small_hi, const mpz_class& top_span)
    : field_(std::move(field)) {
    mpz_class top = field_->modulus() - 1;  // largest element

    std::vector<Band> raw;
    raw.push_back({0, std::min(mpz_class(1), top), 0.15});
    if (top >= 2) raw.push_back({2, std::min(small_hi, top), 0.34});
    {
        mpz_class lo = top - top_span + 1;
        if (lo < 2) lo = 2;  // never swallow the binary band
        if (lo <= top) raw.push_back({lo, top, 0.50});
    }

    /* Merge overlapping ranges, accumulating their mass. The list is
     * ordered by lo already (binary, small, near-top). */
    for (const auto& b : raw) {
        if (!bands_.empty() && b.lo <= bands_.back().hi) {
            bands_.back().hi = std::max(bands_.back().hi, b.hi);
            bands_.back().prob += b.prob;
        } else {
            bands_.push_back(b);
        }
    }

    /* The leftover band: everything not covered. With the canonical layout
     * this is a single gap between the small and near-top bands. */
    double other = 0.01;
    std::vector<Band> gaps;
    mpz_class next = 0;
    for (const auto& b : bands_) {
        if (next < b.lo) gaps.push_back({next, b.lo - 1, 0.0});
        next = b.hi + 1;
    }
    if (next <= top) gaps.push_back({next, top, 0.0});
    if (!gaps.empty()) {
        double share = other / static_cast<double>(gaps.size());
        for (auto& g : gaps) {
            g.prob = share;
            bands_.push_back(g);
        }
    }

    double total = 0;
    for (const auto& b : bands_) total += b.prob;
    for (auto& b : bands_) b.prob /= total;
}

FieldElement SkewedSampler::draw(Rng& rng) const {
    double u = static_cast<double>(rng.next() >> 11) * 0x1.0p-53;
    double acc = 0;
    const Band* pick = &bands_.back();
    for (const auto& b : bands_) {
        acc += b.prob;
        if (u < acc) {
            pick = &b;
            break;
        }
    }
    mpz_class width = pick->hi - pick->lo + 1;
    mpz_class v = pick->lo + rng.bounded_mpz(width);
    return field_->from_mpz(v);
}

// ---- array guard ----

ArrayGuardState::ArrayGuardState(const CompiledCircuit& c, int threshold)
    : threshold_(threshold) {
    if (!c.subscript_dims.empty()) {
        has_arrays_ = true;
        min_dim_ = static_cast<uint64_t>(
            *std::min_element(c.subscript_dims.begin(), c.subscript_dims.end()));
    }
}

void ArrayGuardState::observe_abort(const AbortInfo& info) {
    if (info.kind == AbortKind::kOutOfRangeSubscript) {
        if (++consecutive_ >= threshold_ && has_arrays_ && !cap_) cap_ = min_dim_;
    } else {
        consecutive_ = 0;
    }
}

std::vector<FieldElement> sample_input(const SkewedSampler& sampler,
                                       const SignalLayout& layout,
                                       const ArrayGuardState& guard, Rng& rng) {
    std::vector<FieldElement> x;
    x.reserve(static_cast<size_t>(layout.n));
    const PrimeField& F = sampler.field();
    if (auto cap = guard.cap()) {
        for (int i = 0; i < layout.n; ++i)
            x.push_back(F.from_uint(rng.bounded(*cap + 1)));
    } else {
        for (int i = 0; i < layout.n; ++i) x.push_back(sampler.draw(rng));
    }
    return x;
}

// ---- zero-division targets ----

namespace {

/* Convert an expression DAG into a polynomial over input slots; fails on
 * anything non-polynomial, degree > 2, or touching non-input slots. */
std::optional<InputPoly> to_input_poly(const PrimeField& F, const RExpr& e, int n);

std::optional<InputPoly> poly_const(const PrimeField& F, const FieldElement& v) {
    InputPoly p;
    if (!v.is_zero()) p.terms[{}] = v;
    return p;
}

int mono_degree(const Monomial& m) { return (m.i >= 0 ? 1 : 0) + (m.j >= 0 ? 1 : 0); }

std::optional<InputPoly> poly_add(const PrimeField& F, const InputPoly& a,
                                  const InputPoly& b, bool negate_b) {
    InputPoly r = a;
    for (const auto& [m, c] : b.terms) {
        FieldElement v = negate_b ? F.neg(c) : c;
        auto it = r.terms.find(m);
        if (it == r.terms.end()) {
            r.terms[m] = v;
        } else {
            it->second = F.add(it->second, v);
            if (it->second.is_zero()) r.terms.erase(it);
        }
    }
    return r;
}

std::optional<InputPoly> poly_mul(const PrimeField& F, const InputPoly& a,
                                  const InputPoly& b) {
    InputPoly r;
    for (const auto& [ma, ca] : a.terms) {
        for (const auto& [mb, cb] : b.terms) {
            if (mono_degree(ma) + mono_degree(mb) > 2) return std::nullopt;
            std::vector<int> vs;
            if (ma.i >= 0) vs.push_back(ma.i);
            if (ma.j >= 0) vs.push_back(ma.j);
            if (mb.i >= 0) vs.push_back(mb.i);
            if (mb.j >= 0) vs.push_back(mb.j);
            Monomial m;
            if (vs.size() == 1) {
                m.i = vs[0];
            } else if (vs.size() == 2) {
                m.i = std::min(vs[0], vs[1]);
                m.j = std::max(vs[0], vs[1]);
            }
            FieldElement c = F.mul(ca, cb);
            auto it = r.terms.find(m);
            if (it == r.terms.end()) {
                if (!c.is_zero()) r.terms[m] = c;
            } else {
                it->second = F.add(it->second, c);
                if (it->second.is_zero()) r.terms.erase(it);
            }
        }
    }
    return r;
}

std::optional<InputPoly> to_input_poly(const PrimeField& F, const RExpr& e, int n) {
    switch (e.kind) {
        case RKind::kConst: return poly_const(F, e.cval);
        case RKind::kSlot: {
            if (e.slot >= n) return std::nullopt;
            InputPoly p;
            p.terms[{e.slot, -1}] = F.one();
            return p;
        }
        case RKind::kUn: {
            if (e.uop != ast::UnOp::kNeg) return std::nullopt;
            auto k = to_input_poly(F, *e.kids[0], n);
            if (!k) return std::nullopt;
            InputPoly r;
            for (const auto& [m, c] : k->terms) r.terms[m] = F.neg(c);
            return r;
        }
        case RKind::kPow: {
            if (e.exp == 0) return poly_const(F, F.one());
            auto base = to_input_poly(F, *e.kids[0], n);
            if (!base) return std::nullopt;
            if (e.exp == 1) return base;
            if (e.exp == 2) return poly_mul(F, *base, *base);
            return std::nullopt;
        }
        case RKind::kBin: {
            auto a = to_input_poly(F, *e.kids[0], n);
            if (!a) return std::nullopt;
            auto b = to_input_poly(F, *e.kids[1], n);
            if (!b) return std::nullopt;
            switch (e.bop) {
                case ast::BinOp::kAdd: return poly_add(F, *a, *b, false);
                case ast::BinOp::kSub: return poly_add(F, *a, *b, true);
                case ast::BinOp::kMul: return poly_mul(F, *a, *b);
                case ast::BinOp::kDiv: {
                    if (b->terms.size() != 1) return std::nullopt;
                    auto it = b->terms.begin();
                    if (it->first != Monomial{} || it->second.is_zero())
                        return std::nullopt;
                    FieldElement s = F.inv(it->second);
                    InputPoly r;
                    for (const auto& [m, c] : a->terms) r.terms[m] = F.mul(c, s);
                    return r;
                }
                default: return std::nullopt;
            }
        }
        default: return std::nullopt;
    }
}

void collect_divisions(const PrimeField& F, const RExprPtr& e, int n, int instr,
                       std::vector<ZeroDivTarget>& out,
                       std::vector<const RExpr*>& seen) {
    if (!e) return;
    if (std::find(seen.begin(), seen.end(), e.get()) != seen.end()) return;
    seen.push_back(e.get());
    if (e->kind == RKind::kBin &&
        (e->bop == ast::BinOp::kDiv || e->bop == ast::BinOp::kIntDiv)) {
        auto num = to_input_poly(F, *e->kids[0], n);
        auto den = to_input_poly(F, *e->kids[1], n);
        if (num && den) out.push_back({instr, *num, *den});
    }
    for (const auto& kid : e->kids) collect_divisions(F, kid, n, instr, out, seen);
}

} // namespace

std::vector<ZeroDivTarget> find_zero_div_targets(const CompiledCircuit& c) {
    std::vector<ZeroDivTarget> out;
    for (size_t i = 0; i < c.instrs.size(); ++i) {
        const Instr& ins = c.instrs[i];
        if (ins.kind != InstrKind::kAssign || !ins.weak) continue;
        std::vector<const RExpr*> seen;
        collect_divisions(*c.field, ins.rhs, c.layout.n, static_cast<int>(i), out, seen);
    }
    return out;
}

std::vector<FieldElement> solve_roots(const PrimeField& f, const FieldElement& a,
                                      const FieldElement& b, const FieldElement& c) {
    std::vector<FieldElement> roots;
    if (a.is_zero()) {
        if (b.is_zero()) return roots;  // constant polynomial
        roots.push_back(f.neg(f.div(c, b)));
        return roots;
    }
    // v = (-b ± sqrt(b^2 - 4ac)) / 2a
    FieldElement disc = f.sub(f.mul(b, b), f.mul(f.from_uint(4), f.mul(a, c)));
    auto r = f.sqrt(disc);
    if (!r) return roots;
    FieldElement inv2a = f.inv(f.add(a, a));
    FieldElement r1 = f.mul(f.sub(r.value(), b), inv2a);
    roots.push_back(r1);
    if (!r->is_zero()) {
        FieldElement r2 = f.mul(f.sub(f.neg(r.value()), b), inv2a);
        roots.push_back(r2);
    }
    return roots;
}

std::optional<Univariate> reduce_to_var(const PrimeField& f, const InputPoly& p,
                                        const std::vector<FieldElement>& env) {
    int var = -1;
    for (const auto& [m, c] : p.terms) {
        if (m.i >= 0 && (var < 0 || m.i < var)) var = m.i;
        if (m.j >= 0 && m.j < var) var = m.j;
    }
    if (var < 0) return std::nullopt;

    Univariate u;
    u.var = var;
    u.a = f.zero();
    u.b = f.zero();
    u.c = f.zero();
    for (const auto& [m, coeff] : p.terms) {
        int deg = 0;
        FieldElement factor = coeff;
        if (m.i >= 0) {
            if (m.i == var)
                ++deg;
            else
                factor = f.mul(factor, env[static_cast<size_t>(m.i)]);
        }
        if (m.j >= 0) {
            if (m.j == var)
                ++deg;
            else
                factor = f.mul(factor, env[static_cast<size_t>(m.j)]);
        }
        if (deg == 2)
            u.a = f.add(u.a, factor);
        else if (deg == 1)
            u.b = f.add(u.b, factor);
        else
            u.c = f.add(u.c, factor);
    }
    return u;
}

std::optional<std::pair<int, FieldElement>> solve_zero(const PrimeField& f,
                                                       const InputPoly& p,
                                                       const std::vector<FieldElement>& env,
                                                       Rng& rng) {
    auto u = reduce_to_var(f, p, env);
    if (!u) return std::nullopt;
    std::vector<FieldElement> roots = solve_roots(f, u->a, u->b, u->c);
    if (roots.empty()) return std::nullopt;
    size_t pick = roots.size() == 1 ? 0 : rng.bounded(roots.size());
    return std::make_pair(u->var, roots[pick]);
}

void apply_zero_div(const CompiledCircuit& c, const std::vector<ZeroDivTarget>& targets,
                    std::vector<FieldElement>& input, double prob, Rng& rng) {
    const PrimeField& F = *c.field;
    for (const auto& t : targets) {
        if (rng.chance(prob)) {
            if (auto hit = solve_zero(F, t.den, input, rng))
                input[static_cast<size_t>(hit->first)] = hit->second;
        }
        if (rng.chance(prob)) {
            if (auto hit = solve_zero(F, t.num, input, rng))
                input[static_cast<size_t>(hit->first)] = hit->second;
        }
    }
}

} // namespace zkforge
