#pragma once

// Structural analysis of eigenvalue tail expressions. Expressions of the
// shape c + q*n^e (c, q complex rational, e integer) admit exact answers to
// the questions the spectral computations ask about the infinite tail:
// the n -> infinity limit, the infimum of |tail(n) - z| over all n past a
// point (including the limit value, so the infimum is taken over the closure
// of the tail), and the exact indices where tail(n) hits a given value.
//
// For 0 < u = n^e the squared distance is the convex quadratic
//   f(u) = |q|^2 u^2 + 2 Re((c-z) conj(q)) u + |c-z|^2,
// so the discrete infimum is attained at the integers bracketing the vertex,
// at the range endpoint, or in the limit.

#include <cstdint>
#include <optional>
#include <vector>

#include "stso/lambda_expr.hpp"
#include "stso/rational.hpp"

namespace stso {

struct TailForm {
    RationalComplex c;        // constant part
    RationalComplex q;        // coefficient of n^e
    std::int64_t e = 0;
    bool is_constant() const { return q.is_zero(); }
};

// --- structural matcher -----------------------------------------------------

namespace detail {

inline std::optional<TailForm> match_node(const ExprNode* node) {
    switch (node->kind) {
        case ExprKind::Literal:
            return TailForm{node->literal, RationalComplex(), 0};
        case ExprKind::Var:
            return TailForm{RationalComplex(), RationalComplex(1), 1};
        case ExprKind::Neg: {
            auto t = match_node(node->lhs.get());
            if (!t) return std::nullopt;
            return TailForm{-t->c, -t->q, t->e};
        }
        case ExprKind::Add:
        case ExprKind::Sub: {
            auto a = match_node(node->lhs.get());
            auto b = match_node(node->rhs.get());
            if (!a || !b) return std::nullopt;
            if (node->kind == ExprKind::Sub) *b = TailForm{-b->c, -b->q, b->e};
            if (a->is_constant()) return TailForm{a->c + b->c, b->q, b->e};
            if (b->is_constant()) return TailForm{a->c + b->c, a->q, a->e};
            if (a->e == b->e) {
                RationalComplex q = a->q + b->q;
                if (q.is_zero()) return TailForm{a->c + b->c, RationalComplex(), 0};
                return TailForm{a->c + b->c, q, a->e};
            }
            return std::nullopt;
        }
        case ExprKind::Mul: {
            auto a = match_node(node->lhs.get());
            auto b = match_node(node->rhs.get());
            if (!a || !b) return std::nullopt;
            if (a->is_constant())
                return TailForm{a->c * b->c, a->c * b->q, b->e};
            if (b->is_constant())
                return TailForm{b->c * a->c, b->c * a->q, a->e};
            if (a->c.is_zero() && b->c.is_zero()) {
                const std::int64_t e = a->e + b->e;
                if (e < -kMaxExponent || e > kMaxExponent) return std::nullopt;
                if (e == 0) return TailForm{a->q * b->q, RationalComplex(), 0};
                return TailForm{RationalComplex(), a->q * b->q, e};
            }
            return std::nullopt;
        }
        case ExprKind::Div: {
            auto a = match_node(node->lhs.get());
            auto b = match_node(node->rhs.get());
            if (!a || !b) return std::nullopt;
            if (b->is_constant()) {
                if (b->c.is_zero()) return std::nullopt;
                return TailForm{a->c / b->c, a->q / b->c, a->e};
            }
            // constant / pure power only; 1/(c + q n^e) with c != 0 is not
            // of the supported shape
            if (a->is_constant() && b->c.is_zero()) {
                if (a->c.is_zero()) return TailForm{RationalComplex(), RationalComplex(), 0};
                const std::int64_t e = -b->e;
                if (e == 0) return TailForm{a->c / b->q, RationalComplex(), 0};
                return TailForm{RationalComplex(), a->c / b->q, e};
            }
            return std::nullopt;
        }
        case ExprKind::Pow: {
            auto a = match_node(node->lhs.get());
            if (!a) return std::nullopt;
            const std::int64_t k = node->exponent;
            if (a->is_constant()) return TailForm{pow(a->c, k), RationalComplex(), 0};
            if (k == 0) return TailForm{RationalComplex(1), RationalComplex(), 0};
            if (k == 1) return a;
            if (!a->c.is_zero()) return std::nullopt;
            if (a->q.is_zero()) return TailForm{RationalComplex(), RationalComplex(), 0};
            const std::int64_t e = a->e * k;
            if (e < -kMaxExponent || e > kMaxExponent) return std::nullopt;
            if (e == 0) return TailForm{pow(a->q, k), RationalComplex(), 0};
            return TailForm{RationalComplex(), pow(a->q, k), e};
        }
    }
    return std::nullopt;
}

}  // namespace detail

inline std::optional<TailForm> match_tail_form(const LambdaExpr& expr) {
    if (!expr.valid()) return std::nullopt;
    auto t = detail::match_node(expr.root.get());
    if (t && !t->is_constant() && t->e == 0) {
        t->c = t->c + t->q;
        t->q = RationalComplex();
    }
    return t;
}

// Finite n -> infinity limit; none when the power part diverges.
inline std::optional<RationalComplex> tail_limit(const TailForm& t) {
    if (t.is_constant() || t.e < 0) return t.c;
    return std::nullopt;
}

// --- integer root helpers ---------------------------------------------------

// floor(v^(1/k)) for v >= 0, k >= 1.
inline BigInt floor_kth_root(const BigInt& v, unsigned k) {
    if (v < 0) throw EvalError("root of negative value");
    if (v == 0 || k == 1) return v;
    const unsigned bits = boost::multiprecision::msb(v) + 1;
    BigInt hi = BigInt(1) << (bits / k + 1);
    BigInt lo = 0;
    while (lo < hi) {
        const BigInt mid = (lo + hi + 1) / 2;
        if (boost::multiprecision::pow(mid, k) <= v)
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

// floor(w^(1/k)) for rational w > 0: the largest m >= 0 with m^k <= w.
inline BigInt floor_root_rational(const Rational& w, unsigned k) {
    if (w <= 0) return 0;
    const BigInt num = boost::multiprecision::numerator(w);
    const BigInt den = boost::multiprecision::denominator(w);
    BigInt m = floor_kth_root(num / den, k);
    // floor of the integer quotient can undershoot by one
    while (boost::multiprecision::pow(m + 1, k) * den <= num) ++m;
    while (m > 0 && boost::multiprecision::pow(m, k) * den > num) --m;
    return m;
}

// n^e as an exact rational, n >= 1.
inline Rational rational_power(const BigInt& n, std::int64_t e) {
    if (e == 0) return 1;
    const BigInt p = boost::multiprecision::pow(n, static_cast<unsigned>(e < 0 ? -e : e));
    return e < 0 ? Rational(1, p) : Rational(p);
}

// --- infimum over the tail closure ------------------------------------------

// Infimum of |tail(n) - z|^2 over integers n >= n_start, together with the
// n -> infinity limit value when it exists. The result is the exact squared
// distance from z to the closure of the tail segment. An excluded index
// (the unique n with tail(n) = z, typically) is skipped; by convexity the
// infimum over the remaining indices is attained next to the vertex, next
// to the excluded index, at the endpoint, or in the limit.
inline Rational tail_closure_inf_dist2(const TailForm& t, const RationalComplex& z,
                                       long n_start = 1,
                                       const std::optional<BigInt>& exclude = std::nullopt) {
    const RationalComplex d = t.c - z;
    if (t.is_constant()) return d.abs2();

    const Rational alpha = t.q.abs2();
    const Rational beta = d.re * t.q.re + d.im * t.q.im;
    const Rational delta = d.abs2();
    const auto f = [&](const Rational& u) { return alpha * u * u + 2 * beta * u + delta; };

    std::vector<BigInt> candidates{BigInt(n_start), BigInt(n_start) + 1};
    if (beta < 0) {
        const Rational vertex = -beta / alpha;  // optimal u = n^e
        const unsigned k = static_cast<unsigned>(t.e < 0 ? -t.e : t.e);
        const BigInt m = t.e > 0 ? floor_root_rational(vertex, k)
                                 : floor_root_rational(Rational(1) / vertex, k);
        for (int off = -1; off <= 2; ++off) {
            const BigInt cand = m + off;
            if (cand >= n_start) candidates.push_back(cand);
        }
    }
    if (exclude) {
        if (*exclude - 1 >= n_start) candidates.push_back(*exclude - 1);
        candidates.push_back(*exclude + 1);
    }

    std::optional<Rational> best;
    for (const BigInt& n : candidates) {
        if (n < n_start || (exclude && n == *exclude)) continue;
        const Rational value = f(rational_power(n, t.e));
        if (!best || value < *best) best = value;
    }
    if (t.e < 0 && (!best || delta < *best)) best = delta;  // the limit point c
    return *best;
}

// Exact squared distance from z to the closure of the whole tail.
inline Rational tail_closure_dist2(const TailForm& t, const RationalComplex& z) {
    return tail_closure_inf_dist2(t, z, 1);
}

// --- exact solutions of tail(n) = z -----------------------------------------

struct TailHits {
    bool every_n = false;          // constant tail equal to z
    std::optional<BigInt> index;   // unique solving n, if any
    bool any() const { return every_n || index.has_value(); }
};

inline TailHits tail_solve(const TailForm& t, const RationalComplex& z) {
    TailHits hits;
    if (t.is_constant()) {
        hits.every_n = (t.c == z);
        return hits;
    }
    const RationalComplex w = (z - t.c) / t.q;  // need n^e = w
    if (w.im != 0 || w.re <= 0) return hits;
    const unsigned k = static_cast<unsigned>(t.e < 0 ? -t.e : t.e);
    const Rational target = t.e > 0 ? w.re : Rational(1) / w.re;
    const BigInt m = floor_root_rational(target, k);
    if (m >= 1 && rational_power(m, t.e) == w.re) hits.index = m;
    return hits;
}

}  // namespace stso
