#pragma once

// Borel operational calculus: F(A) built from the truncations
// F_n = F·χ_{|F| <= n}, applied coordinatewise on the diagonal model and
// through the eigen system on the finite model. For finitely supported
// vectors the truncation limit stabilizes at a computable finite level, so
// apply_function is exact where the model is.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "stso/borel_function.hpp"
#include "stso/finite_operator.hpp"
#include "stso/operators.hpp"
#include "stso/vector.hpp"

namespace stso {

enum class DomainVerdict { Member, NonMember, UndeterminedAtTruncation };

inline const char* to_string(DomainVerdict v) {
    switch (v) {
        case DomainVerdict::Member: return "member";
        case DomainVerdict::NonMember: return "non-member";
        case DomainVerdict::UndeterminedAtTruncation: return "undetermined-at-truncation";
    }
    return "?";
}

struct CalculusResult {
    FiniteVector value;
    long converged_at = 0;  // F_m(A)f equals value for every m >= this level
    DomainVerdict domain_verdict = DomainVerdict::Member;
};

inline FiniteVector apply_truncated(const DiagonalOperator& a, const BorelFunction& f, long n,
                                    const FiniteVector& x) {
    const BorelFunction fn = truncate_function(f, n);
    FiniteVector out;
    for (const auto& [k, v] : x.coords()) out.set(k, fn.eval(a.eigenvalue(k)) * v);
    return out;
}

inline FiniteVector apply_truncated(const FiniteDiagonalizableOperator& a, const BorelFunction& f,
                                    long n, const FiniteVector& x) {
    const BorelFunction fn = truncate_function(f, n);
    const int d = a.dimension();
    Matrix diag = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i)
        diag(i, i) = to_complex(fn.eval(to_rational(a.eigenvalues()[i])));
    const Matrix op = a.similarity() * diag * a.similarity_inverse();
    return FiniteDiagonalizableOperator::from_dense(op * a.to_dense(x));
}

inline CalculusResult apply_function(const DiagonalOperator& a, const BorelFunction& f,
                                     const FiniteVector& x) {
    CalculusResult result;
    Rational max_abs2 = 0;
    for (const auto& [k, v] : x.coords()) {
        const RationalComplex fv = f.eval(a.eigenvalue(k));
        max_abs2 = std::max(max_abs2, fv.abs2());
        result.value.set(k, fv * v);
    }
    result.converged_at = ceil_sqrt(max_abs2).convert_to<long>();
    return result;
}

inline CalculusResult apply_function(const FiniteDiagonalizableOperator& a,
                                     const BorelFunction& f, const FiniteVector& x) {
    CalculusResult result;
    const int d = a.dimension();
    Matrix diag = Matrix::Zero(d, d);
    Rational max_abs2 = 0;
    for (int i = 0; i < d; ++i) {
        const RationalComplex fv = f.eval(to_rational(a.eigenvalues()[i]));
        max_abs2 = std::max(max_abs2, fv.abs2());
        diag(i, i) = to_complex(fv);
    }
    const Matrix op = a.similarity() * diag * a.similarity_inverse();
    result.value = FiniteDiagonalizableOperator::from_dense(op * a.to_dense(x));
    result.converged_at = ceil_sqrt(max_abs2).convert_to<long>();
    return result;
}

// Analytic decay descriptor for vectors that are not finitely supported:
// |x_k| = r^k or |x_k| = k^(-s).
struct DecayProfile {
    enum class Kind { Geometric, PowerLaw };
    Kind kind = Kind::Geometric;
    double ratio = 0.5;
    double exponent = 1.0;

    static DecayProfile geometric(double r) {
        if (!(r > 0)) throw std::invalid_argument("geometric ratio must be positive");
        return {Kind::Geometric, r, 0.0};
    }
    static DecayProfile power_law(double s) {
        if (!(s > 0)) throw std::invalid_argument("power-law exponent must be positive");
        return {Kind::PowerLaw, 0.0, s};
    }
};

// Membership of the descriptor vector in D(F(A)), i.e. convergence of
// Σ |F(λ(k))·x_k|^p. The growth of |F(λ(k))| is bracketed by integer
// polynomial envelopes certified by monotonicity over the window
// [N/2, N]; the verdict then follows from a geometric-ratio or p-series
// comparison against the descriptor. A missing certificate yields
// undetermined-at-truncation rather than a guess.
inline DomainVerdict domain_member(const DiagonalOperator& a, const BorelFunction& f,
                                   const DecayProfile& x, long truncation = 10000) {
    const double p = a.space_p();
    if (x.kind == DecayProfile::Kind::Geometric && x.ratio >= 1.0)
        throw PreconditionError("geometric descriptor lies outside the space");
    if (x.kind == DecayProfile::Kind::PowerLaw && x.exponent * p <= 1.0)
        throw PreconditionError("power-law descriptor lies outside the space");
    if (truncation < 16) throw std::invalid_argument("truncation too small");

    const long lo = truncation / 2;
    std::vector<double> g;
    g.reserve(truncation - lo + 1);
    for (long k = lo; k <= truncation; ++k)
        g.push_back(sqrt_to_double(f.eval(a.eigenvalue(k)).abs2()));

    const bool all_zero = std::all_of(g.begin(), g.end(), [](double v) { return v == 0.0; });
    if (all_zero) return DomainVerdict::Member;

    const auto monotone = [&](int m, bool up) {
        double prev = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double k = double(lo + static_cast<long>(i));
            const double h = g[i] * std::pow(k, -m);
            if (i > 0) {
                if (up && h > prev * (1.0 + 1e-12) + 1e-300) return false;
                if (!up && h < prev * (1.0 - 1e-12) - 1e-300) return false;
            }
            prev = h;
        }
        return true;
    };

    // smallest upper envelope exponent: g(k)/k^m non-increasing
    std::optional<int> m_up;
    for (int m = -8; m <= 8 && !m_up; ++m)
        if (monotone(m, true)) m_up = m;
    // largest lower envelope exponent: g(k)/k^m non-decreasing
    std::optional<int> m_lo;
    for (int m = 8; m >= -8 && !m_lo; --m)
        if (g.front() > 0.0 && monotone(m, false)) m_lo = m;

    if (x.kind == DecayProfile::Kind::Geometric)
        return m_up ? DomainVerdict::Member : DomainVerdict::UndeterminedAtTruncation;

    const double s = x.exponent;
    if (m_up && (s - *m_up) * p > 1.0) return DomainVerdict::Member;
    if (m_lo && (s - *m_lo) * p <= 1.0) return DomainVerdict::NonMember;
    return DomainVerdict::UndeterminedAtTruncation;
}

}  // namespace stso
