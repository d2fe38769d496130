#pragma once

// Spectrum computation and the point/continuous/residual/resolvent partition.
// Atom membership is decided in exact arithmetic wherever the tail admits a
// structural reading; a λ that is within 1e-12 of the spectrum without being
// exactly on it is reported as undetermined rather than guessed.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "stso/finite_operator.hpp"
#include "stso/measure.hpp"
#include "stso/operators.hpp"
#include "stso/tail_analysis.hpp"
#include "stso/vector.hpp"

namespace stso {

inline constexpr double kClassificationBand = 1e-12;

enum class SpectralVerdict { Point, Continuous, Residual, Resolvent };

inline const char* to_string(SpectralVerdict v) {
    switch (v) {
        case SpectralVerdict::Point: return "point";
        case SpectralVerdict::Continuous: return "continuous";
        case SpectralVerdict::Residual: return "residual";
        case SpectralVerdict::Resolvent: return "resolvent";
    }
    return "?";
}

struct SpectrumAtom {
    RationalComplex value;
    std::vector<long> indices;  // eigenvalue indices at or below the truncation
};

struct SpectrumDescription {
    std::vector<SpectrumAtom> atoms;  // distinct values in order of first appearance
    std::vector<RationalComplex> limit_points;
    bool is_scalar_type = true;
    long truncation = 0;
    std::string note;
};

struct PointClassification {
    Complex lambda;
    SpectralVerdict verdict = SpectralVerdict::Resolvent;
    std::string witness;
    std::optional<double> inverse_norm_bound;  // resolvent case
};

// --- spectra ----------------------------------------------------------------

inline SpectrumDescription compute_spectrum(const DiagonalOperator& a, long truncation) {
    if (truncation < 1) throw ModelError("truncation must be >= 1");
    const LimitPointReport lp = verify_limit_points(a, std::max(truncation, 64L));
    if (!lp.consistent) {
        std::string msg = "limit-point inconsistency:";
        for (const auto& note : lp.notes) msg += " " + note;
        throw ModelError(msg);
    }
    SpectrumDescription out;
    out.truncation = truncation;
    out.limit_points = a.limit_points();
    std::map<RationalComplex, std::size_t, RationalComplexLess> seen;
    for (long k = 1; k <= truncation; ++k) {
        const RationalComplex v = a.eigenvalue(k);
        auto it = seen.find(v);
        if (it == seen.end()) {
            seen.emplace(v, out.atoms.size());
            out.atoms.push_back({v, {k}});
        } else {
            out.atoms[it->second].indices.push_back(k);
        }
    }
    return out;
}

inline SpectrumDescription compute_spectrum(const FiniteDiagonalizableOperator& a,
                                            long /*truncation*/ = 0) {
    SpectrumDescription out;
    out.truncation = a.dimension();
    std::map<RationalComplex, std::size_t, RationalComplexLess> seen;
    for (int i = 0; i < a.dimension(); ++i) {
        const RationalComplex v = to_rational(a.eigenvalues()[i]);
        auto it = seen.find(v);
        if (it == seen.end()) {
            seen.emplace(v, out.atoms.size());
            out.atoms.push_back({v, {i + 1}});
        } else {
            out.atoms[it->second].indices.push_back(i + 1);
        }
    }
    return out;
}

inline SpectrumDescription compute_spectrum(const WeightedShiftOperator&, long /*truncation*/ = 0) {
    SpectrumDescription out;
    out.is_scalar_type = false;
    out.note =
        "weighted shift: every lambda is classified pointwise as residual via an "
        "adjoint-kernel annihilator of R(A - lambda)";
    return out;
}

inline SpectrumDescription compute_spectrum(const DifferentiationOperator&,
                                            long /*truncation*/ = 0) {
    SpectrumDescription out;
    out.is_scalar_type = false;
    out.note = "differentiation on [a,b] without boundary conditions: sigma_p = C, "
               "witnessed by the exponential eigenfunctions";
    return out;
}

// --- diagonal-model distance analysis ---------------------------------------

namespace detail {

struct DiagonalAtomHit {
    bool found = false;
    bool every_tail_index = false;
    std::optional<BigInt> global_index;  // smallest witnessing index
};

inline DiagonalAtomHit find_atom(const DiagonalOperator& a, const RationalComplex& lambda,
                                 long scan_limit) {
    DiagonalAtomHit hit;
    for (long k = 1; k <= a.prepend_count(); ++k) {
        if (a.eigenvalue(k) == lambda) {
            hit.found = true;
            hit.global_index = BigInt(k);
            return hit;
        }
    }
    if (a.tail_form()) {
        const TailHits th = tail_solve(*a.tail_form(), lambda);
        if (th.every_n) {
            hit.found = true;
            hit.every_tail_index = true;
            hit.global_index = BigInt(a.prepend_count() + 1);
        } else if (th.index) {
            hit.found = true;
            hit.global_index = *th.index + a.prepend_count();
        }
        return hit;
    }
    for (long n = 1; n <= scan_limit; ++n) {
        if (eval_lambda_expr_exact(a.tail_expr(), n) == lambda) {
            hit.found = true;
            hit.global_index = BigInt(n + a.prepend_count());
            return hit;
        }
    }
    return hit;
}

// Exact squared distance from lambda to the closure of the spectrum, with an
// optional excluded tail index (for distances to sigma minus one atom).
// Empty when the comparison set itself is empty, i.e. the distance is
// infinite. Throws when the tail has no structural form, since no finite
// scan bounds the remaining atoms away.
inline std::optional<Rational> spectrum_dist2(const DiagonalOperator& a,
                                              const RationalComplex& lambda,
                                              const std::optional<BigInt>& exclude_global,
                                              bool exclude_all_tail) {
    std::optional<Rational> best;
    const auto consider = [&](const Rational& d2) {
        if (!best || d2 < *best) best = d2;
    };
    for (long k = 1; k <= a.prepend_count(); ++k) {
        if (exclude_global && BigInt(k) == *exclude_global) continue;
        consider((a.eigenvalue(k) - lambda).abs2());
    }
    for (const auto& lp : a.limit_points())
        if (lp != lambda) consider((lp - lambda).abs2());
    if (!exclude_all_tail) {
        if (!a.tail_form())
            throw InconclusiveError(
                "tail expression has no structural form; atoms beyond the truncation "
                "cannot be bounded away analytically");
        std::optional<BigInt> local;
        if (exclude_global && *exclude_global > a.prepend_count())
            local = *exclude_global - a.prepend_count();
        consider(tail_closure_inf_dist2(*a.tail_form(), lambda, 1, local));
    }
    return best;
}

}  // namespace detail

// --- classification ---------------------------------------------------------

inline PointClassification classify_point(const DiagonalOperator& a, const Complex& lambda,
                                          long truncation = 1000) {
    require_finite(lambda, "lambda");
    PointClassification out;
    out.lambda = lambda;
    const RationalComplex lr = to_rational(lambda);

    const detail::DiagonalAtomHit hit = detail::find_atom(a, lr, truncation);
    if (hit.found) {
        out.verdict = SpectralVerdict::Point;
        std::ostringstream os;
        if (hit.every_tail_index)
            os << "eigenvector e_k for every tail index (first: e_" << *hit.global_index << ")";
        else
            os << "eigenvector e_" << *hit.global_index;
        out.witness = os.str();
        return out;
    }

    for (const auto& lp : a.limit_points()) {
        if (lp == lr) {
            // an accumulation point that is not an atom: A - λ is injective
            // with dense, non-closed range
            if (a.tail_form() && tail_closure_dist2(*a.tail_form(), lr) != 0)
                throw ModelError("declared limit point is not approached by the tail");
            out.verdict = SpectralVerdict::Continuous;
            out.witness =
                "accumulation point of the eigenvalues: injective, range dense "
                "(finitely supported approximants), range not closed (inf |lambda(k) - "
                "lambda| = 0 unattained)";
            return out;
        }
    }

    // the tail is never excluded here, so the comparison set is nonempty
    const Rational d2 = detail::spectrum_dist2(a, lr, std::nullopt, false).value();
    const Rational band2 =
        rational_from_double(kClassificationBand) * rational_from_double(kClassificationBand);
    if (d2 <= band2)
        throw UndeterminedClassification(
            "lambda is within 1e-12 of the spectrum at truncation " +
            std::to_string(truncation) + " but not exactly on it");
    out.verdict = SpectralVerdict::Resolvent;
    const double bound = 1.0 / sqrt_to_double(d2);
    out.inverse_norm_bound = bound;
    std::ostringstream os;
    os << "resolvent bound sup 1/|lambda(k) - lambda| <= " << detail::format_real(bound);
    out.witness = os.str();
    return out;
}

inline PointClassification classify_point(const FiniteDiagonalizableOperator& a,
                                          const Complex& lambda, long /*truncation*/ = 0) {
    require_finite(lambda, "lambda");
    PointClassification out;
    out.lambda = lambda;
    double min_dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < a.dimension(); ++i) {
        if (a.eigenvalues()[i] == lambda) {
            out.verdict = SpectralVerdict::Point;
            out.witness = "eigenvector column " + std::to_string(i + 1) + " of T";
            return out;
        }
        min_dist = std::min(min_dist, std::abs(a.eigenvalues()[i] - lambda));
    }
    if (min_dist <= kClassificationBand)
        throw UndeterminedClassification(
            "lambda is within 1e-12 of an eigenvalue but not exactly equal");
    out.verdict = SpectralVerdict::Resolvent;
    const double bound =
        op_norm_bound(a.similarity()) * op_norm_bound(a.similarity_inverse()) / min_dist;
    out.inverse_norm_bound = bound;
    out.witness = "resolvent bound ||T||·||T^-1||/dist <= " + detail::format_real(bound);
    return out;
}

// Weighted shift. The range of A - λ is annihilated by the adjoint-kernel vector
// y with y₁ = 1, y_{k+1} = conj(λ)·y_k/k, which decays factorially and so
// lies in every dual space: the range is not dense, and A - λ stays
// injective, so every λ is residual. At λ = 0 this is the first-coordinate
// obstruction ‖Ax − e₁‖ ≥ 1.
inline PointClassification classify_point(const WeightedShiftOperator&, const Complex& lambda,
                                          long /*truncation*/ = 0) {
    require_finite(lambda, "lambda");
    PointClassification out;
    out.lambda = lambda;
    out.verdict = SpectralVerdict::Residual;
    if (lambda == Complex(0, 0))
        out.witness =
            "not scalar type: (Ax)_1 = 0 for every x, so ||Ax - e_1|| >= 1 and R(A) "
            "is not dense; A is injective";
    else
        out.witness =
            "not scalar type: adjoint-kernel vector y (y_1 = 1, y_{k+1} = "
            "conj(lambda)·y_k/k) annihilates R(A - lambda); A - lambda is injective";
    return out;
}

inline PointClassification classify_point(const DifferentiationOperator&, const Complex& lambda,
                                          long /*truncation*/ = 0) {
    require_finite(lambda, "lambda");
    PointClassification out;
    out.lambda = lambda;
    out.verdict = SpectralVerdict::Point;
    out.witness = "eigenfunction t -> c·e^{lambda·t} with derivative lambda·c·e^{lambda·t}";
    return out;
}

// Residual sweep: the set of sampled λ classified residual, empty for
// every scalar-type model. Undetermined samples are skipped, not counted.
template <typename OperatorT>
std::vector<Complex> residual_spectrum(const OperatorT& a, const std::vector<Complex>& samples,
                                       long truncation = 1000) {
    std::vector<Complex> residual;
    for (const Complex& lambda : samples) {
        try {
            if (classify_point(a, lambda, truncation).verdict == SpectralVerdict::Residual)
                residual.push_back(lambda);
        } catch (const InconclusiveError&) {
        }
    }
    return residual;
}

inline std::vector<RationalComplex> enumerate_point_spectrum(const DiagonalOperator& a, long n) {
    std::vector<RationalComplex> out;
    for (const SpectrumAtom& atom : compute_spectrum(a, n).atoms) out.push_back(atom.value);
    return out;
}

inline std::vector<RationalComplex> enumerate_point_spectrum(const FiniteDiagonalizableOperator& a,
                                                             long /*n*/ = 0) {
    std::vector<RationalComplex> out;
    for (const SpectrumAtom& atom : compute_spectrum(a).atoms) out.push_back(atom.value);
    return out;
}

// --- isolation --------------------------------------------------------------

struct IsolatedPointResult {
    bool isolated = false;
    double gap_radius = 0.0;  // distance from λ0 to σ(A) ∖ {λ0}
    bool is_eigenvalue = false;
    std::optional<Rational> gap2;  // exact squared gap; empty when the gap is infinite
    std::string witness;
};

inline IsolatedPointResult isolated_point_check(const DiagonalOperator& a, const Complex& lambda0,
                                                long truncation = 1000) {
    require_finite(lambda0, "lambda0");
    const RationalComplex lr = to_rational(lambda0);
    const detail::DiagonalAtomHit hit = detail::find_atom(a, lr, truncation);
    bool is_limit = false;
    for (const auto& lp : a.limit_points())
        if (lp == lr) is_limit = true;
    if (!hit.found && !is_limit)
        throw PreconditionError("lambda0 is not in the spectrum");

    IsolatedPointResult out;
    out.is_eigenvalue = hit.found;
    out.gap2 = detail::spectrum_dist2(a, lr, hit.global_index, hit.every_tail_index);
    out.isolated = !out.gap2 || *out.gap2 > 0;
    out.gap_radius =
        out.gap2 ? sqrt_to_double(*out.gap2) : std::numeric_limits<double>::infinity();
    if (out.isolated && hit.found) {
        // the Remark: an isolated spectrum point carries E({λ0}) ≠ 0, hence
        // is an eigenvalue; exhibit the projection on a basis vector
        const long k = hit.global_index->convert_to<long>();
        const FiniteVector probe =
            spectral_projection(a, BorelRegion::singleton(lr)).apply(FiniteVector::unit(k));
        if (probe.is_zero()) throw ModelError("isolated point with vanishing projection");
        out.witness = "E({lambda0}) e_" + std::to_string(k) + " = e_" + std::to_string(k);
    }
    return out;
}

inline IsolatedPointResult isolated_point_check(const FiniteDiagonalizableOperator& a,
                                                const Complex& lambda0, long /*truncation*/ = 0) {
    require_finite(lambda0, "lambda0");
    bool found = false;
    double gap = std::numeric_limits<double>::infinity();
    for (const Complex& ev : a.eigenvalues()) {
        if (ev == lambda0)
            found = true;
        else
            gap = std::min(gap, std::abs(ev - lambda0));
    }
    if (!found) throw PreconditionError("lambda0 is not an eigenvalue of the finite model");
    IsolatedPointResult out;
    out.is_eigenvalue = true;
    out.isolated = gap > 0.0;  // finite spectra isolate every point
    out.gap_radius = gap;
    if (!std::isinf(gap))
        out.gap2 = rational_from_double(gap) * rational_from_double(gap);
    out.witness = "finite spectrum: every spectrum point is isolated";
    return out;
}

}  // namespace stso
