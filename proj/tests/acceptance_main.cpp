#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "stso/stso.hpp"
#include "support/dense_oracle.hpp"

using namespace stso;

namespace {

std::string g_specs_dir;

std::string spec(const char* name) { return g_specs_dir + "/" + name; }

DiagonalOperator load_diag(const char* name) {
    return std::get<DiagonalOperator>(load_operator_file(spec(name)).model);
}

using Verdict = std::pair<bool, std::string>;

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

std::vector<Complex> random_distinct_eigs(Rng& rng, int d, double min_sep) {
    std::vector<Complex> eigs;
    while (static_cast<int>(eigs.size()) < d) {
        const Complex z = random_box_complex(rng, 3.0);
        bool separated = true;
        for (const Complex& w : eigs)
            if (std::abs(z - w) < min_sep) separated = false;
        if (separated) eigs.push_back(z);
    }
    return eigs;
}

FiniteDiagonalizableOperator random_similar_model(Rng& rng, const std::vector<Complex>& eigs,
                                                  double max_cond) {
    const int d = static_cast<int>(eigs.size());
    for (;;) {
        Matrix t(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) t(i, j) = random_box_complex(rng, 1.0);
        for (int i = 0; i < d; ++i) t(i, i) += Complex(1.5 + 0.25 * d, 0);
        const Matrix tinv = t.partialPivLu().solve(Matrix::Identity(d, d));
        if (mat_norm1(t) * mat_norm1(tinv) > max_cond) continue;
        try {
            return make_similar(eigs, t);
        } catch (const SingularMatrixError&) {
        }
    }
}

oracle::Mat to_oracle(const Matrix& m) {
    oracle::Mat out = oracle::zeros(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
    return out;
}

// --- criterion 1: the residual spectrum never appears on scalar-type models

Verdict criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng = make_rng(2026);
    int models = 0;
    long classifications = 0, inconclusive = 0, residuals = 0;
    const long pow2[] = {1, 2, 4, 8, 16, 32};

    for (int m = 0; m < 120; ++m) {
        const long shape = draw_below(rng, 6);
        const RationalComplex c = random_rational_complex(rng);
        RationalComplex q = random_rational_complex(rng);
        if (q.is_zero()) q = RationalComplex(1);
        LambdaExpr tail;
        std::vector<RationalComplex> limits;
        switch (shape) {
            case 0:
                tail = expr_literal(c);
                limits = {c};
                break;
            case 1:
                tail = expr_add(expr_literal(c), expr_div(expr_literal(q), expr_var()));
                limits = {c};
                break;
            case 2:
                tail = expr_add(expr_literal(c),
                                expr_div(expr_literal(q), expr_pow(expr_var(), 2)));
                limits = {c};
                break;
            case 3:
                tail = expr_mul(expr_literal(q), expr_var());
                break;
            case 4:
                tail = expr_add(expr_literal(c), expr_mul(expr_literal(q), expr_var()));
                break;
            default:
                tail = expr_mul(expr_literal(q), expr_pow(expr_var(), 2));
                break;
        }
        std::vector<RationalComplex> prepend;
        const long extra = draw_below(rng, 4);
        for (long i = 0; i < extra; ++i) prepend.push_back(random_rational_complex(rng));
        const DiagonalOperator a(prepend, tail, limits, 2.0);
        const long first_tail = static_cast<long>(prepend.size()) + 1;
        ++models;

        for (int s = 0; s < 52; ++s) {
            Complex lambda;
            if (s < 8) {
                // exact eigenvalues; powers of two keep the doubles exact
                lambda = to_complex(a.eigenvalue(first_tail - 1 + pow2[draw_below(rng, 6)]));
            } else if (s < 12) {
                lambda = to_complex(a.eigenvalue(first_tail - 1 + pow2[draw_below(rng, 6)])) +
                         Complex(1e-6, -1e-6);
            } else {
                lambda = random_box_complex(rng, 5.0);
            }
            try {
                const PointClassification r = classify_point(a, lambda, 256);
                ++classifications;
                if (r.verdict == SpectralVerdict::Residual) ++residuals;
            } catch (const InconclusiveError&) {
                ++inconclusive;
            }
        }
    }

    for (int m = 0; m < 80; ++m) {
        const int d = 2 + static_cast<int>(draw_below(rng, 7));
        const std::vector<Complex> eigs = random_distinct_eigs(rng, d, 1e-2);
        const FiniteDiagonalizableOperator a = random_similar_model(rng, eigs, 1e3);
        ++models;
        for (int s = 0; s < 52; ++s) {
            Complex lambda;
            if (s < d) {
                lambda = eigs[s];
            } else if (s < 2 * d) {
                lambda = eigs[s - d] + Complex(1e-6, 1e-6);
            } else {
                lambda = random_box_complex(rng, 4.0);
            }
            try {
                const PointClassification r = classify_point(a, lambda);
                ++classifications;
                if (r.verdict == SpectralVerdict::Residual) ++residuals;
            } catch (const InconclusiveError&) {
                ++inconclusive;
            }
        }
    }

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok =
        residuals == 0 && models >= 200 && classifications >= 200 * 50 && elapsed <= 60.0;
    return {ok, fmt("no residual verdict across %d models, %ld classifications "
                    "(%ld inconclusive refusals) in %.1fs",
                    models, classifications, inconclusive, elapsed)};
}

// --- criterion 2: the weighted shift keeps e_1 at distance 1 from its range

Verdict criterion2() {
    bool ok = true;
    const PointClassification at_zero = classify_point(WeightedShiftOperator{}, Complex(0, 0));
    ok = ok && at_zero.verdict == SpectralVerdict::Residual;

    Rng rng = make_rng(7);
    FiniteVector e1;
    e1.set(1, RationalComplex(1));
    int violations = 0;
    for (int s = 0; s < 1000; ++s) {
        const FiniteVector x = random_vector(rng, 40, 8);
        if (norm_squared(apply_weighted_shift(x) - e1) < Rational(1)) ++violations;
    }
    ok = ok && violations == 0;

    // least-squares minimization of the distance over fixed supports
    double min_residual = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 21; ++trial) {
        std::set<long> support;
        if (trial == 0) {
            for (long k = 1; k <= 50; ++k) support.insert(k);
        } else {
            const int size = 5 + static_cast<int>(draw_below(rng, 46));
            while (static_cast<int>(support.size()) < size)
                support.insert(1 + draw_below(rng, 120));
        }
        std::map<long, int> row_of;
        row_of[1] = 0;
        for (long k : support) row_of.emplace(k + 1, static_cast<int>(row_of.size()));
        Matrix m = Matrix::Zero(static_cast<int>(row_of.size()),
                                static_cast<int>(support.size()));
        int col = 0;
        for (long k : support) m(row_of.at(k + 1), col++) = Complex(static_cast<double>(k), 0);
        DenseVector b = DenseVector::Zero(m.rows());
        b(0) = Complex(1, 0);
        const Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const DenseVector best = svd.solve(b);
        min_residual = std::min(min_residual, (m * best - b).norm());
    }
    ok = ok && min_residual >= 1.0 - 1e-12;
    return {ok, fmt("shift residual at 0; 0/1000 exact violations of ||Ax - e_1|| >= 1; "
                    "least-squares minimum %.15f over 21 supports",
                    min_residual)};
}

// --- criterion 3: diag(0, 1, 1/2, 1/3, ...) has 0 as a non-isolated eigenvalue

Verdict criterion3() {
    const DiagonalOperator a = load_diag("example3.json");
    const PointClassification c = classify_point(a, Complex(0, 0));
    const GapReport g = gap_theorem_check(a);
    const bool ok = c.verdict == SpectralVerdict::Point && g.zero_in_spectrum &&
                    g.isolated.has_value() && !*g.isolated && g.range_closed.has_value() &&
                    !*g.range_closed && g.predicates_agree;
    return {ok, fmt("0 in sigma_p, isolated=%s, range_closed=%s, predicates agree",
                    g.isolated && *g.isolated ? "true" : "false",
                    g.range_closed && *g.range_closed ? "true" : "false")};
}

// --- criterion 4: isolation of 0 and closedness of the range always agree

Verdict criterion4() {
    struct FamilyCase {
        const char* file;
        bool isolated;
        double gap;
    };
    const FamilyCase cases[] = {
        {"gap_c0.json", false, 0.0},   {"gap_c14.json", true, 0.25},
        {"gap_c12.json", true, 0.5},   {"gap_c1.json", true, 1.0},
        {"gap_c2.json", true, 2.0},    {"gap_invn.json", false, 0.0},
        {"gap_invn2.json", false, 0.0},
    };
    bool ok = true;
    int agreements = 0, inconclusive = 0;
    double worst_gap_error = 0.0;
    for (const FamilyCase& fc : cases) {
        try {
            const GapReport g = gap_theorem_check(load_diag(fc.file));
            const bool decided = g.isolated.has_value() && g.range_closed.has_value();
            ok = ok && decided && g.predicates_agree && *g.isolated == *g.range_closed &&
                 *g.isolated == fc.isolated;
            if (decided && *g.isolated == *g.range_closed) ++agreements;
            if (fc.isolated) {
                const double err =
                    g.gap_radius ? std::abs(*g.gap_radius - fc.gap)
                                 : std::numeric_limits<double>::infinity();
                worst_gap_error = std::max(worst_gap_error, err);
                ok = ok && err <= 1e-12;
            }
        } catch (const InconclusiveError&) {
            ++inconclusive;
            ok = false;
        }
    }
    ok = ok && inconclusive == 0;
    return {ok, fmt("predicates agree on %d/7 family members, %d inconclusive, "
                    "max gap-radius error %.2e",
                    agreements, inconclusive, worst_gap_error)};
}

// --- criterion 5: A F(A) x recovers E(sigma minus {0}) x

Verdict criterion5() {
    bool ok = true;
    double worst_diag = 0.0;
    const struct {
        const char* file;
        Rational gamma2;
    } diag_cases[] = {{"gap_c14.json", Rational(1, 16)},
                      {"gap_c12.json", Rational(1, 4)},
                      {"gap_c1.json", Rational(1)},
                      {"gap_c2.json", Rational(4)}};
    for (const auto& dc : diag_cases) {
        Rng rng = make_rng(11);
        const double worst =
            verify_proof_identity(load_diag(dc.file), dc.gamma2, random_vectors(rng, 100, 48, 6));
        worst_diag = std::max(worst_diag, worst);
        ok = ok && worst == 0.0;
    }

    Rng rng = make_rng(17);
    double worst_finite = 0.0;
    const std::vector<std::vector<Complex>> finite_eigs = {
        {Complex(0, 0), Complex(2, 0), Complex(3, 0)},
        {Complex(0, 0), Complex(1, 1), Complex(-2, 0), Complex(3, 0)},
        {Complex(0, 0), Complex(0.5, 0), Complex(0, -0.5), Complex(2, 0), Complex(-3, 0)}};
    for (const std::vector<Complex>& eigs : finite_eigs) {
        const FiniteDiagonalizableOperator a = random_similar_model(rng, eigs, 1e3);
        double min_nonzero = std::numeric_limits<double>::infinity();
        for (const Complex& ev : eigs)
            if (ev != Complex(0, 0)) min_nonzero = std::min(min_nonzero, std::abs(ev));
        const double worst = verify_proof_identity(
            a, 0.5 * min_nonzero,
            random_vectors(rng, 100, static_cast<long>(eigs.size()), 4));
        worst_finite = std::max(worst_finite, worst);
        ok = ok && worst <= 1e-10;
    }
    return {ok, fmt("diagonal deviation %.1f (exact), finite deviation %.2e <= 1e-10 "
                    "(100 samples per operator)",
                    worst_diag, worst_finite)};
}

// --- criterion 6: X = ker A (+) closure R(A), verified through the projections

Verdict criterion6() {
    bool ok = true;
    double worst_diag = 0.0;
    std::vector<DiagonalOperator> diag_models = {load_diag("example3.json"),
                                                 load_diag("gap_c14.json"),
                                                 load_diag("gap_c2.json")};
    diag_models.emplace_back(std::vector<RationalComplex>{RationalComplex()},
                             parse_lambda_expr("n"), std::vector<RationalComplex>{}, 2.0);
    for (const DiagonalOperator& a : diag_models) {
        Rng rng = make_rng(19);
        const DecompositionReport d = decompose(a, random_vectors(rng, 100, 48, 6));
        worst_diag = std::max(worst_diag, d.max_deviation());
        ok = ok && d.max_deviation() == 0.0 && d.samples == 100;
    }

    Rng rng = make_rng(23);
    double worst_finite = 0.0;
    std::vector<FiniteDiagonalizableOperator> finite_models;
    finite_models.push_back(
        std::get<FiniteDiagonalizableOperator>(load_operator_file(spec("finite_demo.json")).model));
    finite_models.push_back(random_similar_model(
        rng, {Complex(0, 0), Complex(2, 0), Complex(3, 1)}, 1e3));
    finite_models.push_back(random_similar_model(
        rng, {Complex(0, 0), Complex(0, 0), Complex(2.5, 0)}, 1e3));
    for (const FiniteDiagonalizableOperator& a : finite_models) {
        const DecompositionReport d = decompose(
            a, random_vectors(rng, 100, a.dimension(), std::min(a.dimension(), 6)));
        worst_finite = std::max(worst_finite, d.max_deviation());
        ok = ok && d.max_deviation() <= 1e-10;
    }
    return {ok, fmt("diagonal deviation %.1f (exact), finite deviation %.2e <= 1e-10 "
                    "(100 samples per operator)",
                    worst_diag, worst_finite)};
}

// --- criterion 7: spectral projections match an independent dense oracle

Verdict criterion7() {
    Rng rng = make_rng(29);
    bool ok = true;
    int matrices = 0, comparisons = 0;
    double worst = 0.0;
    for (int m = 0; m < 50; ++m) {
        const int d = 2 + static_cast<int>(draw_below(rng, 7));
        std::vector<Complex> eigs = random_distinct_eigs(rng, d, 0.5);
        if (m % 5 == 0) eigs[1] = eigs[0];  // exercise multiplicity two
        const FiniteDiagonalizableOperator a = random_similar_model(rng, eigs, 1e3);
        ++matrices;

        std::vector<Complex> distinct;
        for (const Complex& ev : a.eigenvalues())
            if (std::find(distinct.begin(), distinct.end(), ev) == distinct.end())
                distinct.push_back(ev);
        for (const Complex& ev : distinct) {
            const Matrix p_lib =
                *spectral_projection(a, BorelRegion::singleton(to_rational(ev))).dense();

            oracle::Mat shifted = to_oracle(a.matrix());
            for (int i = 0; i < d; ++i) shifted[i][i] -= ev;
            const double tol = 1e-7 * std::max(1.0, oracle::max_abs(shifted));
            const oracle::Mat kernel = oracle::null_space(shifted, tol);
            const oracle::Mat range = oracle::column_space(shifted, tol);
            const oracle::Mat p_oracle = oracle::projector_onto_along(kernel, range);

            const double diff = oracle::max_abs_diff(to_oracle(p_lib), p_oracle);
            worst = std::max(worst, diff);
            ++comparisons;
            ok = ok && oracle::cols(kernel) >= 1 && diff <= 1e-8;
        }
    }
    ok = ok && matrices >= 50;
    return {ok, fmt("%d matrices, %d projector comparisons, max entrywise gap %.2e <= 1e-8",
                    matrices, comparisons, worst)};
}

// --- criterion 8: A + E({0}) inverts within the certified norm bound

Verdict criterion8() {
    bool ok = true;
    double worst_diag = 0.0;
    std::vector<DiagonalOperator> diag_models = {load_diag("gap_c14.json"),
                                                 load_diag("gap_c1.json")};
    diag_models.emplace_back(std::vector<RationalComplex>{}, parse_lambda_expr("2 + 1/n"),
                             std::vector<RationalComplex>{RationalComplex(2)}, 2.0);
    for (const DiagonalOperator& a : diag_models) {
        Rng rng = make_rng(31);
        for (const FiniteVector& x : random_vectors(rng, 100, 48, 6)) {
            const ReducibleInverseReport r = reducible_inverse(a, x);
            worst_diag = std::max(worst_diag, r.residual);
            const Rational bound = rational_from_double(r.norm_bound);
            ok = ok && r.residual == 0.0 &&
                 norm_squared(r.inverse) <= bound * bound * norm_squared(x);
        }
    }

    Rng rng = make_rng(37);
    double worst_finite = 0.0;
    const std::vector<std::vector<Complex>> finite_eigs = {
        {Complex(0, 0), Complex(2, 0), Complex(3, 0)},
        {Complex(0, 0), Complex(0, 0), Complex(2.5, 0), Complex(-1, 0)}};
    for (const std::vector<Complex>& eigs : finite_eigs) {
        const FiniteDiagonalizableOperator a = random_similar_model(rng, eigs, 1e3);
        for (const FiniteVector& x :
             random_vectors(rng, 100, a.dimension(), std::min(a.dimension(), 4))) {
            const ReducibleInverseReport r = reducible_inverse(a, x);
            worst_finite = std::max(worst_finite, r.residual);
            ok = ok && r.residual <= 1e-10 &&
                 vector_norm(r.inverse) <=
                     r.norm_bound * vector_norm(x) * (1.0 + 1e-9) + 1e-12;
        }
    }
    return {ok, fmt("diagonal residual %.1f (exact), finite residual %.2e <= 1e-10; "
                    "norm bound respected on all 500 samples",
                    worst_diag, worst_finite)};
}

// --- criterion 9: the operational calculus behaves like pointwise algebra

BorelFunction random_function(Rng& rng, bool allow_compound = true) {
    switch (draw_below(rng, allow_compound ? 7 : 5)) {
        case 0: return BorelFunction::identity();
        case 1: return BorelFunction::power(draw_below(rng, 4));
        case 2: return BorelFunction::constant(random_rational_complex(rng));
        case 3: {
            const Rational gamma(draw_range(rng, 1, 6), draw_range(rng, 1, 3));
            return BorelFunction::cutoff_reciprocal(gamma);
        }
        case 4:
            return BorelFunction::indicator(BorelRegion::closed_disk(
                random_rational_complex(rng), Rational(draw_range(rng, 0, 4), 1)));
        case 5:
            return random_function(rng, false) * random_function(rng, false);
        default:
            return random_function(rng, false) + random_function(rng, false);
    }
}

Verdict criterion9() {
    Rng rng = make_rng(41);
    std::vector<DiagonalOperator> pool = {load_diag("example3.json"), load_diag("gap_c14.json")};
    pool.emplace_back(std::vector<RationalComplex>{RationalComplex()}, parse_lambda_expr("n"),
                      std::vector<RationalComplex>{}, 2.0);
    pool.emplace_back(std::vector<RationalComplex>{RationalComplex(0, 1)},
                      parse_lambda_expr("2"), std::vector<RationalComplex>{RationalComplex(2)},
                      2.0);

    bool ok = true;
    int triples = 0;
    for (int s = 0; s < 100; ++s) {
        const DiagonalOperator& a = pool[draw_below(rng, static_cast<long>(pool.size()))];
        const BorelFunction f = random_function(rng);
        const BorelFunction g = random_function(rng);
        const FiniteVector x = random_vector(rng, 32, 6);
        ++triples;

        const FiniteVector ident =
            apply_function(a, BorelFunction::identity(), x).value - apply_diagonal(a, x);
        ok = ok && norm_squared(ident) == 0;

        const FiniteVector prod =
            apply_function(a, f * g, x).value -
            apply_function(a, f, apply_function(a, g, x).value).value;
        ok = ok && norm_squared(prod) == 0;

        const BorelRegion delta =
            BorelRegion::closed_disk(random_rational_complex(rng), Rational(2));
        const FiniteVector indic =
            apply_function(a, BorelFunction::indicator(delta), x).value -
            spectral_projection(a, delta).apply(x);
        ok = ok && norm_squared(indic) == 0;

        const CalculusResult r = apply_function(a, f, x);
        const long level = std::max(r.converged_at, 1L);
        ok = ok && norm_squared(apply_truncated(a, f, level, x) - r.value) == 0 &&
             norm_squared(apply_truncated(a, f, level + 13, x) - r.value) == 0;
    }

    int pairs = 0;
    for (int s = 0; s < 1000; ++s) {
        const BorelFunction f = random_function(rng);
        const RationalComplex z = random_rational_complex(rng);
        const RationalComplex fz = f.eval(z);
        long level = 1;
        if (!fz.is_zero()) level = std::max<long>(1, ceil_sqrt(fz.abs2()).convert_to<long>());
        ++pairs;
        ok = ok && truncate_function(f, level).eval(z) == fz &&
             truncate_function(f, level + 7).eval(z) == fz;
        if (level >= 2) ok = ok && truncate_function(f, level - 1).eval(z).is_zero();
    }
    return {ok, fmt("%d (operator, F, G, x) quadruples exact; truncation exhaustion on "
                    "%d (F, lambda) pairs",
                    triples, pairs)};
}

// --- criterion 10: parsing round-trips, errors carry positions, reports repeat

Verdict criterion10() {
    static const char* corpus[] = {
        "0", "1", "-1", "n", "-n",
        "1/n", "2/n", "1/n^2", "1/n^3", "n^2",
        "n^3", "n + 1", "n - 1", "2*n", "n/2",
        "(n + 1)/n", "n/(n + 1)", "1/(2*n)", "1/(n^2 + 1)", "3 + 4i",
        "3 - 4i", "(1 + 2i)*n", "(1 - 2i)/n", "n*(n + 1)", "n*(n + 1)*(n + 2)",
        "(2^3)^2", "2^10", "n^2 - n", "n^2 + n + 1", "(n + 1)^2",
        "(n + 1)^2/n", "1/4 + 1/n", "1/2 + 1/n^2", "2 + 1/n", "1 + 1/n",
        "5 - 1/n", "(3 + 4i)/n", "(1 + 1i)*n^2", "-(n + 1)", "-1/n",
        "2 - 3i + n", "(2 - 3i)*(1 + 1i)", "n/3 + n/4", "7/(n + 6)", "(n - 1)*(n - 2)/7",
        "1/(n + 1)", "3 - 4i^2", "n^4/(n^2 + 3)", "1/2*n", "(n + 2)*(n + 3)",
    };
    bool ok = true;
    int round_trips = 0;
    for (const char* src : corpus) {
        const LambdaExpr parsed = parse_lambda_expr(src);
        const std::string printed = print_lambda_expr(parsed);
        const LambdaExpr reparsed = parse_lambda_expr(printed);
        ok = ok && expr_equal(parsed, reparsed) &&
             print_lambda_expr(reparsed) == printed;
        for (long n : {1L, 2L, 3L, 7L})
            ok = ok && eval_lambda_expr_exact(parsed, n) == eval_lambda_expr_exact(reparsed, n);
        ++round_trips;
    }
    ok = ok && round_trips == 50;

    const struct {
        const char* src;
        std::size_t position;
    } malformed[] = {{"1 +", 3}, {"2 * (n", 6}, {"n ^ x", 4}};
    int annotated = 0;
    for (const auto& bad : malformed) {
        try {
            parse_lambda_expr(bad.src);
            ok = false;
        } catch (const ParseError& e) {
            const bool good = e.position() == bad.position && !e.expected().empty() &&
                              std::string(e.what()).find("offset") != std::string::npos;
            ok = ok && good;
            if (good) ++annotated;
        }
    }

    std::vector<std::string> args = {"verify"};
    for (const char* f :
         {"example1_shift.json", "example2_differentiation.json", "example3.json",
          "finite_demo.json", "gap_c0.json", "gap_c1.json", "gap_c12.json", "gap_c14.json",
          "gap_c2.json", "gap_invn.json", "gap_invn2.json"})
        args.push_back(spec(f));
    args.insert(args.end(), {"--seed", "42", "--no-timestamp"});
    std::ostringstream out1, err1, out2, err2;
    const int code1 = run_cli(args, out1, err1);
    const int code2 = run_cli(args, out2, err2);
    const bool deterministic =
        code1 == 0 && code2 == 0 && !out1.str().empty() && out1.str() == out2.str();
    ok = ok && deterministic;
    return {ok, fmt("%d/50 expressions round-trip, %d/3 malformed inputs carry positions, "
                    "verify runs byte-identical (%zu bytes)",
                    round_trips, annotated, out1.str().size())};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <specs-dir>\n");
        return 64;
    }
    g_specs_dir = argv[1];

    const std::vector<std::function<Verdict()>> criteria = {
        criterion1, criterion2, criterion3, criterion4, criterion5,
        criterion6, criterion7, criterion8, criterion9, criterion10};

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i]();
        } catch (const std::exception& e) {
            v = {false, std::string("unexpected exception: ") + e.what()};
        }
        std::printf("%s criterion %zu: %s\n", v.first ? "PASS" : "FAIL", i + 1,
                    v.second.c_str());
        std::fflush(stdout);
        if (!v.first) ++failures;
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
