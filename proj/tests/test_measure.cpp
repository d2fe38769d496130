#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "stso/measure.hpp"
#include "stso/sampling.hpp"

using namespace stso;

namespace {

DiagonalOperator sample_diagonal() {
    return DiagonalOperator({RationalComplex()}, parse_lambda_expr("1/n"),
                            {RationalComplex()});
}

}  // namespace

TEST_CASE("diagonal spectral projections filter by eigenvalue membership") {
    const DiagonalOperator a = sample_diagonal();
    const Projection p = spectral_projection(
        a, BorelRegion::closed_disk(RationalComplex(), Rational(1, 2)));
    // eigenvalues: 0, 1, 1/2, 1/3, ...
    CHECK(p.selects(a, 1));
    CHECK_FALSE(p.selects(a, 2));
    CHECK(p.selects(a, 3));
    CHECK(p.selects(a, 4));

    FiniteVector x;
    x.set(1, RationalComplex(1, 1));
    x.set(2, RationalComplex(7));
    x.set(4, RationalComplex(Rational(1, 3), 0));
    const FiniteVector px = p.apply(x);
    CHECK(px.at(1) == RationalComplex(1, 1));
    CHECK(px.at(2) == RationalComplex());
    CHECK(px.at(4) == RationalComplex(Rational(1, 3), 0));

    CHECK(spectral_projection(a, BorelRegion::empty()).apply(x).is_zero());
    CHECK(spectral_projection(a, BorelRegion::whole_plane()).apply(x) == x);
}

TEST_CASE("diagonal measure axioms hold exactly") {
    const DiagonalOperator a = sample_diagonal();
    Rng g = make_rng(37);
    const std::vector<FiniteVector> samples = random_vectors(g, 25, 48, 8);

    SECTION("overlapping regions") {
        const BorelRegion delta = BorelRegion::closed_disk(RationalComplex(), Rational(1, 2));
        const BorelRegion sigma =
            BorelRegion::half_plane(RationalComplex(1), Rational(1, 4));
        const MeasureAxiomReport report = verify_measure_axioms(a, delta, sigma, samples);
        CHECK(report.max_deviation() == 0.0);
    }
    SECTION("disjoint regions trigger the additivity check") {
        const BorelRegion delta = BorelRegion::singleton(RationalComplex());
        const BorelRegion sigma = region_complement(BorelRegion::singleton(RationalComplex()));
        const MeasureAxiomReport report = verify_measure_axioms(a, delta, sigma, samples);
        CHECK(report.additivity_checked);
        CHECK(report.max_deviation() == 0.0);
    }
    SECTION("random region pairs") {
        for (int trial = 0; trial < 20; ++trial) {
            const BorelRegion delta = BorelRegion::closed_disk(
                random_rational_complex(g, -1, 1, 4), random_rational(g, 0, 2, 3) + 1);
            const BorelRegion sigma =
                BorelRegion::half_plane(random_rational_complex(g, -2, 2, 2),
                                        random_rational(g, -1, 1, 4));
            const MeasureAxiomReport report = verify_measure_axioms(a, delta, sigma, samples);
            CHECK(report.max_deviation() == 0.0);
        }
    }
}

TEST_CASE("finite measure axioms hold within tolerance") {
    Matrix m(3, 3);
    m << Complex(3, 0), Complex(1, 0), Complex(0, 0),
         Complex(0, 0), Complex(1, 0), Complex(0, 0),
         Complex(0, 0), Complex(0, 0), Complex(2, 0);
    const FiniteDiagonalizableOperator a = eigendecompose(m);
    Rng g = make_rng(41);
    const std::vector<FiniteVector> samples = random_vectors(g, 25, 3, 3);

    const BorelRegion delta = BorelRegion::closed_disk(Complex(1, 0), 0.5);
    const BorelRegion sigma = BorelRegion::closed_disk(Complex(2.5, 0), 1.0);
    const MeasureAxiomReport overlap_free = verify_measure_axioms(a, delta, sigma, samples);
    CHECK(overlap_free.additivity_checked);
    CHECK(overlap_free.max_deviation() <= 1e-10);

    const MeasureAxiomReport wide = verify_measure_axioms(
        a, BorelRegion::closed_disk(Complex(0, 0), 2.5), BorelRegion::whole_plane(), samples);
    CHECK_FALSE(wide.additivity_checked);
    CHECK(wide.max_deviation() <= 1e-10);
}

TEST_CASE("finite projections resolve the identity") {
    Matrix t(3, 3);
    t << Complex(1, 0), Complex(1, 0), Complex(0, 1),
         Complex(0, 0), Complex(2, 0), Complex(1, 0),
         Complex(1, 0), Complex(0, 0), Complex(3, 0);
    const std::vector<Complex> eigs = {Complex(1, 0), Complex(2, 0), Complex(0, 5)};
    const FiniteDiagonalizableOperator a = make_similar(eigs, t);

    Matrix sum = Matrix::Zero(3, 3);
    for (const Complex& e : eigs) {
        const Matrix p = *spectral_projection(a, BorelRegion::singleton(e)).dense();
        CHECK(mat_norm1(p * p - p) <= 1e-10);
        sum += p;
    }
    CHECK(mat_norm1(sum - Matrix::Identity(3, 3)) <= 1e-10);

    const Matrix none = *spectral_projection(a, BorelRegion::empty()).dense();
    CHECK(mat_norm1(none) == 0.0);
}

TEST_CASE("projection backing guards") {
    const DiagonalOperator a = sample_diagonal();
    Matrix m = Matrix::Identity(2, 2);
    const Projection dense(m);
    CHECK_THROWS_AS(dense.selects(a, 1), ModelError);
    CHECK_THROWS_AS(dense.apply(FiniteVector::unit(3)), ModelError);
    CHECK(spectral_projection(a, BorelRegion::whole_plane()).dense() == nullptr);
}

TEST_CASE("measure bound on the diagonal model is exactly one") {
    const DiagonalOperator a = sample_diagonal();
    const MeasureBoundReport report = measure_bound(a, 12, 99);
    CHECK(report.regions_sampled == 12);
    CHECK(report.max_observed == 1.0);
    REQUIRE(report.exact_bound);
    CHECK(*report.exact_bound == 1.0);
    CHECK(report.envelope == 1.0);
    CHECK_THROWS_AS(measure_bound(a, 0), ModelError);
}

TEST_CASE("measure bound on a skew similarity exceeds one") {
    Matrix t(2, 2);
    t << Complex(1, 0), Complex(10, 0), Complex(0, 0), Complex(1, 0);
    const FiniteDiagonalizableOperator a = make_similar({Complex(1, 0), Complex(2, 0)}, t);
    const MeasureBoundReport report = measure_bound(a, 4);
    // all four eigenvalue subsets enumerated
    CHECK(report.regions_sampled == 4);
    // the skew eigenprojection [[1,-10],[0,0]] has norm sqrt(101)
    CHECK(report.max_observed == Catch::Approx(std::sqrt(101.0)).epsilon(1e-9));
    CHECK(report.max_observed > 1.0);
    REQUIRE(report.exact_bound);
    CHECK(*report.exact_bound == report.max_observed);
    CHECK(report.max_observed <= report.envelope * (1 + 1e-12));
}
