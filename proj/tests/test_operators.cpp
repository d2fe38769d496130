#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <vector>

#include "stso/finite_operator.hpp"
#include "stso/operators.hpp"
#include "stso/sampling.hpp"

using namespace stso;

TEST_CASE("finite vectors store only nonzero coordinates") {
    FiniteVector v;
    CHECK(v.is_zero());
    v.set(3, RationalComplex(2, -1));
    v.set(1, RationalComplex(1));
    CHECK(v.support_size() == 2);
    CHECK(v.max_index() == 3);
    CHECK(v.at(2) == RationalComplex());
    v.set(3, RationalComplex());
    CHECK(v.support_size() == 1);
    CHECK(v.max_index() == 1);
    CHECK_THROWS_AS(v.set(0, RationalComplex(1)), std::invalid_argument);

    const FiniteVector e2 = FiniteVector::unit(2);
    CHECK(e2.at(2) == RationalComplex(1));
    CHECK((v + e2 - e2) == v);
    CHECK((RationalComplex() * v).is_zero());
}

TEST_CASE("inner product is exact and conjugate-linear in the second slot") {
    FiniteVector x, y;
    x.set(1, RationalComplex(1, 1));
    x.set(4, RationalComplex(Rational(1, 3), 0));
    y.set(1, RationalComplex(2, -1));
    y.set(4, RationalComplex(0, 3));
    // (1+i)(2-i)~ + (1/3)(3i)~ = (1+i)(2+i) - i = 1 + 2i
    CHECK(inner(x, y) == RationalComplex(1, 2));
    CHECK(inner(y, x) == inner(x, y).conj());
    const RationalComplex s(0, 2);
    CHECK(inner(x, s * y) == s.conj() * inner(x, y));
    CHECK(inner(s * x, y) == s * inner(x, y));
    CHECK(norm_squared(x) == Rational(2) + Rational(1, 9));
}

TEST_CASE("l_p norms agree with direct summation") {
    FiniteVector x;
    x.set(1, RationalComplex(3));
    x.set(2, RationalComplex(0, -4));
    x.set(5, RationalComplex(Rational(1, 2), Rational(1, 2)));

    CHECK(vector_norm(x, 2.0) == std::sqrt(rational_to_double(norm_squared(x))));
    FiniteVector pyth;
    pyth.set(1, RationalComplex(3));
    pyth.set(9, RationalComplex(0, 4));
    CHECK(vector_norm(pyth) == 5.0);  // perfect square, exact

    for (const double p : {1.0, 1.5, 2.0, 3.0, 7.0}) {
        double direct = 0.0;
        for (const auto& [k, c] : x.coords())
            direct += std::pow(std::abs(to_complex(c)), p);
        direct = std::pow(direct, 1.0 / p);
        CHECK(vector_norm(x, p) ==
              Catch::Approx(direct).epsilon(1e-14));
    }
    const double sup = std::abs(to_complex(x.at(2)));
    CHECK(vector_norm(x, std::numeric_limits<double>::infinity()) == Catch::Approx(sup));
    CHECK_THROWS_AS(vector_norm(x, 0.5), std::invalid_argument);
}

TEST_CASE("diagonal operator indexes prepends before the tail") {
    const DiagonalOperator a({RationalComplex()}, parse_lambda_expr("1/n"),
                             {RationalComplex()});
    CHECK(a.prepend_count() == 1);
    CHECK(a.eigenvalue(1) == RationalComplex());
    CHECK(a.eigenvalue(2) == RationalComplex(1));
    CHECK(a.eigenvalue(3) == RationalComplex(Rational(1, 2), 0));
    CHECK(a.eigenvalue(11) == RationalComplex(Rational(1, 10), 0));
    CHECK(a.eigenvalue_fast(11) == Complex(0.1, 0));
    CHECK_THROWS_AS(a.eigenvalue(0), ModelError);
    CHECK(a.space_p() == 2.0);
    CHECK(a.describe() == "diagonal(0, 1/n ...)");
    REQUIRE(a.tail_form());
    CHECK(a.tail_form()->e == -1);

    FiniteVector x;
    x.set(1, RationalComplex(5));
    x.set(3, RationalComplex(2));
    const FiniteVector ax = apply_diagonal(a, x);
    CHECK(ax.at(1) == RationalComplex());
    CHECK(ax.at(3) == RationalComplex(1));
    CHECK(ax.support_size() == 1);
}

TEST_CASE("construction rejects bad diagonal models") {
    CHECK_THROWS_AS(DiagonalOperator({}, parse_lambda_expr("1/(n-1)"), {}), EvalError);
    CHECK_THROWS_AS(DiagonalOperator({}, parse_lambda_expr("1/(n-100)"), {}), EvalError);
    CHECK_THROWS_AS(DiagonalOperator({}, LambdaExpr{}, {}), ModelError);
    CHECK_THROWS_AS(DiagonalOperator({}, parse_lambda_expr("1/n"), {}, 0.5), ModelError);
    CHECK_NOTHROW(DiagonalOperator({}, parse_lambda_expr("1/n"), {RationalComplex()}, 1.0));
}

TEST_CASE("limit point declarations are checked against the sequence") {
    const auto diag = [](const char* tail, std::vector<RationalComplex> lps) {
        return DiagonalOperator({}, parse_lambda_expr(tail), std::move(lps));
    };
    CHECK(verify_limit_points(diag("1/n", {RationalComplex()})).consistent);
    CHECK(verify_limit_points(diag("1/4 + 1/n", {RationalComplex(Rational(1, 4), 0)}))
              .consistent);
    CHECK(verify_limit_points(diag("2", {})).consistent);
    CHECK(verify_limit_points(diag("2", {RationalComplex(2)})).consistent);
    CHECK(verify_limit_points(diag("n", {})).consistent);
    // limit point attained exactly by a prepended eigenvalue
    const DiagonalOperator prepended({RationalComplex()}, parse_lambda_expr("1/n"),
                                     {RationalComplex()});
    CHECK(verify_limit_points(prepended).consistent);

    const LimitPointReport stray =
        verify_limit_points(diag("1/n", {RationalComplex(), RationalComplex(5)}));
    CHECK_FALSE(stray.consistent);
    REQUIRE(stray.notes.size() == 1);
    CHECK(stray.notes.front().find("not approached") != std::string::npos);

    const LimitPointReport missing = verify_limit_points(diag("1/4 + 1/n", {}));
    CHECK_FALSE(missing.consistent);
    REQUIRE_FALSE(missing.notes.empty());
    CHECK(missing.notes.front().find("not declared") != std::string::npos);
}

TEST_CASE("weighted shift sends e_k to k*e_{k+1}") {
    CHECK(apply_weighted_shift(FiniteVector::unit(1)) == FiniteVector::unit(2));
    FiniteVector expect;
    expect.set(3, RationalComplex(2));
    CHECK(apply_weighted_shift(FiniteVector::unit(2)) == expect);

    FiniteVector x;
    x.set(1, RationalComplex(1, 1));
    x.set(5, RationalComplex(Rational(1, 2), 0));
    const FiniteVector ax = apply_weighted_shift(x);
    CHECK(ax.at(2) == RationalComplex(1, 1));
    CHECK(ax.at(6) == RationalComplex(Rational(5, 2), 0));
    CHECK(ax.at(1) == RationalComplex());
}

TEST_CASE("first coordinate of the shift image always vanishes") {
    Rng g = make_rng(23);
    const FiniteVector e1 = FiniteVector::unit(1);
    for (int trial = 0; trial < 100; ++trial) {
        const FiniteVector x = random_vector(g, 12, 5);
        CHECK(apply_weighted_shift(x).at(1) == RationalComplex());
        CHECK(norm_squared(apply_weighted_shift(x) - e1) >= 1);
    }
}

TEST_CASE("adjoint-kernel witness annihilates the shifted range exactly") {
    Rng g = make_rng(29);
    const std::vector<RationalComplex> lambdas = {
        RationalComplex(), RationalComplex(1), RationalComplex(-1, 2),
        RationalComplex(Rational(3, 4), Rational(-1, 3))};
    for (const RationalComplex& lambda : lambdas) {
        const FiniteVector y = shift_adjoint_witness(lambda, 40);
        CHECK(y.at(1) == RationalComplex(1));
        for (int trial = 0; trial < 50; ++trial) {
            const FiniteVector x = random_vector(g, 15, 6);
            const FiniteVector image = apply_weighted_shift(x) - lambda * x;
            CHECK(inner(image, y) == RationalComplex());
        }
    }
    // lambda = 0 truncates the recurrence immediately
    CHECK(shift_adjoint_witness(RationalComplex(), 40) == FiniteVector::unit(1));
}

TEST_CASE("differentiation of exponentials is symbolic") {
    const DifferentiationOperator d(0.0, 1.0);
    const auto [ev, residual] = differentiate_exponential(d, Complex(-2, 3), Complex(1, 1));
    CHECK(ev == Complex(-2, 3));
    CHECK(residual == Complex(0, 0));
    CHECK_THROWS_AS(DifferentiationOperator(1.0, 0.0), ModelError);
    CHECK_THROWS_AS(
        differentiate_exponential(d, Complex(std::nan(""), 0), Complex(1, 0)), ModelError);
}

TEST_CASE("eigendecompose recovers a diagonalizable system") {
    Matrix m(3, 3);
    m << Complex(3, 0), Complex(1, 0), Complex(0, 0),
         Complex(0, 0), Complex(1, 0), Complex(0, 0),
         Complex(0, 0), Complex(0, 0), Complex(2, 0);
    const FiniteDiagonalizableOperator a = eigendecompose(m);
    CHECK(a.dimension() == 3);

    std::multiset<int> rounded;
    for (const Complex& e : a.eigenvalues()) {
        CHECK(std::abs(e.imag()) < 1e-12);
        rounded.insert(static_cast<int>(std::lround(e.real())));
        CHECK(std::abs(e.real() - std::lround(e.real())) < 1e-12);
    }
    CHECK(rounded == std::multiset<int>{1, 2, 3});

    // A acts on unit vectors through the matrix columns
    const FiniteVector ae1 = a.apply(FiniteVector::unit(1));
    CHECK(to_complex(ae1.at(1)) == Complex(3, 0));
    CHECK(ae1.support_size() == 1);

    // the eigen system reconstructs the matrix
    Matrix diag = Matrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i) diag(i, i) = a.eigenvalues()[i];
    CHECK(mat_norm1(m - a.similarity() * diag * a.similarity_inverse()) < 1e-10);

    CHECK_THROWS_AS(a.to_dense(FiniteVector::unit(4)), ModelError);
    const DenseVector dense = a.to_dense(FiniteVector::unit(2));
    CHECK(FiniteDiagonalizableOperator::from_dense(dense) == FiniteVector::unit(2));
}

TEST_CASE("defective matrices are refused") {
    Matrix nilpotent(2, 2);
    nilpotent << Complex(0, 0), Complex(1, 0), Complex(0, 0), Complex(0, 0);
    CHECK_THROWS_AS(eigendecompose(nilpotent), DefectiveMatrixError);

    Matrix jordan(2, 2);
    jordan << Complex(1, 0), Complex(1, 0), Complex(0, 0), Complex(1, 0);
    CHECK_THROWS_AS(eigendecompose(jordan), DefectiveMatrixError);
}

TEST_CASE("matrix validation") {
    CHECK_THROWS_AS(eigendecompose(Matrix(0, 0)), ModelError);
    CHECK_THROWS_AS(eigendecompose(Matrix::Zero(2, 3)), ModelError);
    CHECK_THROWS_AS(eigendecompose(Matrix::Zero(17, 17)), ModelError);
    Matrix bad = Matrix::Identity(2, 2);
    bad(0, 1) = Complex(std::nan(""), 0);
    CHECK_THROWS_AS(eigendecompose(bad), ModelError);
}

TEST_CASE("make_similar builds T diag T^{-1}") {
    Matrix t(2, 2);
    t << Complex(1, 0), Complex(1, 0), Complex(0, 0), Complex(1, 0);
    const FiniteDiagonalizableOperator a = make_similar({Complex(2, 0), Complex(5, 0)}, t);
    CHECK(std::abs(a.matrix()(0, 0) - Complex(2, 0)) < 1e-12);
    CHECK(std::abs(a.matrix()(0, 1) - Complex(3, 0)) < 1e-12);
    CHECK(std::abs(a.matrix()(1, 0)) < 1e-12);
    CHECK(std::abs(a.matrix()(1, 1) - Complex(5, 0)) < 1e-12);

    const Matrix p = a.projection_matrix({true, false});
    CHECK(mat_norm1(p * p - p) < 1e-12);
    CHECK(mat_norm1(p * a.matrix() - a.matrix() * p) < 1e-12);
    // the projection fixes the first eigenvector (first column of T)
    const DenseVector v1 = t.col(0);
    CHECK((p * v1 - v1).norm() < 1e-12);
    CHECK_THROWS_AS(a.projection_matrix({true}), ModelError);

    Matrix singular(2, 2);
    singular << Complex(1, 0), Complex(1, 0), Complex(1, 0), Complex(1, 0);
    CHECK_THROWS_AS(make_similar({Complex(1, 0), Complex(2, 0)}, singular),
                    SingularMatrixError);
    Matrix illcond(2, 2);
    illcond << Complex(1, 0), Complex(1, 0), Complex(1, 0), Complex(1 + 1e-9, 0);
    CHECK_THROWS_AS(make_similar({Complex(1, 0), Complex(2, 0)}, illcond),
                    SingularMatrixError);
    CHECK_THROWS_AS(make_similar({Complex(1, 0)}, t), ModelError);
}

TEST_CASE("norm bounds dominate the spectral norm") {
    Matrix t(2, 2);
    t << Complex(1, 0), Complex(10, 0), Complex(0, 0), Complex(1, 0);
    CHECK(mat_norm1(t) == 11.0);
    CHECK(mat_norm_inf(t) == 11.0);
    CHECK(op_norm2(t) <= op_norm_bound(t));

    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = Complex(3, 0);
    d(1, 1) = Complex(0, -4);
    CHECK(op_norm2(d) == Catch::Approx(4.0));

    Rng g = make_rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = static_cast<int>(draw_range(g, 1, 6));
        Matrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = random_box_complex(g, 4.0);
        CHECK(op_norm2(m) <= op_norm_bound(m) * (1 + 1e-12));
    }
}
