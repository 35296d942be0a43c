#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qteich/errors.hpp"
#include "qteich/qalgebra.hpp"
#include "surfaces.hpp"

using namespace qteich;
using namespace fixtures;

TEST_CASE("root of unity powers") {
    for (int N : {2, 3, 4, 5, 7}) {
        for (int c : {1, 3}) {
            if (std::gcd(c, N) != 1) continue;
            const QParams q(N, c);
            const cplx expected = -std::exp(cplx(0.0, std::numbers::pi * c / N));
            CHECK(std::abs(q.q() - expected) < 1e-15);
            // Repeated multiplication as the oracle for the table.
            cplx acc = 1.0;
            for (int k = 0; k < 3 * N; ++k) {
                CHECK(std::abs(q.pow(k) - acc) < 1e-12);
                CHECK(std::abs(q.pow(-k) * acc - 1.0) < 1e-12);
                acc *= q.q();
            }
            CHECK(std::abs(q.pow(N) - cplx(N % 2 ? 1.0 : -1.0)) < 1e-15);
            CHECK(std::abs(q.pow(2 * N) - 1.0) < 1e-15);
        }
    }
    CHECK_THROWS_AS(QParams(1), InputError);
    CHECK_THROWS_AS(QParams(4, 2), InputError);
}

TEST_CASE("reordering exponent follows sigma") {
    const SkewAlgebra alg = SkewAlgebra::of(torus(), QParams(3));
    // X1 X2 = q^{2 sigma_12} X2 X1 with sigma_12 = 2; both sides normal ordered as X1 X2.
    CHECK(alg.reorder_exponent({1, 0, 0}, {0, 1, 0}) == 0);
    CHECK(alg.reorder_exponent({0, 1, 0}, {1, 0, 0}) == -4);
    CHECK(alg.reorder_exponent({0, 0, 1}, {1, 0, 0}) == 4);
}

TEST_CASE("principal central element of the torus") {
    const QParams q(3);
    const SkewMonomial h = principal_central(SkewAlgebra::of(torus(), q));
    CHECK(h.exps == std::vector<int>{1, 1, 1});
    const auto sigma = sigma_matrix(torus());
    int total = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) total += sigma[i][j];
    CHECK(q.reduce(h.qexp) == q.reduce(-total));
    const QParams q2(2);
    CHECK(q2.reduce(principal_central(SkewAlgebra::of(triangle(), q2)).qexp) == q2.reduce(-1));
}

TEST_CASE("Weyl ordering ignores the order of factors") {
    const SkewAlgebra alg = SkewAlgebra::of(sphere4(), QParams(4));
    const SkewMonomial a = weyl_ordered({0, 3, 1, 4}, alg);
    const SkewMonomial b = weyl_ordered({4, 1, 3, 0}, alg);
    CHECK(a.exps == b.exps);
    CHECK(alg.q().reduce(a.qexp) == alg.q().reduce(b.qexp));
    CHECK(std::abs(a.coeff - b.coeff) < 1e-15);
}

TEST_CASE("monomial inverse") {
    const SkewAlgebra alg = SkewAlgebra::of(pentagon(), QParams(3));
    const SkewMonomial m = weyl_ordered({0, 1, 2, 4}, alg);
    const SkewMonomial p = monomial_product(m, monomial_inverse(m, alg), alg);
    for (int e : p.exps) CHECK(e == 0);
    CHECK(std::abs(p.coeff * alg.q().pow(p.qexp) - 1.0) < 1e-12);
}

TEST_CASE("parser and printer") {
    const QParams q(2);
    const SkewAlgebra alg = SkewAlgebra::of(torus(), q);
    const SkewPolynomial p = parse_polynomial("q^-1 * X1 X2 X3", alg);
    REQUIRE(p.terms().size() == 1);
    CHECK(p.terms().begin()->first == std::vector<int>{1, 1, 1});

    // (X1 + X2)(X1 - X2) = X1^2 - X2^2 + (q^{-4} - 1) X1 X2 after reordering X2 X1.
    const SkewPolynomial d = parse_polynomial("(X1 + X2)*(X1 - X2)", alg);
    CHECK(std::abs(d.coefficient({2, 0, 0}, q) - 1.0) < 1e-12);
    CHECK(std::abs(d.coefficient({0, 2, 0}, q) + 1.0) < 1e-12);
    CHECK(std::abs(d.coefficient({1, 1, 0}, q) - (q.pow(-4) - 1.0)) < 1e-12);

    const SkewPolynomial c = parse_polynomial("2 X1^-2 + 0.5", alg);
    CHECK(std::abs(c.coefficient({-2, 0, 0}, q) - 2.0) < 1e-12);
    CHECK(std::abs(c.coefficient({0, 0, 0}, q) - 0.5) < 1e-12);
    CHECK(to_string(SkewPolynomial(3), q) == "0");

    CHECK_THROWS_AS(parse_polynomial("X4", alg), InputError);
    CHECK_THROWS_AS(parse_polynomial("(X1 + X2", alg), InputError);
    CHECK_THROWS_AS(parse_polynomial("X1 $ X2", alg), InputError);
}

TEST_CASE("embedding is multiplicative at the matrix level") {
    std::mt19937_64 rng(3);
    const Triangulation t = torus();
    for (int N : {2, 3}) {
        const QParams q(N);
        const SkewAlgebra alg = SkewAlgebra::of(t, q);
        const LocalRep r = random_rep(t, q, rng);
        const SkewPolynomial a = parse_polynomial("X1 + q * X2^-1 X3", alg);
        const SkewPolynomial b = parse_polynomial("X2 X1 - 3 X3", alg);
        const Mat lhs = r.evaluate(multiply(a, b, alg));
        const Mat rhs = r.evaluate(a) * r.evaluate(b);
        CHECK((lhs - rhs).norm() <= 1e-10 * rhs.norm());
        // The polynomial image in the face algebras has the same monomial count.
        CHECK(embed(t, a, q).terms().size() == 2);
    }
}
