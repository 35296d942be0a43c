#include <doctest.h>

#include "qteich/errors.hpp"
#include "qteich/qalgebra.hpp"
#include "qteich/transport.hpp"
#include "surfaces.hpp"

using namespace qteich;
using namespace fixtures;

TEST_CASE("triangle matrices satisfy the triangle relations") {
    for (int N : {2, 3, 5}) {
        const QParams q(N);
        const TriangleRep tr = triangle_rep(q, {cplx(1.3, 0.2), cplx(0.7, -0.4), cplx(-0.5, 0.9)});
        for (int s = 0; s < 3; ++s) {
            const Mat a = tr.M[s].dense(), b = tr.M[(s + 1) % 3].dense();
            CHECK((a * b - q.pow(2) * b * a).norm() < 1e-12);
            cplx c;
            CHECK(tr.M[s].power(N).scalar(c, 1e-12));
            CHECK(std::abs(c - std::pow(tr.y[s], N)) < 1e-12 * std::abs(c));
        }
    }
}

TEST_CASE("torus standard weights at N = 2") {
    const QParams q(2);
    const LocalRep r = LocalRep::from_face_data(torus(), q, {{{1.0, 1.0, 1.0}, 1.0}, {{1.0, 1.0, 1.0}, 1.0}});
    CHECK(r.dim() == 4);
    for (int i = 0; i < 3; ++i) {
        cplx c;
        CHECK(r.generator(i).power(2).scalar(c, 1e-12));
        CHECK(std::abs(c - 1.0) < 1e-12);
    }
    cplx h;
    CHECK(r.central().scalar(h, 1e-12));
    CHECK(std::abs(h - 1.0) < 1e-12);
}

TEST_CASE("relations hold for random representations") {
    std::mt19937_64 rng(5);
    for (const Triangulation& t : {triangle(), square(), pentagon(), torus(), sphere4()})
        for (int N : {2, 3}) {
            const LocalRep r = random_rep(t, QParams(N), rng);
            CHECK(relation_residual(r) < 1e-12);
        }
}

TEST_CASE("classification recovers weights and load") {
    std::mt19937_64 rng(9);
    for (const Triangulation& t : {square(), torus(), sphere4()})
        for (int N : {2, 3, 4}) {
            const QParams q(N);
            const auto x = random_weights(t, rng);
            const cplx h = principal_root(peripheral_load(x), N) * q.pow(2);
            const Classification c = classify(rep_from_weights(t, q, x, h));
            CHECK(max_rel_err(c.x, x) < 1e-12);
            CHECK(rel_err(c.h, h) < 1e-12);
            CHECK(c.scalar_residual < 1e-12);
            CHECK(c.load_residual < 1e-12);
        }
}

TEST_CASE("standard representation with k = 1") {
    const QParams q(3);
    const Classification c = classify(standard_rep(torus(), q, 1));
    for (const auto& v : c.x) CHECK(std::abs(v - 1.0) < 1e-12);
    CHECK(std::abs(c.h - q.pow(2)) < 1e-12);
}

TEST_CASE("rescaling by roots multiplies generators") {
    std::mt19937_64 rng(13);
    const QParams q(3);
    const LocalRep r = random_rep(torus(), q, rng);
    const std::vector<cplx> roots{cplx(1.5, 0.5), cplx(0.3, -0.8), 2.0};
    const LocalRep s = scale_by_roots(r, roots);
    for (int i = 0; i < 3; ++i) CHECK(GenMatrix::rel_diff(s.generator(i), r.generator(i).scaled(roots[i])) < 1e-13);
}

TEST_CASE("representation errors") {
    const QParams q(2);
    CHECK_THROWS_AS(LocalRep(sphere4(), QParams(8), {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}, {1, 1, 1}}, 1024), DomainError);
    CHECK_THROWS_AS(LocalRep::from_face_data(torus(), q, {{{1.0, 1.0, 1.0}, 2.0}, {{1.0, 1.0, 1.0}, 1.0}}),
                    DomainError);
    CHECK_THROWS_AS(rep_from_weights(torus(), q, {1.0, 2.0, 3.0}, 1.0), DomainError);
    CHECK_THROWS_AS(rep_from_weights(torus(), q, {1.0, 2.0}, 1.0), InputError);
}

TEST_CASE("central element evaluates through the algebra") {
    std::mt19937_64 rng(17);
    const Triangulation t = pentagon();
    const QParams q(3);
    const LocalRep r = random_rep(t, q, rng);
    const SkewAlgebra alg = SkewAlgebra::of(t, q);
    const SkewPolynomial h = SkewPolynomial::from_monomial(principal_central(alg), q);
    CHECK((r.evaluate(h) - r.central().dense()).norm() < 1e-10 * r.central().dense().norm());
}
