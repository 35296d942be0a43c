#include <doctest.h>

#include "qteich/errors.hpp"
#include "qteich/transport.hpp"
#include "surfaces.hpp"

using namespace qteich;
using namespace fixtures;

TEST_CASE("square flip with x = (4, 1, 1, 1, 1)") {
    const auto y = flip_weights(square(), {4.0, 1.0, 1.0, 1.0, 1.0}, 0);
    const std::vector<cplx> expected{0.25, 5.0, 0.8, 5.0, 0.8};
    CHECK(max_rel_err(y, expected) < 1e-15);
    CHECK(std::abs(peripheral_load(y) - 4.0) < 1e-14);
}

TEST_CASE("torus flip collects both factors on identified sides") {
    const std::vector<cplx> x{cplx(0.8, 0.3), 2.0, 3.0};
    const auto y = flip_weights(torus(), x, 0);
    const cplx grow = 1.0 + x[0], shrink = 1.0 / (1.0 + 1.0 / x[0]);
    CHECK(rel_err(y[0], 1.0 / x[0]) < 1e-15);
    CHECK(rel_err(y[1], shrink * shrink * x[1]) < 1e-14);
    CHECK(rel_err(y[2], grow * grow * x[2]) < 1e-14);
    CHECK(rel_err(peripheral_load({1.0, 2.0, 3.0}), 6.0) < 1e-15);
}

TEST_CASE("closed surfaces keep the total load") {
    std::mt19937_64 rng(21);
    for (const Triangulation& t : {torus(), sphere4()})
        for (int e = 0; e < t.edge_count(); ++e) {
            const auto x = random_weights(t, rng);
            CHECK(rel_err(peripheral_load(flip_weights(t, x, e)), peripheral_load(x)) < 1e-12);
        }
}

TEST_CASE("pentagon cycle returns the weights") {
    std::mt19937_64 rng(23);
    const Triangulation t = pentagon();
    const std::vector<int> rel{1, 0, 2, 3, 4, 5, 6};
    for (int trial = 0; trial < 10; ++trial) {
        const auto x = random_weights(t, rng);
        const TransportResult r = transport(t, x, {0, 1, 0, 1, 0});
        for (int i = 0; i < t.edge_count(); ++i) CHECK(rel_err(r.weights[i], x[rel[i]]) < 1e-9);
        CHECK(r.steps.size() == 5);
    }
}

TEST_CASE("flips in disjoint squares commute") {
    std::mt19937_64 rng(29);
    const Triangulation t = sphere4();
    const auto x = random_weights(t, rng);
    // Edges 0 and 5 share no face of the tetrahedron.
    const auto a = transport(t, x, {0, 5});
    const auto b = transport(t, x, {5, 0});
    CHECK(max_rel_err(a.weights, b.weights) < 1e-14);
    CHECK(a.surface.canonical_key() == b.surface.canonical_key());
}

TEST_CASE("roundtrip flip restores weights") {
    std::mt19937_64 rng(31);
    for (const Triangulation& t : {square(), pentagon(), torus(), sphere4()})
        for (int e = 0; e < t.edge_count(); ++e) {
            if (t.is_boundary_edge(e)) continue;
            const auto x = random_weights(t, rng);
            CHECK(max_rel_err(transport(t, x, {e, e}).weights, x) < 1e-12);
        }
}

TEST_CASE("puncture eigenvalue from incidences") {
    const auto p = punctures(torus());
    CHECK(rel_err(puncture_eigenvalue_sq({2.0, 1.0, 1.0}, p[0]), 0.25) < 1e-15);
    CHECK(rel_err(puncture_eigenvalue_sq({1.0, 1.0, 1.0}, p[0]), 1.0) < 1e-15);
}

TEST_CASE("transport errors") {
    const Triangulation t = square();
    CHECK_THROWS_AS(flip_weights(t, {-1.0, 1.0, 1.0, 1.0, 1.0}, 0), DomainError);
    CHECK_THROWS_AS(flip_weights(t, {1.0, 1.0, 1.0, 1.0, 1.0}, 1), DomainError);
    CHECK_THROWS_AS(transport(t, {1.0, 1.0, 1.0, 1.0, 1.0}, {7}), InputError);
    try {
        // The first flip multiplies edge 3 by 4.
        transport(torus(), {1.0, 1.0, -0.25}, {0, 2});
        FAIL("expected a singular step");
    } catch (const DomainError& e) {
        CHECK(e.code() == "singular_weight");
        CHECK(std::string(e.what()).rfind("step 2", 0) == 0);
    }
}
