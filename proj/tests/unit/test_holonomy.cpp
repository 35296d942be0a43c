#include <doctest.h>

#include "qteich/errors.hpp"
#include "qteich/holonomy.hpp"
#include "qteich/transport.hpp"
#include "surfaces.hpp"

using namespace qteich;
using namespace fixtures;

namespace {

bool projective_identity(const Mobius& m, double tol) {
    const Mobius n = normalize_sl2(m);
    return (n - Mobius::Identity()).norm() < tol || (n + Mobius::Identity()).norm() < tol;
}

// Cross-ratio from affine values, as an independent oracle.
cplx affine_cross_ratio(cplx p, cplx r, cplx s, cplx u) { return (p - s) * (r - u) / ((p - u) * (r - s)); }

}  // namespace

TEST_CASE("development from the base triangle") {
    const Triangulation t = torus();
    const DevelopResult base = develop(t, {1.0, 1.0, 1.0}, {});
    CHECK(same_point(base.triple[0], ppoint(0.0)));
    CHECK(same_point(base.triple[1], ppoint(1.0)));
    CHECK(same_point(base.triple[2], infinity_point()));

    // Slot 3 of the base face runs from infinity to 0; x = 1 puts the new vertex at -1.
    const PPoint d = cross_side(base.triple, 2, 1.0);
    CHECK(std::abs(affine(d) + 1.0) < 1e-15);

    std::mt19937_64 rng(71);
    const auto x = random_weights(t, rng);
    const DevelopResult there = develop(t, x, {1});
    const Side back = *t.partner({0, 1});
    const DevelopResult again = develop(t, x, {1, back.slot});
    CHECK(again.face == 0);
    for (int s = 0; s < 3; ++s) CHECK(same_point(again.triple[s], base.triple[s], 1e-12));
    CHECK(there.face == 1);
}

TEST_CASE("crossing condition matches the affine cross-ratio") {
    std::mt19937_64 rng(73);
    for (int k = 0; k < 20; ++k) {
        const IdealTriple f{ppoint(random_weight(rng)), ppoint(random_weight(rng) + 3.0), ppoint(-random_weight(rng))};
        const cplx x = random_weight(rng);
        for (int s = 0; s < 3; ++s) {
            const PPoint d = cross_side(f, s, x);
            const cplx cr = affine_cross_ratio(affine(f[s]), affine(f[(s + 1) % 3]), affine(f[(s + 2) % 3]), affine(d));
            CHECK(std::abs(cr + x) < 1e-10 * std::max(1.0, std::abs(x)));
            CHECK(std::abs(quad_weight(f, s, d) - x) < 1e-10 * std::max(1.0, std::abs(x)));
        }
    }
}

TEST_CASE("contractible loops have trivial holonomy") {
    std::mt19937_64 rng(79);
    const Triangulation t = sphere4();
    const auto x = random_weights(t, rng);
    const Side p = *t.partner({0, 0});
    CHECK(projective_identity(holonomy(t, x, 0, {0, p.slot}), 1e-12));
    CHECK(projective_identity(holonomy(t, x, 0, {}), 1e-15));
}

TEST_CASE("holonomy is a homomorphism") {
    std::mt19937_64 rng(83);
    const Triangulation t = torus();
    const auto x = random_weights(t, rng);
    // Loops based at face 1 crossing edges (1, 2) and (2, 3).
    const std::vector<int> a{0, 1}, b{1, 2};
    const Mobius ma = holonomy(t, x, 0, a), mb = holonomy(t, x, 0, b);
    std::vector<int> ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    const Mobius mab = holonomy(t, x, 0, ab);
    CHECK(projective_identity(mab.inverse() * ma * mb, 1e-10));
}

TEST_CASE("modular torus peripheral holonomy is parabolic") {
    const Triangulation t = torus();
    const PeripheralLoop loop = peripheral_loop(t, {1.0, 1.0, 1.0}, 0);
    CHECK(loop.slots.size() == 6);
    const Mobius m = holonomy(t, {1.0, 1.0, 1.0}, loop.start_face, loop.slots);
    CHECK(std::abs(std::abs(m.trace()) - 2.0) < 1e-12);
    const PunctureEigen e = puncture_eigenvalue(t, {1.0, 1.0, 1.0}, 0);
    CHECK(std::abs(e.derivative - 1.0) < 1e-12);
    CHECK(e.residual < 1e-9);
}

TEST_CASE("puncture derivative against incidence products") {
    const PunctureEigen e = puncture_eigenvalue(torus(), {2.0, 1.0, 1.0}, 0);
    CHECK(std::abs(e.derivative - 0.25) < 1e-12);
    std::mt19937_64 rng(89);
    for (const Triangulation& t : {torus(), sphere4()})
        for (int trial = 0; trial < 10; ++trial) {
            const auto x = positive_weights(t, rng);
            for (int k = 0; k < static_cast<int>(punctures(t).size()); ++k)
                CHECK(puncture_eigenvalue(t, x, k).residual < 1e-8);
        }
}

TEST_CASE("positive weights give real traces") {
    std::mt19937_64 rng(97);
    const Triangulation t = sphere4();
    const auto x = positive_weights(t, rng);
    for (const std::vector<int>& loop : {std::vector<int>{0, 0}, {1, 2, 1, 0}, {2, 1}}) {
        try {
            const Mobius m = holonomy(t, x, 0, loop);
            CHECK(std::abs(m.trace().imag()) < 1e-10 * std::max(1.0, std::abs(m.trace())));
        } catch (const InputError&) {
            // Not every slot sequence closes up; those are skipped.
        }
    }
    for (int k = 0; k < 4; ++k) {
        const PeripheralLoop p = peripheral_loop(t, x, k);
        const Mobius m = holonomy(t, x, p.start_face, p.slots);
        CHECK(std::abs(m.trace().imag()) < 1e-10);
    }
}

TEST_CASE("weights survive the development roundtrip") {
    std::mt19937_64 rng(101);
    for (const Triangulation& t : {square(), pentagon(), torus(), sphere4()})
        for (int trial = 0; trial < 10; ++trial) {
            const auto x = random_weights(t, rng);
            CHECK(roundtrip_weights(t, x).residual < 1e-10);
        }
    const auto m = roundtrip_weights(torus(), {1.0, 1.0, 1.0});
    CHECK(max_rel_err(m.weights, {1.0, 1.0, 1.0}) < 1e-14);
}

TEST_CASE("geometric flip agrees with the coordinate change") {
    std::mt19937_64 rng(103);
    for (const Triangulation& t : {square(), pentagon(), torus(), sphere4()})
        for (int e = 0; e < t.edge_count(); ++e) {
            if (t.is_boundary_edge(e)) continue;
            const auto x = random_weights(t, rng);
            CHECK(max_rel_err(geometric_flip_weights(t, x, e), flip_weights(t, x, e)) < 1e-10);
        }
}

TEST_CASE("peripheral load identity") {
    const LoadReport modular = total_load_check(torus(), {1.0, 1.0, 1.0}, std::vector<int>(2, 1));
    REQUIRE(modular.peripheral_eigen.size() == 1);
    CHECK(std::abs(modular.peripheral_eigen[0] + 1.0) < 1e-12);

    std::mt19937_64 rng(107);
    for (const Triangulation& t : {torus(), sphere4()})
        for (int trial = 0; trial < 8; ++trial) {
            const auto x = trial % 2 ? positive_weights(t, rng) : random_weights(t, rng);
            std::vector<int> signs(static_cast<std::size_t>(generator_count(t)));
            for (auto& s : signs) s = (rng() & 1) ? 1 : -1;
            const LoadReport r = total_load_check(t, x, signs);
            CHECK(r.residual < 1e-8);
            CHECK(r.squared_residual < 1e-9);
        }
    CHECK_THROWS_AS(total_load_check(square(), {1.0, 1.0, 1.0, 1.0, 1.0}, {}), DomainError);
    CHECK_THROWS_AS(total_load_check(torus(), {1.0, 1.0, 1.0}, {1}), InputError);
}

TEST_CASE("Moebius from triples") {
    const IdealTriple a{ppoint(0.0), ppoint(1.0), infinity_point()};
    const IdealTriple b{ppoint(cplx(2.0, 1.0)), ppoint(-1.0), ppoint(cplx(0.0, 3.0))};
    const Mobius m = mobius_from_triples(a, b);
    for (int s = 0; s < 3; ++s) CHECK(same_point(apply_mobius(m, a[s]), b[s], 1e-12));
    CHECK_THROWS_AS(mobius_from_triples({ppoint(0.0), ppoint(0.0), ppoint(1.0)}, b), DomainError);
}
