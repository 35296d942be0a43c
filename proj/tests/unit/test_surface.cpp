#include <doctest.h>

#include <algorithm>
#include <set>

#include "qteich/errors.hpp"
#include "surfaces.hpp"

using namespace qteich;
using namespace fixtures;

TEST_CASE("validate counts the ideal triangle and the torus") {
    const ValidationReport tri = validate(triangle());
    CHECK(tri.faces == 1);
    CHECK(tri.edges == 3);
    CHECK(tri.unglued_sides == 3);
    CHECK(tri.punctures == 3);

    const ValidationReport tor = validate(torus());
    CHECK(tor.faces == 2);
    CHECK(tor.edges == 3);
    CHECK(tor.punctures == 1);
    CHECK(tor.unglued_sides == 0);

    const ValidationReport sph = validate(sphere4());
    CHECK(sph.punctures == 4);
    CHECK(sph.euler_closed == 2);
}

TEST_CASE("gluing errors") {
    CHECK_THROWS_AS(Triangulation::from_gluing(1, {{Side{0, 0}, Side{0, 0}}}), InputError);
    CHECK_THROWS_AS(Triangulation::from_gluing(1, {{Side{0, 0}, Side{0, 1}}, {Side{0, 0}, Side{0, 2}}}), InputError);
    CHECK_THROWS_AS(Triangulation::from_gluing(2, {{Side{0, 0}, Side{2, 1}}}), InputError);
    CHECK_THROWS_AS(Triangulation::from_labels({{0, 0, 0}}), InputError);
}

TEST_CASE("gluing labels edges by first occurrence") {
    const Triangulation t =
        Triangulation::from_gluing(2, {{Side{0, 0}, Side{1, 0}}, {Side{0, 1}, Side{1, 1}}, {Side{0, 2}, Side{1, 2}}});
    CHECK(t == torus());
}

TEST_CASE("sigma matrix") {
    const auto s1 = sigma_matrix(triangle());
    CHECK(s1[0][1] == 1);
    CHECK(s1[1][2] == 1);
    CHECK(s1[2][0] == 1);

    const auto s2 = sigma_matrix(torus());
    CHECK(s2[0][1] == 2);
    CHECK(s2[1][2] == 2);
    CHECK(s2[2][0] == 2);

    for (const Triangulation& t : {triangle(), square(), pentagon(), torus(), sphere4()}) {
        const auto s = sigma_matrix(t);
        for (int i = 0; i < t.edge_count(); ++i) {
            CHECK(s[i][i] == 0);
            for (int j = 0; j < t.edge_count(); ++j) {
                CHECK(s[i][j] == -s[j][i]);
                CHECK(std::abs(s[i][j]) <= 2);
            }
        }
    }
}

TEST_CASE("punctures") {
    const auto tp = punctures(torus());
    REQUIRE(tp.size() == 1);
    CHECK(tp[0].corners.size() == 6);
    for (int e = 0; e < 3; ++e) CHECK(std::count(tp[0].incident_edges.begin(), tp[0].incident_edges.end(), e) == 2);
    CHECK(punctures(square()).size() == 4);
    CHECK(punctures(pentagon()).size() == 5);
    for (const auto& p : punctures(square())) CHECK(p.boundary);
}

TEST_CASE("flip of the square exchanges the diagonal") {
    const Triangulation t = square();
    const FlipMove mv = flip_move(t, 0);
    CHECK(mv.sides == std::array<int, 4>{1, 2, 3, 4});
    const Triangulation f = flip(t, 0);
    CHECK(f.face_count() == 2);
    CHECK(!(f.canonical_key() == t.canonical_key()));
    CHECK(flip(f, 0).canonical_key() == t.canonical_key());
    CHECK_THROWS_AS(flip(t, 1), DomainError);
}

TEST_CASE("torus flip gives an isomorphic triangulation") {
    const Triangulation t = torus();
    const Triangulation f = flip(t, 0);
    CHECK(validate(f).punctures == 1);
    // Swapping the two side labels carries the flip back onto the start.
    CHECK(find_isomorphism(relabel(f, {0, 2, 1}), t, {0, 1, 2}).has_value());
}

TEST_CASE("tracked flips invert each other") {
    for (const Triangulation& t : {square(), pentagon(), torus(), sphere4()}) {
        const SideIds ids = initial_side_ids(t);
        for (int e = 0; e < t.edge_count(); ++e) {
            if (t.is_boundary_edge(e) || t.is_self_folded(e)) continue;
            const TrackedFlip once = flip_tracked(t, ids, e);
            CHECK(once.surface.canonical_key() == flip(t, e).canonical_key());
            const TrackedFlip twice = flip_tracked(once.surface, once.ids, e);
            REQUIRE(twice.surface.face_count() == t.face_count());
            for (int j = 0; j < t.face_count(); ++j) {
                bool rotated = false;
                for (int r = 0; r < 3; ++r) {
                    bool same = true;
                    for (int s = 0; s < 3; ++s)
                        same = same && twice.surface.face_edges()[j][(s + r) % 3] == t.face_edges()[j][s] &&
                               twice.ids[j][(s + r) % 3] == ids[j][s];
                    rotated = rotated || same;
                }
                CHECK(rotated);
            }
        }
    }
}

TEST_CASE("split and fuse") {
    const SplitResult s = split(torus(), {0, 1, 2});
    CHECK(s.surface.face_count() == 2);
    CHECK(s.surface.unglued_side_count() == 6);
    CHECK(validate(s.surface).components == 2);

    const SplitResult sq = split(square(), {0});
    CHECK(sq.fusion_map.size() == 1);
    CHECK(validate(sq.surface).components == 2);
    std::vector<std::pair<Side, Side>> pairs;
    for (const auto& f : sq.fusion_map)
        pairs.emplace_back(sq.surface.sides_of_edge(f[0])[0], sq.surface.sides_of_edge(f[1])[0]);
    CHECK(fuse(sq.surface, pairs) == square());
}

TEST_CASE("flip path finds the pentagon cycle") {
    const Triangulation t = pentagon();
    const Triangulation target = relabel(t, {1, 0, 2, 3, 4, 5, 6});
    const FlipPathResult r = flip_path(t, target, 6);
    REQUIRE(r.found);
    CHECK(r.path.size() == 5);
    Triangulation cur = t;
    for (int e : r.path) cur = flip(cur, e);
    CHECK(cur.canonical_key() == target.canonical_key());
}

TEST_CASE("edges of every fixture have one or two sides") {
    for (const Triangulation& t : {triangle(), square(), pentagon(), torus(), sphere4()}) {
        int sides = 0;
        for (int e = 0; e < t.edge_count(); ++e) {
            const auto n = t.sides_of_edge(e).size();
            CHECK((n == 1 || n == 2));
            sides += static_cast<int>(n);
        }
        CHECK(sides == 3 * t.face_count());
    }
}
