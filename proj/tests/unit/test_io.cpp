#include <doctest.h>

#include "qteich/errors.hpp"
#include "qteich/io.hpp"
#include "surfaces.hpp"

using namespace qteich;
using namespace fixtures;

TEST_CASE("triangulation JSON round trip") {
    for (const Triangulation& t : {triangle(), square(), pentagon(), torus(), sphere4()}) {
        const json j = triangulation_to_json(t);
        CHECK(triangulation_from_json(j) == t);
        // The gluing alone reproduces the surface up to labels.
        json g = j;
        g.erase("edges");
        const Triangulation u = triangulation_from_json(g);
        CHECK(u.face_count() == t.face_count());
        CHECK(u.edge_count() == t.edge_count());
        CHECK(validate(u).punctures == validate(t).punctures);
    }
    const json torus_json = json::parse(R"({"faces": 2, "gluing": [[[1,1],[2,1]], [[1,2],[2,2]], [[1,3],[2,3]]]})");
    CHECK(triangulation_from_json(torus_json) == torus());
}

TEST_CASE("malformed triangulations") {
    CHECK_THROWS_AS(triangulation_from_json(json::parse(R"({"gluing": []})")), InputError);
    CHECK_THROWS_AS(triangulation_from_json(json::parse(R"({"faces": 1, "gluing": [[[1,4],[1,1]]]})")), InputError);
    CHECK_THROWS_AS(triangulation_from_json(json::parse(R"({"faces": 1, "gluing": [[[1,1],[1,1]]]})")), InputError);
    CHECK_THROWS_AS(triangulation_from_json(json::parse(R"({"faces": 0, "gluing": []})")), InputError);
    CHECK_THROWS_AS(triangulation_from_json(json::parse(R"([1, 2])")), InputError);
}

TEST_CASE("weights and complex numbers") {
    const std::vector<cplx> x{cplx(1.5, -2.0), 3.0};
    CHECK(weights_from_json(weights_to_json(x)) == x);
    CHECK(weights_from_json(json::parse(R"({"weights": [2, [0, 1]]})")) == std::vector<cplx>{2.0, cplx(0.0, 1.0)});
    CHECK_THROWS_AS(weights_from_json(json::parse(R"({"weights": [[1, 2, 3]]})")), InputError);
    CHECK_THROWS_AS(weights_from_json(weights_to_json(x), 3), InputError);
    CHECK(complex_to_json(cplx(-0.0, 0.0)).dump() == "[0.0,0.0]");
}

TEST_CASE("representation descriptor round trip") {
    std::mt19937_64 rng(113);
    const Triangulation t = torus();
    const QParams q(3);
    const LocalRep r = random_rep(t, q, rng);
    const LocalRep r2 = rep_from_json(rep_to_json(r), t);
    const Classification a = classify(r), b = classify(r2);
    CHECK(max_rel_err(a.x, b.x) < 1e-12);
    CHECK(rel_err(a.h, b.h) < 1e-12);
    CHECK_THROWS_AS(rep_from_json(rep_to_json(r), sphere4()), InputError);
}

TEST_CASE("index lists") {
    CHECK(parse_index_list("1,3,1", 3, "path") == std::vector<int>{0, 2, 0});
    CHECK(parse_index_list(" 2 , 1 ", 3, "path") == std::vector<int>{1, 0});
    CHECK(parse_index_list("", 3, "path").empty());
    CHECK_THROWS_AS(parse_index_list("1,4", 3, "path"), InputError);
    CHECK_THROWS_AS(parse_index_list("1,,2", 3, "path"), InputError);
    CHECK_THROWS_AS(parse_index_list("x", 3, "path"), InputError);
}

TEST_CASE("dump is stable") {
    const json j{{"b", 1}, {"a", json::array({0.1, 2.0})}};
    CHECK(dump(j) == dump(json::parse(dump(j))));
}
