#include <doctest.h>

#include "qteich/errors.hpp"
#include "qteich/intertwine.hpp"
#include "qteich/transport.hpp"
#include "surfaces.hpp"

using namespace qteich;
using namespace fixtures;

namespace {

cplx load_of(const QParams& q, const std::vector<cplx>& x) { return principal_root(peripheral_load(x), q.N()); }

// Matrix power by repeated multiplication.
Mat power(const Mat& m, int n) {
    Mat out = Mat::Identity(m.rows(), m.cols());
    for (int k = 0; k < n; ++k) out = out * m;
    return out;
}

}  // namespace

TEST_CASE("flip images have the transported N-th powers") {
    std::mt19937_64 rng(41);
    for (const Triangulation& t : {square(), torus(), sphere4()})
        for (int N : {2, 3}) {
            const QParams q(N);
            const auto x = random_weights(t, rng);
            const LocalRep r = rep_from_weights(t, q, x, load_of(q, x));
            const auto y = flip_weights(t, x, 0);
            for (int i = 0; i < t.edge_count(); ++i) {
                const Mat m = Mat(phi_q_on_generator(r, 0, i));
                const Mat p = power(m, N);
                CHECK((p - y[i] * Mat::Identity(p.rows(), p.cols())).norm() < 1e-9 * std::abs(y[i]) * p.rows());
            }
        }
}

TEST_CASE("weight-one square, N = 2: side images have powers 2 or 1/2") {
    const QParams q(2);
    const LocalRep r = rep_from_weights(square(), q, {1.0, 1.0, 1.0, 1.0, 1.0}, 1.0);
    for (int i = 1; i < 5; ++i) {
        const Mat p = power(Mat(phi_q_on_generator(r, 0, i)), 2);
        const double want = (i == 1 || i == 3) ? 2.0 : 0.5;
        CHECK((p - want * Mat::Identity(4, 4)).norm() < 1e-12);
    }
}

TEST_CASE("square system has a one-dimensional null space") {
    std::mt19937_64 rng(43);
    for (int N : {2, 3}) {
        const QParams q(N);
        const auto x = random_weights(square(), rng);
        const LocalRep r = rep_from_weights(square(), q, x, load_of(q, x));
        const NullSpaceReport ns = square_system(r, 0);
        CHECK(ns.dimension == 1);
        CHECK(ns.second > 1e-6);
        const auto reps = path_reps(square(), q, x, load_of(q, x), {0});
        const Intertwiner L = solve_flip_intertwiner(reps[0], reps[1], 0);
        CHECK(L.residual < 1e-10);
    }
}

TEST_CASE("equivalent realizations are joined by a tensor-split intertwiner") {
    std::mt19937_64 rng(47);
    const Triangulation t = torus();
    const QParams q(3);
    const auto x = random_weights(t, rng);
    const LocalRep r = rep_from_weights(t, q, x, load_of(q, x));
    // Twist two sides of face 0 by q^2 and q^-2: N-th powers and the face load
    // stay, the generators change by roots of unity.
    auto ys = r.face_params();
    ys[0][0] *= q.pow(2);
    ys[0][1] *= q.pow(-2);
    const LocalRep r2(t, q, ys);
    const Intertwiner L = solve_same_intertwiner(r, r2);
    CHECK(L.residual < 1e-10);
    CHECK(off_scalar_residual(L.L) > 1e-3);
    CHECK(same_residual(r, r2, {}, L.L) < 1e-10);
}

TEST_CASE("mismatched classifications have no intertwiner") {
    const QParams q(2);
    const LocalRep r = rep_from_weights(torus(), q, {1.0, 2.0, 3.0}, principal_root(6.0, 2));
    const LocalRep r2 = rep_from_weights(torus(), q, {1.0, 2.0, 4.0}, principal_root(8.0, 2));
    CHECK_THROWS_AS(solve_same_intertwiner(r, r2), DomainError);
}

TEST_CASE("pentagon composite is scalar") {
    std::mt19937_64 rng(53);
    const Triangulation t = pentagon();
    for (int N : {2, 3}) {
        const QParams q(N);
        const auto x = random_weights(t, rng);
        const ClosureReport c = closed_path(t, q, x, load_of(q, x), {0, 1, 0, 1, 0}, {1, 0, 2, 3, 4, 5, 6});
        CHECK(c.residual < 1e-9);
        CHECK(c.worst_step_residual < 1e-9);
    }
}

TEST_CASE("roundtrips and nested roundtrips are scalar") {
    std::mt19937_64 rng(59);
    const Triangulation t = torus();
    for (int N : {2, 3}) {
        const QParams q(N);
        for (const std::vector<int>& path :
             {std::vector<int>{0, 0}, {1, 1}, {0, 1, 1, 0}, {1, 0, 0, 1}, {2, 1, 1, 2}, {1, 1, 2, 2, 0, 0}}) {
            const auto x = random_weights(t, rng);
            CHECK(closed_path(t, q, x, load_of(q, x), path, {0, 1, 2}).residual < 1e-9);
        }
    }
}

TEST_CASE("distant flips commute on the four-punctured sphere") {
    std::mt19937_64 rng(61);
    const Triangulation t = sphere4();
    for (int N : {2, 3}) {
        const QParams q(N);
        const auto x = random_weights(t, rng);
        const cplx h = load_of(q, x);
        CHECK(closed_path(t, q, x, h, {0, 5, 0, 5}, {}).residual < 1e-9);
        const Mat a = compose_path(path_reps(t, q, x, h, {0, 5}), {0, 5}).L;
        const Mat b = compose_path(path_reps(t, q, x, h, {5, 0}), {5, 0}).L;
        CHECK(off_scalar_residual(a * b.inverse()) < 1e-9);
    }
}

TEST_CASE("invariant does not depend on the path or on step scalars") {
    const Triangulation t = torus();
    // Fixed point of flipping edge 1 followed by swapping edges 2 and 3.
    const std::vector<cplx> x{1.0, cplx(2.8, 1.2), cplx(0.7, 0.3)};
    const std::vector<int> rel{0, 2, 1};
    std::mt19937_64 rng(67);
    for (int N : {2, 3}) {
        const QParams q(N);
        const InvariantReport base = mapping_class_invariant(t, q, x, {0}, rel, 0);
        CHECK(base.fixed_point_residual < 1e-12);
        for (const std::vector<int>& path :
             {std::vector<int>{0, 0, 0}, {1, 1, 0}, {0, 2, 2}, {2, 2, 0, 1, 1}}) {
            std::vector<cplx> scales;
            for (std::size_t k = 0; k < path.size(); ++k) scales.push_back(random_weight(rng, 0.2, 5.0));
            const InvariantReport r = mapping_class_invariant(t, q, x, path, rel, 0, kDefaultMaxDim, scales);
            CHECK(std::abs(r.abs_trace_ratio - base.abs_trace_ratio) < 1e-9);
            CHECK(eigen_ratio_distance(r.eigen_ratios, base.eigen_ratios) < 1e-9);
        }
        // Eigenvalue ratios of a finite-order class are roots of unity.
        for (const auto& z : base.eigen_ratios) {
            CHECK(std::abs(std::abs(z) - 1.0) < 1e-9);
            CHECK(std::abs(std::pow(z, 12) - 1.0) < 1e-8);
        }
    }
}

TEST_CASE("identity class has trace ratio equal to the dimension") {
    const QParams q(2);
    const InvariantReport r = mapping_class_invariant(torus(), q, {1.0, 2.0, 0.5}, {}, {0, 1, 2}, 0);
    CHECK(std::abs(r.abs_trace_ratio - 4.0) < 1e-12);
}

TEST_CASE("singular diagonal is reported") {
    const QParams q(2);
    // x = 1 at N = 2: rho(X) has eigenvalues +-1, so 1 + q X is singular.
    const LocalRep r = rep_from_weights(square(), q, {-1.0, 1.0, 1.0, 1.0, 1.0}, principal_root(-1.0, 2));
    CHECK_THROWS_AS(phi_q_on_generator(r, 0, 1), DomainError);
}

TEST_CASE("non-fixed weights are rejected by the invariant") {
    CHECK_THROWS_AS(mapping_class_invariant(torus(), QParams(2), {1.0, 2.0, 3.0}, {0}, {0, 2, 1}, 0), DomainError);
}
