#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "qteich/qparams.hpp"
#include "qteich/surface.hpp"

namespace qteich {

// Point of the Riemann sphere as a projective pair (z0 : z1); infinity is (1 : 0).
using PPoint = Eigen::Vector2cd;
using Mobius = Eigen::Matrix2cd;

PPoint ppoint(cplx z);
PPoint infinity_point();
// Rescale so the larger coordinate has modulus 1.
PPoint normalized(const PPoint& p);
// True when the points coincide to relative tolerance tol.
bool same_point(const PPoint& p, const PPoint& r, double tol = 1e-12);
// Affine value, or an infinite complex when z1 == 0.
cplx affine(const PPoint& p);

// Vertices of a developed face in slot order: side s runs from vertex s to vertex s + 1.
using IdealTriple = std::array<PPoint, 3>;

// Cross-ratio (p, r; s, u) = (p - s)(r - u) / ((p - u)(r - s)) in projective form.
cplx cross_ratio(const PPoint& p, const PPoint& r, const PPoint& s, const PPoint& u);

// Moebius map sending a -> b pointwise for both triples.
Mobius mobius_from_triples(const IdealTriple& a, const IdealTriple& b);

// Apply a Moebius map to a point (normalized result).
PPoint apply_mobius(const Mobius& m, const PPoint& p);

// Opposite vertex of the face across side `slot` of a developed face, for an
// edge of weight x: the new vertex d satisfies cross_ratio(a, b; c, d) = -x.
PPoint cross_side(const IdealTriple& face, int slot, cplx x);

// Weight read back from a developed quadrilateral: -cross_ratio(a, b; c, d).
cplx quad_weight(const IdealTriple& face, int slot, const PPoint& opposite);

// Development of a spanning tree of faces, face 0 at (0, 1, infinity).
struct Development {
    std::vector<IdealTriple> position;
    std::vector<int> parent;                       // face the tree enters from, -1 at the root
    std::vector<std::array<char, 3>> tree_side;    // side used by the tree
    std::vector<std::array<Mobius, 3>> crossing;   // deck map for each glued side
};

Development develop_tree(const Triangulation& t, const std::vector<cplx>& x);

struct DevelopResult {
    int face = 0;
    IdealTriple triple;
};

// Develop from face 0 along a sequence of crossed slots.
DevelopResult develop(const Triangulation& t, const std::vector<cplx>& x, const std::vector<int>& slots);

// Holonomy of a closed dual path starting at `start_face`, as an SL2 matrix with
// the sign fixed by normalize_sl2.
Mobius holonomy(const Triangulation& t, const std::vector<cplx>& x, int start_face, const std::vector<int>& slots);

// Scale to determinant 1; the sign makes the largest-modulus entry have
// non-negative real part (positive imaginary part on ties).
Mobius normalize_sl2(const Mobius& m);

// Peripheral dual loop around puncture k: start face and crossed slots.
struct PeripheralLoop {
    int start_face = 0;
    std::vector<int> slots;
    PPoint fixed_point;     // developed vertex of the puncture at the start corner
};
PeripheralLoop peripheral_loop(const Triangulation& t, const std::vector<cplx>& x, int puncture);

struct PunctureEigen {
    cplx derivative;        // derivative of the holonomy at its fixed point
    cplx expected;          // inverse product of the incident weights
    double residual = 0.0;  // relative difference
    double fixed_point_residual = 0.0;
    cplx trace;
};
PunctureEigen puncture_eigenvalue(const Triangulation& t, const std::vector<cplx>& x, int puncture);

struct RoundtripResult {
    std::vector<cplx> weights;
    double residual = 0.0;
};
// Recompute every interior edge weight from the developed quadrilaterals.
RoundtripResult roundtrip_weights(const Triangulation& t, const std::vector<cplx>& x);

// Weights of flip(t, diagonal) read from the developed square of t.
std::vector<cplx> geometric_flip_weights(const Triangulation& t, const std::vector<cplx>& x, int diagonal);

// Glued side pairs outside the spanning tree, one generator each.
int generator_count(const Triangulation& t);

struct LoadReport {
    int punctures = 0;
    std::vector<cplx> peripheral_eigen;   // a_k for each puncture
    cplx lhs;                             // (-1)^p prod a_k^-1
    cplx rhs;                             // prod x_i
    double residual = 0.0;
    double squared_residual = 0.0;        // prod a_k^-2 against (prod x_i)^2
};

// Peripheral load identity with generator lifts multiplied by `signs` (+1/-1).
LoadReport total_load_check(const Triangulation& t, const std::vector<cplx>& x, const std::vector<int>& signs);

}  // namespace qteich
