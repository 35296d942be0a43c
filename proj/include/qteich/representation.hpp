#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qteich/qalgebra.hpp"
#include "qteich/qparams.hpp"
#include "qteich/surface.hpp"

namespace qteich {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Monomial matrix: column j has one nonzero entry, value[j] at row target[j].
// All generator images of local representations have this shape, so products,
// powers and scalarity checks run in O(dim).
class GenMatrix {
public:
    GenMatrix() = default;
    static GenMatrix identity(std::size_t dim);
    static GenMatrix diagonal(std::vector<cplx> d);
    static GenMatrix monomial(std::vector<std::uint32_t> target, std::vector<cplx> value);

    std::size_t dim() const { return target_.size(); }
    const std::vector<std::uint32_t>& target() const { return target_; }
    const std::vector<cplx>& value() const { return value_; }

    GenMatrix operator*(const GenMatrix& o) const;
    GenMatrix scaled(cplx c) const;
    GenMatrix inverse() const;
    GenMatrix power(long long k) const;
    Mat dense() const;

    // Returns true and the scalar when the matrix is c*Id to the given relative
    // tolerance on the spread of diagonal values.
    bool scalar(cplx& c, double rel_tol) const;
    // Largest |A - B| entry relative to the largest entry of A or B.
    static double rel_diff(const GenMatrix& a, const GenMatrix& b);

    static GenMatrix kron(const GenMatrix& a, const GenMatrix& b);
    // Embed an N x N monomial matrix on tensor factor `factor` of m factors.
    static GenMatrix on_factor(const GenMatrix& a, int factor, int m);

private:
    std::vector<std::uint32_t> target_;
    std::vector<cplx> value_;
};

// Irreducible triangle-algebra representation on C^N with parameters y:
// M1 = diag(y1 q^{2i}), M2 e_i = y2 e_{i+1}, M3 e_i = y3 q^{1-2i} e_{i-1}.
struct TriangleRep {
    QParams q;
    std::array<cplx, 3> y;
    std::array<GenMatrix, 3> M;
};

TriangleRep triangle_rep(const QParams& q, const std::array<cplx, 3>& y);

struct FaceData {
    std::array<cplx, 3> w;  // side weights, one per slot
    cplx h;                 // face load, h^N = w1 w2 w3
};

struct Classification {
    std::vector<cplx> x;
    cplx h;
    double scalar_residual = 0.0;  // worst relative off-scalar spread
    double load_residual = 0.0;    // |h^N - prod x| / |prod x|
};

inline constexpr std::size_t kDefaultMaxDim = 4096;

// Local representation: per-face triangle parameters on a triangulation.
// Matrices act on V_1 (x) ... (x) V_m with face 0 the most significant factor.
class LocalRep {
public:
    LocalRep(Triangulation t, QParams q, std::vector<std::array<cplx, 3>> face_y,
             std::size_t max_dim = kDefaultMaxDim);

    // Per-face (w, h) with y1, y2 principal N-th roots and y3 = h / (y1 y2).
    static LocalRep from_face_data(const Triangulation& t, const QParams& q, const std::vector<FaceData>& data,
                                   std::size_t max_dim = kDefaultMaxDim);

    const Triangulation& triangulation() const { return t_; }
    const QParams& q() const { return q_; }
    int N() const { return q_.N(); }
    std::size_t dim() const { return dim_; }
    const std::vector<std::array<cplx, 3>>& face_params() const { return y_; }

    FaceData face_data(int face) const;
    std::vector<FaceData> face_data() const;

    // N x N matrix of slot s of face j.
    GenMatrix side_local(int face, int slot) const;
    // Same matrix embedded in the full tensor product.
    GenMatrix side(int face, int slot) const;
    // rho(X_i): Weyl-ordered product of the side matrices of edge i.
    GenMatrix generator(int edge) const;
    std::vector<GenMatrix> generators() const;
    // rho(H) with the exact q-power prefactor.
    GenMatrix central() const;
    // rho of a Chekhov-Fock polynomial (dense).
    Mat evaluate(const SkewPolynomial& p) const;

private:
    Triangulation t_;
    QParams q_;
    std::vector<std::array<cplx, 3>> y_;
    std::size_t dim_;
};

// Principal N-th root (argument in (-pi/N, pi/N]).
cplx principal_root(cplx z, int N);

Classification classify(const LocalRep& r, double rel_tol = 1e-9);

// Local representation classified by the given edge weights and central load.
// Each edge weight sits on the first side of its edge; face loads use principal
// roots and face 0 absorbs the root-of-unity correction.
LocalRep rep_from_weights(const Triangulation& t, const QParams& q, const std::vector<cplx>& x, cplx h,
                          std::size_t max_dim = kDefaultMaxDim);

// All weights 1, central load q^{2k} carried entirely by face 0.
LocalRep standard_rep(const Triangulation& t, const QParams& q, int k, std::size_t max_dim = kDefaultMaxDim);

// rho(X_i) multiplied by roots[i]: the first side of edge i is rescaled.
LocalRep scale_by_roots(const LocalRep& r, const std::vector<cplx>& roots);

// Random generic representation: side weights with modulus in [1/2, 2] and
// uniform phase, face loads a random N-th root of the side product.
LocalRep random_rep(const Triangulation& t, const QParams& q, std::mt19937_64& rng,
                    std::size_t max_dim = kDefaultMaxDim);

// Random nonzero complex number with modulus in [lo, hi] and uniform phase.
cplx random_weight(std::mt19937_64& rng, double lo = 0.5, double hi = 2.0);

// Worst relative residual of rho(X_i) rho(X_j) = q^{2 sigma_ij} rho(X_j) rho(X_i).
double relation_residual(const LocalRep& r);

}  // namespace qteich
