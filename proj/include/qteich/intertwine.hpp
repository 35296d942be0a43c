#pragma once

#include <random>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "qteich/representation.hpp"
#include "qteich/transport.hpp"

namespace qteich {

using SpMat = Eigen::SparseMatrix<cplx>;

SpMat to_sparse(const GenMatrix& g);

// Singular values of the stacked system A_k X = X B_k, relative to the largest.
struct NullSpaceReport {
    int dimension = 0;        // 0, 1, or 2 meaning "at least two"
    double smallest = 0.0;
    double second = 0.0;
    Mat solution;             // rows x cols, set when dimension == 1
};

// Null space of X -> (A_k X - X B_k)_k for X of shape rows x cols. The
// smallest relative singular value must be below `zero_tol` and the next one
// above `gap_tol` for a one-dimensional answer.
NullSpaceReport intertwining_nullspace(const std::vector<std::pair<Mat, Mat>>& equations, Eigen::Index rows,
                                       Eigen::Index cols, double zero_tol = 1e-8, double gap_tol = 1e-6);

// Matrix of rho(Phi(X'_edge)) where X'_edge generates the algebra of flip(t, diagonal).
// Inverse factors use the closed form sum_k (-q B)^k / (1 + B^N), B^N scalar.
SpMat phi_q_on_generator(const LocalRep& r, int diagonal, int edge);

// N-th roots used to transport square sides across a flip with diagonal edge
// root r (r^N = x): sides 2 and 4 gain `grow` (grow^N = 1 + x), sides 3 and 5
// gain `shrink` = sign * r / grow. The choice for 1/r inverts the one for r.
struct FlipRoots {
    cplx grow;
    cplx shrink;
    double sign = 1.0;
};
FlipRoots flip_roots(cplx edge_root, int N);

// Local representation on flip(t, diagonal) that agrees with r off the square.
// Square sides are multiplied by flip_roots of the diagonal's edge root; each
// new diagonal side gets the inverse parameter of one old diagonal side: the
// new face_a takes 1/(old face_b side) when its diagonal side inherits face_a's
// identity, else 1/(old face_a side). Flipping back with the matching choice
// restores every parameter.
LocalRep flip_intermediate(const LocalRep& r, int diagonal, bool inherit_from_a = true);

struct Intertwiner {
    Mat L;                      // maps the target space into the source space
    double residual = 0.0;      // worst relative intertwining residual over generators
    double smallest = 0.0;      // square or face null-space singular values (worst case)
    double second = 1.0;
};

// Scale to unit operator norm, then rotate so the largest-modulus entry is positive real.
void normalize(Mat& L);

// Intertwiner L: V(r2) -> V(r) with r(X_i) L = L r2(X_{edge_map[i]}). An empty
// edge map means the identity. Tensor-split up to a permutation of factors.
Intertwiner solve_same_intertwiner(const LocalRep& r, const LocalRep& r2, const std::vector<int>& edge_map = {});

// Singular values of the square system for flipping `diagonal` of r.
NullSpaceReport square_system(const LocalRep& r, int diagonal, bool inherit_from_a = true);

// Intertwiner L: V(r2) -> V(r) with r(Phi(X'_i)) L = L r2(X'_i), where r2 lives on
// flip(r.triangulation(), diagonal) up to the order of faces.
Intertwiner solve_flip_intertwiner(const LocalRep& r, const LocalRep& r2, int diagonal);

// Relative residual max_i |A_i L - L B_i| / max(|A_i L|, |L B_i|).
double flip_residual(const LocalRep& r, const LocalRep& r2, int diagonal, const Mat& L);
double same_residual(const LocalRep& r, const LocalRep& r2, const std::vector<int>& edge_map, const Mat& L);

// Representations along a path: rep_from_weights at the start, then each state
// is flip_intermediate of the previous one. Faces are ordered by flip_tracked and
// the diagonal assignment follows its side identifiers, so a flip followed by
// its inverse returns exactly the starting parameters.
std::vector<LocalRep> path_reps(const Triangulation& t, const QParams& q, const std::vector<cplx>& x, cplx h,
                                const std::vector<int>& path, std::size_t max_dim = kDefaultMaxDim);

struct PathIntertwiner {
    Mat L;                          // V(reps.back()) -> V(reps.front())
    std::vector<Intertwiner> steps;
    double worst_residual = 0.0;
};

// Ordered product of unit-normalized elementary intertwiners. `step_scales`, if
// non-empty, multiplies step k by the given scalar before composing.
PathIntertwiner compose_path(const std::vector<LocalRep>& reps, const std::vector<int>& path,
                             const std::vector<cplx>& step_scales = {});

// max |L - m Id| / |m| with m the mean diagonal entry.
double off_scalar_residual(const Mat& L);

struct ClosureReport {
    double residual = 0.0;           // off-scalar residual of the closed composite
    double worst_step_residual = 0.0;
    Mat composite;
};

// Compose along `path` from the rep of (t, x, h), then close up with the
// same-triangulation intertwiner into the start rep under `relabel` (edge i of
// the endpoint becomes edge relabel[i]).
ClosureReport closed_path(const Triangulation& t, const QParams& q, const std::vector<cplx>& x, cplx h,
                          const std::vector<int>& path, const std::vector<int>& relabel,
                          std::size_t max_dim = kDefaultMaxDim, const std::vector<cplx>& step_scales = {});

struct InvariantReport {
    double fixed_point_residual = 0.0;
    double abs_trace_ratio = 0.0;     // |tr L| / |det L|^(1/dim)
    cplx normalized_trace;            // tr L * det L^(-1/dim), rotated into [0, 2 pi / dim)
    int sector = 0;                   // the rotation applied, in units of 2 pi / dim
    std::vector<cplx> eigen_ratios;   // eigenvalues over the largest-modulus one
    double worst_step_residual = 0.0;
    Mat composite;
};

// Invariant of the mapping class given by a flip path and an edge relabeling
// fixing the weights x. The central load is the principal root of prod x times
// q^(2 k).
InvariantReport mapping_class_invariant(const Triangulation& t, const QParams& q, const std::vector<cplx>& x,
                                        const std::vector<int>& path, const std::vector<int>& relabel,
                                        int h_root_k, std::size_t max_dim = kDefaultMaxDim,
                                        const std::vector<cplx>& step_scales = {});

// Compare eigenvalue multisets up to one common scalar; returns the worst
// matched distance (infinity when sizes differ).
double eigen_ratio_distance(const std::vector<cplx>& a, const std::vector<cplx>& b);

}  // namespace qteich
