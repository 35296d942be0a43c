#pragma once

#include <vector>

#include "qteich/qparams.hpp"
#include "qteich/surface.hpp"

namespace qteich {

// Relative distance of a diagonal weight from the singular value -1.
double flip_margin(cplx diagonal_weight);

// Diagonal weight too close to -1 for a flip: |1 + x| < 1e-12 max(1, |x|).
bool flip_singular(cplx diagonal_weight);

// Classical coordinate change for a diagonal exchange at `edge`. The diagonal
// weight is inverted; sides 2 and 4 gain (1 + x), sides 3 and 5 gain
// (1 + 1/x)^-1. A side appearing twice in the square collects both factors.
std::vector<cplx> flip_weights(const Triangulation& t, const std::vector<cplx>& x, int edge);

struct TransportStep {
    int edge = -1;
    cplx diagonal_weight;
    double margin = 0.0;
};

struct TransportResult {
    Triangulation surface;          // triangulation after the last flip
    std::vector<cplx> weights;
    std::vector<TransportStep> steps;
};

// Flip along `path` left to right. A singular step raises DomainError with
// code "singular_weight" and the 1-based step index in the message.
TransportResult transport(const Triangulation& t, const std::vector<cplx>& x, const std::vector<int>& path);

// Product of all edge weights.
cplx peripheral_load(const std::vector<cplx>& x);

// Inverse product of the weights of the edge ends at a puncture.
cplx puncture_eigenvalue_sq(const std::vector<cplx>& x, const Puncture& p);

}  // namespace qteich
