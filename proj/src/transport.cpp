#include "qteich/transport.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qteich/errors.hpp"

namespace qteich {

double flip_margin(cplx diagonal_weight) {
    return std::abs(1.0 + diagonal_weight) / std::max(1.0, std::abs(diagonal_weight));
}

bool flip_singular(cplx diagonal_weight) { return flip_margin(diagonal_weight) < 1e-12; }

std::vector<cplx> flip_weights(const Triangulation& t, const std::vector<cplx>& x, int edge) {
    if (static_cast<int>(x.size()) != t.edge_count()) throw InputError("weight count does not match edges");
    if (edge < 0 || edge >= t.edge_count()) throw InputError("edge index out of range");
    const FlipMove mv = flip_move(t, edge);
    const cplx d = x[edge];
    if (d == cplx(0.0)) throw DomainError("zero_weight", "diagonal weight is zero");
    if (flip_singular(d))
        throw DomainError("singular_weight", "diagonal weight of edge " + std::to_string(edge + 1) + " is -1");
    const cplx grow = 1.0 + d;
    const cplx shrink = 1.0 / (1.0 + 1.0 / d);
    std::vector<cplx> out = x;
    out[edge] = 1.0 / d;
    out[mv.sides[0]] *= grow;
    out[mv.sides[1]] *= shrink;
    out[mv.sides[2]] *= grow;
    out[mv.sides[3]] *= shrink;
    return out;
}

TransportResult transport(const Triangulation& t, const std::vector<cplx>& x, const std::vector<int>& path) {
    TransportResult r{t, x, {}};
    for (std::size_t k = 0; k < path.size(); ++k) {
        const int e = path[k];
        if (e < 0 || e >= r.surface.edge_count())
            throw InputError("path step " + std::to_string(k + 1) + ": edge index out of range");
        const cplx d = r.weights[e];
        r.steps.push_back({e, d, flip_margin(d)});
        try {
            r.weights = flip_weights(r.surface, r.weights, e);
        } catch (const DomainError& err) {
            throw DomainError(err.code(), "step " + std::to_string(k + 1) + ": " + err.what());
        }
        r.surface = flip(r.surface, e);
    }
    return r;
}

cplx peripheral_load(const std::vector<cplx>& x) {
    cplx p = 1.0;
    for (const auto& v : x) p *= v;
    return p;
}

cplx puncture_eigenvalue_sq(const std::vector<cplx>& x, const Puncture& p) {
    cplx prod = 1.0;
    for (int e : p.incident_edges) prod *= x[e];
    return 1.0 / prod;
}

}  // namespace qteich
