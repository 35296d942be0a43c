#pragma once

#include <complex>
#include <random>
#include <vector>

#include "qteich/representation.hpp"
#include "qteich/surface.hpp"

namespace fixtures {

using qteich::Triangulation;
using qteich::cplx;

inline Triangulation triangle() { return Triangulation::from_labels({{0, 1, 2}}); }
// Diagonal 0, sides 1..4 in the positions 2..5 of a diagonal exchange.
inline Triangulation square() { return Triangulation::from_labels({{0, 4, 1}, {0, 2, 3}}); }
// Diagonals 0 and 1.
inline Triangulation pentagon() { return Triangulation::from_labels({{0, 2, 3}, {0, 1, 4}, {1, 5, 6}}); }
inline Triangulation torus() { return Triangulation::from_labels({{0, 1, 2}, {0, 1, 2}}); }
// Tetrahedral triangulation of the four-punctured sphere.
inline Triangulation sphere4() { return Triangulation::from_labels({{0, 3, 1}, {2, 4, 0}, {1, 5, 2}, {4, 5, 3}}); }

inline std::vector<cplx> random_weights(const Triangulation& t, std::mt19937_64& rng) {
    std::vector<cplx> x;
    for (int i = 0; i < t.edge_count(); ++i) x.push_back(qteich::random_weight(rng));
    return x;
}

inline std::vector<cplx> positive_weights(const Triangulation& t, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.5, 2.0);
    std::vector<cplx> x;
    for (int i = 0; i < t.edge_count(); ++i) x.push_back(u(rng));
    return x;
}

inline double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

inline double max_rel_err(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double w = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) w = std::max(w, rel_err(a[i], b[i]));
    return w;
}

}  // namespace fixtures
