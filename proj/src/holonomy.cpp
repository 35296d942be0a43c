#include "qteich/holonomy.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "qteich/errors.hpp"
#include "qteich/transport.hpp"

namespace qteich {

namespace {

// Linear form vanishing at p: l_p(v) = v0 p1 - v1 p0.
cplx vanish(const PPoint& p, const PPoint& v) { return v(0) * p(1) - v(1) * p(0); }

// Moebius map sending a -> infinity, b -> 0, c -> 1.
Mobius to_standard(const IdealTriple& t) {
    const PPoint& a = t[0];
    const PPoint& b = t[1];
    const PPoint& c = t[2];
    const cplx la = vanish(a, c);
    const cplx lb = vanish(b, c);
    Mobius m;
    m << la * b(1), -la * b(0), lb * a(1), -lb * a(0);
    return m;
}

void check_triple(const IdealTriple& t) {
    for (int i = 0; i < 3; ++i)
        if (same_point(t[i], t[(i + 1) % 3], 1e-13))
            throw DomainError("degenerate_development", "developed vertices coincide");
}

// Face across side `slot`, developed from `face`: the new face's slots follow
// its own order, with the shared edge reversed.
IdealTriple neighbour_triple(const Triangulation& t, const std::vector<cplx>& x, int face,
                             const IdealTriple& pos, int slot, Side& across) {
    auto p = t.partner({face, slot});
    if (!p) throw InputError("side " + std::to_string(slot + 1) + " of face " + std::to_string(face + 1) + " is unglued");
    across = *p;
    const PPoint d = cross_side(pos, slot, x[t.edge_at({face, slot})]);
    IdealTriple out;
    out[p->slot] = pos[(slot + 1) % 3];
    out[(p->slot + 1) % 3] = pos[slot];
    out[(p->slot + 2) % 3] = d;
    check_triple(out);
    return out;
}

void check_weights(const Triangulation& t, const std::vector<cplx>& x) {
    if (static_cast<int>(x.size()) != t.edge_count()) throw InputError("weight count does not match edges");
    for (const auto& v : x)
        if (v == cplx(0.0) || !std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw DomainError("zero_weight", "weights must be finite and nonzero");
}

IdealTriple base_triple() { return {ppoint(0.0), ppoint(1.0), infinity_point()}; }


}  // namespace

PPoint ppoint(cplx z) { return normalized(PPoint(z, 1.0)); }

PPoint infinity_point() { return PPoint(1.0, 0.0); }

PPoint normalized(const PPoint& p) {
    const double s = std::max(std::abs(p(0)), std::abs(p(1)));
    if (s == 0.0) throw DomainError("degenerate_development", "zero projective point");
    return p / s;
}

bool same_point(const PPoint& p, const PPoint& r, double tol) {
    const PPoint a = normalized(p);
    const PPoint b = normalized(r);
    return std::abs(vanish(a, b)) < tol;
}

cplx affine(const PPoint& p) {
    if (p(1) == cplx(0.0)) return {std::numeric_limits<double>::infinity(), 0.0};
    return p(0) / p(1);
}

cplx cross_ratio(const PPoint& p, const PPoint& r, const PPoint& s, const PPoint& u) {
    // (p - s)(r - u) / ((p - u)(r - s)) with differences as 2x2 determinants.
    const cplx den = vanish(u, p) * vanish(s, r);
    if (std::abs(den) < 1e-300) throw DomainError("degenerate_development", "cross-ratio with coincident points");
    return vanish(s, p) * vanish(u, r) / den;
}

Mobius mobius_from_triples(const IdealTriple& a, const IdealTriple& b) {
    check_triple(a);
    check_triple(b);
    return to_standard(b).inverse() * to_standard(a);
}

PPoint apply_mobius(const Mobius& m, const PPoint& p) { return normalized(m * p); }

PPoint cross_side(const IdealTriple& face, int slot, cplx x) {
    const IdealTriple local{face[slot], face[(slot + 1) % 3], face[(slot + 2) % 3]};
    check_triple(local);
    // to_standard sends the quadruple to (infinity, 0, 1, -x).
    return apply_mobius(to_standard(local).inverse(), PPoint(-x, 1.0));
}

cplx quad_weight(const IdealTriple& face, int slot, const PPoint& opposite) {
    return -cross_ratio(face[slot], face[(slot + 1) % 3], face[(slot + 2) % 3], opposite);
}

Mobius normalize_sl2(const Mobius& m) {
    const cplx det = m.determinant();
    if (std::abs(det) < 1e-300) throw DomainError("degenerate_development", "singular Moebius matrix");
    Mobius r = m / std::sqrt(det);
    int best = 0;
    for (int i = 1; i < 4; ++i)
        if (std::abs(r(i)) > std::abs(r(best)) * (1.0 + 1e-12)) best = i;
    const cplx lead = r(best);
    if (lead.real() < -1e-12 * std::abs(lead) || (std::abs(lead.real()) <= 1e-12 * std::abs(lead) && lead.imag() < 0))
        r = -r;
    return r;
}

Development develop_tree(const Triangulation& t, const std::vector<cplx>& x) {
    check_weights(t, x);
    const int m = t.face_count();
    Development dev;
    dev.position.assign(m, IdealTriple{});
    dev.parent.assign(m, -1);
    dev.tree_side.assign(m, {0, 0, 0});
    dev.crossing.assign(m, {Mobius::Identity(), Mobius::Identity(), Mobius::Identity()});
    std::vector<char> placed(m, 0);
    dev.position[0] = base_triple();
    placed[0] = 1;
    std::deque<int> queue{0};
    while (!queue.empty()) {
        const int f = queue.front();
        queue.pop_front();
        for (int s = 0; s < 3; ++s) {
            auto p = t.partner({f, s});
            if (!p || placed[p->face]) continue;
            Side across;
            dev.position[p->face] = neighbour_triple(t, x, f, dev.position[f], s, across);
            dev.parent[p->face] = f;
            dev.tree_side[f][s] = 1;
            dev.tree_side[p->face][p->slot] = 1;
            placed[p->face] = 1;
            queue.push_back(p->face);
        }
    }
    if (std::find(placed.begin(), placed.end(), 0) != placed.end())
        throw InputError("triangulation is not connected");
    // Deck maps for non-tree sides; each glued pair gets mutually inverse lifts.
    for (int f = 0; f < m; ++f)
        for (int s = 0; s < 3; ++s) {
            auto p = t.partner({f, s});
            if (!p || dev.tree_side[f][s]) continue;
            if (Side{f, s} < *p) {
                Side across;
                const IdealTriple there = neighbour_triple(t, x, f, dev.position[f], s, across);
                const Mobius g = normalize_sl2(mobius_from_triples(dev.position[p->face], there));
                dev.crossing[f][s] = g;
                dev.crossing[p->face][p->slot] = g.inverse();
            }
        }
    return dev;
}

DevelopResult develop(const Triangulation& t, const std::vector<cplx>& x, const std::vector<int>& slots) {
    check_weights(t, x);
    DevelopResult r{0, base_triple()};
    for (std::size_t k = 0; k < slots.size(); ++k) {
        const int s = slots[k];
        if (s < 0 || s > 2) throw InputError("develop step " + std::to_string(k + 1) + ": slot out of range");
        Side across;
        r.triple = neighbour_triple(t, x, r.face, r.triple, s, across);
        r.face = across.face;
    }
    return r;
}

Mobius holonomy(const Triangulation& t, const std::vector<cplx>& x, int start_face, const std::vector<int>& slots) {
    if (start_face < 0 || start_face >= t.face_count()) throw InputError("start face out of range");
    const Development dev = develop_tree(t, x);
    Mobius acc = Mobius::Identity();
    int face = start_face;
    for (std::size_t k = 0; k < slots.size(); ++k) {
        const int s = slots[k];
        if (s < 0 || s > 2) throw InputError("loop step " + std::to_string(k + 1) + ": slot out of range");
        auto p = t.partner({face, s});
        if (!p) throw InputError("loop step " + std::to_string(k + 1) + ": side is unglued");
        acc = acc * dev.crossing[face][s];
        face = p->face;
    }
    if (face != start_face) throw InputError("loop does not return to its start face");
    return normalize_sl2(acc);
}

PeripheralLoop peripheral_loop(const Triangulation& t, const std::vector<cplx>& x, int puncture) {
    const auto ps = punctures(t);
    if (puncture < 0 || puncture >= static_cast<int>(ps.size())) throw InputError("puncture index out of range");
    const Puncture& p = ps[puncture];
    if (p.boundary) throw DomainError("boundary_puncture", "puncture lies on the boundary; no peripheral loop");
    PeripheralLoop loop;
    loop.start_face = p.corners.front().face;
    for (const Corner& c : p.corners) loop.slots.push_back((c.slot + 1) % 3);
    const Development dev = develop_tree(t, x);
    loop.fixed_point = dev.position[loop.start_face][(p.corners.front().slot + 1) % 3];
    return loop;
}

PunctureEigen puncture_eigenvalue(const Triangulation& t, const std::vector<cplx>& x, int puncture) {
    const PeripheralLoop loop = peripheral_loop(t, x, puncture);
    const Mobius a = holonomy(t, x, loop.start_face, loop.slots);
    const PPoint& xi = loop.fixed_point;
    PunctureEigen out;
    out.trace = a.trace();
    // a * xi = mu * xi; the derivative at the fixed point is mu^-2.
    const PPoint image = a * xi;
    const int k = std::abs(xi(0)) >= std::abs(xi(1)) ? 0 : 1;
    const cplx mu = image(k) / xi(k);
    out.fixed_point_residual = std::abs(vanish(xi, image)) / std::max(1e-300, image.norm());
    out.derivative = 1.0 / (mu * mu);
    const auto ps = punctures(t);
    cplx prod = 1.0;
    for (int e : ps[puncture].incident_edges) prod *= x[e];
    out.expected = 1.0 / prod;
    out.residual = std::abs(out.derivative - out.expected) / std::max(1.0, std::abs(out.expected));
    return out;
}

RoundtripResult roundtrip_weights(const Triangulation& t, const std::vector<cplx>& x) {
    const Development dev = develop_tree(t, x);
    RoundtripResult r;
    r.weights = x;
    for (int e = 0; e < t.edge_count(); ++e) {
        const auto& sides = t.sides_of_edge(e);
        if (sides.size() != 2) continue;
        const Side a = sides[0];
        const Side b = sides[1];
        // Neighbour position through the deck map of the crossing.
        const Mobius& g = dev.crossing[a.face][a.slot];
        const PPoint opposite = apply_mobius(g, dev.position[b.face][(b.slot + 2) % 3]);
        r.weights[e] = quad_weight(dev.position[a.face], a.slot, opposite);
        r.residual = std::max(r.residual, std::abs(r.weights[e] - x[e]) / std::max(1.0, std::abs(x[e])));
    }
    return r;
}

std::vector<cplx> geometric_flip_weights(const Triangulation& t, const std::vector<cplx>& x, int diagonal) {
    check_weights(t, x);
    const FlipMove mv = flip_move(t, diagonal);
    const int sa = mv.slot_a;
    const int sb = mv.slot_b;
    // Square in one frame: face_a with the diagonal running 0 -> 1, face_b
    // developed across it.
    IdealTriple pa;
    pa[sa] = ppoint(0.0);
    pa[(sa + 1) % 3] = ppoint(1.0);
    pa[(sa + 2) % 3] = infinity_point();
    Side across;
    const IdealTriple pb = neighbour_triple(t, x, mv.face_a, pa, sa, across);
    const PPoint P0 = pa[sa], P1 = pa[(sa + 1) % 3], Pa = pa[(sa + 2) % 3], Pb = pb[(sb + 2) % 3];

    // Square sides at positions 2..5 in the old faces: endpoints, old third
    // vertex and the outer vertex across them.
    struct OldSide {
        PPoint from, to, third, outer;
    };
    auto outer = [&](const IdealTriple& pos, int face, int slot) {
        return cross_side(pos, slot, x[t.edge_at({face, slot})]);
    };
    const std::array<OldSide, 4> old{
        OldSide{Pa, P0, P1, outer(pa, mv.face_a, (sa + 2) % 3)},
        OldSide{P0, Pb, P1, outer(pb, mv.face_b, (sb + 1) % 3)},
        OldSide{Pb, P1, P0, outer(pb, mv.face_b, (sb + 2) % 3)},
        OldSide{P1, Pa, P0, outer(pa, mv.face_a, (sa + 1) % 3)},
    };
    // New faces (diagonal, side2, side3) and (diagonal, side4, side5).
    const IdealTriple na{Pb, Pa, P0};
    const IdealTriple nb{Pa, Pb, P1};
    const std::array<std::pair<const IdealTriple*, int>, 4> placed{
        std::make_pair(&na, 1), std::make_pair(&na, 2), std::make_pair(&nb, 1), std::make_pair(&nb, 2)};
    auto new_third = [&](int k) {
        const IdealTriple& f = *placed[k].first;
        return f[(placed[k].second + 2) % 3];
    };

    std::vector<cplx> out = x;
    out[diagonal] = quad_weight(na, 0, P1);
    for (int k = 0; k < 4; ++k) {
        int twin = -1;
        for (int j = 0; j < 4; ++j)
            if (j != k && mv.sides[j] == mv.sides[k]) twin = j;
        PPoint opposite = old[k].outer;
        if (twin >= 0) {
            // The neighbour across this side is itself a square face; carry the
            // twin's new face over with the deck map gluing the two sides.
            const Mobius g = mobius_from_triples({old[twin].from, old[twin].to, old[twin].third},
                                                 {old[k].to, old[k].from, old[k].outer});
            opposite = apply_mobius(g, new_third(twin));
        }
        out[mv.sides[k]] = quad_weight(*placed[k].first, placed[k].second, opposite);
    }
    return out;
}

int generator_count(const Triangulation& t) {
    int glued = 0;
    for (int e = 0; e < t.edge_count(); ++e) glued += t.sides_of_edge(e).size() == 2;
    return glued - (t.face_count() - 1);
}

LoadReport total_load_check(const Triangulation& t, const std::vector<cplx>& x, const std::vector<int>& signs) {
    if (t.unglued_side_count() != 0)
        throw DomainError("boundary_surface", "peripheral load identity needs a surface without boundary");
    Development dev = develop_tree(t, x);
    // Generators: non-tree pairs ordered by their first side.
    std::vector<Side> gens;
    for (int f = 0; f < t.face_count(); ++f)
        for (int s = 0; s < 3; ++s) {
            auto p = t.partner({f, s});
            if (p && !dev.tree_side[f][s] && Side{f, s} < *p) gens.push_back({f, s});
        }
    if (signs.size() != gens.size())
        throw InputError("expected " + std::to_string(gens.size()) + " lift signs");
    for (std::size_t k = 0; k < gens.size(); ++k) {
        if (signs[k] != 1 && signs[k] != -1) throw InputError("lift signs must be +1 or -1");
        if (signs[k] == -1) {
            const Side a = gens[k];
            const Side b = *t.partner(a);
            dev.crossing[a.face][a.slot] = -dev.crossing[a.face][a.slot];
            dev.crossing[b.face][b.slot] = -dev.crossing[b.face][b.slot];
        }
    }
    const auto ps = punctures(t);
    LoadReport rep;
    rep.punctures = static_cast<int>(ps.size());
    cplx inv_prod = 1.0;
    for (std::size_t k = 0; k < ps.size(); ++k) {
        const Corner c0 = ps[k].corners.front();
        const PPoint xi = dev.position[c0.face][(c0.slot + 1) % 3];
        Mobius acc = Mobius::Identity();
        int face = c0.face;
        for (const Corner& c : ps[k].corners) {
            const int s = (c.slot + 1) % 3;
            acc = acc * dev.crossing[face][s];
            face = t.partner({face, s})->face;
        }
        const PPoint image = acc * xi;
        const int i = std::abs(xi(0)) >= std::abs(xi(1)) ? 0 : 1;
        const cplx mu = image(i) / xi(i);
        // Derivative at the fixed point is mu^-2, so a_k = mu^-1.
        const cplx a = 1.0 / mu;
        rep.peripheral_eigen.push_back(a);
        inv_prod *= 1.0 / a;
    }
    rep.lhs = (rep.punctures % 2 ? -1.0 : 1.0) * inv_prod;
    rep.rhs = peripheral_load(x);
    const double scale = std::max(1.0, std::abs(rep.rhs));
    rep.residual = std::abs(rep.lhs - rep.rhs) / scale;
    rep.squared_residual = std::abs(inv_prod * inv_prod - rep.rhs * rep.rhs) / std::max(1.0, std::abs(rep.rhs * rep.rhs));
    return rep;
}

}  // namespace qteich
