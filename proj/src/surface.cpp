#include "qteich/surface.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "qteich/errors.hpp"

namespace qteich {

namespace {

int next_slot(int s) { return (s + 1) % 3; }
int prev_slot(int s) { return (s + 2) % 3; }

std::array<int, 3> least_rotation(const std::array<int, 3>& f) {
    std::array<int, 3> best = f;
    for (int r = 1; r < 3; ++r) {
        std::array<int, 3> cand{f[r], f[(r + 1) % 3], f[(r + 2) % 3]};
        if (cand < best) best = cand;
    }
    return best;
}

}  // namespace

Triangulation Triangulation::from_gluing(int faces, const std::vector<std::pair<Side, Side>>& gluing) {
    if (faces < 1) throw InputError("face count must be positive");
    std::vector<int> partner(3 * faces, -1);
    auto index = [&](Side s) {
        if (s.face < 0 || s.face >= faces || s.slot < 0 || s.slot > 2)
            throw InputError("side (" + std::to_string(s.face + 1) + "," + std::to_string(s.slot + 1) +
                             ") out of range");
        return 3 * s.face + s.slot;
    };
    for (const auto& [a, b] : gluing) {
        const int ia = index(a), ib = index(b);
        if (ia == ib) throw InputError("gluing pairs a side with itself");
        if (partner[ia] != -1 || partner[ib] != -1) throw InputError("side glued more than once");
        partner[ia] = ib;
        partner[ib] = ia;
    }
    std::vector<std::array<int, 3>> labels(faces, {-1, -1, -1});
    int next = 0;
    for (int i = 0; i < 3 * faces; ++i) {
        if (labels[i / 3][i % 3] != -1) continue;
        labels[i / 3][i % 3] = next;
        if (partner[i] != -1) labels[partner[i] / 3][partner[i] % 3] = next;
        ++next;
    }
    return from_labels(std::move(labels));
}

Triangulation Triangulation::from_labels(std::vector<std::array<int, 3>> face_edges) {
    if (face_edges.empty()) throw InputError("face count must be positive");
    Triangulation t;
    t.faces_ = std::move(face_edges);
    t.rebuild();
    return t;
}

void Triangulation::rebuild() {
    int max_label = -1;
    for (const auto& f : faces_)
        for (int e : f) {
            if (e < 0) throw InputError("negative edge label");
            max_label = std::max(max_label, e);
        }
    edge_count_ = max_label + 1;
    edge_sides_.assign(edge_count_, {});
    for (int j = 0; j < face_count(); ++j)
        for (int s = 0; s < 3; ++s) edge_sides_[faces_[j][s]].push_back({j, s});
    for (int e = 0; e < edge_count_; ++e) {
        const auto n = edge_sides_[e].size();
        if (n == 0) throw InputError("edge label " + std::to_string(e + 1) + " unused");
        if (n > 2) throw InputError("edge label " + std::to_string(e + 1) + " used more than twice");
    }
}

std::optional<Side> Triangulation::partner(Side s) const {
    const auto& sides = edge_sides_[edge_at(s)];
    if (sides.size() < 2) return std::nullopt;
    return sides[0] == s ? sides[1] : sides[0];
}

bool Triangulation::is_self_folded(int edge) const {
    const auto& s = edge_sides_[edge];
    return s.size() == 2 && s[0].face == s[1].face;
}

int Triangulation::unglued_side_count() const {
    int u = 0;
    for (const auto& s : edge_sides_) u += (s.size() == 1);
    return u;
}

std::vector<std::pair<Side, Side>> Triangulation::gluing() const {
    std::vector<std::pair<Side, Side>> out;
    for (const auto& s : edge_sides_)
        if (s.size() == 2) out.emplace_back(s[0], s[1]);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::array<int, 3>> Triangulation::canonical_key() const {
    std::vector<std::array<int, 3>> key;
    key.reserve(faces_.size());
    for (const auto& f : faces_) key.push_back(least_rotation(f));
    std::sort(key.begin(), key.end());
    return key;
}

ValidationReport validate(const Triangulation& t) {
    ValidationReport r;
    r.faces = t.face_count();
    r.edges = t.edge_count();
    r.unglued_sides = t.unglued_side_count();
    r.involution_ok = (2 * r.edges - r.unglued_sides == 3 * r.faces);
    const auto ps = punctures(t);
    r.punctures = static_cast<int>(ps.size());
    for (const auto& p : ps) r.boundary_punctures += p.boundary;

    std::vector<int> comp(r.faces, -1);
    for (int start = 0; start < r.faces; ++start) {
        if (comp[start] != -1) continue;
        std::deque<int> queue{start};
        comp[start] = r.components;
        while (!queue.empty()) {
            const int f = queue.front();
            queue.pop_front();
            for (int s = 0; s < 3; ++s)
                if (auto p = t.partner({f, s}); p && comp[p->face] == -1) {
                    comp[p->face] = r.components;
                    queue.push_back(p->face);
                }
        }
        ++r.components;
    }
    r.connected = (r.components == 1);
    r.euler_closed = r.punctures - r.edges + r.faces;
    r.euler_ideal = r.faces - r.edges;
    r.euler_negative = r.euler_ideal < 0;
    return r;
}

std::vector<std::vector<int>> sigma_matrix(const Triangulation& t) {
    const int n = t.edge_count();
    std::vector<std::vector<int>> sigma(n, std::vector<int>(n, 0));
    for (const auto& f : t.face_edges())
        for (int s = 0; s < 3; ++s) {
            const int i = f[s], j = f[next_slot(s)];
            if (i == j) continue;
            sigma[i][j] += 1;
            sigma[j][i] -= 1;
        }
    return sigma;
}

std::vector<Puncture> punctures(const Triangulation& t) {
    const int m = t.face_count();
    // Rotating around the vertex shared by slots s and s+1: cross side s+1.
    auto next = [&](Corner c) -> std::optional<Corner> {
        auto p = t.partner({c.face, next_slot(c.slot)});
        if (!p) return std::nullopt;
        return Corner{p->face, p->slot};
    };
    auto prev = [&](Corner c) -> std::optional<Corner> {
        auto p = t.partner({c.face, c.slot});
        if (!p) return std::nullopt;
        return Corner{p->face, prev_slot(p->slot)};
    };

    std::vector<char> seen(3 * m, 0);
    std::vector<Puncture> out;
    for (int i = 0; i < 3 * m; ++i) {
        if (seen[i]) continue;
        Corner start{i / 3, i % 3};
        bool boundary = false;
        Corner first = start;
        for (int guard = 0; guard < 3 * m; ++guard) {
            auto p = prev(first);
            if (!p) {
                boundary = true;
                break;
            }
            if (*p == start) break;
            first = *p;
        }
        Puncture punct;
        punct.boundary = boundary;
        if (boundary) punct.incident_edges.push_back(t.edge_at({first.face, first.slot}));
        Corner c = first;
        for (int guard = 0; guard < 3 * m; ++guard) {
            seen[3 * c.face + c.slot] = 1;
            punct.corners.push_back(c);
            punct.incident_edges.push_back(t.edge_at({c.face, next_slot(c.slot)}));
            auto nx = next(c);
            if (!nx || *nx == first) break;
            c = *nx;
        }
        out.push_back(std::move(punct));
    }
    return out;
}

FlipMove flip_move(const Triangulation& t, int edge) {
    if (edge < 0 || edge >= t.edge_count())
        throw InputError("edge " + std::to_string(edge + 1) + " out of range");
    if (t.is_boundary_edge(edge))
        throw DomainError("boundary_edge", "edge " + std::to_string(edge + 1) + " is a boundary edge");
    if (t.is_self_folded(edge))
        throw DomainError("self_folded", "edge " + std::to_string(edge + 1) +
                                             " has both sides on one face");
    const auto& sides = t.sides_of_edge(edge);
    FlipMove mv;
    mv.diagonal = edge;
    mv.face_a = sides[0].face;
    mv.slot_a = sides[0].slot;
    mv.face_b = sides[1].face;
    mv.slot_b = sides[1].slot;
    const auto& fa = t.face_edges()[mv.face_a];
    const auto& fb = t.face_edges()[mv.face_b];
    mv.sides[0] = fa[(mv.slot_a + 2) % 3];
    mv.sides[1] = fb[(mv.slot_b + 1) % 3];
    mv.sides[2] = fb[(mv.slot_b + 2) % 3];
    mv.sides[3] = fa[(mv.slot_a + 1) % 3];
    return mv;
}

Triangulation flip(const Triangulation& t, int edge) {
    const FlipMove mv = flip_move(t, edge);
    auto faces = t.face_edges();
    auto& fa = faces[mv.face_a];
    auto& fb = faces[mv.face_b];
    fa[mv.slot_a] = edge;
    fa[(mv.slot_a + 1) % 3] = mv.sides[0];
    fa[(mv.slot_a + 2) % 3] = mv.sides[1];
    fb[mv.slot_b] = edge;
    fb[(mv.slot_b + 1) % 3] = mv.sides[2];
    fb[(mv.slot_b + 2) % 3] = mv.sides[3];
    return Triangulation::from_labels(std::move(faces));
}

SplitResult split(const Triangulation& t, const std::vector<int>& edges) {
    std::set<int> cut;
    for (int e : edges) {
        if (e < 0 || e >= t.edge_count()) throw InputError("edge " + std::to_string(e + 1) + " out of range");
        if (t.is_boundary_edge(e))
            throw DomainError("boundary_edge", "cannot split boundary edge " + std::to_string(e + 1));
        cut.insert(e);
    }
    auto faces = t.face_edges();
    SplitResult out;
    int fresh = t.edge_count();
    for (int e : cut) {
        const Side second = t.sides_of_edge(e)[1];
        faces[second.face][second.slot] = fresh;
        out.fusion_map.push_back({e, fresh, e});
        ++fresh;
    }
    out.surface = Triangulation::from_labels(std::move(faces));
    return out;
}

Triangulation fuse(const Triangulation& t, const std::vector<std::pair<Side, Side>>& pairs) {
    auto faces = t.face_edges();
    std::set<Side> used;
    std::vector<int> removed;
    std::map<int, int> rename;
    for (const auto& [a, b] : pairs) {
        for (Side s : {a, b}) {
            if (s.face < 0 || s.face >= t.face_count() || s.slot < 0 || s.slot > 2)
                throw InputError("fuse side out of range");
            if (!t.is_boundary_edge(t.edge_at(s))) throw InputError("fuse side is already glued");
            if (!used.insert(s).second) throw InputError("fuse side used twice");
        }
        rename[t.edge_at(b)] = t.edge_at(a);
        removed.push_back(t.edge_at(b));
    }
    std::sort(removed.begin(), removed.end());
    auto shift = [&](int e) {
        return e - static_cast<int>(std::lower_bound(removed.begin(), removed.end(), e) - removed.begin());
    };
    for (auto& f : faces)
        for (int& e : f) {
            if (auto it = rename.find(e); it != rename.end()) e = it->second;
            e = shift(e);
        }
    return Triangulation::from_labels(std::move(faces));
}

std::vector<FaceMap> find_isomorphisms(const Triangulation& a, const Triangulation& b,
                                       const std::vector<int>& edge_map, std::size_t limit) {
    std::vector<FaceMap> out;
    const int m = a.face_count();
    if (m != b.face_count() || a.edge_count() != b.edge_count() ||
        static_cast<int>(edge_map.size()) != a.edge_count())
        return out;
    FaceMap fm;
    fm.face.assign(m, -1);
    fm.rotation.assign(m, 0);
    std::vector<char> taken(m, 0);
    // Depth-first over faces of `a`; candidates start with the same index.
    auto search = [&](auto&& self, int j) -> void {
        if (out.size() >= limit) return;
        if (j == m) {
            out.push_back(fm);
            return;
        }
        const auto& fa = a.face_edges()[j];
        std::vector<int> order{j};
        for (int k = 0; k < m; ++k)
            if (k != j) order.push_back(k);
        for (int k : order) {
            if (taken[k]) continue;
            const auto& fb = b.face_edges()[k];
            for (int r = 0; r < 3; ++r) {
                bool ok = true;
                for (int s = 0; s < 3; ++s)
                    if (fb[(s + r) % 3] != edge_map[fa[s]]) ok = false;
                if (!ok) continue;
                fm.face[j] = k;
                fm.rotation[j] = r;
                taken[k] = 1;
                self(self, j + 1);
                taken[k] = 0;
            }
        }
    };
    search(search, 0);
    return out;
}

std::optional<FaceMap> find_isomorphism(const Triangulation& a, const Triangulation& b,
                                        const std::vector<int>& edge_map) {
    auto all = find_isomorphisms(a, b, edge_map, 1);
    if (all.empty()) return std::nullopt;
    return all.front();
}

FlipPathResult flip_path(const Triangulation& from, const Triangulation& to, int depth) {
    FlipPathResult res;
    const auto target = to.canonical_key();
    if (from.canonical_key() == target) {
        res.found = true;
        return res;
    }
    struct Node {
        Triangulation t;
        int parent;
        int edge;
    };
    std::vector<Node> nodes{{from, -1, -1}};
    std::set<std::vector<std::array<int, 3>>> visited{from.canonical_key()};
    std::size_t frontier_begin = 0;
    for (int d = 0; d < depth; ++d) {
        const std::size_t frontier_end = nodes.size();
        for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
            for (int e = 0; e < nodes[i].t.edge_count(); ++e) {
                if (nodes[i].t.is_boundary_edge(e) || nodes[i].t.is_self_folded(e)) continue;
                Triangulation next = flip(nodes[i].t, e);
                auto key = next.canonical_key();
                if (!visited.insert(key).second) continue;
                nodes.push_back({std::move(next), static_cast<int>(i), e});
                if (key == target) {
                    res.found = true;
                    for (int k = static_cast<int>(nodes.size()) - 1; nodes[k].parent != -1; k = nodes[k].parent)
                        res.path.push_back(nodes[k].edge);
                    std::reverse(res.path.begin(), res.path.end());
                    res.explored = static_cast<int>(visited.size());
                    return res;
                }
            }
        }
        frontier_begin = frontier_end;
        if (frontier_begin == nodes.size()) break;
    }
    res.explored = static_cast<int>(visited.size());
    return res;
}

Triangulation relabel(const Triangulation& t, const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != t.edge_count()) throw InputError("relabeling has wrong length");
    std::vector<char> hit(perm.size(), 0);
    for (int p : perm) {
        if (p < 0 || p >= t.edge_count() || hit[p]) throw InputError("relabeling is not a bijection");
        hit[p] = 1;
    }
    auto faces = t.face_edges();
    for (auto& f : faces)
        for (int& e : f) e = perm[e];
    return Triangulation::from_labels(std::move(faces));
}


SideIds initial_side_ids(const Triangulation& t) {
    SideIds ids(t.face_count());
    for (int j = 0; j < t.face_count(); ++j)
        for (int s = 0; s < 3; ++s) ids[j][s] = 3 * j + s;
    return ids;
}

TrackedFlip flip_tracked(const Triangulation& t, const SideIds& ids, int edge) {
    if (static_cast<int>(ids.size()) != t.face_count()) throw InputError("side identifiers do not match faces");
    const FlipMove mv = flip_move(t, edge);
    const int fa = mv.face_a, fb = mv.face_b, sa = mv.slot_a, sb = mv.slot_b;
    // Square sides in positions 2..5 and where they sit before the flip.
    const std::array<Side, 4> before{Side{fa, (sa + 2) % 3}, Side{fb, (sb + 1) % 3}, Side{fb, (sb + 2) % 3},
                                     Side{fa, (sa + 1) % 3}};
    // After flip(): face_a = (diag, 2, 3), face_b = (diag, 4, 5).
    const std::array<Side, 4> after{Side{fa, (sa + 1) % 3}, Side{fa, (sa + 2) % 3}, Side{fb, (sb + 1) % 3},
                                    Side{fb, (sb + 2) % 3}};
    int least = 0;
    for (int k = 1; k < 4; ++k)
        if (ids[before[k].face][before[k].slot] < ids[before[least].face][before[least].slot]) least = k;

    TrackedFlip out{flip(t, edge), ids, false};
    for (int k = 0; k < 4; ++k) out.ids[after[k].face][after[k].slot] = ids[before[k].face][before[k].slot];
    const int old_face = before[least].face, new_face = after[least].face;
    const int old_diag = old_face == fa ? ids[fa][sa] : ids[fb][sb];
    const int other_diag = old_face == fa ? ids[fb][sb] : ids[fa][sa];
    if (new_face == fa) {
        out.ids[fa][sa] = old_diag;
        out.ids[fb][sb] = other_diag;
    } else {
        out.ids[fb][sb] = old_diag;
        out.ids[fa][sa] = other_diag;
    }
    if (new_face != old_face) {
        auto faces = out.surface.face_edges();
        std::swap(faces[fa], faces[fb]);
        std::swap(out.ids[fa], out.ids[fb]);
        out.surface = Triangulation::from_labels(std::move(faces));
        out.swapped = true;
    }
    return out;
}

}  // namespace qteich
