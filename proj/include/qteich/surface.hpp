#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qteich {

// A face side. Faces and slots are 0-based internally; slots run clockwise.
struct Side {
    int face = 0;
    int slot = 0;
    bool operator==(const Side& o) const { return face == o.face && slot == o.slot; }
    bool operator<(const Side& o) const {
        return face != o.face ? face < o.face : slot < o.slot;
    }
};

// Corner of a face between slots `slot` and `slot + 1`.
using Corner = Side;

struct Puncture {
    std::vector<Corner> corners;       // in rotation order
    std::vector<int> incident_edges;   // one entry per edge end, with multiplicity
    bool boundary = false;             // corner chain ends on unglued sides
};

// Labeled ideal triangulation. Each face lists the edge label in each slot; an
// edge label occurs on one side (boundary edge) or two sides (glued pair), so
// the gluing is implied by the labels.
class Triangulation {
public:
    Triangulation() = default;

    // Build from an explicit gluing; edges are labeled in order of first
    // occurrence when sides are scanned by (face, slot).
    static Triangulation from_gluing(int faces, const std::vector<std::pair<Side, Side>>& gluing);
    // Build from per-face edge labels, validating that each label 0..n-1 is used
    // once or twice.
    static Triangulation from_labels(std::vector<std::array<int, 3>> face_edges);

    int face_count() const { return static_cast<int>(faces_.size()); }
    int edge_count() const { return edge_count_; }
    int edge_at(Side s) const { return faces_[s.face][s.slot]; }
    const std::vector<std::array<int, 3>>& face_edges() const { return faces_; }

    std::optional<Side> partner(Side s) const;
    const std::vector<Side>& sides_of_edge(int edge) const { return edge_sides_[edge]; }
    bool is_boundary_edge(int edge) const { return edge_sides_[edge].size() == 1; }
    // Both sides of the edge lie on one face.
    bool is_self_folded(int edge) const;
    int unglued_side_count() const;

    // Gluing pairs in canonical order, 0-based.
    std::vector<std::pair<Side, Side>> gluing() const;

    // Canonical key: faces rotated to their lexicographically least label triple,
    // then sorted. Equal keys mean equal labeled triangulations up to face order.
    std::vector<std::array<int, 3>> canonical_key() const;

    bool operator==(const Triangulation& o) const { return faces_ == o.faces_; }

private:
    void rebuild();

    std::vector<std::array<int, 3>> faces_;
    int edge_count_ = 0;
    std::vector<std::vector<Side>> edge_sides_;
};

struct ValidationReport {
    int faces = 0;
    int edges = 0;
    int unglued_sides = 0;
    int punctures = 0;
    int boundary_punctures = 0;
    int components = 0;
    int euler_closed = 0;    // V - E + F of the compactified cell complex
    int euler_ideal = 0;     // F - E, the cell count with the punctures removed
    bool involution_ok = true;
    bool connected = true;
    bool euler_negative = true;
};

ValidationReport validate(const Triangulation& t);

// sigma[i][j] = a_ij - a_ji. A corner between slots (s, s+1) contributes to
// the pair (edge in slot s, edge in slot s+1) with weight +1.
std::vector<std::vector<int>> sigma_matrix(const Triangulation& t);

std::vector<Puncture> punctures(const Triangulation& t);

// Square around an interior edge, in the layout of a standard diagonal exchange:
// face_a holds (diagonal, side5, side2) clockwise from slot_a; face_b holds
// (diagonal, side3, side4) clockwise from slot_b. sides[k] is the edge label at
// position k+2 (k = 0..3 for positions 2..5).
struct FlipMove {
    int diagonal = -1;
    int face_a = -1, slot_a = -1;
    int face_b = -1, slot_b = -1;
    std::array<int, 4> sides{};
};

// Diagonal exchange layout for edge `edge`; throws DomainError for boundary or
// self-folded edges.
FlipMove flip_move(const Triangulation& t, int edge);

// Diagonal exchange. Edge labels are preserved: label `edge` names the new
// diagonal, every other label keeps its edge, so the edge correspondence is the
// identity on indices. Faces face_a and face_b are rewritten in place.
Triangulation flip(const Triangulation& t, int edge);

struct SplitResult {
    Triangulation surface;
    // (label kept by the first side, new label of the second side, original label)
    std::vector<std::array<int, 3>> fusion_map;
};

// Cut along the given interior edges. The second side of each cut edge receives
// a fresh label appended after the existing ones.
SplitResult split(const Triangulation& t, const std::vector<int>& edges);

// Glue pairs of unglued sides. The label of the second side in each pair is
// removed and higher labels shift down, so fuse undoes split exactly.
Triangulation fuse(const Triangulation& t, const std::vector<std::pair<Side, Side>>& pairs);

// Face-level isomorphism between labeled triangulations.
struct FaceMap {
    std::vector<int> face;      // face j of the source -> face face[j] of the target
    std::vector<int> rotation;  // slot s of source face j -> slot (s + rotation[j]) % 3
};

// All isomorphisms from `a` to `b` mapping edge i of `a` to edge edge_map[i] of
// `b`, at most `limit` of them. Faces are tried in index order starting with the
// same index, so the identity face map comes first whenever it is valid.
std::vector<FaceMap> find_isomorphisms(const Triangulation& a, const Triangulation& b,
                                       const std::vector<int>& edge_map, std::size_t limit = 64);

// First entry of find_isomorphisms, if any.
std::optional<FaceMap> find_isomorphism(const Triangulation& a, const Triangulation& b,
                                        const std::vector<int>& edge_map);

struct FlipPathResult {
    bool found = false;
    std::vector<int> path;   // edge labels flipped in order
    int explored = 0;        // states visited
};

// Breadth-first search over labeled triangulations; edges are tried in
// increasing label order, so the returned path is deterministic.
FlipPathResult flip_path(const Triangulation& from, const Triangulation& to, int depth);

// Apply an edge relabeling: edge i becomes edge perm[i].
Triangulation relabel(const Triangulation& t, const std::vector<int>& perm);


// Persistent identifiers for face sides, carried along flip paths.
using SideIds = std::vector<std::array<int, 3>>;

// Identifier 3 j + s for slot s of face j.
SideIds initial_side_ids(const Triangulation& t);

struct TrackedFlip {
    Triangulation surface;
    SideIds ids;
    bool swapped = false;  // the two square faces trade indices relative to flip()
};

// Diagonal exchange that also moves side identifiers. The four square sides
// keep theirs; each new diagonal side inherits the identifier of the old
// diagonal side that shared a face with the square side of least identifier,
// and the face holding that square side keeps its index. Flipping the same
// edge twice restores the face list and the identifiers up to a cyclic
// rotation of slots within each face, applied to both alike.
TrackedFlip flip_tracked(const Triangulation& t, const SideIds& ids, int edge);

}  // namespace qteich
