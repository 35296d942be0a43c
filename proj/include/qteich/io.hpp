#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "qteich/qparams.hpp"
#include "qteich/representation.hpp"
#include "qteich/surface.hpp"

namespace qteich {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Complex numbers travel as [re, im]; a bare number is read as real.
cplx complex_from_json(const json& j);
json complex_to_json(cplx z);

// {"faces": m, "gluing": [[[j, s], [j', s']], ...]} with 1-based faces and
// slots, or {"edges": [[e1, e2, e3], ...]} with 1-based edge labels.
Triangulation triangulation_from_json(const json& j);
json triangulation_to_json(const Triangulation& t);

// {"weights": [[re, im], ...]}
std::vector<cplx> weights_from_json(const json& j, int expected = -1);
json weights_to_json(const std::vector<cplx>& x);

// {"q": {"N": n, "c": c}, "faces": [{"w": [w1, w2, w3], "h": h}, ...]}
LocalRep rep_from_json(const json& j, const Triangulation& t, std::size_t max_dim = kDefaultMaxDim);
json rep_to_json(const LocalRep& r);

// Row-major complex pairs with a metadata header.
json matrix_to_json(const Eigen::MatrixXcd& m);

// "1,3,1" -> {0, 2, 0}; whitespace is ignored and an empty string is the empty path.
std::vector<int> parse_index_list(const std::string& text, int count, const std::string& what);

json read_json_file(const std::string& path);

// Stable text: two-space indent, shortest round-trip form for reals.
std::string dump(const json& j);

}  // namespace qteich
