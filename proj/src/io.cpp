#include "qteich/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "qteich/errors.hpp"

namespace qteich {

namespace {

int index_from_json(const json& j, int count, const std::string& what) {
    if (!j.is_number_integer()) throw InputError(what + " must be an integer");
    const long long v = j.get<long long>();
    if (v < 1 || v > count) throw InputError(what + " " + std::to_string(v) + " out of range 1.." + std::to_string(count));
    return static_cast<int>(v - 1);
}

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

}  // namespace

cplx complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw InputError("complex number must be [re, im]");
}

json complex_to_json(cplx z) {
    // Avoid emitting -0.
    const double re = z.real() == 0.0 ? 0.0 : z.real();
    const double im = z.imag() == 0.0 ? 0.0 : z.imag();
    return json::array({re, im});
}

Triangulation triangulation_from_json(const json& j) {
    if (!j.is_object()) throw InputError("triangulation must be a JSON object");
    if (j.contains("edges")) {
        const json& e = j.at("edges");
        if (!e.is_array() || e.empty()) throw InputError("\"edges\" must be a non-empty array");
        std::vector<std::array<int, 3>> faces;
        const int limit = 3 * static_cast<int>(e.size());
        for (const auto& f : e) {
            if (!f.is_array() || f.size() != 3) throw InputError("each face lists three edge labels");
            faces.push_back({index_from_json(f[0], limit, "edge label"), index_from_json(f[1], limit, "edge label"),
                             index_from_json(f[2], limit, "edge label")});
        }
        return Triangulation::from_labels(std::move(faces));
    }
    const json& fj = field(j, "faces");
    if (!fj.is_number_integer() || fj.get<long long>() < 1) throw InputError("\"faces\" must be a positive integer");
    const int m = fj.get<int>();
    const json& g = field(j, "gluing");
    if (!g.is_array()) throw InputError("\"gluing\" must be an array");
    std::vector<std::pair<Side, Side>> pairs;
    for (const auto& p : g) {
        if (!p.is_array() || p.size() != 2) throw InputError("gluing entries are [[face, slot], [face, slot]]");
        Side s[2];
        for (int k = 0; k < 2; ++k) {
            if (!p[k].is_array() || p[k].size() != 2) throw InputError("a side is [face, slot]");
            s[k] = Side{index_from_json(p[k][0], m, "face"), index_from_json(p[k][1], 3, "slot")};
        }
        pairs.emplace_back(s[0], s[1]);
    }
    return Triangulation::from_gluing(m, pairs);
}

json triangulation_to_json(const Triangulation& t) {
    json gl = json::array();
    for (const auto& [a, b] : t.gluing())
        gl.push_back(json::array({json::array({a.face + 1, a.slot + 1}), json::array({b.face + 1, b.slot + 1})}));
    json edges = json::array();
    for (const auto& f : t.face_edges()) edges.push_back(json::array({f[0] + 1, f[1] + 1, f[2] + 1}));
    return json{{"faces", t.face_count()}, {"gluing", gl}, {"edges", edges}};
}

std::vector<cplx> weights_from_json(const json& j, int expected) {
    const json& w = field(j, "weights");
    if (!w.is_array()) throw InputError("\"weights\" must be an array");
    std::vector<cplx> out;
    for (const auto& v : w) out.push_back(complex_from_json(v));
    if (expected >= 0 && static_cast<int>(out.size()) != expected)
        throw InputError("expected " + std::to_string(expected) + " weights, got " + std::to_string(out.size()));
    for (const auto& v : out)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw InputError("weights must be finite");
    return out;
}

json weights_to_json(const std::vector<cplx>& x) {
    json w = json::array();
    for (const auto& v : x) w.push_back(complex_to_json(v));
    return json{{"weights", w}};
}

LocalRep rep_from_json(const json& j, const Triangulation& t, std::size_t max_dim) {
    const json& qj = field(j, "q");
    const json& nj = field(qj, "N");
    if (!nj.is_number_integer()) throw InputError("q.N must be an integer");
    const int c = qj.contains("c") ? qj.at("c").get<int>() : 1;
    const QParams q(nj.get<int>(), c);
    const json& fj = field(j, "faces");
    if (!fj.is_array() || static_cast<int>(fj.size()) != t.face_count())
        throw InputError("rep lists " + std::to_string(fj.size()) + " faces, triangulation has " +
                         std::to_string(t.face_count()));
    std::vector<FaceData> data;
    for (const auto& f : fj) {
        const json& w = field(f, "w");
        if (!w.is_array() || w.size() != 3) throw InputError("face \"w\" lists three side weights");
        data.push_back(FaceData{{complex_from_json(w[0]), complex_from_json(w[1]), complex_from_json(w[2])},
                                complex_from_json(field(f, "h"))});
    }
    return LocalRep::from_face_data(t, q, data, max_dim);
}

json rep_to_json(const LocalRep& r) {
    json faces = json::array();
    for (const auto& d : r.face_data())
        faces.push_back(json{{"w", json::array({complex_to_json(d.w[0]), complex_to_json(d.w[1]), complex_to_json(d.w[2])})},
                             {"h", complex_to_json(d.h)}});
    return json{{"q", {{"N", r.N()}, {"c", r.q().c()}}}, {"faces", faces}};
}

json matrix_to_json(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<int> parse_index_list(const std::string& text, int count, const std::string& what) {
    std::vector<int> out;
    std::string tok;
    std::istringstream in(text);
    while (std::getline(in, tok, ',')) {
        std::string s;
        for (char ch : tok)
            if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
        if (s.empty()) {
            if (text.find_first_not_of(" \t,") == std::string::npos) continue;
            throw InputError("empty entry in " + what);
        }
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(s, &used);
        } catch (const std::exception&) {
            throw InputError("bad " + what + " entry \"" + s + "\"");
        }
        if (used != s.size()) throw InputError("bad " + what + " entry \"" + s + "\"");
        if (v < 1 || v > count)
            throw InputError(what + " entry " + s + " out of range 1.." + std::to_string(count));
        out.push_back(static_cast<int>(v - 1));
    }
    return out;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

std::string dump(const json& j) { return j.dump(2); }

}  // namespace qteich
