// qteich: command-line front end for the quantum Teichmueller toolkit.

#include <cstdint>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qteich/errors.hpp"
#include "qteich/holonomy.hpp"
#include "qteich/intertwine.hpp"
#include "qteich/io.hpp"
#include "qteich/qalgebra.hpp"
#include "qteich/representation.hpp"
#include "qteich/surface.hpp"
#include "qteich/transport.hpp"

using namespace qteich;

namespace {

struct Config {
    int N = 2;
    int c = 1;
    double tolerance = 0.0;  // 0 selects the command default
    std::uint64_t seed = 1;
    std::size_t max_dim = kDefaultMaxDim;
    std::string output = "json";

    std::string triangulation;
    std::string weights;
    std::string rep;
    std::string path;
    std::string relabel;
    std::string loop;
    int edge = 0;
    int h_root = 0;
    int start_face = 1;
    int puncture = 0;
    int flip_edge = 0;
    bool random = false;
    bool matrix = false;
    bool load_check = false;

    double tol(double fallback) const { return tolerance > 0.0 ? tolerance : fallback; }
};

Triangulation load_triangulation(const Config& cfg) {
    if (cfg.triangulation.empty()) throw InputError("--triangulation is required");
    return triangulation_from_json(read_json_file(cfg.triangulation));
}

std::vector<cplx> load_weights(const Config& cfg, const Triangulation& t) {
    if (cfg.weights.empty()) throw InputError("--weights is required");
    return weights_from_json(read_json_file(cfg.weights), t.edge_count());
}

QParams qparams(const Config& cfg) { return QParams(cfg.N, cfg.c); }

cplx central_load(const QParams& q, const std::vector<cplx>& x, int k) {
    return principal_root(peripheral_load(x), q.N()) * q.pow(2LL * k);
}

json complex_list(const std::vector<cplx>& v) {
    json out = json::array();
    for (const auto& z : v) out.push_back(complex_to_json(z));
    return out;
}

std::vector<int> identity_perm(int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    return p;
}

std::vector<int> parse_relabel(const Config& cfg, int n) {
    if (cfg.relabel.empty()) return identity_perm(n);
    auto p = parse_index_list(cfg.relabel, n, "relabel");
    if (static_cast<int>(p.size()) != n) throw InputError("relabel must list every edge once");
    std::vector<char> seen(n, 0);
    for (int v : p) {
        if (seen[v]) throw InputError("relabel is not a permutation");
        seen[v] = 1;
    }
    return p;
}

json verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

// ---------------------------------------------------------------- commands

json cmd_validate(const Config& cfg) {
    const Triangulation t = load_triangulation(cfg);
    const ValidationReport v = validate(t);
    return json{{"faces", v.faces},
                {"edges", v.edges},
                {"unglued_sides", v.unglued_sides},
                {"punctures", v.punctures},
                {"boundary_punctures", v.boundary_punctures},
                {"components", v.components},
                {"euler_closed", v.euler_closed},
                {"euler_ideal", v.euler_ideal},
                {"involution_ok", v.involution_ok},
                {"connected", v.connected},
                {"euler_negative", v.euler_negative}};
}

json cmd_sigma(const Config& cfg) {
    const Triangulation t = load_triangulation(cfg);
    return json{{"sigma", sigma_matrix(t)}};
}

json cmd_flip(const Config& cfg) {
    const Triangulation t = load_triangulation(cfg);
    if (cfg.edge < 1 || cfg.edge > t.edge_count()) throw InputError("--edge out of range");
    const int e = cfg.edge - 1;
    const FlipMove mv = flip_move(t, e);
    json sides = json::array();
    for (int s : mv.sides) sides.push_back(s + 1);
    json map = json::array();
    for (int i = 0; i < t.edge_count(); ++i) map.push_back(i + 1);
    return json{{"diagonal", cfg.edge}, {"square_sides", sides}, {"edge_map", map},
                {"triangulation", triangulation_to_json(flip(t, e))}};
}

json cmd_transport(const Config& cfg) {
    const Triangulation t = load_triangulation(cfg);
    const auto x = load_weights(cfg, t);
    const auto path = parse_index_list(cfg.path, t.edge_count(), "path");
    const TransportResult r = transport(t, x, path);
    json steps = json::array();
    for (const auto& s : r.steps)
        steps.push_back(json{{"edge", s.edge + 1}, {"diagonal_weight", complex_to_json(s.diagonal_weight)},
                             {"margin", s.margin}});
    return json{{"weights", complex_list(r.weights)},
                {"steps", steps},
                {"load", complex_to_json(peripheral_load(r.weights))},
                {"triangulation", triangulation_to_json(r.surface)}};
}

json cmd_rep_build(const Config& cfg) {
    const Triangulation t = load_triangulation(cfg);
    const QParams q = qparams(cfg);
    if (cfg.random == !cfg.weights.empty()) throw InputError("give exactly one of --weights and --random");
    if (cfg.random) {
        std::mt19937_64 rng(cfg.seed);
        const LocalRep r = random_rep(t, q, rng, cfg.max_dim);
        json out = rep_to_json(r);
        out["dimension"] = r.dim();
        return out;
    }
    const auto x = load_weights(cfg, t);
    const LocalRep r = rep_from_weights(t, q, x, central_load(q, x, cfg.h_root), cfg.max_dim);
    json out = rep_to_json(r);
    out["dimension"] = r.dim();
    return out;
}

json cmd_classify(const Config& cfg) {
    const Triangulation t = load_triangulation(cfg);
    if (cfg.rep.empty()) throw InputError("--rep is required");
    const LocalRep r = rep_from_json(read_json_file(cfg.rep), t, cfg.max_dim);
    const Classification c = classify(r, cfg.tol(1e-9));
    return json{{"x", complex_list(c.x)},
                {"h", complex_to_json(c.h)},
                {"scalar_residual", c.scalar_residual},
                {"load_residual", c.load_residual}};
}

json intertwiner_json(const Intertwiner& L, bool with_matrix) {
    json out{{"dimension", L.L.rows()},
             {"normalization", "unit operator norm, largest entry real positive"},
             {"residual", L.residual},
             {"nullspace", {{"smallest", L.smallest}, {"second", L.second}}}};
    if (with_matrix) out["matrix"] = matrix_to_json(L.L);
    return out;
}

json cmd_intertwine_flip(const Config& cfg) {
    const Triangulation t = load_triangulation(cfg);
    const QParams q = qparams(cfg);
    const auto x = load_weights(cfg, t);
    if (cfg.edge < 1 || cfg.edge > t.edge_count()) throw InputError("--edge out of range");
    const int e = cfg.edge - 1;
    const auto reps = path_reps(t, q, x, central_load(q, x, cfg.h_root), {e}, cfg.max_dim);
    const Intertwiner L = solve_flip_intertwiner(reps[0], reps[1], e);
    json out = intertwiner_json(L, cfg.matrix);
    out["target_weights"] = complex_list(classify(reps[1]).x);
    out["verdict"] = verdict(L.residual <= cfg.tol(1e-8));
    return out;
}

json cmd_intertwine_path(const Config& cfg) {
    const Triangulation t = load_triangulation(cfg);
    const QParams q = qparams(cfg);
    const auto x = load_weights(cfg, t);
    const auto path = parse_index_list(cfg.path, t.edge_count(), "path");
    const auto rel = parse_relabel(cfg, t.edge_count());
    const cplx h = central_load(q, x, cfg.h_root);
    const TransportResult tr = transport(t, x, path);
    bool closes = find_isomorphism(relabel(tr.surface, rel), t, identity_perm(t.edge_count())).has_value() ||
                  !cfg.relabel.empty();
    double fixed = 0.0;
    for (int i = 0; i < t.edge_count(); ++i)
        fixed = std::max(fixed, std::abs(tr.weights[i] - x[rel[i]]) / std::max(1.0, std::abs(x[rel[i]])));
    closes = closes && fixed <= 1e-9;
    json out{{"path", cfg.path}, {"closed", closes}};
    if (closes) {
        const ClosureReport c = closed_path(t, q, x, h, path, rel, cfg.max_dim);
        out["off_scalar_residual"] = c.residual;
        out["worst_step_residual"] = c.worst_step_residual;
        out["dimension"] = c.composite.rows();
        if (cfg.matrix) out["matrix"] = matrix_to_json(c.composite);
        out["verdict"] = verdict(c.residual <= cfg.tol(1e-6));
        return out;
    }
    const auto reps = path_reps(t, q, x, h, path, cfg.max_dim);
    const PathIntertwiner p = compose_path(reps, path);
    json steps = json::array();
    for (std::size_t k = 0; k < p.steps.size(); ++k)
        steps.push_back(json{{"edge", path[k] + 1}, {"residual", p.steps[k].residual},
                             {"smallest", p.steps[k].smallest}, {"second", p.steps[k].second}});
    out["steps"] = steps;
    out["worst_step_residual"] = p.worst_residual;
    out["dimension"] = p.L.rows();
    if (cfg.matrix) out["matrix"] = matrix_to_json(p.L);
    out["verdict"] = verdict(p.worst_residual <= cfg.tol(1e-8));
    return out;
}

json cmd_pentagon_check(const Config& cfg) {
    // Disk with five boundary punctures, three faces; edges 1 and 2 are the diagonals.
    const Triangulation t = Triangulation::from_labels({{0, 2, 3}, {0, 1, 4}, {1, 5, 6}});
    const QParams q = qparams(cfg);
    std::mt19937_64 rng(cfg.seed);
    std::vector<cplx> x;
    for (int i = 0; i < t.edge_count(); ++i) x.push_back(random_weight(rng));
    const std::vector<int> path{0, 1, 0, 1, 0};
    const std::vector<int> rel{1, 0, 2, 3, 4, 5, 6};
    const TransportResult tr = transport(t, x, path);
    double fixed = 0.0;
    for (int i = 0; i < t.edge_count(); ++i) fixed = std::max(fixed, std::abs(tr.weights[i] - x[rel[i]]));
    const ClosureReport c = closed_path(t, q, x, central_load(q, x, 0), path, rel, cfg.max_dim);
    const bool ok = c.residual <= cfg.tol(1e-6) && fixed <= 1e-9;
    return json{{"N", q.N()},
                {"c", q.c()},
                {"seed", cfg.seed},
                {"weights", complex_list(x)},
                {"weight_closure_residual", fixed},
                {"off_scalar_residual", c.residual},
                {"worst_step_residual", c.worst_step_residual},
                {"verdict", verdict(ok)}};
}

// Resolve edge crossings to slots, starting from `face`.
std::vector<int> loop_slots(const Triangulation& t, int face, const std::vector<int>& edges) {
    std::vector<int> slots;
    for (std::size_t k = 0; k < edges.size(); ++k) {
        int slot = -1;
        for (int s = 0; s < 3; ++s)
            if (t.edge_at({face, s}) == edges[k]) {
                if (slot >= 0) throw InputError("loop step " + std::to_string(k + 1) + ": edge occurs twice on the face");
                slot = s;
            }
        if (slot < 0) throw InputError("loop step " + std::to_string(k + 1) + ": edge is not on the current face");
        auto p = t.partner({face, slot});
        if (!p) throw InputError("loop step " + std::to_string(k + 1) + ": edge is on the boundary");
        slots.push_back(slot);
        face = p->face;
    }
    return slots;
}

json mobius_json(const Mobius& m) {
    json rows = json::array();
    for (int i = 0; i < 2; ++i) rows.push_back(json::array({complex_to_json(m(i, 0)), complex_to_json(m(i, 1))}));
    return rows;
}

json cmd_holonomy(const Config& cfg) {
    const Triangulation t = load_triangulation(cfg);
    const auto x = load_weights(cfg, t);
    json out;
    if (cfg.load_check) {
        std::mt19937_64 rng(cfg.seed);
        std::vector<int> signs(static_cast<std::size_t>(generator_count(t)));
        for (auto& s : signs) s = (rng() >> 63) ? -1 : 1;
        const LoadReport r = total_load_check(t, x, signs);
        out = json{{"punctures", r.punctures},
                   {"lift_signs", signs},
                   {"peripheral_eigenvalues", complex_list(r.peripheral_eigen)},
                   {"lhs", complex_to_json(r.lhs)},
                   {"rhs", complex_to_json(r.rhs)},
                   {"residual", r.residual},
                   {"squared_residual", r.squared_residual},
                   {"verdict", verdict(r.residual <= cfg.tol(1e-8) && r.squared_residual <= cfg.tol(1e-9))}};
        return out;
    }
    if (cfg.puncture > 0) {
        const int k = cfg.puncture - 1;
        const PeripheralLoop loop = peripheral_loop(t, x, k);
        const Mobius m = holonomy(t, x, loop.start_face, loop.slots);
        const PunctureEigen e = puncture_eigenvalue(t, x, k);
        json slots = json::array();
        for (int s : loop.slots) slots.push_back(s + 1);
        return json{{"puncture", cfg.puncture},
                    {"start_face", loop.start_face + 1},
                    {"slots", slots},
                    {"matrix", mobius_json(m)},
                    {"trace", complex_to_json(m.trace())},
                    {"lift", "det 1, largest entry with non-negative real part"},
                    {"derivative", complex_to_json(e.derivative)},
                    {"expected", complex_to_json(e.expected)},
                    {"residual", e.residual},
                    {"verdict", verdict(e.residual <= cfg.tol(1e-8))}};
    }
    if (cfg.start_face < 1 || cfg.start_face > t.face_count()) throw InputError("--start-face out of range");
    const int f = cfg.start_face - 1;
    const auto edges = parse_index_list(cfg.loop, t.edge_count(), "loop");
    const Mobius m = holonomy(t, x, f, loop_slots(t, f, edges));
    return json{{"start_face", cfg.start_face},
                {"loop", cfg.loop},
                {"matrix", mobius_json(m)},
                {"trace", complex_to_json(m.trace())},
                {"lift", "det 1, largest entry with non-negative real part"}};
}

json cmd_roundtrip(const Config& cfg) {
    const Triangulation t = load_triangulation(cfg);
    const auto x = load_weights(cfg, t);
    if (cfg.flip_edge > 0) {
        if (cfg.flip_edge > t.edge_count()) throw InputError("--flip out of range");
        const int e = cfg.flip_edge - 1;
        const auto geo = geometric_flip_weights(t, x, e);
        const auto alg = flip_weights(t, x, e);
        double worst = 0.0;
        for (std::size_t i = 0; i < alg.size(); ++i)
            worst = std::max(worst, std::abs(geo[i] - alg[i]) / std::max(1.0, std::abs(alg[i])));
        return json{{"flip", cfg.flip_edge},
                    {"geometric", complex_list(geo)},
                    {"algebraic", complex_list(alg)},
                    {"residual", worst},
                    {"verdict", verdict(worst <= cfg.tol(1e-8))}};
    }
    const RoundtripResult r = roundtrip_weights(t, x);
    return json{{"weights", complex_list(r.weights)},
                {"residual", r.residual},
                {"verdict", verdict(r.residual <= cfg.tol(1e-8))}};
}

json cmd_invariant(const Config& cfg) {
    const Triangulation t = load_triangulation(cfg);
    const QParams q = qparams(cfg);
    const auto x = load_weights(cfg, t);
    const auto path = parse_index_list(cfg.path, t.edge_count(), "path");
    const auto rel = parse_relabel(cfg, t.edge_count());
    const InvariantReport r = mapping_class_invariant(t, q, x, path, rel, cfg.h_root, cfg.max_dim);
    json out{{"path", cfg.path},
             {"relabel", cfg.relabel},
             {"dimension", r.composite.rows()},
             {"fixed_point_residual", r.fixed_point_residual},
             {"abs_trace_ratio", r.abs_trace_ratio},
             {"normalized_trace", complex_to_json(r.normalized_trace)},
             {"sector", r.sector},
             {"eigen_ratios", complex_list(r.eigen_ratios)},
             {"worst_step_residual", r.worst_step_residual}};
    if (cfg.matrix) out["matrix"] = matrix_to_json(r.composite);
    return out;
}

void print_human(const json& j, std::ostream& os) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() == "verdict" || it.key() == "schema_version") continue;
        os << it.key() << ": " << it.value().dump() << "\n";
    }
    if (j.contains("verdict")) os << j.at("verdict").get<std::string>() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local representations of quantum Teichmueller space at roots of unity"};
    app.require_subcommand(1);
    Config cfg;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--N", cfg.N, "root of unity order")->check(CLI::Range(2, 32));
        sub->add_option("--c", cfg.c, "q = -exp(i pi c / N)");
        sub->add_option("--tolerance", cfg.tolerance, "override the pass tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--max-dim", cfg.max_dim, "largest allowed representation dimension");
        sub->add_option("--output", cfg.output, "json or human")->check(CLI::IsMember({"json", "human"}));
    };
    auto tri = [&](CLI::App* sub) { sub->add_option("--triangulation,-t", cfg.triangulation, "triangulation JSON"); };
    auto wts = [&](CLI::App* sub) { sub->add_option("--weights,-w", cfg.weights, "weights JSON"); };

    struct Entry {
        CLI::App* sub;
        json (*run)(const Config&);
    };
    std::vector<Entry> entries;
    auto add = [&](const char* name, const char* help, json (*run)(const Config&)) {
        CLI::App* sub = app.add_subcommand(name, help);
        common(sub);
        entries.push_back({sub, run});
        return sub;
    };

    tri(add("validate", "check a triangulation and count its punctures", cmd_validate));
    tri(add("sigma", "antisymmetric sector-count matrix", cmd_sigma));
    {
        auto* s = add("flip", "diagonal exchange", cmd_flip);
        tri(s);
        s->add_option("--edge,-e", cfg.edge, "edge to flip (1-based)")->required();
    }
    {
        auto* s = add("transport", "edge weights along a flip path", cmd_transport);
        tri(s);
        wts(s);
        s->add_option("--path,-p", cfg.path, "comma-separated edges, 1-based")->required();
    }
    {
        auto* s = add("rep-build", "local representation descriptor", cmd_rep_build);
        tri(s);
        wts(s);
        s->add_flag("--random", cfg.random, "random generic representation from --seed");
        s->add_option("--h-root", cfg.h_root, "central load root index k (load times q^2k)");
    }
    {
        auto* s = add("classify", "edge weights and central load of a representation", cmd_classify);
        tri(s);
        s->add_option("--rep,-r", cfg.rep, "representation JSON")->required();
    }
    {
        auto* s = add("intertwine-flip", "intertwiner for one diagonal exchange", cmd_intertwine_flip);
        tri(s);
        wts(s);
        s->add_option("--edge,-e", cfg.edge, "edge to flip (1-based)")->required();
        s->add_option("--h-root", cfg.h_root, "central load root index k");
        s->add_flag("--matrix", cfg.matrix, "include matrix entries");
    }
    {
        auto* s = add("intertwine-path", "composite intertwiner along a flip path", cmd_intertwine_path);
        tri(s);
        wts(s);
        s->add_option("--path,-p", cfg.path, "comma-separated edges, 1-based")->required();
        s->add_option("--relabel", cfg.relabel, "closing relabel: final edge i is start edge relabel[i]");
        s->add_option("--h-root", cfg.h_root, "central load root index k");
        s->add_flag("--matrix", cfg.matrix, "include matrix entries");
    }
    add("pentagon-check", "five-flip composite on the pentagon is scalar", cmd_pentagon_check);
    {
        auto* s = add("holonomy", "pleated-surface holonomy", cmd_holonomy);
        tri(s);
        wts(s);
        s->add_option("--loop", cfg.loop, "edges crossed in order, 1-based");
        s->add_option("--start-face", cfg.start_face, "face the loop starts in (1-based)");
        s->add_option("--puncture", cfg.puncture, "peripheral loop of this puncture (1-based)");
        s->add_flag("--load-check", cfg.load_check, "peripheral load identity with random lift signs");
    }
    {
        auto* s = add("roundtrip", "weights recomputed from the development", cmd_roundtrip);
        tri(s);
        wts(s);
        s->add_option("--flip", cfg.flip_edge, "compare a geometric flip with the coordinate change");
    }
    {
        auto* s = add("invariant", "trace invariant of a mapping class", cmd_invariant);
        tri(s);
        wts(s);
        s->add_option("--path,-p", cfg.path, "comma-separated edges, 1-based")->required();
        s->add_option("--relabel", cfg.relabel, "closing relabel: final edge i is start edge relabel[i]");
        s->add_option("--h-root", cfg.h_root, "central load root index k");
        s->add_flag("--matrix", cfg.matrix, "include matrix entries");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    json report;
    try {
        for (const auto& e : entries)
            if (e.sub->parsed()) report = e.run(cfg);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        json err{{"schema_version", kSchemaVersion}, {"error", e.code()}, {"message", e.what()}};
        if (cfg.output == "json") std::cout << dump(err) << "\n";
        else std::cout << "error: " << e.code() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    }

    report["schema_version"] = kSchemaVersion;
    if (cfg.output == "json") std::cout << dump(report) << "\n";
    else print_human(report, std::cout);
    if (report.contains("verdict") && report.at("verdict") == "FAIL") return 1;
    return 0;
}
