#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qteich/errors.hpp"
#include "qteich/holonomy.hpp"
#include "qteich/intertwine.hpp"
#include "qteich/io.hpp"
#include "qteich/transport.hpp"

namespace py = pybind11;
using namespace qteich;

namespace {

py::object from_json(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

json to_json(const py::object& o) { return json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>()); }

cplx default_load(const QParams& q, const std::vector<cplx>& x) { return principal_root(peripheral_load(x), q.N()); }

}  // namespace

PYBIND11_MODULE(_qteich, m) {
    m.doc() = "Local representations of quantum Teichmueller space at roots of unity";

    static py::exception<DomainError> domain_error(m, "DomainError");
    static py::exception<InputError> input_error(m, "InputError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const DomainError& e) {
            py::set_error(domain_error, (e.code() + ": " + e.what()).c_str());
        } catch (const InputError& e) {
            py::set_error(input_error, e.what());
        }
    });

    py::class_<QParams>(m, "QParams")
        .def(py::init<int, int>(), py::arg("N"), py::arg("c") = 1)
        .def_property_readonly("N", &QParams::N)
        .def_property_readonly("c", &QParams::c)
        .def_property_readonly("q", &QParams::q)
        .def("pow", &QParams::pow);

    py::class_<Triangulation>(m, "Triangulation")
        .def_static("from_labels", &Triangulation::from_labels, py::arg("face_edges"),
                    "0-based edge labels per face, slots clockwise")
        .def_static("from_json", [](const py::object& o) { return triangulation_from_json(to_json(o)); })
        .def("to_json", [](const Triangulation& t) { return from_json(triangulation_to_json(t)); })
        .def_property_readonly("face_count", &Triangulation::face_count)
        .def_property_readonly("edge_count", &Triangulation::edge_count)
        .def_property_readonly("face_edges", &Triangulation::face_edges)
        .def("canonical_key", &Triangulation::canonical_key)
        .def("flip", [](const Triangulation& t, int edge) { return flip(t, edge); })
        .def("__eq__", &Triangulation::operator==);

    m.def("validate", [](const Triangulation& t) {
        const ValidationReport r = validate(t);
        py::dict d;
        d["faces"] = r.faces;
        d["edges"] = r.edges;
        d["punctures"] = r.punctures;
        d["unglued_sides"] = r.unglued_sides;
        d["euler_closed"] = r.euler_closed;
        d["connected"] = r.connected;
        return d;
    });
    m.def("sigma_matrix", &sigma_matrix);
    m.def("flip_weights", &flip_weights, py::arg("t"), py::arg("x"), py::arg("edge"));
    m.def(
        "transport", [](const Triangulation& t, const std::vector<cplx>& x, const std::vector<int>& path) {
            const TransportResult r = transport(t, x, path);
            return py::make_tuple(r.surface, r.weights);
        },
        py::arg("t"), py::arg("x"), py::arg("path"));
    m.def("peripheral_load", &peripheral_load);

    py::class_<LocalRep>(m, "LocalRep")
        .def_property_readonly("dim", &LocalRep::dim)
        .def_property_readonly("face_params", &LocalRep::face_params)
        .def("to_json", [](const LocalRep& r) { return from_json(rep_to_json(r)); });
    m.def(
        "rep_from_weights",
        [](const Triangulation& t, const QParams& q, const std::vector<cplx>& x, std::optional<cplx> h) {
            return rep_from_weights(t, q, x, h ? *h : default_load(q, x));
        },
        py::arg("t"), py::arg("q"), py::arg("x"), py::arg("h") = py::none());
    m.def("classify", [](const LocalRep& r) {
        const Classification c = classify(r);
        return py::make_tuple(c.x, c.h);
    });
    m.def("relation_residual", &relation_residual);

    m.def(
        "closed_path_residual",
        [](const Triangulation& t, const QParams& q, const std::vector<cplx>& x, const std::vector<int>& path,
           const std::vector<int>& relabel) { return closed_path(t, q, x, default_load(q, x), path, relabel).residual; },
        py::arg("t"), py::arg("q"), py::arg("x"), py::arg("path"), py::arg("relabel") = std::vector<int>{});
    m.def(
        "mapping_class_invariant",
        [](const Triangulation& t, const QParams& q, const std::vector<cplx>& x, const std::vector<int>& path,
           const std::vector<int>& relabel, int h_root_k) {
            const InvariantReport r = mapping_class_invariant(t, q, x, path, relabel, h_root_k);
            py::dict d;
            d["abs_trace_ratio"] = r.abs_trace_ratio;
            d["normalized_trace"] = r.normalized_trace;
            d["sector"] = r.sector;
            d["eigen_ratios"] = r.eigen_ratios;
            d["fixed_point_residual"] = r.fixed_point_residual;
            return d;
        },
        py::arg("t"), py::arg("q"), py::arg("x"), py::arg("path"), py::arg("relabel"), py::arg("h_root_k") = 0);

    m.def("roundtrip_weights", [](const Triangulation& t, const std::vector<cplx>& x) {
        const RoundtripResult r = roundtrip_weights(t, x);
        return py::make_tuple(r.weights, r.residual);
    });
    m.def("geometric_flip_weights", &geometric_flip_weights);
    m.def("generator_count", &generator_count);
    m.def("total_load_check", [](const Triangulation& t, const std::vector<cplx>& x, const std::vector<int>& signs) {
        const LoadReport r = total_load_check(t, x, signs);
        return py::make_tuple(r.residual, r.squared_residual);
    });
}
