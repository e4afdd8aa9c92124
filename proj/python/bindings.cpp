#include "kahler/calibration.hpp"
#include "kahler/catalog.hpp"
#include "kahler/curvature.hpp"
#include "kahler/field_analysis.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace kahler;

namespace {

ChartPoint to_point(const std::array<double, 4>& p) { return ChartPoint(p[0], p[1], p[2], p[3]); }

ImmersionSpec make_spec(const py::object& spec) {
    if (py::isinstance<ImmersionSpec>(spec)) return spec.cast<ImmersionSpec>();
    return ImmersionSpec::catalog(spec.cast<std::string>());
}

CayleyVariant variant_of(const std::string& v) {
    if (v == "omega") return CayleyVariant::Omega;
    if (v == "omega_prime") return CayleyVariant::OmegaPrime;
    throw py::value_error("variant must be 'omega' or 'omega_prime'");
}

unsigned fields_of(const std::vector<std::string>& names) {
    unsigned f = 0;
    for (const auto& n : names) f |= parse_field(n);
    return f;
}

}  // namespace

PYBIND11_MODULE(_kahler, m) {
    m.doc() = "Kahler angles, calibrations and curvature of graph immersions R^4 -> R^8";

    py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);

    py::class_<ImmersionSpec>(m, "Immersion")
        .def_static(
            "catalog", [](const std::string& id, const std::map<std::string, double>& params) {
                return ImmersionSpec::catalog(id, params);
            },
            py::arg("id"), py::arg("params") = std::map<std::string, double>{})
        .def_static(
            "polynomial", [](const std::string& json, int cap) { return ImmersionSpec::polynomial(parse_monomials(json), cap); },
            py::arg("monomials_json"), py::arg("degree_cap") = 8)
        .def_property_readonly("id", &ImmersionSpec::id);

    m.def("catalog_ids", [] {
        std::vector<std::string> ids;
        for (const auto& e : catalog_entries()) ids.push_back(e.id);
        return ids;
    });

    m.def(
        "expected_cos", [](const py::object& s, const std::array<double, 4>& p) { return expected_cos(make_spec(s), to_point(p)); },
        py::arg("immersion"), py::arg("point"));

    m.def(
        "point_geometry",
        [](const py::object& s, const std::array<double, 4>& p) {
            const PointGeometry g = point_geometry(make_spec(s), to_point(p));
            py::dict d;
            d["angles"] = py::make_tuple(g.angles[0], g.angles[1]);
            d["class"] = point_class_name(g.classification.kind);
            d["metric"] = Mat4(g.metric);
            d["pullback_form"] = Mat4(g.pullback_form);
            d["tangent"] = Mat84(g.tangent);
            d["normal"] = Mat84(g.normal);
            return d;
        },
        py::arg("immersion"), py::arg("point"));

    m.def(
        "calibration_defect",
        [](const py::object& s, const std::array<double, 4>& p, const std::string& v) {
            return calibration_defect(make_spec(s), to_point(p), variant_of(v));
        },
        py::arg("immersion"), py::arg("point"), py::arg("variant") = "omega");

    m.def(
        "omega_triangle",
        [](const py::object& s, const std::array<double, 4>& p, const std::string& v) {
            return Mat3(omega_triangle(make_spec(s), to_point(p), variant_of(v)));
        },
        py::arg("immersion"), py::arg("point"), py::arg("variant") = "omega");

    m.def(
        "curvature",
        [](const py::object& s, const std::array<double, 4>& p) {
            const CurvaturePackage c = curvature_package(make_spec(s), to_point(p));
            py::dict d;
            d["mean_curvature"] = c.mean_curvature_norm();
            d["scalar"] = c.scalar;
            const auto& k = c.densities;
            d["densities"] = py::dict(py::arg("p1_tm") = k.p1_tm, py::arg("p1_nm") = k.p1_nm, py::arg("chi_tm") = k.chi_tm,
                                      py::arg("chi_nm") = k.chi_nm, py::arg("p1_plus_tm") = k.p1_plus_tm,
                                      py::arg("p1_minus_tm") = k.p1_minus_tm, py::arg("p1_plus_nm") = k.p1_plus_nm,
                                      py::arg("p1_minus_nm") = k.p1_minus_nm);
            d["eta"] = c.eta.present ? py::object(py::cast(c.eta.chart)) : py::object(py::none());
            return d;
        },
        py::arg("immersion"), py::arg("point"));

    m.def(
        "scan",
        [](const py::object& s, const std::array<double, 4>& lo, const std::array<double, 4>& hi,
           const std::array<int, 4>& resolution, const std::vector<std::string>& fields, unsigned threads) {
            GridRequest req;
            req.lo = lo;
            req.hi = hi;
            req.resolution = resolution;
            const FieldGrid g = scan(make_spec(s), req, fields_of(fields), {}, {}, threads);
            py::list rows;
            for (const auto& n : g.samples) {
                py::dict r;
                r["point"] = py::make_tuple(n.p[0], n.p[1], n.p[2], n.p[3]);
                r["status"] = n.status;
                r["class"] = n.classified ? py::object(py::str(point_class_name(n.cls))) : py::object(py::none());
                for (std::size_t i = 0; i < g.columns.size(); ++i)
                    r[py::str(g.columns[i])] = n.values[i] ? py::object(py::float_(*n.values[i])) : py::object(py::none());
                rows.append(r);
            }
            return rows;
        },
        py::arg("immersion"), py::arg("lo"), py::arg("hi"), py::arg("resolution"),
        py::arg("fields") = std::vector<std::string>{"angles"}, py::arg("threads") = 0);

    m.def(
        "pde_residual",
        [](const py::object& s, const std::array<double, 4>& p, double step) {
            return log_cos2_pde_residual(make_spec(s), to_point(p), step);
        },
        py::arg("immersion"), py::arg("point"), py::arg("step"));

    m.def(
        "transgression_residual",
        [](const py::object& s, const std::array<double, 4>& p, double step) {
            return transgression_identity_residual(make_spec(s), to_point(p), step);
        },
        py::arg("immersion"), py::arg("point"), py::arg("step"));

    m.def("observed_order", &observed_order, py::arg("residual_h"), py::arg("residual_half"));

    m.def(
        "tube_integral",
        [](const py::object& s, const std::array<double, 4>& center, double radius, int order, double rel_tol) {
            const TubeResult t = tube_integral_eta(make_spec(s), to_point(center), radius, order, rel_tol);
            return py::make_tuple(t.value, t.coarse);
        },
        py::arg("immersion"), py::arg("center"), py::arg("radius"), py::arg("order") = 16, py::arg("rel_tol") = 1e-3);
}
