#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tbgeom/sphere_bundle.hpp"
#include "tbgeom/verify.hpp"

namespace py = pybind11;
using namespace tbgeom;

namespace {

nlohmann::json parse(const std::string& s) { return s.empty() ? nlohmann::json::object() : nlohmann::json::parse(s); }

AdaptedGeometry at(const ChartMetric& base, const WeightPair& w, const Vec& x, const Vec& u, int order = 3) {
  return AdaptedGeometry(base, w, x, u, order);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Geometry of tangent bundles with g-natural metrics";

  py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<ChartMetric>(m, "ChartMetric")
      .def_property_readonly("dim", &ChartMetric::dim)
      .def_property_readonly("name", &ChartMetric::name)
      .def_property_readonly("constant_curvature", &ChartMetric::constant_curvature)
      .def("matrix", [](const ChartMetric& g, const Vec& x) { return g.matrix(x); }, py::arg("x"));
  m.def("euclidean", &euclidean, py::arg("dim"));
  m.def("space_form", &space_form, py::arg("dim"), py::arg("c"));
  m.def("_metric_from_json", [](const std::string& s) { return metric_from_json(parse(s)); });

  py::class_<WeightPair>(m, "WeightPair")
      .def_property_readonly("name", &WeightPair::name)
      .def_property_readonly("epsilon", &WeightPair::epsilon)
      .def("a", &WeightPair::a, py::arg("t"))
      .def("b", &WeightPair::b, py::arg("t"))
      .def("admissible", &WeightPair::admissible, py::arg("t"))
      .def("lee_coef", [](const WeightPair& w, double t) { return derived_coeffs(w, t).lee_coef; }, py::arg("t"))
      .def("integrability_c", [](const WeightPair& w, double t) { return integrability_c(w, t); }, py::arg("t"));
  m.def("_named_family", [](const std::string& name, const std::string& params) {
    return named_family(name, parse(params));
  });
  m.def("_weights_from_json", [](const std::string& s) { return weights_from_json(parse(s)); });
  m.def("family_names", &named_family_names);

  // Point-wise quantities of (T(M), g_A, J_A) at (x, u); split vectors are stacked (h, v).
  m.def("metric_matrix", [](const ChartMetric& b, const WeightPair& w, const Vec& x, const Vec& u) {
    return at(b, w, x, u, 1).metric_matrix();
  });
  m.def("complex_structure", [](const ChartMetric& b, const WeightPair& w, const Vec& x, const Vec& u) {
    return at(b, w, x, u, 1).J_matrix();
  });
  m.def("connection", [](const ChartMetric& b, const WeightPair& w, const Vec& x, const Vec& u, const Vec& U,
                         const Vec& W) {
    const auto ag = at(b, w, x, u, 2);
    return ag.connection(SplitVector::from_stacked(ag.point(), U), SplitVector::from_stacked(ag.point(), W)).stacked();
  });
  m.def("curvature", [](const ChartMetric& b, const WeightPair& w, const Vec& x, const Vec& u, const Vec& U,
                        const Vec& V, const Vec& W) {
    const auto ag = at(b, w, x, u);
    const auto& P = ag.point();
    return ag
        .curvature(SplitVector::from_stacked(P, U), SplitVector::from_stacked(P, V), SplitVector::from_stacked(P, W))
        .stacked();
  });
  m.def("sectional", [](const ChartMetric& b, const WeightPair& w, const Vec& x, const Vec& u, const Vec& U,
                        const Vec& V) {
    const auto ag = at(b, w, x, u);
    return ag.sectional(SplitVector::from_stacked(ag.point(), U), SplitVector::from_stacked(ag.point(), V));
  });
  m.def("scalar_curvature", [](const ChartMetric& b, const WeightPair& w, const Vec& x, const Vec& u) {
    return at(b, w, x, u).scalar_curvature();
  });
  m.def("scalar_curvature_published", [](const ChartMetric& b, const WeightPair& w, const Vec& x, const Vec& u) {
    return at(b, w, x, u).scalar_curvature_published();
  });
  m.def(
      "oracle_scalar_curvature",
      [](const ChartMetric& b, const WeightPair& w, const Vec& x, const Vec& u, double h) {
        OracleOptions opt;
        opt.h = h;
        return fd_scalar_curvature(induce(b, w), stack_point(TangentPoint::make(b, x, u)), opt);
      },
      py::arg("base"), py::arg("weights"), py::arg("x"), py::arg("u"), py::arg("h") = 1e-4);
  m.def("induced_metric_components", [](const ChartMetric& b, const WeightPair& w, const Vec& z) {
    return induce(b, w).components(z);
  });

  // Unit tangent bundle.
  m.def(
      "isometry_residual",
      [](const ChartMetric& b, const WeightPair& w, const Vec& x, const Vec& u, double r) {
        const auto t1 = SphereBundle::unit(b, w);
        const auto res = isometry_F_check(b, w, {t1.point(x, u)}, r);
        return py::dict(py::arg("metric") = res.metric, py::arg("phi") = res.phi, py::arg("xi") = res.xi);
      },
      py::arg("base"), py::arg("weights"), py::arg("x"), py::arg("u"), py::arg("r"));
  m.def(
      "k_contact_residuals",
      [](const ChartMetric& b, const WeightPair& w, const Vec& x, const Vec& u) {
        const auto t1 = SphereBundle::unit(b, w);
        const auto p = t1.point(x, u);
        return py::make_tuple(t1.k_contact_residual(p), t1.sasakian_residual(p));
      },
      py::arg("base"), py::arg("weights"), py::arg("x"), py::arg("u"));

  // Batch runner; configs and reports cross the boundary as JSON text.
  m.def(
      "_run",
      [](const std::string& config, bool timing) {
        const auto cfg = RunConfig::from_json(parse(config));
        Report rep;
        {
          py::gil_scoped_release release;
          rep = run(cfg);
        }
        return py::make_tuple(rep.to_json(timing).dump(), rep.to_csv());
      },
      py::arg("config"), py::arg("timing") = true);
  m.def("_suites", [] {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& s : suite_catalogue())
      j.push_back({{"name", s.name}, {"anchor", s.anchor}, {"tolerance", s.default_tolerance}, {"checks", s.checks}});
    return j.dump();
  });
}
