// Python bindings: curves, projective constructions, pencil circle maps and
// the experiment drivers. Points cross the boundary as (x, y) tuples.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "conics/circle_dynamics.hpp"
#include "conics/errors.hpp"
#include "conics/experiments.hpp"
#include "conics/io.hpp"
#include "conics/symbolic_verifier.hpp"

namespace py = pybind11;
using namespace conics;
using geometry::Oval;
using geometry::OvalPtr;

namespace {

using XY = std::pair<double, double>;

geometry::Vec2 vec(const XY& p) { return {p.first, p.second}; }
XY xy(const geometry::Vec2& v) { return {v.x(), v.y()}; }

py::dict scaling_fit_dict(const experiments::ScalingFit& f) {
  py::dict d;
  d["a"] = f.a;
  d["k0"] = f.k0;
  d["p"] = f.p;
  d["q"] = f.q;
  d["epsilons"] = f.epsilons;
  d["measured"] = f.measured;
  d["extrapolated"] = f.extrapolated;
  d["predicted"] = f.predicted;
  d["relative_error"] = f.relative_error;
  return d;
}

py::dict verify_series(int k_sign, int order) {
  auto ex = symbolic::solve_duality_expansion(k_sign, order);
  auto cert = symbolic::certify_expansion(ex);
  auto defect = symbolic::involution_defect(ex);
  py::dict d;
  std::vector<std::string> b;
  for (const auto& c : ex.b) b.push_back(c.str());
  d["b"] = b;
  d["defect"] = defect.eps3_coefficient.str();
  d["residual_zero"] = std::vector<bool>(cert.zero.begin() + 4, cert.zero.end());
  d["certified"] = cert.all_zero();
  if (k_sign == 1 && order == symbolic::kConditionOrder) {
    auto pub = symbolic::published_forms();
    std::vector<bool> match;
    for (std::size_t i = 0; i < pub.b.size(); ++i) match.push_back(ex.b[i] == pub.b[i]);
    match.push_back(defect.eps3_coefficient == pub.defect);
    d["matches_published"] = match;  // b0..b3, defect
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Chord involutions of convex curves and pencil circle maps.";

  py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);
  py::register_exception<DynamicsError>(m, "DynamicsError", PyExc_ValueError);
  py::register_exception<DerivationError>(m, "DerivationError", PyExc_RuntimeError);
  py::register_exception<AlgebraError>(m, "AlgebraError", PyExc_ArithmeticError);
  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::class_<Oval, std::shared_ptr<Oval>>(m, "Oval")
      .def_property_readonly("kind", &Oval::kind)
      .def_property_readonly("is_closed", &Oval::is_closed)
      .def_property_readonly("domain", &Oval::domain)
      .def("point", [](const Oval& o, double t) { return xy(o.point(t)); }, py::arg("t"))
      .def("jet",
           [](const Oval& o, double t, int order) {
             std::vector<XY> out;
             for (const auto& v : geometry::eval_jet(o, t, order)) out.push_back(xy(v));
             return out;
           },
           py::arg("t"), py::arg("order") = 5)
      .def("is_centrally_symmetric", &Oval::is_centrally_symmetric, py::arg("tol") = 1e-12)
      .def("to_json", [](const Oval& o) { return io::curve_spec_json(o).dump(); })
      .def("__repr__", [](const Oval& o) { return "Oval(" + io::curve_spec_json(o).dump() + ")"; });

  // shared_ptr<const Oval> does not convert implicitly; the holder is non-const.
  auto hold = [](OvalPtr p) { return std::const_pointer_cast<Oval>(p); };
  m.def("ellipse", [hold](double A, double B) { return hold(Oval::ellipse(A, B)); }, py::arg("A"), py::arg("B"));
  m.def("fourier_support",
        [hold](double h0, const std::vector<std::tuple<int, double, double>>& hs) {
          std::vector<geometry::Harmonic> v;
          for (auto [k, c, s] : hs) v.push_back({k, c, s});
          return hold(Oval::fourier_support(h0, v));
        },
        py::arg("h0"), py::arg("harmonics"));
  m.def("ode_germ",
        [hold](const std::vector<double>& k, double t_min, double t_max) {
          return hold(Oval::ode_germ(k, t_min, t_max));
        },
        py::arg("k_poly"), py::arg("t_min") = -0.5, py::arg("t_max") = 0.5);
  m.def("load_curve", [hold](const std::string& s) { return hold(io::load_curve_spec(s)); },
        py::arg("spec"), "Curve from inline JSON text or a file path.");

  m.def("affine_curvature", &geometry::affine_curvature, py::arg("oval"), py::arg("t"));
  m.def("tangents_from_point",
        [](const Oval& o, const XY& a) { return geometry::tangents_from_point(o, vec(a)); }, py::arg("oval"),
        py::arg("a"));
  m.def("chord_of_contact",
        [](const Oval& o, const XY& a) {
          auto l = geometry::chord_of_contact(o, vec(a)).normalized().l;
          return std::make_tuple(l.x(), l.y(), l.z());
        },
        py::arg("oval"), py::arg("a"), "Polar line (l1, l2, l3) with l1^2 + l2^2 = 1.");
  m.def("conjugate_direction", [](const Oval& o, const XY& u) { return xy(geometry::conjugate_direction(o, vec(u))); },
        py::arg("oval"), py::arg("u"));
  m.def("intersect_line",
        [](const Oval& o, double l1, double l2, double l3) {
          return geometry::intersect_line_oval(o, geometry::ProjLine{{l1, l2, l3}}).params;
        },
        py::arg("oval"), py::arg("l1"), py::arg("l2"), py::arg("l3"));

  py::class_<dynamics::CircleMap>(m, "CircleMap")
      .def("__call__", &dynamics::CircleMap::operator(), py::arg("t"))
      .def("derivative", &dynamics::CircleMap::derivative, py::arg("t"))
      .def("iterate", &dynamics::CircleMap::iterate, py::arg("t"), py::arg("n"))
      .def("inverse", &dynamics::CircleMap::inverse)
      .def_property_readonly("preserves_orientation", &dynamics::CircleMap::preserves_orientation)
      .def("__matmul__", [](const dynamics::CircleMap& a, const dynamics::CircleMap& b) { return dynamics::compose(a, b); })
      .def("__repr__", &dynamics::CircleMap::describe);

  m.def("involution_parallel",
        [](std::shared_ptr<Oval> o, const XY& u) { return dynamics::involution_parallel(o, vec(u)); }, py::arg("oval"),
        py::arg("u"));
  m.def("involution_pencil",
        [](std::shared_ptr<Oval> o, const XY& p) { return dynamics::involution_pencil(o, vec(p)); }, py::arg("oval"),
        py::arg("p"));
  m.def("compose", &dynamics::compose, py::arg("outer"), py::arg("inner"));

  m.def("rotation_number",
        [](const dynamics::CircleMap& F, double x0, long long n) {
          auto r = dynamics::rotation_number(F, x0, n);
          std::vector<std::pair<long long, long long>> conv;
          for (const auto& c : r.convergents) conv.emplace_back(c.p, c.q);
          py::dict d;
          d["value"] = r.value;
          d["error_bound"] = r.error_bound;
          d["iterations"] = r.iterations;
          d["convergents"] = conv;
          return d;
        },
        py::arg("F"), py::arg("x0") = 0.0, py::arg("iterations") = 1000000);
  m.def("fixed_points", &dynamics::fixed_points, py::arg("F"), py::arg("samples") = 512);
  m.def("periodicity_defect", &dynamics::periodicity_defect, py::arg("F"), py::arg("q"), py::arg("grid") = 128);
  m.def("mobius_reciprocity",
        [](const dynamics::CircleMap& F) {
          auto r = dynamics::mobius_reciprocity(F);
          py::dict d;
          d["fixed_points"] = r.fixed_points;
          d["derivatives"] = r.derivatives;
          d["reciprocity_defect"] = r.reciprocity_defect;
          return d;
        },
        py::arg("F"));
  m.def("linearization_obstruction",
        [](const dynamics::CircleMap& F, int overlap_samples) {
          dynamics::ObstructionOptions opt;
          opt.overlap_samples = overlap_samples;
          auto r = dynamics::linearization_obstruction(F, opt);
          py::dict d;
          d["obstruction"] = r.obstruction;
          d["lambda"] = r.lambda;
          d["attracting"] = r.attracting;
          d["repelling"] = r.repelling;
          return d;
        },
        py::arg("F"), py::arg("overlap_samples") = 64);

  m.def("incidence_defect",
        [](const Oval& o, const XY& A, double selector) {
          return experiments::incidence_defect(o, vec(A), selector).defect;
        },
        py::arg("oval"), py::arg("A"), py::arg("selector") = 0.5);
  m.def("epsilon_scaling_fit",
        [](const Oval& g, double a, const std::vector<double>& eps) {
          return scaling_fit_dict(experiments::epsilon_scaling_fit(g, a, eps));
        },
        py::arg("germ"), py::arg("a"), py::arg("epsilons") = std::vector<double>{0.1, 0.05, 0.025});
  m.def("parallelogram_test",
        [](std::shared_ptr<Oval> o, const XY& u, int samples) {
          auto r = experiments::parallelogram_test(o, vec(u), samples);
          py::dict d;
          for (const auto& [k, v] : r.report.values) d[py::str(k)] = v;
          d["v"] = xy(r.v);
          return d;
        },
        py::arg("oval"), py::arg("u"), py::arg("samples") = 64);
  m.def("conjugacy_scan",
        [](std::shared_ptr<Oval> o, const std::string& mode, int n, long long iterations) {
          experiments::ScanSpec spec;
          if (mode == "point-pairs") {
            spec.mode = experiments::ScanMode::point_pairs;
          } else if (mode != "direction-pairs") {
            throw Error("mode is direction-pairs or point-pairs");
          }
          spec.n = n;
          spec.iterations = iterations;
          std::ostringstream os;
          experiments::write_scan_csv(os, experiments::conjugacy_scan(o, spec));
          return os.str();
        },
        py::arg("oval"), py::arg("mode") = "direction-pairs", py::arg("n") = 16, py::arg("iterations") = 10000,
        "CSV text, header line first.");

  m.def("verify_series", &verify_series, py::arg("k_sign") = 1, py::arg("order") = 7);
}
