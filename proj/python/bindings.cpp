#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "abel/analysis.hpp"
#include "abel/criteria.hpp"
#include "abel/integrate.hpp"
#include "abel/lyapunov.hpp"
#include "abel/perturb.hpp"
#include "abel/poincare.hpp"
#include "abel/spec_format.hpp"

namespace py = pybind11;
using namespace abel;

namespace {

CoefficientFunction make_trig(double c0, std::vector<double> cos_coeffs,
                              std::vector<double> sin_coeffs) {
  return CoefficientFunction(
      TrigPoly{c0, std::move(cos_coeffs), std::move(sin_coeffs)});
}

CoefficientFunction make_poly(const std::vector<std::pair<int, double>>& terms) {
  std::vector<MonomialPoly::Term> ts;
  for (const auto& [e, c] : terms) ts.push_back({e, c});
  return CoefficientFunction(MonomialPoly::from_terms(std::move(ts)));
}

CoefficientFunction make_sampled(std::vector<double> values) {
  return CoefficientFunction(SampledFunction(std::move(values)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Periodic-orbit analysis of Abel equations dx/dt = A x^3 + B x^2 + C x";

  py::class_<CoefficientFunction>(m, "CoefficientFunction")
      .def("__call__", &CoefficientFunction::eval, py::arg("t"))
      .def("scale", &CoefficientFunction::coefficient_scale)
      .def("__eq__", [](const CoefficientFunction& a, const CoefficientFunction& b) {
        return a == b;
      });
  m.def("trig", &make_trig, py::arg("c0") = 0.0,
        py::arg("cos") = std::vector<double>{},
        py::arg("sin") = std::vector<double>{},
        "Trigonometric polynomial c0 + sum cos_n cos(2 pi n t) + sin_n sin(2 pi n t)");
  m.def("poly", &make_poly, py::arg("terms"),
        "Monomial sum from [(exponent, coefficient), ...]");
  m.def("sampled", &make_sampled, py::arg("values"),
        "Uniformly sampled function on [0,1] (cubic interpolation)");
  m.def("constant", &CoefficientFunction::constant, py::arg("c"));

  m.def("eval", [](const CoefficientFunction& f, double t) { return f.eval(t); },
        py::arg("f"), py::arg("t"));
  m.def("integrate_exact", &integrate_exact, py::arg("f"), py::arg("t0"),
        py::arg("t1"));
  m.def("linear_combination", &linear_combination, py::arg("a"), py::arg("f"),
        py::arg("b"), py::arg("g"));

  py::class_<SignClass>(m, "SignClass")
      .def_property_readonly("verdict",
                             [](const SignClass& s) { return std::string(to_string(s.verdict)); })
      .def_readonly("certified_exact", &SignClass::certified_exact)
      .def_readonly("min_value", &SignClass::min_value)
      .def_readonly("max_value", &SignClass::max_value)
      .def_readonly("min_t", &SignClass::min_t)
      .def_readonly("max_t", &SignClass::max_t)
      .def("sign_definite", &SignClass::sign_definite);
  m.def("sign_range", &sign_range, py::arg("f"), py::arg("grid_size") = 1024,
        py::arg("tol") = 1e-12);

  py::class_<AbelEquation>(m, "AbelEquation")
      .def(py::init<CoefficientFunction, CoefficientFunction, CoefficientFunction>(),
           py::arg("A"), py::arg("B"), py::arg("C") = CoefficientFunction::zero())
      .def_readonly("A", &AbelEquation::A)
      .def_readonly("B", &AbelEquation::B)
      .def_readonly("C", &AbelEquation::C)
      .def("rhs", &AbelEquation::rhs, py::arg("t"), py::arg("x"))
      .def("rhs_dx", &AbelEquation::rhs_dx, py::arg("t"), py::arg("x"));

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("times", &Trajectory::times)
      .def_readonly("values", &Trajectory::values)
      .def_readonly("x1", &Trajectory::x1)
      .def_readonly("escape_time", &Trajectory::escape_time)
      .def_readonly("escape_sign", &Trajectory::escape_sign)
      .def("completed", &Trajectory::completed);
  m.def("solve_ivp", &solve_ivp, py::arg("eq"), py::arg("x0"),
        py::arg("rel_tol") = 1e-10, py::arg("abs_tol") = 1e-10);

  py::class_<VariationalResult>(m, "VariationalResult")
      .def_readonly("x1", &VariationalResult::x1)
      .def_readonly("v1", &VariationalResult::v1)
      .def_readonly("divergence_integral", &VariationalResult::divergence_integral);
  m.def("solve_with_variation", &solve_with_variation, py::arg("eq"), py::arg("x0"),
        py::arg("rel_tol") = 1e-10, py::arg("abs_tol") = 1e-10);

  m.def(
      "poincare_map",
      [](const AbelEquation& eq, double x0, double rel_tol, double abs_tol)
          -> std::optional<double> { return poincare_map(eq, x0, rel_tol, abs_tol); },
      py::arg("eq"), py::arg("x0"), py::arg("rel_tol") = 1e-10,
      py::arg("abs_tol") = 1e-10,
      "x(1; x0), or None when the solution escapes before t = 1");

  py::class_<OrbitRecord>(m, "OrbitRecord")
      .def_readonly("x0", &OrbitRecord::x0)
      .def_readonly("multiplier", &OrbitRecord::multiplier)
      .def_readonly("residual", &OrbitRecord::residual)
      .def_readonly("trajectory", &OrbitRecord::trajectory)
      .def_property_readonly("stability", [](const OrbitRecord& o) {
        return std::string(to_string(o.stability));
      });
  py::class_<CenterBand>(m, "CenterBand")
      .def_readonly("x_lo", &CenterBand::x_lo)
      .def_readonly("x_hi", &CenterBand::x_hi);
  py::class_<ScanConfig>(m, "ScanConfig")
      .def(py::init<>())
      .def_readwrite("x_min", &ScanConfig::x_min)
      .def_readwrite("x_max", &ScanConfig::x_max)
      .def_readwrite("n_points", &ScanConfig::n_points)
      .def_readwrite("residual_tol", &ScanConfig::residual_tol)
      .def_readwrite("refine_tol", &ScanConfig::refine_tol)
      .def_readwrite("rel_tol", &ScanConfig::rel_tol)
      .def_readwrite("abs_tol", &ScanConfig::abs_tol)
      .def_readwrite("log_densify", &ScanConfig::log_densify);
  py::class_<ScanResult>(m, "ScanResult")
      .def_readonly("orbits", &ScanResult::orbits)
      .def_readonly("center_bands", &ScanResult::center_bands)
      .def_readonly("warnings", &ScanResult::warnings)
      .def_readonly("escaped_nodes", &ScanResult::escaped_nodes)
      .def_readonly("completed_nodes", &ScanResult::completed_nodes)
      .def("nonzero_orbit_count", &ScanResult::nonzero_orbit_count);
  m.def("find_periodic_orbits", &find_periodic_orbits, py::arg("eq"),
        py::arg("config") = ScanConfig{});
  m.def("multiplier_by_formula", &multiplier_by_formula, py::arg("eq"),
        py::arg("orbit"));

  py::class_<LyapunovConstants>(m, "LyapunovConstants")
      .def_readonly("v2", &LyapunovConstants::v2)
      .def_readonly("v3", &LyapunovConstants::v3)
      .def_readonly("v4", &LyapunovConstants::v4)
      .def_property_readonly("center_verdict",
                             [](const LyapunovConstants& c) {
                               return c.center_verdict == CenterVerdict::Center
                                          ? "center"
                                          : c.center_verdict == CenterVerdict::NotCenter
                                                ? "not_center"
                                                : "undecidable";
                             });
  m.def("lyapunov_constants", &lyapunov_constants, py::arg("eq"));
  m.def("lyapunov_constants_quadrature", &lyapunov_constants_quadrature,
        py::arg("eq"));
  m.def("center_test_trig1", &center_test_trig1, py::arg("a0"), py::arg("a1"),
        py::arg("a2"), py::arg("b0"), py::arg("b1"), py::arg("b2"));
  m.def("center_test_poly3", &center_test_poly3, py::arg("a0"), py::arg("a1"),
        py::arg("a2"), py::arg("b0"), py::arg("b1"), py::arg("b2"), py::arg("j"),
        py::arg("k"));
  m.def("design_two_orbit_trig", &design_two_orbit_trig, py::arg("v4_target"),
        py::arg("mu"), py::arg("lambda_"));
  m.def("design_two_orbit_poly", &design_two_orbit_poly, py::arg("j"), py::arg("k"),
        py::arg("v4_scale"), py::arg("mu"), py::arg("lambda_"));

  py::class_<Witness>(m, "Witness")
      .def_readonly("a", &Witness::a)
      .def_readonly("b", &Witness::b)
      .def_readonly("c", &Witness::c)
      .def_property_readonly(
          "kind", [](const Witness& w) { return std::string(to_string(w.kind)); });
  py::class_<RegionPrediction>(m, "RegionPrediction")
      .def_readonly("lower", &RegionPrediction::lower)
      .def_readonly("upper", &RegionPrediction::upper)
      .def_readonly("guaranteed_exists", &RegionPrediction::guaranteed_exists)
      .def_readonly("description", &RegionPrediction::description)
      .def("contains", &RegionPrediction::contains, py::arg("x"));
  py::class_<CriterionReport>(m, "CriterionReport")
      .def_readonly("criterion", &CriterionReport::criterion)
      .def_readonly("applies", &CriterionReport::applies)
      .def_readonly("witness", &CriterionReport::witness)
      .def_readonly("orbit_bound", &CriterionReport::orbit_bound)
      .def_readonly("hyperbolic_guarantee", &CriterionReport::hyperbolic_guarantee)
      .def_readonly("location", &CriterionReport::location)
      .def_readonly("notes", &CriterionReport::notes)
      .def_readonly("sign_evidence", &CriterionReport::sign_evidence);
  py::class_<DulacData>(m, "DulacData")
      .def(py::init([](std::vector<double> f, double w) {
             return DulacData{std::move(f), w};
           }),
           py::arg("f_coeffs"), py::arg("w"))
      .def_readonly("f_coeffs", &DulacData::f_coeffs)
      .def_readonly("w", &DulacData::w);
  m.def("mw_evaluate", &mw_evaluate, py::arg("eq"), py::arg("dulac"), py::arg("t"),
        py::arg("x"));
  m.def("witness_search", &witness_search, py::arg("eq"), py::arg("n_angles") = 256);
  m.def("predict_orbit_region", &predict_orbit_region, py::arg("eq"),
        py::arg("witness"));
  m.def("trig_no_orbit_test", &trig_no_orbit_test, py::arg("a0"), py::arg("a1"),
        py::arg("a2"), py::arg("b0"), py::arg("b1"), py::arg("b2"));
  m.def("zero_mean_c_criterion", &zero_mean_c_criterion, py::arg("eq"),
        py::arg("witness_hint") = std::nullopt);
  m.def("cubic_dulac_criterion", &cubic_dulac_criterion, py::arg("eq"),
        py::arg("a"), py::arg("b"), py::arg("c"));
  m.def("evaluate_criteria", &evaluate_criteria, py::arg("eq"));

  py::class_<PerturbationParams>(m, "PerturbationParams")
      .def(py::init([](double b1, double a0, double a1, double a2, double b0,
                       double eps) {
             return PerturbationParams{b1, a0, a1, a2, b0, eps};
           }),
           py::arg("b1_tilde"), py::arg("a0_tilde") = 0.0,
           py::arg("a1_tilde") = 0.0, py::arg("a2_tilde") = 0.0,
           py::arg("b0_tilde") = 0.0, py::arg("epsilon") = 0.0)
      .def_readwrite("b1_tilde", &PerturbationParams::b1_tilde)
      .def_readwrite("a0_tilde", &PerturbationParams::a0_tilde)
      .def_readwrite("a1_tilde", &PerturbationParams::a1_tilde)
      .def_readwrite("a2_tilde", &PerturbationParams::a2_tilde)
      .def_readwrite("b0_tilde", &PerturbationParams::b0_tilde)
      .def_readwrite("epsilon", &PerturbationParams::epsilon);
  m.def("center_solution", &center_solution, py::arg("params"), py::arg("rho"),
        py::arg("t"));
  m.def("w_hat_quadrature", &w_hat_quadrature, py::arg("params"), py::arg("rho"));
  m.def("w_hat_closed_form", &w_hat_closed_form, py::arg("params"), py::arg("rho"));
  py::class_<BifurcationRoot>(m, "BifurcationRoot")
      .def_readonly("rho", &BifurcationRoot::rho)
      .def_readonly("simple", &BifurcationRoot::simple)
      .def_readonly("w_hat_slope", &BifurcationRoot::w_hat_slope);
  py::class_<BifurcationRoots>(m, "BifurcationRoots")
      .def_readonly("roots", &BifurcationRoots::roots)
      .def_readonly("degenerate", &BifurcationRoots::degenerate);
  m.def("predict_bifurcating_orbits", &predict_bifurcating_orbits, py::arg("params"));
  m.def("perturbed_equation", &perturbed_equation, py::arg("params"));

  m.def("parse_spec", &parse_spec, py::arg("text"));
  m.def("serialize_spec", &serialize_spec, py::arg("eq"));

  py::register_exception<IntegrationError>(m, "IntegrationFailure");
  py::register_exception<SpecParseError>(m, "SpecError");
}
