#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "monoplay/diagnostics.hpp"
#include "monoplay/dynamics.hpp"
#include "monoplay/errors.hpp"
#include "monoplay/operators.hpp"
#include "monoplay/potential.hpp"
#include "monoplay/scli.hpp"

namespace py = pybind11;
using namespace monoplay;

namespace {

Mat trace_points(const Trace& tr) {
  Mat out(static_cast<Eigen::Index>(tr.points.size()), tr.dim());
  for (std::size_t i = 0; i < tr.points.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = tr.points[i].transpose();
  return out;
}

Vec trace_grad_norms(const Trace& tr) {
  Vec out(static_cast<Eigen::Index>(tr.grads.size()));
  for (std::size_t i = 0; i < tr.grads.size(); ++i) out(static_cast<Eigen::Index>(i)) = tr.grads[i].norm();
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);

  py::class_<MonotoneOperator>(m, "MonotoneOperator")
      .def_property_readonly("kind", [](const MonotoneOperator& op) { return to_string(op.kind()); })
      .def_property_readonly("dim", &MonotoneOperator::dim)
      .def_property_readonly("A", &MonotoneOperator::A)
      .def_property_readonly("b", &MonotoneOperator::b)
      .def_property_readonly("ell", &MonotoneOperator::ell)
      .def_property_readonly("lam", &MonotoneOperator::lambda)
      .def_property_readonly("D", &MonotoneOperator::D)
      .def_property_readonly("equilibrium", &MonotoneOperator::equilibrium)
      .def("__call__", &MonotoneOperator::eval)
      .def("jacobian", &MonotoneOperator::jacobian);

  m.def("make_linear", &make_linear, py::arg("A"), py::arg("b"), py::arg("D"), py::arg("validate") = true);
  m.def("make_bilinear", &make_bilinear, py::arg("M"), py::arg("b1"), py::arg("b2"), py::arg("D"));
  m.def("make_perturbed_bilinear", &make_perturbed_bilinear, py::arg("M"), py::arg("b1"), py::arg("b2"),
        py::arg("epsilon"), py::arg("D"));
  m.def("make_quadratic_min", &make_quadratic_min, py::arg("S"), py::arg("b"), py::arg("D"));

  py::class_<Trace>(m, "Trace")
      .def_readonly("eta", &Trace::eta)
      .def_readonly("p", &Trace::p)
      .def_property_readonly("algorithm", [](const Trace& t) { return to_string(t.algorithm); })
      .def_property_readonly("points", &trace_points)
      .def_property_readonly("grad_norms", &trace_grad_norms)
      .def("z", &Trace::z)
      .def("grad_norm", &Trace::grad_norm);

  py::class_<SCLICoefficients>(m, "SCLICoefficients")
      .def(py::init([](std::vector<double> alpha, std::vector<double> beta, double gamma, double delta) {
             SCLICoefficients c{std::move(alpha), std::move(beta), gamma, delta};
             c.validate();
             return c;
           }),
           py::arg("alpha"), py::arg("beta"), py::arg("gamma"), py::arg("delta"))
      .def_readonly("alpha", &SCLICoefficients::alpha)
      .def_readonly("beta", &SCLICoefficients::beta)
      .def_readonly("gamma", &SCLICoefficients::gamma)
      .def_readonly("delta", &SCLICoefficients::delta)
      .def("consistent", &SCLICoefficients::consistent, py::arg("tol") = 1e-12);
  m.def("og_as_scli", &og_as_scli, py::arg("eta"));
  m.def("gd_as_scli", &gd_as_scli, py::arg("eta"));

  m.def("run_og", &run_og, py::arg("op"), py::arg("z_minus1"), py::arg("z0"), py::arg("eta"), py::arg("T"));
  m.def("run_eg", &run_eg, py::arg("op"), py::arg("u0"), py::arg("eta"), py::arg("T"),
        py::arg("radius") = std::optional<double>());
  m.def("run_gd", &run_gd, py::arg("op"), py::arg("z0"), py::arg("eta"), py::arg("T"));
  m.def("run_scli", &run_scli, py::arg("op"), py::arg("coeffs"), py::arg("inits"), py::arg("T"));

  py::class_<BoundCheck>(m, "BoundCheck")
      .def_readonly("holds", &BoundCheck::holds)
      .def_readonly("vacuous", &BoundCheck::vacuous)
      .def_readonly("margin", &BoundCheck::margin)
      .def_readonly("worst_t", &BoundCheck::worst_t);
  m.def("theorem1_check", &theorem1_check, py::arg("trace"), py::arg("D"), py::arg("eta"), py::arg("ell"),
        py::arg("lam"));
  m.def("lemma1_check", &lemma1_check, py::arg("trace"), py::arg("D"), py::arg("eta"), py::arg("ell"),
        py::arg("S") = 1);

  py::class_<RateFit>(m, "RateFit")
      .def_readonly("slope", &RateFit::slope)
      .def_readonly("intercept", &RateFit::intercept)
      .def_readonly("r2", &RateFit::r2)
      .def_readonly("warnings", &RateFit::warnings);
  m.def("rate_fit", &rate_fit, py::arg("x"), py::arg("y"), py::arg("burn_in") = 0.1);

  m.def("closed_form_C_linear", &closed_form_C_linear, py::arg("A"), py::arg("eta"), py::arg("series_tol") = 1e-14);
  m.def(
      "potential_max_residual",
      [](const MonotoneOperator& op, const Trace& tr, int quad_order) {
        return verify_potential_identity(backward_C(op, tr, quad_order), 1e-8).max_residual;
      },
      py::arg("op"), py::arg("trace"), py::arg("quad_order") = 2);
  m.def("run_og_peg", &run_og_peg, py::arg("op"), py::arg("z_minus1"), py::arg("z0"), py::arg("eta"),
        py::arg("T"));

  py::enum_<SweepFamily>(m, "SweepFamily")
      .value("CONVEX_MIN", SweepFamily::kConvexMin)
      .value("MIN_MAX", SweepFamily::kMinMax);
  py::class_<PolyPair>(m, "PolyPair")
      .def_readonly("q", &PolyPair::q)
      .def_readonly("r", &PolyPair::r)
      .def_static("from_coefficients", &PolyPair::from_coefficients);
  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("sup", &SweepResult::sup)
      .def_readonly("argmax", &SweepResult::argmax)
      .def_readonly("nu", &SweepResult::nu)
      .def_readonly("rho", &SweepResult::rho);
  m.def("radius_sweep", &radius_sweep, py::arg("pair"), py::arg("lo"), py::arg("hi"), py::arg("grid_points"),
        py::arg("family") = SweepFamily::kConvexMin);
  m.def("conjecture_bound", &conjecture_bound, py::arg("mu"), py::arg("ell"));
  m.def("agd_polys", &agd_polys, py::arg("mu"), py::arg("ell"));
  m.def("characteristic_identity_gap", &characteristic_identity_gap, py::arg("coeffs"), py::arg("nu"), py::arg("n"));

  py::enum_<ProblemClass>(m, "ProblemClass")
      .value("MIN_MAX", ProblemClass::kMinMax)
      .value("CONVEX_MIN", ProblemClass::kConvexMin);
  py::class_<LowerBoundRow>(m, "LowerBoundRow")
      .def_readonly("T", &LowerBoundRow::T)
      .def_readonly("nu", &LowerBoundRow::nu)
      .def_readonly("measured", &LowerBoundRow::measured)
      .def_readonly("ratio", &LowerBoundRow::ratio)
      .def_readonly("diverged", &LowerBoundRow::diverged);
  py::class_<LowerBoundTable>(m, "LowerBoundTable")
      .def_property_readonly("case", [](const LowerBoundTable& t) { return case_label(t.kase); })
      .def_readonly("rows", &LowerBoundTable::rows);
  m.def("lowerbound_experiment", &lowerbound_experiment, py::arg("coeffs"), py::arg("ell"), py::arg("D"),
        py::arg("T_list"), py::arg("n"), py::arg("problem") = ProblemClass::kMinMax);

  py::class_<RegretRun>(m, "RegretRun")
      .def_readonly("regret", &RegretRun::regret)
      .def_readonly("cumulative_loss", &RegretRun::cumulative_loss);
  m.def("eg_regret_demo", &eg_regret_demo, py::arg("T"), py::arg("eta"));
}
