#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "lyapfix/certifier.hpp"
#include "lyapfix/errors.hpp"
#include "lyapfix/linalg.hpp"
#include "lyapfix/lyapunov.hpp"
#include "lyapfix/positive.hpp"
#include "lyapfix/system.hpp"
#include "lyapfix/theta_map.hpp"

namespace py = pybind11;
using namespace lyapfix;

namespace {

SymmetricMatrix as_symmetric(const Matrix& m) { return SymmetricMatrix(m); }

FixedPointOptions options(double tol, int max_iterations) {
  FixedPointOptions opts;
  opts.tol = tol;
  opts.max_iterations = max_iterations;
  return opts;
}

}  // namespace

PYBIND11_MODULE(_lyapfix, m) {
  m.doc() = "Discrete Lyapunov equation solvers and stability/observability certificates";

  auto base = py::register_exception<Error>(m, "LyapfixError");
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<SingularSystemError>(m, "SingularSystemError", base.ptr());
  py::register_exception<DegenerateMapError>(m, "DegenerateMapError", base.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<NumericalFailure>(m, "NumericalFailure", base.ptr());
  py::register_exception<PoleError>(m, "PoleError", base.ptr());
  py::register_exception<InputError>(m, "InputError", base.ptr());

  py::class_<FixedPointState>(m, "FixedPointState")
      .def_property_readonly("X", [](const FixedPointState& s) { return s.x.matrix(); })
      .def_readonly("alpha", &FixedPointState::alpha)
      .def_readonly("lambda_", &FixedPointState::lambda)
      .def_readonly("iterations", &FixedPointState::iterations)
      .def_readonly("map_residual", &FixedPointState::map_residual)
      .def_readonly("converged", &FixedPointState::converged);

  py::class_<LyapunovSolution>(m, "LyapunovSolution")
      .def_property_readonly("Q", [](const LyapunovSolution& s) { return s.q.matrix(); })
      .def_readonly("residual", &LyapunovSolution::residual)
      .def_property_readonly("method",
                             [](const LyapunovSolution& s) { return std::string(to_string(s.method)); })
      .def_property_readonly(
          "definiteness", [](const LyapunovSolution& s) { return std::string(to_string(s.definiteness)); })
      .def_readonly("min_eigenvalue", &LyapunovSolution::min_eigenvalue)
      .def_property_readonly("alpha", [](const LyapunovSolution& s) -> std::optional<double> {
        if (!s.alpha_search) return std::nullopt;
        return s.alpha_search->alpha;
      });

  m.def("spectral_radius", &spectral_radius, py::arg("M"));
  m.def("min_eigenvalue", [](const Matrix& s) { return min_eigenvalue(as_symmetric(s)); }, py::arg("S"));
  m.def("numeric_rank", &numeric_rank, py::arg("M"));
  m.def("kron", &kron, py::arg("A"), py::arg("B"));

  m.def(
      "is_asymptotically_stable",
      [](const Matrix& a, const Matrix& c) {
        const StabilityVerdict v = is_asymptotically_stable(LtiSystem(a, c));
        return py::make_tuple(v.stable, v.spectral_radius);
      },
      py::arg("A"), py::arg("C"), "Returns (stable, spectral_radius).");
  m.def(
      "is_observable",
      [](const Matrix& a, const Matrix& c) {
        const ObservabilityVerdict v = is_observable(LtiSystem(a, c));
        return py::make_tuple(v.observable, v.rank);
      },
      py::arg("A"), py::arg("C"), "Returns (observable, rank).");
  m.def(
      "observability_matrix", [](const Matrix& a, const Matrix& c) { return observability_matrix(LtiSystem(a, c)); },
      py::arg("A"), py::arg("C"));
  m.def(
      "dualize",
      [](const Matrix& a, const Matrix& b) {
        const LtiSystem dual = dualize(ControlSystem(a, b));
        return py::make_tuple(dual.a(), dual.c());
      },
      py::arg("A"), py::arg("B"), "Returns (A^T, B^T).");

  m.def(
      "lyapunov_residual",
      [](const Matrix& a, const Matrix& c, const Matrix& q) {
        return lyapunov_residual(LtiSystem(a, c), as_symmetric(q));
      },
      py::arg("A"), py::arg("C"), py::arg("Q"));
  m.def(
      "solve",
      [](const Matrix& a, const Matrix& c, const std::string& method) {
        const LtiSystem sys(a, c);
        if (method == "direct") return solve_direct(sys);
        if (method == "series") return solve_series(sys);
        if (method == "fixed-point") return solve_via_alpha_bisection(sys);
        throw InputError("unknown method " + method);
      },
      py::arg("A"), py::arg("C"), py::arg("method") = "fixed-point");
  m.def(
      "fixed_point_iterate",
      [](const Matrix& a, const Matrix& c, double alpha, std::optional<Matrix> x0, double tol,
         int max_iterations) {
        const LtiSystem sys(a, c);
        if (x0) return fixed_point_iterate(sys, alpha, as_symmetric(*x0), options(tol, max_iterations));
        return fixed_point_iterate(sys, alpha, options(tol, max_iterations));
      },
      py::arg("A"), py::arg("C"), py::arg("alpha"), py::arg("X0") = py::none(),
      py::arg("tol") = kMapTolerance, py::arg("max_iterations") = kMaxPicardIterations);
  m.def(
      "lambda_of_alpha", [](const Matrix& a, const Matrix& c, double alpha) { return lambda_of_alpha(LtiSystem(a, c), alpha); },
      py::arg("A"), py::arg("C"), py::arg("alpha"));
  m.def(
      "unrolled_chain_check",
      [](const Matrix& a, const Matrix& c, const FixedPointState& fp, int n) {
        return unrolled_chain_check(LtiSystem(a, c), fp, n);
      },
      py::arg("A"), py::arg("C"), py::arg("state"), py::arg("n"));

  m.def(
      "theta_map", [](double lambda, double gamma, double theta) { return theta_map(ThetaMapParams(lambda, gamma), theta); },
      py::arg("lambda_"), py::arg("gamma"), py::arg("theta"));
  m.def(
      "theta_pole", [](double lambda, double gamma) { return theta_pole(ThetaMapParams(lambda, gamma)); },
      py::arg("lambda_"), py::arg("gamma"));
  m.def(
      "cobweb_iterates",
      [](double lambda, double gamma, double theta0, int steps) {
        const CobwebResult r = cobweb_iterates(ThetaMapParams(lambda, gamma), theta0, steps);
        return py::make_tuple(r.iterates, std::string(to_string(r.stop)));
      },
      py::arg("lambda_"), py::arg("gamma"), py::arg("theta0"), py::arg("steps"),
      "Returns (iterates, stop) with stop one of 'completed', 'diverged', 'pole'.");

  m.def(
      "solve_positive_q",
      [](const Matrix& a, const RowVector& c) {
        const PositiveCertificate cert = solve_positive_q(PositiveSystem(a, c));
        return py::make_tuple(RowVector(cert.q), cert.residual, cert.positive);
      },
      py::arg("A"), py::arg("c"), "Returns (q, residual, positive).");
  m.def(
      "simplex_unit_fixed_point",
      [](const Matrix& a, const RowVector& c) {
        const SimplexFixedPoint fp = simplex_unit_fixed_point(PositiveSystem(a, c));
        return py::make_tuple(RowVector(fp.x.values()), fp.alpha, fp.lambda);
      },
      py::arg("A"), py::arg("c"), "Returns (x, alpha, lambda) at lambda = 1.");

  m.def(
      "run_triad",
      [](const std::string& document, const std::string& format) {
        const ReportFormat f = format == "text" ? ReportFormat::kText : ReportFormat::kJson;
        return render_report(run_triad(parse_input(document)), f);
      },
      py::arg("document"), py::arg("format") = "json", "Runs the triad on a JSON input document.");
}
