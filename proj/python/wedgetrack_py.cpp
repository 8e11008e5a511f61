#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wedgetrack/comparison.hpp"
#include "wedgetrack/curves.hpp"
#include "wedgetrack/functionals.hpp"
#include "wedgetrack/lyapunov.hpp"
#include "wedgetrack/potential.hpp"
#include "wedgetrack/riemann.hpp"
#include "wedgetrack/scenario.hpp"
#include "wedgetrack/tracking.hpp"

namespace py = pybind11;
using namespace wedgetrack;

PYBIND11_MODULE(wedgetrack, m) {
  m.doc() = "front tracking for supersonic flow past a wedge with "
            "prescribed boundary pressure";

  py::class_<GasParams>(m, "GasParams")
      .def(py::init<double>(), py::arg("gamma") = 1.4)
      .def_readwrite("gamma", &GasParams::gamma);

  py::class_<FlowState>(m, "FlowState")
      .def(py::init([](double u, double v, double p, double rho) {
             return FlowState{u, v, p, rho};
           }),
           py::arg("u"), py::arg("v"), py::arg("p"), py::arg("rho"))
      .def_readwrite("u", &FlowState::u)
      .def_readwrite("v", &FlowState::v)
      .def_readwrite("p", &FlowState::p)
      .def_readwrite("rho", &FlowState::rho)
      .def("__repr__", [](const FlowState& s) {
        return "FlowState(u=" + std::to_string(s.u) + ", v=" +
               std::to_string(s.v) + ", p=" + std::to_string(s.p) +
               ", rho=" + std::to_string(s.rho) + ")";
      });

  m.def("sound_speed", &gas::sound_speed, py::arg("state"), py::arg("gas"));
  m.def("eigenvalues", &gas::eigenvalues, py::arg("state"), py::arg("gas"));
  m.def("bernoulli", &gas::bernoulli, py::arg("state"), py::arg("gas"));
  m.def("entropy", &gas::entropy, py::arg("state"), py::arg("gas"));

  m.def("phi", &curves::phi, py::arg("alphas"), py::arg("base"),
        py::arg("gas"), "composite wave curve");
  m.def("critical_pressure", &curves::critical_pressure, py::arg("upstream"),
        py::arg("gas"));
  m.def(
      "shock_polar_state",
      [](const FlowState& um, double p, const GasParams& g) {
        const auto hp = curves::shock_polar_state(um, p, g);
        return py::make_tuple(hp.state, hp.speed);
      },
      py::arg("upstream"), py::arg("p"), py::arg("gas"));

  m.def(
      "solve_riemann",
      [](const FlowState& ul, const FlowState& ur, const GasParams& g) {
        return riemann::solve_riemann(ul, ur, g).alphas;
      },
      py::arg("below"), py::arg("above"), py::arg("gas"),
      "wave strengths of the four-wave decomposition");
  m.def(
      "solve_inverse_riemann",
      [](const FlowState& um, double p, const GasParams& g) {
        const auto inv = riemann::solve_inverse_riemann(um, p, g);
        return py::make_tuple(inv.U_plus, inv.s0, inv.boundary_slope);
      },
      py::arg("below"), py::arg("boundary_pressure"), py::arg("gas"));

  py::class_<Scenario>(m, "Scenario");
  m.def("load_scenario", &load_scenario, py::arg("path"));
  m.def("parse_scenario", &parse_scenario, py::arg("json_text"));

  py::class_<tracking::Trajectory>(m, "Trajectory")
      .def_property_readonly("x_end",
                             [](const tracking::Trajectory& t) { return t.x_end; })
      .def_property_readonly(
          "event_count",
          [](const tracking::Trajectory& t) { return t.events.size(); })
      .def("b", &tracking::Trajectory::b_at, py::arg("x"))
      .def("chi", &tracking::Trajectory::chi_at, py::arg("x"))
      .def("shock_speed", &tracking::Trajectory::s_at, py::arg("x"))
      .def("boundary_state", &tracking::Trajectory::boundary_state_at,
           py::arg("x"))
      .def(
          "section",
          [](const tracking::Trajectory& t, double x) {
            const auto cs = t.section_at(x);
            py::list breaks, states;
            for (double y : cs.positions) breaks.append(y);
            for (const auto& s : cs.regions) states.append(s);
            return py::make_tuple(breaks, states, cs.b);
          },
          py::arg("x"), "breakpoints, region states, and boundary position")
      .def(
          "functional_series",
          [](const tracking::Trajectory& t) {
            const auto fw = functionals::default_weights(t);
            const auto audit = functionals::monotonicity_audit(t, fw);
            py::list xs, fs;
            for (const auto& p : audit.F_series) {
              xs.append(p[0]);
              fs.append(p[1]);
            }
            return py::make_tuple(xs, fs, audit.F0,
                                  audit.violations.size());
          },
          "event abscissas, F values, F(0), and violation count");

  m.def("run", [](const Scenario& sc) { return tracking::run(sc); },
        py::arg("scenario"), "front-tracking run (euler or compare mode)");

  py::class_<potential::PfTrajectory>(m, "PfTrajectory")
      .def_property_readonly(
          "x_end", [](const potential::PfTrajectory& t) { return t.x_end; })
      .def_property_readonly(
          "event_count",
          [](const potential::PfTrajectory& t) { return t.events.size(); })
      .def("b", &potential::PfTrajectory::b_at, py::arg("x"));

  m.def("run_potential",
        [](const Scenario& sc) { return potential::run(sc); },
        py::arg("scenario"));
  m.def("compare_runs", &comparison::compare_runs, py::arg("euler_run"),
        py::arg("potential_run"), py::arg("x"),
        "Y-distance between the two model solutions");
}
