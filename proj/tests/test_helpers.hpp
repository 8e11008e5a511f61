#ifndef WEDGETRACK_TEST_HELPERS_HPP
#define WEDGETRACK_TEST_HELPERS_HPP

#include <cmath>

#include "wedgetrack/riemann.hpp"
#include "wedgetrack/scenario.hpp"

namespace wtest {

using namespace wedgetrack;

// Canonical strong-shock background: M = 3 incoming flow against a wedge
// whose base pressure is pb. c_inf = 1 by construction.
struct Background {
  GasParams g;
  FlowState Um, Up;
  double s0 = 0.0;
  double pb = 0.0;
  double theta = 0.0;
};

inline Background make_background(double mach = 3.0, double pb = 1.8,
                                  double gamma = 1.4) {
  Background b;
  b.g.gamma = gamma;
  b.pb = pb;
  const FlowState aligned{mach, 0.0, 1.0, gamma};  // c = 1
  const auto polar = curves::shock_polar_state(aligned, pb, b.g);
  b.theta = -std::atan2(polar.state.v, polar.state.u);
  b.Um = {mach * std::cos(b.theta), mach * std::sin(b.theta), 1.0, gamma};
  const auto inv = riemann::solve_inverse_riemann(b.Um, pb, b.g);
  b.Up = inv.U_plus;
  b.s0 = inv.s0;
  return b;
}

// Euler strong-shock scenario around the canonical background.
inline Scenario euler_scenario(double mach = 3.0, double pb = 1.8,
                               double x_max = 3.0, double mu = 1e-3,
                               double dx = 0.25) {
  Scenario sc;
  sc.gas.gamma = 1.4;
  sc.mode = RunMode::Euler;
  sc.speed_inf = mach;
  sc.p_inf = 1.0;
  sc.rho_inf = 1.4;
  sc.pb_bar = pb;
  sc.params.mu = mu;
  sc.params.dx = dx;
  sc.params.x_max = x_max;
  validate_scenario(sc);
  return sc;
}

// Weak-regime comparison scenario (no strong shock); background u = 2.2,
// B chosen so the flow is comfortably supersonic.
inline Scenario compare_scenario(double x_max = 3.0, double mu = 1e-4,
                                 double dx = 0.25) {
  Scenario sc;
  sc.gas.gamma = 1.4;
  sc.mode = RunMode::Compare;
  sc.speed_inf = 2.2;
  sc.B_inf = 0.5 * 2.2 * 2.2 + 1.0 / 0.4;  // c = 1 at the background
  sc.params.mu = mu;
  sc.params.dx = dx;
  sc.params.x_max = x_max;
  validate_scenario(sc);
  return sc;
}

}  // namespace wtest

#endif
