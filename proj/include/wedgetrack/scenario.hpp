#ifndef WEDGETRACK_SCENARIO_HPP
#define WEDGETRACK_SCENARIO_HPP

#include <array>
#include <string>
#include <vector>

#include "wedgetrack/gas.hpp"

namespace wedgetrack {

enum class RunMode { Euler, Potential, Compare };

// Compactly supported piecewise perturbation: a sum of boxcar steps and
// windowed sine bumps, per state component (u, v, p, rho; the boundary
// pressure uses component 2).
struct PerturbationBox {
  double lo = 0.0, hi = 0.0;
  std::array<double, 4> delta{};
};

struct PerturbationSine {
  double lo = 0.0, hi = 0.0;
  double amp = 0.0;
  double period = 1.0;
  int component = 0;
};

struct PiecewiseSignal {
  std::vector<PerturbationBox> boxes;
  std::vector<PerturbationSine> sines;

  std::array<double, 4> value(double t) const;
  bool empty() const { return boxes.empty() && sines.empty(); }
  double support_lo() const;
  double support_hi() const;
  // Total variation per component, measured on a fine grid for sines and
  // exactly for boxes.
  double total_variation(int component) const;
  double sup_norm(int component) const;
};

struct TrackingParams {
  double mu = 1e-3;          // accuracy parameter
  double dx = 0.05;          // boundary sampling step
  double delta = 0.0;        // max rarefaction-front strength; 0 = default
  double nu = 0.0;           // simplified-solver threshold; 0 = default
  double lambda_hat = 0.0;   // non-physical speed; 0 = derived
  double x_max = 5.0;
  double guard_radius = 0.3;
  double admission_epsilon = 256.0;  // Glimm functional gate at x = 0
  double front_epsilon = 1e-13;    // strengths below this are dropped

  double dy() const { return 2.0 * lambda_hat * dx; }
  TrackingParams with_defaults(double reference_strength = 0.2) const {
    TrackingParams p = *this;
    if (p.delta <= 0.0) p.delta = std::sqrt(p.mu) * reference_strength;
    if (p.nu <= 0.0) p.nu = p.mu / 1024.0;
    return p;
  }
};

struct Scenario {
  GasParams gas;
  RunMode mode = RunMode::Euler;

  // Background. For Euler strong-shock runs the incoming angle is derived
  // from the boundary pressure so the unperturbed problem is solved by the
  // flat wedge exactly. For potential/compare runs the background is
  // (u_inf, 0) with Bernoulli constant B_inf.
  double speed_inf = 3.0;   // |u_inf|
  double p_inf = 1.0;       // Euler background pressure
  double rho_inf = 1.4;     // Euler background density
  double B_inf = 0.0;       // potential/compare Bernoulli constant
  double pb_bar = 0.0;      // base boundary pressure

  PiecewiseSignal pb_perturbation;    // of x; component 2
  PiecewiseSignal uinf_perturbation;  // of y

  TrackingParams params;

  // Derived at load/validation time.
  FlowState U_minus, U_plus;
  double s0 = 0.0;
  double theta_inf = 0.0;
  double p_sonic = 0.0;

  bool strong_shock() const { return mode == RunMode::Euler; }
  double pb(double x) const { return pb_bar + pb_perturbation.value(x)[2]; }
  FlowState uinf(double y) const;
  std::array<double, 2> pf_uinf(double y) const;  // potential incoming (u, v)
};

// Validates conditions and fills the derived fields; throws
// std::invalid_argument naming the violated condition.
void validate_scenario(Scenario& sc);

Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text);

}  // namespace wedgetrack

#endif
