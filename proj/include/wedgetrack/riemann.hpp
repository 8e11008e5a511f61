#ifndef WEDGETRACK_RIEMANN_HPP
#define WEDGETRACK_RIEMANN_HPP

#include <array>
#include <optional>
#include <vector>

#include "wedgetrack/curves.hpp"
#include "wedgetrack/gas.hpp"

namespace wedgetrack::riemann {

// Local solvers reject states outside a ball around the run's reference
// states; all the interaction estimates are local.
struct SolverGuard {
  std::vector<FlowState> refs;
  double radius = 0.3;  // max-norm of (u, v, p, rho)

  bool admits(const FlowState& U) const {
    if (refs.empty()) return true;
    for (const auto& R : refs)
      if (norm_inf(U, R) <= radius) return true;
    return false;
  }
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Weak-wave Riemann solution: U_r = Phi(alpha; U_l), with the middle states
// and the fan edge speeds sigma_j^-/sigma_j^+ of the self-similar solution.
struct RiemannSolution {
  std::array<double, 4> alphas{};
  FlowState m0, m1, m3, m4;  // below, after 1-leg, after contacts, above
  std::array<double, 4> sigma_lo{}, sigma_hi{};
  double residual = 0.0;
  int iterations = 0;
};

RiemannSolution solve_riemann(const FlowState& U_l, const FlowState& U_r,
                              const GasParams& g,
                              const SolverGuard* guard = nullptr,
                              double tol = 1e-12);

// Riemann solution containing the strong 1-shock: solves
// Phi(0, d2, d3, d4; G(s; U_l)) = U_r for (s, d2, d3, d4).
struct StrongRiemannSolution {
  double s = 0.0;
  std::array<double, 3> deltas{};  // families 2, 3, 4
  FlowState m1, m3, m4;            // above-shock chain
  double residual = 0.0;
};

StrongRiemannSolution solve_riemann_strong(const FlowState& U_l,
                                           const FlowState& U_r,
                                           double s_guess, const GasParams& g,
                                           double tol = 1e-12);

// Free-boundary inverse problem: below state and prescribed boundary
// pressure determine the downstream state, the shock slope, and the
// boundary slope (= downstream flow direction; slip holds exactly).
struct InverseRiemannSolution {
  FlowState U_plus;
  double s0 = 0.0;
  double boundary_slope = 0.0;
};

InverseRiemannSolution solve_inverse_riemann(const FlowState& U_minus,
                                             double p_plus, const GasParams& g);

// 1-wave strength generated at the boundary when the prescribed pressure
// becomes p2: Phi^(3)(delta1, 0, 0, 0; U1) = p2.
double boundary_pressure_wave(const FlowState& U1, double p2,
                              const GasParams& g);

// Reflected 1-wave when waves (b2, b3, b4) hit the boundary.
double boundary_reflection(const FlowState& U1, double b2, double b3,
                           double b4, const GasParams& g);

// Strong-shock speed from the boundary condition G^(3)(s; U1) = p2.
double strong_shock_boundary(const FlowState& U1, double p2,
                             const GasParams& g);

// Accurate resolutions of a weak wave meeting the strong shock.
StrongRiemannSolution strong_interaction_above(
    const FlowState& U_l, double s, const std::array<double, 3>& a234,
    double b1, const GasParams& g);

StrongRiemannSolution strong_interaction_below(
    const FlowState& U_l, const std::array<double, 4>& a, double s,
    const std::array<double, 3>& b234, const GasParams& g);

// Self-similar evaluation of the weak fan at slope xi = (y-ybar)/(x-xbar).
FlowState riemann_fan_eval(const RiemannSolution& sol, double xi,
                           const GasParams& g);

}  // namespace wedgetrack::riemann

#endif
