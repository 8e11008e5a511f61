#ifndef WEDGETRACK_CURVES_HPP
#define WEDGETRACK_CURVES_HPP

#include <array>

#include "wedgetrack/gas.hpp"

namespace wedgetrack::curves {

// Wave-curve geometry for the steady Euler system.
//
// Families 1 and 4 are parameterized by the characteristic value:
// alpha = lambda_j(state) - lambda_j(base). On the rarefaction side
// (alpha >= 0) this is exactly the normalization d(state)/d(alpha) = r_j;
// on the Hugoniot side the parameterization matches value and slope at
// alpha = 0 and inherits the second-order tangency of the two curves.
// The base state sits below the wave in y, the returned state above it.

// Point on the Hugoniot through U0 at prescribed downstream density,
// with the exact discontinuity speed (dy/dx slope).
struct HugoniotPoint {
  FlowState state;
  double speed;
};

HugoniotPoint hugoniot_by_density(const FlowState& U0, int family, double rho,
                                  const GasParams& g);

// Rarefaction leg, alpha >= 0. Integrates dU/dalpha = r_j(U).
FlowState rarefaction_curve(const FlowState& U0, int family, double alpha,
                            const GasParams& g);

// Hugoniot leg by the lambda parameter. alpha < 0 is the entropy-admissible
// shock branch; alpha > 0 continues the Hugoniot past the base point (used
// by the two-solution decomposition, not by the front tracking engine).
HugoniotPoint shock_curve(const FlowState& U0, int family, double alpha,
                          const GasParams& g);

// Contact legs: vortex sheet scales (u, v) by e^{a2}, entropy wave scales
// rho by e^{a3}; both exact.
FlowState contact_curve(const FlowState& U0, double a2, double a3);

// Composite wave curve Phi(a1, a2, a3, a4; U0) applied in family order.
FlowState phi(const std::array<double, 4>& alpha, const FlowState& U0,
              const GasParams& g);

// i-th component (1-based: u, v, p, rho) of phi.
double phi_component(int i, const std::array<double, 4>& alpha,
                     const FlowState& U0, const GasParams& g);

// Single leg of the composite, j in 1..4 (j = 2, 3 are the contact legs).
FlowState phi_leg(int family, double alpha, const FlowState& U0,
                  const GasParams& g);

// Strong 1-shock parameterized by its speed: G(s; U0).
FlowState strong_shock_by_speed(double s, const FlowState& U0,
                                const GasParams& g);

// Largest boundary pressure for which the downstream state on the
// 1-shock polar through U_minus stays supersonic.
double critical_pressure(const FlowState& Uminus, const GasParams& g);

// Downstream state on the shock polar through U_minus with prescribed
// pressure p in (p_minus, p_sonic), plus the shock slope, both in the
// original (unrotated) frame.
HugoniotPoint shock_polar_state(const FlowState& Uminus, double p,
                                const GasParams& g);

// Mass flux rho*(v - s*u) through a front of slope s; its sign gives the
// flow-crossing direction (positive = upward through the front).
double mass_flux(const FlowState& U, double s);

}  // namespace wedgetrack::curves

#endif
