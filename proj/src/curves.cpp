#include "wedgetrack/curves.hpp"

#include <cmath>
#include <stdexcept>

#include "wedgetrack/numerics.hpp"

namespace wedgetrack::curves {

namespace {

// Density ratio at which the shock-speed square root vanishes
// (flow normal to the front goes sonic): the usable edge of the
// one-parameter Hugoniot for the compressive branch.
double sqrt_limit_ratio(const FlowState& U0, const GasParams& g) {
  const double c02 = g.gamma * U0.p / U0.rho;
  const double q2 = U0.u * U0.u + U0.v * U0.v;
  const double m2 = q2 / c02;
  return m2 * (g.gamma + 1.0) / (2.0 + m2 * (g.gamma - 1.0));
}

}  // namespace

double mass_flux(const FlowState& U, double s) {
  return U.rho * (U.v - s * U.u);
}

HugoniotPoint hugoniot_by_density(const FlowState& U0, int family, double rho,
                                  const GasParams& g) {
  gas::require_valid(U0);
  if (!(rho > 0.0)) throw std::domain_error("hugoniot: rho <= 0");
  if (rho == U0.rho)
    return {U0, gas::eigenvalue(U0, family, g)};
  const double r = rho / U0.rho;
  const double b0 = 0.5 * (g.gamma + 1.0) - 0.5 * (g.gamma - 1.0) * r;
  if (!(b0 > 0.0))
    throw std::domain_error("hugoniot: density ratio beyond limit (b0 <= 0)");
  const double c02 = g.gamma * U0.p / U0.rho;
  const double cbar2 = c02 / b0 * r;
  const double q2 = U0.u * U0.u + U0.v * U0.v;
  if (!(q2 - cbar2 > 0.0))
    throw std::domain_error("hugoniot: normal flow sonic (speed root < 0)");
  const double den = U0.u * U0.u - cbar2;
  if (den == 0.0) throw std::domain_error("hugoniot: vertical front");
  const double sgn = (family == 1) ? -1.0 : 1.0;
  const double s =
      (U0.u * U0.v + sgn * std::sqrt(cbar2) * std::sqrt(q2 - cbar2)) / den;
  const double dp = c02 / b0 * (rho - U0.rho);
  const double dv = dp / (U0.rho * (s * U0.u - U0.v));
  const double du = -s * dv;
  return {{U0.u + du, U0.v + dv, U0.p + dp, rho}, s};
}

FlowState rarefaction_curve(const FlowState& U0, int family, double alpha,
                            const GasParams& g) {
  if (family != 1 && family != 4)
    throw std::invalid_argument("rarefaction_curve: family must be 1 or 4");
  if (alpha < 0.0)
    throw std::domain_error("rarefaction_curve: alpha must be >= 0");
  if (alpha == 0.0) return U0;
  auto rhs = [&](const std::array<double, 4>& y) {
    return gas::eigenvector(FlowState::from_array(y), family, g);
  };
  const int n = std::max(4, static_cast<int>(std::ceil(alpha / 0.005)));
  const auto out = num::dopri5<4>(rhs, U0.to_array(), alpha, n);
  FlowState U = FlowState::from_array(out);
  if (!gas::is_supersonic(U, g))
    throw std::domain_error("rarefaction_curve: left the supersonic region");
  return U;
}

HugoniotPoint shock_curve(const FlowState& U0, int family, double alpha,
                          const GasParams& g) {
  if (family != 1 && family != 4)
    throw std::invalid_argument("shock_curve: family must be 1 or 4");
  if (alpha == 0.0) return {U0, gas::eigenvalue(U0, family, g)};
  const double target = gas::eigenvalue(U0, family, g) + alpha;
  // lambda_j decreases toward the compressive side: family 1 compresses
  // with rho above rho0, family 4 with rho below it.
  const bool denser = (family == 1) ? (alpha < 0.0) : (alpha > 0.0);
  double limit;
  if (denser) {
    const double rmax =
        std::min(sqrt_limit_ratio(U0, g), (g.gamma + 1.0) / (g.gamma - 1.0));
    limit = U0.rho * rmax * (1.0 - 1e-9);
  } else {
    limit = U0.rho * 1e-6;
  }
  auto f = [&](double rho) {
    return gas::eigenvalue(hugoniot_by_density(U0, family, rho, g).state,
                           family, g) -
           target;
  };
  const double step0 = U0.rho * std::min(0.25 * std::abs(alpha), 0.01);
  const auto [a, b] = num::bracket_from(f, U0.rho, limit, std::max(step0, 1e-14));
  const double rho = (a == b) ? a : num::brent(f, a, b);
  return hugoniot_by_density(U0, family, rho, g);
}

FlowState contact_curve(const FlowState& U0, double a2, double a3) {
  const double e2 = std::exp(a2);
  return {U0.u * e2, U0.v * e2, U0.p, U0.rho * std::exp(a3)};
}

FlowState phi_leg(int family, double alpha, const FlowState& U0,
                  const GasParams& g) {
  switch (family) {
    case 1:
    case 4:
      return alpha >= 0.0 ? rarefaction_curve(U0, family, alpha, g)
                          : shock_curve(U0, family, alpha, g).state;
    case 2:
      return contact_curve(U0, alpha, 0.0);
    case 3:
      return contact_curve(U0, 0.0, alpha);
    default:
      throw std::invalid_argument("phi_leg: bad family");
  }
}

FlowState phi(const std::array<double, 4>& alpha, const FlowState& U0,
              const GasParams& g) {
  FlowState U = phi_leg(1, alpha[0], U0, g);
  U = contact_curve(U, alpha[1], alpha[2]);
  return phi_leg(4, alpha[3], U, g);
}

double phi_component(int i, const std::array<double, 4>& alpha,
                     const FlowState& U0, const GasParams& g) {
  if (i < 1 || i > 4) throw std::invalid_argument("phi_component: i in 1..4");
  return phi(alpha, U0, g).to_array()[i - 1];
}

FlowState strong_shock_by_speed(double s, const FlowState& U0,
                                const GasParams& g) {
  const double lam1 = gas::eigenvalue(U0, 1, g);
  if (!(s < lam1))
    throw std::domain_error("strong_shock_by_speed: s not below lambda_1");
  const double rmax =
      std::min(sqrt_limit_ratio(U0, g), (g.gamma + 1.0) / (g.gamma - 1.0));
  const double limit = U0.rho * rmax * (1.0 - 1e-9);
  auto f = [&](double rho) {
    return hugoniot_by_density(U0, 1, rho, g).speed - s;
  };
  const auto [a, b] =
      num::bracket_from(f, U0.rho * (1.0 + 1e-12), limit, U0.rho * 0.01);
  const double rho = (a == b) ? a : num::brent(f, a, b);
  return hugoniot_by_density(U0, 1, rho, g).state;
}

double critical_pressure(const FlowState& Uminus, const GasParams& g) {
  gas::require_valid(Uminus);
  const double q = std::hypot(Uminus.u, Uminus.v);
  const FlowState U0{q, 0.0, Uminus.p, Uminus.rho};
  if (!gas::is_supersonic(U0, g))
    throw std::domain_error("critical_pressure: upstream not supersonic");
  const double rmax =
      std::min(sqrt_limit_ratio(U0, g), (g.gamma + 1.0) / (g.gamma - 1.0));
  auto sonic_gap = [&](double rho) {
    const FlowState U = hugoniot_by_density(U0, 1, rho, g).state;
    return U.u * U.u + U.v * U.v - g.gamma * U.p / U.rho;
  };
  const double limit = U0.rho * rmax * (1.0 - 1e-9);
  const auto [a, b] =
      num::bracket_from(sonic_gap, U0.rho * (1.0 + 1e-12), limit, U0.rho * 0.01);
  const double rho = (a == b) ? a : num::brent(sonic_gap, a, b);
  return hugoniot_by_density(U0, 1, rho, g).state.p;
}

HugoniotPoint shock_polar_state(const FlowState& Uminus, double p,
                                const GasParams& g) {
  gas::require_valid(Uminus);
  if (!(p > Uminus.p))
    throw std::domain_error("shock_polar_state: p must exceed upstream p");
  const double p_sonic = critical_pressure(Uminus, g);
  if (!(p < p_sonic))
    throw std::domain_error("shock_polar_state: p at or beyond p_sonic");
  const double q = std::hypot(Uminus.u, Uminus.v);
  const FlowState U0{q, 0.0, Uminus.p, Uminus.rho};
  const double c02 = g.gamma * U0.p / U0.rho;
  // p is monotone in rho along the branch; solve [p] = c0^2/b0 [rho].
  auto fp = [&](double rho) {
    const double r = rho / U0.rho;
    const double b0 = 0.5 * (g.gamma + 1.0) - 0.5 * (g.gamma - 1.0) * r;
    return U0.p + c02 / b0 * (rho - U0.rho) - p;
  };
  const double rmax =
      std::min(sqrt_limit_ratio(U0, g), (g.gamma + 1.0) / (g.gamma - 1.0));
  const double limit = U0.rho * rmax * (1.0 - 1e-9);
  const auto [a, b] =
      num::bracket_from(fp, U0.rho * (1.0 + 1e-12), limit, U0.rho * 0.01);
  const double rho = (a == b) ? a : num::brent(fp, a, b);
  const HugoniotPoint aligned = hugoniot_by_density(U0, 1, rho, g);
  // Rotate back by the upstream flow angle.
  const double th = std::atan2(Uminus.v, Uminus.u);
  const double ct = std::cos(th), st = std::sin(th);
  const FlowState& A = aligned.state;
  FlowState out{A.u * ct - A.v * st, A.u * st + A.v * ct, A.p, A.rho};
  const double slope = std::tan(std::atan(aligned.speed) + th);
  return {out, slope};
}

}  // namespace wedgetrack::curves
