#include "wedgetrack/riemann.hpp"

#include <cmath>

#include "wedgetrack/numerics.hpp"

namespace wedgetrack::riemann {

namespace {

std::array<double, 4> state_diff(const FlowState& A, const FlowState& B) {
  return {A.u - B.u, A.v - B.v, A.p - B.p, A.rho - B.rho};
}

// First-order guess: expand U_r - U_l in the eigenbasis at U_l.
std::array<double, 4> linear_guess(const FlowState& U_l, const FlowState& U_r,
                                   const GasParams& g) {
  std::array<std::array<double, 4>, 4> A{};
  for (int j = 0; j < 4; ++j) {
    const auto r = gas::eigenvector(U_l, j + 1, g);
    for (int i = 0; i < 4; ++i) A[i][j] = r[i];
  }
  return num::solve_linear<4>(A, state_diff(U_r, U_l));
}

void fill_fan(RiemannSolution& sol, const FlowState& U_l, const GasParams& g) {
  sol.m0 = U_l;
  double s1 = 0.0, s4 = 0.0;
  if (sol.alphas[0] < 0.0) {
    const auto hp = curves::shock_curve(U_l, 1, sol.alphas[0], g);
    sol.m1 = hp.state;
    s1 = hp.speed;
  } else {
    sol.m1 = curves::rarefaction_curve(U_l, 1, sol.alphas[0], g);
  }
  sol.m3 = curves::contact_curve(sol.m1, sol.alphas[1], sol.alphas[2]);
  if (sol.alphas[3] < 0.0) {
    const auto hp = curves::shock_curve(sol.m3, 4, sol.alphas[3], g);
    sol.m4 = hp.state;
    s4 = hp.speed;
  } else {
    sol.m4 = curves::rarefaction_curve(sol.m3, 4, sol.alphas[3], g);
  }
  if (sol.alphas[0] < 0.0) {
    sol.sigma_lo[0] = sol.sigma_hi[0] = s1;
  } else {
    sol.sigma_lo[0] = gas::eigenvalue(sol.m0, 1, g);
    sol.sigma_hi[0] = gas::eigenvalue(sol.m1, 1, g);
  }
  sol.sigma_lo[1] = sol.sigma_hi[1] = gas::eigenvalue(sol.m1, 2, g);
  sol.sigma_lo[2] = sol.sigma_hi[2] = sol.sigma_lo[1];
  if (sol.alphas[3] < 0.0) {
    sol.sigma_lo[3] = sol.sigma_hi[3] = s4;
  } else {
    sol.sigma_lo[3] = gas::eigenvalue(sol.m3, 4, g);
    sol.sigma_hi[3] = gas::eigenvalue(sol.m4, 4, g);
  }
}

}  // namespace

RiemannSolution solve_riemann(const FlowState& U_l, const FlowState& U_r,
                              const GasParams& g, const SolverGuard* guard,
                              double tol) {
  if (guard && (!guard->admits(U_l) || !guard->admits(U_r)))
    throw SolverError("solve_riemann: state outside solver neighborhood");
  auto residual = [&](const std::array<double, 4>& a) {
    return state_diff(curves::phi(a, U_l, g), U_r);
  };
  std::array<double, 4> a0{};
  try {
    a0 = linear_guess(U_l, U_r, g);
  } catch (const std::runtime_error&) {
    a0 = {0.0, 0.0, 0.0, 0.0};
  }
  auto res = num::newton<4>(residual, a0, tol, 50);
  if (!res.converged)
    throw SolverError("solve_riemann: Newton did not converge (residual " +
                      std::to_string(res.residual) + ")");
  RiemannSolution sol;
  sol.alphas = res.x;
  sol.residual = res.residual;
  sol.iterations = res.iterations;
  fill_fan(sol, U_l, g);
  return sol;
}

StrongRiemannSolution solve_riemann_strong(const FlowState& U_l,
                                           const FlowState& U_r,
                                           double s_guess, const GasParams& g,
                                           double tol) {
  auto compose = [&](double s, double d2, double d3, double d4) {
    const FlowState m1 = curves::strong_shock_by_speed(s, U_l, g);
    return curves::phi({0.0, d2, d3, d4}, m1, g);
  };
  auto residual = [&](const std::array<double, 4>& x) {
    return state_diff(compose(x[0], x[1], x[2], x[3]), U_r);
  };
  // Linear guess around (s_guess, 0, 0, 0).
  std::array<double, 4> x0{s_guess, 0.0, 0.0, 0.0};
  try {
    const FlowState base = curves::strong_shock_by_speed(s_guess, U_l, g);
    const double hs = 1e-6 * std::max(1.0, std::abs(s_guess));
    const FlowState gp = curves::strong_shock_by_speed(s_guess + hs, U_l, g);
    const FlowState gm = curves::strong_shock_by_speed(s_guess - hs, U_l, g);
    std::array<std::array<double, 4>, 4> A{};
    const auto dg = state_diff(gp, gm);
    for (int i = 0; i < 4; ++i) A[i][0] = dg[i] / (2.0 * hs);
    for (int j = 2; j <= 4; ++j) {
      const auto r = gas::eigenvector(base, j, g);
      for (int i = 0; i < 4; ++i) A[i][j - 1] = r[i];
    }
    const auto c = num::solve_linear<4>(A, state_diff(U_r, base));
    x0 = {s_guess + c[0], c[1], c[2], c[3]};
  } catch (const std::runtime_error&) {
  }
  auto res = num::newton<4>(residual, x0, tol, 50);
  if (!res.converged)
    throw SolverError("solve_riemann_strong: Newton did not converge");
  StrongRiemannSolution sol;
  sol.s = res.x[0];
  sol.deltas = {res.x[1], res.x[2], res.x[3]};
  sol.residual = res.residual;
  sol.m1 = curves::strong_shock_by_speed(sol.s, U_l, g);
  sol.m3 = curves::contact_curve(sol.m1, sol.deltas[0], sol.deltas[1]);
  sol.m4 = curves::phi_leg(4, sol.deltas[2], sol.m3, g);
  return sol;
}

InverseRiemannSolution solve_inverse_riemann(const FlowState& U_minus,
                                             double p_plus,
                                             const GasParams& g) {
  const auto polar = curves::shock_polar_state(U_minus, p_plus, g);
  InverseRiemannSolution sol;
  sol.U_plus = polar.state;
  sol.s0 = polar.speed;
  sol.boundary_slope = polar.state.v / polar.state.u;
  return sol;
}

double boundary_pressure_wave(const FlowState& U1, double p2,
                              const GasParams& g) {
  const double p1 = U1.p;
  if (p2 == p1) return 0.0;
  auto f = [&](double d) {
    return curves::phi_leg(1, d, U1, g).p - p2;
  };
  // dp/d(delta) < 0 along the 1-curve, so delta and p2 - p1 have
  // opposite signs.
  const double dir = (p2 > p1) ? -1.0 : 1.0;
  const double step0 = std::max(std::abs(p2 - p1) * 0.25, 1e-12);
  const auto [a, b] = num::bracket_from(f, 0.0, dir * 0.6, step0);
  if (a == b) return a;
  return num::brent(f, a, b);
}

double boundary_reflection(const FlowState& U1, double b2, double b3,
                           double b4, const GasParams& g) {
  const FlowState top = curves::phi({0.0, b2, b3, b4}, U1, g);
  return boundary_pressure_wave(U1, top.p, g);
}

double strong_shock_boundary(const FlowState& U1, double p2,
                             const GasParams& g) {
  if (!(p2 > U1.p))
    throw std::domain_error("strong_shock_boundary: p2 must exceed p(U1)");
  // The Hugoniot pressure is monotone in rho; invert directly.
  const double c02 = g.gamma * U1.p / U1.rho;
  auto fp = [&](double rho) {
    const double r = rho / U1.rho;
    const double b0 = 0.5 * (g.gamma + 1.0) - 0.5 * (g.gamma - 1.0) * r;
    return U1.p + c02 / b0 * (rho - U1.rho) - p2;
  };
  const double q2 = U1.u * U1.u + U1.v * U1.v;
  const double m2 = q2 / c02;
  const double rmax = std::min(m2 * (g.gamma + 1.0) / (2.0 + m2 * (g.gamma - 1.0)),
                               (g.gamma + 1.0) / (g.gamma - 1.0));
  const double limit = U1.rho * rmax * (1.0 - 1e-9);
  const auto [a, b] =
      num::bracket_from(fp, U1.rho * (1.0 + 1e-12), limit, U1.rho * 0.01);
  const double rho = (a == b) ? a : num::brent(fp, a, b);
  return curves::hugoniot_by_density(U1, 1, rho, g).speed;
}

StrongRiemannSolution strong_interaction_above(
    const FlowState& U_l, double s, const std::array<double, 3>& a234,
    double b1, const GasParams& g) {
  const FlowState m1 = curves::strong_shock_by_speed(s, U_l, g);
  const FlowState m = curves::phi({0.0, a234[0], a234[1], a234[2]}, m1, g);
  const FlowState U_r = curves::phi_leg(1, b1, m, g);
  return solve_riemann_strong(U_l, U_r, s, g);
}

StrongRiemannSolution strong_interaction_below(
    const FlowState& U_l, const std::array<double, 4>& a, double s,
    const std::array<double, 3>& b234, const GasParams& g) {
  const FlowState m = curves::phi(a, U_l, g);
  const FlowState m1 = curves::strong_shock_by_speed(s, m, g);
  const FlowState U_r = curves::phi({0.0, b234[0], b234[1], b234[2]}, m1, g);
  return solve_riemann_strong(U_l, U_r, s, g);
}

FlowState riemann_fan_eval(const RiemannSolution& sol, double xi,
                           const GasParams& g) {
  if (xi < sol.sigma_lo[0]) return sol.m0;
  if (xi <= sol.sigma_hi[0]) {
    if (sol.alphas[0] < 0.0) return sol.m1;
    return curves::rarefaction_curve(sol.m0, 1,
                                     xi - gas::eigenvalue(sol.m0, 1, g), g);
  }
  if (xi < sol.sigma_lo[1]) return sol.m1;
  if (xi == sol.sigma_lo[1]) return sol.m3;  // contact line: above-side limit
  if (xi < sol.sigma_lo[3]) return sol.m3;
  if (xi <= sol.sigma_hi[3]) {
    if (sol.alphas[3] < 0.0) return sol.m4;
    return curves::rarefaction_curve(sol.m3, 4,
                                     xi - gas::eigenvalue(sol.m3, 4, g), g);
  }
  return sol.m4;
}

}  // namespace wedgetrack::riemann
