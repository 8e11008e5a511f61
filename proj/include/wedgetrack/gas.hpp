#ifndef WEDGETRACK_GAS_HPP
#define WEDGETRACK_GAS_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wedgetrack {

// One constant gas state. Units are nondimensional throughout; the entropy
// surrogate p/rho^gamma takes kappa = c_nu = 1.
struct FlowState {
  double u = 0.0;    // streamwise velocity
  double v = 0.0;    // transverse velocity
  double p = 0.0;    // pressure, > 0
  double rho = 0.0;  // density, > 0

  std::array<double, 4> to_array() const { return {u, v, p, rho}; }
  static FlowState from_array(const std::array<double, 4>& a) {
    return {a[0], a[1], a[2], a[3]};
  }
};

struct GasParams {
  double gamma = 1.4;  // adiabatic exponent, > 1
};

inline double norm1(const FlowState& a, const FlowState& b) {
  return std::abs(a.u - b.u) + std::abs(a.v - b.v) + std::abs(a.p - b.p) +
         std::abs(a.rho - b.rho);
}

inline double norm_inf(const FlowState& a, const FlowState& b) {
  return std::max(std::max(std::abs(a.u - b.u), std::abs(a.v - b.v)),
                  std::max(std::abs(a.p - b.p), std::abs(a.rho - b.rho)));
}

namespace gas {

inline void require_valid(const FlowState& U) {
  if (!(U.p > 0.0) || !(U.rho > 0.0))
    throw std::domain_error("gas: nonpositive pressure or density");
}

inline double sound_speed(const FlowState& U, const GasParams& g) {
  require_valid(U);
  return std::sqrt(g.gamma * U.p / U.rho);
}

inline bool is_supersonic(const FlowState& U, const GasParams& g) {
  return U.u > sound_speed(U, g);
}

inline double mach(const FlowState& U, const GasParams& g) {
  return std::hypot(U.u, U.v) / sound_speed(U, g);
}

// Conserved fluxes of the steady system W(U)_x + H(U)_y = 0.
inline std::array<double, 4> flux_w(const FlowState& U, const GasParams& g) {
  const double h = g.gamma * U.p / ((g.gamma - 1.0) * U.rho);
  const double e = h + 0.5 * (U.u * U.u + U.v * U.v);
  return {U.rho * U.u, U.rho * U.u * U.u + U.p, U.rho * U.u * U.v,
          U.rho * U.u * e};
}

inline std::array<double, 4> flux_h(const FlowState& U, const GasParams& g) {
  const double h = g.gamma * U.p / ((g.gamma - 1.0) * U.rho);
  const double e = h + 0.5 * (U.u * U.u + U.v * U.v);
  return {U.rho * U.v, U.rho * U.u * U.v, U.rho * U.v * U.v + U.p,
          U.rho * U.v * e};
}

// Eigenvalues with x as the time-like direction: lambda_1 <= lambda_2 =
// lambda_3 = v/u <= lambda_4. Requires u > c.
inline double eigenvalue(const FlowState& U, int family, const GasParams& g) {
  const double c = sound_speed(U, g);
  if (family == 2 || family == 3) return U.v / U.u;
  if (!(U.u > c))
    throw std::domain_error("gas: state not supersonic in x (u <= c)");
  const double q2 = U.u * U.u + U.v * U.v;
  const double root = std::sqrt(q2 - c * c);
  const double sgn = (family == 1) ? -1.0 : 1.0;
  return (U.u * U.v + sgn * c * root) / (U.u * U.u - c * c);
}

inline std::array<double, 4> eigenvalues(const FlowState& U,
                                         const GasParams& g) {
  return {eigenvalue(U, 1, g), eigenvalue(U, 2, g), eigenvalue(U, 3, g),
          eigenvalue(U, 4, g)};
}

// Normalization coefficient of the genuinely nonlinear eigenvectors,
// chosen so that r_j . grad(lambda_j) = 1 for j = 1, 4.
inline double gnl_coefficient(const FlowState& U, int family,
                              const GasParams& g) {
  const double c2 = g.gamma * U.p / U.rho;
  const double l = eigenvalue(U, family, g);
  return 2.0 / (g.gamma + 1.0) * ((U.u * U.u - c2) * l - U.u * U.v) /
         ((1.0 + l * l) * (l * U.u - U.v));
}

// Right eigenvector of family j in (u, v, p, rho) coordinates.
// Families 2, 3 are the vortex-sheet and entropy-wave directions.
inline std::array<double, 4> eigenvector(const FlowState& U, int family,
                                         const GasParams& g) {
  if (family == 2) return {U.u, U.v, 0.0, 0.0};
  if (family == 3) return {0.0, 0.0, 0.0, U.rho};
  const double c2 = g.gamma * U.p / U.rho;
  const double l = eigenvalue(U, family, g);
  const double k = gnl_coefficient(U, family, g);
  const double m = U.rho * (l * U.u - U.v);
  return {-k * l, k, k * m, k * m / c2};
}

inline double bernoulli(const FlowState& U, const GasParams& g) {
  require_valid(U);
  return 0.5 * (U.u * U.u + U.v * U.v) +
         g.gamma * U.p / ((g.gamma - 1.0) * U.rho);
}

// Monotone entropy surrogate p / rho^gamma (kappa = c_nu = 1).
inline double entropy(const FlowState& U, const GasParams& g) {
  require_valid(U);
  return U.p / std::pow(U.rho, g.gamma);
}

}  // namespace gas
}  // namespace wedgetrack

#endif
