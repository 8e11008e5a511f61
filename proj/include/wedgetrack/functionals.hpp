#ifndef WEDGETRACK_FUNCTIONALS_HPP
#define WEDGETRACK_FUNCTIONALS_HPP

#include <array>
#include <functional>
#include <vector>

#include "wedgetrack/tracking.hpp"

namespace wedgetrack::functionals {

// Weights of the Glimm-type functional F = L + KK Q + shock-state terms.
// K_minus and Ks come from measured reflection/interaction coefficients at
// the background; K0, K, KK are calibrated powers of two.
struct FunctionalWeights {
  bool strong = true;
  double K_minus = 1.0;
  double K0 = 4.0;
  double Ks = 0.75;
  double K = 128.0;
  double KK = 64.0;
  // measured background coefficients (diagnostics)
  double Kb4 = 0.0, Ks4 = 0.0, C1 = 0.0, C2 = 0.0, Khat_max = 0.0;
};

FunctionalWeights measure_weights(const FlowState& U_minus,
                                  const FlowState& U_plus, double s0,
                                  const GasParams& g, bool strong);
FunctionalWeights default_weights(const tracking::Trajectory& traj);

struct FunctionalReport {
  double x = 0.0;
  double L = 0.0, Q = 0.0, F = 0.0;
  double np_total = 0.0;
  double U_below_dev = 0.0, U_above_dev = 0.0;
  std::vector<double> L_m, Q_m;  // per generation order, entry m-1
};

double weighted_strength(const tracking::Front& f, bool below_shock,
                         const FunctionalWeights& w);

double interaction_potential(const tracking::CrossSection& cs,
                             const tracking::Trajectory& traj,
                             const FunctionalWeights& w);

FunctionalReport glimm_functional(const tracking::CrossSection& cs,
                                  const tracking::Trajectory& traj,
                                  const FunctionalWeights& w);

// Total variation of the section's weak part (the strong-shock jump is
// excluded; it is accounted through the U-diamond terms).
double tv_of_section(const tracking::CrossSection& cs);

struct AuditResult {
  struct Violation {
    double x = 0.0, dF = 0.0;
  };
  std::vector<Violation> violations;
  std::vector<std::array<double, 2>> F_series;  // (x, F(x+)) per event group
  std::vector<std::array<double, 2>> dF_series;
  double F0 = 0.0, F_end = 0.0, max_increase = 0.0;
  double np_max = 0.0;
  double tv_max = 0.0;
};

AuditResult monotonicity_audit(const tracking::Trajectory& traj,
                               const FunctionalWeights& w,
                               double tol_scale = 1e-12);

struct LedgerResult {
  std::vector<double> sup_L_m;
  std::vector<double> sup_Q_m;
  double eta = 0.0;        // fitted geometric decay ratio of sup_L_m
  int orders_seen = 0;
  double np_total_max = 0.0;
};

LedgerResult generation_ledger(const tracking::Trajectory& traj,
                               const FunctionalWeights& w, int max_order = 12);

// Discrete weak-form residual of the divergence identity against a test
// function vanishing near x = 0 and x = x_end; one entry per conserved
// component.
std::array<double, 4> conservation_residual(
    const tracking::Trajectory& traj,
    const std::function<double(double, double)>& testfn);

// Largest |b' rho u - rho v| along the approximate boundary (slip residual
// of the mass flux; zero up to rounding).
double boundary_mass_integrand_sup(const tracking::Trajectory& traj);

struct EntropyAudit {
  int shock_violations = 0;
  double min_shock_production = 0.0;  // most negative per-front production
  double contact_max_flux = 0.0;
  double rarefaction_defect = 0.0;    // sum of |flux jump| on rarefactions
  double total_production = 0.0;      // integrated over fronts and x
};

EntropyAudit entropy_audit(
    const tracking::Trajectory& traj,
    const std::function<double(double)>& a_of_S = nullptr);

}  // namespace wedgetrack::functionals

#endif
