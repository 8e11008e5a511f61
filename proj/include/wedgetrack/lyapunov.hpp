#ifndef WEDGETRACK_LYAPUNOV_HPP
#define WEDGETRACK_LYAPUNOV_HPP

#include <array>
#include <vector>

#include "wedgetrack/functionals.hpp"
#include "wedgetrack/tracking.hpp"

namespace wedgetrack::lyapunov {

// Weights of the two-solution functional. The c weights are per family
// and per region (both solutions above their shocks / mixed / both
// below); B is the nominal strength assigned to the strong 1-jump when
// the two solutions sit on opposite sides of their shocks.
struct LyapunovWeights {
  std::array<double, 4> c_u{0.25, 0.25, 0.25, 0.5};
  std::array<double, 4> c_m{0.0625, 0.0625, 0.0625, 0.0625};
  std::array<double, 4> c_l{0.25, 0.25, 0.25, 0.25};
  double B = 0.5;
  double kappa1 = 4.0;
  double kappa2 = 4.0;
  double c_b = 0.0625;
  double gamma0 = 0.0;  // measured product of (StabilitySecond2), diagnostic
};

LyapunovWeights default_lyapunov_weights(const tracking::Trajectory& traj,
                                         const functionals::FunctionalWeights& fw);

// Piecewise-constant solution profile extended above the boundary by the
// boundary state; breakpoints ascending, states one longer.
struct ExtendedProfile {
  double x = 0.0;
  double b = 0.0;
  double chi = 0.0;
  bool strong = false;
  std::vector<double> breaks;
  std::vector<FlowState> states;
  FlowState at(double y) const;
  int region_of(double y) const;  // +1 above own shock, -1 below
};

ExtendedProfile extend(const tracking::Trajectory& traj, double x,
                       bool right_limit = true);

struct HSample {
  double y_lo = 0.0, y_hi = 0.0;
  std::array<double, 4> h{};
  std::array<double, 4> q{};
  int region = 0;  // 0 both-above, 1 mixed, 2 both-below, 3 strong gap
  bool mirrored = false;
  bool ok = true;
  double residual = 0.0;
};

struct HDecomposition {
  double x = 0.0;
  std::vector<HSample> samples;
  std::array<double, 4> h_b{};
  double b_min = 0.0, b_max = 0.0;
  double worst_residual = 0.0;
  int flagged = 0;
};

// Shared scratch space: memoizes the 4-dimensional solves per state pair.
class HSolver {
 public:
  explicit HSolver(const GasParams& g) : g_(g) {}
  ~HSolver();
  HSolver(const HSolver&) = delete;
  HSolver& operator=(const HSolver&) = delete;
  // Solves H(h; base) = target; throws on Newton failure.
  std::array<double, 4> solve(const FlowState& base, const FlowState& target,
                              double* residual = nullptr) const;
  FlowState apply(const std::array<double, 4>& h, const FlowState& base) const;

 private:
  GasParams g_;
};

HDecomposition h_decompose(const ExtendedProfile& p1,
                           const ExtendedProfile& p2, const HSolver& hs,
                           const LyapunovWeights& w);

// Wave part of the modified Lyapunov functional at fixed x (the boundary
// history integral is accumulated by the audit).
double lyapunov_wave_part(const HDecomposition& hd, const ExtendedProfile& p1,
                          const ExtendedProfile& p2, const LyapunovWeights& w,
                          double q1_plus_q2);

struct LyapunovReport {
  double x = 0.0;
  double wave = 0.0;      // integral of W_i |q_i|
  double history = 0.0;   // c_b * int_0^x (|h_b1| + |h_b4|)
  double total = 0.0;
  double hb1 = 0.0, hb4 = 0.0;
  double w_min = 1.0, w_max = 1.0;  // range of the weights W_i
};

// The full two-solution functional at abscissa x: the weighted wave part
// plus the boundary history term accumulated on the merged event grid.
LyapunovReport lyapunov_functional(const tracking::Trajectory& t1,
                                   const tracking::Trajectory& t2, double x,
                                   const LyapunovWeights& w,
                                   const functionals::FunctionalWeights& fw);

struct StabilityReport {
  struct Entry {
    double x = 0.0;
    bool inner = false;   // inner-boundary event (multiplicative bound)
    double dF = 0.0;
    double alpha = 0.0;   // strength/jump controlling the inner bound
  };
  std::vector<Entry> events;
  std::vector<std::array<double, 2>> F_series;  // (x, total)
  double F0 = 0.0, F_end = 0.0;
  int outer_violations = 0;
  double max_outer_increase = 0.0;
  double max_inner_ratio = 0.0;  // dF / (alpha * F(x-))
  double boundary_history = 0.0;
  double y0 = 0.0, y_end = 0.0;  // Y-distances at 0 and x_end (p-tail 0)
};

StabilityReport stability_audit(const tracking::Trajectory& t1,
                                const tracking::Trajectory& t2,
                                const LyapunovWeights& w,
                                const functionals::FunctionalWeights& fw,
                                double tol_scale = 1e-11);

// ---- Y metric --------------------------------------------------------

struct AlignedProfile {
  double b = 0.0;
  std::vector<double> theta;  // ascending, negative breakpoints
  std::vector<FlowState> states;
};

AlignedProfile aligned_profile(const tracking::Trajectory& traj, double x);

// |b1-b2| + L1 distance of the aligned states below the boundary, plus an
// optional boundary-pressure tail term.
double y_distance(const AlignedProfile& a, const AlignedProfile& b,
                  double p_tail = 0.0);

}  // namespace wedgetrack::lyapunov

#endif
