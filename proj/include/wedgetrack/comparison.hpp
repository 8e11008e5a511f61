#ifndef WEDGETRACK_COMPARISON_HPP
#define WEDGETRACK_COMPARISON_HPP

#include <functional>
#include <vector>

#include "wedgetrack/lyapunov.hpp"
#include "wedgetrack/potential.hpp"
#include "wedgetrack/tracking.hpp"

namespace wedgetrack::comparison {

// Boundary-aligned profile of a potential run, lifted to Euler variables.
lyapunov::AlignedProfile lifted_profile(const potential::PfTrajectory& pt,
                                        double x);

// Y-distance between the Euler and potential solutions of one scenario at
// abscissa x (the shared boundary pressure contributes no tail term).
double compare_runs(const tracking::Trajectory& et,
                    const potential::PfTrajectory& pt, double x);

struct CubicScalingReport {
  std::vector<double> eps;
  std::vector<double> y_over_x;      // Y(x_ref)/x_ref per eps level
  std::vector<bool> excluded;        // below the noise floor
  double slope = 0.0;                // log-log fit over included levels
  double slope_lo = 0.0, slope_hi = 0.0;  // pairwise slope range
  double x_ref = 0.0;
  std::vector<double> x_list;        // linearity check at the largest eps
  std::vector<double> y_at_x;
  double linearity_max_dev = 0.0;    // max |(Y(x)/x)/(Y(xr)/xr) - 1|
  double noise_floor = 0.0;
};

// Runs both engines on family(eps) for each eps and regresses
// log(Y/x) against log(eps).
CubicScalingReport cubic_scaling_study(
    const std::function<Scenario(double)>& family,
    const std::vector<double>& eps_list, const std::vector<double>& x_list,
    int threads = 1);

// Semigroup defect: restart the Euler engine from the lifted potential
// cross-section at x, advance h, and measure the Y-distance rate.
struct DefectSample {
  double x = 0.0;
  double rate = 0.0;  // Y / h
  bool flagged = false;
};

struct DefectReport {
  std::vector<DefectSample> samples;
  double max_rate = 0.0;
};

DefectReport semigroup_defect(const potential::PfTrajectory& pt,
                              const Scenario& sc, double h,
                              const std::vector<double>& xs,
                              double restart_mu);

// One restarted Euler step from explicit lifted data (micro-test helper).
tracking::Trajectory euler_restart(const Scenario& sc,
                                   const lyapunov::AlignedProfile& data,
                                   double x0, double h, double restart_mu);

}  // namespace wedgetrack::comparison

#endif
