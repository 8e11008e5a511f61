#include "wedgetrack/comparison.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace wedgetrack::comparison {

using lyapunov::AlignedProfile;

AlignedProfile lifted_profile(const potential::PfTrajectory& pt, double x) {
  const auto cs = pt.section_at(x, true);
  AlignedProfile a;
  a.b = cs.b;
  a.states.push_back(potential::lift(cs.regions.front(), pt.pf));
  for (size_t i = 0; i < cs.positions.size(); ++i) {
    const double th = cs.positions[i] - cs.b;
    if (th < 0.0) {
      a.theta.push_back(th);
      a.states.push_back(potential::lift(cs.regions[i + 1], pt.pf));
    }
  }
  return a;
}

double compare_runs(const tracking::Trajectory& et,
                    const potential::PfTrajectory& pt, double x) {
  if (x > et.x_end || x > pt.x_end)
    throw std::invalid_argument("compare_runs: x beyond a run horizon");
  return lyapunov::y_distance(lyapunov::aligned_profile(et, x),
                              lifted_profile(pt, x));
}

CubicScalingReport cubic_scaling_study(
    const std::function<Scenario(double)>& family,
    const std::vector<double>& eps_list, const std::vector<double>& x_list,
    int threads) {
  CubicScalingReport rep;
  rep.eps = eps_list;
  rep.x_ref = x_list.back();
  rep.x_list = x_list;
  rep.y_over_x.assign(eps_list.size(), 0.0);
  rep.excluded.assign(eps_list.size(), false);

  std::vector<std::vector<double>> y_per_eps(eps_list.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t k = next.fetch_add(1);
      if (k >= eps_list.size()) return;
      Scenario sc = family(eps_list[k]);
      const auto et = tracking::run(sc);
      const auto pt = potential::run(sc);
      std::vector<double> ys;
      for (double x : x_list) ys.push_back(compare_runs(et, pt, x));
      y_per_eps[k] = ys;
    }
  };
  const int nthreads =
      std::max(1, std::min<int>(threads, static_cast<int>(eps_list.size())));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // the restart/solver tolerance noise keeps distances meaningful only
  // well above the kernel residuals
  rep.noise_floor = 1e-8;
  std::vector<std::array<double, 2>> pts;
  for (size_t k = 0; k < eps_list.size(); ++k) {
    const double y = y_per_eps[k].back();
    rep.y_over_x[k] = y / rep.x_ref;
    if (y < rep.noise_floor) {
      rep.excluded[k] = true;
      continue;
    }
    pts.push_back({std::log(eps_list[k]), std::log(rep.y_over_x[k])});
  }
  if (pts.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& p : pts) {
      sx += p[0];
      sy += p[1];
      sxx += p[0] * p[0];
      sxy += p[0] * p[1];
    }
    const double n = double(pts.size());
    rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    rep.slope_lo = 1e300;
    rep.slope_hi = -1e300;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
      const double s =
          (pts[i + 1][1] - pts[i][1]) / (pts[i + 1][0] - pts[i][0]);
      rep.slope_lo = std::min(rep.slope_lo, s);
      rep.slope_hi = std::max(rep.slope_hi, s);
    }
  }
  // linearity in x at the largest (first) eps level
  rep.y_at_x = y_per_eps.front();
  const double ref = rep.y_at_x.back() / rep.x_list.back();
  for (size_t i = 0; i < rep.x_list.size(); ++i) {
    const double r = rep.y_at_x[i] / rep.x_list[i];
    rep.linearity_max_dev =
        std::max(rep.linearity_max_dev, std::abs(r / ref - 1.0));
  }
  return rep;
}

tracking::Trajectory euler_restart(const Scenario& sc,
                                   const AlignedProfile& data, double x0,
                                   double h, double restart_mu) {
  tracking::RestartData rd;
  rd.b0 = data.b;
  for (size_t i = 0; i < data.theta.size(); ++i)
    rd.breaks.push_back(data.theta[i] + data.b);
  rd.states = data.states;
  rd.U_ref = sc.U_minus;

  TrackingParams P = sc.params;
  P.mu = restart_mu;
  P.x_max = h;
  P.delta = 0.0;
  P.nu = 0.0;
  P = P.with_defaults();
  // future boundary pressure from the scenario, shifted to the restart
  const int n0 = static_cast<int>(std::ceil(h / P.dx)) + 1;
  rd.pb_steps.resize(n0);
  for (int k = 0; k < n0; ++k) rd.pb_steps[k] = sc.pb(x0 + (k + 0.5) * P.dx);
  return tracking::run_weak_from_data(sc.gas, P, rd);
}

DefectReport semigroup_defect(const potential::PfTrajectory& pt,
                              const Scenario& sc, double h,
                              const std::vector<double>& xs,
                              double restart_mu) {
  DefectReport rep;
  for (double x : xs) {
    DefectSample s;
    s.x = x;
    try {
      const AlignedProfile w0 = lifted_profile(pt, x);
      const auto et = euler_restart(sc, w0, x, h, restart_mu);
      const AlignedProfile advanced = lyapunov::aligned_profile(et, h);
      const AlignedProfile target = lifted_profile(pt, x + h);
      s.rate = lyapunov::y_distance(advanced, target) / h;
    } catch (const std::exception&) {
      s.flagged = true;
    }
    if (!s.flagged) rep.max_rate = std::max(rep.max_rate, s.rate);
    rep.samples.push_back(s);
  }
  return rep;
}

}  // namespace wedgetrack::comparison
