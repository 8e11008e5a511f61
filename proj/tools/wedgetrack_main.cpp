// Command line front end: scenario runs, Euler-vs-potential comparison
// sweeps, refinement studies, and solution audits.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "wedgetrack/comparison.hpp"
#include "wedgetrack/csv.hpp"
#include "wedgetrack/functionals.hpp"
#include "wedgetrack/lyapunov.hpp"
#include "wedgetrack/potential.hpp"
#include "wedgetrack/scenario.hpp"
#include "wedgetrack/tracking.hpp"

namespace fs = std::filesystem;
using namespace wedgetrack;

namespace {

int thread_cap() {
  if (const char* env = std::getenv("WEDGETRACK_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

struct Overrides {
  double dx = 0.0, mu = 0.0, delta = 0.0, nu = 0.0, xmax = 0.0;
  std::string mode;

  void apply(Scenario& sc) const {
    if (dx > 0.0) sc.params.dx = dx;
    if (mu > 0.0) sc.params.mu = mu;
    if (delta > 0.0) sc.params.delta = delta;
    if (nu > 0.0) sc.params.nu = nu;
    if (xmax > 0.0) sc.params.x_max = xmax;
    if (!mode.empty()) {
      if (mode == "euler") sc.mode = RunMode::Euler;
      else if (mode == "potential") sc.mode = RunMode::Potential;
      else if (mode == "compare") sc.mode = RunMode::Compare;
      else throw std::invalid_argument("unknown mode: " + mode);
      validate_scenario(sc);
    }
  }
};

void add_overrides(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--dx", ov.dx, "boundary sampling step");
  cmd->add_option("--mu", ov.mu, "accuracy parameter");
  cmd->add_option("--delta", ov.delta, "max rarefaction front strength");
  cmd->add_option("--nu", ov.nu, "simplified-solver threshold");
  cmd->add_option("--xmax", ov.xmax, "simulation horizon");
  cmd->add_option("--mode", ov.mode, "euler | potential | compare");
}

void write_boundary_csv(const tracking::Trajectory& t, const fs::path& dir) {
  csv::Writer w(dir / "boundary.csv",
                {"x", "b", "b_slope", "chi", "s", "u_b", "v_b", "p_b", "rho_b"});
  for (const auto& seg : t.boundary)
    w.row({seg.x0, seg.y0, seg.slope, t.chi_at(seg.x0), t.s_at(seg.x0),
           seg.Ub.u, seg.Ub.v, seg.Ub.p, seg.Ub.rho});
  w.row({t.x_end, t.b_at(t.x_end), t.b_slope_at(t.x_end), t.chi_at(t.x_end),
         t.s_at(t.x_end), t.boundary_state_at(t.x_end).u,
         t.boundary_state_at(t.x_end).v, t.boundary_state_at(t.x_end).p,
         t.boundary_state_at(t.x_end).rho});
}

void write_functionals_csv(const tracking::Trajectory& t,
                           const functionals::FunctionalWeights& fw,
                           const fs::path& dir) {
  const auto audit = functionals::monotonicity_audit(t, fw);
  csv::Writer w(dir / "functionals.csv",
                {"x", "L", "Q", "F", "NP_total", "dF_at_event"});
  {
    const auto rep0 = functionals::glimm_functional(t.section_at(0.0), t, fw);
    w.row({0.0, rep0.L, rep0.Q, rep0.F, rep0.np_total, 0.0});
  }
  for (size_t i = 0; i < audit.F_series.size(); ++i) {
    const double x = audit.F_series[i][0];
    const auto rep = functionals::glimm_functional(t.section_at(x), t, fw);
    w.row({x, rep.L, rep.Q, rep.F, rep.np_total, audit.dF_series[i][1]});
  }
}

void write_events_csv(const tracking::Trajectory& t, const fs::path& dir) {
  csv::Writer w(dir / "events.csv",
                {"x", "y", "kind", "accurate", "family_a", "family_b",
                 "strength_a", "strength_b", "order_a", "order_b",
                 "np_emitted", "pressure_jump"});
  for (const auto& e : t.events)
    w.row({e.x, e.y, double(int(e.kind)), double(e.accurate),
           double(e.family_a), double(e.family_b), e.strength_a, e.strength_b,
           double(e.order_a), double(e.order_b), e.np_emitted,
           e.pressure_jump});
}

void write_section_csv(const tracking::Trajectory& t, double x,
                       const fs::path& path) {
  const auto cs = t.section_at(x);
  csv::Writer w(path, {"y_below", "u", "v", "p", "rho"});
  double prev = cs.positions.empty() ? cs.b - 1.0 : cs.positions.front() - 1.0;
  for (size_t i = 0; i < cs.regions.size(); ++i) {
    w.row({prev, cs.regions[i].u, cs.regions[i].v, cs.regions[i].p,
           cs.regions[i].rho});
    prev = i < cs.positions.size() ? cs.positions[i] : cs.b;
  }
}

void write_pf_boundary_csv(const potential::PfTrajectory& t,
                           const fs::path& dir) {
  csv::Writer w(dir / "boundary.csv", {"x", "b", "b_slope", "u_b", "v_b"});
  for (const auto& seg : t.boundary)
    w.row({seg.x0, seg.y0, seg.slope, seg.wb.u, seg.wb.v});
  w.row({t.x_end, t.b_at(t.x_end), t.boundary.back().slope,
         t.boundary_state_at(t.x_end).u, t.boundary_state_at(t.x_end).v});
}

int cmd_run(const std::string& path, const Overrides& ov,
            const std::string& out) {
  Scenario sc = load_scenario(path);
  ov.apply(sc);
  fs::create_directories(out);
  if (sc.mode == RunMode::Potential) {
    const auto t = potential::run(sc);
    write_pf_boundary_csv(t, out);
    std::cout << "potential run: " << t.events.size() << " events, b("
              << t.x_end << ") = " << csv::num(t.b_at(t.x_end)) << "\n";
    return 0;
  }
  const auto t = tracking::run(sc);
  const auto fw = functionals::default_weights(t);
  write_boundary_csv(t, out);
  write_functionals_csv(t, fw, out);
  write_events_csv(t, out);
  write_section_csv(t, t.x_end, fs::path(out) / "section.csv");
  std::cout << "run: " << t.events.size() << " events, " << t.segments.size()
            << " segments, b(" << t.x_end
            << ") = " << csv::num(t.b_at(t.x_end)) << ", s = "
            << csv::num(t.s_at(t.x_end)) << "\n";
  return 0;
}

int cmd_compare(const std::string& path, const Overrides& ov,
                const std::string& out, std::vector<double> eps_list,
                std::vector<double> x_list, bool plot) {
  Scenario base = load_scenario(path);
  ov.apply(base);
  if (base.mode != RunMode::Compare)
    throw std::invalid_argument("compare needs a compare-mode scenario");
  if (eps_list.empty()) eps_list = {0.02, 0.01, 0.005, 0.0025};
  if (x_list.empty()) x_list = {0.5 * base.params.x_max, base.params.x_max};

  auto family = [&](double eps) {
    Scenario sc = base;
    for (auto& b : sc.uinf_perturbation.boxes)
      for (auto& d : b.delta) d *= eps;
    for (auto& s : sc.uinf_perturbation.sines) s.amp *= eps;
    for (auto& b : sc.pb_perturbation.boxes)
      for (auto& d : b.delta) d *= eps;
    for (auto& s : sc.pb_perturbation.sines) s.amp *= eps;
    // mu tracks eps^3 so the scheme error sits below the signal
    sc.params.mu = std::min(sc.params.mu, eps * eps * eps / 10.0);
    validate_scenario(sc);
    return sc;
  };

  const auto rep =
      comparison::cubic_scaling_study(family, eps_list, x_list, thread_cap());
  fs::create_directories(out);
  csv::Writer w(fs::path(out) / "compare.csv",
                {"eps", "x", "Y", "Y_over_x", "excluded"});
  for (size_t k = 0; k < rep.eps.size(); ++k)
    w.row({rep.eps[k], rep.x_ref, rep.y_over_x[k] * rep.x_ref,
           rep.y_over_x[k], double(rep.excluded[k])});
  csv::Writer wl(fs::path(out) / "compare_linearity.csv", {"x", "Y"});
  for (size_t i = 0; i < rep.x_list.size(); ++i)
    wl.row({rep.x_list[i], rep.y_at_x[i]});
  std::cout << "cubic fit: slope = " << csv::num(rep.slope) << " (pairwise "
            << csv::num(rep.slope_lo) << " .. " << csv::num(rep.slope_hi)
            << "), linearity dev = " << csv::num(rep.linearity_max_dev)
            << "\n";
  if (plot) {
    std::ofstream gp(fs::path(out) / "plot.gp");
    gp << "set logscale xy\nset xlabel 'eps'\nset ylabel 'Y/x'\n"
       << "set datafile separator ','\n"
       << "plot 'compare.csv' every ::1 using 1:4 with linespoints title "
          "'measured', x**3 * "
       << csv::num(rep.y_over_x.front() /
                   (rep.eps.front() * rep.eps.front() * rep.eps.front()))
       << " title 'cubic'\n";
  }
  return 0;
}

int cmd_converge(const std::string& path, const Overrides& ov,
                 const std::string& out, int levels) {
  Scenario base = load_scenario(path);
  ov.apply(base);
  fs::create_directories(out);
  std::vector<tracking::Trajectory> runs;
  for (int lvl = 0; lvl < levels; ++lvl) {
    Scenario sc = base;
    sc.params.dx = base.params.dx / (1 << lvl);
    sc.params.mu = base.params.mu / (1 << lvl);
    sc.params.delta = base.params.delta > 0.0
                          ? base.params.delta / (1 << lvl)
                          : 0.0;
    runs.push_back(tracking::run(sc));
  }
  csv::Writer w(fs::path(out) / "converge.csv",
                {"level", "dx", "mu", "l1_diff_prev", "b_sup_diff_prev"});
  bool monotone = true;
  double prev_l1 = 0.0;
  for (int lvl = 0; lvl < levels; ++lvl) {
    double l1 = 0.0, bsup = 0.0;
    if (lvl > 0) {
      const auto a = lyapunov::aligned_profile(runs[lvl - 1], base.params.x_max);
      const auto b = lyapunov::aligned_profile(runs[lvl], base.params.x_max);
      l1 = lyapunov::y_distance(a, b);
      for (int k = 0; k <= 50; ++k) {
        const double x = base.params.x_max * k / 50.0;
        bsup = std::max(bsup,
                        std::abs(runs[lvl - 1].b_at(x) - runs[lvl].b_at(x)));
      }
      if (lvl > 1 && l1 > prev_l1) monotone = false;
      prev_l1 = l1;
    }
    w.row({double(lvl), base.params.dx / (1 << lvl),
           base.params.mu / (1 << lvl), l1, bsup});
    std::cout << "level " << lvl << ": dx = "
              << csv::num(base.params.dx / (1 << lvl))
              << (lvl ? (", L1 diff to previous = " + csv::num(l1) +
                         ", sup|db| = " + csv::num(bsup))
                      : std::string())
              << "\n";
  }
  std::cout << (monotone ? "successive differences decrease monotonically\n"
                         : "warning: differences not monotone\n");
  return monotone ? 0 : 1;
}

int cmd_audit(const std::string& path, const Overrides& ov,
              const std::string& out, const std::string& pair_path) {
  Scenario sc = load_scenario(path);
  ov.apply(sc);
  if (sc.mode == RunMode::Potential)
    throw std::invalid_argument("audit runs on euler/compare scenarios");
  const auto t = tracking::run(sc);
  const auto fw = functionals::default_weights(t);
  const auto audit = functionals::monotonicity_audit(t, fw);
  const auto ledger = functionals::generation_ledger(t, fw);
  const auto ea = functionals::entropy_audit(t);
  const double slip = functionals::boundary_mass_integrand_sup(t);

  fs::create_directories(out);
  csv::Writer w(fs::path(out) / "audit.csv", {"check", "value", "pass"});
  bool ok = true;
  auto line = [&](const std::string& name, double value, bool pass) {
    std::cout << (pass ? "[pass] " : "[FAIL] ") << name << " = "
              << csv::num(value) << "\n";
    w.row_mixed({name, csv::num(value), pass ? "1" : "0"});
    ok = ok && pass;
  };
  line("glimm_monotone_violations", double(audit.violations.size()),
       audit.violations.empty());
  line("glimm_F0", audit.F0, true);
  line("glimm_max_increase", audit.max_increase,
       audit.max_increase <= 1e-12 * std::max(audit.F0, 1e-30));
  line("np_total_max", audit.np_max, audit.np_max < t.params.mu);
  line("tv_max", audit.tv_max, true);
  line("ledger_eta", ledger.eta, ledger.orders_seen < 2 || ledger.eta < 1.0);
  line("entropy_shock_violations", double(ea.shock_violations),
       ea.shock_violations == 0);
  line("entropy_contact_flux", ea.contact_max_flux,
       ea.contact_max_flux < 1e-11);
  line("slip_mass_integrand", slip, slip < 1e-13);

  if (!pair_path.empty()) {
    Scenario sc2 = load_scenario(pair_path);
    ov.apply(sc2);
    const auto t2 = tracking::run(sc2);
    const auto lww = lyapunov::default_lyapunov_weights(t, fw);
    const auto rep = lyapunov::stability_audit(t, t2, lww, fw);
    csv::Writer lw_csv(fs::path(out) / "lyapunov.csv",
                       {"x", "F", "Y", "b_diff", "l1_states"});
    auto row_at = [&](double x, double F) {
      const auto a = lyapunov::aligned_profile(t, x);
      const auto b = lyapunov::aligned_profile(t2, x);
      double l1 = 0.0;
      const double y = lyapunov::y_distance(a, b);
      const double bd = std::abs(a.b - b.b);
      l1 = y - bd;
      lw_csv.row({x, F, y, bd, l1});
    };
    row_at(0.0, rep.F0);
    for (size_t i = 0; i < rep.F_series.size(); i += 8)
      row_at(rep.F_series[i][0], rep.F_series[i][1]);
    line("pair_outer_violations", double(rep.outer_violations),
         rep.outer_violations == 0);
    line("pair_Y_end", rep.y_end, true);
  }
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"event-driven front tracking for the supersonic wedge "
               "inverse problem"};
  app.require_subcommand(1);

  std::string scenario, out = "out";
  Overrides ov;
  std::vector<double> eps_list, x_list;
  int levels = 3;
  bool plot = false;

  auto* run = app.add_subcommand("run", "run one scenario and write CSVs");
  run->add_option("scenario", scenario)->required();
  run->add_option("--out", out, "output directory");
  add_overrides(run, ov);

  auto* cmp = app.add_subcommand("compare", "Euler vs potential cubic-law sweep");
  cmp->add_option("scenario", scenario)->required();
  cmp->add_option("--out", out, "output directory");
  cmp->add_option("--eps", eps_list, "perturbation scales");
  cmp->add_option("--x", x_list, "sample abscissas");
  cmp->add_flag("--plot", plot, "emit a gnuplot script");
  add_overrides(cmp, ov);

  auto* cv = app.add_subcommand("converge", "dyadic refinement study");
  cv->add_option("scenario", scenario)->required();
  cv->add_option("--out", out, "output directory");
  cv->add_option("--levels", levels, "number of dyadic levels");
  add_overrides(cv, ov);

  std::string pair_path;
  auto* au = app.add_subcommand("audit", "functional and entropy audits");
  au->add_option("scenario", scenario)->required();
  au->add_option("--out", out, "output directory");
  au->add_option("--pair", pair_path,
                 "second scenario: two-solution stability audit");
  add_overrides(au, ov);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(scenario, ov, out);
    if (cmp->parsed())
      return cmd_compare(scenario, ov, out, eps_list, x_list, plot);
    if (cv->parsed()) return cmd_converge(scenario, ov, out, levels);
    if (au->parsed()) return cmd_audit(scenario, ov, out, pair_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
