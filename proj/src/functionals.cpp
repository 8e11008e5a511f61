#include "wedgetrack/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "wedgetrack/curves.hpp"
#include "wedgetrack/riemann.hpp"

namespace wedgetrack::functionals {

namespace {

using tracking::CrossSection;
using tracking::Front;
using tracking::FrontKind;
using tracking::Trajectory;

// A front contributes one strength per family it carries; contacts carry
// the vortex-sheet and entropy-wave parts jointly.
struct Component {
  int front_index;
  int family;
  double b;      // weighted strength
  int order;
  bool is_shock;
  bool below_shock;
};

std::vector<Component> components(const CrossSection& cs,
                                  const FunctionalWeights& w) {
  std::vector<Component> out;
  for (size_t i = 0; i < cs.fronts.size(); ++i) {
    const Front& f = cs.fronts[i];
    if (f.strong()) continue;
    const bool below =
        w.strong && cs.strong_index >= 0 && static_cast<int>(i) < cs.strong_index;
    const double weight = below ? w.K_minus : 1.0;
    const bool shock = f.kind == FrontKind::Shock;
    if (f.kind == FrontKind::Contact) {
      out.push_back({static_cast<int>(i), 2, weight * f.strength, f.order,
                     false, below});
      out.push_back({static_cast<int>(i), 3, weight * f.strength3, f.order,
                     false, below});
    } else {
      out.push_back({static_cast<int>(i), f.family, weight * f.strength,
                     f.order, shock, below});
    }
  }
  return out;
}

bool approaching(const Component& lo, const Component& hi) {
  if (lo.front_index == hi.front_index) return false;
  if (lo.family > hi.family) return true;
  if (lo.family == hi.family && (lo.is_shock || hi.is_shock)) return true;
  return false;
}

bool approaches_strong(const Component& c, const CrossSection& cs) {
  if (cs.strong_index < 0) return false;
  if (c.below_shock) return true;
  return c.family == 1;
}

bool approaches_boundary(const Component& c) {
  return c.family == 4 || c.family == 5;
}

double future_pressure_jumps(const CrossSection& cs, const Trajectory& traj) {
  double sum = 0.0;
  const double dx = traj.params.dx;
  for (size_t i = 1; i < traj.pb_steps.size(); ++i) {
    const double xi = i * dx;
    const bool future = cs.right_limit ? (xi > cs.x) : (xi >= cs.x);
    if (future) sum += std::abs(traj.pb_steps[i] - traj.pb_steps[i - 1]);
  }
  return sum;
}

double fit_decay_ratio(const std::vector<double>& sup, int* orders_seen) {
  // least squares of ln(sup_m) against m over the positive entries
  std::vector<std::array<double, 2>> pts;
  for (size_t m = 0; m < sup.size(); ++m)
    if (sup[m] > 0.0) pts.push_back({double(m + 1), std::log(sup[m])});
  if (orders_seen) *orders_seen = static_cast<int>(pts.size());
  if (pts.size() < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto& p : pts) {
    sx += p[0];
    sy += p[1];
    sxx += p[0] * p[0];
    sxy += p[0] * p[1];
  }
  const double n = double(pts.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return std::exp(slope);
}

double simpson_on_segment(const std::function<double(double)>& f, double a,
                          double b, int n = 8) {
  if (!(b > a)) return 0.0;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

FunctionalWeights measure_weights(const FlowState& Um, const FlowState& Up,
                                  double s0, const GasParams& g, bool strong) {
  FunctionalWeights w;
  w.strong = strong;
  const double h = 1e-5;
  // C1: largest column 1-norm of dPhi/dalpha (both reference states).
  for (const FlowState& U : {Um, Up}) {
    for (int j = 0; j < 4; ++j) {
      std::array<double, 4> ap{}, am{};
      ap[j] = h;
      am[j] = -h;
      const FlowState a = curves::phi(ap, U, g);
      const FlowState b = curves::phi(am, U, g);
      w.C1 = std::max(w.C1, norm1(a, b) / (2.0 * h));
    }
  }
  if (!strong) {
    w.K_minus = 1.0;
    return w;
  }
  // K_b4: reflection coefficient at the background boundary state.
  {
    const double d_p = riemann::boundary_reflection(Up, 0.0, 0.0, h, g);
    const double d_m = riemann::boundary_reflection(Up, 0.0, 0.0, -h, g);
    w.Kb4 = (d_p - d_m) / (2.0 * h);
  }
  // K_s4 from the above interaction, Khat matrix from the below one.
  {
    const auto p = riemann::strong_interaction_above(Um, s0, {0, 0, 0}, h, g);
    const auto m = riemann::strong_interaction_above(Um, s0, {0, 0, 0}, -h, g);
    w.Ks4 = (p.deltas[2] - m.deltas[2]) / (2.0 * h);
  }
  for (int i = 0; i < 4; ++i) {
    std::array<double, 4> ap{}, am{};
    ap[i] = h;
    am[i] = -h;
    const auto p = riemann::strong_interaction_below(Um, ap, s0, {0, 0, 0}, g);
    const auto m = riemann::strong_interaction_below(Um, am, s0, {0, 0, 0}, g);
    for (int j = 0; j < 3; ++j)
      w.Khat_max = std::max(w.Khat_max,
                            std::abs((p.deltas[j] - m.deltas[j]) / (2.0 * h)));
  }
  // C2: sensitivity of G(s0; .) to the below state along wave curves.
  for (int i = 0; i < 4; ++i) {
    std::array<double, 4> ap{}, am{};
    ap[i] = h;
    am[i] = -h;
    const FlowState a =
        curves::strong_shock_by_speed(s0, curves::phi(ap, Um, g), g);
    const FlowState b =
        curves::strong_shock_by_speed(s0, curves::phi(am, Um, g), g);
    w.C2 = std::max(w.C2, norm1(a, b) / (2.0 * h));
  }
  w.K_minus = 2.0 * w.Khat_max + 4.0 * w.C2;
  const double lo = std::max(0.5, std::abs(w.Ks4));
  const double hi = std::min(1.0, 1.0 / std::max(std::abs(w.Kb4), 1e-12));
  w.Ks = (lo < hi) ? 0.5 * (lo + hi) : 0.75;
  return w;
}

FunctionalWeights default_weights(const Trajectory& traj) {
  return measure_weights(traj.U_minus_ref, traj.U_plus_ref, traj.s0_ref,
                         traj.gas, traj.strong_mode);
}

double weighted_strength(const Front& f, bool below_shock,
                         const FunctionalWeights& w) {
  const double weight = (w.strong && below_shock) ? w.K_minus : 1.0;
  return weight * f.total_strength();
}

double interaction_potential(const CrossSection& cs, const Trajectory& traj,
                             const FunctionalWeights& w) {
  const auto comp = components(cs, w);
  double q = w.K0 * future_pressure_jumps(cs, traj);
  for (const auto& c : comp) {
    if (w.strong && approaches_strong(c, cs)) q += w.Ks * std::abs(c.b);
    if (approaches_boundary(c)) q += std::abs(c.b);
  }
  for (size_t i = 0; i < comp.size(); ++i)
    for (size_t j = i + 1; j < comp.size(); ++j)
      if (approaching(comp[i], comp[j]))
        q += w.K * std::abs(comp[i].b) * std::abs(comp[j].b);
  return q;
}

FunctionalReport glimm_functional(const CrossSection& cs,
                                  const Trajectory& traj,
                                  const FunctionalWeights& w) {
  FunctionalReport rep;
  rep.x = cs.x;
  const auto comp = components(cs, w);
  int max_order = 0;
  for (const auto& c : comp) {
    rep.L += std::abs(c.b);
    max_order = std::max(max_order, c.order);
  }
  for (const auto& f : cs.fronts)
    if (f.kind == FrontKind::NonPhysical) rep.np_total += f.strength;
  rep.Q = interaction_potential(cs, traj, w);
  if (w.strong && cs.strong_index >= 0 && !traj.shock.empty()) {
    const FlowState Uinf_minus = traj.shock.front().below;
    const FlowState Uinf_plus = traj.shock.front().above;
    rep.U_below_dev = norm1(cs.regions[cs.strong_index], Uinf_minus);
    rep.U_above_dev = norm1(cs.regions[cs.strong_index + 1], Uinf_plus);
  }
  rep.F = rep.L + w.KK * rep.Q + rep.U_below_dev + rep.U_above_dev;

  rep.L_m.assign(max_order, 0.0);
  rep.Q_m.assign(max_order, 0.0);
  for (const auto& c : comp)
    for (int m = 1; m <= c.order; ++m) rep.L_m[m - 1] += std::abs(c.b);
  for (int m = 1; m <= max_order; ++m) {
    double qm = 0.0;
    for (const auto& c : comp) {
      if (c.order < m) continue;
      if (w.strong && approaches_strong(c, cs)) qm += w.Ks * std::abs(c.b);
      if (approaches_boundary(c)) qm += std::abs(c.b);
    }
    for (size_t i = 0; i < comp.size(); ++i)
      for (size_t j = i + 1; j < comp.size(); ++j)
        if (std::max(comp[i].order, comp[j].order) >= m &&
            approaching(comp[i], comp[j]))
          qm += w.K * std::abs(comp[i].b) * std::abs(comp[j].b);
    rep.Q_m[m - 1] = qm;
  }
  return rep;
}

double tv_of_section(const CrossSection& cs) {
  double tv = 0.0;
  for (size_t i = 0; i < cs.fronts.size(); ++i) {
    if (cs.fronts[i].strong()) continue;
    tv += norm1(cs.regions[i + 1], cs.regions[i]);
  }
  return tv;
}

AuditResult monotonicity_audit(const Trajectory& traj,
                               const FunctionalWeights& w, double tol_scale) {
  AuditResult out;
  {
    const auto rep0 = glimm_functional(traj.section_at(0.0, true), traj, w);
    out.F0 = rep0.F;
    out.np_max = rep0.np_total;
    out.tv_max = tv_of_section(traj.section_at(0.0, true));
  }
  const double tol = tol_scale * std::max(out.F0, 1e-30);
  size_t i = 0;
  while (i < traj.events.size()) {
    const double x = traj.events[i].x;
    size_t j = i;
    while (j < traj.events.size() && traj.events[j].x == x) ++j;
    const auto before = glimm_functional(traj.section_at(x, false), traj, w);
    const auto cs_after = traj.section_at(x, true);
    const auto after = glimm_functional(cs_after, traj, w);
    const double dF = after.F - before.F;
    out.F_series.push_back({x, after.F});
    out.dF_series.push_back({x, dF});
    if (dF > tol) out.violations.push_back({x, dF});
    out.max_increase = std::max(out.max_increase, dF);
    out.np_max = std::max(out.np_max, after.np_total);
    out.tv_max = std::max(out.tv_max, tv_of_section(cs_after));
    out.F_end = after.F;
    i = j;
  }
  if (out.F_series.empty()) {
    out.F_end = out.F0;
  }
  return out;
}

LedgerResult generation_ledger(const Trajectory& traj,
                               const FunctionalWeights& w, int max_order) {
  LedgerResult out;
  out.sup_L_m.assign(max_order, 0.0);
  out.sup_Q_m.assign(max_order, 0.0);
  auto absorb = [&](const CrossSection& cs) {
    const auto rep = glimm_functional(cs, traj, w);
    for (size_t m = 0; m < rep.L_m.size() && m < out.sup_L_m.size(); ++m) {
      out.sup_L_m[m] = std::max(out.sup_L_m[m], rep.L_m[m]);
      out.sup_Q_m[m] = std::max(out.sup_Q_m[m], rep.Q_m[m]);
    }
    out.np_total_max = std::max(out.np_total_max, rep.np_total);
  };
  absorb(traj.section_at(0.0, true));
  size_t i = 0;
  while (i < traj.events.size()) {
    const double x = traj.events[i].x;
    while (i < traj.events.size() && traj.events[i].x == x) ++i;
    absorb(traj.section_at(x, true));
  }
  while (!out.sup_L_m.empty() && out.sup_L_m.back() == 0.0) {
    out.sup_L_m.pop_back();
    out.sup_Q_m.pop_back();
  }
  out.eta = fit_decay_ratio(out.sup_L_m, &out.orders_seen);
  return out;
}

std::array<double, 4> conservation_residual(
    const Trajectory& traj,
    const std::function<double(double, double)>& testfn) {
  std::array<double, 4> res{};
  const GasParams g = traj.gas;
  for (const auto& s : traj.segments) {
    const double x1 = std::min(s.x1, traj.x_end);
    if (!(x1 > s.x0)) continue;
    const auto Wb = gas::flux_w(s.below, g), Wa = gas::flux_w(s.above, g);
    const auto Hb = gas::flux_h(s.below, g), Ha = gas::flux_h(s.above, g);
    for (int k = 0; k < 4; ++k) {
      const double jump = s.speed * (Wa[k] - Wb[k]) - (Ha[k] - Hb[k]);
      if (jump == 0.0) continue;
      const double integral = simpson_on_segment(
          [&](double x) { return testfn(x, s.y_at(x)); }, s.x0, x1);
      res[k] += jump * integral;
    }
  }
  for (size_t i = 0; i < traj.boundary.size(); ++i) {
    const auto& b = traj.boundary[i];
    const double x1 = (i + 1 < traj.boundary.size()) ? traj.boundary[i + 1].x0
                                                     : traj.x_end;
    if (!(x1 > b.x0)) continue;
    const auto W = gas::flux_w(b.Ub, g);
    const auto H = gas::flux_h(b.Ub, g);
    for (int k = 0; k < 4; ++k) {
      const double flux = b.slope * W[k] - H[k];
      if (flux == 0.0) continue;
      const double integral = simpson_on_segment(
          [&](double x) { return testfn(x, b.y0 + b.slope * (x - b.x0)); },
          b.x0, x1);
      res[k] += flux * integral;
    }
  }
  return res;
}

double boundary_mass_integrand_sup(const Trajectory& traj) {
  double sup = 0.0;
  for (const auto& b : traj.boundary)
    sup = std::max(sup,
                   std::abs(b.slope * b.Ub.rho * b.Ub.u - b.Ub.rho * b.Ub.v));
  return sup;
}

EntropyAudit entropy_audit(const Trajectory& traj,
                           const std::function<double(double)>& a_of_S) {
  EntropyAudit out;
  const GasParams g = traj.gas;
  auto a = a_of_S ? a_of_S : [](double S) { return S; };
  out.min_shock_production = 0.0;
  for (const auto& s : traj.segments) {
    const double len = std::min(s.x1, traj.x_end) - s.x0;
    if (!(len > 0.0)) continue;
    const double ab = a(gas::entropy(s.below, g));
    const double aa = a(gas::entropy(s.above, g));
    // production per unit x: [rho v a] - ydot [rho u a]
    const double prod =
        (s.above.rho * s.above.v * aa - s.below.rho * s.below.v * ab) -
        s.speed * (s.above.rho * s.above.u * aa - s.below.rho * s.below.u * ab);
    out.total_production += prod * len;
    switch (s.kind) {
      case FrontKind::Shock:
      case FrontKind::StrongShock: {
        const double scale =
            std::abs(s.above.rho * s.above.u) + std::abs(s.below.rho * s.below.u);
        if (prod < -1e-12 * std::max(scale, 1.0)) ++out.shock_violations;
        out.min_shock_production = std::min(out.min_shock_production, prod);
        break;
      }
      case FrontKind::Contact:
        out.contact_max_flux = std::max(out.contact_max_flux, std::abs(prod));
        break;
      case FrontKind::Rarefaction:
        out.rarefaction_defect += std::abs(prod);
        break;
      case FrontKind::NonPhysical:
        break;
    }
  }
  return out;
}

}  // namespace wedgetrack::functionals
