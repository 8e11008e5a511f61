#include "wedgetrack/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <unordered_map>

#include "wedgetrack/curves.hpp"
#include "wedgetrack/numerics.hpp"

namespace wedgetrack::lyapunov {

using tracking::CrossSection;
using tracking::FrontKind;
using tracking::Trajectory;

LyapunovWeights default_lyapunov_weights(
    const Trajectory& traj, const functionals::FunctionalWeights& fw) {
  LyapunovWeights w;
  if (!traj.strong_mode) return w;
  const GasParams g = traj.gas;
  const double l4 = gas::eigenvalue(traj.U_plus_ref, 4, g);
  const double l1 = gas::eigenvalue(traj.U_plus_ref, 1, g);
  const double ratio = std::abs((l4 - traj.s0_ref) / (l1 - traj.s0_ref));
  w.gamma0 = std::abs(fw.Ks4) * (w.c_u[3] / w.c_u[0]) * ratio;
  while (w.gamma0 >= 0.9 && w.c_u[3] > w.c_u[0] * 1.19) {
    w.c_u[3] *= 0.840896415253715;  // 2^(-1/4) steps of the grid search
    w.gamma0 = std::abs(fw.Ks4) * (w.c_u[3] / w.c_u[0]) * ratio;
  }
  return w;
}

// ---- extended profiles -----------------------------------------------

FlowState ExtendedProfile::at(double y) const {
  if (y >= b) return states.back();
  const size_t i =
      std::upper_bound(breaks.begin(), breaks.end(), y) - breaks.begin();
  return states[i];
}

int ExtendedProfile::region_of(double y) const {
  if (!strong) return 1;
  return y < chi ? -1 : 1;
}

ExtendedProfile extend(const Trajectory& traj, double x, bool right_limit) {
  const CrossSection cs = traj.section_at(x, right_limit);
  ExtendedProfile p;
  p.x = x;
  p.b = cs.b;
  p.chi = cs.chi;
  p.strong = traj.strong_mode;
  p.breaks = cs.positions;
  p.states = cs.regions;
  p.breaks.push_back(cs.b);
  p.states.push_back(cs.Ub);  // constant extension above the boundary
  return p;
}

// ---- H map and its inverse -------------------------------------------

namespace {

struct PairKey {
  std::array<double, 8> v;
  bool operator==(const PairKey& o) const {
    return std::memcmp(v.data(), o.v.data(), sizeof(v)) == 0;
  }
};

struct PairKeyHash {
  size_t operator()(const PairKey& k) const {
    // FNV-1a over the raw bytes
    const unsigned char* p = reinterpret_cast<const unsigned char*>(k.v.data());
    size_t h = 1469598103934665603ull;
    for (size_t i = 0; i < sizeof(k.v); ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
    return h;
  }
};

std::unordered_map<
    const void*, std::unordered_map<PairKey, std::array<double, 4>, PairKeyHash>>&
cache_store() {
  static std::unordered_map<
      const void*,
      std::unordered_map<PairKey, std::array<double, 4>, PairKeyHash>>
      store;
  return store;
}

std::unordered_map<PairKey, std::array<double, 4>, PairKeyHash>& cache_of(
    const void* self) {
  return cache_store()[self];
}

}  // namespace

HSolver::~HSolver() { cache_store().erase(this); }

FlowState HSolver::apply(const std::array<double, 4>& h,
                         const FlowState& base) const {
  FlowState U = curves::shock_curve(base, 1, h[0], g_).state;
  U = curves::contact_curve(U, h[1], h[2]);
  return curves::shock_curve(U, 4, h[3], g_).state;
}

std::array<double, 4> HSolver::solve(const FlowState& base,
                                     const FlowState& target,
                                     double* residual) const {
  auto& cache = cache_of(this);
  const PairKey key{{base.u, base.v, base.p, base.rho, target.u, target.v,
                     target.p, target.rho}};
  if (auto it = cache.find(key); it != cache.end()) {
    if (residual) *residual = 0.0;
    return it->second;
  }
  auto F = [&](const std::array<double, 4>& h) -> std::array<double, 4> {
    const FlowState U = apply(h, base);
    return {U.u - target.u, U.v - target.v, U.p - target.p,
            U.rho - target.rho};
  };
  // The 1-leg carries the pressure gap; contacts take direction and
  // density; the small 4-leg is left to Newton.
  std::array<double, 4> h0{};
  const double dp = target.p - base.p;
  if (std::abs(dp) > 1e-14) {
    auto fp = [&](double h1) {
      return curves::shock_curve(base, 1, h1, g_).state.p - target.p;
    };
    const double dir = dp > 0 ? -1.0 : 1.0;
    try {
      const auto [a, b] = num::bracket_from(
          fp, 0.0, dir * 1.2, std::max(1e-10, 0.05 * std::abs(dp)));
      h0[0] = (a == b) ? a : num::brent(fp, a, b);
    } catch (const std::exception&) {
      h0[0] = 0.0;
    }
  }
  const FlowState mid = curves::shock_curve(base, 1, h0[0], g_).state;
  h0[1] = 0.5 * std::log((target.u * target.u + target.v * target.v) /
                         (mid.u * mid.u + mid.v * mid.v));
  h0[2] = std::log(target.rho / mid.rho);
  auto res = num::newton<4>(F, h0, 1e-11, 60);
  if (!res.converged)
    throw std::runtime_error("h_decompose: Newton failed (residual " +
                             std::to_string(res.residual) + ")");
  if (residual) *residual = res.residual;
  cache.emplace(key, res.x);
  return res.x;
}

// ---- decomposition ----------------------------------------------------

HDecomposition h_decompose(const ExtendedProfile& p1,
                           const ExtendedProfile& p2, const HSolver& hs,
                           const LyapunovWeights& w) {
  HDecomposition hd;
  hd.x = p1.x;
  hd.b_min = std::min(p1.b, p2.b);
  hd.b_max = std::max(p1.b, p2.b);

  std::vector<double> mesh;
  mesh.insert(mesh.end(), p1.breaks.begin(), p1.breaks.end());
  mesh.insert(mesh.end(), p2.breaks.begin(), p2.breaks.end());
  if (p1.strong) mesh.push_back(p1.chi);
  if (p2.strong) mesh.push_back(p2.chi);
  mesh.push_back(hd.b_max);
  std::sort(mesh.begin(), mesh.end());
  mesh.erase(std::unique(mesh.begin(), mesh.end()), mesh.end());
  const double lo = mesh.empty() ? -1.0 : mesh.front() - 1.0;
  mesh.insert(mesh.begin(), lo);

  for (size_t i = 0; i + 1 < mesh.size(); ++i) {
    HSample s;
    s.y_lo = mesh[i];
    s.y_hi = mesh[i + 1];
    if (!(s.y_hi > s.y_lo)) continue;
    const double ym = 0.5 * (s.y_lo + s.y_hi);
    const FlowState U1 = p1.at(ym);
    const FlowState U2 = p2.at(ym);
    const int r1 = p1.region_of(ym), r2 = p2.region_of(ym);
    const std::array<double, 4>* c = &w.c_u;
    if (r1 != r2) {
      s.region = 3;
      c = &w.c_m;
    } else if (r1 < 0) {
      s.region = 2;
      c = &w.c_l;
    }
    try {
      if (r1 > 0 && r2 < 0) {
        s.mirrored = true;  // base must be the below-type state
        s.h = hs.solve(U2, U1, &s.residual);
      } else {
        s.h = hs.solve(U1, U2, &s.residual);
      }
    } catch (const std::exception&) {
      s.ok = false;
      ++hd.flagged;
      hd.samples.push_back(s);
      continue;
    }
    hd.worst_residual = std::max(hd.worst_residual, s.residual);
    for (int k = 0; k < 4; ++k) s.q[k] = (*c)[k] * s.h[k];
    if (s.region == 3) s.q[0] = w.B;  // the large 1-jump counts as B
    hd.samples.push_back(s);
  }

  hd.h_b = hs.solve(p1.at(hd.b_min), p2.at(hd.b_max), nullptr);
  return hd;
}

// ---- the functional ----------------------------------------------------

namespace {

struct WaveInfo {
  double y = 0.0;
  int family = 0;
  double strength = 0.0;
  int from_run = 0;
  bool above_type = false;
  bool below_type = false;
};

std::vector<WaveInfo> collect_waves(const Trajectory& t, double x,
                                    bool right_limit, int run_id) {
  std::vector<WaveInfo> out;
  const CrossSection cs = t.section_at(x, right_limit);
  for (size_t i = 0; i < cs.fronts.size(); ++i) {
    const auto& f = cs.fronts[i];
    if (f.strong() || f.kind == FrontKind::NonPhysical) continue;
    const bool below = t.strong_mode && cs.strong_index >= 0 &&
                       static_cast<int>(i) < cs.strong_index;
    WaveInfo base;
    base.y = cs.positions[i];
    base.family = f.family;
    base.strength = std::abs(f.strength);
    base.from_run = run_id;
    base.above_type = !below;
    base.below_type = below;
    if (f.kind == FrontKind::Contact) {
      base.family = 2;
      out.push_back(base);
      base.family = 3;
      base.strength = std::abs(f.strength3);
      out.push_back(base);
    } else {
      out.push_back(base);
    }
  }
  return out;
}

// A_i(y): total strength of the waves of both solutions approaching the
// i-wave of the decomposition at height y.
double a_weight(const std::vector<WaveInfo>& waves, double y, int i,
                double q_i, int region, double B_eff) {
  double bsum = 0.0, csum = 0.0, fsum = 0.0;
  for (const auto& wv : waves) {
    if (wv.y < y) {
      if (wv.family > i && wv.family <= 4) bsum += wv.strength;
      if (wv.family == i) {
        if (q_i < 0.0 && wv.from_run == 1) csum += wv.strength;
        if (q_i > 0.0 && wv.from_run == 2) csum += wv.strength;
      }
      if (i == 1 && wv.family == 1 && wv.below_type) fsum += wv.strength;
    } else {
      if (wv.family < i && wv.family >= 1) bsum += wv.strength;
      if (wv.family == i) {
        if (q_i < 0.0 && wv.from_run == 2) csum += wv.strength;
        if (q_i > 0.0 && wv.from_run == 1) csum += wv.strength;
      }
      if (i == 1 && wv.family == 1 && wv.above_type) fsum += wv.strength;
    }
  }
  double d = B_eff;
  const bool strong_gap = region == 3;
  const bool both_above = region == 0;
  if ((strong_gap && i == 1) || (both_above && (i == 2 || i == 3))) d = 0.0;
  return bsum + d + (strong_gap && i == 1 ? fsum : csum);
}

struct WaveEval {
  double wave = 0.0;
  std::array<double, 4> h_b{};
  double w_min = 1e300, w_max = 1.0;
};

WaveEval wave_part(const Trajectory& t1, const Trajectory& t2, double x,
                   bool right, const LyapunovWeights& w,
                   const functionals::FunctionalWeights& fw,
                   const HSolver& hs) {
  const ExtendedProfile p1 = extend(t1, x, right);
  const ExtendedProfile p2 = extend(t2, x, right);
  const HDecomposition hd = h_decompose(p1, p2, hs, w);
  const double q12 =
      functionals::interaction_potential(t1.section_at(x, right), t1, fw) +
      functionals::interaction_potential(t2.section_at(x, right), t2, fw);
  auto waves = collect_waves(t1, x, right, 1);
  const auto w2 = collect_waves(t2, x, right, 2);
  waves.insert(waves.end(), w2.begin(), w2.end());
  const double B_eff = (p1.strong || p2.strong) ? w.B : 0.0;
  WaveEval out;
  out.h_b = hd.h_b;
  for (const auto& s : hd.samples) {
    if (!s.ok) continue;
    const double ym = 0.5 * (s.y_lo + s.y_hi);
    const double len = s.y_hi - s.y_lo;
    for (int i = 0; i < 4; ++i) {
      const double Ai = a_weight(waves, ym, i + 1, s.q[i], s.region, B_eff);
      const double Wi = 1.0 + w.kappa1 * Ai + w.kappa2 * q12;
      out.w_min = std::min(out.w_min, Wi);
      out.w_max = std::max(out.w_max, Wi);
      out.wave += Wi * std::abs(s.q[i]) * len;
    }
  }
  if (out.w_min > out.w_max) out.w_min = out.w_max;
  return out;
}

}  // namespace

LyapunovReport lyapunov_functional(const Trajectory& t1, const Trajectory& t2,
                                   double x, const LyapunovWeights& w,
                                   const functionals::FunctionalWeights& fw) {
  HSolver hs(t1.gas);
  LyapunovReport rep;
  rep.x = x;
  // boundary history on the merged event grid up to x
  std::vector<double> xs{0.0};
  for (const auto& e : t1.events)
    if (e.x < x) xs.push_back(e.x);
  for (const auto& e : t2.events)
    if (e.x < x) xs.push_back(e.x);
  xs.push_back(x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  double hist = 0.0;
  std::array<double, 4> hb_prev{};
  for (size_t i = 0; i < xs.size(); ++i) {
    const double xe = xs[i];
    const WaveEval we = wave_part(t1, t2, xe, true, w, fw, hs);
    if (i > 0)
      hist += w.c_b * 0.5 *
              ((std::abs(hb_prev[0]) + std::abs(hb_prev[3])) +
               (std::abs(we.h_b[0]) + std::abs(we.h_b[3]))) *
              (xe - xs[i - 1]);
    hb_prev = we.h_b;
    if (xe == x) {
      rep.wave = we.wave;
      rep.w_min = we.w_min;
      rep.w_max = we.w_max;
      rep.hb1 = we.h_b[0];
      rep.hb4 = we.h_b[3];
    }
  }
  rep.history = hist;
  rep.total = rep.wave + rep.history;
  return rep;
}

double lyapunov_wave_part(const HDecomposition& hd, const ExtendedProfile& p1,
                          const ExtendedProfile& p2, const LyapunovWeights& w,
                          double q1_plus_q2) {
  // Unweighted-by-A variant used for quick equivalence checks: every
  // W_i >= 1, so this is a lower bound of the full functional.
  (void)p1;
  (void)p2;
  double total = 0.0;
  for (const auto& s : hd.samples) {
    if (!s.ok) continue;
    const double len = s.y_hi - s.y_lo;
    for (int i = 0; i < 4; ++i)
      total += (1.0 + w.kappa2 * q1_plus_q2) * std::abs(s.q[i]) * len;
  }
  return total;
}

StabilityReport stability_audit(const Trajectory& t1, const Trajectory& t2,
                                const LyapunovWeights& w,
                                const functionals::FunctionalWeights& fw,
                                double tol_scale) {
  StabilityReport rep;
  HSolver hs(t1.gas);

  std::vector<double> xs;
  for (const auto& e : t1.events) xs.push_back(e.x);
  for (const auto& e : t2.events) xs.push_back(e.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  const WaveEval first = wave_part(t1, t2, 0.0, true, w, fw, hs);
  rep.F0 = first.wave;
  double hist = 0.0, x_prev = 0.0;
  std::array<double, 4> hb_prev = first.h_b;
  double running = rep.F0;

  for (double x : xs) {
    const WaveEval before = wave_part(t1, t2, x, false, w, fw, hs);
    hist += w.c_b * 0.5 *
            ((std::abs(hb_prev[0]) + std::abs(hb_prev[3])) +
             (std::abs(before.h_b[0]) + std::abs(before.h_b[3]))) *
            (x - x_prev);
    const WaveEval after = wave_part(t1, t2, x, true, w, fw, hs);
    const double dF = after.wave - before.wave;

    const double b1 = t1.b_at(x), b2 = t2.b_at(x);
    const int inner_run = b1 <= b2 ? 1 : 2;
    bool inner = false;
    double alpha = 0.0;
    auto scan = [&](const Trajectory& t, int run_id) {
      for (const auto& e : t.events) {
        if (e.x != x) continue;
        using K = tracking::EventRecord::Kind;
        const bool boundary_event = e.kind == K::BoundaryReflect ||
                                    e.kind == K::BoundaryCross ||
                                    e.kind == K::PressureStep;
        if (boundary_event && run_id == inner_run) {
          inner = true;
          alpha = std::max(alpha, std::max(std::abs(e.pressure_jump),
                                           std::abs(e.strength_a)));
        }
      }
    };
    scan(t1, 1);
    scan(t2, 2);

    rep.events.push_back({x, inner, dF, alpha});
    const double tol =
        tol_scale * std::max(rep.F0, before.wave) + 1e-15;
    if (!inner) {
      if (dF > tol) ++rep.outer_violations;
      rep.max_outer_increase = std::max(rep.max_outer_increase, dF);
    } else if (alpha > 0.0 && before.wave > 0.0 && dF > tol) {
      rep.max_inner_ratio =
          std::max(rep.max_inner_ratio, dF / (alpha * before.wave));
    }
    running = after.wave + hist;
    rep.F_series.push_back({x, running});
    x_prev = x;
    hb_prev = after.h_b;
  }
  rep.boundary_history = hist;
  rep.F_end = rep.F_series.empty() ? rep.F0 : rep.F_series.back()[1];

  rep.y0 = y_distance(aligned_profile(t1, 0.0), aligned_profile(t2, 0.0));
  const double xe = std::min(t1.x_end, t2.x_end);
  rep.y_end = y_distance(aligned_profile(t1, xe), aligned_profile(t2, xe));
  return rep;
}

// ---- Y metric ---------------------------------------------------------

AlignedProfile aligned_profile(const Trajectory& traj, double x) {
  const ExtendedProfile p = extend(traj, x, true);
  AlignedProfile a;
  a.b = p.b;
  a.states.push_back(p.states.front());
  for (size_t i = 0; i < p.breaks.size(); ++i) {
    const double th = p.breaks[i] - p.b;
    if (th < 0.0) {
      a.theta.push_back(th);
      a.states.push_back(p.states[i + 1]);
    }
  }
  return a;
}

double y_distance(const AlignedProfile& a, const AlignedProfile& b,
                  double p_tail) {
  double d = std::abs(a.b - b.b) + p_tail;
  std::vector<double> mesh = a.theta;
  mesh.insert(mesh.end(), b.theta.begin(), b.theta.end());
  std::sort(mesh.begin(), mesh.end());
  mesh.erase(std::unique(mesh.begin(), mesh.end()), mesh.end());
  mesh.push_back(0.0);
  auto state_at = [](const AlignedProfile& p, double th) {
    const size_t i =
        std::upper_bound(p.theta.begin(), p.theta.end(), th) - p.theta.begin();
    return p.states[i];
  };
  if (mesh.size() > 1) {
    const double deep = norm1(a.states.front(), b.states.front());
    if (deep > 1e-11) return std::numeric_limits<double>::infinity();
  }
  double lo = mesh.front();
  for (size_t i = 1; i < mesh.size(); ++i) {
    const double hi = mesh[i];
    if (hi > lo)
      d += norm1(state_at(a, 0.5 * (lo + hi)), state_at(b, 0.5 * (lo + hi))) *
           (hi - lo);
    lo = hi;
  }
  return d;
}

}  // namespace wedgetrack::lyapunov
