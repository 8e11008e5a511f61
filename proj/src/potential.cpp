#include "wedgetrack/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wedgetrack/curves.hpp"
#include "wedgetrack/numerics.hpp"
#include "wedgetrack/tracking.hpp"

namespace wedgetrack::potential {

namespace {

double bern_arg(const PotentialState& w, const PfParams& pf) {
  return pf.B - 0.5 * (w.u * w.u + w.v * w.v);
}

}  // namespace

double density(const PotentialState& w, const PfParams& pf) {
  const double arg = (pf.gamma - 1.0) / pf.gamma * bern_arg(w, pf);
  if (!(arg > 0.0)) throw std::domain_error("potential: |u|^2 >= 2B");
  return std::pow(arg, 1.0 / (pf.gamma - 1.0));
}

double pressure(const PotentialState& w, const PfParams& pf) {
  return std::pow(density(w, pf), pf.gamma);
}

double sound_speed2(const PotentialState& w, const PfParams& pf) {
  return (pf.gamma - 1.0) * bern_arg(w, pf);
}

bool in_domain(const PotentialState& w, const PfParams& pf) {
  const double q2 = w.u * w.u + w.v * w.v;
  if (!(q2 < 2.0 * pf.B)) return false;
  if (!(q2 > 2.0 * (pf.gamma - 1.0) * pf.B / (pf.gamma + 1.0))) return false;
  return w.u > 0.0 && w.u * w.u > sound_speed2(w, pf);
}

double eigenvalue(const PotentialState& w, int family, const PfParams& pf) {
  const double c2 = sound_speed2(w, pf);
  const double q2 = w.u * w.u + w.v * w.v;
  if (!(w.u * w.u > c2))
    throw std::domain_error("potential: not supersonic in x");
  const double sgn = (family == 1) ? -1.0 : 1.0;
  return (w.u * w.v + sgn * std::sqrt(c2) * std::sqrt(q2 - c2)) /
         (w.u * w.u - c2);
}

std::array<double, 2> eigenvector(const PotentialState& w, int family,
                                  const PfParams& pf) {
  // On the Bernoulli manifold the potential eigenvalues agree with the
  // Euler ones of the lifted state and the normalized eigenvector is the
  // velocity part of the Euler eigenvector.
  const GasParams g{pf.gamma};
  const FlowState U = lift(w, pf);
  const int e_family = family == 1 ? 1 : 4;
  const double l = gas::eigenvalue(U, e_family, g);
  const double k = gas::gnl_coefficient(U, e_family, g);
  return {-k * l, k};
}

FlowState lift(const PotentialState& w, const PfParams& pf) {
  const double rho = density(w, pf);
  return {w.u, w.v, std::pow(rho, pf.gamma), rho};
}

PotentialState rarefaction_curve(const PotentialState& w0, int family,
                                 double alpha, const PfParams& pf) {
  if (alpha < 0.0)
    throw std::domain_error("pf rarefaction_curve: alpha must be >= 0");
  if (alpha == 0.0) return w0;
  auto rhs = [&](const std::array<double, 2>& y) {
    return eigenvector({y[0], y[1]}, family, pf);
  };
  const int n = std::max(4, static_cast<int>(std::ceil(alpha / 0.005)));
  const auto out = num::dopri5<2>(rhs, {w0.u, w0.v}, alpha, n);
  PotentialState w{out[0], out[1]};
  if (!in_domain(w, pf))
    throw std::domain_error("pf rarefaction_curve: left the domain");
  return w;
}

PfHugoniotPoint shock_curve(const PotentialState& w0, int family, double alpha,
                            const PfParams& pf) {
  if (alpha == 0.0) return {w0, eigenvalue(w0, family, pf)};
  const double target = eigenvalue(w0, family, pf) + alpha;
  const double rho0 = density(w0, pf);
  // unknowns (u, v, s): RH of s[rho u] = [rho v], s[v] = -[u], and the
  // lambda-parameter pin.
  auto residual = [&](const std::array<double, 3>& x) -> std::array<double, 3> {
    const PotentialState w{x[0], x[1]};
    const double rho = density(w, pf);
    const double s = x[2];
    return {s * (rho * w.u - rho0 * w0.u) - (rho * w.v - rho0 * w0.v),
            s * (w.v - w0.v) + (w.u - w0.u),
            eigenvalue(w, family, pf) - target};
  };
  // start from the rarefaction-side extension
  std::array<double, 3> x0;
  {
    PotentialState guess = w0;
    try {
      const auto r = eigenvector(w0, family, pf);
      guess = {w0.u + alpha * r[0], w0.v + alpha * r[1]};
    } catch (const std::exception&) {
    }
    x0 = {guess.u, guess.v, eigenvalue(w0, family, pf) + 0.5 * alpha};
  }
  auto wrap = [&](const std::array<double, 3>& x) { return residual(x); };
  const auto res = num::newton<3>(wrap, x0, 1e-13, 60);
  if (!res.converged)
    throw std::runtime_error("pf shock_curve: Newton failed");
  return {{res.x[0], res.x[1]}, res.x[2]};
}

PotentialState wave_curve(const PotentialState& w0, int family, double alpha,
                          const PfParams& pf) {
  return alpha >= 0.0 ? rarefaction_curve(w0, family, alpha, pf)
                      : shock_curve(w0, family, alpha, pf).state;
}

PfRiemannSolution solve_riemann(const PotentialState& wl,
                                const PotentialState& wr, const PfParams& pf) {
  auto residual = [&](const std::array<double, 2>& a) -> std::array<double, 2> {
    const PotentialState m = wave_curve(wl, 1, a[0], pf);
    const PotentialState top = wave_curve(m, 2, a[1], pf);
    return {top.u - wr.u, top.v - wr.v};
  };
  std::array<double, 2> a0{};
  {
    const auto r1 = eigenvector(wl, 1, pf);
    const auto r2 = eigenvector(wl, 2, pf);
    const double det = r1[0] * r2[1] - r2[0] * r1[1];
    a0 = {((wr.u - wl.u) * r2[1] - (wr.v - wl.v) * r2[0]) / det,
          (-(wr.u - wl.u) * r1[1] + (wr.v - wl.v) * r1[0]) / det};
  }
  const auto res = num::newton<2>(residual, a0, 1e-13, 50);
  if (!res.converged)
    throw std::runtime_error("pf solve_riemann: Newton failed");
  PfRiemannSolution sol;
  sol.alphas = res.x;
  sol.residual = res.residual;
  sol.m1 = wave_curve(wl, 1, res.x[0], pf);
  if (res.x[0] < 0.0) {
    const auto hp = shock_curve(wl, 1, res.x[0], pf);
    sol.sigma_lo[0] = sol.sigma_hi[0] = hp.speed;
  } else {
    sol.sigma_lo[0] = eigenvalue(wl, 1, pf);
    sol.sigma_hi[0] = eigenvalue(sol.m1, 1, pf);
  }
  if (res.x[1] < 0.0) {
    const auto hp = shock_curve(sol.m1, 2, res.x[1], pf);
    sol.sigma_lo[1] = sol.sigma_hi[1] = hp.speed;
  } else {
    sol.sigma_lo[1] = eigenvalue(sol.m1, 2, pf);
    sol.sigma_hi[1] = eigenvalue(wr, 2, pf);
  }
  return sol;
}

double boundary_pressure_wave(const PotentialState& w1, double p2,
                              const PfParams& pf) {
  const double p1 = pressure(w1, pf);
  if (p2 == p1) return 0.0;
  auto f = [&](double d) {
    return pressure(wave_curve(w1, 1, d, pf), pf) - p2;
  };
  // pressure decreases along the 1-rarefaction (speed grows, density drops)
  const double dir = (p2 > p1) ? -1.0 : 1.0;
  const double step0 = std::max(std::abs(p2 - p1) * 0.25, 1e-12);
  const auto [a, b] = num::bracket_from(f, 0.0, dir * 0.6, step0);
  if (a == b) return a;
  return num::brent(f, a, b);
}

double curve_coincidence_deviation(const PotentialState& wl, int pf_family,
                                   double alpha, const PfParams& pf) {
  const GasParams g{pf.gamma};
  const int e_family = pf_family == 1 ? 1 : 4;
  const FlowState Ul = lift(wl, pf);
  double worst = 0.0;
  for (int k = 1; k <= 8; ++k) {
    const double a = alpha * k / 8.0;
    const FlowState e = curves::phi_leg(e_family, a, Ul, g);
    const FlowState p = lift(wave_curve(wl, pf_family, a, pf), pf);
    worst = std::max(worst, norm1(e, p));
  }
  return worst;
}

// ---- trajectory queries ----------------------------------------------

double PfTrajectory::b_at(double x) const {
  const BoundarySeg* s = &boundary.front();
  for (const auto& seg : boundary) {
    if (seg.x0 <= x) s = &seg;
    else break;
  }
  return s->y0 + s->slope * (x - s->x0);
}

PotentialState PfTrajectory::boundary_state_at(double x) const {
  const BoundarySeg* s = &boundary.front();
  for (const auto& seg : boundary) {
    if (seg.x0 <= x) s = &seg;
    else break;
  }
  return s->wb;
}

PfTrajectory::Section PfTrajectory::section_at(double x,
                                               bool right_limit) const {
  Section cs;
  cs.x = x;
  std::vector<const PfSegment*> alive;
  for (const auto& s : segments) {
    const bool born = right_limit ? (s.x0 <= x) : (s.x0 < x);
    const bool gone = right_limit ? (s.x1 <= x) : (s.x1 < x);
    if (born && !gone) alive.push_back(&s);
  }
  auto quant = [](double y) { return std::round(y * 1e12); };
  std::sort(alive.begin(), alive.end(),
            [&](const PfSegment* a, const PfSegment* b) {
              const double ya = quant(a->y_at(x)), yb = quant(b->y_at(x));
              if (ya != yb) return ya < yb;
              const bool a_new = right_limit && a->x0 == x;
              const bool b_new = right_limit && b->x0 == x;
              if (a_new != b_new) {
                const double ra = a->y_at(x), rb = b->y_at(x);
                if (ra != rb) return ra < rb;
                return a->id < b->id;
              }
              if (a->speed != b->speed)
                return a_new ? a->speed < b->speed : a->speed > b->speed;
              return a->id < b->id;
            });
  for (const auto* s : alive) {
    cs.positions.push_back(s->y_at(x));
    cs.fronts.push_back(*s);
    cs.regions.push_back(s->below);
  }
  cs.b = b_at(x);
  const BoundarySeg* bs = &boundary.front();
  for (const auto& seg : boundary) {
    if (right_limit ? (seg.x0 <= x) : (seg.x0 < x)) bs = &seg;
    else break;
  }
  cs.b_slope = bs->slope;
  cs.regions.push_back(bs->wb);
  return cs;
}

// ---- engine ----------------------------------------------------------

namespace {

class PfEngine {
 public:
  PfEngine(PfTrajectory& t, const PotentialState& ref, double guard_radius)
      : t_(t), pf_(t.pf), P_(t.params), ref_(ref), radius_(guard_radius) {}

  void set_pressure_steps() {
    for (size_t h = 1; h < t_.pb_steps.size(); ++h)
      if (t_.pb_steps[h] != t_.pb_steps[h - 1]) {
        steps_x_.push_back(h * P_.dx);
        steps_val_.push_back(t_.pb_steps[h]);
      }
  }

  void init(double b0, const std::vector<double>& breaks,
            const std::vector<PotentialState>& states) {
    R_.push_back(states[0]);
    for (size_t k = 0; k < breaks.size(); ++k)
      initial_fan(R_.back(), states[k + 1], breaks[k]);
    bx_ = 0.0;
    by_ = b0;
    const double d1 =
        boundary_pressure_wave(R_.back(), t_.pb_steps[0], pf_);
    if (std::abs(d1) >= P_.front_epsilon) emit_one_family(1, d1, 0.0, b0, 1);
    bslope_ = R_.back().v / R_.back().u;
    t_.boundary.push_back({0.0, b0, bslope_, R_.back()});
  }

  void run_to(double x_max) {
    for (;;) {
      Candidate c = next_event(x_max);
      if (!c.valid) break;
      x_ = c.x;
      if (c.what == Candidate::Pair)
        apply_pair(c.index, c.y);
      else if (c.what == Candidate::Boundary)
        apply_boundary(c.y);
      else
        apply_pressure(c.y);
    }
    x_ = x_max;
    t_.x_end = x_max;
    // fronts alive at the horizon keep x1 = infinity
  }

 private:
  struct Live {
    PfSegment f;
    size_t seg;
  };
  struct Candidate {
    enum What { Pair, Boundary, Pressure } what = Pair;
    double x = 0.0, y = 0.0;
    int index = -1;
    bool valid = false;
  };

  [[noreturn]] void fail(const std::string& what, double x, double y) {
    std::ostringstream os;
    os << "pf tracking aborted at x=" << x << " y=" << y << ": " << what;
    throw tracking::TrackingError(os.str());
  }

  void check_state(const PotentialState& w, double x, double y) {
    if (!in_domain(w, pf_)) fail("state left the potential domain", x, y);
    if (eigenvalue(w, 2, pf_) >= P_.lambda_hat)
      fail("lambda_2 reached lambda_hat", x, y);
    if (std::abs(w.u - ref_.u) + std::abs(w.v - ref_.v) > radius_)
      fail("state escaped the solver neighborhood", x, y);
  }

  void push_front(PfSegment f) {
    f.id = next_id_++;
    f.x1 = std::numeric_limits<double>::infinity();
    t_.segments.push_back(f);
    live_.push_back({f, t_.segments.size() - 1});
  }

  void splice(size_t lo, size_t hi, const std::vector<PfSegment>& nf,
              const std::vector<PotentialState>& mids, double y) {
    for (size_t k = lo; k <= hi; ++k) t_.segments[live_[k].seg].x1 = x_;
    live_.erase(live_.begin() + lo, live_.begin() + hi + 1);
    if (nf.empty()) {
      R_.erase(R_.begin() + lo, R_.begin() + hi + 1);
      return;
    }
    R_.erase(R_.begin() + lo + 1, R_.begin() + hi + 1);
    std::vector<Live> tail(live_.begin() + lo, live_.end());
    live_.resize(lo);
    std::vector<PotentialState> rtail(R_.begin() + lo + 1, R_.end());
    R_.resize(lo + 1);
    for (size_t k = 0; k < nf.size(); ++k) {
      push_front(nf[k]);
      if (k < mids.size()) R_.push_back(mids[k]);
    }
    live_.insert(live_.end(), tail.begin(), tail.end());
    R_.insert(R_.end(), rtail.begin(), rtail.end());
    for (const auto& m : mids) check_state(m, x_, y);
  }

  std::pair<std::vector<PfSegment>, std::vector<PotentialState>>
  one_family_fan(int family, double a, const PotentialState& w0, double x,
                 double y, int order) {
    std::vector<PfSegment> fs;
    std::vector<PotentialState> mids;
    if (std::abs(a) < P_.front_epsilon) return {fs, mids};
    PfSegment f;
    f.family = family;
    f.order = order;
    f.x0 = x;
    f.y0 = y;
    if (a < 0.0) {
      const auto hp = shock_curve(w0, family, a, pf_);
      f.kind = PfKind::Shock;
      f.strength = a;
      f.speed = hp.speed;
      f.below = w0;
      f.above = hp.state;
      fs.push_back(f);
      return {fs, mids};
    }
    const int n = static_cast<int>(std::floor(a / P_.delta)) + 1;
    PotentialState cur = w0;
    for (int i = 1; i <= n; ++i) {
      const PotentialState nxt = rarefaction_curve(w0, family, i * a / n, pf_);
      PfSegment sub = f;
      sub.kind = PfKind::Rarefaction;
      sub.strength = a / n;
      sub.speed = eigenvalue(cur, family, pf_);
      sub.below = cur;
      sub.above = nxt;
      if (!fs.empty()) mids.push_back(cur);
      fs.push_back(sub);
      cur = nxt;
    }
    return {fs, mids};
  }

  std::pair<std::vector<PfSegment>, std::vector<PotentialState>> full_fan(
      const PfRiemannSolution& sol, const PotentialState& wl,
      const PotentialState& wr, double x, double y,
      const std::function<int(int)>& order_fn) {
    std::vector<PfSegment> fs;
    std::vector<PotentialState> mids;
    PotentialState cur = wl;
    auto [p1, m1] = one_family_fan(1, sol.alphas[0], cur, x, y, order_fn(1));
    for (size_t k = 0; k < p1.size(); ++k) {
      if (!fs.empty()) mids.push_back(k == 0 ? cur : m1[k - 1]);
      else if (k > 0) mids.push_back(m1[k - 1]);
      fs.push_back(p1[k]);
    }
    if (!p1.empty()) cur = p1.back().above;
    auto [p2, m2] = one_family_fan(2, sol.alphas[1], cur, x, y, order_fn(2));
    for (size_t k = 0; k < p2.size(); ++k) {
      if (!fs.empty()) mids.push_back(k == 0 ? cur : m2[k - 1]);
      else if (k > 0) mids.push_back(m2[k - 1]);
      fs.push_back(p2[k]);
    }
    if (!fs.empty()) fs.back().above = wr;
    return {fs, mids};
  }

  void initial_fan(const PotentialState& below, const PotentialState& above,
                   double yi) {
    if (pnorm1(below, above) < P_.front_epsilon) return;
    PfRiemannSolution sol;
    try {
      sol = solve_riemann(below, above, pf_);
    } catch (const std::exception& e) {
      fail(std::string("initial pf Riemann: ") + e.what(), 0.0, yi);
    }
    auto [fs, mids] = full_fan(sol, below, above, 0.0, yi,
                               [](int) { return 1; });
    for (size_t k = 0; k < fs.size(); ++k) {
      push_front(fs[k]);
      R_.push_back(k < mids.size() ? mids[k] : fs[k].above);
    }
  }

  void emit_one_family(int family, double a, double x, double y, int order) {
    auto [fs, mids] = one_family_fan(family, a, R_.back(), x, y, order);
    for (size_t k = 0; k < fs.size(); ++k) {
      push_front(fs[k]);
      R_.push_back(k < mids.size() ? mids[k] : fs[k].above);
    }
  }

  Candidate next_event(double x_max) const {
    Candidate best;
    double bx = x_max, byy = 0.0;
    auto consider = [&](double t, double yev, Candidate::What w, int idx) {
      if (t > x_max) return;
      if (!best.valid || t < bx || (t == bx && yev < byy)) {
        best = {w, t, yev, idx, true};
        bx = t;
        byy = yev;
      }
    };
    for (size_t i = 0; i + 1 < live_.size(); ++i) {
      const auto& a = live_[i].f;
      const auto& b = live_[i + 1].f;
      if (!(a.speed > b.speed)) continue;
      const double gap = std::max(0.0, b.y_at(x_) - a.y_at(x_));
      const double t = x_ + gap / (a.speed - b.speed);
      consider(t, a.y_at(t), Candidate::Pair, static_cast<int>(i));
    }
    if (!live_.empty()) {
      const auto& top = live_.back().f;
      if (top.speed > bslope_) {
        const double bnow = by_ + bslope_ * (x_ - bx_);
        const double gap = std::max(0.0, bnow - top.y_at(x_));
        const double t = x_ + gap / (top.speed - bslope_);
        consider(t, top.y_at(t), Candidate::Boundary,
                 static_cast<int>(live_.size()) - 1);
      }
    }
    for (size_t h = next_step_; h < steps_x_.size(); ++h) {
      const double t = steps_x_[h];
      if (t <= x_) continue;
      consider(t, by_ + bslope_ * (t - bx_), Candidate::Pressure,
               static_cast<int>(h));
      break;
    }
    return best;
  }

  void apply_pair(int idx, double y) {
    const size_t i = static_cast<size_t>(idx);
    const PfSegment A = live_[i].f;
    const PfSegment B = live_[i + 1].f;
    const PotentialState wl = R_[i];
    const PotentialState wm = R_[i + 1];
    const PotentialState wr = R_[i + 2];
    PfEventRecord ev;
    ev.x = x_;
    ev.y = y;
    ev.kind = 0;

    const double prod = std::abs(A.strength) * std::abs(B.strength);
    const bool tiny = prod <= 1e-11;
    const bool np_in = A.kind == PfKind::NonPhysical;

    if (np_in || (A.kind != PfKind::NonPhysical &&
                  B.kind != PfKind::NonPhysical && prod <= P_.nu) ||
        tiny) {
      // simplified: translate or rebase, non-physical remainder at
      // lambda_hat
      std::vector<PfSegment> nf;
      std::vector<PotentialState> mids;
      if (np_in) {
        PfSegment moved = B;
        moved.x0 = x_;
        moved.y0 = y;
        moved.below = wl;
        if (tiny) {
          moved.above = {wl.u + (wr.u - wm.u), wl.v + (wr.v - wm.v)};
        } else {
          moved.above = wave_curve(wl, B.family, B.strength, pf_);
          moved.speed = B.strength < 0
                            ? shock_curve(wl, B.family, B.strength, pf_).speed
                            : eigenvalue(wl, B.family, pf_);
        }
        PfSegment np = A;
        np.x0 = x_;
        np.y0 = y;
        np.below = moved.above;
        np.above = wr;
        if (prod >= 1e-14) np.strength = pnorm1(wr, moved.above);
        ev.np_emitted = np.strength;
        nf = {moved, np};
        mids = {moved.above};
      } else if (A.family == B.family) {
        PfSegment merged = A;
        merged.x0 = x_;
        merged.y0 = y;
        merged.strength = A.strength + B.strength;
        merged.order = std::min(A.order, B.order);
        merged.kind =
            merged.strength < 0 ? PfKind::Shock : PfKind::Rarefaction;
        merged.below = wl;
        merged.above = wr;
        const double dm = density(merged.above, pf_) * merged.above.u -
                          density(merged.below, pf_) * merged.below.u;
        merged.speed = std::abs(dm) > 1e-14
                           ? (density(merged.above, pf_) * merged.above.v -
                              density(merged.below, pf_) * merged.below.v) /
                                 dm
                           : eigenvalue(wl, A.family, pf_);
        if (std::abs(merged.strength) >= P_.front_epsilon)
          nf = {merged};
      } else {
        // commute (A.family must exceed B.family)
        if (!(A.family > B.family))
          fail("pf: non-approaching interior collision", x_, y);
        PfSegment lowered = B;
        lowered.x0 = x_;
        lowered.y0 = y;
        lowered.below = wl;
        lowered.above = tiny ? PotentialState{wl.u + (wr.u - wm.u),
                                              wl.v + (wr.v - wm.v)}
                             : wave_curve(wl, B.family, B.strength, pf_);
        lowered.speed = lowered.strength < 0 && !tiny
                            ? shock_curve(wl, B.family, B.strength, pf_).speed
                            : eigenvalue(wl, B.family, pf_);
        PfSegment raised = A;
        raised.x0 = x_;
        raised.y0 = y;
        raised.below = lowered.above;
        raised.above = wr;
        if (!tiny) {
          raised.above = wave_curve(lowered.above, A.family, A.strength, pf_);
          raised.speed =
              A.strength < 0
                  ? shock_curve(lowered.above, A.family, A.strength, pf_).speed
                  : eigenvalue(lowered.above, A.family, pf_);
        } else {
          raised.speed = eigenvalue(lowered.above, A.family, pf_);
        }
        nf = {lowered, raised};
        mids = {lowered.above};
        if (!tiny) {
          const double eps = pnorm1(wr, raised.above);
          ev.np_emitted = eps;
          if (eps >= P_.front_epsilon) {
            PfSegment np;
            np.family = 3;
            np.kind = PfKind::NonPhysical;
            np.strength = eps;
            np.order = std::max(A.order, B.order) + 1;
            np.x0 = x_;
            np.y0 = y;
            np.speed = P_.lambda_hat;
            np.below = raised.above;
            np.above = wr;
            mids.push_back(raised.above);
            nf.push_back(np);
          } else {
            nf.back().above = wr;
          }
        }
      }
      t_.events.push_back(ev);
      splice(i, i + 1, nf, mids, y);
      return;
    }

    ev.accurate = true;
    PfRiemannSolution sol;
    try {
      sol = solve_riemann(wl, wr, pf_);
    } catch (const std::exception& e) {
      fail(std::string("pf interior Riemann: ") + e.what(), x_, y);
    }
    auto ord = [&](int fam) {
      if (A.family == B.family)
        return fam == A.family ? std::min(A.order, B.order)
                               : std::max(A.order, B.order) + 1;
      if (fam == A.family) return A.order;
      if (fam == B.family) return B.order;
      return std::max(A.order, B.order) + 1;
    };
    t_.events.push_back(ev);
    const auto fan = full_fan(sol, wl, wr, x_, y, ord);
    splice(i, i + 1, fan.first, fan.second, y);
  }

  void apply_boundary(double y) {
    const size_t i = live_.size() - 1;
    const PfSegment A = live_[i].f;
    const PotentialState wl = R_[i];
    const PotentialState wr = R_[i + 1];
    const bool cross =
        A.kind == PfKind::NonPhysical || std::abs(A.strength) <= P_.nu;
    PfEventRecord ev;
    ev.x = x_;
    ev.y = y;
    ev.kind = cross ? 4 : 3;
    ev.accurate = !cross;
    t_.events.push_back(ev);
    if (cross) {
      t_.segments[live_[i].seg].x1 = x_;
      live_.pop_back();
      R_.pop_back();
      boundary_segment();
      return;
    }
    if (A.family == 1) fail("pf: 1-family front hit the boundary", x_, y);
    double d1 = 0.0;
    try {
      d1 = boundary_pressure_wave(wl, pressure(wr, pf_), pf_);
    } catch (const std::exception& e) {
      fail(std::string("pf boundary reflection: ") + e.what(), x_, y);
    }
    t_.segments[live_[i].seg].x1 = x_;
    live_.pop_back();
    R_.pop_back();
    auto [fs, mids] = one_family_fan(1, d1, wl, x_, y, A.order + 1);
    for (size_t k = 0; k < fs.size(); ++k) {
      push_front(fs[k]);
      R_.push_back(k < mids.size() ? mids[k] : fs[k].above);
    }
    check_state(R_.back(), x_, y);
    boundary_segment();
  }

  void apply_pressure(double yb) {
    const double p_new = steps_val_[next_step_];
    next_step_++;
    const PotentialState w1 = R_.back();
    PfEventRecord ev;
    ev.x = x_;
    ev.y = yb;
    ev.kind = 5;
    ev.accurate = true;
    t_.events.push_back(ev);
    double d1 = 0.0;
    try {
      d1 = boundary_pressure_wave(w1, p_new, pf_);
    } catch (const std::exception& e) {
      fail(std::string("pf boundary pressure step: ") + e.what(), x_, yb);
    }
    if (std::abs(d1) >= P_.front_epsilon) {
      auto [fs, mids] = one_family_fan(1, d1, w1, x_, yb, 1);
      for (size_t k = 0; k < fs.size(); ++k) {
        push_front(fs[k]);
        R_.push_back(k < mids.size() ? mids[k] : fs[k].above);
      }
      check_state(R_.back(), x_, yb);
    }
    boundary_segment();
  }

  void boundary_segment() {
    const double y = by_ + bslope_ * (x_ - bx_);
    bx_ = x_;
    by_ = y;
    bslope_ = R_.back().v / R_.back().u;
    t_.boundary.push_back({x_, y, bslope_, R_.back()});
  }

  PfTrajectory& t_;
  PfParams pf_;
  TrackingParams P_;
  PotentialState ref_;
  double radius_;

  std::vector<Live> live_;
  std::vector<PotentialState> R_;
  double x_ = 0.0, bx_ = 0.0, by_ = 0.0, bslope_ = 0.0;
  int next_id_ = 0;
  std::vector<double> steps_x_, steps_val_;
  size_t next_step_ = 0;
};

}  // namespace

PfTrajectory run(const Scenario& sc) { return run(sc, sc.params); }

PfTrajectory run(const Scenario& sc, const TrackingParams& params_in) {
  if (sc.mode == RunMode::Euler)
    throw std::invalid_argument("potential::run needs a potential scenario");
  PfTrajectory t;
  t.gas = sc.gas;
  t.pf = {sc.gas.gamma, sc.B_inf};

  TrackingParams P = params_in.with_defaults();
  const PotentialState ref{sc.speed_inf, 0.0};
  if (P.lambda_hat <= 0.0)
    P.lambda_hat = 1.2 * eigenvalue(ref, 2, t.pf) + 0.1;
  t.params = P;

  // share the Euler discretization of the boundary pressure and the
  // incoming data grid
  const auto disc = tracking::discretize_inputs(sc, P.mu, P.dx, P.dy());
  t.pb_steps = disc.pb_steps;
  if (disc.pb_l1_error >= P.mu)
    throw tracking::TrackingError("pf: discretization L1 error exceeds mu");

  std::vector<double> breaks;
  std::vector<PotentialState> states{ref};
  const double dy = P.dy();
  const int n1 = static_cast<int>(disc.uinf_cells.size());
  for (int k = n1 - 1; k >= 0; --k) {
    breaks.push_back(-(k + 1) * dy);
    const auto d = sc.pf_uinf(-(k + 0.5) * dy);
    states.push_back({d[0], d[1]});
  }

  PfEngine eng(t, ref, P.guard_radius);
  eng.set_pressure_steps();
  eng.init(0.0, breaks, states);
  eng.run_to(P.x_max);
  return t;
}

}  // namespace wedgetrack::potential
