#include "wedgetrack/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wedgetrack/curves.hpp"
#include "wedgetrack/functionals.hpp"
#include "wedgetrack/riemann.hpp"

namespace wedgetrack::tracking {

namespace {

constexpr double kAlive = std::numeric_limits<double>::infinity();

// Generation order of an outgoing front given the two incoming ones.
// Contacts count as one family; the strong shock and the boundary enter
// as (family, order 1).
int order_of(int out_family, int fam_a, int ord_a, int fam_b, int ord_b) {
  auto key = [](int fam) { return fam == 3 ? 2 : fam; };
  const int out = key(out_family), a = key(fam_a), b = key(fam_b);
  if (a == b) return out == a ? std::min(ord_a, ord_b)
                              : std::max(ord_a, ord_b) + 1;
  if (out == a) return ord_a;
  if (out == b) return ord_b;
  return std::max(ord_a, ord_b) + 1;
}

struct FanBuild {
  std::vector<Front> fronts;
  std::vector<FlowState> mids;
};

FanBuild build_one_family(int family, double a, const FlowState& U0, double x,
                          double y, int order, double delta, double prune,
                          const GasParams& g) {
  FanBuild out;
  if (std::abs(a) < prune) return out;
  if (a < 0.0) {
    const auto hp = curves::shock_curve(U0, family, a, g);
    Front f;
    f.family = family;
    f.kind = FrontKind::Shock;
    f.strength = a;
    f.order = order;
    f.x0 = x;
    f.y0 = y;
    f.speed = hp.speed;
    f.below = U0;
    f.above = hp.state;
    out.fronts.push_back(f);
    return out;
  }
  const int n = static_cast<int>(std::floor(a / delta)) + 1;
  FlowState cur = U0;
  for (int i = 1; i <= n; ++i) {
    const FlowState nxt = curves::rarefaction_curve(U0, family, i * a / n, g);
    Front f;
    f.family = family;
    f.kind = FrontKind::Rarefaction;
    f.strength = a / n;
    f.order = order;
    f.x0 = x;
    f.y0 = y;
    f.speed = gas::eigenvalue(cur, family, g);
    f.below = cur;
    f.above = nxt;
    if (!out.fronts.empty()) out.mids.push_back(cur);
    out.fronts.push_back(f);
    cur = nxt;
  }
  return out;
}

FanBuild build_weak_fan(const std::array<double, 4>& alphas,
                        const FlowState& U_l, const FlowState& U_r, double x,
                        double y, const std::function<int(int)>& order_fn,
                        double delta, double prune, const GasParams& g) {
  FanBuild out;
  FlowState cur = U_l;
  auto append = [&](FanBuild&& part) {
    for (size_t k = 0; k < part.fronts.size(); ++k) {
      if (!out.fronts.empty())
        out.mids.push_back(k == 0 ? cur : part.mids[k - 1]);
      else if (k > 0)
        out.mids.push_back(part.mids[k - 1]);
      out.fronts.push_back(part.fronts[k]);
    }
    if (!part.fronts.empty()) cur = part.fronts.back().above;
  };
  append(build_one_family(1, alphas[0], cur, x, y, order_fn(1), delta, prune, g));
  if (std::abs(alphas[1]) + std::abs(alphas[2]) >= prune) {
    Front f;
    f.family = 2;
    f.kind = FrontKind::Contact;
    f.strength = alphas[1];
    f.strength3 = alphas[2];
    f.order = order_fn(2);
    f.x0 = x;
    f.y0 = y;
    f.speed = cur.v / cur.u;
    f.below = cur;
    f.above = curves::contact_curve(cur, alphas[1], alphas[2]);
    if (!out.fronts.empty()) out.mids.push_back(cur);
    out.fronts.push_back(f);
    cur = f.above;
  }
  append(build_one_family(4, alphas[3], cur, x, y, order_fn(4), delta, prune, g));
  if (!out.fronts.empty()) out.fronts.back().above = U_r;
  return out;
}

class Engine {
 public:
  Engine(Trajectory& traj, const riemann::SolverGuard& guard)
      : t_(traj), guard_(guard), g_(traj.gas), P_(traj.params) {}

  // ---- initialization -----------------------------------------------

  void init_strong() {
    const auto& cells = t_.uinf_cells;
    const double dy = P_.dy();
    const double s1 = riemann::strong_shock_boundary(cells[0], t_.pb_steps[0], g_);
    const FlowState Ub = curves::strong_shock_by_speed(s1, cells[0], g_);

    // Bottom-up: background below the deepest cell, fans at interfaces,
    // then the strong shock at the origin and the boundary above it.
    R_.push_back(t_.U_minus_ref);
    const int n1 = static_cast<int>(cells.size());
    for (int k = n1 - 1; k >= 0; --k) {
      // interface at y = -(k+1) dy between below state R_.back() and cell k
      const double yi = -(k + 1) * dy;
      place_initial_fan(R_.back(), cells[k], yi);
    }
    Front sf;
    sf.family = 1;
    sf.kind = FrontKind::StrongShock;
    sf.strength = 0.0;
    sf.order = 1;
    sf.x0 = 0.0;
    sf.y0 = 0.0;
    sf.speed = s1;
    sf.below = R_.back();
    sf.above = Ub;
    push_front(sf);
    R_.push_back(Ub);

    bx_ = 0.0;
    by_ = 0.0;
    bslope_ = Ub.v / Ub.u;
    t_.boundary.push_back({0.0, 0.0, bslope_, Ub});
    t_.shock.push_back({0.0, 0.0, s1, sf.below, sf.above});
  }

  void init_weak(double b0, const std::vector<double>& breaks,
                 const std::vector<FlowState>& states) {
    R_.push_back(states[0]);
    for (size_t k = 0; k < breaks.size(); ++k)
      place_initial_fan(R_.back(), states[k + 1], breaks[k]);
    bx_ = 0.0;
    by_ = b0;
    // Boundary pressure wave at the start point.
    const FlowState U1 = R_.back();
    const double p2 = t_.pb_steps[0];
    const double d1 = riemann::boundary_pressure_wave(U1, p2, g_);
    if (std::abs(d1) >= P_.front_epsilon) {
      auto [fs, mids] = one_family_fan(1, d1, U1, 0.0, b0, 1);
      for (size_t k = 0; k < fs.size(); ++k) {
        push_front(fs[k]);
        R_.push_back(k < mids.size() ? mids[k] : fs[k].above);
      }
    }
    bslope_ = R_.back().v / R_.back().u;
    t_.boundary.push_back({0.0, b0, bslope_, R_.back()});
  }

  // ---- main loop ----------------------------------------------------

  void run_to(double x_max) {
    int stuck = 0;
    double last_x = -1.0, last_y = 0.0;
    for (;;) {
      Candidate c = next_event(x_max);
      if (!c.valid) break;
      if (c.x == last_x && c.y == last_y) {
        if (++stuck > 256)
          fail("no progress: more than 256 events at one point", c.x, c.y);
      } else {
        stuck = 0;
        last_x = c.x;
        last_y = c.y;
      }
      x_ = c.x;
      switch (c.what) {
        case Candidate::Pair:
          apply_pair(c.index, c.y);
          break;
        case Candidate::Boundary:
          apply_boundary(c.y);
          break;
        case Candidate::Pressure:
          apply_pressure(c.y);
          break;
      }
    }
    x_ = x_max;
    t_.x_end = x_max;
    // fronts alive at the horizon keep x1 = infinity
  }

 private:
  struct Live {
    Front f;
    size_t seg;
  };

  struct Candidate {
    enum What { Pair, Boundary, Pressure } what = Pair;
    double x = 0.0, y = 0.0;
    int index = -1;
    bool valid = false;
  };

  // ---- bookkeeping --------------------------------------------------

  [[noreturn]] void fail(const std::string& what, double x, double y) {
    std::ostringstream os;
    os << "tracking aborted at x=" << x << " y=" << y << ": " << what
       << " (events so far: " << t_.events.size() << ")";
    throw TrackingError(os.str());
  }

  void check_state(const FlowState& U, double x, double y) {
    if (!(U.p > 0.0) || !(U.rho > 0.0)) fail("state left p,rho > 0", x, y);
    if (!gas::is_supersonic(U, g_)) fail("state left supersonic region", x, y);
    if (gas::eigenvalue(U, 4, g_) >= P_.lambda_hat)
      fail("lambda_4 reached lambda_hat", x, y);
    if (!guard_.admits(U))
      fail("state escaped the solver neighborhood", x, y);
  }

  void push_front(Front f) {
    f.id = next_id_++;
    SegmentRecord s;
    s.id = f.id;
    s.family = f.family;
    s.kind = f.kind;
    s.strength = f.strength;
    s.strength3 = f.strength3;
    s.order = f.order;
    s.x0 = f.x0;
    s.y0 = f.y0;
    s.speed = f.speed;
    s.x1 = kAlive;
    s.below = f.below;
    s.above = f.above;
    t_.segments.push_back(s);
    live_.push_back({f, t_.segments.size() - 1});
  }

  // Replace live fronts [lo, hi] and the regions strictly between them by
  // a new chain; the outer regions R_[lo] and R_[hi+2] are untouched.
  // An empty chain merges the outer regions; the upper value survives so
  // the topmost region always stays the boundary state.
  void splice(size_t lo, size_t hi, const std::vector<Front>& nf,
              const std::vector<FlowState>& mids, double x, double y) {
    for (size_t k = lo; k <= hi; ++k) t_.segments[live_[k].seg].x1 = x;
    live_.erase(live_.begin() + lo, live_.begin() + hi + 1);
    if (nf.empty()) {
      R_.erase(R_.begin() + lo, R_.begin() + hi + 1);
      return;
    }
    R_.erase(R_.begin() + lo + 1, R_.begin() + hi + 1);
    std::vector<Live> tail(live_.begin() + lo, live_.end());
    live_.resize(lo);
    std::vector<FlowState> rtail(R_.begin() + lo + 1, R_.end());
    R_.resize(lo + 1);
    for (size_t k = 0; k < nf.size(); ++k) {
      push_front(nf[k]);
      if (k < mids.size()) R_.push_back(mids[k]);
    }
    live_.insert(live_.end(), tail.begin(), tail.end());
    R_.insert(R_.end(), rtail.begin(), rtail.end());
    for (const auto& m : mids) check_state(m, x, y);
  }

  void boundary_segment(double x) {
    const double y = by_ + bslope_ * (x - bx_);
    bx_ = x;
    by_ = y;
    bslope_ = R_.back().v / R_.back().u;
    t_.boundary.push_back({x, y, bslope_, R_.back()});
  }

  void shock_segment(double x, double y, double speed, const FlowState& below,
                     const FlowState& above) {
    t_.shock.push_back({x, y, speed, below, above});
  }

  EventRecord& log_event(EventRecord::Kind kind, double x, double y) {
    EventRecord e;
    e.kind = kind;
    e.x = x;
    e.y = y;
    t_.events.push_back(e);
    return t_.events.back();
  }

  // ---- fan construction ---------------------------------------------

  std::pair<std::vector<Front>, std::vector<FlowState>> one_family_fan(
      int family, double a, const FlowState& U0, double x, double y,
      int order) {
    auto fb = build_one_family(family, a, U0, x, y, order, P_.delta,
                               P_.front_epsilon, g_);
    return {std::move(fb.fronts), std::move(fb.mids)};
  }

  // Full weak fan between existing regions U_l and U_r; the top front's
  // above-state is pinned to U_r so the splice is exact.
  std::pair<std::vector<Front>, std::vector<FlowState>> weak_fan(
      const std::array<double, 4>& alphas, const FlowState& U_l,
      const FlowState& U_r, double x, double y,
      const std::function<int(int)>& order_fn) {
    auto fb = build_weak_fan(alphas, U_l, U_r, x, y, order_fn, P_.delta,
                             P_.front_epsilon, g_);
    return {std::move(fb.fronts), std::move(fb.mids)};
  }

  // Propagation speed of a translated front from its endpoint states:
  // shocks use the mass-balance speed [rho v]/[rho u] (the exact RH speed
  // up to the translation error), rarefactions the below-state
  // characteristic, contacts the common flow direction.
  double front_speed(const Front& f, const FlowState& base) {
    switch (f.kind) {
      case FrontKind::Shock: {
        const double dm = f.above.rho * f.above.u - f.below.rho * f.below.u;
        if (std::abs(dm) > 1e-14)
          return (f.above.rho * f.above.v - f.below.rho * f.below.v) / dm;
        return gas::eigenvalue(base, f.family, g_);
      }
      case FrontKind::Rarefaction:
        return gas::eigenvalue(base, f.family, g_);
      case FrontKind::Contact:
        return base.v / base.u;
      default:
        return P_.lambda_hat;
    }
  }

  Front make_np(const FlowState& below, const FlowState& above, double x,
                double y, int order) {
    Front f;
    f.family = 5;
    f.kind = FrontKind::NonPhysical;
    f.strength = norm1(above, below);
    f.order = order;
    f.x0 = x;
    f.y0 = y;
    f.speed = P_.lambda_hat;
    f.below = below;
    f.above = above;
    return f;
  }

  // Re-base a physical front's jump at a new below state (the simplified
  // solver's commuted legs). Returns the front and its above state.
  Front rebase(const Front& src, const FlowState& U0, double x, double y) {
    Front f = src;
    f.x0 = x;
    f.y0 = y;
    f.below = U0;
    switch (src.kind) {
      case FrontKind::Shock: {
        const auto hp = curves::shock_curve(U0, src.family, src.strength, g_);
        f.above = hp.state;
        f.speed = hp.speed;
        break;
      }
      case FrontKind::Rarefaction:
        f.above = curves::rarefaction_curve(U0, src.family, src.strength, g_);
        f.speed = gas::eigenvalue(U0, src.family, g_);
        break;
      case FrontKind::Contact:
        f.above = curves::contact_curve(U0, src.strength, src.strength3);
        f.speed = U0.v / U0.u;
        break;
      default:
        fail("rebase of non-physical front", x, y);
    }
    return f;
  }

  // ---- event selection ----------------------------------------------

  Candidate next_event(double x_max) const {
    Candidate best;
    double bx = x_max, byy = 0.0;
    auto consider = [&](double t, double yev, Candidate::What w, int idx) {
      if (t > x_max) return;
      if (!best.valid || t < bx || (t == bx && yev < byy)) {
        best.valid = true;
        best.what = w;
        best.x = t;
        best.y = yev;
        best.index = idx;
        bx = t;
        byy = yev;
      }
    };
    for (size_t i = 0; i + 1 < live_.size(); ++i) {
      const Front& a = live_[i].f;
      const Front& b = live_[i + 1].f;
      if (!(a.speed > b.speed)) continue;
      const double gap = std::max(0.0, b.y_at(x_) - a.y_at(x_));
      const double t = x_ + gap / (a.speed - b.speed);
      consider(t, a.y_at(t), Candidate::Pair, static_cast<int>(i));
    }
    if (!live_.empty()) {
      const Front& top = live_.back().f;
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
      const double yb = by_ + bslope_ * (t - bx_);
      consider(t, yb, Candidate::Pressure, static_cast<int>(h));
      break;
    }
    return best;
  }

 public:
  void set_pressure_steps() {
    for (size_t h = 1; h < t_.pb_steps.size(); ++h)
      if (t_.pb_steps[h] != t_.pb_steps[h - 1]) {
        steps_x_.push_back(h * P_.dx);
        steps_val_.push_back(t_.pb_steps[h]);
      }
  }

 private:
  // ---- event application --------------------------------------------

  void apply_pair(int idx, double y) {
    const size_t i = static_cast<size_t>(idx);
    const Front A = live_[i].f;
    const Front B = live_[i + 1].f;
    if (A.strong())
      strong_above(i, y, B);
    else if (B.strong())
      strong_below(i, y, A);
    else
      weak_weak(i, y, A, B);
  }

  // A 1-front falling onto the strong shock is always resolved accurately:
  // the simplified absorption would trade an alpha-sized front for a
  // state-norm-sized non-physical one, which no weight choice dominates.
  // Reflected strengths are damped by |K_s4||K_b4| << 1 per cycle, so the
  // front count stays finite without the threshold.
  void strong_above(size_t i, double y, const Front& B) {
    if (B.family != 1 || !B.physical())
      fail("non-1-family front reached the strong shock from above", x_, y);
    const FlowState U_l = R_[i];
    const FlowState U_r = R_[i + 2];
    const Front A = live_[i].f;
    auto& ev = log_event(EventRecord::Kind::ShockAbove, x_, y);
    ev.family_a = 1;
    ev.family_b = B.family;
    ev.strength_a = 0.0;
    ev.strength_b = B.strength;
    ev.order_a = A.order;
    ev.order_b = B.order;
    ev.accurate = true;
    riemann::StrongRiemannSolution ss;
    try {
      ss = riemann::solve_riemann_strong(U_l, U_r, A.speed, g_);
    } catch (const std::exception& e) {
      fail(std::string("strong interaction (above): ") + e.what(), x_, y);
    }
    splice(i, i + 1, strong_fan(ss, U_l, U_r, y, 1, B.order), y);
  }

  void strong_below(size_t i, double y, const Front& A) {
    const FlowState U_l = R_[i];
    const FlowState U_r = R_[i + 2];
    const Front B = live_[i + 1].f;  // strong shock
    auto& ev = log_event(EventRecord::Kind::ShockBelow, x_, y);
    ev.family_a = A.family;
    ev.family_b = 1;
    ev.strength_a = A.kind == FrontKind::Contact
                        ? A.strength  // logged; totals carry both parts
                        : A.strength;
    ev.order_a = A.order;
    ev.order_b = B.order;
    if (A.physical() && A.total_strength() > P_.nu) {
      ev.accurate = true;
      riemann::StrongRiemannSolution ss;
      try {
        ss = riemann::solve_riemann_strong(U_l, U_r, B.speed, g_);
      } catch (const std::exception& e) {
        fail(std::string("strong interaction (below): ") + e.what(), x_, y);
      }
      splice(i, i + 1, strong_fan(ss, U_l, U_r, y, A.family, A.order), y);
    } else {
      // Simplified: same speed, new below state; the change of the
      // above-shock state rides out on a non-physical front.
      FlowState new_above;
      try {
        new_above = curves::strong_shock_by_speed(B.speed, U_l, g_);
      } catch (const std::exception& e) {
        fail(std::string("strong shock rebase: ") + e.what(), x_, y);
      }
      Front sf = B;
      sf.x0 = x_;
      sf.y0 = y;
      sf.below = U_l;
      sf.above = new_above;
      std::vector<Front> nf{sf};
      std::vector<FlowState> mids;
      const Front np = make_np(new_above, U_r, x_, y, A.order + 1);
      ev.np_emitted = np.strength;
      if (np.strength >= P_.front_epsilon) {
        nf.push_back(np);
        mids.push_back(new_above);
      } else {
        nf.back().above = U_r;
      }
      splice(i, i + 1, {nf, mids}, y);
      shock_segment(x_, y, sf.speed, U_l, new_above);
      check_state(new_above, x_, y);
    }
  }

  // Fronts of a strong Riemann solution: shock then contact then 4-leg.
  std::pair<std::vector<Front>, std::vector<FlowState>> strong_fan(
      const riemann::StrongRiemannSolution& ss, const FlowState& U_l,
      const FlowState& U_r, double y, int in_family, int in_order) {
    std::vector<Front> fs;
    std::vector<FlowState> mids;
    Front sf;
    sf.family = 1;
    sf.kind = FrontKind::StrongShock;
    sf.order = 1;
    sf.x0 = x_;
    sf.y0 = y;
    sf.speed = ss.s;
    sf.below = U_l;
    sf.above = ss.m1;
    fs.push_back(sf);
    FlowState cur = ss.m1;
    auto ord = [&](int fam) {
      return order_of(fam, in_family, in_order, 1, 1);
    };
    if (std::abs(ss.deltas[0]) + std::abs(ss.deltas[1]) >= P_.front_epsilon) {
      Front f;
      f.family = 2;
      f.kind = FrontKind::Contact;
      f.strength = ss.deltas[0];
      f.strength3 = ss.deltas[1];
      f.order = ord(2);
      f.x0 = x_;
      f.y0 = y;
      f.speed = cur.v / cur.u;
      f.below = cur;
      f.above = curves::contact_curve(cur, ss.deltas[0], ss.deltas[1]);
      mids.push_back(cur);
      fs.push_back(f);
      cur = f.above;
    }
    auto [p4, m4] = one_family_fan(4, ss.deltas[2], cur, x_, y, ord(4));
    for (size_t k = 0; k < p4.size(); ++k) {
      mids.push_back(k == 0 ? cur : m4[k - 1]);
      fs.push_back(p4[k]);
    }
    fs.back().above = U_r;
    shock_segment(x_, y, ss.s, U_l, ss.m1);
    return {fs, mids};
  }

  void weak_weak(size_t i, double y, const Front& A, const Front& B) {
    const FlowState U_l = R_[i];
    const FlowState U_r = R_[i + 2];
    auto& ev = log_event(EventRecord::Kind::Interior, x_, y);
    ev.family_a = A.family;
    ev.family_b = B.family;
    ev.strength_a = A.total_strength();
    ev.strength_b = B.total_strength();
    ev.order_a = A.order;
    ev.order_b = B.order;

    // Below the noise floor the curve re-evaluations would feed rounding
    // error into the non-physical bookkeeping; translate the jumps exactly
    // instead (the deviation from the curve composition is O(|a||b|)).
    const double prod = A.total_strength() * B.total_strength();
    const bool tiny = prod <= 1e-11;

    if (!A.physical() || !B.physical()) {
      if (!B.physical() && A.physical())
        fail("physical front caught a non-physical one", x_, y);
      // Case 2: the non-physical front passes through the physical one.
      std::vector<Front> nf;
      std::vector<FlowState> mids;
      if (tiny) {
        // Translate the physical jump exactly; below the noise floor the
        // non-physical strength keeps its old value bitwise, otherwise it
        // is recomputed from the translated states (the O(|a||b|) growth
        // is genuine and paid for by the leaving pair term).
        Front moved = B;
        moved.x0 = x_;
        moved.y0 = y;
        moved.below = U_l;
        moved.above = FlowState{U_l.u + (U_r.u - R_[i + 1].u),
                                U_l.v + (U_r.v - R_[i + 1].v),
                                U_l.p + (U_r.p - R_[i + 1].p),
                                U_l.rho + (U_r.rho - R_[i + 1].rho)};
        Front np = A;
        np.x0 = x_;
        np.y0 = y;
        np.below = moved.above;
        np.above = U_r;
        if (prod >= 1e-14) np.strength = norm1(U_r, moved.above);
        ev.np_emitted = np.strength;
        nf = {moved, np};
        mids = {moved.above};
        splice(i, i + 1, {nf, mids}, y);
        return;
      }
      const Front moved = rebase(B, U_l, x_, y);
      nf = {moved};
      const Front np = make_np(moved.above, U_r, x_, y, A.order);
      ev.np_emitted = np.strength;
      if (np.strength >= P_.front_epsilon) {
        mids.push_back(moved.above);
        nf.push_back(np);
      } else {
        nf.back().above = U_r;
      }
      splice(i, i + 1, {nf, mids}, y);
      return;
    }

    const bool same_family =
        (A.kind == FrontKind::Contact && B.kind == FrontKind::Contact) ||
        (A.family == B.family && A.kind != FrontKind::Contact &&
         B.kind != FrontKind::Contact);

    if (prod > P_.nu) {
      ev.accurate = true;
      riemann::RiemannSolution sol;
      try {
        sol = riemann::solve_riemann(U_l, U_r, g_, &guard_);
      } catch (const std::exception& e) {
        fail(std::string("interior Riemann: ") + e.what(), x_, y);
      }
      auto ord = [&](int fam) {
        return order_of(fam, A.family, A.order, B.family, B.order);
      };
      splice(i, i + 1, weak_fan(sol.alphas, U_l, U_r, x_, y, ord), y);
      return;
    }

    // Simplified solver.
    std::vector<Front> nf;
    std::vector<FlowState> mids;
    FlowState top = U_l;
    if (same_family && tiny) {
      Front merged = A;
      merged.x0 = x_;
      merged.y0 = y;
      merged.strength = A.strength + B.strength;
      merged.strength3 = A.strength3 + B.strength3;
      merged.order = std::min(A.order, B.order);
      if (merged.kind != FrontKind::Contact)
        merged.kind = merged.strength < 0 ? FrontKind::Shock
                                          : FrontKind::Rarefaction;
      merged.below = U_l;
      merged.above = U_r;
      merged.speed = front_speed(merged, U_l);
      if (merged.total_strength() >= P_.front_epsilon) {
        splice(i, i + 1, {{merged}, {}}, y);
      } else {
        splice(i, i + 1, {{}, {}}, y);
      }
      return;
    }
    if (same_family) {
      if (A.kind == FrontKind::Contact) {
        const double a2 = A.strength + B.strength;
        const double a3 = A.strength3 + B.strength3;
        if (std::abs(a2) + std::abs(a3) >= P_.front_epsilon) {
          Front f;
          f.family = 2;
          f.kind = FrontKind::Contact;
          f.strength = a2;
          f.strength3 = a3;
          f.order = std::min(A.order, B.order);
          f.x0 = x_;
          f.y0 = y;
          f.speed = U_l.v / U_l.u;
          f.below = U_l;
          f.above = curves::contact_curve(U_l, a2, a3);
          nf.push_back(f);
          top = f.above;
        }
      } else {
        const double merged = A.strength + B.strength;
        auto [fs, fm] = one_family_fan(A.family, merged, U_l, x_, y,
                                       std::min(A.order, B.order));
        nf = std::move(fs);
        mids = std::move(fm);
        top = nf.empty() ? U_l : nf.back().above;
      }
    } else {
      if (!(A.family > B.family))
        fail("interior collision with non-approaching families", x_, y);
      if (tiny) {
        // Exact jump translation: no non-physical remainder at all.
        Front lowered = B;
        lowered.x0 = x_;
        lowered.y0 = y;
        lowered.below = U_l;
        lowered.above = FlowState{U_l.u + (U_r.u - R_[i + 1].u),
                                  U_l.v + (U_r.v - R_[i + 1].v),
                                  U_l.p + (U_r.p - R_[i + 1].p),
                                  U_l.rho + (U_r.rho - R_[i + 1].rho)};
        lowered.speed = front_speed(lowered, U_l);
        Front raised = A;
        raised.x0 = x_;
        raised.y0 = y;
        raised.below = lowered.above;
        raised.above = U_r;
        raised.speed = front_speed(raised, lowered.above);
        splice(i, i + 1, {{lowered, raised}, {lowered.above}}, y);
        return;
      }
      // Commute: lower family first, both strengths preserved.
      const Front lowered = rebase(B, U_l, x_, y);
      nf.push_back(lowered);
      const Front raised = rebase(A, lowered.above, x_, y);
      mids.push_back(lowered.above);
      nf.push_back(raised);
      top = raised.above;
    }
    const Front np = make_np(top, U_r, x_, y, std::max(A.order, B.order) + 1);
    ev.np_emitted = np.strength;
    if (np.strength >= P_.front_epsilon) {
      if (!nf.empty()) mids.push_back(top);
      nf.push_back(np);
    } else if (!nf.empty()) {
      nf.back().above = U_r;
    }
    splice(i, i + 1, {nf, mids}, y);
  }

  void apply_boundary(double y) {
    const size_t i = live_.size() - 1;
    const Front A = live_[i].f;
    const FlowState U_l = R_[i];
    const FlowState U_r = R_[i + 1];
    const bool cross = !A.physical() || A.total_strength() <= P_.nu;
    auto& ev = log_event(cross ? EventRecord::Kind::BoundaryCross
                               : EventRecord::Kind::BoundaryReflect,
                         x_, y);
    ev.family_a = A.family;
    ev.strength_a = A.total_strength();
    ev.order_a = A.order;
    if (cross) {
      t_.segments[live_[i].seg].x1 = x_;
      live_.pop_back();
      R_.pop_back();  // boundary state becomes the below state
      boundary_segment(x_);
      return;
    }
    if (A.family == 1)
      fail("1-family front hit the boundary", x_, y);
    ev.accurate = true;
    double d1 = 0.0;
    try {
      d1 = riemann::boundary_pressure_wave(U_l, U_r.p, g_);
    } catch (const std::exception& e) {
      fail(std::string("boundary reflection: ") + e.what(), x_, y);
    }
    t_.segments[live_[i].seg].x1 = x_;
    live_.pop_back();
    R_.pop_back();
    auto [fs, mids] = one_family_fan(1, d1, U_l, x_, y, A.order + 1);
    for (size_t k = 0; k < fs.size(); ++k) {
      push_front(fs[k]);
      R_.push_back(k < mids.size() ? mids[k] : fs[k].above);
    }
    check_state(R_.back(), x_, y);
    boundary_segment(x_);
  }

  void apply_pressure(double yb) {
    const double p_new = steps_val_[next_step_];
    next_step_++;
    const FlowState U1 = R_.back();
    auto& ev = log_event(EventRecord::Kind::PressureStep, x_, yb);
    ev.pressure_jump = p_new - U1.p;
    ev.accurate = true;
    double d1 = 0.0;
    try {
      d1 = riemann::boundary_pressure_wave(U1, p_new, g_);
    } catch (const std::exception& e) {
      fail(std::string("boundary pressure step: ") + e.what(), x_, yb);
    }
    if (std::abs(d1) >= P_.front_epsilon) {
      auto [fs, mids] = one_family_fan(1, d1, U1, x_, yb, 1);
      for (size_t k = 0; k < fs.size(); ++k) {
        push_front(fs[k]);
        R_.push_back(k < mids.size() ? mids[k] : fs[k].above);
      }
      check_state(R_.back(), x_, yb);
    }
    boundary_segment(x_);
  }

  void splice(size_t lo, size_t hi,
              std::pair<std::vector<Front>, std::vector<FlowState>> build,
              double y) {
    splice(lo, hi, build.first, build.second, x_, y);
  }

  void place_initial_fan(const FlowState& below, const FlowState& above,
                         double yi) {
    if (norm1(below, above) < P_.front_epsilon) {
      return;  // no jump; region continues
    }
    riemann::RiemannSolution sol;
    try {
      sol = riemann::solve_riemann(below, above, g_, &guard_);
    } catch (const std::exception& e) {
      fail(std::string("initial Riemann: ") + e.what(), 0.0, yi);
    }
    auto [fs, mids] = weak_fan(sol.alphas, below, above, 0.0, yi,
                               [](int) { return 1; });
    for (size_t k = 0; k < fs.size(); ++k) {
      push_front(fs[k]);
      R_.push_back(k < mids.size() ? mids[k] : fs[k].above);
    }
  }

  Trajectory& t_;
  riemann::SolverGuard guard_;
  GasParams g_;
  TrackingParams P_;

  std::vector<Live> live_;
  std::vector<FlowState> R_;
  double x_ = 0.0;
  double bx_ = 0.0, by_ = 0.0, bslope_ = 0.0;
  int next_id_ = 0;
  std::vector<double> steps_x_;
  std::vector<double> steps_val_;
  size_t next_step_ = 0;
};

}  // namespace

// ---- accurate solver fans ---------------------------------------------

std::vector<Front> accurate_fronts(const FlowState& U_l, const FlowState& U_r,
                                   double delta, const GasParams& g, double x,
                                   double y, double prune) {
  const auto sol = riemann::solve_riemann(U_l, U_r, g);
  return build_weak_fan(sol.alphas, U_l, U_r, x, y, [](int) { return 1; },
                        delta, prune, g)
      .fronts;
}

std::vector<Front> accurate_fronts_strong(const FlowState& U_l,
                                          const FlowState& U_r, double s_guess,
                                          double delta, const GasParams& g,
                                          double x, double y, double prune) {
  const auto ss = riemann::solve_riemann_strong(U_l, U_r, s_guess, g);
  std::vector<Front> out;
  Front sf;
  sf.family = 1;
  sf.kind = FrontKind::StrongShock;
  sf.order = 1;
  sf.x0 = x;
  sf.y0 = y;
  sf.speed = ss.s;
  sf.below = U_l;
  sf.above = ss.m1;
  out.push_back(sf);
  auto rest = build_weak_fan({0.0, ss.deltas[0], ss.deltas[1], ss.deltas[2]},
                             ss.m1, U_r, x, y, [](int) { return 1; }, delta,
                             prune, g);
  out.insert(out.end(), rest.fronts.begin(), rest.fronts.end());
  if (out.size() == 1) out.back().above = U_r;
  return out;
}

// ---- input discretization -------------------------------------------

DiscretizedInputs discretize_inputs(const Scenario& sc, double mu, double dx,
                                    double dy) {
  DiscretizedInputs out;
  const int n0 = static_cast<int>(std::ceil(sc.params.x_max / dx)) + 1;
  out.pb_steps.resize(n0);
  for (int h = 0; h < n0; ++h)
    out.pb_steps[h] = sc.pb((h + 0.5) * dx);

  const double depth = std::max(-sc.uinf_perturbation.support_lo(), dy);
  const int n1 = static_cast<int>(std::ceil(depth / dy)) + 1;
  out.uinf_cells.resize(n1);
  for (int k = 0; k < n1; ++k) {
    const double ymid = -(k + 0.5) * dy;
    out.uinf_cells[k] = sc.uinf(ymid);
  }

  // L1 errors by composite midpoint quadrature on refined subcells.
  auto l1_pb = [&]() {
    double err = 0.0;
    const int sub = 64;
    for (int h = 0; h < n0; ++h)
      for (int q = 0; q < sub; ++q) {
        const double x = (h + (q + 0.5) / sub) * dx;
        err += std::abs(sc.pb(x) - out.pb_steps[h]) * dx / sub;
      }
    return err;
  };
  auto l1_uinf = [&]() {
    double err = 0.0;
    const int sub = 64;
    for (int k = 0; k < n1; ++k)
      for (int q = 0; q < sub; ++q) {
        const double y = -(k + (q + 0.5) / sub) * dy;
        err += norm1(sc.uinf(y), out.uinf_cells[k]) * dy / sub;
      }
    return err;
  };
  out.pb_l1_error = l1_pb();
  out.uinf_l1_error = l1_uinf();
  out.pb_tv = sc.pb_perturbation.total_variation(2);
  out.uinf_tv = 0.0;
  for (int c = 0; c < 4; ++c)
    out.uinf_tv += sc.uinf_perturbation.total_variation(c);
  (void)mu;
  return out;
}

// ---- trajectory queries ---------------------------------------------

double Trajectory::b_at(double x) const {
  const BoundarySeg* s = &boundary.front();
  for (const auto& seg : boundary) {
    if (seg.x0 <= x) s = &seg;
    else break;
  }
  return s->y0 + s->slope * (x - s->x0);
}

double Trajectory::b_slope_at(double x) const {
  const BoundarySeg* s = &boundary.front();
  for (const auto& seg : boundary) {
    if (seg.x0 <= x) s = &seg;
    else break;
  }
  return s->slope;
}

FlowState Trajectory::boundary_state_at(double x) const {
  const BoundarySeg* s = &boundary.front();
  for (const auto& seg : boundary) {
    if (seg.x0 <= x) s = &seg;
    else break;
  }
  return s->Ub;
}

namespace {
// Latest segment that started before x (left limit) or at/before x.
template <class Seg>
const Seg* seg_at(const std::vector<Seg>& v, double x, bool right_limit) {
  const Seg* out = &v.front();
  for (const auto& seg : v) {
    if (right_limit ? (seg.x0 <= x) : (seg.x0 < x)) out = &seg;
    else break;
  }
  return out;
}
}  // namespace

double Trajectory::chi_at(double x) const {
  if (shock.empty()) return 0.0;
  const ShockSeg* s = seg_at(shock, x, true);
  return s->y0 + s->speed * (x - s->x0);
}

double Trajectory::s_at(double x) const {
  if (shock.empty()) return 0.0;
  return seg_at(shock, x, true)->speed;
}

CrossSection Trajectory::section_at(double x, bool right_limit) const {
  CrossSection cs;
  cs.x = x;
  cs.right_limit = right_limit;
  cs.strong_mode = strong_mode;
  std::vector<const SegmentRecord*> alive;
  for (const auto& s : segments) {
    const bool born = right_limit ? (s.x0 <= x) : (s.x0 < x);
    const bool gone = right_limit ? (s.x1 <= x) : (s.x1 < x);
    if (born && !gone) alive.push_back(&s);
  }
  // Co-located fronts: a fan born at this x spreads upward (ascending
  // speeds), while older fronts at one point are converging to collide
  // (the faster one arrived from below). Positions are quantized so that
  // rounding in the collision abscissa cannot scramble the order.
  auto quant = [](double y) { return std::round(y * 1e12); };
  std::sort(alive.begin(), alive.end(),
            [&](const SegmentRecord* a, const SegmentRecord* b) {
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
    Front f;
    f.id = s->id;
    f.family = s->family;
    f.kind = s->kind;
    f.strength = s->strength;
    f.strength3 = s->strength3;
    f.order = s->order;
    f.x0 = s->x0;
    f.y0 = s->y0;
    f.speed = s->speed;
    f.below = s->below;
    f.above = s->above;
    if (f.kind == FrontKind::StrongShock)
      cs.strong_index = static_cast<int>(cs.fronts.size());
    cs.positions.push_back(s->y_at(x));
    cs.fronts.push_back(f);
    cs.regions.push_back(s->below);
  }
  cs.b = b_at(x);
  const auto* bseg = seg_at(boundary, x, right_limit);
  cs.b_slope = bseg->slope;
  cs.Ub = bseg->Ub;
  if (!shock.empty()) {
    cs.chi = chi_at(x);
    cs.s = seg_at(shock, x, right_limit)->speed;
  }
  // The topmost region is the boundary state by construction.
  cs.regions.push_back(cs.Ub);
  return cs;
}

// ---- run ------------------------------------------------------------

Trajectory run(const Scenario& sc) { return run(sc, sc.params); }

Trajectory run(const Scenario& sc, const TrackingParams& params_in) {
  Trajectory t;
  t.gas = sc.gas;
  t.strong_mode = sc.strong_shock();
  t.U_minus_ref = sc.U_minus;
  t.U_plus_ref = sc.U_plus;
  t.s0_ref = sc.s0;

  TrackingParams P = params_in.with_defaults();
  if (P.lambda_hat <= 0.0) {
    const double l4m = gas::eigenvalue(sc.U_minus, 4, sc.gas);
    const double l4p = gas::eigenvalue(sc.U_plus, 4, sc.gas);
    P.lambda_hat = 1.2 * std::max(l4m, l4p) + 0.1;
  }
  t.params = P;

  const auto disc = discretize_inputs(sc, P.mu, P.dx, P.dy());
  t.pb_steps = disc.pb_steps;
  t.uinf_cells = disc.uinf_cells;
  t.pb_l1_error = disc.pb_l1_error;
  t.uinf_l1_error = disc.uinf_l1_error;
  if (disc.pb_l1_error >= P.mu || disc.uinf_l1_error >= P.mu)
    throw TrackingError(
        "discretization L1 error does not meet mu; refine dx");

  riemann::SolverGuard guard;
  guard.radius = P.guard_radius;
  guard.refs = {sc.U_minus, sc.U_plus};

  Engine eng(t, guard);
  eng.set_pressure_steps();
  if (t.strong_mode) {
    eng.init_strong();
  } else {
    std::vector<double> breaks;
    std::vector<FlowState> states{sc.U_minus};
    for (int k = static_cast<int>(t.uinf_cells.size()) - 1; k >= 0; --k) {
      breaks.push_back(-(k + 1) * P.dy());
      states.push_back(t.uinf_cells[k]);
    }
    eng.init_weak(0.0, breaks, states);
  }

  // Admission gate: the Glimm functional of the discretized data.
  {
    const auto w = functionals::default_weights(t);
    const auto rep = functionals::glimm_functional(t.section_at(0.0, true), t, w);
    if (rep.F > P.admission_epsilon)
      throw TrackingError("admission threshold exceeded: F(0) = " +
                          std::to_string(rep.F));
  }

  eng.run_to(P.x_max);
  return t;
}

Trajectory run_weak_from_data(const GasParams& gas, const TrackingParams& params_in,
                              const RestartData& data) {
  Trajectory t;
  t.gas = gas;
  t.strong_mode = false;
  t.U_minus_ref = data.U_ref;
  t.U_plus_ref = data.U_ref;

  TrackingParams P = params_in.with_defaults();
  if (P.lambda_hat <= 0.0)
    P.lambda_hat = 1.2 * gas::eigenvalue(data.U_ref, 4, gas) + 0.1;
  t.params = P;
  t.pb_steps = data.pb_steps;

  riemann::SolverGuard guard;
  guard.radius = P.guard_radius;
  guard.refs = {data.U_ref};

  Engine eng(t, guard);
  eng.set_pressure_steps();
  eng.init_weak(data.b0, data.breaks, data.states);
  eng.run_to(P.x_max);
  return t;
}

}  // namespace wedgetrack::tracking
