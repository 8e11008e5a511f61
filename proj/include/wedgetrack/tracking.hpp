#ifndef WEDGETRACK_TRACKING_HPP
#define WEDGETRACK_TRACKING_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "wedgetrack/gas.hpp"
#include "wedgetrack/scenario.hpp"

namespace wedgetrack::tracking {

enum class FrontKind { Shock, Rarefaction, Contact, NonPhysical, StrongShock };

// A moving discontinuity. Contacts carry the vortex-sheet and entropy-wave
// strengths jointly (they coincide in the physical plane); non-physical
// fronts carry |U_above - U_below| and travel at lambda_hat.
struct Front {
  int id = -1;
  int family = 0;  // 1..5; merged contact uses 2; strong shock uses 1
  FrontKind kind = FrontKind::Shock;
  double strength = 0.0;   // alpha, alpha2 for contacts, |dU| for NP
  double strength3 = 0.0;  // alpha3 for contacts
  int order = 1;           // generation order
  double x0 = 0.0, y0 = 0.0, speed = 0.0;
  FlowState below, above;

  double y_at(double x) const { return y0 + speed * (x - x0); }
  bool physical() const { return kind != FrontKind::NonPhysical; }
  bool strong() const { return kind == FrontKind::StrongShock; }
  double total_strength() const {
    return kind == FrontKind::Contact
               ? std::abs(strength) + std::abs(strength3)
               : std::abs(strength);
  }
};

// Closed piece of a front's polygonal trajectory, used to reconstruct any
// cross-section and to integrate along fronts.
struct SegmentRecord {
  int id = -1;
  int family = 0;
  FrontKind kind = FrontKind::Shock;
  double strength = 0.0, strength3 = 0.0;
  int order = 1;
  double x0 = 0.0, y0 = 0.0, speed = 0.0;
  double x1 = 0.0;  // death abscissa (x_end if still alive)
  FlowState below, above;
  double y_at(double x) const { return y0 + speed * (x - x0); }
};

struct EventRecord {
  enum class Kind {
    Interior,
    ShockAbove,       // weak front hits the strong shock from above
    ShockBelow,       // weak front hits the strong shock from below
    BoundaryReflect,  // physical front reflects off the boundary
    BoundaryCross,    // front crosses the boundary (|a| <= nu or NP)
    PressureStep      // boundary pressure sample changes at x = h dx
  };
  double x = 0.0, y = 0.0;
  Kind kind = Kind::Interior;
  bool accurate = false;
  int family_a = 0, family_b = 0;  // incoming: a below b
  double strength_a = 0.0, strength_b = 0.0;
  int order_a = 0, order_b = 0;
  double np_emitted = 0.0;
  double pressure_jump = 0.0;
};

struct CrossSection {
  double x = 0.0;
  bool right_limit = true;
  bool strong_mode = false;
  std::vector<Front> fronts;       // ascending y
  std::vector<double> positions;   // y of fronts.at(i) at x
  std::vector<FlowState> regions;  // fronts.size() + 1, bottom to top
  double b = 0.0, b_slope = 0.0;
  FlowState Ub;
  int strong_index = -1;
  double chi = 0.0, s = 0.0;
};

struct TrackingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Trajectory {
  GasParams gas;
  TrackingParams params;
  bool strong_mode = true;
  FlowState U_minus_ref, U_plus_ref;
  double s0_ref = 0.0;

  std::vector<double> pb_steps;      // strip h value on [(h-1)dx, h dx)
  std::vector<FlowState> uinf_cells; // cell k holds l = -(k+1)
  double pb_l1_error = 0.0, uinf_l1_error = 0.0;

  std::vector<SegmentRecord> segments;

  struct BoundarySeg {
    double x0 = 0.0, y0 = 0.0, slope = 0.0;
    FlowState Ub;
  };
  std::vector<BoundarySeg> boundary;

  struct ShockSeg {
    double x0 = 0.0, y0 = 0.0, speed = 0.0;
    FlowState below, above;
  };
  std::vector<ShockSeg> shock;

  std::vector<EventRecord> events;
  double x_end = 0.0;

  double b_at(double x) const;
  double b_slope_at(double x) const;
  FlowState boundary_state_at(double x) const;
  double chi_at(double x) const;
  double s_at(double x) const;
  // right_limit = true gives the section just after any event at x.
  CrossSection section_at(double x, bool right_limit = true) const;
};

struct DiscretizedInputs {
  std::vector<double> pb_steps;
  std::vector<FlowState> uinf_cells;
  double pb_l1_error = 0.0, uinf_l1_error = 0.0;
  double pb_tv = 0.0, uinf_tv = 0.0;
};

// Accurate-solver front fans, exposed for direct use and testing. Shocks
// and contacts travel at their exact speeds; rarefactions split into the
// minimal number of sub-fronts of strength below delta, each moving at
// the below-state characteristic speed.
std::vector<Front> accurate_fronts(const FlowState& U_l, const FlowState& U_r,
                                   double delta, const GasParams& g,
                                   double x = 0.0, double y = 0.0,
                                   double prune = 1e-13);

// Variant containing the strong 1-shock: the 1-leg is the
// speed-parameterized strong shock, resolved from the guess s_guess.
std::vector<Front> accurate_fronts_strong(const FlowState& U_l,
                                          const FlowState& U_r,
                                          double s_guess, double delta,
                                          const GasParams& g, double x = 0.0,
                                          double y = 0.0,
                                          double prune = 1e-13);

DiscretizedInputs discretize_inputs(const Scenario& sc, double mu, double dx,
                                    double dy);

// Runs the scenario to params.x_max. Euler mode carries the strong shock;
// Compare mode runs the weak-wave-only Euler engine.
Trajectory run(const Scenario& sc);
Trajectory run(const Scenario& sc, const TrackingParams& params);

// Restart from explicit piecewise-constant data (the semigroup evaluator).
// breaks are ascending y below b0; states has one more entry than breaks.
struct RestartData {
  double b0 = 0.0;
  std::vector<double> breaks;
  std::vector<FlowState> states;
  std::vector<double> pb_steps;  // strip values from the restart abscissa
  FlowState U_ref;               // guard reference
};

Trajectory run_weak_from_data(const GasParams& gas, const TrackingParams& params,
                              const RestartData& data);

}  // namespace wedgetrack::tracking

#endif
