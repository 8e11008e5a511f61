#ifndef WEDGETRACK_POTENTIAL_HPP
#define WEDGETRACK_POTENTIAL_HPP

#include <array>
#include <vector>

#include "wedgetrack/gas.hpp"
#include "wedgetrack/scenario.hpp"

namespace wedgetrack::potential {

// Steady isentropic potential flow: a 2x2 system in (u, v) with the
// density closed by the Bernoulli law, rho = R(|u|).
struct PotentialState {
  double u = 0.0, v = 0.0;
};

struct PfParams {
  double gamma = 1.4;
  double B = 0.0;  // Bernoulli constant
};

inline double pnorm1(const PotentialState& a, const PotentialState& b) {
  return std::abs(a.u - b.u) + std::abs(a.v - b.v);
}

double density(const PotentialState& w, const PfParams& pf);
double pressure(const PotentialState& w, const PfParams& pf);
double sound_speed2(const PotentialState& w, const PfParams& pf);
bool in_domain(const PotentialState& w, const PfParams& pf);

// families 1 (slow) and 2 (fast)
double eigenvalue(const PotentialState& w, int family, const PfParams& pf);
std::array<double, 2> eigenvector(const PotentialState& w, int family,
                                  const PfParams& pf);

// Embedding into the full Euler variables via the Bernoulli density.
FlowState lift(const PotentialState& w, const PfParams& pf);

PotentialState rarefaction_curve(const PotentialState& w0, int family,
                                 double alpha, const PfParams& pf);

struct PfHugoniotPoint {
  PotentialState state;
  double speed;
};

// Hugoniot of the conservative form s[rho u] = [rho v], s[v] = -[u],
// lambda-parameterized like the Euler curves; alpha < 0 is admissible.
PfHugoniotPoint shock_curve(const PotentialState& w0, int family, double alpha,
                            const PfParams& pf);

PotentialState wave_curve(const PotentialState& w0, int family, double alpha,
                          const PfParams& pf);

struct PfRiemannSolution {
  std::array<double, 2> alphas{};
  PotentialState m1;
  std::array<double, 2> sigma_lo{}, sigma_hi{};
  double residual = 0.0;
};

PfRiemannSolution solve_riemann(const PotentialState& wl,
                                const PotentialState& wr, const PfParams& pf);

// 1-wave strength from the boundary pressure condition
// (R(|Phi_1(d; w)|))^gamma = p2.
double boundary_pressure_wave(const PotentialState& w1, double p2,
                              const PfParams& pf);

// ---- front tracking over the 2-system -------------------------------

enum class PfKind { Shock, Rarefaction, NonPhysical };

struct PfSegment {
  int id = -1;
  int family = 0;  // 1, 2; 3 marks non-physical fronts
  PfKind kind = PfKind::Shock;
  double strength = 0.0;
  int order = 1;
  double x0 = 0.0, y0 = 0.0, speed = 0.0, x1 = 0.0;
  PotentialState below, above;
  double y_at(double x) const { return y0 + speed * (x - x0); }
};

struct PfEventRecord {
  double x = 0.0, y = 0.0;
  int kind = 0;  // 0 interior, 3 reflect, 4 cross, 5 pressure step
  bool accurate = false;
  double np_emitted = 0.0;
};

struct PfTrajectory {
  PfParams pf;
  GasParams gas;
  TrackingParams params;
  std::vector<double> pb_steps;
  std::vector<PfSegment> segments;
  struct BoundarySeg {
    double x0 = 0.0, y0 = 0.0, slope = 0.0;
    PotentialState wb;
  };
  std::vector<BoundarySeg> boundary;
  std::vector<PfEventRecord> events;
  double x_end = 0.0;

  double b_at(double x) const;
  PotentialState boundary_state_at(double x) const;

  struct Section {
    double x = 0.0;
    std::vector<PfSegment> fronts;
    std::vector<double> positions;
    std::vector<PotentialState> regions;
    double b = 0.0, b_slope = 0.0;
  };
  Section section_at(double x, bool right_limit = true) const;
};

PfTrajectory run(const Scenario& sc);
PfTrajectory run(const Scenario& sc, const TrackingParams& params);

// Sampled deviation between the Euler rarefaction leg through the lifted
// state and the lifted potential leg (coincides exactly for alpha >= 0).
double curve_coincidence_deviation(const PotentialState& wl, int pf_family,
                                   double alpha, const PfParams& pf);

}  // namespace wedgetrack::potential

#endif
