#include "wedgetrack/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "wedgetrack/curves.hpp"
#include "wedgetrack/riemann.hpp"

namespace wedgetrack {

std::array<double, 4> PiecewiseSignal::value(double t) const {
  std::array<double, 4> v{};
  for (const auto& b : boxes)
    if (t >= b.lo && t < b.hi)
      for (int i = 0; i < 4; ++i) v[i] += b.delta[i];
  for (const auto& s : sines)
    if (t >= s.lo && t < s.hi)
      v[s.component] +=
          s.amp * std::sin(2.0 * M_PI * (t - s.lo) / s.period);
  return v;
}

double PiecewiseSignal::support_lo() const {
  double lo = 0.0;
  for (const auto& b : boxes) lo = std::min(lo, b.lo);
  for (const auto& s : sines) lo = std::min(lo, s.lo);
  return lo;
}

double PiecewiseSignal::support_hi() const {
  double hi = 0.0;
  for (const auto& b : boxes) hi = std::max(hi, b.hi);
  for (const auto& s : sines) hi = std::max(hi, s.hi);
  return hi;
}

double PiecewiseSignal::total_variation(int c) const {
  double tv = 0.0;
  for (const auto& b : boxes) tv += 2.0 * std::abs(b.delta[c]);
  for (const auto& s : sines) {
    if (s.component != c) continue;
    const int n = 8192;
    const double h = (s.hi - s.lo) / n;
    double prev = 0.0;
    for (int i = 1; i <= n; ++i) {
      const double t = s.lo + i * h;
      const double v = (t < s.hi)
                           ? s.amp * std::sin(2.0 * M_PI * (t - s.lo) / s.period)
                           : 0.0;
      tv += std::abs(v - prev);
      prev = v;
    }
    tv += std::abs(prev);
  }
  return tv;
}

double PiecewiseSignal::sup_norm(int c) const {
  double m = 0.0;
  for (const auto& b : boxes) m += std::abs(b.delta[c]);
  for (const auto& s : sines)
    if (s.component == c) m += std::abs(s.amp);
  return m;
}

FlowState Scenario::uinf(double y) const {
  const auto d = uinf_perturbation.value(y);
  if (mode == RunMode::Euler)
    return {U_minus.u + d[0], U_minus.v + d[1], U_minus.p + d[2],
            U_minus.rho + d[3]};
  // Comparison regimes: the incoming Euler data is the lift of the
  // velocity perturbation, so it stays on the Bernoulli manifold.
  const double u = speed_inf + d[0], v = d[1];
  const double arg = (gas.gamma - 1.0) / gas.gamma *
                     (B_inf - 0.5 * (u * u + v * v));
  const double rho = std::pow(arg, 1.0 / (gas.gamma - 1.0));
  return {u, v, std::pow(rho, gas.gamma), rho};
}

std::array<double, 2> Scenario::pf_uinf(double y) const {
  const auto d = uinf_perturbation.value(y);
  return {speed_inf + d[0], d[1]};
}

namespace {

double bernoulli_density(double speed2, double B, double gamma) {
  const double arg = (gamma - 1.0) / gamma * (B - 0.5 * speed2);
  if (!(arg > 0.0))
    throw std::invalid_argument(
        "Condition P1.1(a) violated: |u|^2 >= 2 B_inf");
  return std::pow(arg, 1.0 / (gamma - 1.0));
}

}  // namespace

void validate_scenario(Scenario& sc) {
  if (!(sc.gas.gamma > 1.0))
    throw std::invalid_argument("GasParams invariant violated: gamma <= 1");
  if (!(sc.speed_inf > 0.0))
    throw std::invalid_argument("Condition 1.1(a) violated: |u_inf| <= 0");

  if (sc.mode == RunMode::Euler) {
    if (!(sc.p_inf > 0.0) || !(sc.rho_inf > 0.0))
      throw std::invalid_argument("Condition 1.1(a) violated: p, rho <= 0");
    const FlowState aligned{sc.speed_inf, 0.0, sc.p_inf, sc.rho_inf};
    if (!gas::is_supersonic(aligned, sc.gas))
      throw std::invalid_argument(
          "Condition 1.1(a) violated: background not supersonic (M <= 1)");
    sc.p_sonic = curves::critical_pressure(aligned, sc.gas);
    if (!(sc.pb_bar > sc.p_inf) || !(sc.pb_bar < sc.p_sonic)) {
      std::ostringstream os;
      os << "Condition 1.2(a) violated: need p_inf < pb_bar < p_sonic ("
         << sc.p_inf << " < " << sc.pb_bar << " < " << sc.p_sonic << ")";
      throw std::invalid_argument(os.str());
    }
    // Incoming angle from the shock polar so that the unperturbed wedge
    // boundary is exactly flat.
    const auto polar = curves::shock_polar_state(aligned, sc.pb_bar, sc.gas);
    sc.theta_inf = -std::atan2(polar.state.v, polar.state.u);
    sc.U_minus = {sc.speed_inf * std::cos(sc.theta_inf),
                  sc.speed_inf * std::sin(sc.theta_inf), sc.p_inf, sc.rho_inf};
    const auto inv = riemann::solve_inverse_riemann(sc.U_minus, sc.pb_bar, sc.gas);
    sc.U_plus = inv.U_plus;
    sc.s0 = inv.s0;
  } else {
    if (!(sc.B_inf > 0.0))
      throw std::invalid_argument("Condition P1.1(a) violated: B_inf <= 0");
    const double q2 = sc.speed_inf * sc.speed_inf;
    if (!(q2 < 2.0 * sc.B_inf) ||
        !(q2 > 2.0 * (sc.gas.gamma - 1.0) * sc.B_inf / (sc.gas.gamma + 1.0)))
      throw std::invalid_argument(
          "Condition P1.1(a) violated: |u_inf|^2 outside "
          "(2(gamma-1)B/(gamma+1), 2B)");
    const double rho = bernoulli_density(q2, sc.B_inf, sc.gas.gamma);
    const double p = std::pow(rho, sc.gas.gamma);
    sc.rho_inf = rho;
    sc.p_inf = p;
    const double pb_required = p;
    if (sc.pb_bar == 0.0) sc.pb_bar = pb_required;
    if (std::abs(sc.pb_bar - pb_required) > 1e-12)
      throw std::invalid_argument(
          "Condition E1.2(a) violated: pb_bar must equal R(|u_inf|)^gamma");
    sc.U_minus = {sc.speed_inf, 0.0, p, rho};
    if (!gas::is_supersonic(sc.U_minus, sc.gas))
      throw std::invalid_argument(
          "Condition P1.1(a) violated: background not supersonic");
    sc.U_plus = sc.U_minus;
    sc.s0 = 0.0;
    sc.theta_inf = 0.0;
  }
}

namespace {

using nlohmann::json;

int component_index(const json& j) {
  if (j.is_number_integer()) return j.get<int>();
  const std::string s = j.get<std::string>();
  if (s == "u") return 0;
  if (s == "v") return 1;
  if (s == "p") return 2;
  if (s == "rho") return 3;
  throw std::invalid_argument("scenario: unknown component '" + s + "'");
}

PiecewiseSignal parse_signal(const json& j, bool pressure_only) {
  PiecewiseSignal sig;
  if (j.contains("boxes")) {
    for (const auto& b : j.at("boxes")) {
      PerturbationBox box;
      box.lo = b.at("lo").get<double>();
      box.hi = b.at("hi").get<double>();
      if (!(box.hi > box.lo))
        throw std::invalid_argument("scenario: box with hi <= lo");
      if (pressure_only) {
        box.delta[2] = b.at("dp").get<double>();
      } else {
        box.delta[0] = b.value("du", 0.0);
        box.delta[1] = b.value("dv", 0.0);
        box.delta[2] = b.value("dp", 0.0);
        box.delta[3] = b.value("drho", 0.0);
      }
      sig.boxes.push_back(box);
    }
  }
  if (j.contains("sines")) {
    for (const auto& s : j.at("sines")) {
      PerturbationSine ps;
      ps.lo = s.at("lo").get<double>();
      ps.hi = s.at("hi").get<double>();
      ps.amp = s.at("amp").get<double>();
      ps.period = s.at("period").get<double>();
      ps.component = pressure_only ? 2 : component_index(s.at("component"));
      if (!(ps.hi > ps.lo) || !(ps.period > 0.0))
        throw std::invalid_argument("scenario: malformed sine perturbation");
      sig.sines.push_back(ps);
    }
  }
  return sig;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json j = json::parse(text);
  Scenario sc;
  sc.gas.gamma = j.value("gamma", 1.4);
  const std::string mode = j.value("mode", "euler");
  if (mode == "euler")
    sc.mode = RunMode::Euler;
  else if (mode == "potential")
    sc.mode = RunMode::Potential;
  else if (mode == "compare")
    sc.mode = RunMode::Compare;
  else
    throw std::invalid_argument("scenario: unknown mode '" + mode + "'");

  const auto& bg = j.at("background");
  sc.speed_inf = bg.at("u").get<double>();
  if (sc.mode == RunMode::Euler) {
    sc.p_inf = bg.at("p").get<double>();
    sc.rho_inf = bg.at("rho").get<double>();
  } else {
    sc.B_inf = bg.at("B").get<double>();
  }

  if (j.contains("boundary_pressure")) {
    const auto& bp = j.at("boundary_pressure");
    sc.pb_bar = bp.value("base", 0.0);
    sc.pb_perturbation = parse_signal(bp, true);
  }
  if (j.contains("incoming"))
    sc.uinf_perturbation = parse_signal(j.at("incoming"), false);

  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    sc.params.mu = s.value("mu", sc.params.mu);
    sc.params.dx = s.value("dx", sc.params.dx);
    sc.params.delta = s.value("delta", 0.0);
    sc.params.nu = s.value("nu", 0.0);
    sc.params.lambda_hat = s.value("lambda_hat", 0.0);
    sc.params.x_max = s.value("x_max", sc.params.x_max);
    sc.params.guard_radius = s.value("guard_radius", sc.params.guard_radius);
    sc.params.admission_epsilon =
        s.value("admission_epsilon", sc.params.admission_epsilon);
  }

  validate_scenario(sc);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("scenario: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

}  // namespace wedgetrack
