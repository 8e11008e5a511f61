#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"
#include "wedgetrack/comparison.hpp"
#include "wedgetrack/numerics.hpp"

using namespace wedgetrack;

namespace {

// Compare-mode scenario with a single incoming u-jump of size eps; shock-
// dominated (the jump decomposes into compressive waves).
Scenario shock_family(double eps, double x_max = 2.0) {
  auto sc = wtest::compare_scenario(x_max, 1e-7, 0.25);
  sc.params.lambda_hat = 1.3;  // dy = 0.65: the box edges sit on the grid
  sc.uinf_perturbation.boxes.push_back({-7.8, -0.65, {eps, 0, 0, 0}});
  validate_scenario(sc);
  return sc;
}

// Monotone pressure drops within the horizon: every emitted 1-wave is a
// rarefaction, in both models.
Scenario rarefaction_family(double eps, double x_max = 2.0) {
  auto sc = wtest::compare_scenario(x_max, 1e-7, 0.25);
  sc.params.lambda_hat = 1.3;
  sc.pb_perturbation.boxes.push_back({0.5, 1e9, {0, 0, -eps, 0}});
  sc.pb_perturbation.boxes.push_back({1.0, 1e9, {0, 0, -0.5 * eps, 0}});
  validate_scenario(sc);
  return sc;
}

}  // namespace

TEST_CASE("identical background runs are at distance zero") {
  auto sc = wtest::compare_scenario(2.0, 1e-4, 0.25);
  const auto et = tracking::run(sc);
  const auto pt = potential::run(sc);
  CHECK(comparison::compare_runs(et, pt, 1.0) == 0.0);
  CHECK(comparison::compare_runs(et, pt, 2.0) == 0.0);
  CHECK_THROWS_AS(comparison::compare_runs(et, pt, 3.0),
                  std::invalid_argument);
}

TEST_CASE("rarefaction-only scenarios coincide to solver tolerance") {
  auto sc = rarefaction_family(0.01);
  const auto et = tracking::run(sc);
  const auto pt = potential::run(sc);
  for (double x : {0.5, 1.0, 2.0}) {
    const double d = comparison::compare_runs(et, pt, x);
    CAPTURE(x);
    CHECK(d < 1e-7 * 10.0);  // 1e-7 x domain measure
  }
}

TEST_CASE("shock scenarios separate the two models") {
  auto sc = shock_family(0.02);
  const auto et = tracking::run(sc);
  const auto pt = potential::run(sc);
  const double d = comparison::compare_runs(et, pt, 2.0);
  CHECK(d > 1e-8);
}

TEST_CASE("cubic scaling law") {
  const std::vector<double> eps{0.02, 0.01, 0.005};
  const std::vector<double> xs{1.0, 2.0};
  const auto rep = comparison::cubic_scaling_study(
      [](double e) { return shock_family(e); }, eps, xs, 1);
  CAPTURE(rep.y_over_x);
  CHECK(rep.slope == doctest::Approx(3.0).epsilon(0.15));
  CHECK(rep.linearity_max_dev < 0.25);
  for (bool ex : rep.excluded) CHECK(!ex);
}

TEST_CASE("integrated defect dominates the end-to-end distance") {
  auto sc = shock_family(0.02);
  const auto et = tracking::run(sc);
  const auto pt = potential::run(sc);
  const double Y2 = comparison::compare_runs(et, pt, 2.0);
  const auto rep = comparison::semigroup_defect(
      pt, sc, 0.05, {0.25, 0.75, 1.25, 1.75}, 1e-7);
  double integral = 0.0;
  for (const auto& s : rep.samples) {
    REQUIRE(!s.flagged);
    integral += 0.5 * s.rate;  // each sample represents a 0.5-wide strip
  }
  CHECK(integral > 0.0);
  const double L = Y2 / integral;
  CHECK(L > 0.01);
  CHECK(L < 100.0);  // Lipschitz factor of the restart semigroup
}

TEST_CASE("semigroup defect rates") {
  SUBCASE("single shock front: cubic in the strength") {
    std::vector<double> rates;
    for (double a : {0.02, 0.01}) {
      auto sc = shock_family(a, 1.0);
      const auto pt = potential::run(sc);
      const auto rep = comparison::semigroup_defect(pt, sc, 0.05, {0.4}, 1e-7);
      REQUIRE(!rep.samples.empty());
      REQUIRE(!rep.samples.front().flagged);
      rates.push_back(rep.samples.front().rate);
    }
    const double slope = std::log(rates[0] / rates[1]) / std::log(2.0);
    CHECK(slope == doctest::Approx(3.0).epsilon(0.12));
  }
  SUBCASE("single rarefaction front: quadratic in the strength") {
    // A sharp lifted rarefaction jump: the restart fans it out over a
    // width O(alpha h) while the unsplit front stays sharp.
    std::vector<double> rates;
    for (double a : {0.02, 0.01}) {
      auto sc = wtest::compare_scenario(1.0, 1e-7, 0.25);
      sc.params.lambda_hat = 1.3;
      validate_scenario(sc);
      const potential::PfParams pf{sc.gas.gamma, sc.B_inf};
      // integrate the 1-curve backwards so the boundary-adjacent state is
      // the background (the restart data stays pressure-consistent)
      const potential::PotentialState wr{sc.speed_inf, 0.0};
      const auto down = wedgetrack::num::dopri5<2>(
          [&](const std::array<double, 2>& y) {
            return potential::eigenvector({y[0], y[1]}, 1, pf);
          },
          {wr.u, wr.v}, -a, 64);
      const potential::PotentialState wl{down[0], down[1]};
      lyapunov::AlignedProfile w0;
      w0.b = 0.0;
      w0.theta = {-0.4};
      w0.states = {potential::lift(wl, pf), potential::lift(wr, pf)};
      const double h = 0.05;
      const auto et = comparison::euler_restart(sc, w0, 0.0, h, 1e-7);
      // sharp-front reference: the jump transported at the below-state
      // characteristic speed
      lyapunov::AlignedProfile ref = w0;
      ref.theta = {-0.4 + potential::eigenvalue(wl, 1, pf) * h};
      rates.push_back(
          lyapunov::y_distance(lyapunov::aligned_profile(et, h), ref) / h);
    }
    const double slope = std::log(rates[0] / rates[1]) / std::log(2.0);
    CHECK(slope == doctest::Approx(2.0).epsilon(0.2));
  }
}
