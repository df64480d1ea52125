#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"

using namespace drcournot;
using namespace testing_support;

namespace {

// Brute-force maximiser of a concave-enough 1-D profit on [0, cap]: coarse grid,
// then golden-section refinement around the best cell.
template <class F>
double grid_argmax(F&& f, double cap) {
  const int cells = 20000;
  int best = 0;
  for (int i = 1; i <= cells; ++i)
    if (f(cap * i / cells) > f(cap * best / cells)) best = i;
  double a = cap * std::max(0, best - 1) / cells, b = cap * std::min(cells, best + 1) / cells;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int k = 0; k < 200 && b - a > 1e-12; ++k) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    if (f(c) >= f(d))
      b = d;
    else
      a = c;
  }
  return 0.5 * (a + b);
}

Scenario one_period(PeriodDemand pd, ThermalParams tp, HydroParams hp) {
  Scenario s;
  s.periods = {pd};
  s.thermal = tp;
  s.hydro = hp;
  return s;
}

Eigen::VectorXd neutral_start(const McpSystem& m) {
  const auto& L = m.layout();
  const auto& s = m.scenario();
  Eigen::VectorXd z = Eigen::VectorXd::Zero(m.size());
  for (std::size_t t = 0; t < L.periods(); ++t) {
    z[L.r(t)] = 0.5 * s.thermal.r_max;
    z[L.w(t)] = 0.5 * s.hydro.w_max;
  }
  return z;
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("closed form interior point") {
    const PeriodDemand pd{0.054, 120.35, 0.0};
    const auto cf = closed_form_no_dr(pd, {10.0, 0.025, 0.0, 500.0}, {0.0, 1000.0, {}});
    const double r = (120.35 / 2.0 - 10.0) / (1.5 * 0.054 + 0.025);
    CHECK(cf.r == doctest::Approx(r).epsilon(1e-12));
    CHECK(cf.h == doctest::Approx((120.35 / 0.054 - r) / 2.0).epsilon(1e-12));
    CHECK(cf.q == doctest::Approx(1351.03).epsilon(1e-5));
    CHECK(cf.price == doctest::Approx(47.3946).epsilon(1e-5));
    CHECK(cf.mu_thermal == 0.0);
    CHECK(cf.mu_hydro == 0.0);
  }

  TEST_CASE("closed form agrees with brute-force best responses") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const SigmoidConfig sc;
    int capped = 0, zero = 0;
    for (int i = 0; i < 60; ++i) {
      const PeriodDemand pd{0.03 + 0.05 * u(rng), 20.0 + 120.0 * u(rng), 0.0};
      const ThermalParams tp{30.0 * u(rng), 0.05 * u(rng), 0.0, 100.0 + 600.0 * u(rng)};
      const HydroParams hp{0.0, 200.0 + 1000.0 * u(rng), Production{0.7 + 0.6 * u(rng)}};
      const auto cf = closed_form_no_dr(pd, tp, hp);
      auto pt = [&](double x) { return thermal_profit(tp, pd, sc, MarketMode::NoDR, x, cf.h); };
      auto ph = [&](double x) { return hydro_profit(hp, pd, sc, MarketMode::NoDR, x, cf.r); };
      CHECK(cf.r == doctest::Approx(grid_argmax(pt, tp.r_max)).epsilon(1e-6).scale(1.0));
      CHECK(cf.w == doctest::Approx(grid_argmax(ph, hp.w_max)).epsilon(1e-6).scale(1.0));
      capped += cf.r == tp.r_max || cf.w == hp.w_max;
      zero += cf.r == 0.0;
      // Duals equal the marginal profit at a binding cap.
      if (cf.r == tp.r_max) CHECK(cf.mu_thermal == doctest::Approx(central_diff5(pt, tp.r_max, 1e-3)));
      if (cf.w == hp.w_max) CHECK(cf.mu_hydro == doctest::Approx(central_diff5(ph, hp.w_max, 1e-3)));
    }
    CHECK(capped > 5);
    CHECK(zero > 0);
  }

  TEST_CASE("Newton reproduces a capacity-bound equilibrium") {
    const Scenario s = one_period({0.05, 130.0, 0.0}, {5.0, 0.01, 0.0, 200.0}, {0.0, 300.0, {}});
    const McpSystem m = assemble_no_dr(s);
    const auto sol = solve(m, {}, neutral_start(m));
    const auto cf = closed_form_no_dr(s.periods[0], s.thermal, s.hydro);
    REQUIRE(sol.converged());
    CHECK(cf.r == 200.0);
    CHECK(cf.w == 300.0);
    CHECK(sol.periods[0].r == doctest::Approx(200.0));
    CHECK(sol.periods[0].w == doctest::Approx(300.0));
    CHECK(sol.periods[0].mu_thermal == doctest::Approx(cf.mu_thermal));
    CHECK(sol.periods[0].mu_hydro == doctest::Approx(cf.mu_hydro));
    CHECK(sol.periods[0].mu_thermal > 0.0);
  }

  TEST_CASE("Newton and best-response iteration agree on random markets") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 20; ++i) {
      const Scenario s = random_scenario(rng, MarketMode::NoDR, 6);
      const McpSystem m = assemble_no_dr(s);
      const auto newton = solve(m, {}, neutral_start(m));
      const auto br = best_response_equilibrium(s);
      REQUIRE(newton.converged());
      REQUIRE(br.converged());
      CHECK(max_primal_gap(br, newton) <= 1e-4);
    }
  }

  TEST_CASE("merit decreases monotonically") {
    const Scenario s = reference_day();
    for (auto mm : {MultiplierMode::Shared, MultiplierMode::PerPlayer}) {
      const auto sol = solve(assemble_dr(s, 22940.0, mm));
      REQUIRE(sol.converged());
      REQUIRE(sol.merit_history.size() == static_cast<std::size_t>(sol.iterations) + 1);
      for (std::size_t k = 1; k < sol.merit_history.size(); ++k)
        CHECK(sol.merit_history[k] < sol.merit_history[k - 1]);
    }
  }

  TEST_CASE("solves are bitwise deterministic") {
    const McpSystem m = assemble_dr(reference_day(), 22940.0);
    const auto a = solve(m);
    const auto b = solve(m);
    CHECK(a.z == b.z);
    CHECK(a.iterations == b.iterations);
  }

  TEST_CASE("rescaling quantities rescales the equilibrium") {
    // Quantities times k with gamma/k, c2/k and caps times k leave prices unchanged.
    const double k = 3.0;
    Scenario s = reference_day().with_mode(MarketMode::NoDR);
    Scenario t = s;
    for (auto& p : t.periods) p.gamma /= k;
    t.thermal.c2 /= k;
    t.thermal.r_max *= k;
    t.hydro.w_max *= k;
    const auto a = solve(assemble_no_dr(s));
    const auto b = solve(assemble_no_dr(t));
    for (std::size_t i = 0; i < s.horizon(); ++i) {
      CHECK(b.periods[i].q == doctest::Approx(k * a.periods[i].q).epsilon(1e-10));
      CHECK(b.periods[i].price == doctest::Approx(a.periods[i].price).epsilon(1e-10));
    }
  }

  TEST_CASE("larger rebates never raise peak consumption") {
    Scenario s;
    s.mode = MarketMode::DR;
    s.thermal = {10.0, 0.025, 0.0, 500.0};
    s.hydro = {0.0, 1000.0, {}};
    double prev = 1e300;
    for (double p2 = 0.0; p2 <= 20.0; p2 += 2.0) {
      s.periods = {{0.054, 120.35, p2}};
      const auto sol = solve(assemble_dr_uncoupled(s));
      REQUIRE(sol.converged());
      CHECK(sol.periods[0].q <= prev + 1e-9);
      prev = sol.periods[0].q;
    }
  }

  TEST_CASE("merit vanishes at solutions and only there") {
    const Scenario s = reference_day().with_mode(MarketMode::NoDR);
    const McpSystem m = assemble_no_dr(s);
    const auto sol = solve(m);
    CHECK(fb_merit(m, sol.z) < 1e-20);
    Eigen::VectorXd z = sol.z;
    z[m.layout().r(3)] += 1.0;
    CHECK(fb_merit(m, z) > 1e-6);
    // A positive dual with a slack cap violates complementarity.
    z = sol.z;
    z[m.layout().mu_thermal(3)] = 1.0;
    CHECK(fb_merit(m, z) > 1e-6);
    CHECK(fb_residual(m, sol.z).size() == static_cast<Eigen::Index>(m.size()));
  }

  TEST_CASE("shared and per-player multipliers give the same DR equilibrium") {
    Scenario s = reference_day();
    const auto shared = solve_dr(s).dr;
    s.multiplier_mode = MultiplierMode::PerPlayer;
    const auto per = solve_dr(s).dr;
    REQUIRE(shared.converged());
    REQUIRE(per.converged());
    CHECK(max_primal_gap(shared, per) <= 1e-6);
    CHECK(per.balance_multipliers.size() == 2);
    CHECK(per.balance_multipliers[0] == doctest::Approx(per.balance_multipliers[1]));
    CHECK(shared.total_q() == doctest::Approx(shared.d_net).epsilon(1e-12));
  }

  TEST_CASE("Nash check: equilibrium passes, perturbed profile fails") {
    const Scenario s = reference_day().with_mode(MarketMode::NoDR);
    const McpSystem m = assemble_no_dr(s);
    const auto sol = solve(m);
    const NashReport ok = verify_nash(s, sol);
    CHECK(ok.ok);
    CHECK(ok.improving.empty());
    CHECK(ok.deviations_checked > 0);

    Eigen::VectorXd z = sol.z;
    z[m.layout().r(10)] += 40.0;
    const NashReport bad = verify_nash(s, make_solution(m, z));
    CHECK_FALSE(bad.ok);
    REQUIRE(bad.best_thermal);
    CHECK(bad.best_thermal->period == 10);
    CHECK(bad.best_thermal->delta < 0.0);
    CHECK(bad.best_thermal->gain > 0.0);
  }

  TEST_CASE("Nash check at a zero-output corner") {
    // Marginal cost above the choke price keeps the thermal unit off.
    const Scenario s = one_period({0.05, 40.0, 0.0}, {45.0, 0.01, 0.0, 300.0}, {0.0, 1000.0, {}});
    const auto sol = solve(assemble_no_dr(s));
    REQUIRE(sol.converged());
    CHECK(sol.periods[0].r == doctest::Approx(0.0).scale(1.0));
    CHECK(sol.periods[0].w == doctest::Approx(400.0));
    CHECK(verify_nash(s, sol).ok);
  }

  TEST_CASE("configuration validation") {
    SolverConfig cfg;
    cfg.tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.armijo.backtrack = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    const McpSystem m = assemble_no_dr(reference_day().with_mode(MarketMode::NoDR));
    CHECK_THROWS_AS(solve(m, {}, Eigen::VectorXd::Zero(4)), std::invalid_argument);
    CHECK(to_string(SolveStatus::LineSearchStall) == "line_search_stall");
  }

  TEST_CASE("iteration cap is reported") {
    const McpSystem m = assemble_dr(reference_day(), 22940.0);
    SolverConfig cfg;
    cfg.max_iter = 1;
    const auto sol = solve(m, cfg);
    CHECK(sol.status == SolveStatus::MaxIter);
    CHECK_FALSE(sol.converged());
  }
}
