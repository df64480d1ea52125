#include <doctest.h>

#include <cmath>

#include "support.hpp"

using namespace drcournot;
using namespace testing_support;

namespace {

// Composite Simpson rule.
template <class F>
double simpson(F&& f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

const PeriodDemand kPeak{0.054, 120.35, 20.0};
const ThermalParams kThermal{10.0, 0.025, 0.0, 500.0};
const HydroParams kHydro{0.0, 1000.0, {}};

}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("demand integral against quadrature") {
    const SigmoidConfig sc;
    for (auto mode : {MarketMode::NoDR, MarketMode::DR}) {
      CHECK(demand_integral(kPeak, sc, mode, 0.0) == 0.0);
      for (double q : {300.0, 990.0, 1000.0, 1046.0, 1351.0, 2000.0}) {
        auto p = [&](double x) { return price(kPeak, sc, mode, x); };
        CHECK(rel_err(demand_integral(kPeak, sc, mode, q), simpson(p, 0.0, q)) < 1e-10);
      }
    }
  }

  TEST_CASE("consumer surplus at the peak-hour no-DR equilibrium") {
    const auto cf = closed_form_no_dr({0.054, 120.35, 0.0}, kThermal, kHydro);
    const double cs = consumer_surplus(kPeak, {}, MarketMode::NoDR, cf.q, cf.price);
    // Triangle under a linear demand curve.
    CHECK(cs == doctest::Approx(0.5 * 0.054 * cf.q * cf.q).epsilon(1e-12));
  }

  TEST_CASE("producer surplus sums the profit evaluators") {
    const Scenario s = reference_day();
    const auto sol = solve_dr(s).dr;
    const ProducerSurplus ps = producer_surplus(sol, s);
    double thermal = 0.0, hydro = 0.0;
    for (std::size_t t = 0; t < s.horizon(); ++t) {
      const auto& p = sol.periods[t];
      thermal += thermal_profit(s.thermal, s.periods[t], s.sigmoid, MarketMode::DR, p.r, p.h);
      hydro += hydro_profit(s.hydro, s.periods[t], s.sigmoid, MarketMode::DR, p.w, p.r);
    }
    CHECK(ps.thermal == doctest::Approx(thermal).epsilon(1e-12));
    CHECK(ps.hydro == doctest::Approx(hydro).epsilon(1e-12));
    CHECK(ps.total() == doctest::Approx(thermal + hydro).epsilon(1e-12));
    const auto [tp, hp] = total_profits(s, sol);
    CHECK(tp == doctest::Approx(thermal).epsilon(1e-12));
    CHECK(hp == doctest::Approx(hydro).epsilon(1e-12));
  }

  TEST_CASE("surplus report") {
    const Scenario s = reference_day();
    const DrRun run = solve_dr(s);
    const SurplusReport plain = surplus_report(s.with_mode(MarketMode::NoDR), run.no_dr);
    for (const auto& p : plain.periods) CHECK(p.rebate == 0.0);
    double pq = 0.0;
    for (const auto& p : plain.periods) pq += p.price * p.q;
    CHECK(plain.total.price == doctest::Approx(pq / plain.total.q));

    const auto baseline = run.no_dr.quantities();
    const SurplusReport dr = surplus_report(s, run.dr, baseline);
    CHECK(dr.periods[19].rebate ==
          doctest::Approx(20.0 * (baseline[19] - run.dr.periods[19].q)));
    CHECK(dr.periods[0].rebate == 0.0);
    // The default baseline is the closed-form no-DR consumption.
    const SurplusReport implicit = surplus_report(s, run.dr);
    CHECK(implicit.total.rebate == doctest::Approx(dr.total.rebate).epsilon(1e-9));
    std::vector<double> short_baseline(3, 1.0);
    CHECK_THROWS_AS(surplus_report(s, run.dr, short_baseline), std::invalid_argument);
  }

  TEST_CASE("mode comparison conserves total consumption") {
    const Scenario s = reference_day();
    const DrRun run = solve_dr(s);
    const ComparisonReport rep = compare_runs(s, run.no_dr, run.dr);
    CHECK(std::abs(rep.total_delta_q) < 1e-6);
    CHECK(rep.peak_window == std::vector<std::size_t>{18, 19, 20});
    CHECK(rep.periods[19].delta_q < 0.0);
    CHECK(rep.periods[0].delta_q > 0.0);
    CHECK(rep.periods[19].reduction_pct ==
          doctest::Approx(100.0 * (rep.periods[19].q_no_dr - rep.periods[19].q_dr) /
                          rep.periods[19].q_no_dr));
  }

  TEST_CASE("incentive sweep is monotone") {
    const auto grid = linspace(0.0, 20.0, 11);
    const SweepTable table = incentive_sweep(kPeak, {}, kThermal, kHydro, grid);
    REQUIRE(table.all_ok());
    REQUIRE(table.rows.size() == 11);
    CHECK(table.rows[0].reduction_pct == doctest::Approx(0.0).scale(1.0));
    CHECK(table.rows[0].cs_change_pct == doctest::Approx(0.0).scale(1.0));
    CHECK(table.rows[0].ps_change_pct == doctest::Approx(0.0).scale(1.0));
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
      const auto& a = table.rows[i - 1];
      const auto& b = table.rows[i];
      CHECK(b.p2 > a.p2);
      CHECK(b.q < a.q);
      CHECK(b.price < a.price);
      CHECK(b.consumer_surplus > a.consumer_surplus);
      CHECK(b.generation_surplus < a.generation_surplus);
    }
  }

  TEST_CASE("sweep output does not depend on the thread count") {
    const auto grid = linspace(0.0, 20.0, 9);
    const SweepTable one = incentive_sweep(kPeak, {}, kThermal, kHydro, grid, {}, 1);
    const SweepTable many = incentive_sweep(kPeak, {}, kThermal, kHydro, grid, {}, 4);
    REQUIRE(one.rows.size() == many.rows.size());
    for (std::size_t i = 0; i < one.rows.size(); ++i) {
      CHECK(one.rows[i].q == many.rows[i].q);
      CHECK(one.rows[i].price == many.rows[i].price);
    }
  }

  TEST_CASE("helpers") {
    CHECK(percent_change(110.0, 100.0) == doctest::Approx(10.0));
    CHECK(percent_change(50.0, 100.0) == doctest::Approx(-50.0));
    const auto g = linspace(0.0, 1.0, 5);
    CHECK(g == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK_THROWS_AS(linspace(0.0, 1.0, 1), std::invalid_argument);
  }
}
