#include "drcournot/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

namespace drcournot {

double demand_integral(const PeriodDemand& pd, const SigmoidConfig& sc, MarketMode mode,
                       double q) {
  const double linear = pd.intercept * q - 0.5 * pd.gamma * q * q;
  if (mode == MarketMode::NoDR) return linear;
  const double a = sc.alpha;
  return linear - (pd.p2 / a) * (softplus(a * (q - sc.xi)) - softplus(-a * sc.xi));
}

double consumer_surplus(const PeriodDemand& pd, const SigmoidConfig& sc, MarketMode mode,
                        double q, double p_star) {
  return demand_integral(pd, sc, mode, q) - p_star * q;
}

ProducerSurplus producer_surplus(const EquilibriumSolution& sol, const Scenario& s) {
  const auto [thermal, hydro] = total_profits(s, sol);
  return {thermal, hydro};
}

SurplusReport surplus_report(const Scenario& s, const EquilibriumSolution& sol,
                             std::span<const double> baseline) {
  const std::size_t n = s.horizon();
  if (sol.periods.size() != n) throw std::invalid_argument("solution horizon does not match scenario");
  if (!baseline.empty() && baseline.size() != n)
    throw std::invalid_argument("rebate baseline length does not match horizon");

  SurplusReport rep;
  rep.periods.reserve(n);
  double weighted_price = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const auto& pd = s.periods[t];
    const auto& o = sol.periods[t];
    PeriodSurplus ps;
    ps.q = o.q;
    ps.price = o.price;
    ps.consumer = consumer_surplus(pd, s.sigmoid, sol.mode, o.q, o.price);
    ps.thermal = thermal_profit(s.thermal, pd, s.sigmoid, sol.mode, o.r, o.h);
    ps.hydro = hydro_profit(s.hydro, pd, s.sigmoid, sol.mode, o.w, o.r);
    if (sol.mode == MarketMode::DR) {
      const double beta =
          baseline.empty() ? closed_form_no_dr(pd, s.thermal, s.hydro).q : baseline[t];
      ps.rebate = rebate({beta, pd.p2}, o.q);
    }
    rep.total.q += ps.q;
    rep.total.consumer += ps.consumer;
    rep.total.thermal += ps.thermal;
    rep.total.hydro += ps.hydro;
    rep.total.rebate += ps.rebate;
    weighted_price += ps.price * ps.q;
    rep.periods.push_back(ps);
  }
  rep.total.price = rep.total.q > 0.0 ? weighted_price / rep.total.q : 0.0;
  return rep;
}

double percent_change(double value, double base) { return 100.0 * (value - base) / base; }

ComparisonReport compare_runs(const Scenario& s, const EquilibriumSolution& no_dr,
                              const EquilibriumSolution& dr) {
  const std::size_t n = s.horizon();
  if (no_dr.periods.size() != n || dr.periods.size() != n)
    throw std::invalid_argument("compare_runs: solutions do not share the scenario horizon");

  ComparisonReport rep;
  rep.peak_window = dr_active_periods(s);
  double peak_no_dr = 0.0, peak_dr = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    PeriodComparison c;
    c.q_no_dr = no_dr.periods[t].q;
    c.q_dr = dr.periods[t].q;
    c.delta_q = c.q_dr - c.q_no_dr;
    c.price_no_dr = no_dr.periods[t].price;
    c.price_dr = dr.periods[t].price;
    c.delta_price = c.price_dr - c.price_no_dr;
    c.reduction_pct = c.q_no_dr != 0.0 ? 100.0 * (c.q_no_dr - c.q_dr) / c.q_no_dr : 0.0;
    rep.total_delta_q += c.delta_q;
    rep.periods.push_back(c);
  }
  for (std::size_t t : rep.peak_window) {
    peak_no_dr += rep.periods[t].q_no_dr;
    peak_dr += rep.periods[t].q_dr;
  }
  rep.peak_reduction_pct = peak_no_dr > 0.0 ? 100.0 * (peak_no_dr - peak_dr) / peak_no_dr : 0.0;

  const std::vector<double> baseline = no_dr.quantities();
  rep.no_dr = surplus_report(s, no_dr);
  rep.dr = surplus_report(s, dr, baseline);
  return rep;
}

bool SweepTable::all_ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.ok(); });
}

namespace {

SweepRow sweep_point(const PeriodDemand& base, const SigmoidConfig& sc, const ThermalParams& tp,
                     const HydroParams& hp, double p2, const SolverConfig& cfg,
                     const ClosedFormResult& ref, double ref_cs, double ref_ps) {
  SweepRow row;
  row.p2 = p2;
  try {
    Scenario s;
    s.periods = {PeriodDemand{base.gamma, base.intercept, p2}};
    s.sigmoid = sc;
    s.thermal = tp;
    s.hydro = hp;
    s.mode = MarketMode::DR;
    const auto sol = solve(assemble_dr_uncoupled(s), cfg);
    const auto& o = sol.periods.front();
    row.status = sol.status;
    row.price = o.price;
    row.q = o.q;
    row.reduction_pct = 100.0 * (ref.q - o.q) / ref.q;
    row.consumer_surplus = consumer_surplus(s.periods.front(), sc, MarketMode::DR, o.q, o.price);
    row.generation_surplus = producer_surplus(sol, s).total();
    row.cs_change_pct = percent_change(row.consumer_surplus, ref_cs);
    row.ps_change_pct = percent_change(row.generation_surplus, ref_ps);
    if (!sol.converged()) row.error = "solver status " + to_string(sol.status);
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

SweepTable incentive_sweep(const PeriodDemand& base, const SigmoidConfig& sc,
                           const ThermalParams& tp, const HydroParams& hp,
                           std::span<const double> p2_grid, const SolverConfig& cfg,
                           unsigned threads) {
  const PeriodDemand no_rebate{base.gamma, base.intercept, 0.0};
  no_rebate.validate();
  const auto ref = closed_form_no_dr(no_rebate, tp, hp);
  const double ref_cs = consumer_surplus(no_rebate, sc, MarketMode::NoDR, ref.q, ref.price);
  const double ref_ps = thermal_profit(tp, no_rebate, sc, MarketMode::NoDR, ref.r, ref.h) +
                        hydro_profit(hp, no_rebate, sc, MarketMode::NoDR, ref.w, ref.r);

  SweepTable table;
  table.rows.resize(p2_grid.size());
  const auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t k = begin; k < p2_grid.size(); k += stride)
      table.rows[k] = sweep_point(base, sc, tp, hp, p2_grid[k], cfg, ref, ref_cs, ref_ps);
  };

  const std::size_t workers =
      std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, p2_grid.size()));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < workers; ++k) pool.emplace_back(work, k, workers);
  }
  return table;
}

std::vector<double> linspace(double lo, double hi, int steps) {
  if (steps < 2) throw std::invalid_argument("linspace needs at least 2 steps");
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k)
    out[static_cast<std::size_t>(k)] = k == steps - 1 ? hi : lo + (hi - lo) * k / (steps - 1);
  return out;
}

}  // namespace drcournot
