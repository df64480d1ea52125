#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "drcournot/solver.hpp"

namespace drcournot {

/// Integral of the inverse demand curve over [0, q]. The DR curve integrates in
/// closed form through softplus.
double demand_integral(const PeriodDemand& pd, const SigmoidConfig& sc, MarketMode mode, double q);

/// Area under the inverse demand curve up to q minus the bill p_star * q. The DR
/// rebate transfer is not included; see SurplusReport::rebate.
double consumer_surplus(const PeriodDemand& pd, const SigmoidConfig& sc, MarketMode mode,
                        double q, double p_star);

struct ProducerSurplus {
  double thermal = 0.0;
  double hydro = 0.0;
  double total() const { return thermal + hydro; }
};

/// Profit objectives of both generators summed over the horizon.
ProducerSurplus producer_surplus(const EquilibriumSolution& sol, const Scenario& s);

struct PeriodSurplus {
  double q = 0.0;
  double price = 0.0;
  double consumer = 0.0;
  double thermal = 0.0;
  double hydro = 0.0;
  double rebate = 0.0;
};

struct SurplusReport {
  std::vector<PeriodSurplus> periods;
  PeriodSurplus total;  // price field holds the quantity-weighted mean price
};

/// Per-period surplus breakdown. Rebates are paid only for DR solutions, against
/// `baseline` (per-period MWh); an empty baseline means the closed-form no-DR
/// consumption of each period.
SurplusReport surplus_report(const Scenario& s, const EquilibriumSolution& sol,
                             std::span<const double> baseline = {});

struct PeriodComparison {
  double q_no_dr = 0.0;
  double q_dr = 0.0;
  double delta_q = 0.0;          // q_dr - q_no_dr
  double price_no_dr = 0.0;
  double price_dr = 0.0;
  double delta_price = 0.0;      // price_dr - price_no_dr
  double reduction_pct = 0.0;    // 100 * (q_no_dr - q_dr) / q_no_dr
};

struct ComparisonReport {
  std::vector<PeriodComparison> periods;
  std::vector<std::size_t> peak_window;  // periods with p2 > 0
  double peak_reduction_pct = 0.0;       // over the peak window, aggregate
  double total_delta_q = 0.0;
  SurplusReport no_dr;
  SurplusReport dr;
};

/// Side-by-side view of a no-DR and a DR solution of the same scenario. Rebates in
/// the DR surplus use the no-DR consumption as baseline.
ComparisonReport compare_runs(const Scenario& s, const EquilibriumSolution& no_dr,
                              const EquilibriumSolution& dr);

/// Percent change of `value` relative to `base`.
double percent_change(double value, double base);

struct SweepRow {
  double p2 = 0.0;
  double price = 0.0;
  double q = 0.0;
  double reduction_pct = 0.0;
  double consumer_surplus = 0.0;
  double generation_surplus = 0.0;
  double cs_change_pct = 0.0;
  double ps_change_pct = 0.0;
  SolveStatus status = SolveStatus::Converged;
  std::string error;  // non-empty if the row could not be produced

  bool ok() const { return error.empty() && status == SolveStatus::Converged; }
};

struct SweepTable {
  std::vector<SweepRow> rows;
  bool all_ok() const;
};

/// One-period DR game (no balance constraint) solved at each rebate price in
/// `p2_grid`. Percent changes are relative to the no-DR equilibrium of the same
/// period. Rows are independent and may be solved on `threads` workers; output
/// order follows the grid.
SweepTable incentive_sweep(const PeriodDemand& base, const SigmoidConfig& sc,
                           const ThermalParams& tp, const HydroParams& hp,
                           std::span<const double> p2_grid, const SolverConfig& cfg = {},
                           unsigned threads = 1);

/// `steps` evenly spaced values from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, int steps);

}  // namespace drcournot
