#include "drcournot/workflow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace drcournot {

EquilibriumSolution solve_no_dr(const Scenario& s, const SolverConfig& cfg) {
  return solve(assemble_no_dr(s.with_mode(MarketMode::NoDR)), cfg);
}

DrRun solve_dr(const Scenario& s, const SolverConfig& cfg) {
  DrRun run;
  run.no_dr = solve_no_dr(s, cfg);
  if (s.d_net) {
    run.d_net = *s.d_net;
  } else {
    if (!run.no_dr.converged())
      throw std::runtime_error("cannot derive d_net: no-DR solve " + to_string(run.no_dr.status));
    run.d_net = run.no_dr.total_q();
    run.d_net_derived = true;
  }
  run.dr = solve(assemble_dr(s.with_mode(MarketMode::DR), run.d_net, s.multiplier_mode), cfg);
  return run;
}

double max_primal_gap(const EquilibriumSolution& a, const EquilibriumSolution& b) {
  if (a.periods.size() != b.periods.size())
    throw std::invalid_argument("solutions have different horizons");
  double gap = 0.0;
  const auto rel = [](double x, double y) { return std::abs(x - y) / std::max(1.0, std::abs(x)); };
  for (std::size_t t = 0; t < a.periods.size(); ++t) {
    gap = std::max({gap, rel(a.periods[t].r, b.periods[t].r), rel(a.periods[t].w, b.periods[t].w)});
  }
  return gap;
}

}  // namespace drcournot
