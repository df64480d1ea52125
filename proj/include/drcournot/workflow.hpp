#pragma once

#include "drcournot/analysis.hpp"

namespace drcournot {

/// Per-period no-DR equilibrium of `s` (its mode field is ignored).
EquilibriumSolution solve_no_dr(const Scenario& s, const SolverConfig& cfg = {});

struct DrRun {
  EquilibriumSolution no_dr;  // also the rebate baseline
  EquilibriumSolution dr;
  double d_net = 0.0;
  bool d_net_derived = false;  // true when taken from the no-DR solve
};

/// DR equilibrium under the balance constraint. The target is s.d_net when set,
/// otherwise the total consumption of the no-DR equilibrium.
DrRun solve_dr(const Scenario& s, const SolverConfig& cfg = {});

/// Largest relative gap |a - b| / max(1, |a|) over all r_t and w_t.
double max_primal_gap(const EquilibriumSolution& a, const EquilibriumSolution& b);

}  // namespace drcournot
