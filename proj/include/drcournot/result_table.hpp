#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "drcournot/analysis.hpp"

namespace drcournot {

// CSV output: comma separated, '.' decimals, LF line endings, one header row.
// Lines starting with '#' before the header carry run metadata.

struct TableOptions {
  int precision = 6;  // significant digits
  std::vector<std::string> comments;
};

std::string format_number(double v, int precision);

/// Columns: hour, r_mwh, w, h_mwh, q_mwh, price, mu_t, mu_h, cs, ps_thermal,
/// ps_hydro, rebate. One row per period then a TOTAL row (sums; price and duals
/// left empty).
void write_result_table(std::ostream& os, const EquilibriumSolution& sol,
                        const SurplusReport& surplus, const TableOptions& opt = {});

/// Per-period no-DR vs DR quantities, prices, reductions and surpluses, then TOTAL.
void write_comparison_table(std::ostream& os, const ComparisonReport& rep,
                            const TableOptions& opt = {});

void write_sweep_table(std::ostream& os, const SweepTable& table, const TableOptions& opt = {});

}  // namespace drcournot
