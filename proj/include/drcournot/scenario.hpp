#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "drcournot/market.hpp"

namespace drcournot {

/// How the shared balance constraint is priced in DR mode.
///   Shared    - one free multiplier used by both players (variational equilibrium).
///   PerPlayer - one multiplier per player with the balance row duplicated, plus a
///               consensus regularisation eps * (l_own - l_other) on each copy.
enum class MultiplierMode { Shared, PerPlayer };

/// A full market instance over a horizon of hourly periods.
struct Scenario {
  std::vector<PeriodDemand> periods;
  SigmoidConfig sigmoid;
  ThermalParams thermal;
  HydroParams hydro;
  MarketMode mode = MarketMode::NoDR;
  std::optional<double> d_net;  // MWh, DR balance target
  MultiplierMode multiplier_mode = MultiplierMode::Shared;

  std::size_t horizon() const { return periods.size(); }

  /// Throws std::invalid_argument naming the first violated invariant.
  void validate() const;

  /// Copy with `mode` replaced.
  Scenario with_mode(MarketMode m) const;

  bool operator==(const Scenario&) const;
};

/// Hours (0-based) with a positive rebate price.
std::vector<std::size_t> dr_active_periods(const Scenario& s);

}  // namespace drcournot
