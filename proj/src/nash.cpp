#include <cmath>
#include <stdexcept>
#include <tuple>

#include "drcournot/solver.hpp"

namespace drcournot {

std::string to_string(Player p) { return p == Player::Thermal ? "thermal" : "hydro"; }

std::pair<double, double> total_profits(const Scenario& s, const EquilibriumSolution& sol) {
  if (sol.periods.size() != s.horizon())
    throw std::invalid_argument("solution horizon does not match scenario");
  double thermal = 0.0, hydro = 0.0;
  for (std::size_t t = 0; t < s.horizon(); ++t) {
    const auto& p = sol.periods[t];
    thermal += thermal_profit(s.thermal, s.periods[t], s.sigmoid, sol.mode, p.r, p.h);
    hydro += hydro_profit(s.hydro, s.periods[t], s.sigmoid, sol.mode, p.w, p.r);
  }
  return {thermal, hydro};
}

namespace {

struct PlayerView {
  Player player;
  const Scenario& s;
  const EquilibriumSolution& sol;

  double cap() const {
    return player == Player::Thermal ? s.thermal.r_max : s.hydro.production(s.hydro.w_max);
  }
  double energy(std::size_t t) const {
    return player == Player::Thermal ? sol.periods[t].r : sol.periods[t].h;
  }
  // This player's profit in period t with its own energy set to x.
  double profit(std::size_t t, double x) const {
    const auto& p = sol.periods[t];
    if (player == Player::Thermal)
      return thermal_profit(s.thermal, s.periods[t], s.sigmoid, sol.mode, x, p.h);
    const double w = x / s.hydro.production.slope();
    return hydro_profit(s.hydro, s.periods[t], s.sigmoid, sol.mode, w, p.r);
  }
};

}  // namespace

NashReport verify_nash(const Scenario& s, const EquilibriumSolution& sol,
                       const DeviationGrid& grid) {
  if (sol.periods.size() != s.horizon())
    throw std::invalid_argument("solution horizon does not match scenario");

  NashReport report;
  std::tie(report.thermal_profit, report.hydro_profit) = total_profits(s, sol);
  const std::size_t n = s.horizon();
  const bool transfers = sol.coupling != Coupling::None;

  for (Player player : {Player::Thermal, Player::Hydro}) {
    const PlayerView view{player, s, sol};
    const double base_total =
        player == Player::Thermal ? report.thermal_profit : report.hydro_profit;
    const double threshold = 1e-6 * (1.0 + std::abs(base_total));
    const double cap = view.cap();
    std::optional<Deviation>& best =
        player == Player::Thermal ? report.best_thermal : report.best_hydro;

    const auto feasible = [&](double x) { return x >= 0.0 && x <= cap; };
    const auto record = [&](Deviation d) {
      ++report.deviations_checked;
      if (d.gain > threshold) {
        report.ok = false;
        report.improving.push_back(d);
        if (!best || d.gain > best->gain) best = d;
      }
    };

    for (double step : grid.steps) {
      for (double delta : {step, -step}) {
        for (std::size_t i = 0; i < n; ++i) {
          const double xi = view.energy(i) + delta;
          if (!feasible(xi)) continue;
          const double gain_i = view.profit(i, xi) - view.profit(i, view.energy(i));
          if (!transfers) {
            record({player, i, std::nullopt, delta, gain_i});
            continue;
          }
          for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double xj = view.energy(j) - delta;
            if (!feasible(xj)) continue;
            const double gain_j = view.profit(j, xj) - view.profit(j, view.energy(j));
            record({player, i, j, delta, gain_i + gain_j});
          }
        }
      }
    }
  }
  return report;
}

}  // namespace drcournot
