#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>

#include "drcournot/scenario_io.hpp"
#include "drcournot/workflow.hpp"

namespace testing_support {

using namespace drcournot;

inline std::filesystem::path data_dir() { return DRCOURNOT_DATA_DIR; }

inline Scenario reference_day() { return load_scenario(data_dir() / "reference_day.scenario"); }

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

inline double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

/// Valid scenario with parameters spread around the reference data. Roughly a
/// third of the draws put a capacity bound in play.
inline Scenario random_scenario(std::mt19937_64& rng, MarketMode mode, std::size_t horizon = 4) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto draw = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };
  Scenario s;
  s.mode = mode;
  s.sigmoid = {draw(0.05, 0.12), draw(800.0, 1200.0)};
  s.thermal = {draw(5.0, 15.0), draw(0.01, 0.04), draw(0.0, 100.0), draw(250.0, 600.0)};
  s.hydro = {draw(0.0, 100.0), draw(400.0, 1100.0), Production{draw(0.8, 1.2)}};
  for (std::size_t t = 0; t < horizon; ++t) {
    PeriodDemand pd;
    pd.gamma = draw(0.05, 0.07);
    pd.intercept = draw(80.0, 130.0);
    pd.p2 = mode == MarketMode::DR && u(rng) < 0.6 ? draw(1.0, 20.0) : 0.0;
    s.periods.push_back(pd);
  }
  s.validate();
  return s;
}

/// Random point inside the iterate box of `m`, multipliers in [-10, 10].
inline Eigen::VectorXd random_point(const McpSystem& m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto& L = m.layout();
  const auto& s = m.scenario();
  Eigen::VectorXd z(m.size());
  for (std::size_t t = 0; t < L.periods(); ++t) {
    z[L.r(t)] = s.thermal.r_max * u(rng);
    z[L.w(t)] = s.hydro.w_max * u(rng);
    z[L.mu_thermal(t)] = 5.0 * u(rng);
    z[L.mu_hydro(t)] = 5.0 * u(rng);
  }
  for (std::size_t k = 0; k < L.multipliers(); ++k) z[L.multiplier(k)] = -10.0 + 20.0 * u(rng);
  return z;
}

/// Central difference of f at x with step h.
template <class F>
double central_diff(F&& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Five-point central difference; error O(h^4).
template <class F>
double central_diff5(F&& f, double x, double h) {
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12.0 * h);
}

// Thermal and hydro stationarity rows rebuilt from central differences of the
// profit evaluators. Returns the largest relative mismatch against m.residual(z).
inline double profit_gradient_gap(const McpSystem& m, const Eigen::VectorXd& z) {
  const Scenario& s = m.scenario();
  const auto& L = m.layout();
  const Eigen::VectorXd F = m.residual(z);
  const double eta = s.hydro.production.slope();
  double l_r = 0.0, l_h = 0.0;
  if (m.coupling() == Coupling::Shared) l_r = l_h = z[L.multiplier(0)];
  if (m.coupling() == Coupling::PerPlayer) {
    l_r = z[L.multiplier(0)];
    l_h = z[L.multiplier(1)];
  }
  double gap = 0.0;
  for (std::size_t t = 0; t < L.periods(); ++t) {
    const PeriodDemand& pd = s.periods[t];
    const double r = z[L.r(t)], w = z[L.w(t)];
    const double h = s.hydro.production(w);
    auto pi_t = [&](double x) { return thermal_profit(s.thermal, pd, s.sigmoid, m.mode(), x, h); };
    auto pi_h = [&](double x) { return hydro_profit(s.hydro, pd, s.sigmoid, m.mode(), x, r); };
    const double row_r = -central_diff5(pi_t, r, 1e-2) + z[L.mu_thermal(t)] + l_r;
    const double row_w = -central_diff5(pi_h, w, 1e-2) + eta * l_h + z[L.mu_hydro(t)];
    gap = std::max({gap, rel_err(F[L.r(t)], row_r), rel_err(F[L.w(t)], row_w)});
  }
  return gap;
}

}  // namespace testing_support
