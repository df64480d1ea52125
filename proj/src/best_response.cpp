#include <algorithm>
#include <cmath>
#include <functional>

#include "drcournot/solver.hpp"

namespace drcournot {

namespace {

// Global maximiser of a smooth (possibly non-concave) f on [0, cap], given f'.
// Local maxima are bracketed on a uniform grid fine enough to resolve the
// sigmoid (spacing <= 1 / (8 alpha)) and refined by bisection; the best of
// those and the two end points wins, leftmost on ties.
double maximize_on_interval(const std::function<double(double)>& f,
                            const std::function<double(double)>& df, double cap,
                            double resolution) {
  const int cells = std::max(2000, static_cast<int>(std::ceil(cap / resolution)));
  const double width = cap / cells;

  double best_x = 0.0;
  double best_f = f(0.0);
  const auto consider = [&](double x) {
    const double v = f(x);
    if (v > best_f) {
      best_f = v;
      best_x = x;
    }
  };

  double left = 0.0;
  double d_left = df(left);
  for (int k = 1; k <= cells; ++k) {
    const double right = k == cells ? cap : k * width;
    const double d_right = df(right);
    if (d_left > 0.0 && d_right <= 0.0) {
      double lo = left, hi = right;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (df(mid) > 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      consider(0.5 * (lo + hi));
    }
    left = right;
    d_left = d_right;
  }
  consider(cap);
  return best_x;
}

}  // namespace

double thermal_best_response(const Scenario& s, std::size_t t, double h) {
  const auto& pd = s.periods.at(t);
  const auto& tp = s.thermal;
  if (s.mode == MarketMode::NoDR) {
    const double raw = (pd.intercept - tp.c1 - pd.gamma * h) / (2.0 * pd.gamma + tp.c2);
    return std::clamp(raw, 0.0, tp.r_max);
  }
  const auto f = [&](double r) { return thermal_profit(tp, pd, s.sigmoid, s.mode, r, h); };
  const auto df = [&](double r) {
    const double q = r + h;
    return price_dr(pd, s.sigmoid, q) + price_dr_slope(pd, s.sigmoid, q) * r -
           tp.marginal_cost(r);
  };
  return maximize_on_interval(f, df, tp.r_max, 0.125 / s.sigmoid.alpha);
}

double hydro_best_response(const Scenario& s, std::size_t t, double r) {
  const auto& pd = s.periods.at(t);
  const auto& hp = s.hydro;
  const double eta = hp.production.slope();
  if (s.mode == MarketMode::NoDR) {
    const double raw_h = (pd.intercept - pd.gamma * r) / (2.0 * pd.gamma);
    return std::clamp(raw_h / eta, 0.0, hp.w_max);
  }
  const auto f = [&](double w) { return hydro_profit(hp, pd, s.sigmoid, s.mode, w, r); };
  const auto df = [&](double w) {
    const double h = hp.production(w);
    const double q = r + h;
    return eta * (price_dr(pd, s.sigmoid, q) + price_dr_slope(pd, s.sigmoid, q) * h);
  };
  return maximize_on_interval(f, df, hp.w_max, 0.125 / (s.sigmoid.alpha * eta));
}

EquilibriumSolution best_response_equilibrium(const Scenario& s, double tol, int max_sweeps) {
  s.validate();
  const std::size_t n = s.horizon();
  std::vector<double> r(n), w(n);
  for (std::size_t t = 0; t < n; ++t) {
    const auto cf = closed_form_no_dr(s.periods[t], s.thermal, s.hydro);
    r[t] = cf.r;
    w[t] = cf.w;
  }

  int sweep = 0;
  bool done = false;
  while (!done && sweep < max_sweeps) {
    ++sweep;
    double moved = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double r_new = thermal_best_response(s, t, s.hydro.production(w[t]));
      const double w_new = hydro_best_response(s, t, r_new);
      moved = std::max({moved, std::abs(r_new - r[t]), std::abs(w_new - w[t])});
      r[t] = r_new;
      w[t] = w_new;
    }
    done = moved < tol;
  }

  // Package in the no-balance MCP layout; capacity duals from the stationarity rows.
  const McpSystem m =
      s.mode == MarketMode::NoDR ? assemble_no_dr(s) : assemble_dr_uncoupled(s);
  const auto& L = m.layout();
  Eigen::VectorXd z = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(L.size()));
  for (std::size_t t = 0; t < n; ++t) {
    z[static_cast<Eigen::Index>(L.r(t))] = r[t];
    z[static_cast<Eigen::Index>(L.w(t))] = w[t];
  }
  const Eigen::VectorXd F = m.residual(z);
  for (std::size_t t = 0; t < n; ++t) {
    if (r[t] >= s.thermal.r_max)
      z[static_cast<Eigen::Index>(L.mu_thermal(t))] =
          std::max(0.0, -F[static_cast<Eigen::Index>(L.r(t))]);
    if (w[t] >= s.hydro.w_max)
      z[static_cast<Eigen::Index>(L.mu_hydro(t))] =
          std::max(0.0, -F[static_cast<Eigen::Index>(L.w(t))]);
  }

  EquilibriumSolution sol = make_solution(m, z);
  sol.status = done ? SolveStatus::Converged : SolveStatus::MaxIter;
  sol.iterations = sweep;
  sol.merit = fb_merit(m, z);
  sol.merit_history = {sol.merit};
  return sol;
}

}  // namespace drcournot
