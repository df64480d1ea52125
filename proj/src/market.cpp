#include "drcournot/market.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace drcournot {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void PeriodDemand::validate() const {
  require(std::isfinite(gamma) && gamma > 0.0, "gamma must be positive");
  require(std::isfinite(intercept) && intercept > 0.0, "intercept must be positive");
  require(std::isfinite(p2) && p2 >= 0.0, "p2 must be nonnegative");
}

void SigmoidConfig::validate() const {
  require(std::isfinite(alpha) && alpha > 0.0, "alpha must be positive");
  require(std::isfinite(xi) && xi >= 0.0, "xi must be nonnegative");
}

void ThermalParams::validate() const {
  require(std::isfinite(c1) && c1 >= 0.0, "thermal.c1 must be nonnegative");
  require(std::isfinite(c2) && c2 >= 0.0, "thermal.c2 must be nonnegative");
  require(std::isfinite(c3), "thermal.c3 must be finite");
  require(std::isfinite(r_max) && r_max > 0.0, "thermal.r_max must be positive");
}

void HydroParams::validate() const {
  require(std::isfinite(c4), "hydro.c4 must be finite");
  require(std::isfinite(w_max) && w_max > 0.0, "hydro.w_max must be positive");
  require(std::isfinite(production.efficiency) && production.efficiency > 0.0,
          "hydro.production must be positive");
}

bool operator==(const PeriodDemand& a, const PeriodDemand& b) {
  return a.gamma == b.gamma && a.intercept == b.intercept && a.p2 == b.p2;
}

bool operator==(const SigmoidConfig& a, const SigmoidConfig& b) {
  return a.alpha == b.alpha && a.xi == b.xi;
}

bool operator==(const ThermalParams& a, const ThermalParams& b) {
  return a.c1 == b.c1 && a.c2 == b.c2 && a.c3 == b.c3 && a.r_max == b.r_max;
}

bool operator==(const HydroParams& a, const HydroParams& b) {
  return a.c4 == b.c4 && a.w_max == b.w_max && a.production == b.production;
}

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double dr_weight(const SigmoidConfig& sc, double q) { return logistic(sc.alpha * (q - sc.xi)); }

double price_no_dr(const PeriodDemand& pd, double q) { return pd.intercept - pd.gamma * q; }

double price_dr_linear(const PeriodDemand& pd, double q) {
  return pd.intercept - pd.p2 - pd.gamma * q;
}

double price_dr(const PeriodDemand& pd, const SigmoidConfig& sc, double q) {
  return price_no_dr(pd, q) - pd.p2 * dr_weight(sc, q);
}

double price_dr_slope(const PeriodDemand& pd, const SigmoidConfig& sc, double q) {
  const double s = dr_weight(sc, q);
  return -pd.gamma - pd.p2 * sc.alpha * s * (1.0 - s);
}

double price_dr_curvature(const PeriodDemand& pd, const SigmoidConfig& sc, double q) {
  const double s = dr_weight(sc, q);
  return -pd.p2 * sc.alpha * sc.alpha * s * (1.0 - s) * (1.0 - 2.0 * s);
}

double price(const PeriodDemand& pd, const SigmoidConfig& sc, MarketMode mode, double q) {
  return mode == MarketMode::DR ? price_dr(pd, sc, q) : price_no_dr(pd, q);
}

double price_slope(const PeriodDemand& pd, const SigmoidConfig& sc, MarketMode mode, double q) {
  return mode == MarketMode::DR ? price_dr_slope(pd, sc, q) : -pd.gamma;
}

double price_curvature(const PeriodDemand& pd, const SigmoidConfig& sc, MarketMode mode,
                       double q) {
  return mode == MarketMode::DR ? price_dr_curvature(pd, sc, q) : 0.0;
}

// Expanded form of -(gamma/2)(q - q_ref)^2 + p*(q - q_ref) + k; vanishes at q = 0 exactly.
double gross_utility(const PeriodDemand& pd, double p_star, double q) {
  return q * (pd.intercept + p_star - 0.5 * pd.gamma * q);
}

double marginal_utility(const PeriodDemand& pd, double p_star, double q) {
  return pd.intercept - pd.gamma * q + p_star;
}

double payoff(const PeriodDemand& pd, double p_star, double q) {
  return gross_utility(pd, p_star, q) - p_star * q;
}

double rebate(const RebateContext& rc, double q) {
  return q < rc.baseline ? rc.p2 * (rc.baseline - q) : 0.0;
}

double thermal_profit(const ThermalParams& tp, const PeriodDemand& pd, const SigmoidConfig& sc,
                      MarketMode mode, double r, double h) {
  return price(pd, sc, mode, r + h) * r - tp.cost(r);
}

double hydro_profit(const HydroParams& hp, const PeriodDemand& pd, const SigmoidConfig& sc,
                    MarketMode mode, double w, double r) {
  const double h = hp.production(w);
  return price(pd, sc, mode, r + h) * h - hp.c4;
}

}  // namespace drcournot
