#pragma once

// Demand-side and supply-side primitives of the thermal/hydro Cournot market.
//
// Units: quantities in MWh, prices in $/MWh, water release in acre-ft/h.
// Every function here is pure; the structs are plain values.

namespace drcournot {

enum class MarketMode { NoDR, DR };

/// Per-hour demand curve p(q) = intercept - gamma * q, with rebate price p2.
struct PeriodDemand {
  double gamma = 0.0;      // $/MWh^2
  double intercept = 0.0;  // choke price gamma * q_ref, $/MWh
  double p2 = 0.0;         // rebate price, $/MWh

  /// q at which the no-DR price reaches zero.
  double reference_quantity() const { return intercept / gamma; }

  void validate() const;
};

/// Blend between the plain and rebate-shifted demand lines.
struct SigmoidConfig {
  double alpha = 0.1;   // smoothness, 1/MWh
  double xi = 1000.0;   // DR threshold, MWh

  void validate() const;
};

struct ThermalParams {
  double c1 = 0.0;     // $/MWh
  double c2 = 0.0;     // $/MWh^2
  double c3 = 0.0;     // $ per period
  double r_max = 0.0;  // MWh per period

  double cost(double r) const { return c1 * r + 0.5 * c2 * r * r + c3; }
  double marginal_cost(double r) const { return c1 + c2 * r; }

  void validate() const;
};

/// Water-to-energy conversion H(w) = efficiency * w.
struct Production {
  double efficiency = 1.0;

  double operator()(double w) const { return efficiency * w; }
  double slope() const { return efficiency; }
  bool operator==(const Production&) const = default;
};

struct HydroParams {
  double c4 = 0.0;     // $ per period
  double w_max = 0.0;  // acre-ft/h
  Production production;

  void validate() const;
};

struct RebateContext {
  double baseline = 0.0;  // MWh
  double p2 = 0.0;        // $/MWh
};

bool operator==(const PeriodDemand&, const PeriodDemand&);
bool operator==(const SigmoidConfig&, const SigmoidConfig&);
bool operator==(const ThermalParams&, const ThermalParams&);
bool operator==(const HydroParams&, const HydroParams&);

/// 1 / (1 + exp(-x)) without overflow for any finite x.
double logistic(double x);

/// log(1 + exp(x)) without overflow for any finite x.
double softplus(double x);

/// Weight of the rebate line at consumption q: 1 / (1 + exp(alpha * (xi - q))).
double dr_weight(const SigmoidConfig& sc, double q);

double price_no_dr(const PeriodDemand& pd, double q);
double price_dr_linear(const PeriodDemand& pd, double q);
double price_dr(const PeriodDemand& pd, const SigmoidConfig& sc, double q);
double price_dr_slope(const PeriodDemand& pd, const SigmoidConfig& sc, double q);
double price_dr_curvature(const PeriodDemand& pd, const SigmoidConfig& sc, double q);

// Mode dispatch used by the profit evaluators and the KKT assembly.
double price(const PeriodDemand& pd, const SigmoidConfig& sc, MarketMode mode, double q);
double price_slope(const PeriodDemand& pd, const SigmoidConfig& sc, MarketMode mode, double q);
double price_curvature(const PeriodDemand& pd, const SigmoidConfig& sc, MarketMode mode,
                       double q);

/// Quadratic utility around the reference quantity, normalised so G(0) = 0.
/// `p_star` is the equilibrium price the expansion is taken at.
double gross_utility(const PeriodDemand& pd, double p_star, double q);
double marginal_utility(const PeriodDemand& pd, double p_star, double q);

/// Utility minus the energy bill p_star * q.
double payoff(const PeriodDemand& pd, double p_star, double q);

/// p2 * (baseline - q) for consumption below the baseline, zero otherwise.
double rebate(const RebateContext& rc, double q);

/// One-period thermal profit with the hydro rival's energy h held fixed.
double thermal_profit(const ThermalParams& tp, const PeriodDemand& pd, const SigmoidConfig& sc,
                      MarketMode mode, double r, double h);

/// One-period hydro profit at release w with the thermal rival's output r held fixed.
double hydro_profit(const HydroParams& hp, const PeriodDemand& pd, const SigmoidConfig& sc,
                    MarketMode mode, double w, double r);

}  // namespace drcournot
