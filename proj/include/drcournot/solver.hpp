#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "drcournot/equilibrium.hpp"

namespace drcournot {

struct LineSearchParams {
  double sufficient_decrease = 1e-4;
  double backtrack = 0.5;
  double min_step = 1e-12;
};

/// Where Newton starts when no z0 is given.
///   NoDrClosedForm    - per-period closed-form no-DR equilibrium, duals from the
///                       closed form, multipliers 0.
///   ThresholdAnchored - as above, then every period with p2 > 0 whose closed-form
///                       consumption exceeds xi is rescaled to q = xi + 2/alpha.
///   Auto              - ThresholdAnchored for balance-coupled DR systems,
///                       NoDrClosedForm otherwise.
enum class StartStrategy { Auto, NoDrClosedForm, ThresholdAnchored };

struct SolverConfig {
  double tol = 1e-10;
  int max_iter = 200;
  LineSearchParams armijo;
  bool fd_check = false;
  StartStrategy start = StartStrategy::Auto;

  void validate() const;
};

enum class SolveStatus { Converged, MaxIter, LineSearchStall };

std::string to_string(SolveStatus s);

struct PeriodOutcome {
  double r = 0.0;      // MWh
  double w = 0.0;      // acre-ft/h
  double h = 0.0;      // MWh
  double q = 0.0;      // MWh, r + h
  double price = 0.0;  // $/MWh
  double mu_thermal = 0.0;
  double mu_hydro = 0.0;
};

struct EquilibriumSolution {
  MarketMode mode = MarketMode::NoDR;
  Coupling coupling = Coupling::None;
  double d_net = 0.0;
  std::vector<PeriodOutcome> periods;
  std::vector<double> balance_multipliers;
  SolveStatus status = SolveStatus::MaxIter;
  int iterations = 0;
  double merit = 0.0;
  std::vector<double> merit_history;  // merit at the start and after each accepted step
  std::optional<double> jacobian_fd_error;  // set when SolverConfig::fd_check ran
  Eigen::VectorXd z;

  bool converged() const { return status == SolveStatus::Converged; }
  double total_q() const;
  std::vector<double> quantities() const;
};

/// Fischer-Burmeister residual Phi(z) of the MCP. Rows with one finite bound use
/// phi(z - l, F) or -phi(u - z, -F); rows with two use phi(z - l, -phi(u - z, -F));
/// free rows are F itself. Phi(z) = 0 exactly at MCP solutions.
Eigen::VectorXd fb_residual(const McpSystem& m, const Eigen::VectorXd& z);

/// 0.5 * ||Phi(z)||^2.
double fb_merit(const McpSystem& m, const Eigen::VectorXd& z);

/// Largest componentwise |J - J_fd| / max(1, |J|) against central differences with
/// step 1e-6 * max(1, |z_i|).
double jacobian_fd_error(const McpSystem& m, const Eigen::VectorXd& z);

Eigen::VectorXd initial_point(const McpSystem& m, StartStrategy strategy);

/// Semismooth Newton on the FB reformulation with Armijo backtracking on the merit
/// function. Deterministic given (m, cfg, z0).
EquilibriumSolution solve(const McpSystem& m, const SolverConfig& cfg = {},
                          const std::optional<Eigen::VectorXd>& z0 = std::nullopt);

/// Reads primal/dual values and prices out of an MCP vector.
EquilibriumSolution make_solution(const McpSystem& m, const Eigen::VectorXd& z);

struct ClosedFormResult {
  double r = 0.0;
  double w = 0.0;
  double h = 0.0;
  double q = 0.0;
  double price = 0.0;
  double mu_thermal = 0.0;
  double mu_hydro = 0.0;
};

/// Exact one-period no-DR equilibrium, including the capacity and zero-output
/// corners. Interior case: r = (intercept/2 - c1) / (1.5 gamma + c2),
/// H = (q_ref - r) / 2.
ClosedFormResult closed_form_no_dr(const PeriodDemand& pd, const ThermalParams& tp,
                                   const HydroParams& hp);

/// Gauss-Seidel over exact best responses (closed form without DR, global 1-D
/// maximisation with DR), per period and ignoring any balance constraint. Stops
/// when a sweep moves no variable by more than `tol`; gives up after `max_sweeps`
/// with status MaxIter.
EquilibriumSolution best_response_equilibrium(const Scenario& s, double tol = 1e-9,
                                              int max_sweeps = 10000);

/// Profit-maximising thermal output on [0, r_max] against rival energy h. Among
/// equally good points the leftmost wins.
double thermal_best_response(const Scenario& s, std::size_t t, double h);

/// Profit-maximising release on [0, w_max] against thermal output r.
double hydro_best_response(const Scenario& s, std::size_t t, double r);

enum class Player { Thermal, Hydro };

std::string to_string(Player p);

struct Deviation {
  Player player = Player::Thermal;
  std::size_t period = 0;                // receives +delta
  std::optional<std::size_t> partner;    // gives up delta (balance-preserving transfer)
  double delta = 0.0;                    // MWh of energy moved
  double gain = 0.0;                     // $ change in total profit
};

struct DeviationGrid {
  std::vector<double> steps{1.0, 10.0, 50.0};
};

struct NashReport {
  bool ok = true;
  double thermal_profit = 0.0;
  double hydro_profit = 0.0;
  std::vector<Deviation> improving;
  std::optional<Deviation> best_thermal;
  std::optional<Deviation> best_hydro;
  std::size_t deviations_checked = 0;
};

/// Total (all-period) profits of both players at a solution.
std::pair<double, double> total_profits(const Scenario& s, const EquilibriumSolution& sol);

/// Scans unilateral deviations of each player. Decoupled solutions are perturbed
/// one period at a time; balance-coupled ones by moving +-delta from one period to
/// another. A deviation counts as improving when it raises the player's total
/// profit by more than 1e-6 * (1 + |profit|).
NashReport verify_nash(const Scenario& s, const EquilibriumSolution& sol,
                       const DeviationGrid& grid = {});

}  // namespace drcournot
