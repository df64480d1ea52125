#pragma once

#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "drcournot/scenario.hpp"

namespace drcournot {

/// Which balance constraint, if any, links the periods.
enum class Coupling {
  None,       // periods decoupled (no-DR market, or the one-period DR game)
  Shared,     // one multiplier, one balance row
  PerPlayer,  // l_r and l_h, balance row duplicated
};

/// Fixed ordering of the MCP unknowns:
///   [ r_1..r_n | w_1..w_n | muT_1..muT_n | muH_1..muH_n | multipliers ]
class VariableLayout {
 public:
  VariableLayout(std::size_t periods, std::size_t multipliers)
      : periods_(periods), multipliers_(multipliers) {}

  std::size_t periods() const { return periods_; }
  std::size_t multipliers() const { return multipliers_; }
  std::size_t size() const { return 4 * periods_ + multipliers_; }

  std::size_t r(std::size_t t) const { return t; }
  std::size_t w(std::size_t t) const { return periods_ + t; }
  std::size_t mu_thermal(std::size_t t) const { return 2 * periods_ + t; }
  std::size_t mu_hydro(std::size_t t) const { return 3 * periods_ + t; }
  std::size_t multiplier(std::size_t k) const { return 4 * periods_ + k; }

 private:
  std::size_t periods_;
  std::size_t multipliers_;
};

/// Joint KKT system of the thermal and hydro profit problems, posed as a mixed
/// complementarity problem over box bounds [lower, upper]:
///   lower_i < z_i < upper_i  =>  F_i(z) = 0
///   z_i = lower_i            =>  F_i(z) >= 0
///   z_i = upper_i            =>  F_i(z) <= 0
///
/// Rows follow the variable layout. For period t with q = r + H(w) and inverse
/// demand P (linear or sigmoid-blended):
///   F_r   = -P(q) - P'(q) r + c1 + c2 r + muT + l_r
///   F_w   = H'(w) [-P(q) - P'(q) H(w) + l_h] + muH
///   F_muT = r_max - r
///   F_muH = w_max - w
/// and, when coupled, F_l = sum_t (r_t + H(w_t)) - d_net.
///
/// Immutable after assembly; residual() and jacobian() are reentrant.
class McpSystem {
 public:
  const Scenario& scenario() const { return scenario_; }
  MarketMode mode() const { return mode_; }
  Coupling coupling() const { return coupling_; }
  double d_net() const { return d_net_; }
  double regularization() const { return regularization_; }
  const VariableLayout& layout() const { return layout_; }
  std::size_t size() const { return layout_.size(); }

  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }

  /// Box the solver keeps its iterates in; tighter than [lower, upper] on r and w
  /// (capacity plus 10% slack).
  const Eigen::VectorXd& iterate_lower() const { return iterate_lower_; }
  const Eigen::VectorXd& iterate_upper() const { return iterate_upper_; }

  Eigen::VectorXd residual(const Eigen::VectorXd& z) const;
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& z) const;

  /// Hex digest of the scenario data and the assembly options.
  std::string fingerprint() const;

 private:
  McpSystem(Scenario s, MarketMode mode, Coupling coupling, double d_net, double eps);

  void check_length(const Eigen::VectorXd& z) const;

  Scenario scenario_;
  MarketMode mode_;
  Coupling coupling_;
  double d_net_;
  double regularization_;
  VariableLayout layout_;
  Eigen::VectorXd lower_, upper_;
  Eigen::VectorXd iterate_lower_, iterate_upper_;

  friend McpSystem assemble_no_dr(const Scenario& s);
  friend McpSystem assemble_dr(const Scenario& s, double d_net, MultiplierMode mm, double eps);
  friend McpSystem assemble_dr_uncoupled(const Scenario& s);
};

/// Per-period KKT rows under the linear demand curve. Requires s.mode == NoDR.
McpSystem assemble_no_dr(const Scenario& s);

/// KKT rows under the sigmoid demand with the balance constraint
/// sum_t (r_t + H_t) = d_net. Requires s.mode == DR and d_net > 0.
McpSystem assemble_dr(const Scenario& s, double d_net, MultiplierMode mm = MultiplierMode::Shared,
                      double eps = 1e-8);

/// Sigmoid demand without the balance constraint: each period is its own game.
McpSystem assemble_dr_uncoupled(const Scenario& s);

}  // namespace drcournot
