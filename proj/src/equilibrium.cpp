#include "drcournot/equilibrium.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <utility>

namespace drcournot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kIterateSlack = 0.1;

std::size_t multiplier_count(Coupling c) {
  switch (c) {
    case Coupling::None: return 0;
    case Coupling::Shared: return 1;
    case Coupling::PerPlayer: return 2;
  }
  return 0;
}

// FNV-1a over the raw bytes of the values.
class Digest {
 public:
  void add(double v) { add(std::bit_cast<std::uint64_t>(v)); }
  void add(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h_ ^= (v >> (8 * i)) & 0xffu;
      h_ *= 0x100000001b3ull;
    }
  }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h_));
    return buf;
  }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ull;
};

}  // namespace

McpSystem::McpSystem(Scenario s, MarketMode mode, Coupling coupling, double d_net, double eps)
    : scenario_(std::move(s)),
      mode_(mode),
      coupling_(coupling),
      d_net_(d_net),
      regularization_(eps),
      layout_(scenario_.horizon(), multiplier_count(coupling)) {
  const std::size_t n = layout_.periods();
  const std::size_t m = layout_.size();
  lower_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  upper_ = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(m), kInf);
  for (std::size_t k = 0; k < layout_.multipliers(); ++k) {
    lower_[static_cast<Eigen::Index>(layout_.multiplier(k))] = -kInf;
  }
  iterate_lower_ = lower_;
  iterate_upper_ = upper_;
  for (std::size_t t = 0; t < n; ++t) {
    iterate_upper_[static_cast<Eigen::Index>(layout_.r(t))] =
        (1.0 + kIterateSlack) * scenario_.thermal.r_max;
    iterate_upper_[static_cast<Eigen::Index>(layout_.w(t))] =
        (1.0 + kIterateSlack) * scenario_.hydro.w_max;
  }
}

void McpSystem::check_length(const Eigen::VectorXd& z) const {
  if (static_cast<std::size_t>(z.size()) != layout_.size()) {
    throw std::invalid_argument("vector length " + std::to_string(z.size()) +
                                " does not match MCP layout of size " +
                                std::to_string(layout_.size()));
  }
}

Eigen::VectorXd McpSystem::residual(const Eigen::VectorXd& z) const {
  check_length(z);
  const auto& L = layout_;
  const auto& tp = scenario_.thermal;
  const auto& hp = scenario_.hydro;
  const double eta = hp.production.slope();
  const std::size_t n = L.periods();

  const double l_r = L.multipliers() > 0 ? z[static_cast<Eigen::Index>(L.multiplier(0))] : 0.0;
  const double l_h = L.multipliers() > 1 ? z[static_cast<Eigen::Index>(L.multiplier(1))] : l_r;

  Eigen::VectorXd F(z.size());
  // Balance row summed with Neumaier compensation so its rounding error stays at
  // the level of the result rather than of the partial sums.
  double gap = -d_net_, carry = 0.0;
  const auto accumulate = [&](double x) {
    const double s = gap + x;
    carry += std::abs(gap) >= std::abs(x) ? (gap - s) + x : (x - s) + gap;
    gap = s;
  };
  for (std::size_t t = 0; t < n; ++t) {
    const auto& pd = scenario_.periods[t];
    const double r = z[static_cast<Eigen::Index>(L.r(t))];
    const double w = z[static_cast<Eigen::Index>(L.w(t))];
    const double h = hp.production(w);
    const double q = r + h;
    const double p = price(pd, scenario_.sigmoid, mode_, q);
    const double dp = price_slope(pd, scenario_.sigmoid, mode_, q);
    accumulate(r);
    accumulate(h);

    F[static_cast<Eigen::Index>(L.r(t))] = -p - dp * r + tp.marginal_cost(r) +
                                           z[static_cast<Eigen::Index>(L.mu_thermal(t))] + l_r;
    F[static_cast<Eigen::Index>(L.w(t))] =
        eta * (-p - dp * h + l_h) + z[static_cast<Eigen::Index>(L.mu_hydro(t))];
    F[static_cast<Eigen::Index>(L.mu_thermal(t))] = tp.r_max - r;
    F[static_cast<Eigen::Index>(L.mu_hydro(t))] = hp.w_max - w;
  }

  gap += carry;
  if (coupling_ == Coupling::Shared) {
    F[static_cast<Eigen::Index>(L.multiplier(0))] = gap;
  } else if (coupling_ == Coupling::PerPlayer) {
    F[static_cast<Eigen::Index>(L.multiplier(0))] = gap + regularization_ * (l_r - l_h);
    F[static_cast<Eigen::Index>(L.multiplier(1))] = gap + regularization_ * (l_h - l_r);
  }
  return F;
}

Eigen::MatrixXd McpSystem::jacobian(const Eigen::VectorXd& z) const {
  check_length(z);
  const auto& L = layout_;
  const auto& tp = scenario_.thermal;
  const auto& hp = scenario_.hydro;
  const double eta = hp.production.slope();
  const std::size_t n = L.periods();
  const auto m = static_cast<Eigen::Index>(L.size());
  const auto idx = [](std::size_t i) { return static_cast<Eigen::Index>(i); };

  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t t = 0; t < n; ++t) {
    const auto& pd = scenario_.periods[t];
    const double r = z[idx(L.r(t))];
    const double w = z[idx(L.w(t))];
    const double h = hp.production(w);
    const double q = r + h;
    const double dp = price_slope(pd, scenario_.sigmoid, mode_, q);
    const double d2p = price_curvature(pd, scenario_.sigmoid, mode_, q);

    const auto ir = idx(L.r(t)), iw = idx(L.w(t));
    const auto imt = idx(L.mu_thermal(t)), imh = idx(L.mu_hydro(t));

    // d/dq of (-P - P' r) is (-P' - P'' r); r also enters directly through -P' r.
    J(ir, ir) = -2.0 * dp - d2p * r + tp.c2;
    J(ir, iw) = eta * (-dp - d2p * r);
    J(ir, imt) = 1.0;

    J(iw, ir) = eta * (-dp - d2p * h);
    J(iw, iw) = eta * eta * (-2.0 * dp - d2p * h);
    J(iw, imh) = 1.0;

    J(imt, ir) = -1.0;
    J(imh, iw) = -1.0;

    if (coupling_ == Coupling::Shared) {
      const auto il = idx(L.multiplier(0));
      J(ir, il) = 1.0;
      J(iw, il) = eta;
      J(il, ir) = 1.0;
      J(il, iw) = eta;
    } else if (coupling_ == Coupling::PerPlayer) {
      const auto ilr = idx(L.multiplier(0)), ilh = idx(L.multiplier(1));
      J(ir, ilr) = 1.0;
      J(iw, ilh) = eta;
      J(ilr, ir) = 1.0;
      J(ilr, iw) = eta;
      J(ilh, ir) = 1.0;
      J(ilh, iw) = eta;
    }
  }
  if (coupling_ == Coupling::PerPlayer) {
    const auto ilr = idx(L.multiplier(0)), ilh = idx(L.multiplier(1));
    J(ilr, ilr) = regularization_;
    J(ilr, ilh) = -regularization_;
    J(ilh, ilh) = regularization_;
    J(ilh, ilr) = -regularization_;
  }
  return J;
}

std::string McpSystem::fingerprint() const {
  Digest d;
  d.add(static_cast<std::uint64_t>(mode_));
  d.add(static_cast<std::uint64_t>(coupling_));
  d.add(d_net_);
  d.add(regularization_);
  for (const auto& pd : scenario_.periods) {
    d.add(pd.gamma);
    d.add(pd.intercept);
    d.add(pd.p2);
  }
  d.add(scenario_.sigmoid.alpha);
  d.add(scenario_.sigmoid.xi);
  const auto& tp = scenario_.thermal;
  for (double v : {tp.c1, tp.c2, tp.c3, tp.r_max}) d.add(v);
  const auto& hp = scenario_.hydro;
  for (double v : {hp.c4, hp.w_max, hp.production.efficiency}) d.add(v);
  return d.hex();
}

McpSystem assemble_no_dr(const Scenario& s) {
  s.validate();
  if (s.mode != MarketMode::NoDR)
    throw std::invalid_argument("assemble_no_dr: scenario mode is DR");
  return McpSystem(s, MarketMode::NoDR, Coupling::None, 0.0, 0.0);
}

McpSystem assemble_dr(const Scenario& s, double d_net, MultiplierMode mm, double eps) {
  s.validate();
  if (s.mode != MarketMode::DR) throw std::invalid_argument("assemble_dr: scenario mode is NoDR");
  if (!(std::isfinite(d_net) && d_net > 0.0))
    throw std::invalid_argument("assemble_dr: d_net must be positive");
  if (mm == MultiplierMode::PerPlayer && !(eps > 0.0))
    throw std::invalid_argument("assemble_dr: per-player regularisation must be positive");
  const Coupling c = mm == MultiplierMode::Shared ? Coupling::Shared : Coupling::PerPlayer;
  return McpSystem(s, MarketMode::DR, c, d_net, mm == MultiplierMode::PerPlayer ? eps : 0.0);
}

McpSystem assemble_dr_uncoupled(const Scenario& s) {
  s.validate();
  if (s.mode != MarketMode::DR)
    throw std::invalid_argument("assemble_dr_uncoupled: scenario mode is NoDR");
  return McpSystem(s, MarketMode::DR, Coupling::None, 0.0, 0.0);
}

}  // namespace drcournot
