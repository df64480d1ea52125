#include "drcournot/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace drcournot {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInvSqrt2 = 0.70710678118654752440;

// phi(a, b) = sqrt(a^2 + b^2) - a - b and its partials. At (0, 0) the element of
// the generalised gradient along (1, 1)/sqrt(2) is used.
struct FbValue {
  double value;
  double da;
  double db;
};

FbValue fischer_burmeister(double a, double b) {
  const double norm = std::hypot(a, b);
  if (norm == 0.0) return {0.0, kInvSqrt2 - 1.0, kInvSqrt2 - 1.0};
  return {norm - a - b, a / norm - 1.0, b / norm - 1.0};
}

// Row i of Phi is value + (diag * e_i + scale * grad F_i) applied to a step.
struct FbRow {
  double value;
  double diag;
  double scale;
};

FbRow fb_row(double z, double f, double lo, double hi) {
  const bool has_lo = std::isfinite(lo);
  const bool has_hi = std::isfinite(hi);
  if (!has_lo && !has_hi) return {f, 0.0, 1.0};
  if (has_lo && !has_hi) {
    const auto p = fischer_burmeister(z - lo, f);
    return {p.value, p.da, p.db};
  }
  // -phi(u - z, -F): d/dz = da, d/dF = db.
  const auto up = fischer_burmeister(hi - z, -f);
  if (!has_lo) return {-up.value, up.da, up.db};
  const double inner = -up.value;
  const auto p = fischer_burmeister(z - lo, inner);
  return {p.value, p.da + p.db * up.da, p.db * up.db};
}

VectorXd fb_values(const McpSystem& m, const VectorXd& z, const VectorXd& F) {
  VectorXd phi(z.size());
  for (Index i = 0; i < z.size(); ++i)
    phi[i] = fb_row(z[i], F[i], m.lower()[i], m.upper()[i]).value;
  return phi;
}

VectorXd project(const McpSystem& m, VectorXd z) {
  return z.cwiseMax(m.iterate_lower()).cwiseMin(m.iterate_upper());
}

double half_squared(const VectorXd& v) { return 0.5 * v.squaredNorm(); }

bool converged(const VectorXd& phi, const VectorXd& z, double tol) {
  return phi.lpNorm<Eigen::Infinity>() <= tol * (1.0 + z.lpNorm<Eigen::Infinity>());
}

}  // namespace

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("solver tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("solver max_iter must be at least 1");
  if (!(armijo.backtrack > 0.0 && armijo.backtrack < 1.0))
    throw std::invalid_argument("line-search backtrack factor must be in (0, 1)");
  if (!(armijo.sufficient_decrease > 0.0 && armijo.sufficient_decrease < 0.5))
    throw std::invalid_argument("line-search sufficient decrease must be in (0, 0.5)");
  if (!(armijo.min_step > 0.0)) throw std::invalid_argument("line-search min step must be positive");
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIter: return "max_iter";
    case SolveStatus::LineSearchStall: return "line_search_stall";
  }
  return "unknown";
}

double EquilibriumSolution::total_q() const {
  double sum = 0.0;
  for (const auto& p : periods) sum += p.q;
  return sum;
}

std::vector<double> EquilibriumSolution::quantities() const {
  std::vector<double> out;
  out.reserve(periods.size());
  for (const auto& p : periods) out.push_back(p.q);
  return out;
}

VectorXd fb_residual(const McpSystem& m, const VectorXd& z) {
  return fb_values(m, z, m.residual(z));
}

double fb_merit(const McpSystem& m, const VectorXd& z) { return half_squared(fb_residual(m, z)); }

double jacobian_fd_error(const McpSystem& m, const VectorXd& z) {
  const MatrixXd J = m.jacobian(z);
  double worst = 0.0;
  for (Index j = 0; j < z.size(); ++j) {
    const double h = 1e-6 * std::max(1.0, std::abs(z[j]));
    VectorXd zp = z, zm = z;
    zp[j] += h;
    zm[j] -= h;
    // Divide by the spacing actually realised in floating point.
    const VectorXd col = (m.residual(zp) - m.residual(zm)) / (zp[j] - zm[j]);
    for (Index i = 0; i < z.size(); ++i) {
      const double err = std::abs(J(i, j) - col[i]) / std::max(1.0, std::abs(J(i, j)));
      worst = std::max(worst, err);
    }
  }
  return worst;
}

VectorXd initial_point(const McpSystem& m, StartStrategy strategy) {
  const auto& s = m.scenario();
  const auto& L = m.layout();
  if (strategy == StartStrategy::Auto) {
    strategy = (m.mode() == MarketMode::DR && m.coupling() != Coupling::None)
                   ? StartStrategy::ThresholdAnchored
                   : StartStrategy::NoDrClosedForm;
  }
  VectorXd z = VectorXd::Zero(static_cast<Index>(L.size()));
  for (std::size_t t = 0; t < L.periods(); ++t) {
    const auto& pd = s.periods[t];
    const auto cf = closed_form_no_dr(pd, s.thermal, s.hydro);
    double r = cf.r, w = cf.w, mu_t = cf.mu_thermal, mu_h = cf.mu_hydro;
    if (strategy == StartStrategy::ThresholdAnchored && pd.p2 > 0.0 && cf.q > s.sigmoid.xi) {
      const double scale = (s.sigmoid.xi + 2.0 / s.sigmoid.alpha) / cf.q;
      if (scale < 1.0) {
        r *= scale;
        w *= scale;
        mu_t = mu_h = 0.0;
      }
    }
    z[static_cast<Index>(L.r(t))] = r;
    z[static_cast<Index>(L.w(t))] = w;
    z[static_cast<Index>(L.mu_thermal(t))] = mu_t;
    z[static_cast<Index>(L.mu_hydro(t))] = mu_h;
  }
  return z;
}

EquilibriumSolution make_solution(const McpSystem& m, const VectorXd& z) {
  const auto& s = m.scenario();
  const auto& L = m.layout();
  EquilibriumSolution sol;
  sol.mode = m.mode();
  sol.coupling = m.coupling();
  sol.d_net = m.d_net();
  sol.z = z;
  sol.periods.reserve(L.periods());
  for (std::size_t t = 0; t < L.periods(); ++t) {
    PeriodOutcome p;
    p.r = z[static_cast<Index>(L.r(t))];
    p.w = z[static_cast<Index>(L.w(t))];
    p.h = s.hydro.production(p.w);
    p.q = p.r + p.h;
    p.price = price(s.periods[t], s.sigmoid, m.mode(), p.q);
    p.mu_thermal = z[static_cast<Index>(L.mu_thermal(t))];
    p.mu_hydro = z[static_cast<Index>(L.mu_hydro(t))];
    sol.periods.push_back(p);
  }
  for (std::size_t k = 0; k < L.multipliers(); ++k)
    sol.balance_multipliers.push_back(z[static_cast<Index>(L.multiplier(k))]);
  return sol;
}

EquilibriumSolution solve(const McpSystem& m, const SolverConfig& cfg,
                          const std::optional<VectorXd>& z0) {
  cfg.validate();
  const auto n = static_cast<Index>(m.size());
  if (z0 && z0->size() != n) {
    throw std::invalid_argument("initial point has length " + std::to_string(z0->size()) +
                                ", MCP layout needs " + std::to_string(n));
  }
  VectorXd z = project(m, z0 ? *z0 : initial_point(m, cfg.start));

  std::optional<double> fd_error;
  if (cfg.fd_check) fd_error = jacobian_fd_error(m, z);

  VectorXd F = m.residual(z);
  VectorXd phi = fb_values(m, z, F);
  double theta = half_squared(phi);
  std::vector<double> history{theta};

  SolveStatus status = SolveStatus::MaxIter;
  int iter = 0;
  for (;; ++iter) {
    if (converged(phi, z, cfg.tol)) {
      status = SolveStatus::Converged;
      break;
    }
    if (iter >= cfg.max_iter) {
      status = SolveStatus::MaxIter;
      break;
    }

    // Element of the generalised Jacobian of Phi.
    const MatrixXd J = m.jacobian(z);
    MatrixXd H(n, n);
    for (Index i = 0; i < n; ++i) {
      const FbRow row = fb_row(z[i], F[i], m.lower()[i], m.upper()[i]);
      H.row(i) = row.scale * J.row(i);
      H(i, i) += row.diag;
    }
    const VectorXd grad = H.transpose() * phi;

    Eigen::FullPivLU<MatrixXd> lu(H);
    VectorXd d;
    bool newton = lu.isInvertible();
    if (newton) {
      d = lu.solve(-phi);
      const double slope = grad.dot(d);
      newton = d.allFinite() && slope < -1e-12 * std::pow(d.norm(), 2.1);
    }
    if (!newton) d = -grad;

    const double slope = grad.dot(d);
    double step = 1.0;
    bool accepted = false;
    VectorXd z_trial, F_trial, phi_trial;
    double theta_trial = theta;
    while (step >= cfg.armijo.min_step) {
      z_trial = project(m, z + step * d);
      F_trial = m.residual(z_trial);
      phi_trial = fb_values(m, z_trial, F_trial);
      theta_trial = half_squared(phi_trial);
      if (std::isfinite(theta_trial) && theta_trial < theta &&
          theta_trial <= theta + cfg.armijo.sufficient_decrease * step * slope) {
        accepted = true;
        break;
      }
      step *= cfg.armijo.backtrack;
    }
    if (!accepted) {
      status = SolveStatus::LineSearchStall;
      break;
    }
    z = std::move(z_trial);
    F = std::move(F_trial);
    phi = std::move(phi_trial);
    theta = theta_trial;
    history.push_back(theta);
  }

  EquilibriumSolution sol = make_solution(m, z);
  sol.status = status;
  sol.iterations = iter;
  sol.merit = theta;
  sol.merit_history = std::move(history);
  sol.jacobian_fd_error = fd_error;
  return sol;
}

ClosedFormResult closed_form_no_dr(const PeriodDemand& pd, const ThermalParams& tp,
                                   const HydroParams& hp) {
  const double g = pd.gamma;
  const double a = pd.intercept;
  const double eta = hp.production.slope();
  const double h_cap = hp.production(hp.w_max);

  // Unclamped best responses in energy space.
  const auto thermal_raw = [&](double h) { return (a - tp.c1 - g * h) / (2.0 * g + tp.c2); };
  const auto hydro_raw = [&](double r) { return (a - g * r) / (2.0 * g); };

  enum class Side { Low, Mid, High };
  const auto side_of = [](double raw, double cap) {
    if (raw <= 0.0) return Side::Low;
    if (raw >= cap) return Side::High;
    return Side::Mid;
  };

  double r = 0.0, h = 0.0;
  bool found = false;
  constexpr Side kSides[] = {Side::Mid, Side::Low, Side::High};
  for (Side sr : kSides) {
    for (Side sh : kSides) {
      if (sr == Side::Mid && sh == Side::Mid) {
        r = (0.5 * a - tp.c1) / (1.5 * g + tp.c2);
        h = 0.5 * (pd.reference_quantity() - r);
      } else if (sr == Side::Mid) {
        h = sh == Side::Low ? 0.0 : h_cap;
        r = thermal_raw(h);
      } else if (sh == Side::Mid) {
        r = sr == Side::Low ? 0.0 : tp.r_max;
        h = hydro_raw(r);
      } else {
        r = sr == Side::Low ? 0.0 : tp.r_max;
        h = sh == Side::Low ? 0.0 : h_cap;
      }
      if (side_of(thermal_raw(h), tp.r_max) == sr && side_of(hydro_raw(r), h_cap) == sh) {
        found = true;
        break;
      }
    }
    if (found) break;
  }
  if (!found) {
    // Boundary ties that the strict region tests miss: iterate the clamped maps,
    // which contract with factor 1/4.
    r = 0.0;
    h = 0.0;
    for (int k = 0; k < 200; ++k) {
      r = std::clamp(thermal_raw(h), 0.0, tp.r_max);
      h = std::clamp(hydro_raw(r), 0.0, h_cap);
    }
  }

  ClosedFormResult out;
  out.r = r;
  out.h = h;
  out.w = h >= h_cap ? hp.w_max : h / eta;
  out.q = r + h;
  out.price = price_no_dr(pd, out.q);
  if (r >= tp.r_max) out.mu_thermal = std::max(0.0, -(r * (2.0 * g + tp.c2) + g * h + tp.c1 - a));
  if (h >= h_cap) out.mu_hydro = std::max(0.0, -eta * (g * r + 2.0 * g * h - a));
  return out;
}

}  // namespace drcournot
