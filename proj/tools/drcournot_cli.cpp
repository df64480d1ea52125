// drcournot: Cournot equilibria of the thermal/hydro market with and without
// incentive-based demand response.
//
//   drcournot solve   <scenario> [--mode no_dr|dr] [--out file.csv] [--check] ...
//   drcournot compare <scenario> [--out file.csv] ...
//   drcournot sweep   [--gamma ..] [--intercept ..] [--p2-min ..] [--p2-max ..] ...
//   drcournot dump    <scenario>
//
// Exit codes: 0 success, 1 input error, 2 solver non-convergence or failed --check.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "drcournot/result_table.hpp"
#include "drcournot/scenario_io.hpp"
#include "drcournot/workflow.hpp"

namespace {

using namespace drcournot;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitSolver = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string out;
  int precision = 6;
  double tol = 1e-10;
  int max_iter = 200;
  std::string start = "auto";
  std::string multiplier;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--out,-o", o.out, "Output CSV path (default: standard output)");
  cmd->add_option("--precision", o.precision, "Significant digits in the output")
      ->check(CLI::Range(1, 17));
  cmd->add_option("--tol", o.tol, "Solver residual tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", o.max_iter, "Newton iteration cap")->check(CLI::Range(1, 100000));
  cmd->add_option("--start", o.start, "Newton start: auto, no_dr or threshold")
      ->check(CLI::IsMember({"auto", "no_dr", "threshold"}));
}

void add_multiplier(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--multiplier", o.multiplier,
                  "Balance multiplier: shared or per_player (default: from scenario)")
      ->check(CLI::IsMember({"shared", "per_player"}));
}

SolverConfig solver_config(const CommonOptions& o) {
  SolverConfig cfg;
  cfg.tol = o.tol;
  cfg.max_iter = o.max_iter;
  if (o.start == "no_dr") cfg.start = StartStrategy::NoDrClosedForm;
  if (o.start == "threshold") cfg.start = StartStrategy::ThresholdAnchored;
  return cfg;
}

Scenario load(const std::string& path, const CommonOptions& o) {
  Scenario s;
  try {
    s = load_scenario(path);
  } catch (const ScenarioError& e) {
    throw InputError(e.what());
  }
  if (!o.multiplier.empty()) s.multiplier_mode = parse_multiplier_mode(o.multiplier);
  return s;
}

// Writes to the --out file, or stdout when none was given.
void emit(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw InputError("cannot write " + out);
  f << text;
}

std::string num(double v) { return format_number(v, 10); }

void warn_negative_prices(const EquilibriumSolution& sol) {
  for (std::size_t t = 0; t < sol.periods.size(); ++t) {
    if (sol.periods[t].price < 0.0) {
      std::cerr << "warning: negative equilibrium price " << sol.periods[t].price << " at hour "
                << t + 1 << '\n';
    }
  }
}

std::vector<std::string> solution_comments(const EquilibriumSolution& sol, const char* label) {
  std::vector<std::string> c;
  c.push_back(std::string(label) + " status: " + to_string(sol.status) + ", iterations " +
              std::to_string(sol.iterations) + ", merit " + num(sol.merit));
  return c;
}

// --- solve -------------------------------------------------------------------

struct SolveOptions {
  std::string scenario;
  std::string mode;
  bool check = false;
  CommonOptions common;
};

int run_solve(const SolveOptions& o) {
  Scenario s = load(o.scenario, o.common);
  if (!o.mode.empty()) s.mode = parse_market_mode(o.mode);
  const SolverConfig cfg = solver_config(o.common);

  TableOptions table;
  table.precision = o.common.precision;
  table.comments.push_back("mode: " + to_string(s.mode));

  EquilibriumSolution sol;
  std::optional<McpSystem> system;
  std::vector<double> baseline;
  if (s.mode == MarketMode::NoDR) {
    system = assemble_no_dr(s);
    sol = solve(*system, cfg);
  } else {
    const DrRun run = solve_dr(s, cfg);
    sol = run.dr;
    baseline = run.no_dr.quantities();
    system = assemble_dr(s, run.d_net, s.multiplier_mode);
    table.comments.push_back("d_net: " + num(run.d_net) +
                             (run.d_net_derived ? " (no-DR total)" : " (scenario)"));
    table.comments.push_back("multiplier_mode: " + to_string(s.multiplier_mode));
    std::string mults = "balance multipliers:";
    for (double l : sol.balance_multipliers) mults += " " + num(l);
    table.comments.push_back(mults);
  }
  table.comments.push_back("scenario fingerprint: " + system->fingerprint());
  for (auto& c : solution_comments(sol, "solver")) table.comments.push_back(std::move(c));
  table.comments.push_back("consumer surplus excludes rebates; rebate baseline is the no-DR q");

  bool check_failed = false;
  if (o.check) {
    const double fd = jacobian_fd_error(*system, sol.z);
    const bool fd_ok = fd <= 1e-6;
    const NashReport nash = verify_nash(s, sol);
    table.comments.push_back("check jacobian: max FD error " + num(fd) + (fd_ok ? " ok" : " FAILED"));
    std::string nash_line = "check nash: " + std::to_string(nash.deviations_checked) +
                            " deviations, " + std::to_string(nash.improving.size()) + " improving";
    for (const auto* best : {&nash.best_thermal, &nash.best_hydro}) {
      if (!*best) continue;
      const Deviation& d = **best;
      nash_line += "; best " + to_string(d.player) + " +" + num(d.delta) + " MWh at hour " +
                   std::to_string(d.period + 1);
      if (d.partner) nash_line += " from hour " + std::to_string(*d.partner + 1);
      nash_line += " gains $" + num(d.gain);
    }
    table.comments.push_back(nash_line + (nash.ok ? " ok" : " FAILED"));
    if (s.mode == MarketMode::DR) {
      Scenario other = s;
      other.multiplier_mode = s.multiplier_mode == MultiplierMode::Shared
                                  ? MultiplierMode::PerPlayer
                                  : MultiplierMode::Shared;
      const DrRun alt = solve_dr(other, cfg);
      const double gap = max_primal_gap(sol, alt.dr);
      table.comments.push_back("check multiplier modes: primal gap " + num(gap) +
                               (gap <= 1e-4 ? " ok" : " DISAGREE"));
      if (gap > 1e-4)
        std::cerr << "warning: shared and per-player multiplier modes disagree (gap " << gap
                  << ")\n";
    }
    check_failed = !fd_ok || !nash.ok;
    if (check_failed) std::cerr << "check failed\n";
  }

  warn_negative_prices(sol);
  const SurplusReport surplus = surplus_report(s, sol, baseline);
  std::ostringstream os;
  write_result_table(os, sol, surplus, table);
  emit(o.common.out, os.str());

  if (!sol.converged()) {
    std::cerr << "solver did not converge: " << to_string(sol.status) << '\n';
    return kExitSolver;
  }
  return check_failed ? kExitSolver : kExitOk;
}

// --- compare -----------------------------------------------------------------

struct CompareOptions {
  std::string scenario;
  CommonOptions common;
};

int run_compare(const CompareOptions& o) {
  const Scenario s = load(o.scenario, o.common);
  const DrRun run = solve_dr(s, solver_config(o.common));
  const ComparisonReport rep = compare_runs(s, run.no_dr, run.dr);

  TableOptions table;
  table.precision = o.common.precision;
  table.comments.push_back("d_net: " + num(run.d_net) +
                           (run.d_net_derived ? " (no-DR total)" : " (scenario)"));
  for (auto& c : solution_comments(run.no_dr, "no_dr")) table.comments.push_back(std::move(c));
  for (auto& c : solution_comments(run.dr, "dr")) table.comments.push_back(std::move(c));
  std::string window = "peak window hours:";
  for (std::size_t t : rep.peak_window) window += " " + std::to_string(t + 1);
  table.comments.push_back(window);
  table.comments.push_back("peak window reduction pct: " + num(rep.peak_reduction_pct));
  table.comments.push_back("sum delta_q: " + num(rep.total_delta_q));

  warn_negative_prices(run.no_dr);
  warn_negative_prices(run.dr);
  std::ostringstream os;
  write_comparison_table(os, rep, table);
  emit(o.common.out, os.str());

  if (!run.no_dr.converged() || !run.dr.converged()) {
    std::cerr << "solver did not converge (no_dr: " << to_string(run.no_dr.status)
              << ", dr: " << to_string(run.dr.status) << ")\n";
    return kExitSolver;
  }
  return kExitOk;
}

// --- sweep -------------------------------------------------------------------

struct SweepOptions {
  double gamma = 0.054;
  double intercept = 120.35;
  double xi = 1000.0;
  double alpha = 0.1;
  double p2_min = 0.0;
  double p2_max = 20.0;
  int steps = 21;
  double c1 = 10.0;
  double c2 = 0.025;
  double r_max = 500.0;
  double w_max = 1000.0;
  unsigned threads = 0;
  CommonOptions common;
};

unsigned thread_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DRCOURNOT_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw InputError("DRCOURNOT_THREADS must be a positive integer");
  }
  return 1;
}

int run_sweep(const SweepOptions& o) {
  if (o.p2_min > o.p2_max) throw InputError("--p2-min must not exceed --p2-max");
  if (o.p2_min < 0.0) throw InputError("--p2-min must be nonnegative");
  const PeriodDemand pd{o.gamma, o.intercept, 0.0};
  const SigmoidConfig sc{o.alpha, o.xi};
  const ThermalParams tp{o.c1, o.c2, 0.0, o.r_max};
  const HydroParams hp{0.0, o.w_max, Production{1.0}};
  pd.validate();
  sc.validate();
  tp.validate();
  hp.validate();

  const auto grid = linspace(o.p2_min, o.p2_max, o.steps);
  const SweepTable sweep =
      incentive_sweep(pd, sc, tp, hp, grid, solver_config(o.common), thread_count(o.threads));

  TableOptions table;
  table.precision = o.common.precision;
  table.comments.push_back("one-period DR game: gamma " + num(o.gamma) + ", intercept " +
                           num(o.intercept) + ", xi " + num(o.xi) + ", alpha " + num(o.alpha));
  table.comments.push_back("percent changes relative to the no-DR equilibrium");
  std::ostringstream os;
  write_sweep_table(os, sweep, table);
  emit(o.common.out, os.str());

  if (!sweep.all_ok()) {
    std::cerr << "one or more sweep rows failed\n";
    return kExitSolver;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cournot equilibria of a thermal/hydro electricity market with demand response"};
  app.require_subcommand(1);

  SolveOptions solve_opt;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one market mode and write the result table");
  solve_cmd->add_option("scenario", solve_opt.scenario, "Scenario file")->required();
  solve_cmd->add_option("--mode", solve_opt.mode, "Market mode (default: from scenario)")
      ->check(CLI::IsMember({"no_dr", "dr"}));
  solve_cmd->add_flag("--check", solve_opt.check,
                      "Verify the Jacobian by finite differences and scan for Nash deviations");
  add_common(solve_cmd, solve_opt.common);
  add_multiplier(solve_cmd, solve_opt.common);

  CompareOptions cmp_opt;
  auto* cmp_cmd = app.add_subcommand("compare", "Solve both modes and write the comparison");
  cmp_cmd->add_option("scenario", cmp_opt.scenario, "Scenario file")->required();
  add_common(cmp_cmd, cmp_opt.common);
  add_multiplier(cmp_cmd, cmp_opt.common);

  SweepOptions sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep the rebate price in a one-period market");
  sweep_cmd->add_option("--gamma", sw.gamma, "Demand slope, $/MWh^2")->capture_default_str();
  sweep_cmd->add_option("--intercept", sw.intercept, "Choke price, $/MWh")->capture_default_str();
  sweep_cmd->add_option("--xi", sw.xi, "DR threshold, MWh")->capture_default_str();
  sweep_cmd->add_option("--alpha", sw.alpha, "Sigmoid smoothness, 1/MWh")->capture_default_str();
  sweep_cmd->add_option("--p2-min", sw.p2_min, "Lowest rebate price")->capture_default_str();
  sweep_cmd->add_option("--p2-max", sw.p2_max, "Highest rebate price")->capture_default_str();
  sweep_cmd->add_option("--steps", sw.steps, "Number of grid points")->capture_default_str()
      ->check(CLI::Range(2, 1000000));
  sweep_cmd->add_option("--c1", sw.c1, "Thermal linear cost, $/MWh")->capture_default_str();
  sweep_cmd->add_option("--c2", sw.c2, "Thermal quadratic cost, $/MWh^2")->capture_default_str();
  sweep_cmd->add_option("--r-max", sw.r_max, "Thermal capacity, MWh")->capture_default_str();
  sweep_cmd->add_option("--w-max", sw.w_max, "Hydro release cap, acre-ft/h")->capture_default_str();
  sweep_cmd->add_option("--threads", sw.threads,
                        "Worker threads (default: DRCOURNOT_THREADS or 1)");
  add_common(sweep_cmd, sw.common);

  std::string dump_path, dump_out;
  auto* dump_cmd = app.add_subcommand("dump", "Print a scenario in canonical form");
  dump_cmd->add_option("scenario", dump_path, "Scenario file")->required();
  dump_cmd->add_option("--out,-o", dump_out, "Output path (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*solve_cmd) return run_solve(solve_opt);
    if (*cmp_cmd) return run_compare(cmp_opt);
    if (*sweep_cmd) return run_sweep(sw);
    if (*dump_cmd) {
      emit(dump_out, dump_scenario(load(dump_path, CommonOptions{})));
      return kExitOk;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitInput;
}
