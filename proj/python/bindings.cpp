#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "drcournot/scenario_io.hpp"
#include "drcournot/workflow.hpp"

namespace py = pybind11;
using namespace drcournot;

namespace {

SolverConfig make_config(double tol, int max_iter) {
  SolverConfig cfg;
  cfg.tol = tol;
  cfg.max_iter = max_iter;
  cfg.validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cournot equilibria of a thermal/hydro electricity market with demand response";

  py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);

  py::enum_<MarketMode>(m, "MarketMode")
      .value("NO_DR", MarketMode::NoDR)
      .value("DR", MarketMode::DR);
  py::enum_<MultiplierMode>(m, "MultiplierMode")
      .value("SHARED", MultiplierMode::Shared)
      .value("PER_PLAYER", MultiplierMode::PerPlayer);
  py::enum_<SolveStatus>(m, "SolveStatus")
      .value("CONVERGED", SolveStatus::Converged)
      .value("MAX_ITER", SolveStatus::MaxIter)
      .value("LINE_SEARCH_STALL", SolveStatus::LineSearchStall);

  py::class_<PeriodDemand>(m, "PeriodDemand")
      .def(py::init<double, double, double>(), py::arg("gamma"), py::arg("intercept"),
           py::arg("p2") = 0.0)
      .def_readwrite("gamma", &PeriodDemand::gamma)
      .def_readwrite("intercept", &PeriodDemand::intercept)
      .def_readwrite("p2", &PeriodDemand::p2)
      .def("__repr__", [](const PeriodDemand& p) {
        return "PeriodDemand(gamma=" + std::to_string(p.gamma) +
               ", intercept=" + std::to_string(p.intercept) + ", p2=" + std::to_string(p.p2) + ")";
      });

  py::class_<SigmoidConfig>(m, "SigmoidConfig")
      .def(py::init<double, double>(), py::arg("alpha") = 0.1, py::arg("xi") = 1000.0)
      .def_readwrite("alpha", &SigmoidConfig::alpha)
      .def_readwrite("xi", &SigmoidConfig::xi);

  py::class_<ThermalParams>(m, "ThermalParams")
      .def(py::init<double, double, double, double>(), py::arg("c1"), py::arg("c2"),
           py::arg("c3") = 0.0, py::arg("r_max"))
      .def_readwrite("c1", &ThermalParams::c1)
      .def_readwrite("c2", &ThermalParams::c2)
      .def_readwrite("c3", &ThermalParams::c3)
      .def_readwrite("r_max", &ThermalParams::r_max);

  py::class_<HydroParams>(m, "HydroParams")
      .def(py::init([](double c4, double w_max, double efficiency) {
             return HydroParams{c4, w_max, Production{efficiency}};
           }),
           py::arg("c4") = 0.0, py::arg("w_max"), py::arg("efficiency") = 1.0)
      .def_readwrite("c4", &HydroParams::c4)
      .def_readwrite("w_max", &HydroParams::w_max)
      .def_property(
          "efficiency", [](const HydroParams& h) { return h.production.efficiency; },
          [](HydroParams& h, double e) { h.production.efficiency = e; });

  py::class_<Scenario>(m, "Scenario")
      .def(py::init<>())
      .def_readwrite("periods", &Scenario::periods)
      .def_readwrite("sigmoid", &Scenario::sigmoid)
      .def_readwrite("thermal", &Scenario::thermal)
      .def_readwrite("hydro", &Scenario::hydro)
      .def_readwrite("mode", &Scenario::mode)
      .def_readwrite("d_net", &Scenario::d_net)
      .def_readwrite("multiplier_mode", &Scenario::multiplier_mode)
      .def_property_readonly("horizon", &Scenario::horizon)
      .def("validate", &Scenario::validate)
      .def("with_mode", &Scenario::with_mode)
      .def(py::self == py::self);

  py::class_<PeriodOutcome>(m, "PeriodOutcome")
      .def_readonly("r", &PeriodOutcome::r)
      .def_readonly("w", &PeriodOutcome::w)
      .def_readonly("h", &PeriodOutcome::h)
      .def_readonly("q", &PeriodOutcome::q)
      .def_readonly("price", &PeriodOutcome::price)
      .def_readonly("mu_thermal", &PeriodOutcome::mu_thermal)
      .def_readonly("mu_hydro", &PeriodOutcome::mu_hydro);

  py::class_<EquilibriumSolution>(m, "EquilibriumSolution")
      .def_readonly("mode", &EquilibriumSolution::mode)
      .def_readonly("d_net", &EquilibriumSolution::d_net)
      .def_readonly("periods", &EquilibriumSolution::periods)
      .def_readonly("balance_multipliers", &EquilibriumSolution::balance_multipliers)
      .def_readonly("status", &EquilibriumSolution::status)
      .def_readonly("iterations", &EquilibriumSolution::iterations)
      .def_readonly("merit", &EquilibriumSolution::merit)
      .def_readonly("merit_history", &EquilibriumSolution::merit_history)
      .def_readonly("z", &EquilibriumSolution::z)
      .def_property_readonly("converged", &EquilibriumSolution::converged)
      .def_property_readonly("total_q", &EquilibriumSolution::total_q)
      .def("quantities", &EquilibriumSolution::quantities);

  py::class_<DrRun>(m, "DrRun")
      .def_readonly("no_dr", &DrRun::no_dr)
      .def_readonly("dr", &DrRun::dr)
      .def_readonly("d_net", &DrRun::d_net)
      .def_readonly("d_net_derived", &DrRun::d_net_derived);

  py::class_<PeriodComparison>(m, "PeriodComparison")
      .def_readonly("q_no_dr", &PeriodComparison::q_no_dr)
      .def_readonly("q_dr", &PeriodComparison::q_dr)
      .def_readonly("delta_q", &PeriodComparison::delta_q)
      .def_readonly("price_no_dr", &PeriodComparison::price_no_dr)
      .def_readonly("price_dr", &PeriodComparison::price_dr)
      .def_readonly("delta_price", &PeriodComparison::delta_price)
      .def_readonly("reduction_pct", &PeriodComparison::reduction_pct);

  py::class_<ComparisonReport>(m, "ComparisonReport")
      .def_readonly("periods", &ComparisonReport::periods)
      .def_readonly("peak_window", &ComparisonReport::peak_window)
      .def_readonly("peak_reduction_pct", &ComparisonReport::peak_reduction_pct)
      .def_readonly("total_delta_q", &ComparisonReport::total_delta_q);

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("p2", &SweepRow::p2)
      .def_readonly("price", &SweepRow::price)
      .def_readonly("q", &SweepRow::q)
      .def_readonly("reduction_pct", &SweepRow::reduction_pct)
      .def_readonly("consumer_surplus", &SweepRow::consumer_surplus)
      .def_readonly("generation_surplus", &SweepRow::generation_surplus)
      .def_readonly("cs_change_pct", &SweepRow::cs_change_pct)
      .def_readonly("ps_change_pct", &SweepRow::ps_change_pct)
      .def_readonly("status", &SweepRow::status)
      .def_readonly("error", &SweepRow::error)
      .def_property_readonly("ok", &SweepRow::ok);

  py::class_<ClosedFormResult>(m, "ClosedForm")
      .def_readonly("r", &ClosedFormResult::r)
      .def_readonly("w", &ClosedFormResult::w)
      .def_readonly("h", &ClosedFormResult::h)
      .def_readonly("q", &ClosedFormResult::q)
      .def_readonly("price", &ClosedFormResult::price)
      .def_readonly("mu_thermal", &ClosedFormResult::mu_thermal)
      .def_readonly("mu_hydro", &ClosedFormResult::mu_hydro);

  py::class_<Deviation>(m, "Deviation")
      .def_property_readonly("player", [](const Deviation& d) { return to_string(d.player); })
      .def_readonly("period", &Deviation::period)
      .def_readonly("partner", &Deviation::partner)
      .def_readonly("delta", &Deviation::delta)
      .def_readonly("gain", &Deviation::gain);

  py::class_<NashReport>(m, "NashReport")
      .def_readonly("ok", &NashReport::ok)
      .def_readonly("thermal_profit", &NashReport::thermal_profit)
      .def_readonly("hydro_profit", &NashReport::hydro_profit)
      .def_readonly("improving", &NashReport::improving)
      .def_readonly("best_thermal", &NashReport::best_thermal)
      .def_readonly("best_hydro", &NashReport::best_hydro)
      .def_readonly("deviations_checked", &NashReport::deviations_checked);

  m.def("load_scenario", &load_scenario, py::arg("path"));
  m.def(
      "parse_scenario",
      [](const std::string& text, const std::string& source) { return parse_scenario(text, source); },
      py::arg("text"), py::arg("source") = "<string>");
  m.def("dump_scenario", &dump_scenario, py::arg("scenario"));

  m.def("price_no_dr", &price_no_dr, py::arg("demand"), py::arg("q"));
  m.def("price_dr", &price_dr, py::arg("demand"), py::arg("sigmoid"), py::arg("q"));
  m.def("closed_form_no_dr", &closed_form_no_dr, py::arg("demand"), py::arg("thermal"),
        py::arg("hydro"));

  m.def(
      "solve_no_dr",
      [](const Scenario& s, double tol, int max_iter) {
        py::gil_scoped_release release;
        return solve_no_dr(s, make_config(tol, max_iter));
      },
      py::arg("scenario"), py::arg("tol") = 1e-10, py::arg("max_iter") = 200);
  m.def(
      "solve_dr",
      [](const Scenario& s, double tol, int max_iter) {
        py::gil_scoped_release release;
        return solve_dr(s, make_config(tol, max_iter));
      },
      py::arg("scenario"), py::arg("tol") = 1e-10, py::arg("max_iter") = 200,
      "DR equilibrium under the balance constraint; also returns the no-DR run it is "
      "compared against.");
  m.def("compare_runs", &compare_runs, py::arg("scenario"), py::arg("no_dr"), py::arg("dr"));
  m.def(
      "verify_nash",
      [](const Scenario& s, const EquilibriumSolution& sol, std::vector<double> steps) {
        return verify_nash(s, sol, DeviationGrid{std::move(steps)});
      },
      py::arg("scenario"), py::arg("solution"), py::arg("steps") = std::vector<double>{1, 10, 50});
  m.def(
      "incentive_sweep",
      [](const std::vector<double>& p2_grid, double gamma, double intercept, double alpha,
         double xi, double c1, double c2, double r_max, double w_max, unsigned threads) {
        const PeriodDemand pd{gamma, intercept, 0.0};
        const SigmoidConfig sc{alpha, xi};
        const ThermalParams tp{c1, c2, 0.0, r_max};
        const HydroParams hp{0.0, w_max, Production{}};
        pd.validate();
        sc.validate();
        tp.validate();
        hp.validate();
        py::gil_scoped_release release;
        return incentive_sweep(pd, sc, tp, hp, p2_grid, {}, threads).rows;
      },
      py::arg("p2_grid"), py::arg("gamma") = 0.054, py::arg("intercept") = 120.35,
      py::arg("alpha") = 0.1, py::arg("xi") = 1000.0, py::arg("c1") = 10.0,
      py::arg("c2") = 0.025, py::arg("r_max") = 500.0, py::arg("w_max") = 1000.0,
      py::arg("threads") = 1);
}
