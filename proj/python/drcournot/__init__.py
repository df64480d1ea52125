"""Cournot equilibria of a thermal/hydro electricity market with demand response."""

from ._core import (
    HydroParams,
    ClosedForm,
    ComparisonReport,
    Deviation,
    DrRun,
    EquilibriumSolution,
    MarketMode,
    MultiplierMode,
    NashReport,
    PeriodComparison,
    PeriodDemand,
    PeriodOutcome,
    Scenario,
    ScenarioError,
    SolveStatus,
    SigmoidConfig,
    SweepRow,
    ThermalParams,
    closed_form_no_dr,
    compare_runs,
    dump_scenario,
    incentive_sweep,
    load_scenario,
    parse_scenario,
    price_dr,
    price_no_dr,
    solve_dr,
    solve_no_dr,
    verify_nash,
)

__all__ = [name for name in dir() if not name.startswith("_")]
