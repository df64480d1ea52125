import math
import pathlib

import pytest

import drcournot as dc

DATA = pathlib.Path(__file__).resolve().parents[2] / "data" / "reference_day.scenario"


@pytest.fixture(scope="module")
def reference_day():
    return dc.load_scenario(DATA)


def test_load_and_round_trip(reference_day):
    assert reference_day.horizon == 24
    assert reference_day.mode == dc.MarketMode.DR
    assert reference_day.d_net is None
    assert reference_day.periods[19].intercept == 120.35
    assert dc.parse_scenario(dc.dump_scenario(reference_day)) == reference_day


def test_bad_scenario_raises_value_error():
    with pytest.raises(dc.ScenarioError, match="alpha: missing required key"):
        dc.parse_scenario("horizon: 2\n")
    assert issubclass(dc.ScenarioError, ValueError)


def test_no_dr_peak_hour(reference_day):
    sol = dc.solve_no_dr(reference_day)
    assert sol.converged
    assert sol.status == dc.SolveStatus.CONVERGED
    assert sol.periods[19].q == pytest.approx(1351.03, abs=0.01)
    assert sol.periods[19].price == pytest.approx(47.3946, abs=1e-4)
    assert len(sol.z) == 4 * 24


def test_dr_run_and_comparison(reference_day):
    run = dc.solve_dr(reference_day)
    assert run.dr.converged and run.d_net_derived
    assert run.dr.total_q == pytest.approx(run.d_net, rel=1e-12)
    rep = dc.compare_runs(reference_day, run.no_dr, run.dr)
    assert rep.peak_window == [18, 19, 20]
    assert rep.peak_reduction_pct == pytest.approx(21.5, abs=2.0)
    assert abs(rep.total_delta_q) < 1e-6


def test_nash_scan(reference_day):
    plain = reference_day.with_mode(dc.MarketMode.NO_DR)
    report = dc.verify_nash(plain, dc.solve_no_dr(plain))
    assert report.ok and not report.improving


def test_sweep():
    rows = dc.incentive_sweep([0.0, 10.0, 20.0], threads=2)
    assert all(r.ok for r in rows)
    assert rows[1].price == pytest.approx(43.67, abs=0.5)
    assert rows[0].q > rows[1].q > rows[2].q


def test_prices_and_closed_form():
    pd = dc.PeriodDemand(0.054, 120.35, 20.0)
    sc = dc.SigmoidConfig()
    mid = 0.5 * (dc.price_no_dr(pd, 1000.0) + dc.price_no_dr(pd, 1000.0) - 20.0)
    assert dc.price_dr(pd, sc, 1000.0) == pytest.approx(mid, rel=1e-15)
    cf = dc.closed_form_no_dr(dc.PeriodDemand(0.054, 120.35),
                              dc.ThermalParams(10.0, 0.025, r_max=500.0),
                              dc.HydroParams(w_max=1000.0))
    assert cf.r == pytest.approx((120.35 / 2 - 10) / (1.5 * 0.054 + 0.025))
    assert math.isclose(cf.q, cf.r + cf.h)
