import json
import math

import numpy as np
import pytest

from invcurves.dynamics import Params, periodic_partner
from invcurves.verify import (
    ERRATUM,
    FAIL,
    PASS,
    PRINTED_CASES,
    CheckReport,
    build_model,
    center_grid,
    conjugacy_check,
    conjugacy_error,
    global_dynamics_check,
    invariance_residual_at,
    oracle_check,
    printed_form,
    reproduce_paper_report,
    residual_order_check,
    run_suite,
    saddle_grid,
    summarize,
    trajectory_distance_check,
)


def test_judge_relations():
    assert CheckReport.judge("a", 1.0, 1.0 + 1e-12, 1e-11).passed
    assert not CheckReport.judge("a", 1.0, 2.0, 0.5).passed
    assert CheckReport.judge("b", 3.0, 4.0, relation="below").passed
    assert not CheckReport.judge("b", 4.0, 4.0, relation="below").passed
    assert CheckReport.judge("c", 10.0, 10.0, relation="at_least").passed
    assert not CheckReport.judge("n", math.nan, 0.0, 1.0).passed
    with pytest.raises(ValueError):
        CheckReport.judge("x", 0, 0, relation="near")


def test_to_dict_has_no_nan():
    d = CheckReport.failed("x", "broken").to_dict()
    assert d["observed"] is None and d["status"] == FAIL
    json.dumps(d, allow_nan=False)


@pytest.mark.parametrize("kind,inp", [
    ("unstable", Params(0.2, 0.0)),
    ("stable", Params(0.8, 0.5)),
    ("center", periodic_partner(2.3, 0.5)),
])
def test_residual_vanishes_at_origin_and_is_quartic(kind, inp):
    m = build_model(kind, inp)
    assert abs(invariance_residual_at(m, 0.0)) < 1e-14
    r = abs(invariance_residual_at(m, 1e-3))
    assert r < 1e-10


def test_residual_order_passes_where_quartic_term_dominates():
    assert residual_order_check("unstable", Params(0.2, 0.0)).status == PASS
    assert residual_order_check("center", periodic_partner(2.3, 0.5)).status == PASS


def test_residual_order_failure_explains_itself():
    # near alpha = 0.42 the quartic residual coefficient changes sign
    r = residual_order_check("unstable", Params(0.4, 0.0))
    assert r.status == FAIL and r.relation == "below"
    assert "r_4" in r.detail and "r_5" in r.detail


def test_conjugacy():
    assert conjugacy_error(Params(0.2, 0.0), (0.0, 0.0)) == 0.0
    assert conjugacy_error(periodic_partner(2.94, 0.0), (0.0, 0.0)) < 1e-15
    assert conjugacy_check(Params(0.2, 0.5)).status == PASS
    assert conjugacy_check(periodic_partner(2.94, 0.5)).status == PASS


def test_oracle_checks_pass():
    assert oracle_check("unstable", Params(0.3, 0.25)).status == PASS
    assert oracle_check("stable", Params(0.3, 0.25)).status == PASS
    assert oracle_check("center", periodic_partner(5.0, 0.5)).status == PASS


def test_trajectory_follows_center_curve():
    for pair in (periodic_partner(2.94, 0.0), periodic_partner(2.3, 0.5)):
        r = trajectory_distance_check(pair)
        assert r.status == PASS, r.detail
        assert r.observed < 1e-3


def test_trajectory_from_the_cycle_itself_does_not_move():
    pair = periodic_partner(2.94, 0.0)
    r = trajectory_distance_check(pair, offset=0.0)
    assert r.observed < 1e-12


def test_global_regimes():
    conv = global_dynamics_check(Params(2.0, 0.0))
    assert conv.status == PASS and "limit 3" in conv.detail
    assert global_dynamics_check(Params(1.0, 0.0)).status == PASS
    rep = global_dynamics_check(Params(0.2, 0.0))
    assert rep.status == PASS and rep.observed >= 10


def test_global_repulsion_too_slow_near_alpha_one():
    # |lambda1|**30 < 10 at alpha = 0.8
    assert global_dynamics_check(Params(0.8, 0.0)).status == FAIL


def _by_name(reports):
    return {r.name: r for r in reports}


def test_paper_report_counts_and_entries():
    reports = reproduce_paper_report()
    assert summarize(reports) == {PASS: 52, ERRATUM: 16, FAIL: 0}
    rows = _by_name(reports)
    assert rows["S2:cubic"].status == PASS
    assert rows["U3:lin_x"].status == ERRATUM
    assert rows["U3:lin_x"].observed == pytest.approx(-0.467768, abs=1e-6)
    assert rows["C2:psi"].status == PASS


@pytest.mark.parametrize("case", PRINTED_CASES, ids=lambda c: c.case)
def test_every_printed_number(case):
    computed = printed_form(build_model(case.kind, case.model_input()))
    for field, printed in case.printed.items():
        if case.erratum:
            continue
        assert computed[field] == pytest.approx(printed, rel=1e-7), field


def test_erratum_cases_match_beta_zero():
    # the printed beta = 0.5 polynomials coincide with the beta = 0 ones
    for case in PRINTED_CASES:
        if case.erratum:
            computed = printed_form(build_model(case.kind, Params(case.alpha, 0.0)))
            for field, printed in case.printed.items():
                assert computed[field] == pytest.approx(printed, rel=1e-7)


def test_center_delta2():
    m = build_model("center", periodic_partner(2.94, 0.0))
    assert m.linear_constants[1] == pytest.approx(0.4385703205, rel=1e-9)


def test_grids():
    assert len(saddle_grid()) == 36
    assert len(center_grid()) == 7
    assert all(p.phi > 1 / (1 - p.beta) for p in center_grid("fine"))
    with pytest.raises(ValueError):
        saddle_grid("medium")


def test_suite_is_deterministic_and_seed_sensitive():
    a = [r.to_dict() for r in run_suite(seed=7)]
    b = [r.to_dict() for r in run_suite(seed=7)]
    assert a == b
    c = [r.to_dict() for r in run_suite(seed=8)]
    assert [r["name"] for r in a] == [r["name"] for r in c]
    assert a != c


def test_suite_failures_are_only_residual_order():
    fails = [r for r in run_suite() if r.status == FAIL]
    assert fails and all(r.name.startswith("residual_order:") for r in fails)
    assert not np.isnan([r.observed for r in fails]).any()
