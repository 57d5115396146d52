import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sperval.blowup import (X_OVER_Y, Y_OVER_X, BlowupStep, Chart, blowup_poly, blowup_sequence, chart_data,
                            is_locally_monomial, local_blowup, resolve_pair, strict_transform_curvette,
                            strict_transform_poly, total_transform)
from sperval.errors import CenterEqualsPoint, StepBudgetExceeded
from sperval.exact_arith import ParamAssumption, RatFn
from sperval.parse import parse_series
from sperval.roots import roots_2d
from sperval.separating import CurvettePair
from sperval.valuation import nu_value

from conftest import XY, plane
from test_valuation import polys


def PP(text):
    from conftest import P
    return P(text, XY)


def series(c):
    return tuple(c.assignment[v] for v in c.variables)


def same_series(c, xs, ys):
    a, b = series(c)
    n = min(a.trunc, b.trunc)
    return (a.with_trunc(n), b.with_trunc(n)) == (parse_series(xs, n), parse_series(ys, n))


# --- examples -----------------------------------------------------------------

def test_local_blowup_examples():
    ch0 = Chart.initial()
    ch, c, step = local_blowup(ch0, plane("t^6", "t^10"))
    assert step == BlowupStep(Y_OVER_X, RatFn())
    assert same_series(c, "t^6", "t^4")
    ch, c, step = local_blowup(ch0, plane("t^2", "t^2 + t^3"))
    assert step == BlowupStep(Y_OVER_X, RatFn.const(1))
    assert same_series(c, "t^2", "t")
    _, _, step = local_blowup(ch0, plane("t^3", "t^2"))
    assert step.branch == X_OVER_Y


def test_strict_transform_poly_examples():
    flat = Chart.initial().then(BlowupStep(Y_OVER_X, RatFn()))
    r = strict_transform_poly(flat, PP("y^2 - x^3"))
    assert (r.strict, r.exceptional_multiplicity) == (PP("y^2 - x"), 2)
    r = strict_transform_poly(flat, PP("x"))
    assert (r.strict, r.exceptional_multiplicity) == (PP("1"), 1)
    tilted = Chart.initial().then(BlowupStep(Y_OVER_X, RatFn.const(1)))
    r = strict_transform_poly(tilted, PP("y^2 - x^2"))
    assert (r.strict, r.exceptional_multiplicity) == (PP("y^2 + 2*y"), 2)


def test_strict_transform_curvette_examples():
    step = BlowupStep(Y_OVER_X, RatFn())
    assert same_series(strict_transform_curvette(step, plane("t", "t^2")), "t", "t")
    assert same_series(strict_transform_curvette(step, plane("t^2", "t^3 + t^4")), "t^2", "t + t^2")
    with pytest.raises(CenterEqualsPoint):
        strict_transform_curvette(step, plane("t^3", "t^2"))
    c = strict_transform_curvette(BlowupStep(X_OVER_Y, RatFn()), plane("t^3", "t^2"))
    assert same_series(c, "t", "t^2")


# --- transforms -----------------------------------------------------------------

steps = st.sampled_from([BlowupStep(Y_OVER_X, RatFn()), BlowupStep(Y_OVER_X, RatFn.const(1)),
                         BlowupStep(Y_OVER_X, RatFn.const(-2)), BlowupStep(X_OVER_Y, RatFn()),
                         BlowupStep(X_OVER_Y, RatFn.const(3))])


@settings(max_examples=100, deadline=None)
@given(polys(variables=XY, max_deg=4), steps)
def test_transform_is_exact(f, step):
    if not f:
        return
    ch = Chart.initial()
    r = blowup_poly(f, step)
    back = f.compose(ch.images(step), XY)
    e = [0, 0]
    e[0 if step.branch == Y_OVER_X else 1] = r.exceptional_multiplicity
    assert r.strict * PP("x" if step.branch == Y_OVER_X else "y") ** r.exceptional_multiplicity == back
    assert r.exceptional_multiplicity == f.order()


curvettes = st.sampled_from([("t^2", "t^3"), ("t^2", "t^2 + t^3"), ("t^4", "t^6 + t^7"), ("t^3", "t^2 + t^5"),
                             ("t^6", "t^10 - t^11"), ("t^3", "-t^3 + 2*t^7")])


@settings(max_examples=100, deadline=None)
@given(curvettes, polys(variables=XY, max_deg=4))
def test_value_splits_along_the_blowup(xy, f):
    c = plane(*xy, trunc=60)
    if not f:
        return
    ch, c2, step = local_blowup(Chart.initial(), c)
    r = strict_transform_poly(ch, f)
    v = nu_value(c, f)
    exc = c.assignment["x" if step.branch == Y_OVER_X else "y"].order().value
    v2 = nu_value(c2, r.strict)
    if v.is_finite and v2.is_finite:
        assert v.value == r.exceptional_multiplicity * exc + v2.value


def test_multiplicity_matches_plane_root_orders():
    for xy in (("t^4", "t^6 + t^7"), ("t^6", "t^9 + t^10"), ("t^4", "t^10 + t^11")):
        c = plane(*xy, trunc=90)
        rs = roots_2d(c)
        step = local_blowup(Chart.initial(), c)[2]
        fixed = [i for i in rs.alpha if rs.alpha[i] > 1 or i == 0]
        for r in rs.roots:
            if r.is_variable:
                continue
            expected = math.prod(rs.alpha[f] for f in fixed if f < r.index)
            assert blowup_poly(r.poly, step).exceptional_multiplicity == expected


def test_locally_monomial():
    charts, _ = blowup_sequence(plane("t^2", "t^3"), 3)
    assert is_locally_monomial(charts[0], [PP("x"), PP("y")])
    assert not is_locally_monomial(charts[0], [PP("y^2 - x^3")])
    assert is_locally_monomial(charts[3], [PP("x"), PP("y")])
    t = total_transform(charts[1], PP("x^2*y"))
    assert (t.x_exp, t.y_exp) == (3, 1)


# --- chart data ---------------------------------------------------------------

def test_chart_data_for_the_cusp_family():
    c = plane("t^4", "t^6 + t^7", trunc=60)
    rs = roots_2d(c)
    charts, _ = blowup_sequence(c, 8)
    rows = {r.root: r for r in chart_data(rs, charts)}
    assert rows["x"].chart == 1
    q3 = rows["Q3"]
    assert q3.ok and q3.strict.order() == 1
    assert all(ok for _, ok in rows["y"].unit_checks)
    assert dict(rows["y"].unit_checks)["x"]


def test_chart_data_cusp_table():
    c = plane("t^2", "t^3", trunc=40)
    rs = roots_2d(c)
    charts, _ = blowup_sequence(c, 8)
    rows = [(r.root, r.chart, r.exponents) for r in chart_data(rs, charts)]
    assert rows[0] == ("x", 1, ())
    assert rows[1][:2] == ("y", 2)


# --- resolution ----------------------------------------------------------------

def exact_plane(xs, ys, q, trunc=40):
    return plane(xs, ys, ParamAssumption.exact(q), trunc=trunc)


PAIRS = [
    ("cusp with u = 1, 2", lambda: CurvettePair(exact_plane("t^2", "t^3 + u*t^4", 1),
                                                exact_plane("t^2", "t^3 + u*t^4", 2))),
    ("cusp and perturbed cusp", lambda: CurvettePair(plane("t^2", "t^3"), plane("t^2", "t^3 + t^4"))),
    ("opposite t^7 terms", lambda: CurvettePair(plane("t^4", "t^6 + t^7", trunc=60),
                                                plane("t^4", "t^6 - t^7", trunc=60))),
    ("different y orders", lambda: CurvettePair(plane("t^6", "t^10"), plane("t^6", "t^11"))),
    ("scaled y", lambda: CurvettePair(plane("t^3", "t^5"), plane("t^3", "2*t^5"))),
    ("parabola and cubic", lambda: CurvettePair(plane("t", "t^2"), plane("t", "t^3"))),
]


@pytest.mark.parametrize("name,make", PAIRS, ids=[p[0] for p in PAIRS])
def test_resolution_follows_weak_transform(name, make):
    res = resolve_pair(make(), max_steps=20)
    assert res.terminal, res.stop_reason
    for st_ in res.steps:
        assert st_.prediction_ok, (st_.value, st_.predicted, st_.weak_min)
    last = res.steps[-1]
    a = last.pair.alpha
    assert last.value == min(s.order().value for s in a.assignment.values() if s.order().is_finite)


def test_cusp_resolution_values():
    res = resolve_pair(CurvettePair(plane("t^2", "t^3"), plane("t^2", "-t^3")))
    assert [s.value for s in res.steps] == [3, 1]
    assert res.terminal


def test_already_separated_at_x_needs_no_steps():
    res = resolve_pair(CurvettePair(plane("t", "t^2"), plane("t", "t^2", t_sign=-1)))
    assert len(res.steps) == 1 and res.terminal


def test_equal_points_exhaust_the_budget():
    c = plane("t^2", "t^3 + t^5", trunc=30)
    with pytest.raises(StepBudgetExceeded):
        resolve_pair(CurvettePair(c, c), max_steps=3)
