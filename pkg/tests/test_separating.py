import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sperval.errors import FInSeparatingIdeal, NotFoundWithinBudget
from sperval.exact_arith import ParamAssumption, RatFn
from sperval.parse import parse_series
from sperval.separating import (MONOMIAL_SET_MISMATCH, SIGN_ORDER_MISMATCH, CurvettePair, common_roots,
                                connected_set, lead_matrix_nonsingular, membership, positively_proportional,
                                separating_generators, separating_value, witness_sign_change)
from sperval.valuation import Curvette, nu_value, sign_at

from conftest import XY, P, U, plane

F = P("x^3 + y^3 + z^3")
Q4, Q5, Q6 = P("y^2 - x*z"), P("y*z - x^4"), P("z^2 - x^3*y")


def exact_space_curve(q, z="t^14 + t^15"):
    series = {"x": parse_series("t^6", 64), "y": parse_series("t^10 + u*t^11", 64), "z": parse_series(z, 64)}
    return Curvette(series, ParamAssumption.exact(q))


# --- examples -----------------------------------------------------------------

def test_space_curve_pair_common_roots(symbolic_pair):
    assert common_roots(symbolic_pair)[:6] == ["x", "y", "z", "Q4", "Q5", "Q6"]


def test_identical_points_share_everything():
    c = plane("t^2", "t^3 + t^5", trunc=30)
    s = separating_value(CurvettePair(c, c))
    assert s.kind is None and s.value_alpha is None
    assert separating_generators(s) == []
    with pytest.raises(NotFoundWithinBudget):
        witness_sign_change(CurvettePair(c, c), s)


def test_pair_with_different_y_orders():
    pair = CurvettePair(plane("t^6", "t^10"), plane("t^6", "t^11"))
    s = separating_value(pair)
    assert (s.index, s.value_alpha, s.value_beta) == (11, 30, 30)
    assert s.kind == MONOMIAL_SET_MISMATCH
    assert s.common_names() == ["x", "y"]
    gens = [s.rs_alpha.mono_str(m) for m in separating_generators(s)]
    assert gens == ["y^3", "x^5", "x^2*y^2", "x^4*y"]
    assert witness_sign_change(pair, s) == P("y^3 - 1/2*x^5", XY)


@pytest.mark.parametrize("which", ["symbolic_pair", "exact_pair"])
def test_separating_value(request, which):
    pair = request.getfixturevalue(which)
    s = separating_value(pair)
    assert s.value_alpha == 31 and s.kind == SIGN_ORDER_MISMATCH
    ok, _ = lead_matrix_nonsingular(pair, s)
    assert ok


def test_exact_lead_vectors(exact_pair):
    d = separating_value(exact_pair).divergence
    assert sorted(x.constant_value() for x in d.leads_alpha) == [4, 5]
    assert sorted(x.constant_value() for x in d.leads_beta) == [5, 7]


def test_flipped_t_sign_diverges_at_first_odd_value():
    pair = CurvettePair(plane("t^2", "t^3"), plane("t^2", "t^3", t_sign=-1))
    s = separating_value(pair)
    assert s.value_alpha == 3 and s.index == 2 and s.kind == SIGN_ORDER_MISMATCH


def test_exact_witness(exact_pair):
    s = separating_value(exact_pair)
    w = witness_sign_change(exact_pair, s)
    assert w == P("23/10*x*y*z - y^3 - 13/10*x^5")
    assert w == -P("y") * Q4 + P("x") * Q5 * Fraction(13, 10)
    assert sign_at(exact_pair.alpha, w) == 1 and sign_at(exact_pair.beta, w) == -1
    assert nu_value(exact_pair.alpha, w).value == 31 == nu_value(exact_pair.beta, w).value


def test_generators_at_31(exact_pair):
    s = separating_value(exact_pair)
    names = [s.rs_alpha.mono_str(m) for m in separating_generators(s)]
    assert "y*Q4" in names and "x*Q5" in names and "Q6" not in names


def test_generators_have_large_beta_values(exact_pair):
    for pair in (exact_pair, CurvettePair(plane("t^6", "t^10"), plane("t^6", "t^11"))):
        s = separating_value(pair)
        for m in separating_generators(s):
            v = nu_value(pair.beta, s.rs_alpha.mono_poly(m).embed(pair.beta.variables))
            assert not v.is_finite or v.value >= s.value_beta


def test_connected_set_examples(exact_pair):
    d = connected_set(exact_pair, [F, P("x"), Q6])
    rs = d.rs
    f, x, q6 = d.entries
    assert [rs.mono_str(m) for _, m in f.heads] == ["x^3"]
    assert sorted(rs.mono_str(m) for _, m in f.tails) == sorted(["x^5", "y*Q4", "x*Q5", "z^3"])
    assert [rs.mono_str(m) for _, m in x.heads] == ["x"] and x.tails == []
    assert [rs.mono_str(m) for _, m in q6.heads] == ["Q6"] and q6.tails == []


def test_connected_set_rejects_ideal_members(exact_pair):
    with pytest.raises(FInSeparatingIdeal):
        connected_set(exact_pair, [P("y") * Q4])


@pytest.mark.parametrize("variant", ["C", "Cprime"])
def test_both_points_are_members(exact_pair, variant):
    d = connected_set(exact_pair, [F, Q6, P("x*y - z")], variant)
    assert membership(d, exact_pair.alpha)
    assert membership(d, exact_pair.beta)


def test_negative_z_leaves_the_set(exact_pair):
    d = connected_set(exact_pair, [P("z")])
    assert not membership(d, exact_space_curve(3, "-t^14"))
    assert membership(d, exact_space_curve(3, "t^14"))


@pytest.mark.parametrize("variant", ["C", "Cprime"])
@pytest.mark.parametrize("q", [Fraction(5, 2), 3, 4, 7, 10, Fraction(-1), Fraction(1, 3)])
def test_members_avoid_zeros(exact_pair, variant, q):
    fs = [F, Q6, P("x*y - z")]
    d = connected_set(exact_pair, fs, variant)
    delta = exact_space_curve(q)
    if membership(d, delta):
        for f, e in zip(fs, d.entries):
            assert sign_at(delta, f) == e.head_sign != 0


# --- properties -----------------------------------------------------------------

def _pairs_to_check():
    yield CurvettePair(plane("t^2", "t^3"), plane("t^2", "t^3 + t^4"))
    yield CurvettePair(plane("t^4", "t^6 + t^7"), plane("t^4", "t^6 - t^7"))
    yield CurvettePair(plane("t^6", "t^10"), plane("t^6", "t^11"))
    yield CurvettePair(plane("t^3", "t^5", trunc=40), plane("t^3", "2*t^5", trunc=40))
    yield CurvettePair(exact_space_curve(3), exact_space_curve(4))


@pytest.mark.parametrize("pair", list(_pairs_to_check()))
def test_symmetry(pair):
    s = separating_value(pair)
    t = separating_value(CurvettePair(pair.beta, pair.alpha))
    assert s.index == t.index
    assert (s.value_alpha, s.value_beta) == (t.value_beta, t.value_alpha)


@pytest.mark.parametrize("pair", list(_pairs_to_check()))
def test_witness_checks_out(pair):
    s = separating_value(pair)
    w = witness_sign_change(pair, s)
    assert sign_at(pair.alpha, w) == 1
    assert sign_at(pair.beta, w) == -1


vectors = st.integers(1, 4).flatmap(lambda n: st.tuples(
    st.lists(st.integers(-3, 3).filter(bool), min_size=n, max_size=n),
    st.lists(st.integers(-3, 3).filter(bool), min_size=n, max_size=n)))


def _sign(v):
    return (v > 0) - (v < 0)


@settings(max_examples=150, deadline=None)
@given(vectors, st.booleans())
def test_proportionality_against_lambda_grid(ab, scale):
    a, b = ab
    if scale:
        b = [2 * x for x in a]
    agree = all(_sign(sum(l * x for l, x in zip(lam, a))) == _sign(sum(l * x for l, x in zip(lam, b)))
                for lam in itertools.product(range(-3, 4), repeat=len(a)))
    exact = ParamAssumption.exact(3)
    ok, _ = positively_proportional([RatFn.const(x) for x in a], [RatFn.const(x) for x in b], exact, exact,
                                    same_param=True)
    assert ok == agree


def test_proportionality_with_symbolic_parameter():
    above2 = ParamAssumption.interval(2, None)
    a = [2 * U - 1, U + 1]
    ok, _ = positively_proportional(a, a, above2, above2, same_param=False)
    assert not ok
    ok, _ = positively_proportional(a, a, above2, above2, same_param=True)
    assert ok
