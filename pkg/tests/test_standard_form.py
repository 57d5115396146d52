from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from sperval import monomials as M
from sperval.errors import LevelInsufficient
from sperval.exact_arith import RatFn
from sperval.poly_series import Poly
from sperval.roots import roots_up_to
from sperval.standard_form import (is_standard, nu_ideal_generators, relations_kernel_check, standard_form,
                                   value_via_standard_form)
from sperval.valuation import nu_value

from conftest import XYZ, P
from test_valuation import nonconst, polys

F = P("x^3 + y^3 + z^3")


def names(rs, terms):
    return sorted(rs.mono_str(m) for _, m in terms)


# --- examples -----------------------------------------------------------------

def test_is_standard_examples(sc_roots):
    y, z = sc_roots.index_of_name("y"), sc_roots.index_of_name("z")
    x = sc_roots.index_of_name("x")
    assert not is_standard(M.single(y, 2), sc_roots)
    assert not is_standard(M.mono([(y, 1), (z, 1)]), sc_roots)
    for k in range(1, 12):
        assert is_standard(M.single(x, k), sc_roots)


def test_level_31_form(sc_roots):
    sf = standard_form(F, 31, sc_roots)
    assert names(sc_roots, sf.terms) == sorted(["x^3", "x^5", "y*Q4", "x*Q5", "z^3"])
    assert sorted(sf.values()) == [18, 30, 31, 31, 42]
    assert all(c == RatFn.const(1) for c, _ in sf.terms)


def test_low_levels_leave_f_alone(sc_roots):
    for level in (18, 25, 30):
        sf = standard_form(F, level, sc_roots)
        assert names(sc_roots, sf.terms) == ["x^3", "y^3", "z^3"]
        assert sf.steps == []


def test_single_variable(sc_roots):
    for level in (6, 20, 37):
        assert str(standard_form(P("x"), level, sc_roots)) == "x"


def test_value_examples(sc_roots):
    assert value_via_standard_form(F, sc_roots) == 18
    assert value_via_standard_form(P("y^2 - x*z"), sc_roots) == 21
    assert value_via_standard_form(P("x + y"), sc_roots) == 6


def test_value_beyond_level(sc_roots):
    syz = P("x*(z^2 - x^3*y) - y*(y*z - x^4) + z*(y^2 - x*z)")
    with pytest.raises(LevelInsufficient):
        value_via_standard_form(syz + P("x^7"), roots_up_to(sc_roots.curvette, 30))


def test_generator_examples(sc_roots):
    assert names(sc_roots, [(1, m) for m in nu_ideal_generators(1, sc_roots)]) == ["x", "y", "z"]
    assert names(sc_roots, [(1, m) for m in nu_ideal_generators(7, sc_roots)]) == ["x^2", "y", "z"]
    g21 = [sc_roots.mono_str(m) for m in nu_ideal_generators(21, sc_roots)]
    assert "Q4" in g21 and "y^2" not in g21


def test_kernel_examples(sc_roots):
    reports = {r.degree: r for r in relations_kernel_check(sc_roots, 37)}
    assert reports[Fraction(31)].kernel_dim == 1 and reports[Fraction(31)].ok
    assert reports[Fraction(6)].kernel_dim == 0 and reports[Fraction(6)].ok
    assert reports[Fraction(20)].ok
    assert all(r.ok for r in reports.values())


# --- invariants -----------------------------------------------------------------

levels = st.sampled_from([Fraction(v) for v in (12, 21, 25, 29, 31, 33, 37)])


@settings(max_examples=60, deadline=None)
@given(polys(max_deg=3), levels)
def test_form_expands_back(sc_roots, f, level):
    sf = standard_form(f, level, sc_roots)
    assert sf.expand() == f


@settings(max_examples=60, deadline=None)
@given(polys(max_deg=3), levels)
def test_settled_part_is_standard_and_sorted(sc_roots, f, level):
    sf = standard_form(f, level, sc_roots)
    for _, m in sf.settled:
        assert sc_roots.mono_value(m) < level
        assert is_standard(m, sc_roots)
    vals = [sc_roots.mono_value(m) for _, m in sf.settled]
    assert vals == sorted(vals)


@settings(max_examples=60, deadline=None)
@given(polys(max_deg=3), levels)
def test_slices_do_not_cancel(sc_roots, f, level):
    sf = standard_form(f, level, sc_roots)
    c = sc_roots.curvette
    for v in sorted({sc_roots.mono_value(m) for _, m in sf.settled}):
        piece = sum((sc_roots.mono_poly(m) * k for k, m in sf.slice(v)), Poly.zero(XYZ))
        assert nu_value(c, piece).value == v


@settings(max_examples=40, deadline=None)
@given(polys(max_deg=3), levels)
def test_rewriting_a_standard_form_changes_nothing(sc_roots, f, level):
    sf = standard_form(f, level, sc_roots)
    again = standard_form(sf.expand(), level, sc_roots)
    assert sorted(map(str, again.settled)) == sorted(map(str, sf.settled))


@settings(max_examples=100, deadline=None)
@given(nonconst)
def test_value_matches_substitution(sc_roots, f):
    v = nu_value(sc_roots.curvette, f)
    assume(v.is_finite and v.value < sc_roots.level)
    assert value_via_standard_form(f, sc_roots) == v.value


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([7, 12, 21, 25, 30, 31]), st.data())
def test_generated_ideal_has_large_values(sc_roots, gamma, data):
    gens = nu_ideal_generators(gamma, sc_roots)
    c = sc_roots.curvette
    for m in gens:
        assert sc_roots.mono_value(m) >= gamma
    f = Poly.zero(XYZ)
    for m in data.draw(st.lists(st.sampled_from(gens), min_size=1, max_size=3)):
        h = data.draw(polys(max_terms=2, max_deg=1))
        f = f + sc_roots.mono_poly(m) * h
    v = nu_value(c, f)
    assert not v.is_finite or v.value >= gamma
