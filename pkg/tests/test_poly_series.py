from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from sperval.errors import ArityMismatch
from sperval.exact_arith import RatFn
from sperval.poly_series import Poly, TruncSeries, series_order, series_substitute

from conftest import XYZ, P, U, space_curve

x_, y_, z_, t_, u_ = sympy.symbols("x y z t u")


@st.composite
def polys(draw, variables=XYZ, max_terms=4, max_deg=3):
    n = draw(st.integers(1, max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(0, max_deg)) for _ in variables)
        terms[e] = draw(st.integers(-4, 4))
    return Poly(variables, terms)


def to_sympy(f: Poly):
    syms = sympy.symbols(" ".join(f.variables))
    syms = syms if isinstance(syms, tuple) else (syms,)
    out = 0
    for e, c in f.terms.items():
        assert c.is_constant()
        v = c.constant_value()
        out += sympy.Rational(v.numerator, v.denominator) * sympy.prod([s ** k for s, k in zip(syms, e)])
    return sympy.expand(out)


def test_addition_cancels():
    assert P("y^2 - x*z") + P("x*z") == P("y^2")


def test_product_expansion():
    assert P("y") * P("y^2 - x*z") == P("y^3 - x*y*z")


def test_syzygy():
    q4, q5, q6 = P("y^2 - x*z"), P("y*z - x^4"), P("z^2 - x^3*y")
    assert P("x") * q6 - P("y") * q5 + P("z") * q4 == Poly.zero(XYZ)


def test_arity_mismatch():
    with pytest.raises(ArityMismatch):
        P("x") + Poly.var(("x", "y"), "x")


@settings(max_examples=100, deadline=None)
@given(polys(), polys())
def test_ring_ops_match_sympy(f, g):
    assert to_sympy(f * g) == sympy.expand(to_sympy(f) * to_sympy(g))
    assert to_sympy(f - g) == sympy.expand(to_sympy(f) - to_sympy(g))


def test_substitute_space_curve_roots():
    c = space_curve()
    q4 = series_substitute(P("y^2 - x*z"), c.assignment)
    assert q4.with_trunc(64) == TruncSeries({21: 2 * U - 1, 22: U * U}, 64)
    assert q4.trunc >= 64
    q5 = series_substitute(P("y*z - x^4"), c.assignment)
    assert q5.with_trunc(64) == TruncSeries({25: U + 1, 26: U}, 64)


def test_substitute_constant():
    c = space_curve()
    s = series_substitute(Poly.const(XYZ, 1), c.assignment)
    assert s.with_trunc(64) == TruncSeries({0: 1}, 64)


def test_series_order_examples():
    assert series_order(TruncSeries({21: 2 * U - 1, 22: U * U}, 40)).value == 21
    z = series_order(TruncSeries({}, 40))
    assert not z.is_finite and z.trunc == 40
    assert series_order(TruncSeries({29: 2 - U, 30: 1}, 64)).value == 29


def test_substitution_matches_sympy():
    c = space_curve()
    f = P("x^3 + y^3 + z^3 - 2*x*y*z")
    sub = {x_: t_ ** 6, y_: t_ ** 10 + u_ * t_ ** 11, z_: t_ ** 14 + t_ ** 15}
    expected = sympy.Poly(sympy.expand(to_sympy(f).subs(sub)), t_)
    got = series_substitute(f, c.assignment)
    for (k,), coef in expected.terms():
        mine = got.coefficient(k)
        assert sympy.expand(sympy.sympify(str(mine).replace("^", "**")) - coef) == 0


@settings(max_examples=60, deadline=None)
@given(polys(max_deg=2), polys(max_deg=2))
def test_substitution_is_a_ring_map(f, g):
    a = space_curve().assignment
    sf, sg = series_substitute(f, a), series_substitute(g, a)
    def agree(p, q):
        n = min(p.trunc, q.trunc)
        return p.with_trunc(n) == q.with_trunc(n)

    assert agree(series_substitute(f * g, a), sf * sg)
    assert agree(series_substitute(f + g, a), sf + sg)


@settings(max_examples=60, deadline=None)
@given(polys(max_deg=2), polys(max_deg=2))
def test_order_adds(f, g):
    a = space_curve().assignment
    sf, sg = series_substitute(f, a), series_substitute(g, a)
    of, og = series_order(sf), series_order(sg)
    prod = sf * sg
    if of.is_finite and og.is_finite and of.value + og.value < prod.trunc:
        assert series_order(prod).value == of.value + og.value


@settings(max_examples=60, deadline=None)
@given(polys(max_deg=2), st.fractions(min_value=-5, max_value=5).filter(bool))
def test_unit_scales_coefficients(f, c):
    a = space_curve().assignment
    s, sc = series_substitute(f, a), series_substitute(f * RatFn.const(c), a)
    for e, v in s.coeffs.items():
        assert sc.coefficient(e) == v * c


def test_series_division():
    s = TruncSeries({0: 1, 1: 1}, 10)
    inv = TruncSeries({0: 1}, 10) / s
    assert (inv * s).with_trunc(10) == TruncSeries({0: 1}, 10)
    assert inv.coefficient(Fraction(3)) == -1
