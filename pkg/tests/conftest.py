from fractions import Fraction

import pytest

from sperval.exact_arith import ParamAssumption, RatFn
from sperval.parse import parse_poly, parse_series
from sperval.poly_series import Poly
from sperval.roots import roots_up_to
from sperval.separating import CurvettePair
from sperval.valuation import Curvette

XYZ = ("x", "y", "z")
XY = ("x", "y")


def space_curve(param=None, trunc=64, t_sign=1):
    """(t^6, t^10 + u t^11, t^14 + t^15) with u > 2 unless told otherwise."""
    series = {"x": parse_series("t^6", trunc), "y": parse_series("t^10 + u*t^11", trunc),
              "z": parse_series("t^14 + t^15", trunc)}
    return Curvette(series, param or ParamAssumption.interval(2, None), t_sign)


def plane(xs, ys, param=None, trunc=40, t_sign=1):
    return Curvette({"x": parse_series(xs, trunc), "y": parse_series(ys, trunc)}, param, t_sign)


def P(text, variables=XYZ):
    return parse_poly(text, variables)


def Q(text):
    """A rational function of u from text."""
    return parse_poly(text, ()).constant_term()


@pytest.fixture(scope="session")
def sc():
    return space_curve()


@pytest.fixture(scope="session")
def sc_roots(sc):
    return roots_up_to(sc, 37)


@pytest.fixture(scope="session")
def exact_pair():
    return CurvettePair(space_curve(ParamAssumption.exact(3)), space_curve(ParamAssumption.exact(4)))


@pytest.fixture(scope="session")
def symbolic_pair():
    return CurvettePair(space_curve(), space_curve())


@pytest.fixture(scope="session")
def xyz():
    return tuple(Poly.var(XYZ, v) for v in XYZ)


def F(x):
    return Fraction(x)


U = RatFn.param()


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
