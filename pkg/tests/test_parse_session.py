from fractions import Fraction

import pytest

from sperval.errors import InvariantViolation, SyntaxErrorAt, UnknownVariable
from sperval.exact_arith import ParamAssumption
from sperval.session import bundled_session, bundled_session_text, parse_session

from conftest import P

HEAD = "variables x y z\n"
CURVE = "curvette a: x = t^6; y = t^10 + u*t^11; z = t^14 + t^15\n"


def test_bundled_session_is_valid():
    cfg = bundled_session()
    assert cfg.variables == ("x", "y", "z")
    assert cfg.truncation == 64 and cfg.level == 37
    assert cfg.assumption == ParamAssumption.interval(2, None)
    assert cfg.polys["f"] == P("x^3 + y^3 + z^3")
    assert cfg.assumption_for("alpha3") == ParamAssumption.exact(3)
    assert cfg.assumption_for("beta") == ParamAssumption.interval(2, None)
    a = cfg.curvette("alpha")
    assert str(a.assignment["y"]).startswith("t^10")
    assert cfg.pair("exact").alpha.param == ParamAssumption.exact(3)


def test_parsing_is_deterministic():
    text = bundled_session_text()
    a, b = parse_session(text), parse_session(text)
    assert a.curvettes == b.curvettes and a.polys == b.polys and a.pairs == b.pairs


def test_last_assumption_wins():
    cfg = parse_session(HEAD + "assume u > 2\nassume u = 3\n" + CURVE)
    assert cfg.assumption == ParamAssumption.exact(3)
    assert cfg.curvette("a").param == ParamAssumption.exact(3)


def test_per_curvette_assumption_overrides():
    cfg = parse_session(HEAD + "assume u > 2\n" + CURVE + "assume a: 0 < u < 1\n")
    assert cfg.assumption_for("a") == ParamAssumption.interval(0, 1)


def test_malformed_exponent_position():
    with pytest.raises(SyntaxErrorAt) as exc:
        parse_session("variables x\ncurvette c: x = t^\n")
    assert exc.value.line == 2 and exc.value.col == 19
    with pytest.raises(SyntaxErrorAt) as exc:
        parse_session(HEAD + "poly g = x^")
    assert exc.value.line == 2


def test_unknown_variable():
    with pytest.raises(UnknownVariable):
        parse_session(HEAD + "curvette a: x = t; w = t^2\n")
    with pytest.raises(UnknownVariable):
        parse_session(HEAD + "poly g = x + w\n")
    with pytest.raises(UnknownVariable):
        parse_session(HEAD + CURVE + "pair p = a b\n")


@pytest.mark.parametrize("text", [
    HEAD + "trunc 30\nlevel 37\n",
    HEAD + CURVE + CURVE,
    HEAD + "curvette a: x = t; y = t\n",
    "variables x x\n",
    "variables t\n",
    HEAD + "assume 3 < u < 1\n",
])
def test_invariant_violations(text):
    with pytest.raises((InvariantViolation, SyntaxErrorAt)):
        parse_session(text)


def test_truncation_must_exceed_level():
    with pytest.raises(InvariantViolation):
        parse_session(HEAD + "trunc 37\nlevel 37\n")
    assert parse_session(HEAD + "trunc 38\nlevel 37\n").level == Fraction(37)


@pytest.mark.parametrize("text,line,col", [
    ("frobnicate 3", 1, 1),
    (HEAD + "trunc many", 2, 7),
    (HEAD + "assume u >> 2", 2, 8),
    (HEAD + CURVE + "pair p = a", 3, 6),
])
def test_syntax_error_positions(text, line, col):
    with pytest.raises(SyntaxErrorAt) as exc:
        parse_session(text)
    assert (exc.value.line, exc.value.col) == (line, col)


def test_comments_and_run_lines():
    cfg = parse_session(HEAD + "# comment\n" + CURVE.rstrip() + "  # trailing\nrun roots --level 21\n")
    assert cfg.commands == [["roots", "--level", "21"]]
    assert "a" in cfg.curvettes
