"""Session files: variables, curvettes, parameter assumptions, named
polynomials and pairs, all in one line-oriented text format.

Example::

    # space curve example
    variables x y z
    trunc 64
    level 37
    assume u > 2
    curvette alpha: x = t^6; y = t^10 + u*t^11; z = t^14 + t^15
    curvette beta: x = t^6; y = t^10 + u*t^11; z = t^14 + t^15
    assume beta: u = 4
    tsign beta -1
    poly f = x^3 + y^3 + z^3
    pair ab = alpha beta

Repeated ``assume`` lines for the same target replace each other (last wins).
A per-curvette ``assume NAME: ...`` overrides the global assumption.
``pair P = A B same-param`` ties both points to one value of u.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Dict, List, Optional, Tuple

from .errors import InvariantViolation, SyntaxErrorAt, UnknownVariable
from .exact_arith import PARAM, ParamAssumption
from .parse import T, parse_poly, parse_series
from .poly_series import Poly
from .separating import CurvettePair
from .valuation import Curvette

DEFAULT_TRUNC = 64
_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*$")
_NUM = r"-?\d+(?:/\d+)?"


@dataclass
class CurvetteDef:
    name: str
    series: Dict[str, str]
    line: int
    col: int = 1
    assumption: Optional[ParamAssumption] = None
    t_sign: int = 1


@dataclass
class SessionConfig:
    variables: Tuple[str, ...] = ()
    curvettes: Dict[str, CurvetteDef] = field(default_factory=dict)
    truncation: int = DEFAULT_TRUNC
    assumption: ParamAssumption = field(default_factory=ParamAssumption.free)
    polys: Dict[str, Poly] = field(default_factory=dict)
    pairs: Dict[str, Tuple[str, str, bool]] = field(default_factory=dict)
    level: Optional[Fraction] = None
    commands: List[List[str]] = field(default_factory=list)

    def assumption_for(self, name: str) -> ParamAssumption:
        d = self._def(name)
        return d.assumption if d.assumption is not None else self.assumption

    def _def(self, name: str) -> CurvetteDef:
        try:
            return self.curvettes[name]
        except KeyError:
            raise UnknownVariable(f"no curvette named {name!r}", name=name) from None

    def curvette(self, name: str, trunc: Optional[int] = None) -> Curvette:
        d = self._def(name)
        n = self.truncation if trunc is None else trunc
        series = {v: parse_series(text, n) for v, text in d.series.items()}
        return Curvette(series, self.assumption_for(name), d.t_sign, self.variables)

    def pair(self, name: Optional[str] = None, trunc: Optional[int] = None) -> CurvettePair:
        if name is None:
            if len(self.pairs) != 1:
                raise UnknownVariable("name a pair: the session defines " + (", ".join(self.pairs) or "none"))
            name = next(iter(self.pairs))
        if name not in self.pairs:
            raise UnknownVariable(f"no pair named {name!r}", name=name)
        a, b, same = self.pairs[name]
        return CurvettePair(self.curvette(a, trunc), self.curvette(b, trunc), same)

    def poly(self, name_or_text: str) -> Poly:
        if name_or_text in self.polys:
            return self.polys[name_or_text]
        return parse_poly(name_or_text, self.variables)

    def default_curvette(self) -> str:
        if not self.curvettes:
            raise UnknownVariable("the session defines no curvette")
        return next(iter(self.curvettes))


def _parse_assumption(text: str, line: int, col: int) -> ParamAssumption:
    s = text.replace(" ", "")
    p = PARAM
    patterns = [
        (rf"{p}=({_NUM})$", lambda m: ParamAssumption.exact(Fraction(m[1]))),
        (rf"{p}>({_NUM})$", lambda m: ParamAssumption.interval(Fraction(m[1]), None)),
        (rf"{p}<({_NUM})$", lambda m: ParamAssumption.interval(None, Fraction(m[1]))),
        (rf"({_NUM})<{p}<({_NUM})$", lambda m: ParamAssumption.interval(Fraction(m[1]), Fraction(m[2]))),
        (rf"{p}free$", lambda m: ParamAssumption.free()),
    ]
    for pat, make in patterns:
        m = re.match(pat, s)
        if m:
            try:
                return make(m)
            except ValueError as exc:
                raise InvariantViolation(f"{exc} (line {line})", line=line) from None
    raise SyntaxErrorAt(f"cannot read assumption {text.strip()!r}; use u = q, u > q, u < q or a < u < b", line, col)


def _check_name(name: str, line: int, col: int, what: str):
    if not _NAME.match(name):
        raise SyntaxErrorAt(f"bad {what} name {name!r}", line, col)


def parse_session(text: str) -> SessionConfig:
    cfg = SessionConfig()
    polys_raw: List[Tuple[str, str, int, int]] = []
    pairs_raw: List[Tuple[str, str, str, bool, int]] = []
    names: Dict[str, int] = {}

    def claim(name, line, col, what):
        _check_name(name, line, col, what)
        if name in names:
            raise InvariantViolation(f"name {name!r} defined twice (lines {names[name]} and {line})", line=line)
        if name in cfg.variables or name in (T, PARAM):
            raise InvariantViolation(f"{what} name {name!r} clashes with a variable (line {line})", line=line)
        names[name] = line

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        key, _, rest = line.strip().partition(" ")
        rest_col = indent + len(key) + 2
        rest = rest.strip()
        if key == "variables":
            vs = rest.replace(",", " ").split()
            if not vs:
                raise SyntaxErrorAt("variables needs at least one name", lineno, rest_col)
            for v in vs:
                _check_name(v, lineno, rest_col, "variable")
                if v in (T, PARAM):
                    raise InvariantViolation(f"{v!r} is reserved (line {lineno})", line=lineno)
            if len(set(vs)) != len(vs):
                raise InvariantViolation(f"repeated variable names (line {lineno})", line=lineno)
            if cfg.curvettes or polys_raw:
                raise InvariantViolation(f"variables must come before curvettes and polys (line {lineno})",
                                         line=lineno)
            cfg.variables = tuple(vs)
        elif key == "trunc":
            if not rest.isdigit() or int(rest) < 1:
                raise SyntaxErrorAt("trunc takes a positive integer", lineno, rest_col)
            cfg.truncation = int(rest)
        elif key == "level":
            try:
                cfg.level = Fraction(rest)
            except ValueError:
                raise SyntaxErrorAt("level takes a rational number", lineno, rest_col) from None
        elif key == "assume":
            target, colon, body = rest.partition(":")
            if colon:
                name = target.strip()
                if name not in cfg.curvettes:
                    raise UnknownVariable(f"assume for unknown curvette {name!r} (line {lineno})",
                                          name=name, line=lineno)
                cfg.curvettes[name].assumption = _parse_assumption(body, lineno, rest_col + len(target) + 1)
            else:
                cfg.assumption = _parse_assumption(rest, lineno, rest_col)
        elif key == "curvette":
            name, colon, body = rest.partition(":")
            name = name.strip()
            if not colon:
                raise SyntaxErrorAt("expected 'curvette NAME: x = ...; y = ...'", lineno, rest_col)
            if not cfg.variables:
                raise InvariantViolation(f"declare variables before curvettes (line {lineno})", line=lineno)
            claim(name, lineno, rest_col, "curvette")
            series: Dict[str, str] = {}
            col = line.index(":") + 2
            for part in body.split(";"):
                lhs, eq, rhs = part.partition("=")
                v = lhs.strip()
                if not eq:
                    raise SyntaxErrorAt(f"expected 'VAR = series', got {part.strip()!r}", lineno, col)
                if v not in cfg.variables:
                    raise UnknownVariable(f"unknown variable {v!r} (line {lineno}, col {col})",
                                          name=v, line=lineno, col=col)
                if v in series:
                    raise InvariantViolation(f"{v} assigned twice (line {lineno})", line=lineno)
                rhs_col = col + len(lhs) + 1
                parse_series(rhs, cfg.truncation, lineno, rhs_col)
                series[v] = rhs
                col += len(part) + 1
            missing = [v for v in cfg.variables if v not in series]
            if missing:
                raise InvariantViolation(f"curvette {name} does not assign {', '.join(missing)} (line {lineno})",
                                         line=lineno)
            cfg.curvettes[name] = CurvetteDef(name, series, lineno)
        elif key == "tsign":
            toks = rest.split()
            if len(toks) != 2 or toks[1] not in ("1", "-1", "+1", "+", "-"):
                raise SyntaxErrorAt("expected 'tsign NAME 1|-1'", lineno, rest_col)
            if toks[0] not in cfg.curvettes:
                raise UnknownVariable(f"tsign for unknown curvette {toks[0]!r} (line {lineno})", line=lineno)
            cfg.curvettes[toks[0]].t_sign = -1 if toks[1].startswith("-") else 1
        elif key == "poly":
            name, eq, body = rest.partition("=")
            if not eq:
                raise SyntaxErrorAt("expected 'poly NAME = expression'", lineno, rest_col)
            name = name.strip()
            claim(name, lineno, rest_col, "poly")
            polys_raw.append((name, body, lineno, line.index("=") + 2))
        elif key == "pair":
            name, eq, body = rest.partition("=")
            toks = body.split()
            if not eq or len(toks) not in (2, 3) or (len(toks) == 3 and toks[2] != "same-param"):
                raise SyntaxErrorAt("expected 'pair NAME = A B [same-param]'", lineno, rest_col)
            name = name.strip()
            claim(name, lineno, rest_col, "pair")
            pairs_raw.append((name, toks[0], toks[1], len(toks) == 3, lineno))
        elif key == "run":
            if not rest:
                raise SyntaxErrorAt("run needs a subcommand", lineno, rest_col)
            cfg.commands.append(rest.split())
        else:
            raise SyntaxErrorAt(f"unknown key {key!r}", lineno, indent + 1)

    for name, body, lineno, col in polys_raw:
        cfg.polys[name] = parse_poly(body, cfg.variables, lineno, col)
    for name, a, b, same, lineno in pairs_raw:
        for c in (a, b):
            if c not in cfg.curvettes:
                raise UnknownVariable(f"pair {name} names unknown curvette {c!r} (line {lineno})",
                                      name=c, line=lineno)
        cfg.pairs[name] = (a, b, same)
    if cfg.level is not None and not cfg.truncation > cfg.level:
        raise InvariantViolation(f"truncation {cfg.truncation} must exceed the requested level {cfg.level}",
                                 truncation=cfg.truncation, level=cfg.level)
    return cfg


def bundled_session_text(name: str = "space_curve.session") -> str:
    return resources.files("sperval").joinpath("data").joinpath(name).read_text(encoding="utf-8")


def bundled_session(name: str = "space_curve.session") -> SessionConfig:
    return parse_session(bundled_session_text(name))
