"""Valuations given by curvettes or by monomial weights, initial forms, signs
at a point, and value semigroups."""

from __future__ import annotations

import heapq
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import ArityMismatch, InvariantViolation, ValueUnknown
from .exact_arith import ParamAssumption, RatFn, as_rat, sign_under
from .poly_series import Poly, SeriesOrder, TruncSeries, series_substitute


def _specialize_series(s: TruncSeries, q: Fraction) -> TruncSeries:
    return TruncSeries({e: c.evaluate(q) for e, c in s.coeffs.items()}, s.trunc)


class Curvette:
    """A point of the real spectrum given by power series in t, a parameter
    assumption, and the sign of t.

    With an exact parameter value the series are specialized to rational
    coefficients at construction, so every computation sees the actual point.
    """

    def __init__(self, assignment: Mapping[str, TruncSeries], param: Optional[ParamAssumption] = None,
                 t_sign: int = 1, variables: Optional[Sequence[str]] = None,
                 preparation: Sequence[Tuple[str, Poly]] = ()):
        self.preparation = tuple(preparation)
        self.variables = tuple(variables) if variables is not None else tuple(assignment)
        if set(self.variables) != set(assignment):
            raise ArityMismatch(f"assignment keys {sorted(assignment)} vs variables {self.variables}")
        if t_sign not in (1, -1):
            raise ValueError("t_sign must be +1 or -1")
        self.param = param if param is not None else ParamAssumption.free()
        self.t_sign = t_sign
        series = {v: assignment[v] for v in self.variables}
        if self.param.is_exact:
            series = {v: _specialize_series(s, self.param.value) for v, s in series.items()}
        self.assignment: Dict[str, TruncSeries] = series
        for v, s in series.items():
            o = s.order()
            if o.is_finite:
                if o.value <= 0:
                    raise InvariantViolation(f"{v} has order {o.value}; a curvette must be centered at the origin")
                sign_under(s.lead(), self.param)

    @property
    def trunc(self):
        return min(s.trunc for s in self.assignment.values())

    def with_assignment(self, assignment: Mapping[str, TruncSeries], variables=None) -> "Curvette":
        return Curvette(assignment, self.param, self.t_sign, variables)

    def with_t_sign(self, t_sign: int) -> "Curvette":
        return Curvette(self.assignment, self.param, t_sign, self.variables, self.preparation)

    def to_prepared(self, f: Poly) -> Poly:
        """Rewrite a polynomial in the original coordinates in terms of the
        prepared coordinates (each step replaced u by u - g)."""
        for name, g in self.preparation:
            images = {v: Poly.var(f.variables, v) for v in f.variables}
            images[name] = images[name] + g
            f = f.compose(images, f.variables)
        return f

    def coordinate_polys(self) -> Dict[str, Poly]:
        """Each prepared coordinate as a polynomial in the original ones."""
        coords = {v: Poly.var(self.variables, v) for v in self.variables}
        for name, g in self.preparation:
            coords[name] = coords[name] - g.compose(coords, self.variables)
        return coords

    def var(self, name: str) -> Poly:
        return Poly.var(self.variables, name)

    def series(self, f: Poly) -> TruncSeries:
        if f.variables != self.variables:
            raise ArityMismatch(f"polynomial over {f.variables}, curvette over {self.variables}")
        s = series_substitute(f, self.assignment)
        if self.param.is_exact:
            s = _specialize_series(s, self.param.value)
        return s

    def summary(self, terms: int = 3) -> str:
        parts = ", ".join(f"{v} = {s.head(terms)}" for v, s in self.assignment.items())
        return f"{parts}; {self.param}; t {'>' if self.t_sign > 0 else '<'} 0"

    def __repr__(self):
        parts = ", ".join(f"{v} = {s}" for v, s in self.assignment.items())
        return f"Curvette({parts}; {self.param}; t {'>' if self.t_sign > 0 else '<'} 0)"


@dataclass(frozen=True)
class InitialForm:
    """lead * T^value."""

    value: Fraction
    lead: RatFn

    def __str__(self):
        return f"({self.lead})*T^{self.value}"


def nu_value(c: Curvette, f: Poly) -> SeriesOrder:
    return c.series(f).order()


def initial_form(c: Curvette, f: Poly) -> InitialForm:
    s = c.series(f)
    o = s.order()
    if not o.is_finite:
        raise ValueUnknown(f"value of {f} is at least {o.trunc}", trunc=o.trunc)
    return InitialForm(o.value, s.lead())


def t_power_sign(e: Fraction, t_sign: int) -> int:
    """Sign of t^e when t has sign ``t_sign``."""
    e = as_rat(e)
    if t_sign > 0:
        return 1
    if e.denominator % 2 == 0:
        raise ValueError(f"sign of t^{e} for negative t is not determined (even denominator)")
    return -1 if e.numerator % 2 else 1


def sign_of_form(form: InitialForm, c: Curvette) -> int:
    return sign_under(form.lead, c.param) * t_power_sign(form.value, c.t_sign)


def sign_at(c: Curvette, f: Poly) -> int:
    if f.is_zero():
        return 0
    return sign_of_form(initial_form(c, f), c)


# --- monomial valuations ------------------------------------------------------

@dataclass(frozen=True)
class MonomialValuation:
    weights: Mapping[str, Fraction]

    def __post_init__(self):
        for v, w in self.weights.items():
            if as_rat(w) <= 0:
                raise ValueError(f"weight of {v} must be positive")


def monomial_value(m: MonomialValuation, f: Poly) -> Union[Fraction, float]:
    if f.is_zero():
        return math.inf
    w = [as_rat(m.weights[v]) for v in f.variables]
    return min(sum((k * wi for k, wi in zip(e, w)), Fraction(0)) for e in f.terms)


# --- semigroups ---------------------------------------------------------------

class Semigroup:
    """Additive semigroup generated by finitely many positive rationals.

    The enumeration cache is guarded by a lock so concurrent readers are safe.
    """

    def __init__(self, generators: Iterable):
        gens = sorted({as_rat(g) for g in generators})
        if not gens or gens[0] <= 0:
            raise ValueError("generators must be positive")
        self.generators = gens
        self._scale = reduce(lambda a, b: a * b // math.gcd(a, b), (g.denominator for g in gens), 1)
        self._int_gens = [int(g * self._scale) for g in gens]
        self._cache: List[Fraction] = []
        self._heap: List[int] = list(self._int_gens)
        heapq.heapify(self._heap)
        self._seen = set(self._int_gens)
        self._lock = threading.Lock()

    def _extend(self, count: int):
        while len(self._cache) < count:
            v = heapq.heappop(self._heap)
            self._cache.append(Fraction(v, self._scale))
            for g in self._int_gens:
                if v + g not in self._seen:
                    self._seen.add(v + g)
                    heapq.heappush(self._heap, v + g)

    def enumerate(self, count: int) -> List[Fraction]:
        if count < 1:
            raise ValueError("count must be at least 1")
        with self._lock:
            self._extend(count)
            return list(self._cache[:count])

    def below(self, bound) -> List[Fraction]:
        """Positive elements strictly below ``bound``."""
        bound = as_rat(bound)
        with self._lock:
            while not self._cache or self._cache[-1] < bound:
                self._extend(len(self._cache) + 1)
            return [v for v in self._cache if v < bound]

    def contains(self, v) -> bool:
        v = as_rat(v)
        if v == 0:
            return True
        if v < 0 or (v * self._scale).denominator != 1:
            return False
        n = int(v * self._scale)
        reach = [False] * (n + 1)
        reach[0] = True
        for i in range(1, n + 1):
            reach[i] = any(g <= i and reach[i - g] for g in self._int_gens)
        return reach[n]

    def index_of(self, v) -> int:
        """1-based position of ``v`` among the positive elements."""
        v = as_rat(v)
        if not self.contains(v) or v <= 0:
            raise ValueError(f"{v} is not a positive element of the semigroup")
        return len(self.below(v)) + 1


def semigroup_enumerate(g: Semigroup, count: int) -> List[Fraction]:
    return g.enumerate(count)
