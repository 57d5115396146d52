"""Multivariate polynomials over Q(u) and truncated power series in t."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

from .errors import ArityMismatch, DivisionByZero, ValueUnknown
from .exact_arith import RatFn, as_rat

Exponent = Tuple[int, ...]
INF = math.inf


def _coeff(c) -> RatFn:
    return RatFn.coerce(c)


class Poly:
    """Polynomial in the named ring variables with RatFn coefficients."""

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Optional[Mapping[Exponent, object]] = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean: Dict[Exponent, RatFn] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != n:
                raise ArityMismatch(f"exponent {e} does not match variables {self.variables}")
            if any(k < 0 for k in e):
                raise ValueError(f"negative exponent {e}")
            c = _coeff(c)
            if c:
                clean[e] = clean.get(e, RatFn()) + c
                if not clean[e]:
                    del clean[e]
        self.terms = clean
        self._hash = None

    # constructors
    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Poly":
        return cls(variables)

    @classmethod
    def const(cls, variables: Sequence[str], c) -> "Poly":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "Poly":
        variables = tuple(variables)
        if name not in variables:
            raise ArityMismatch(f"unknown variable {name!r}")
        e = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {e: 1})

    @classmethod
    def monomial(cls, variables: Sequence[str], exps: Exponent, c=1) -> "Poly":
        return cls(variables, {tuple(exps): c})

    @classmethod
    def _raw(cls, variables, terms) -> "Poly":
        p = cls.__new__(cls)
        p.variables = variables
        p.terms = terms
        p._hash = None
        return p

    # structure
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def order(self) -> Optional[int]:
        """m-adic order: least total degree of a term (None for 0)."""
        return min((sum(e) for e in self.terms), default=None)

    def lowest_degree_part(self) -> "Poly":
        d = self.order()
        return Poly._raw(self.variables, {e: c for e, c in self.terms.items() if sum(e) == d})

    def constant_term(self) -> RatFn:
        return self.terms.get((0,) * len(self.variables), RatFn())

    def coefficient(self, exps: Exponent) -> RatFn:
        return self.terms.get(tuple(exps), RatFn())

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    # arithmetic
    def _check(self, other: "Poly"):
        if self.variables != other.variables:
            raise ArityMismatch(f"variables {self.variables} vs {other.variables}")

    def _lift(self, other) -> Optional["Poly"]:
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, RatFn)):
            return Poly.const(self.variables, other)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            s = c if s is None else s + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly._raw(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RatFn)):
            c = _coeff(other)
            if not c:
                return Poly.zero(self.variables)
            return Poly._raw(self.variables, {e: v * c for e, v in self.terms.items()})
        other = self._lift(other)
        if other is None:
            return NotImplemented
        out: Dict[Exponent, RatFn] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return Poly._raw(self.variables, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.const(self.variables, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, RatFn)):
            other = Poly.const(self.variables, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    def divide_monomial(self, exps: Exponent) -> "Poly":
        """Exact division by a monomial; raises if some term is not divisible."""
        out = {}
        for e, c in self.terms.items():
            q = tuple(a - b for a, b in zip(e, exps))
            if any(k < 0 for k in q):
                raise ValueError(f"{self} is not divisible by the monomial {exps}")
            out[q] = c
        return Poly._raw(self.variables, out)

    def compose(self, images: Mapping[str, "Poly"], variables: Optional[Sequence[str]] = None) -> "Poly":
        """Substitute polynomials (over ``variables``) for each variable."""
        if variables is None:
            variables = next(iter(images.values())).variables
        powers: Dict[Tuple[int, int], Poly] = {}

        def power(i, k):
            key = (i, k)
            if key not in powers:
                powers[key] = images[self.variables[i]] ** k
            return powers[key]

        out = Poly.zero(variables)
        for e, c in self.terms.items():
            term = Poly.const(variables, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def embed(self, variables: Sequence[str]) -> "Poly":
        """The same polynomial viewed over a larger list of variable names."""
        variables = tuple(variables)
        missing = set(self.variables) - set(variables)
        if missing:
            raise ArityMismatch(f"variables {sorted(missing)} not in {variables}")
        pos = [variables.index(v) for v in self.variables]
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(variables)
            for i, k in zip(pos, e):
                ne[i] = k
            out[tuple(ne)] = c
        return Poly._raw(variables, out)

    def rename(self, variables: Sequence[str]) -> "Poly":
        return Poly._raw(tuple(variables), dict(self.terms))

    def sorted_terms(self):
        """Terms by increasing total degree, then decreasing lex exponent."""
        return sorted(self.terms.items(), key=lambda ec: (sum(ec[0]), tuple(-k for k in ec[0])))

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        return format_terms([(c, mono_str(self.variables, e)) for e, c in self.sorted_terms()])


def mono_str(names: Sequence[str], exps: Exponent, mul: str = "*") -> str:
    parts = []
    for n, k in zip(names, exps):
        if k == 1:
            parts.append(n)
        elif k > 1:
            parts.append(f"{n}^{k}")
    return mul.join(parts) if parts else "1"


def format_terms(terms: Iterable[Tuple[RatFn, str]]) -> str:
    """Render (coefficient, monomial-string) pairs as a signed sum."""
    out = []
    for c, m in terms:
        neg = False
        if c.is_constant():
            v = c.constant_value()
            neg = v < 0
            a = abs(v)
            if m == "1":
                body = str(a)
            elif a == 1:
                body = m
            else:
                body = f"{a}*{m}"
        else:
            cs = str(c)
            if len(c.den) == 1 and len([x for x in c.num if x]) == 1 and c.num[-1] < 0:
                neg = True
                cs = str(-c)
            if m == "1":
                body = cs
            elif len(c.den) == 1 and len([x for x in c.num if x]) == 1:
                body = f"{cs}*{m}"
            else:
                body = f"({cs})*{m}"
        out.append((neg, body))
    if not out:
        return "0"
    s = ("-" if out[0][0] else "") + out[0][1]
    for neg, body in out[1:]:
        s += (" - " if neg else " + ") + body
    return s


# --- truncated series ---------------------------------------------------------

@dataclass(frozen=True)
class SeriesOrder:
    """t-adic order: a finite exponent, or ``None`` when the series is zero up
    to its truncation (the order is then only known to be >= ``trunc``)."""

    value: Optional[Fraction]
    trunc: Union[Fraction, float]

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def require(self) -> Fraction:
        if self.value is None:
            raise ValueUnknown(f"value is at least {self.trunc} (zero to truncation)", trunc=self.trunc)
        return self.value

    def __str__(self):
        return str(self.value) if self.value is not None else f">= {self.trunc} (zero to truncation)"


class TruncSeries:
    """Finite sum of c_e t^e, reliable for exponents below ``trunc``
    (``math.inf`` marks an exact series)."""

    __slots__ = ("coeffs", "trunc")

    def __init__(self, coeffs: Optional[Mapping] = None, trunc=INF):
        trunc = trunc if trunc == INF else as_rat(trunc)
        clean = {}
        for e, c in (coeffs or {}).items():
            e = as_rat(e)
            if e < 0:
                raise ValueError("negative exponent in a power series")
            c = RatFn.coerce(c)
            if c and e < trunc:
                clean[e] = clean.get(e, RatFn()) + c
                if not clean[e]:
                    del clean[e]
        self.coeffs = dict(sorted(clean.items()))
        self.trunc = trunc

    @classmethod
    def _raw(cls, coeffs, trunc):
        s = cls.__new__(cls)
        s.coeffs = dict(sorted((e, c) for e, c in coeffs.items() if c and e < trunc))
        s.trunc = trunc
        return s

    @classmethod
    def const(cls, c, trunc=INF):
        return cls({0: c}, trunc)

    @classmethod
    def monomial(cls, e, c=1, trunc=INF):
        return cls({e: c}, trunc)

    def order(self) -> SeriesOrder:
        for e in self.coeffs:
            return SeriesOrder(e, self.trunc)
        return SeriesOrder(None, self.trunc)

    def _order_bound(self):
        for e in self.coeffs:
            return e
        return self.trunc

    def lead(self) -> RatFn:
        for c in self.coeffs.values():
            return c
        raise ValueUnknown("zero to truncation has no leading coefficient", trunc=self.trunc)

    def coefficient(self, e) -> RatFn:
        e = as_rat(e)
        if e >= self.trunc:
            raise ValueUnknown(f"coefficient of t^{e} lies beyond truncation {self.trunc}")
        return self.coeffs.get(e, RatFn())

    def is_zero_to_truncation(self) -> bool:
        return not self.coeffs

    def __add__(self, other):
        if not isinstance(other, TruncSeries):
            other = TruncSeries.const(other)
        trunc = min(self.trunc, other.trunc)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out[e] + c if e in out else c
        return TruncSeries._raw(out, trunc)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries._raw({e: -c for e, c in self.coeffs.items()}, self.trunc)

    def __sub__(self, other):
        if not isinstance(other, TruncSeries):
            other = TruncSeries.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RatFn)):
            c = RatFn.coerce(other)
            return TruncSeries._raw({e: v * c for e, v in self.coeffs.items()}, self.trunc)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        trunc = min(self.trunc + other._order_bound(), other.trunc + self._order_bound())
        out: Dict[Fraction, RatFn] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if e >= trunc:
                    break
                out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return TruncSeries._raw(out, trunc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a series")
        out = TruncSeries.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __truediv__(self, other):
        """Exact quotient when ``other`` has a known order; the result is
        reliable below min(N_a - m, N_b + ord(a) - 2m) with m = ord(other)."""
        if isinstance(other, (int, Fraction, RatFn)):
            c = RatFn.coerce(other)
            if not c:
                raise DivisionByZero("series divided by zero")
            return self * c.inverse()
        m = other.order()
        if not m.is_finite:
            raise ValueUnknown("division by a series that is zero to truncation")
        m = m.value
        lead = other.lead()
        trunc = min(self.trunc - m, other.trunc + self._order_bound() - 2 * m)
        rem = self
        quo: Dict[Fraction, RatFn] = {}
        while rem.coeffs:
            e, c = next(iter(rem.coeffs.items()))
            q = e - m
            if q >= trunc:
                break
            if q < 0:
                raise ValueError("quotient is not a power series")
            qc = c / lead
            quo[q] = qc
            rem = rem - other * TruncSeries.monomial(q, qc)
        return TruncSeries._raw(quo, trunc)

    def with_trunc(self, trunc) -> "TruncSeries":
        return TruncSeries._raw(self.coeffs, min(self.trunc, trunc))

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.trunc == other.trunc and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.trunc, tuple(self.coeffs.items())))

    def __repr__(self):
        return f"TruncSeries({self})"

    def head(self, terms: int = 3) -> str:
        """The first few terms, with ``+ ...`` when more follow."""
        items = list(self.coeffs.items())
        body = format_terms([(c, _tpow(e)) for e, c in items[:terms]]) if items else "0"
        return body + " + ..." if len(items) > terms or self.trunc != INF else body

    def __str__(self):
        body = format_terms([(c, _tpow(e)) for e, c in self.coeffs.items()])
        if self.trunc == INF:
            return body
        return f"{body} + O(t^{self.trunc})" if self.coeffs else f"O(t^{self.trunc})"


def _tpow(e: Fraction) -> str:
    if e == 0:
        return "1"
    if e == 1:
        return "t"
    return f"t^{e}" if e.denominator == 1 else f"t^({e})"


def series_substitute(f: Poly, assignment: Mapping[str, TruncSeries]) -> TruncSeries:
    """Image of ``f`` under the ring map sending each variable to its series."""
    for v in f.variables:
        if v not in assignment:
            raise ArityMismatch(f"variable {v!r} has no series")
    if f.is_zero():
        trunc = min((assignment[v].trunc for v in f.variables), default=INF)
        return TruncSeries({}, trunc)
    cache: Dict[Tuple[str, int], TruncSeries] = {}

    def power(v, k):
        key = (v, k)
        if key not in cache:
            cache[key] = assignment[v] if k == 1 else power(v, k - 1) * assignment[v]
        return cache[key]

    total: Optional[TruncSeries] = None
    for e, c in f.terms.items():
        term = TruncSeries.const(c)
        for v, k in zip(f.variables, e):
            if k:
                term = term * power(v, k)
        total = term if total is None else total + term
    return total


def series_order(s: TruncSeries) -> SeriesOrder:
    return s.order()
