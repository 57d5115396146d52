"""Exact arithmetic in Q(u): rationals, rational functions of one parameter,
Sturm root counting and sign decisions under parameter assumptions.

Univariate polynomials are plain tuples of ``Fraction`` coefficients, lowest
degree first, with no trailing zeros (the zero polynomial is ``()``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple, Union

from .errors import AmbiguousSign, DivisionByZero, EndpointIsRoot, PoleInInterval

Rat = Fraction
UPoly = Tuple[Fraction, ...]
Number = Union[int, Fraction]

PARAM = "u"


def as_rat(q) -> Fraction:
    if isinstance(q, Fraction):
        return q
    if isinstance(q, (int, str)):
        return Fraction(q)
    raise TypeError(f"cannot read {q!r} as an exact rational")


# --- univariate polynomials -------------------------------------------------

def ptrim(p: Sequence[Fraction]) -> UPoly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(Fraction(c) for c in p)


def padd(p: UPoly, q: UPoly) -> UPoly:
    n = max(len(p), len(q))
    return ptrim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def pneg(p: UPoly) -> UPoly:
    return tuple(-c for c in p)


def psub(p: UPoly, q: UPoly) -> UPoly:
    return padd(p, pneg(q))


def pscale(p: UPoly, c: Fraction) -> UPoly:
    if c == 0:
        return ()
    return tuple(a * c for a in p)


def pmul(p: UPoly, q: UPoly) -> UPoly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return ptrim(out)


def pdivmod(p: UPoly, q: UPoly) -> Tuple[UPoly, UPoly]:
    if not q:
        raise DivisionByZero("polynomial division by zero")
    r = list(p)
    dq = len(q) - 1
    lc = q[-1]
    if len(r) - 1 < dq:
        return (), ptrim(r)
    quo = [Fraction(0)] * (len(r) - dq)
    for k in range(len(r) - 1 - dq, -1, -1):
        c = r[k + dq] / lc
        quo[k] = c
        if c:
            for j in range(dq + 1):
                r[k + j] -= c * q[j]
    return ptrim(quo), ptrim(r[:dq])


def pmonic(p: UPoly) -> UPoly:
    if not p:
        return p
    return pscale(p, 1 / p[-1])


def pgcd(p: UPoly, q: UPoly) -> UPoly:
    while q:
        p, q = q, pdivmod(p, q)[1]
    return pmonic(p)


def peval(p: UPoly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def pderiv(p: UPoly) -> UPoly:
    return ptrim([i * p[i] for i in range(1, len(p))])


def pdeg(p: UPoly) -> int:
    return len(p) - 1


def pfmt(p: UPoly, var: str = PARAM) -> str:
    if not p:
        return "0"
    parts = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if i == 0:
            body = str(a)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if a == 1 else f"{a}*{mono}"
        parts.append((sign, body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


# --- rational functions -----------------------------------------------------

_ONE: UPoly = (Fraction(1),)


class RatFn:
    """Element of Q(u) in reduced form: coprime numerator and monic denominator."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Sequence = (), den: Sequence = _ONE, _reduced: bool = False):
        num = ptrim(num)
        den = ptrim(den)
        if not den:
            raise DivisionByZero("rational function with zero denominator")
        if not _reduced:
            if not num:
                den = _ONE
            elif len(den) > 1:
                g = pgcd(num, den)
                if len(g) > 1:
                    num = pdivmod(num, g)[0]
                    den = pdivmod(den, g)[0]
            lc = den[-1]
            if lc != 1:
                num = pscale(num, 1 / lc)
                den = pscale(den, 1 / lc)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def const(cls, q: Number) -> "RatFn":
        q = as_rat(q)
        return cls((q,) if q else (), _ONE, _reduced=True)

    @classmethod
    def param(cls) -> "RatFn":
        return cls((Fraction(0), Fraction(1)), _ONE, _reduced=True)

    @classmethod
    def coerce(cls, x) -> "RatFn":
        if isinstance(x, RatFn):
            return x
        return cls.const(x)

    # predicates
    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_constant(self) -> bool:
        return len(self.num) <= 1 and len(self.den) == 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} depends on {PARAM}")
        return self.num[0] if self.num else Fraction(0)

    # arithmetic
    def __add__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        if self.is_constant() and other.is_constant():
            return RatFn.const(self.constant_value() + other.constant_value())
        if self.den == other.den:
            return RatFn(padd(self.num, other.num), self.den)
        return RatFn(padd(pmul(self.num, other.den), pmul(other.num, self.den)),
                     pmul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return RatFn(pneg(self.num), self.den, _reduced=True)

    def __sub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        if not self.num or not other.num:
            return RatFn()
        if self.is_constant() and other.is_constant():
            return RatFn.const(self.constant_value() * other.constant_value())
        if other.is_constant():
            return RatFn(pscale(self.num, other.num[0]), self.den, _reduced=True)
        if self.is_constant():
            return RatFn(pscale(other.num, self.num[0]), other.den, _reduced=True)
        return RatFn(pmul(self.num, other.num), pmul(self.den, other.den))

    __rmul__ = __mul__

    def inverse(self) -> "RatFn":
        if not self.num:
            raise DivisionByZero("inverse of zero")
        return RatFn(self.den, self.num)

    def __truediv__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        if not other.num:
            raise DivisionByZero(f"division of {self} by zero")
        if other.is_constant():
            return RatFn(pscale(self.num, 1 / other.num[0]), self.den, _reduced=True)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RatFn.coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = RatFn.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # comparison and hashing
    def __eq__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def evaluate(self, q: Number) -> Fraction:
        q = as_rat(q)
        d = peval(self.den, q)
        if d == 0:
            raise DivisionByZero(f"{self} has a pole at {PARAM} = {q}")
        return peval(self.num, q) / d

    def __repr__(self):
        return f"RatFn({self})"

    def __str__(self):
        if len(self.den) == 1:
            return pfmt(self.num)
        n = pfmt(self.num)
        if len([c for c in self.num if c]) > 1:
            n = f"({n})"
        return f"{n}/({pfmt(self.den)})"

    def is_simple(self) -> bool:
        """True when printing needs no parentheses as a coefficient."""
        return len(self.den) == 1 and len([c for c in self.num if c]) <= 1


def _coerce_or_none(x) -> Optional[RatFn]:
    if isinstance(x, RatFn):
        return x
    if isinstance(x, (int, Fraction)):
        return RatFn.const(x)
    return None


# --- Sturm sequences --------------------------------------------------------

Endpoint = Optional[Fraction]  # None stands for -inf (as lower) or +inf (as upper)


def sturm_sequence(p: UPoly) -> list:
    seq = [p, pderiv(p)]
    while seq[-1]:
        r = pdivmod(seq[-2], seq[-1])[1]
        seq.append(pneg(r))
    seq.pop()
    return seq


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _sign_at(p: UPoly, x: Endpoint, upper: bool) -> int:
    if x is not None:
        return _sign(peval(p, x))
    lc = _sign(p[-1])
    if upper or pdeg(p) % 2 == 0:
        return lc
    return -lc


def _variations(signs) -> int:
    nz = [s for s in signs if s]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def sturm_root_count(p: Sequence, lo: Endpoint, hi: Endpoint) -> int:
    """Number of distinct real roots of ``p`` in the open interval (lo, hi)."""
    p = ptrim(p)
    if not p:
        raise ValueError("the zero polynomial has no finite root count")
    lo = None if lo is None else as_rat(lo)
    hi = None if hi is None else as_rat(hi)
    if lo is not None and hi is not None and not lo < hi:
        raise ValueError(f"empty interval ({lo}, {hi})")
    for x in (lo, hi):
        if x is not None and peval(p, x) == 0:
            raise EndpointIsRoot(f"{pfmt(p)} vanishes at the endpoint {x}", endpoint=x)
    if pdeg(p) == 0:
        return 0
    seq = sturm_sequence(p)
    return (_variations([_sign_at(q, lo, False) for q in seq])
            - _variations([_sign_at(q, hi, True) for q in seq]))


def deflate_endpoint(p: UPoly, x: Endpoint) -> UPoly:
    """Divide out every factor (u - x) of ``p``; roots at an open endpoint do
    not affect the sign inside the interval."""
    if x is None or not p:
        return p
    lin = (-x, Fraction(1))
    while peval(p, x) == 0:
        p = pdivmod(p, lin)[0]
    return p


# --- parameter assumptions ----------------------------------------------------

@dataclass(frozen=True)
class ParamAssumption:
    """Either an exact value of u or an open interval (lower, upper);
    ``None`` bounds stand for -inf / +inf."""

    kind: str
    value: Optional[Fraction] = None
    lower: Optional[Fraction] = None
    upper: Optional[Fraction] = None

    def __post_init__(self):
        if self.kind == "exact":
            if self.value is None:
                raise ValueError("exact assumption needs a value")
        elif self.kind == "interval":
            if self.lower is not None and self.upper is not None and not self.lower < self.upper:
                raise ValueError(f"empty interval ({self.lower}, {self.upper})")
        else:
            raise ValueError(f"unknown assumption kind {self.kind!r}")

    @classmethod
    def exact(cls, q: Number) -> "ParamAssumption":
        return cls("exact", value=as_rat(q))

    @classmethod
    def interval(cls, lower: Optional[Number] = None, upper: Optional[Number] = None) -> "ParamAssumption":
        return cls("interval",
                   lower=None if lower is None else as_rat(lower),
                   upper=None if upper is None else as_rat(upper))

    @classmethod
    def free(cls) -> "ParamAssumption":
        return cls.interval()

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact"

    def sample(self) -> Fraction:
        """A rational point of the assumed set."""
        if self.is_exact:
            return self.value
        lo, hi = self.lower, self.upper
        if lo is None and hi is None:
            return Fraction(0)
        if lo is None:
            return hi - 1
        if hi is None:
            return lo + 1
        return (lo + hi) / 2

    def contains(self, q: Number) -> bool:
        q = as_rat(q)
        if self.is_exact:
            return q == self.value
        return (self.lower is None or self.lower < q) and (self.upper is None or q < self.upper)

    def __str__(self):
        if self.is_exact:
            return f"{PARAM} = {self.value}"
        lo, hi = self.lower, self.upper
        if lo is None and hi is None:
            return f"{PARAM} free"
        if hi is None:
            return f"{PARAM} > {lo}"
        if lo is None:
            return f"{PARAM} < {hi}"
        return f"{lo} < {PARAM} < {hi}"


def sign_under(f, a: ParamAssumption) -> int:
    """Constant sign (-1, 0, 1) of ``f`` on the set described by ``a``."""
    f = RatFn.coerce(f)
    if f.is_zero():
        return 0
    if f.is_constant():
        return _sign(f.constant_value())
    if a.is_exact:
        d = peval(f.den, a.value)
        if d == 0:
            raise PoleInInterval(f"{f} has a pole at {PARAM} = {a.value}")
        return _sign(peval(f.num, a.value)) * _sign(d)
    lo, hi = a.lower, a.upper
    den = deflate_endpoint(deflate_endpoint(f.den, lo), hi)
    if pdeg(den) > 0 and sturm_root_count(den, lo, hi):
        raise PoleInInterval(f"{f} has a pole for {a}")
    num = deflate_endpoint(deflate_endpoint(f.num, lo), hi)
    if pdeg(num) > 0 and sturm_root_count(num, lo, hi):
        raise AmbiguousSign(f"{f} changes sign for {a}", value=f)
    x = a.sample()
    return _sign(peval(f.num, x)) * _sign(peval(f.den, x))


def sign_symbol(s: int) -> str:
    return {1: "+", -1: "-", 0: "0"}[s]
