"""Generalized monomials in approximate roots.

A monomial is a tuple of ``(root_index, exponent)`` pairs sorted by index,
with positive exponents; ``()`` is the empty monomial 1.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Mono = Tuple[Tuple[int, int], ...]
ONE: Mono = ()


def mono(pairs: Iterable[Tuple[int, int]]) -> Mono:
    acc: Dict[int, int] = {}
    for i, k in pairs:
        if k:
            acc[i] = acc.get(i, 0) + k
    return tuple(sorted((i, k) for i, k in acc.items() if k))


def single(i: int, k: int = 1) -> Mono:
    return ((i, k),) if k else ONE


def mul(a: Mono, b: Mono) -> Mono:
    return mono(a + b)


def power(a: Mono, k: int) -> Mono:
    return tuple((i, e * k) for i, e in a) if k else ONE


def divide(a: Mono, b: Mono) -> Optional[Mono]:
    """a / b, or None when b does not divide a."""
    da = dict(a)
    for i, k in b:
        if da.get(i, 0) < k:
            return None
        da[i] -= k
    return tuple(sorted((i, k) for i, k in da.items() if k))


def divides(b: Mono, a: Mono) -> bool:
    return divide(a, b) is not None


def support(a: Mono) -> Tuple[int, ...]:
    return tuple(i for i, _ in a)


def degree(a: Mono) -> int:
    return sum(k for _, k in a)


def exponent_vector(a: Mono, order: Sequence[int]) -> Tuple[int, ...]:
    d = dict(a)
    return tuple(d.get(i, 0) for i in order)


def enumerate_of_value(target: Fraction, roots: Sequence[int], values: Sequence[Fraction]) -> List[Mono]:
    """All monomials in ``roots`` (with the given positive values) whose value
    is exactly ``target``."""
    out: List[Mono] = []

    def rec(pos: int, remaining: Fraction, acc: List[Tuple[int, int]]):
        if remaining == 0:
            out.append(mono(acc))
            return
        if pos == len(roots):
            return
        v = values[pos]
        k = 0
        while k * v <= remaining:
            rec(pos + 1, remaining - k * v, acc + [(roots[pos], k)] if k else acc)
            k += 1

    rec(0, Fraction(target), [])
    return out


def enumerate_below(bound: Fraction, roots: Sequence[int], values: Sequence[Fraction]) -> List[Mono]:
    """All monomials (including 1) of value strictly below ``bound``."""
    out: List[Mono] = []

    def rec(pos: int, used: Fraction, acc: List[Tuple[int, int]]):
        if pos == len(roots):
            out.append(mono(acc))
            return
        v = values[pos]
        k = 0
        while used + k * v < bound:
            rec(pos + 1, used + k * v, acc + [(roots[pos], k)] if k else acc)
            k += 1

    rec(0, Fraction(0), [])
    return out


def rational_gcd(values: Iterable[Fraction]) -> Fraction:
    """Positive generator of the group generated by the given rationals."""
    g = Fraction(0)
    for v in values:
        v = Fraction(v)
        if g == 0:
            g = abs(v)
            continue
        den = g.denominator * v.denominator // gcd(g.denominator, v.denominator)
        g = Fraction(gcd(int(g * den), int(v * den)), den)
    return g


def next_semigroup_element(values: Iterable[Fraction], after: Fraction) -> Optional[Fraction]:
    """Smallest element of the semigroup generated by ``values`` that is
    strictly greater than ``after``."""
    vals = sorted({Fraction(v) for v in values if v is not None and v > 0})
    if not vals:
        return None
    den = 1
    for v in vals:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in vals]
    start = Fraction(after) * den
    lo = int(start) + 1 if start == int(start) else -(-start.numerator // start.denominator)
    lo = max(lo, 1)
    hi = lo + ints[0]
    reach = [False] * (hi + 1)
    reach[0] = True
    for n in range(1, hi + 1):
        reach[n] = any(g <= n and reach[n - g] for g in ints)
        if n >= lo and reach[n]:
            return Fraction(n, den)
    return None
