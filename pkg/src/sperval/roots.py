"""Approximate roots of a curvette valuation.

``roots_up_to`` builds the roots level by level over the value semigroup;
``roots_2d`` is the plane-curve variant driven by the numbers alpha'.
``prepare_coordinates`` changes coordinates so that no variable's initial
form is already produced by the earlier variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import monomials as M
from .errors import ArityMismatch, InvariantViolation, TruncationExceeded
from .exact_arith import RatFn, as_rat
from .monomials import Mono
from .poly_series import Poly, TruncSeries, format_terms
from .valuation import Curvette, Semigroup

Expression = Tuple[Tuple[RatFn, Mono], ...]


@dataclass
class RootRecord:
    index: int
    poly: Poly
    expression: Expression
    value: Optional[Fraction]
    lead: Optional[RatFn]
    in_monomial: Mono
    is_variable: bool
    created_level: Optional[Fraction] = None
    predecessor: Optional[int] = None
    successor: Optional[int] = None
    chain: int = 0
    step: int = 1
    name: str = ""
    essential: bool = True
    in_V: bool = False
    in_Theta: bool = False


@dataclass(frozen=True)
class Relation:
    dependent: Mono
    combination: Tuple[Tuple[RatFn, Mono], ...]
    new_root: int


@dataclass(frozen=True)
class LevelSnapshot:
    index: int
    value: Fraction
    Lambda: Tuple[int, ...]
    Psi: Tuple[int, ...]
    V: Tuple[int, ...]
    Theta: Tuple[int, ...]
    order: Tuple[int, ...]
    candidates: Tuple[Tuple[Mono, RatFn], ...]
    relations: Tuple[Relation, ...]


class RootSystem:
    """The roots found for a curvette, with per-level bookkeeping."""

    def __init__(self, curvette: Curvette, level: Fraction):
        self.curvette = curvette
        self.level = level
        self.roots: List[RootRecord] = []
        self.levels: List[LevelSnapshot] = []
        self.Lambda: Tuple[int, ...] = ()
        self.Psi: Tuple[int, ...] = ()
        self.V: Tuple[int, ...] = ()
        self.Theta: Tuple[int, ...] = ()
        self.order: Tuple[int, ...] = ()
        self.alpha: Dict[int, int] = {}
        self.stop_reason: Optional[str] = None
        self._poly_cache: Dict[Mono, Poly] = {}

    # lookups
    @property
    def variables(self) -> Tuple[int, ...]:
        return tuple(r.index for r in self.roots if r.is_variable)

    def root(self, key) -> RootRecord:
        if isinstance(key, int):
            return self.roots[key]
        for r in self.roots:
            if r.name == key:
                return r
        raise KeyError(key)

    def index_of_name(self, name: str) -> int:
        return self.root(name).index

    def snapshot(self, gamma) -> Optional[LevelSnapshot]:
        gamma = as_rat(gamma)
        for s in self.levels:
            if s.value == gamma:
                return s
        return None

    def level_values(self) -> List[Fraction]:
        return [s.value for s in self.levels]

    # monomial helpers
    def mono_value(self, m: Mono) -> Optional[Fraction]:
        total = Fraction(0)
        for i, k in m:
            v = self.roots[i].value
            if v is None:
                return None
            total += k * v
        return total

    def mono_lead(self, m: Mono) -> RatFn:
        out = RatFn.const(1)
        for i, k in m:
            out = out * self.roots[i].lead ** k
        return out

    def mono_poly(self, m: Mono) -> Poly:
        p = self._poly_cache.get(m)
        if p is None:
            p = Poly.const(self.curvette.variables, 1)
            for i, k in m:
                p = p * self.roots[i].poly ** k
            self._poly_cache[m] = p
        return p

    def mono_str(self, m: Mono) -> str:
        if not m:
            return "1"
        parts = []
        for i, k in m:
            n = self.roots[i].name
            if k > 1 and not n.isidentifier():
                n = f"({n})"
            parts.append(n if k == 1 else f"{n}^{k}")
        return "*".join(parts)

    def expression_str(self, expr) -> str:
        return format_terms([(c, self.mono_str(m)) for c, m in expr])

    def value_str(self, i: int) -> str:
        v = self.roots[i].value
        return f">= {self.curvette.trunc}" if v is None else str(v)

    def essential_roots(self) -> Tuple[int, ...]:
        return tuple(r.index for r in self.roots if r.essential)

    def flags_at(self, gamma) -> Dict[int, Dict[str, bool]]:
        """Membership of each root in Lambda, Psi, V and Theta at a level."""
        s = self.snapshot(gamma)
        if s is None:
            raise KeyError(f"{gamma} is not a computed level")
        return {r.index: {"Lambda": r.index in s.Lambda, "Psi": r.index in s.Psi,
                          "V": r.index in s.V, "Theta": r.index in s.Theta} for r in self.roots}


def classify_essential(rs: RootSystem, gamma) -> Dict[int, bool]:
    """Essential flags of the roots present at level ``gamma``: a root is
    inessential once its successor in the chain has been created."""
    gamma = as_rat(gamma)
    out = {}
    for r in rs.roots:
        if r.created_level is not None and r.created_level > gamma:
            continue
        s = r.successor
        out[r.index] = s is None or rs.roots[s].created_level > gamma
    return out


def _value(s: TruncSeries) -> Tuple[Optional[Fraction], Optional[RatFn]]:
    o = s.order()
    if not o.is_finite:
        return None, None
    return o.value, s.lead()


def _sort_key(v: Optional[Fraction]):
    return (1, 0) if v is None else (0, v)


class _Builder:
    def __init__(self, c: Curvette, level: Fraction):
        self.rs = RootSystem(c, level)
        self.c = c
        for name in sorted(c.variables, key=lambda v: _sort_key(c.assignment[v].order().value)):
            s = c.assignment[name]
            v, lead = _value(s)
            idx = len(self.rs.roots)
            self.rs.roots.append(RootRecord(idx, Poly.var(c.variables, name), ((RatFn.const(1), M.single(idx)),),
                                            v, lead, M.single(idx), True, name=name))
        self.next_chain = len(self.rs.roots) + 1

    def new_root(self, poly: Poly, expr: Expression, in_mono: Mono, level, predecessor=None) -> int:
        rs = self.rs
        v, lead = _value(self.c.series(poly))
        idx = len(rs.roots)
        rec = RootRecord(idx, poly, expr, v, lead, in_mono, False, created_level=level, predecessor=predecessor)
        if predecessor is not None:
            pred = rs.roots[predecessor]
            pred.successor = idx
            rec.chain = pred.chain
            rec.step = pred.step + 1
        else:
            rec.chain = self.next_chain
            self.next_chain += 1
        rs.roots.append(rec)
        return idx

    def finish_names(self, superscript_level: bool):
        rs = self.rs
        chains: Dict[int, List[RootRecord]] = {}
        for r in rs.roots:
            if not r.is_variable:
                chains.setdefault(r.chain, []).append(r)
        for num, members in chains.items():
            for r in members:
                if len(members) == 1:
                    r.name = f"Q{num}"
                elif superscript_level:
                    r.name = f"Q{num}^({r.created_level})"
                else:
                    r.name = f"Q{num}^({r.step})"


def roots_up_to(c: Curvette, level, prepare: bool = True) -> RootSystem:
    """Compute the approximate roots of the curvette valuation up to ``level``."""
    level = as_rat(level)
    if level >= c.trunc:
        raise TruncationExceeded(f"level {level} requires truncation above {level}, have {c.trunc}",
                                 level=str(level), trunc=str(c.trunc))
    if prepare:
        c = prepare_coordinates(c, level)
    b = _Builder(c, level)
    rs = b.rs
    Lambda: List[int] = []
    Theta: List[int] = list(range(len(rs.roots)))
    prev = Fraction(0)
    while True:
        gamma = M.next_semigroup_element(
            [rs.roots[i].value for i in Lambda + Theta if rs.roots[i].value is not None], prev)
        if gamma is None or gamma > level:
            break
        Lambda, Theta = _process_level(b, gamma, Lambda, Theta)
        prev = gamma
    rs.Theta = tuple(Theta)
    if rs.levels:
        last = rs.levels[-1]
        rs.Lambda, rs.Psi, rs.V = last.Lambda, last.Psi, last.V
    rs.order = tuple(rs.Lambda) + tuple(i for i in Theta if i not in rs.Lambda)
    for r in rs.roots:
        r.in_V = r.index in rs.V
        r.in_Theta = r.index in rs.Theta
        r.essential = r.index in rs.Psi or r.index in rs.Theta
    b.finish_names(superscript_level=True)
    return rs


def _process_level(b: _Builder, gamma: Fraction, Lambda: List[int], Theta: List[int]):
    rs = b.rs
    roots = rs.roots
    entering = [q for q in Theta if roots[q].value is not None and roots[q].value < gamma]
    Lambda = Lambda + entering
    rest = [q for q in Theta if q not in entering]
    order = tuple(Lambda + rest)
    lam_set = set(Lambda)
    Psi = [q for q in Lambda if roots[q].successor not in lam_set]
    V = []
    for pos, q in enumerate(Lambda):
        if q not in Psi:
            continue
        earlier = [roots[p].value for p in Lambda[:pos]]
        if not _in_semigroup(roots[q].value, earlier):
            V.append(q)
    vset = set(V)
    E = [roots[q].in_monomial for q in Lambda
         if not roots[q].is_variable and set(M.support(roots[q].in_monomial)) <= vset]
    v_monos = M.enumerate_of_value(gamma, V, [roots[q].value for q in V])
    cands = [m for m in v_monos if not any(M.divides(e, m) for e in E)]
    cands += [M.single(q) for q in rest if roots[q].value == gamma]
    cands.sort(key=lambda m: M.exponent_vector(m, order))
    leads = [rs.mono_lead(m) for m in cands]

    relations: List[Relation] = []
    new_roots: List[int] = []
    if cands:
        last, last_lead = cands[-1], leads[-1]
        dependent = list(range(len(cands) - 1))
        for i in sorted(dependent, reverse=True):
            m = cands[i]
            coef = leads[i] / last_lead
            theta_root = m[0][0] if len(m) == 1 and m[0][1] == 1 and m[0][0] in rest else None
            tail = rs.mono_poly(last) * coef
            if theta_root is not None:
                pred = roots[theta_root]
                expr = pred.expression + ((-coef, last),)
                idx = b.new_root(pred.poly - tail, expr, pred.in_monomial, gamma, predecessor=theta_root)
            else:
                expr = ((RatFn.const(1), m), (-coef, last))
                idx = b.new_root(rs.mono_poly(m) - tail, expr, m, gamma)
            v = roots[idx].value
            if v is not None and v <= gamma:
                raise InvariantViolation(f"new root at level {gamma} has value {v}")
            relations.append(Relation(m, ((coef, last),), idx))
            new_roots.append(idx)
        # chain numbers of brand-new roots follow the candidate order
        fresh = [r for r in new_roots if roots[r].predecessor is None]
        nums = sorted(roots[r].chain for r in fresh)
        for r, num in zip(sorted(fresh, key=lambda r: cands.index(roots[r].in_monomial)), nums):
            roots[r].chain = num
    Theta = rest + new_roots
    rs.levels.append(LevelSnapshot(len(rs.levels) + 1, gamma, tuple(Lambda), tuple(Psi), tuple(V), tuple(Theta),
                                   order, tuple(zip(cands, leads)), tuple(relations)))
    return Lambda, Theta


def _in_semigroup(v: Fraction, gens: Sequence[Optional[Fraction]]) -> bool:
    gens = [g for g in gens if g is not None]
    if not gens:
        return v == 0
    return Semigroup(gens).contains(v)


def prepare_coordinates(c: Curvette, level=None) -> Curvette:
    """Subtract from each coordinate the combination of earlier coordinates
    that already realizes its initial form, until none does below ``level``."""
    level = c.trunc if level is None else as_rat(level)
    if level > c.trunc:
        raise TruncationExceeded(f"preparation to {level} needs truncation above {c.trunc}")
    series = dict(c.assignment)
    steps = list(c.preparation)
    guard = 0
    while True:
        guard += 1
        if guard > 10_000:
            raise InvariantViolation("coordinate preparation did not stabilize")
        order = sorted(c.variables, key=lambda v: _sort_key(series[v].order().value))
        changed = False
        for j in range(1, len(order)):
            name = order[j]
            val, lead = _value(series[name])
            if val is None or val >= level:
                continue
            sub = Curvette({w: series[w] for w in order[:j]}, c.param, c.t_sign, order[:j])
            if val >= sub.trunc:
                continue
            srs = roots_up_to(sub, val, prepare=False)
            snap = srs.snapshot(val)
            if snap is None or not snap.candidates:
                continue
            m, m_lead = snap.candidates[-1]
            g = (srs.mono_poly(m) * (lead / m_lead)).embed(c.variables)
            series[name] = series[name] - Curvette(series, c.param, c.t_sign, c.variables).series(g)
            steps.append((name, g))
            changed = True
            break
        if not changed:
            break
    return Curvette(series, c.param, c.t_sign, c.variables, steps)


# --- plane curves -------------------------------------------------------------

def _alpha_prime(beta: Fraction, earlier: Sequence[Fraction]) -> int:
    g = M.rational_gcd(earlier)
    return (beta / g).denominator


def standard_exponents(target: Fraction, betas: Sequence[Fraction], alphas: Sequence[int]) -> Tuple[int, ...]:
    """Exponents (g_1, ..., g_k) with sum g_r beta_r = target, 0 <= g_r < alpha_r
    for r >= 2 and g_1 >= 0."""
    v = Fraction(target)
    out = [0] * len(betas)
    for r in range(len(betas) - 1, 0, -1):
        g = M.rational_gcd(betas[:r])
        for k in range(alphas[r]):
            if ((v - k * betas[r]) / g).denominator == 1:
                out[r] = k
                break
        else:
            raise InvariantViolation(f"{target} is not in the value group")
        v -= out[r] * betas[r]
    k1 = v / betas[0]
    if k1.denominator != 1 or k1 < 0:
        raise InvariantViolation(f"{target} has no standard representation")
    out[0] = int(k1)
    return tuple(out)


def roots_2d(c: Curvette, max_roots: int = 8, prepare: bool = True) -> RootSystem:
    """Approximate roots Q_1, Q_2, ... of a curvette valuation in two variables."""
    if len(c.variables) != 2:
        raise ArityMismatch(f"plane roots need 2 variables, got {len(c.variables)}")
    if prepare:
        c = prepare_coordinates(c)
    b = _Builder(c, c.trunc)
    rs = b.rs
    fixed: List[int] = [0]
    current = 1
    rs.alpha[0] = 1
    guard = 0
    while True:
        guard += 1
        if guard > 10_000:
            raise InvariantViolation("plane root construction did not terminate")
        cur = rs.roots[current]
        if cur.value is None:
            rs.stop_reason = "value-unknown"
            break
        betas = [rs.roots[i].value for i in fixed]
        a = _alpha_prime(cur.value, betas)
        exps = standard_exponents(a * cur.value, betas, [rs.alpha[i] for i in fixed])
        m = M.mono((fixed[r], k) for r, k in enumerate(exps))
        z = cur.lead ** a / rs.mono_lead(m)
        tail = rs.mono_poly(m) * z
        if a == 1:
            expr = cur.expression + ((-z, m),)
            rs.alpha[current] = 1
            current = b.new_root(cur.poly - tail, expr, cur.in_monomial, None, predecessor=current)
            continue
        rs.alpha[current] = a
        fixed.append(current)
        if len(fixed) >= max_roots:
            rs.stop_reason = "max-roots"
            break
        base = M.single(current, a)
        current = b.new_root(rs.mono_poly(base) - tail, ((RatFn.const(1), base), (-z, m)), base, None)
    for r in rs.roots:
        r.essential = r.successor is None
    rs.Psi = tuple(r.index for r in rs.roots if r.essential)
    b.finish_names(superscript_level=False)
    return rs


def fixed_roots_2d(rs: RootSystem) -> List[int]:
    """Essential plane roots, in order, excluding one whose value is unknown."""
    return [r.index for r in rs.roots if r.essential and r.value is not None]
