"""Standard forms over a root system, nu-ideal generators and the kernel
check of the graded map from polynomial variables to initial forms."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from . import monomials as M
from .errors import LevelInsufficient, NonTerminating
from .exact_arith import RatFn, as_rat
from .monomials import Mono
from .poly_series import Poly
from .roots import RootSystem

Term = Tuple[RatFn, Mono]
STEP_BUDGET = 10 ** 6


@dataclass(frozen=True)
class RewriteStep:
    rule: int
    monomial: Mono
    root: int
    replacement: Tuple[Term, ...]


@dataclass
class StandardForm:
    settled: List[Term]
    tail: List[Term]
    level: Fraction
    rs: RootSystem = field(repr=False)
    steps: List[RewriteStep] = field(default_factory=list, repr=False)
    states: List[List[Term]] = field(default_factory=list, repr=False)

    @property
    def terms(self) -> List[Term]:
        return self.settled + self.tail

    def values(self) -> List[Optional[Fraction]]:
        return [self.rs.mono_value(m) for _, m in self.terms]

    def expand(self) -> Poly:
        out = Poly.zero(self.rs.curvette.variables)
        for c, m in self.terms:
            out = out + self.rs.mono_poly(m) * c
        return out

    def slice(self, value) -> List[Term]:
        value = as_rat(value)
        return [(c, m) for c, m in self.terms if self.rs.mono_value(m) == value]

    def state_str(self, k: int) -> str:
        """The expression after ``k`` rewriting steps (needs ``record=True``)."""
        return self.rs.expression_str(self.states[k]) if self.states[k] else "0"

    def step_str(self, s: RewriteStep) -> str:
        rhs = self.rs.expression_str(s.replacement)
        return f"rule {s.rule}: {self.rs.mono_str(s.monomial)} -> {rhs}"

    def __str__(self):
        return self.rs.expression_str(self.terms) if self.terms else "0"


def _value_key(rs: RootSystem, m: Mono):
    v = rs.mono_value(m)
    return math.inf if v is None else v


def monomial_key(rs: RootSystem, m: Mono, order: Optional[Sequence[int]] = None):
    """Sort key: value first, then the exponent vector over the root ordering."""
    order = rs.order if order is None else order
    return (_value_key(rs, m), M.exponent_vector(m, order))


def _essential_pool(rs: RootSystem) -> List[int]:
    seen = []
    for i in list(rs.Psi) + list(rs.Theta):
        if i not in seen:
            seen.append(i)
    return seen


def is_standard(m: Mono, rs: RootSystem) -> bool:
    vset = set(rs.V)
    if any(i not in vset for i in M.support(m)):
        return False
    for q in _essential_pool(rs):
        r = rs.roots[q]
        if not r.is_variable and M.divides(r.in_monomial, m):
            return False
    return True


def _rule1_root(m: Mono, rs: RootSystem) -> Optional[int]:
    for q in _essential_pool(rs):
        r = rs.roots[q]
        if not r.is_variable and M.divides(r.in_monomial, m):
            return q
    return None


def _rule2_root(m: Mono, rs: RootSystem) -> Optional[int]:
    vset = set(rs.V)
    for q in M.support(m):
        r = rs.roots[q]
        if q not in vset and r.successor is not None:
            return q
    return None


def standard_form(f: Poly, level, rs: RootSystem, order_from_original: bool = True,
                  record: bool = False) -> StandardForm:
    """Rewrite ``f`` so that every monomial of value below ``level`` is standard.

    ``f`` is given in the original coordinates of the curvette and is moved to
    the prepared coordinates first. With ``record`` the expression after
    every step is kept in ``states`` (index 0 is the input).
    """
    level = as_rat(level)
    if level > rs.level:
        raise LevelInsufficient(f"standard form of level {level} needs roots through {level}, have {rs.level}",
                                level=str(level), available=str(rs.level))
    c = rs.curvette
    if order_from_original:
        f = c.to_prepared(f.embed(c.variables) if f.variables != c.variables else f)
    var_root = {rs.roots[i].name: i for i in rs.variables}
    terms: Dict[Mono, RatFn] = {}
    for e, coef in f.terms.items():
        m = M.mono((var_root[v], k) for v, k in zip(f.variables, e))
        terms[m] = coef
    steps: List[RewriteStep] = []
    states: List[List[Term]] = []

    def snapshot():
        if record:
            states.append(sorted(((cf, m) for m, cf in terms.items()), key=lambda t: monomial_key(rs, t[1])))

    def add(m: Mono, coef: RatFn):
        s = terms.get(m)
        s = coef if s is None else s + coef
        if s:
            terms[m] = s
        else:
            terms.pop(m, None)

    snapshot()
    for _ in range(STEP_BUDGET):
        pending = [m for m in terms if _value_key(rs, m) < level and not is_standard(m, rs)]
        if not pending:
            break
        m = min(pending, key=lambda x: monomial_key(rs, x))
        coef = terms.pop(m)
        q = _rule1_root(m, rs)
        if q is not None:
            r = rs.roots[q]
            rest = M.divide(m, r.in_monomial)
            repl = [(RatFn.const(1), M.mul(M.single(q), rest))]
            repl += [(-d, M.mul(mm, rest)) for d, mm in r.expression[1:]]
            rule = 1
        else:
            q = _rule2_root(m, rs)
            if q is None:
                raise NonTerminating(f"no rewriting rule applies to {rs.mono_str(m)}")
            r = rs.roots[q]
            succ = rs.roots[r.successor]
            rest = M.divide(m, M.single(q))
            extra = succ.expression[len(r.expression):]
            repl = [(RatFn.const(1), M.mul(M.single(succ.index), rest))]
            repl += [(-d, M.mul(mm, rest)) for d, mm in extra]
            rule = 2
        steps.append(RewriteStep(rule, m, q, tuple(repl)))
        for d, mm in repl:
            add(mm, coef * d)
        snapshot()
    else:
        raise NonTerminating(f"standard form exceeded {STEP_BUDGET} rewriting steps")

    ordered = sorted(((cf, m) for m, cf in terms.items()), key=lambda t: monomial_key(rs, t[1]))
    settled = [t for t in ordered if _value_key(rs, t[1]) < level]
    tail = [t for t in ordered if _value_key(rs, t[1]) >= level]
    return StandardForm(settled, tail, level, rs, steps, states)


def value_via_standard_form(f: Poly, rs: RootSystem) -> Fraction:
    """nu(f) read off as the least value in a standard form of top level."""
    sf = standard_form(f, rs.level, rs)
    if not sf.settled:
        raise LevelInsufficient(f"the value of {f} is at least {rs.level}", level=str(rs.level))
    return min(rs.mono_value(m) for _, m in sf.settled)


def nu_ideal_generators(gamma, rs: RootSystem, pruned: bool = True) -> List[Mono]:
    """Monomial generators of the ideal of elements of value >= gamma."""
    gamma = as_rat(gamma)
    if gamma > rs.level:
        raise LevelInsufficient(f"generators of value {gamma} need roots through {gamma}")
    pool = list(rs.Psi) if rs.Psi else []
    top = rs.levels[-1].value if rs.levels else Fraction(0)
    if gamma >= top or not rs.levels:
        pool += [i for i in rs.Theta if i not in pool]
    known = [i for i in pool if rs.roots[i].value is not None]
    unknown = [i for i in pool if rs.roots[i].value is None]
    vals = [rs.roots[i].value for i in known]
    below = M.enumerate_below(gamma, known, vals)
    gens = set(M.single(i) for i in unknown)
    for b in below:
        vb = rs.mono_value(b)
        for i, v in zip(known, vals):
            if vb + v < gamma:
                continue
            m = M.mul(b, M.single(i))
            if all(rs.mono_value(M.divide(m, M.single(j))) < gamma for j in M.support(m)):
                gens.add(m)
    out = sorted(gens, key=lambda m: monomial_key(rs, m, pool))
    if not pruned:
        return out
    kept = []
    for m in out:
        redundant = False
        for q in M.support(m):
            r = rs.roots[q]
            if r.is_variable:
                continue
            rest = rs.mono_value(M.divide(m, M.single(q)))
            if rs.mono_value(r.in_monomial) + rest >= gamma:
                redundant = True
                break
        if not redundant:
            kept.append(m)
    return kept


@dataclass(frozen=True)
class KernelDegreeReport:
    degree: Fraction
    monomials: int
    kernel_dim: int
    ideal_dim: int
    ideal_in_kernel: bool

    @property
    def ok(self) -> bool:
        return self.ideal_in_kernel and self.kernel_dim == self.ideal_dim


def relations_kernel_check(rs: RootSystem, level=None) -> List[KernelDegreeReport]:
    """Compare, degree by degree below ``level``, the kernel of X_j -> in(Q_j)
    with the ideal spanned by least-value parts of the root expressions."""
    level = rs.levels[-1].value if level is None else as_rat(level)
    snap = rs.snapshot(level)
    if snap is None:
        raise LevelInsufficient(f"{level} is not a computed level")
    V = list(snap.V)
    vset = set(V)
    vals = [rs.roots[i].value for i in V]
    gens: List[List[Term]] = []
    for q in V + [i for i in snap.Theta if i not in vset]:
        r = rs.roots[q]
        if r.is_variable or any(not set(M.support(m)) <= vset for _, m in r.expression):
            continue
        low = min(rs.mono_value(m) for _, m in r.expression)
        gens.append([(c, m) for c, m in r.expression if rs.mono_value(m) == low])
    reports = []
    for s in rs.levels:
        b = s.value
        if b >= level:
            break
        monos = sorted(M.enumerate_of_value(b, V, vals), key=lambda m: M.exponent_vector(m, V))
        if not monos:
            continue
        pos = {m: k for k, m in enumerate(monos)}
        leads = [rs.mono_lead(m) for m in monos]
        kernel_dim = len(monos) - linalg.rank([leads])
        vectors = []
        for g in gens:
            gdeg = rs.mono_value(g[0][1])
            if gdeg > b:
                continue
            for delta in M.enumerate_of_value(b - gdeg, V, vals) if b > gdeg else [M.ONE]:
                v = [RatFn() for _ in monos]
                for c, m in g:
                    v[pos[M.mul(m, delta)]] += c
                vectors.append(v)
        in_kernel = all(not sum((c * l for c, l in zip(v, leads)), RatFn()) for v in vectors)
        reports.append(KernelDegreeReport(b, len(monos), kernel_dim, linalg.rank(vectors) if vectors else 0,
                                          in_kernel))
    return reports
