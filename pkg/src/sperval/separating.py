"""Separating ideal of two curvettes: the level where their root
constructions first disagree, monomial generators, a sign-change witness,
and the sets C and C' built from standard expansions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence, Tuple

from . import monomials as M
from .errors import (AmbiguousSign, ArityMismatch, FInSeparatingIdeal, InvariantViolation, NotFoundWithinBudget,
                     ValueUnknown)
from .exact_arith import ParamAssumption, RatFn, pderiv, pmul, psub, sign_under, sturm_root_count
from .monomials import Mono
from .poly_series import Poly
from .roots import RootSystem, prepare_coordinates, roots_up_to
from .standard_form import standard_form
from .valuation import Curvette, nu_value, sign_at, t_power_sign

MONOMIAL_SET_MISMATCH = "monomial-set-mismatch"
SIGN_ORDER_MISMATCH = "sign-order-mismatch"


@dataclass
class CurvettePair:
    alpha: Curvette
    beta: Curvette
    same_param: bool = False

    def __post_init__(self):
        if set(self.alpha.variables) != set(self.beta.variables):
            raise ArityMismatch(f"variables {self.alpha.variables} vs {self.beta.variables}")


@dataclass
class LevelComparison:
    index: int
    value_alpha: Fraction
    value_beta: Fraction
    monomials_alpha: Tuple[Mono, ...]
    monomials_beta: Tuple[Mono, ...]
    leads_alpha: Tuple[RatFn, ...]
    leads_beta: Tuple[RatFn, ...]
    verdict: str
    reason: str = ""
    raw_monomials_beta: Tuple[Mono, ...] = ()


@dataclass
class SepResult:
    index: Optional[int]
    value_alpha: Optional[Fraction]
    value_beta: Optional[Fraction]
    kind: Optional[str]
    rs_alpha: RootSystem
    rs_beta: RootSystem
    root_map: Dict[int, int]
    common: List[int]
    comparisons: List[LevelComparison]
    reason: str = ""
    same_param: bool = False
    generators: List[Mono] = field(default_factory=list)
    witness: Optional[Poly] = None
    witness_terms: List[Tuple[RatFn, Mono]] = field(default_factory=list)

    @property
    def divergence(self) -> Optional[LevelComparison]:
        return self.comparisons[-1] if self.kind else None

    def common_names(self) -> List[str]:
        return [self.rs_alpha.roots[i].name for i in self.common]


def _embed_same(f: Poly, c: Curvette) -> Poly:
    return f if f.variables == c.variables else f.embed(c.variables)


def replay_preparation(prepared_alpha: Curvette, beta: Curvette, same_param: bool) -> Curvette:
    """Apply the coordinate changes found for alpha verbatim to beta."""
    series = dict(beta.assignment)
    for name, g in prepared_alpha.preparation:
        if not same_param and any(not c.is_constant() for c in g.terms.values()):
            raise InvariantViolation(
                f"preparation step {name} -> {name} - ({g}) has parameter-dependent coefficients; "
                "it cannot be replayed on a point with an independent parameter")
        cur = Curvette(series, beta.param, beta.t_sign, beta.variables)
        series[name] = series[name] - cur.series(_embed_same(g, beta))
    return Curvette(series, beta.param, beta.t_sign, beta.variables, prepared_alpha.preparation)


def _hull(a: ParamAssumption, b: ParamAssumption) -> ParamAssumption:
    def lo(p):
        return p.value if p.is_exact else p.lower

    def hi(p):
        return p.value if p.is_exact else p.upper

    los = [lo(a), lo(b)]
    his = [hi(a), hi(b)]
    low = None if None in los else min(los)
    high = None if None in his else max(his)
    if low is not None and high is not None and low == high:
        return ParamAssumption.exact(low)
    return ParamAssumption.interval(low, high)


def strictly_monotone(f: RatFn, a: ParamAssumption) -> bool:
    """True when f is defined and strictly monotone on the assumed set."""
    if f.is_constant():
        return False
    if a.is_exact:
        return True
    if len(f.den) > 1 and sturm_root_count(f.den, a.lower, a.upper):
        return False
    num = psub(pmul(pderiv(f.num), f.den), pmul(f.num, pderiv(f.den)))
    try:
        return sign_under(RatFn(num), a) != 0
    except AmbiguousSign:
        return False


def positively_proportional(a: Sequence[RatFn], b: Sequence[RatFn], pa: ParamAssumption, pb: ParamAssumption,
                            same_param: bool = False, orientation: int = 1) -> Tuple[bool, str]:
    """Decide whether b = rho * a with rho > 0 (times ``orientation``, the sign
    contributed by the powers of t) under the parameter assumptions.

    With independent parameters the two vectors live in different variables:
    proportionality then needs every ratio a_i / a_1 to be a constant equal to
    b_i / b_1.  A ratio that is the same strictly monotone function on both
    sides separates the points because the parameters differ.
    """
    if len(a) != len(b) or not a:
        raise ValueError("lead vectors must have the same positive length")
    a = [RatFn.coerce(x) for x in a]
    b = [RatFn.coerce(x) for x in b]
    if same_param:
        if any(a[i] * b[0] != b[i] * a[0] for i in range(1, len(a))):
            return False, "lead vectors are not proportional"
        rho = sign_under(b[0] / a[0], pa) * orientation
        return rho > 0, f"proportional with ratio sign {'+' if rho > 0 else '-'}"
    ra = [x / a[0] for x in a]
    rb = [x / b[0] for x in b]
    for i in range(1, len(a)):
        if ra[i].is_constant() and rb[i].is_constant():
            if ra[i] != rb[i]:
                return False, f"lead ratios {ra[i]} and {rb[i]} differ"
            continue
        if ra[i] == rb[i] and strictly_monotone(ra[i], _hull(pa, pb)):
            return False, f"lead ratio {ra[i]} is strictly monotone for {_hull(pa, pb)}, so distinct parameters give distinct ratios"
        raise AmbiguousSign(f"cannot decide proportionality of lead ratios {ra[i]} and {rb[i]} for independent parameters")
    rho = sign_under(a[0], pa) * sign_under(b[0], pb) * orientation
    return rho > 0, f"proportional with ratio sign {'+' if rho > 0 else '-'}"


def _map_mono(m: Mono, mapping: Dict[int, int]) -> Optional[Mono]:
    out = []
    for i, k in m:
        if i not in mapping:
            return None
        out.append((mapping[i], k))
    return M.mono(out)


def _walk(pair: CurvettePair, bound: Fraction) -> SepResult:
    a = prepare_coordinates(pair.alpha, bound)
    b = replay_preparation(a, pair.beta, pair.same_param)
    rsa = roots_up_to(a, bound, prepare=False)
    rsb = roots_up_to(b, bound, prepare=False)
    b2a = {j: rsa.index_of_name(rsb.roots[j].name) for j in rsb.variables}
    identified = True
    comparisons: List[LevelComparison] = []
    kind = None
    reason = ""
    for la, lb in zip(rsa.levels, rsb.levels):
        ma = tuple(m for m, _ in la.candidates)
        mapped = [_map_mono(m, b2a) for m, _ in lb.candidates]
        leads_a = tuple(l for _, l in la.candidates)
        verdict = "match"
        why = ""
        if None in mapped or set(mapped) != set(ma):
            verdict = MONOMIAL_SET_MISMATCH
            why = "monomial sets differ"
            leads_b = tuple(l for _, l in lb.candidates)
        else:
            lead_of = {mm: l for mm, (_, l) in zip(mapped, lb.candidates)}
            leads_b = tuple(lead_of[m] for m in ma)
            orient = t_power_sign(la.value, a.t_sign) * t_power_sign(lb.value, b.t_sign)
            ok, why = positively_proportional(leads_a, leads_b, a.param, b.param, pair.same_param, orient)
            if not ok:
                verdict = SIGN_ORDER_MISMATCH
        raw_b = tuple(m for m, _ in lb.candidates)
        comparisons.append(LevelComparison(la.index, la.value, lb.value, ma,
                                           tuple(mapped) if None not in mapped else (), leads_a, leads_b,
                                           verdict, why, raw_b))
        if verdict != "match":
            kind, reason = verdict, why
            break
        if identified:
            for rb in lb.relations:
                dep = _map_mono(rb.dependent, b2a)
                ra = next((r for r in la.relations if r.dependent == dep), None)
                if ra is None:
                    identified = False
                    break
                b2a[rb.new_root] = ra.new_root
    if kind is None:
        index = va = vb = None
    else:
        last = comparisons[-1]
        index, va, vb = last.index, last.value_alpha, last.value_beta
    cutoff = index if index is not None else len(rsa.levels) + 1
    created_before = {r for s in rsa.levels if s.index < cutoff for rel in s.relations for r in [rel.new_root]}
    common = [i for i in rsa.variables] + sorted(i for i in created_before if i in b2a.values())
    # drop roots superseded inside the common prefix
    cset = set(common)
    common = [i for i in common if rsa.roots[i].successor not in cset]
    return SepResult(index, va, vb, kind, rsa, rsb, {v: k for k, v in b2a.items()}, common, comparisons,
                     reason, pair.same_param)


def separating_value(pair: CurvettePair, bound=None) -> SepResult:
    """Walk both root constructions level by level until they disagree."""
    top = Fraction(min(pair.alpha.trunc, pair.beta.trunc)) - 1
    if bound is not None:
        return _walk(pair, min(Fraction(bound), top))
    start = max((s.order().value for c in (pair.alpha, pair.beta) for s in c.assignment.values()
                 if s.order().is_finite), default=Fraction(1))
    level = min(2 * start + 4, top)
    while True:
        res = _walk(pair, level)
        if res.kind is not None or level >= top:
            return res
        level = min(level * 2, top)


def common_roots(pair: CurvettePair, bound=None) -> List[str]:
    return separating_value(pair, bound).common_names()


def separating_generators(s: SepResult) -> List[Mono]:
    """Divisibility-minimal monomials in the common roots of alpha-value at
    least the separating value."""
    if s.value_alpha is None:
        return []
    rs = s.rs_alpha
    gamma = s.value_alpha
    pool = [i for i in s.common if rs.roots[i].value is not None]
    vals = [rs.roots[i].value for i in pool]
    # a common root vanishing on alpha to truncation lies in every nu_alpha-ideal
    gens = set(M.single(i) for i in s.common if rs.roots[i].value is None)
    for base in M.enumerate_below(gamma, pool, vals):
        vb = rs.mono_value(base)
        for i, v in zip(pool, vals):
            if vb + v < gamma:
                continue
            m = M.mul(base, M.single(i))
            if all(rs.mono_value(M.divide(m, M.single(j))) < gamma for j in M.support(m)):
                gens.add(m)
    def key(m):
        v = rs.mono_value(m)
        return (v is None, v or 0, M.exponent_vector(m, list(s.common)))

    out = sorted(gens, key=key)
    s.generators = out
    return out


def _original_poly(rs: RootSystem, m: Mono, coef=1) -> Poly:
    """Monomial in roots as a polynomial in the original coordinates."""
    c = rs.curvette
    p = rs.mono_poly(m) * RatFn.coerce(coef)
    if not c.preparation:
        return p
    return p.compose(c.coordinate_polys(), c.variables)


def _simple_rationals(lo: Optional[Fraction], hi: Optional[Fraction]) -> Fraction:
    """Shortest terminating decimal in the open interval (lo, hi)."""
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return Fraction(int(hi) - 1 if hi == int(hi) else int(hi) - (hi < 0))
    if hi is None:
        return Fraction(int(lo) + 1 if lo >= 0 or lo == int(lo) else int(lo))
    scale = 1
    while True:
        k = (lo * scale).__floor__() + 1
        if Fraction(k, scale) < hi:
            return Fraction(k, scale)
        scale *= 10


def _check_witness(pair: CurvettePair, s: SepResult, f: Poly, exact_values: bool) -> bool:
    try:
        sa = sign_at(pair.alpha, _embed_same(f, pair.alpha))
        sb = sign_at(pair.beta, _embed_same(f, pair.beta))
    except (AmbiguousSign, ValueUnknown):
        return False
    if sa != 1 or sb != -1:
        return False
    if exact_values:
        return (nu_value(pair.alpha, _embed_same(f, pair.alpha)).value == s.value_alpha
                and nu_value(pair.beta, _embed_same(f, pair.beta)).value == s.value_beta)
    return True


GRID = sorted({Fraction(p, q) for q in (1, 2, 3, 4, 5, 10) for p in range(-30, 31) if p},
              key=lambda r: (r.denominator, abs(r.numerator), r < 0))


def witness_sign_change(pair: CurvettePair, s: SepResult, budget: int = 20000) -> Poly:
    """A polynomial positive at alpha and negative at beta, built from the
    monomials of the divergence level."""
    d = s.divergence
    if d is None:
        raise NotFoundWithinBudget("the two points were not separated below the bound")
    rs = s.rs_alpha
    monos = list(d.monomials_alpha)
    tried = 0
    if d.verdict == SIGN_ORDER_MISMATCH:
        ea = t_power_sign(d.value_alpha, pair.alpha.t_sign)
        eb = t_power_sign(d.value_beta, pair.beta.t_sign)
        a, b = list(d.leads_alpha), list(d.leads_beta)
        constant = all(x.is_constant() for x in a + b)
        if constant:
            for i, j in [(i, j) for i in range(len(monos)) for j in range(len(monos)) if i != j]:
                for lam in (-1, 1):
                    lo, hi = None, None
                    feasible = True
                    # ea*(lam*a_i + k*a_j) > 0 and eb*(lam*b_i + k*b_j) < 0
                    for base, slope, want in ((ea * lam * a[i].constant_value(), ea * a[j].constant_value(), 1),
                                              (eb * lam * b[i].constant_value(), eb * b[j].constant_value(), -1)):
                        base, slope = base * want, slope * want
                        if slope == 0:
                            feasible = feasible and base > 0
                        elif slope > 0:
                            t = -base / slope
                            lo = t if lo is None else max(lo, t)
                        else:
                            t = -base / slope
                            hi = t if hi is None else min(hi, t)
                    if not feasible or (lo is not None and hi is not None and lo >= hi):
                        continue
                    k = _simple_rationals(lo, hi)
                    f = _original_poly(rs, monos[i], lam) + _original_poly(rs, monos[j], k)
                    if _check_witness(pair, s, f, True):
                        s.witness = f
                        s.witness_terms = [(RatFn.const(lam), monos[i]), (RatFn.const(k), monos[j])]
                        return f
            for i, m in enumerate(monos):
                for lam in (1, -1):
                    f = _original_poly(rs, m, lam)
                    if _check_witness(pair, s, f, True):
                        s.witness = f
                        s.witness_terms = [(RatFn.const(lam), m)]
                        return f
        else:
            for i, j in [(i, j) for i in range(len(monos)) for j in range(len(monos)) if i != j]:
                for lam in (-1, 1):
                    for k in GRID:
                        tried += 1
                        if tried > budget:
                            break
                        ok = True
                        try:
                            ok = (sign_under(lam * a[i] + k * a[j], pair.alpha.param) * ea > 0
                                  and sign_under(lam * b[i] + k * b[j], pair.beta.param) * eb < 0)
                        except AmbiguousSign:
                            ok = False
                        if ok:
                            f = _original_poly(rs, monos[i], lam) + _original_poly(rs, monos[j], k)
                            if _check_witness(pair, s, f, True):
                                s.witness = f
                                s.witness_terms = [(RatFn.const(lam), monos[i]), (RatFn.const(k), monos[j])]
                                return f
            for m in monos:
                for lam in (1, -1):
                    f = _original_poly(rs, m, lam)
                    if _check_witness(pair, s, f, True):
                        s.witness = f
                        s.witness_terms = [(RatFn.const(lam), m)]
                        return f
        raise NotFoundWithinBudget("no rational sign-change combination valid for the whole parameter range")
    # monomial sets differ: combine monomials from both sides
    polys = [_original_poly(rs, m) for m in d.monomials_alpha]
    for m in d.raw_monomials_beta:
        p = _original_poly(s.rs_beta, m)
        if p not in polys:
            polys.append(p)
    coeffs = [Fraction(1), Fraction(-1), Fraction(2), Fraction(-2), Fraction(1, 2), Fraction(-1, 2), Fraction(3),
              Fraction(-3)]
    for p in polys:
        for c in (1, -1):
            f = p * c
            if _check_witness(pair, s, f, False):
                s.witness = f
                return f
    for p, q in combinations(polys, 2):
        for c1, c2 in product(coeffs, coeffs):
            tried += 1
            if tried > budget:
                break
            f = p * c1 + q * c2
            if _check_witness(pair, s, f, False):
                s.witness = f
                return f
    raise NotFoundWithinBudget("no small combination of divergence monomials changes sign")


def lead_matrix_nonsingular(pair: CurvettePair, s: SepResult) -> Tuple[bool, str]:
    """For a two-monomial sign-order divergence, check that the 2x2 matrix of
    leads (alpha row, beta row) is non-singular."""
    d = s.divergence
    if d is None or d.verdict != SIGN_ORDER_MISMATCH or len(d.leads_alpha) != 2:
        raise ValueError("needs a sign-order divergence with two monomials")
    a, b = d.leads_alpha, d.leads_beta
    if all(x.is_constant() for x in a + b):
        det = a[0].constant_value() * b[1].constant_value() - a[1].constant_value() * b[0].constant_value()
        return det != 0, f"determinant {det}"
    if pair.same_param:
        det = a[0] * b[1] - a[1] * b[0]
        try:
            sg = sign_under(det, pair.alpha.param)
        except AmbiguousSign:
            return False, f"determinant {det} changes sign"
        return sg != 0, f"determinant {det}"
    ra, rb = a[1] / a[0], b[1] / b[0]
    hull = _hull(pair.alpha.param, pair.beta.param)
    if ra == rb and strictly_monotone(ra, hull):
        return True, f"row ratio {ra} is strictly monotone for {hull}; distinct parameters give independent rows"
    return False, f"row ratios {ra} and {rb} do not certify independence"


# --- the sets C and C' --------------------------------------------------------

@dataclass
class HeadTail:
    f: Poly
    value: Fraction
    heads: List[Tuple[RatFn, Mono]]
    tails: List[Tuple[RatFn, Mono]]
    head_roots: List[int]
    root_signs: Dict[int, int]
    head_sign: int


@dataclass
class ConnectedSetDesc:
    variant: str
    level: Fraction
    rs: RootSystem
    alpha: Curvette
    same_param: bool
    entries: List[HeadTail]

    def root_poly(self, i: int) -> Poly:
        return _original_poly(self.rs, M.single(i))

    def describe(self) -> List[str]:
        rs = self.rs
        lines = []
        for n, e in enumerate(self.entries, 1):
            lines.append(f"f{n} = {e.f}: value {e.value}")
            lines.append(f"  heads: {rs.expression_str(e.heads)}")
            lines.append(f"  tails: {rs.expression_str(e.tails) if e.tails else '(none)'}")
            signs = ", ".join(f"sgn({rs.roots[i].name}) = {'+' if e.root_signs[i] > 0 else '-'}" for i in e.head_roots)
            lines.append(f"  root signs: {signs}")
            lines.append(f"  head sum sign: {'+' if e.head_sign > 0 else '-'}")
        return lines


def connected_set(pair: CurvettePair, fs: Sequence[Poly], variant: str = "C",
                  s: Optional[SepResult] = None) -> ConnectedSetDesc:
    if variant not in ("C", "Cprime"):
        raise ValueError("variant must be C or Cprime")
    if s is None:
        s = separating_value(pair)
    if s.value_alpha is None:
        raise NotFoundWithinBudget("the points are not separated below the bound")
    level = s.value_alpha
    rs = roots_up_to(pair.alpha, level)
    a = rs.curvette
    entries = []
    for f in fs:
        f = _embed_same(f, pair.alpha)
        v = nu_value(pair.alpha, f)
        if not v.is_finite or v.value >= level:
            raise FInSeparatingIdeal(f"{f} has value {v} >= {level}, so it lies in the separating ideal")
        sf = standard_form(f, level, rs)
        heads = [(c, m) for c, m in sf.terms if rs.mono_value(m) == v.value]
        tails = [(c, m) for c, m in sf.terms if rs.mono_value(m) != v.value]
        head_roots = sorted({i for _, m in heads for i in M.support(m)})
        signs = {i: sign_at(a, rs.roots[i].poly) for i in head_roots}
        head_sum = sum((rs.mono_poly(m) * c for c, m in heads), Poly.zero(a.variables))
        entries.append(HeadTail(f, v.value, heads, tails, head_roots, signs, sign_at(a, head_sum)))
    return ConnectedSetDesc(variant, level, rs, pair.alpha, pair.same_param, entries)


def _coef_for(c: RatFn, d: ConnectedSetDesc) -> RatFn:
    if not c.is_constant() and not d.same_param:
        raise InvariantViolation(f"coefficient {c} depends on the parameter of alpha; "
                                 "evaluating it at another point needs a shared parameter")
    return c


def membership(d: ConnectedSetDesc, delta: Curvette) -> bool:
    """Evaluate the defining conditions of C (or C') at the point delta."""
    if set(delta.variables) != set(d.alpha.variables):
        raise ArityMismatch(f"variables {delta.variables} vs {d.alpha.variables}")
    rs = d.rs
    cache: Dict[Mono, Poly] = {}

    def poly(m):
        if m not in cache:
            cache[m] = _embed_same(_original_poly(rs, m), delta)
        return cache[m]

    for e in d.entries:
        head_sum = sum((poly(m) * _coef_for(c, d) for c, m in e.heads), Poly.zero(delta.variables))
        for i in e.head_roots:
            if sign_at(delta, poly(M.single(i))) != e.root_signs[i]:
                return False
        hs = sign_at(delta, head_sum)
        if hs != e.head_sign:
            return False
        if d.variant == "C":
            hv = [nu_value(delta, poly(m)).require() for _, m in e.heads]
            for _, m in e.tails:
                tv = nu_value(delta, poly(m))
                if not tv.is_finite:
                    if max(hv) >= tv.trunc:
                        raise ValueUnknown(f"cannot compare values at {delta}")
                    continue
                if max(hv) >= tv.value:
                    return False
        else:
            n = len(e.tails)
            for _, m in e.tails:
                tail = poly(m)
                ts = sign_at(delta, tail)
                if ts == 0:
                    continue
                diff = head_sum * hs - tail * (n * ts)
                if sign_at(delta, diff) <= 0:
                    return False
    return True
