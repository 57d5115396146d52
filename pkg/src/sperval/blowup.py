"""Point blowups of two-variable charts following a curvette, strict, weak
and total transforms, resolution of a separating ideal, and the chart table
locating where each plane root becomes a coordinate."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import List, Optional, Sequence, Tuple

from . import monomials as M
from .errors import (ArityMismatch, CenterEqualsPoint, InvariantViolation, NotReachedWithinSteps, StepBudgetExceeded,
                     TruncationExceeded)
from .exact_arith import RatFn
from .poly_series import Poly, TruncSeries
from .roots import RootSystem
from .separating import CurvettePair, SepResult, _original_poly, separating_generators, separating_value
from .valuation import Curvette, nu_value

Y_OVER_X = "y/x"
X_OVER_Y = "x/y"


@dataclass(frozen=True)
class BlowupStep:
    branch: str
    center: RatFn

    def __str__(self):
        if self.branch == Y_OVER_X:
            c = "" if not self.center else f" + {self.center}" if len(self.center.num) <= 1 else f" + ({self.center})"
            return f"y -> x*(y{c})"
        return "x -> y*x"


@dataclass(frozen=True)
class Chart:
    """Affine chart reached by a sequence of blowups; ``orig_x`` and
    ``orig_y`` express the original coordinates in the chart coordinates."""

    variables: Tuple[str, str]
    history: Tuple[BlowupStep, ...]
    orig_x: Poly
    orig_y: Poly

    @classmethod
    def initial(cls, variables: Sequence[str] = ("x", "y")) -> "Chart":
        variables = tuple(variables)
        if len(variables) != 2:
            raise ArityMismatch("charts have exactly two coordinates")
        return cls(variables, (), Poly.var(variables, variables[0]), Poly.var(variables, variables[1]))

    def images(self, step: BlowupStep):
        x = Poly.var(self.variables, self.variables[0])
        y = Poly.var(self.variables, self.variables[1])
        if step.branch == Y_OVER_X:
            return {self.variables[0]: x, self.variables[1]: x * (y + step.center)}
        return {self.variables[0]: y * (x + step.center), self.variables[1]: y}

    def then(self, step: BlowupStep) -> "Chart":
        im = self.images(step)
        return Chart(self.variables, self.history + (step,),
                     self.orig_x.compose(im, self.variables), self.orig_y.compose(im, self.variables))

    @property
    def steps(self) -> int:
        return len(self.history)


@dataclass(frozen=True)
class TransformResult:
    strict: Poly
    exceptional_multiplicity: int
    weak_exponent: int


def _exceptional_index(step: BlowupStep) -> int:
    return 0 if step.branch == Y_OVER_X else 1


def _power_of(f: Poly, i: int) -> int:
    return min(e[i] for e in f.terms)


def _divide_power(f: Poly, i: int, k: int) -> Poly:
    exps = [0, 0]
    exps[i] = k
    return f.divide_monomial(tuple(exps))


def blowup_poly(f: Poly, step: BlowupStep, chart: Optional[Chart] = None) -> TransformResult:
    """One blowup of a polynomial given in the coordinates before ``step``."""
    if f.is_zero():
        raise ValueError("the zero polynomial has no strict transform")
    chart = chart or Chart.initial(f.variables)
    g = f.compose(chart.images(step), chart.variables)
    i = _exceptional_index(step)
    k = _power_of(g, i)
    return TransformResult(_divide_power(g, i, k), k, f.order())


def strict_transform_poly(ch: Chart, f: Poly) -> TransformResult:
    """Strict transform through every step of the chart's history."""
    cur = f.rename(ch.variables) if f.variables != ch.variables else f
    res = TransformResult(cur, 0, 0)
    for step in ch.history:
        res = blowup_poly(res.strict, step, Chart.initial(ch.variables))
    return res


def weak_transform_poly(f: Poly, step: BlowupStep, a: int) -> Poly:
    """x^{-a} f after the substitution (the exceptional coordinate for x)."""
    g = f.compose(Chart.initial(f.variables).images(step), f.variables)
    return _divide_power(g, _exceptional_index(step), a)


@dataclass(frozen=True)
class TotalTransform:
    x_exp: int
    y_exp: int
    rest: Poly

    @property
    def is_monomial_times_unit(self) -> bool:
        return bool(self.rest.constant_term())


def total_transform(ch: Chart, f: Poly) -> TotalTransform:
    """f(orig_x, orig_y) written as x^a y^b g with g divisible by neither."""
    f = f.rename(ch.variables) if f.variables != ch.variables else f
    g = f.compose({ch.variables[0]: ch.orig_x, ch.variables[1]: ch.orig_y}, ch.variables)
    if g.is_zero():
        raise ValueError("polynomial vanishes identically on the chart")
    a, b = _power_of(g, 0), _power_of(g, 1)
    return TotalTransform(a, b, g.divide_monomial((a, b)))


def is_locally_monomial(ch: Chart, gs: Sequence[Poly]) -> bool:
    return all(total_transform(ch, g).is_monomial_times_unit for g in gs)


# --- curvettes ----------------------------------------------------------------

def choose_step(c: Curvette) -> BlowupStep:
    """The blowup branch containing the transformed center of ``c``."""
    if len(c.variables) != 2:
        raise ArityMismatch("blowups act on two-variable curvettes")
    xs, ys = (c.assignment[v] for v in c.variables)
    ox, oy = xs.order(), ys.order()
    if not ox.is_finite and not oy.is_finite:
        raise CenterEqualsPoint("both coordinates vanish to the truncation order")
    if not oy.is_finite or (ox.is_finite and oy.value >= ox.value):
        if oy.is_finite and oy.value == ox.value:
            return BlowupStep(Y_OVER_X, ys.lead() / xs.lead())
        return BlowupStep(Y_OVER_X, RatFn())
    return BlowupStep(X_OVER_Y, RatFn())


def strict_transform_curvette(step: BlowupStep, c: Curvette) -> Curvette:
    xv, yv = c.variables
    xs, ys = c.assignment[xv], c.assignment[yv]
    num, den = (ys, xs) if step.branch == Y_OVER_X else (xs, ys)
    on, od = num.order(), den.order()
    if not od.is_finite or (on.is_finite and on.value < od.value):
        raise CenterEqualsPoint(f"{num} / {den} is not a power series; the point leaves this chart")
    q = num / den
    q = q - TruncSeries.const(step.center, q.trunc)
    o = q.order()
    if o.is_finite and o.value <= 0:
        raise InvariantViolation(f"the transformed point is not at the chart origin ({q})")
    new = {xv: xs, yv: q} if step.branch == Y_OVER_X else {xv: q, yv: ys}
    return Curvette(new, c.param, c.t_sign, c.variables)


def local_blowup(ch: Chart, c: Curvette) -> Tuple[Chart, Curvette, BlowupStep]:
    step = choose_step(c)
    return ch.then(step), strict_transform_curvette(step, c), step


def blowup_sequence(c: Curvette, steps: int) -> Tuple[List[Chart], List[Curvette]]:
    """Charts 1..steps+1 following ``c`` (chart 1 is the original plane)."""
    ch = Chart.initial(c.variables)
    charts, curves = [ch], [c]
    for _ in range(steps):
        ch, c, _ = local_blowup(ch, c)
        charts.append(ch)
        curves.append(c)
    return charts, curves


# --- resolving a separating ideal ----------------------------------------------

@dataclass
class ResolutionStep:
    chart: Chart
    pair: CurvettePair
    sep: SepResult
    generators: List[Poly]
    predicted: Optional[Fraction] = None
    weak_min: Optional[Fraction] = None
    step: Optional[BlowupStep] = None
    weak_exponent: Optional[int] = None

    @property
    def value(self) -> Optional[Fraction]:
        return self.sep.value_alpha

    @property
    def prediction_ok(self) -> bool:
        return self.predicted is None or (self.predicted == self.value and self.weak_min == self.value)


@dataclass
class Resolution:
    steps: List[ResolutionStep] = field(default_factory=list)
    terminal: bool = False
    stop_reason: str = ""


def _min_coordinate_value(c: Curvette) -> Fraction:
    vals = [s.order() for s in c.assignment.values()]
    return min(v.value for v in vals if v.is_finite)


def _generator_polys(s: SepResult) -> List[Poly]:
    return [_original_poly(s.rs_alpha, m) for m in separating_generators(s)]


def _follow_unseparated(pair: CurvettePair, max_steps: int):
    """Blow up along points that agree to truncation until the budget runs out."""
    a, b = pair.alpha, pair.beta
    done = 0
    try:
        for done in range(1, max_steps + 1):
            step = choose_step(a)
            a, b = strict_transform_curvette(step, a), strict_transform_curvette(step, b)
    except (CenterEqualsPoint, InvariantViolation, TruncationExceeded):
        pass
    raise StepBudgetExceeded(f"the points are not separated after {done} blowups", steps=done)


def resolve_pair(pair: CurvettePair, max_steps: int = 20) -> Resolution:
    """Blow up along the common center until the weak transform of the
    separating ideal is the maximal ideal."""
    if len(pair.alpha.variables) != 2:
        raise ArityMismatch("resolve_pair works with two variables")
    ch = Chart.initial(pair.alpha.variables)
    sep = separating_value(pair)
    if sep.value_alpha is None:
        _follow_unseparated(pair, max_steps)
    out = Resolution([ResolutionStep(ch, pair, sep, _generator_polys(sep))])
    while True:
        cur = out.steps[-1]
        a = cur.pair.alpha
        if cur.value == _min_coordinate_value(a):
            out.terminal = True
            out.stop_reason = "separating ideal is the maximal ideal"
            return out
        if len(out.steps) > max_steps:
            out.stop_reason = "max-steps"
            return out
        step = choose_step(a)
        try:
            na = strict_transform_curvette(step, a)
            nb = strict_transform_curvette(step, cur.pair.beta)
        except (CenterEqualsPoint, InvariantViolation) as e:
            out.stop_reason = f"points leave the common center: {e.code}"
            return out
        npair = CurvettePair(na, nb, pair.same_param)
        exc = a.assignment[a.variables[_exceptional_index(step)]].order().value
        aexp = min(g.order() for g in cur.generators)
        weak = [weak_transform_poly(g, step, aexp) for g in cur.generators]
        nsep = separating_value(npair)
        if nsep.value_alpha is None:
            out.stop_reason = "transformed points not separated below the truncation bound"
            return out
        finite = [v.value for v in (nu_value(na, g) for g in weak) if v.is_finite]
        weak_min = min(finite) if finite else None
        out.steps.append(ResolutionStep(ch.then(step), npair, nsep, _generator_polys(nsep),
                                        cur.value - aexp * exc, weak_min, step, aexp))
        ch = out.steps[-1].chart


# --- where plane roots become coordinates ----------------------------------------

@dataclass
class ChartRow:
    root: str
    chart: int
    exponents: Tuple[int, ...]
    strict: Poly
    unit_checks: List[Tuple[str, bool]]

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.unit_checks)


def _exponent_vectors(k: int, bound: int):
    box = range(-bound, bound + 1)
    vecs = [v for v in product(box, repeat=k) if any(v)]
    vecs.sort(key=lambda v: (any(e < 0 for e in v), sum(abs(e) for e in v), [-e for e in v]))
    return vecs


def _monomial_in_system(t: TotalTransform, w: int, s_i: Poly) -> bool:
    """Is x^a y^b * unit a monomial in (w * unit, s_i) times a unit?"""
    if not t.is_monomial_times_unit:
        return False
    if (t.y_exp if w == 0 else t.x_exp) == 0:
        return True
    other = [0, 0]
    other[1 - w] = 1
    try:
        return bool(s_i.divide_monomial(tuple(other)).constant_term())
    except ValueError:
        return False


def chart_data(rs: RootSystem, charts: Sequence[Chart], bound: int = 4) -> List[ChartRow]:
    """For each essential plane root Q_i, the first chart (1-based, after the
    chart of Q_{i-1}) where its strict transform s_i has order one and a
    monomial x' = prod Q_j^{g_j} makes (x', s_i) a regular system; also checks
    that every earlier root is a monomial in (x', s_i) times a unit."""
    roots = [r for r in rs.roots if r.essential]
    orig = [_original_poly(rs, M.single(r.index)) for r in roots]
    rows: List[ChartRow] = []
    start = 1
    for i, r in enumerate(roots):
        if i == 0:
            rows.append(ChartRow(r.name, 1, (), orig[0], []))
            continue
        found = None
        for ell in range(start, len(charts)):
            ch = charts[ell]
            s_i = strict_transform_poly(ch, orig[i]).strict
            if s_i.order() != 1:
                continue
            lin = s_i.lowest_degree_part()
            totals = [total_transform(ch, q) for q in orig[:i]]
            for gam in _exponent_vectors(i, bound):
                if any(g and not totals[j].is_monomial_times_unit for j, g in enumerate(gam)):
                    continue
                xe = sum(g * totals[j].x_exp for j, g in enumerate(gam))
                ye = sum(g * totals[j].y_exp for j, g in enumerate(gam))
                if sorted((xe, ye)) != [0, 1]:
                    continue
                w = 0 if xe == 1 else 1
                other = [0, 0]
                other[1 - w] = 1
                if not lin.coefficient(tuple(other)):
                    continue
                checks = [(roots[j].name, _monomial_in_system(totals[j], w, s_i)) for j in range(i)]
                if all(ok for _, ok in checks):
                    found = ChartRow(r.name, ell + 1, tuple(gam), s_i, checks)
                    break
            if found:
                break
        if found is None:
            raise NotReachedWithinSteps(f"{r.name} does not become a coordinate within {len(charts)} charts",
                                        root=r.name)
        rows.append(found)
        start = found.chart
    return rows
