"""End-to-end reproduction of the space curve example with golden checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

from . import monomials as M
from .exact_arith import RatFn
from .parse import parse_poly, parse_ratfn
from .roots import RootSystem, roots_up_to
from .separating import (SIGN_ORDER_MISMATCH, connected_set, lead_matrix_nonsingular, membership,
                         separating_value, witness_sign_change)
from .session import SessionConfig, bundled_session
from .standard_form import standard_form, value_via_standard_form
from .valuation import Semigroup, nu_value, sign_at


@dataclass
class Check:
    label: str
    expected: str
    actual: str

    @property
    def ok(self) -> bool:
        return self.expected == self.actual

    def to_dict(self) -> dict:
        return {"label": self.label, "expected": self.expected, "actual": self.actual, "ok": self.ok}


@dataclass
class Report:
    sections: List[tuple] = field(default_factory=list)
    checks: List[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def mismatches(self) -> List[Check]:
        return [c for c in self.checks if not c.ok]

    def section(self, title: str, lines: List[str]):
        self.sections.append((title, list(lines)))

    def check(self, label: str, expected, actual):
        self.checks.append(Check(label, str(expected), str(actual)))

    def text(self) -> str:
        out = []
        for title, lines in self.sections:
            out.append(f"== {title}")
            out.extend(lines)
            out.append("")
        out.append("== checks")
        for c in self.checks:
            mark = "ok  " if c.ok else "FAIL"
            tail = "" if c.ok else f" (expected {c.expected})"
            out.append(f"{mark} {c.label}: {c.actual}{tail}")
        out.append(f"{sum(c.ok for c in self.checks)}/{len(self.checks)} checks passed")
        return "\n".join(out)

    def to_dict(self) -> dict:
        return {"sections": [{"title": t, "lines": ls} for t, ls in self.sections],
                "checks": [c.to_dict() for c in self.checks], "ok": self.ok}


def root_table(rs: RootSystem) -> List[str]:
    lines = []
    for r in rs.roots:
        v = "?" if r.value is None else str(r.value)
        lead = "" if r.lead is None else f"  lead {r.lead}"
        flag = "" if r.essential else "  (inessential)"
        lines.append(f"{r.name} = {rs.expression_str(r.expression)}  value {v}{lead}{flag}")
    return lines


def _terms_set(rs: RootSystem, terms) -> str:
    return " + ".join(sorted(rs.expression_str([t]) for t in terms))


def run_walkthrough(cfg: Optional[SessionConfig] = None, trunc: Optional[int] = None) -> Report:
    """Recompute the worked example and compare every golden value.

    Errors such as TruncationExceeded propagate to the caller.
    """
    cfg = cfg or bundled_session()
    level = cfg.level if cfg.level is not None else Fraction(37)
    rep = Report()
    V = cfg.variables
    x, y, z = (parse_poly(v, V) for v in V)
    u = RatFn.param()

    alpha = cfg.curvette("alpha", trunc)
    rs = roots_up_to(alpha, level)
    rep.section(f"roots of alpha up to level {level} ({alpha.param})", root_table(rs))

    golden = {"Q4": (21, y ** 2 - x * z, 2 * u - 1), "Q5": (25, y * z - x ** 4, u + 1),
              "Q6": (29, z ** 2 - x ** 3 * y, 2 - u)}
    for name, (val, poly, lead) in golden.items():
        r = rs.root(name)
        rep.check(f"value of {name}", val, r.value)
        rep.check(f"{name} as a polynomial", poly, r.poly)
        rep.check(f"lead of {name}", lead, r.lead)
    for name, val in (("Q7^(31)", 32), ("Q7^(32)", 33)):
        rep.check(f"value of {name}", val, rs.root(name).value)

    q4, q5, q6 = (rs.root(n).poly for n in ("Q4", "Q5", "Q6"))
    rep.check("x*Q6 - y*Q5 + z*Q4", 0, x * q6 - y * q5 + z * q4)

    values = [r.value for r in rs.roots if r.value is not None and r.value <= level]
    phi = Semigroup(values)
    rep.check("position of 21 in the value semigroup", 8, phi.index_of(21))
    rep.check("position of 25 in the value semigroup", 11, phi.index_of(25))
    rep.section("value semigroup", ["first 12 positive elements: "
                                    + ", ".join(str(v) for v in phi.enumerate(12))])

    f = cfg.polys["f"]
    sf = standard_form(f, 31, rs, record=True)
    lines = [f"level 31 steps for f = {f}:"] + ["  " + sf.step_str(s) for s in sf.steps]
    lines += [f"  after step {k}: {sf.state_str(k)}" for k in range(len(sf.states))]
    lines.append(f"values: {', '.join(str(v) for v in sf.values())}")
    rep.section("standard form of f", lines)
    mid = [(RatFn.const(1), M.single(0, 3)), (RatFn.const(1), M.mono([(1, 1), (3, 1)])),
           (RatFn.const(1), M.mono([(0, 1), (1, 1), (2, 1)])), (RatFn.const(1), M.single(2, 3))]
    rep.check("f after the first rewriting step", _terms_set(rs, mid), _terms_set(rs, sf.states[1]))
    final = [(RatFn.const(1), m) for m in (M.single(0, 3), M.single(0, 5), M.mono([(1, 1), (3, 1)]),
                                           M.mono([(0, 1), (4, 1)]), M.single(2, 3))]
    rep.check("standard form of level 31", _terms_set(rs, final), _terms_set(rs, sf.terms))
    rep.check("values of the level 31 standard form", "18, 30, 31, 31, 42",
              ", ".join(str(v) for v in sf.values()))
    rep.check("value of f via its standard form", nu_value(alpha, f).value, value_via_standard_form(f, rs))

    for pname in ("symbolic", "exact"):
        pair = cfg.pair(pname, trunc)
        s = separating_value(pair)
        d = s.divergence
        lines = [f"alpha: {pair.alpha.param}, beta: {pair.beta.param}",
                 f"common roots: {', '.join(s.common_names())}",
                 f"separating value {s.value_alpha} at level index {s.index}, {s.kind}"]
        if d is not None:
            ms = ", ".join(s.rs_alpha.mono_str(m) for m in d.monomials_alpha)
            lines.append(f"diverging monomials {ms}; leads alpha {', '.join(map(str, d.leads_alpha))}; "
                         f"leads beta {', '.join(map(str, d.leads_beta))}")
            lines.append(d.reason)
        rep.check(f"separating value ({pname})", 31, s.value_alpha)
        rep.check(f"divergence kind ({pname})", SIGN_ORDER_MISMATCH, s.kind)
        ok, why = lead_matrix_nonsingular(pair, s)
        lines.append(f"lead matrix: {why}")
        rep.check(f"lead matrix non-singular ({pname})", True, ok)
        if pname == "exact":
            w = witness_sign_change(pair, s)
            sa, sb = sign_at(pair.alpha, w), sign_at(pair.beta, w)
            lines.append(f"witness {w}: sign {sa:+d} at alpha, {sb:+d} at beta")
            rep.check("witness changes sign", True, sa * sb < 0)

            def q7_coef(rs_):
                r = rs_.root("Q7^(31)")
                return dict((m, c) for c, m in r.expression)[M.mono([(0, 1), (4, 1)])]

            ca, cb = q7_coef(s.rs_alpha), q7_coef(s.rs_beta)
            lines.append(f"Q7 coefficient of x*Q5: {ca} at alpha, {cb} at beta")
            rep.check("Q7 differs between the points", True, ca != cb)
            rep.check("Q7 coefficient at alpha", -parse_ratfn("(2*u-1)/(u+1)").evaluate(3), ca)
            rep.check("Q7 coefficient at beta", -parse_ratfn("(2*u-1)/(u+1)").evaluate(4), cb)
            for variant in ("C", "Cprime"):
                desc = connected_set(pair, [f], variant, s)
                lines += [f"set {variant}:"] + ["  " + t for t in desc.describe()]
                rep.check(f"alpha lies in {variant}", True, membership(desc, pair.alpha))
                rep.check(f"beta lies in {variant}", True, membership(desc, pair.beta))
                rep.check(f"f has no zero at beta ({variant})", True, sign_at(pair.beta, f) != 0)
        else:
            coef = dict((m, c) for c, m in rs.root("Q7^(31)").expression)[M.mono([(0, 1), (4, 1)])]
            rep.check("Q7 coefficient of x*Q5 (symbolic)", -parse_ratfn("(2*u-1)/(u+1)"), coef)
        rep.section(f"separating ideal ({pname} pair)", lines)
    return rep
