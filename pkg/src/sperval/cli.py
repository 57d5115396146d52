"""Command-line interface.

Every subcommand except ``dual-graph`` reads a session file (``-`` for
stdin; ``walkthrough`` uses the bundled space curve session by default).
Exit codes: 0 success, 1 mismatch or mathematical error, 2 usage or input
error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from . import blowup as B
from . import dual_graph as DG
from .errors import SpervalError, SyntaxErrorAt, UnknownVariable
from .roots import RootSystem, roots_2d, roots_up_to
from .separating import (connected_set, lead_matrix_nonsingular, separating_generators, separating_value,
                         witness_sign_change)
from .session import SessionConfig, bundled_session, parse_session
from .standard_form import standard_form
from .valuation import Semigroup, initial_form, nu_value, sign_at
from .walkthrough import root_table, run_walkthrough

USAGE_ERRORS = (SyntaxErrorAt, UnknownVariable)

Output = Tuple[List[str], dict]


class Mismatch(Exception):
    def __init__(self, output: Output):
        super().__init__("mismatch")
        self.output = output


def _load(args) -> SessionConfig:
    if args.session == "-":
        return parse_session(sys.stdin.read())
    with open(args.session, encoding="utf-8") as fh:
        return parse_session(fh.read())


def _trunc(args) -> Optional[int]:
    return getattr(args, "trunc", None)


def _level(args, cfg: SessionConfig) -> Fraction:
    if args.level is not None:
        return Fraction(args.level)
    if cfg.level is not None:
        return cfg.level
    raise UnknownVariable("give --level or a 'level' line in the session")


def _curvette(args, cfg: SessionConfig):
    return cfg.curvette(args.curvette or cfg.default_curvette(), _trunc(args))


def _root_rows(rs: RootSystem) -> List[dict]:
    return [{"name": r.name, "expression": rs.expression_str(r.expression), "poly": str(r.poly),
             "value": None if r.value is None else str(r.value),
             "lead": None if r.lead is None else str(r.lead), "essential": r.essential}
            for r in rs.roots]


def cmd_value(args) -> Output:
    cfg = _load(args)
    c = _curvette(args, cfg)
    f = cfg.poly(args.poly)
    v = nu_value(c, f)
    if not v.is_finite:
        lines = [f"nu({f}) >= {v.trunc} (zero to truncation)"]
        return lines, {"poly": str(f), "value": None, "at_least": str(v.trunc)}
    form = initial_form(c, f)
    s = sign_at(c, f)
    lines = [f"nu({f}) = {v.value}", f"initial form: {form}", f"sign: {'+' if s > 0 else '-'}"]
    return lines, {"poly": str(f), "value": str(v.value), "initial_form": str(form), "sign": s}


def cmd_semigroup(args) -> Output:
    if args.generators:
        gens = [Fraction(g) for g in args.generators.split(",")]
        source = "given generators"
    else:
        cfg = _load(args)
        rs = roots_up_to(_curvette(args, cfg), _level(args, cfg))
        gens = [r.value for r in rs.roots if r.value is not None and r.value <= rs.level]
        source = f"root values up to {rs.level}"
    g = Semigroup(gens)
    elems = g.enumerate(args.count)
    lines = [f"generators ({source}): {', '.join(str(x) for x in g.generators)}",
             f"first {args.count} positive elements: {', '.join(str(x) for x in elems)}"]
    data = {"generators": [str(x) for x in g.generators], "elements": [str(x) for x in elems]}
    if args.index:
        pos = {str(v): g.index_of(Fraction(v)) for v in args.index.split(",")}
        lines += [f"position of {v}: {k}" for v, k in pos.items()]
        data["positions"] = pos
    return lines, data


def _level_lines(rs: RootSystem) -> List[str]:
    lines = []
    for s in rs.levels:
        names = lambda ids: ", ".join(rs.roots[i].name for i in ids)  # noqa: E731
        lines.append(f"level {s.value}: Lambda [{names(s.Lambda)}] Psi [{names(s.Psi)}] "
                     f"V [{names(s.V)}] Theta [{names(s.Theta)}]")
        for m, lead in s.candidates:
            lines.append(f"  candidate {rs.mono_str(m)} lead {lead}")
        for rel in s.relations:
            lines.append(f"  relation {rs.mono_str(rel.dependent)} ~ {rs.expression_str(rel.combination)}"
                         f" gives {rs.roots[rel.new_root].name}")
    return lines


def cmd_roots(args) -> Output:
    cfg = _load(args)
    rs = roots_up_to(_curvette(args, cfg), _level(args, cfg))
    lines = root_table(rs)
    data = {"level": str(rs.level), "roots": _root_rows(rs)}
    if args.show_steps:
        steps = _level_lines(rs)
        lines += [""] + steps
        data["steps"] = steps
    return lines, data


def cmd_roots2d(args) -> Output:
    cfg = _load(args)
    rs = roots_2d(_curvette(args, cfg), args.max_roots)
    lines = root_table(rs)
    alpha = {rs.roots[i].name: a for i, a in sorted(rs.alpha.items())}
    lines.append("alpha: " + ", ".join(f"{k} {v}" for k, v in alpha.items()))
    lines.append(f"stopped: {rs.stop_reason}")
    return lines, {"roots": _root_rows(rs), "alpha": alpha, "stop_reason": rs.stop_reason}


def cmd_standard_form(args) -> Output:
    cfg = _load(args)
    c = _curvette(args, cfg)
    level = _level(args, cfg)
    rs = roots_up_to(c, max(level, cfg.level or level))
    f = cfg.poly(args.poly)
    sf = standard_form(f, level, rs)
    vals = [str(v) for v in sf.values()]
    lines = [f"level {level}: {sf}", f"values: {', '.join(vals)}"]
    data = {"level": str(level), "form": str(sf), "values": vals}
    if args.show_steps:
        steps = [sf.step_str(s) for s in sf.steps]
        lines += steps
        data["steps"] = steps
    return lines, data


def cmd_sep_ideal(args) -> Output:
    cfg = _load(args)
    pair = cfg.pair(args.pair, _trunc(args))
    s = separating_value(pair)
    lines = [f"alpha: {pair.alpha.param}, beta: {pair.beta.param}",
             f"common roots: {', '.join(s.common_names())}"]
    data: Dict[str, object] = {"common": s.common_names(), "value_alpha": None, "value_beta": None,
                               "kind": s.kind, "index": s.index}
    if s.kind is None:
        lines.append(f"not separated below the truncation bound: {s.reason}")
        return lines, data
    d = s.divergence
    data.update(value_alpha=str(s.value_alpha), value_beta=str(s.value_beta), reason=d.reason,
                monomials_alpha=[s.rs_alpha.mono_str(m) for m in d.monomials_alpha],
                monomials_beta=[s.rs_beta.mono_str(m) for m in d.monomials_beta],
                leads_alpha=[str(x) for x in d.leads_alpha], leads_beta=[str(x) for x in d.leads_beta])
    lines += [f"separating value: {s.value_alpha} at alpha, {s.value_beta} at beta (level index {s.index})",
              f"divergence: {s.kind}",
              f"monomials at alpha: {', '.join(data['monomials_alpha'])}; leads {', '.join(data['leads_alpha'])}",
              f"monomials at beta: {', '.join(data['monomials_beta'])}; leads {', '.join(data['leads_beta'])}",
              d.reason]
    if args.show_steps:
        comps = []
        for cmp_ in s.comparisons:
            ms = ", ".join(s.rs_alpha.mono_str(m) for m in cmp_.monomials_alpha)
            comps.append(f"level {cmp_.value_alpha}: {ms or '-'}: {cmp_.verdict}")
        lines += comps
        data["comparisons"] = comps
    if d.verdict == "sign-order-mismatch" and len(d.leads_alpha) == 2:
        ok, why = lead_matrix_nonsingular(pair, s)
        lines.append(f"lead matrix non-singular: {ok} ({why})")
        data["lead_matrix"] = {"nonsingular": ok, "reason": why}
    if args.generators:
        gens = [s.rs_alpha.mono_str(m) for m in separating_generators(s)]
        lines.append(f"generators: {', '.join(gens)}")
        data["generators"] = gens
    if args.witness:
        w = witness_sign_change(pair, s)
        sa, sb = sign_at(pair.alpha, w), sign_at(pair.beta, w)
        lines.append(f"witness: {w} (sign {sa:+d} at alpha, {sb:+d} at beta)")
        data["witness"] = {"poly": str(w), "sign_alpha": sa, "sign_beta": sb}
    return lines, data


def cmd_connected_set(args) -> Output:
    cfg = _load(args)
    pair = cfg.pair(args.pair, _trunc(args))
    fs = [cfg.poly(p) for p in args.poly]
    d = connected_set(pair, fs, args.variant)
    lines = [f"set {d.variant} at level {d.level}"] + d.describe()
    return lines, {"variant": d.variant, "level": str(d.level), "description": d.describe()}


def _resolution_output(res: B.Resolution) -> Output:
    lines, rows = [], []
    for k, st in enumerate(res.steps, 1):
        gens = ", ".join(str(g) for g in st.generators)
        pred = "" if st.predicted is None else f", predicted {st.predicted}"
        ok = "" if st.predicted is None else f", {'ok' if st.prediction_ok else 'MISMATCH'}"
        move = "start" if st.step is None else str(st.step)
        lines.append(f"chart {k} ({move}): separating value {st.value}{pred}{ok}; generators {gens}")
        rows.append({"chart": k, "step": None if st.step is None else str(st.step),
                     "value": str(st.value), "predicted": None if st.predicted is None else str(st.predicted),
                     "prediction_ok": st.prediction_ok, "generators": [str(g) for g in st.generators]})
    lines.append(f"terminal: {res.terminal} ({res.stop_reason})")
    return lines, {"steps": rows, "terminal": res.terminal, "stop_reason": res.stop_reason}


def cmd_blowup(args) -> Output:
    cfg = _load(args)
    if args.pair is not None or (args.curvette is None and cfg.pairs and not args.chart_table):
        res = B.resolve_pair(cfg.pair(args.pair, _trunc(args)), args.max_steps)
        lines, data = _resolution_output(res)
        if any(not st.prediction_ok for st in res.steps):
            raise Mismatch((lines, data))
        return lines, data
    c = _curvette(args, cfg)
    charts, curvettes = B.blowup_sequence(c, args.steps)
    lines = []
    rows = []
    for k, (ch, cv) in enumerate(zip(charts, curvettes), 1):
        move = str(ch.history[-1]) if ch.history else "start"
        lines.append(f"chart {k} ({move}): x = {ch.orig_x}, y = {ch.orig_y}; point {cv.summary()}")
        rows.append({"chart": k, "step": move, "x": str(ch.orig_x), "y": str(ch.orig_y), "point": cv.summary()})
    data: Dict[str, object] = {"charts": rows}
    if args.chart_table:
        rs = roots_2d(c)
        table = B.chart_data(rs, charts)
        lines.append("")
        for r in table:
            checks = ", ".join(f"{n} {'ok' if ok else 'FAIL'}" for n, ok in r.unit_checks) or "-"
            lines.append(f"{r.root}: chart {r.chart}, exponents {list(r.exponents)}, strict {r.strict}; {checks}")
        data["chart_table"] = [{"root": r.root, "chart": r.chart, "exponents": list(r.exponents),
                                "strict": str(r.strict), "checks": dict(r.unit_checks)} for r in table]
    return lines, data


def cmd_dual_graph(args) -> Output:
    with open(args.script, encoding="utf-8") as fh:
        script = DG.parse_event_script(fh.read())
    lines, rows = [], []
    for k, (ev, g) in enumerate(DG.run_script(script)):
        head = f"step {k}: {'init ' + script.walls if ev is None else ev}"
        ok = DG.is_bamboo(g)
        lines.append(f"{head} ({len(g.vertices)} vertices, {len(g.edges)} edges, bamboo {ok})")
        lines += ["  " + a for a in g.adjacency()]
        row = {"step": k, "event": None if ev is None else str(ev), "bamboo": ok, "graph": g.to_dict()}
        if args.dot:
            row["dot"] = g.to_dot(f"G{g.generation}")
            lines += row["dot"].splitlines()
        rows.append(row)
    return lines, {"steps": rows}


def cmd_walkthrough(args) -> Output:
    if args.session:
        cfg = _load(args)
    else:
        cfg = bundled_session()
    rep = run_walkthrough(cfg, _trunc(args))
    lines, data = rep.text().splitlines(), rep.to_dict()
    if args.session and cfg.commands:
        outs = []
        for argv in cfg.commands:
            full = argv if argv[0] == "dual-graph" else argv[:1] + [args.session] + argv[1:]
            sub = _parse(build_parser(), full)
            sub_lines, sub_data = sub.func(sub)
            lines += ["", "$ " + " ".join(argv)] + sub_lines
            outs.append({"command": argv, "result": sub_data})
        data["commands"] = outs
    if not rep.ok:
        raise Mismatch((lines, data))
    return lines, data


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--trunc", type=int, default=argparse.SUPPRESS, metavar="N",
                   help="series truncation order (overrides the session; default 64)")
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    p.add_argument("--show-steps", action="store_true", default=argparse.SUPPRESS,
                   help="include intermediate steps")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="sperval", parents=[common],
                                     description="Valuations, approximate roots and separating ideals of curvettes.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func: Callable, help_: str, session: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_)
        if session:
            p.add_argument("session", help="session file, or - for stdin")
        p.set_defaults(func=func)
        return p

    p = add("value", cmd_value, "value, initial form and sign of a polynomial")
    p.add_argument("--curvette")
    p.add_argument("--poly", required=True, help="a poly name from the session or an expression")

    p = add("semigroup", cmd_semigroup, "value semigroup elements", session=False)
    p.add_argument("session", nargs="?")
    p.add_argument("--curvette")
    p.add_argument("--level")
    p.add_argument("--generators", help="comma separated generators instead of a session")
    p.add_argument("--count", type=int, default=12)
    p.add_argument("--index", help="comma separated elements whose positions to print")

    p = add("roots", cmd_roots, "approximate roots up to a level")
    p.add_argument("--curvette")
    p.add_argument("--level")

    p = add("roots2d", cmd_roots2d, "plane approximate roots")
    p.add_argument("--curvette")
    p.add_argument("--max-roots", type=int, default=8)

    p = add("standard-form", cmd_standard_form, "standard form of a polynomial")
    p.add_argument("--curvette")
    p.add_argument("--level")
    p.add_argument("--poly", required=True)

    p = add("sep-ideal", cmd_sep_ideal, "separating value of a pair of points")
    p.add_argument("--pair")
    p.add_argument("--generators", action="store_true", help="list monomial generators")
    p.add_argument("--witness", action="store_true", help="search a polynomial changing sign")

    p = add("connected-set", cmd_connected_set, "describe the sets C and C'")
    p.add_argument("--pair")
    p.add_argument("--poly", action="append", required=True)
    p.add_argument("--variant", choices=("C", "Cprime"), default="C")

    p = add("blowup", cmd_blowup, "blowup sequences, pair resolution and the chart table")
    p.add_argument("--pair")
    p.add_argument("--curvette")
    p.add_argument("--steps", type=int, default=8, help="blowups to perform for a single curvette")
    p.add_argument("--max-steps", type=int, default=20)
    p.add_argument("--chart-table", action="store_true",
                   help="charts where each plane root becomes a coordinate")

    p = add("dual-graph", cmd_dual_graph, "run a signed dual graph event script", session=False)
    p.add_argument("--script", required=True)
    p.add_argument("--dot", action="store_true", help="also print each graph in DOT format")

    p = add("walkthrough", cmd_walkthrough, "reproduce the space curve example with golden checks",
            session=False)
    p.add_argument("--session", help="session file to use instead of the bundled one")
    return parser


def _emit(out: Output, as_json: bool, status: str = "ok"):
    lines, data = out
    if as_json:
        print(json.dumps({"status": status, **data}, indent=2))
    else:
        print("\n".join(lines))


def _parse(parser: argparse.ArgumentParser, argv: Optional[List[str]]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    for name in ("json", "show_steps"):
        setattr(args, name, getattr(args, name, False))
    return args


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = _parse(parser, argv)
    if args.command == "semigroup" and not args.generators and not args.session:
        parser.error("semigroup needs a session or --generators")
    try:
        _emit(args.func(args), args.json)
        return 0
    except Mismatch as m:
        _emit(m.output, args.json, "mismatch")
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except SpervalError as e:
        if args.json:
            print(json.dumps({"status": "error", "error": e.to_dict()}, indent=2))
        else:
            print(f"error [{e.code}]: {e}", file=sys.stderr)
        return 2 if isinstance(e, USAGE_ERRORS) else 1


if __name__ == "__main__":
    sys.exit(main())
