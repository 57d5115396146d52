"""Signed dual graphs of exceptional intervals as a combinatorial rewriting
system, together with the bamboo check and an event script format."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from .errors import InvalidEvent, SyntaxErrorAt

Edge = FrozenSet[int]

CASE1 = "case1"
CASE2_1 = "case2_1"
CASE2_2 = "case2_2"
POSITIONS = ("two-edges", "one-edge", "isolated")
FIRST_STEP_U = "first-step-U"
LATER = "later-or-V"


@dataclass(frozen=True)
class Vertex:
    interval: str
    sign: int

    def __str__(self):
        return f"({self.interval}, {'+' if self.sign > 0 else '-'})"


@dataclass(frozen=True)
class SignedDualGraph:
    """Vertices keyed by a stable integer id; edges are unordered pairs.

    ``edge_order`` keeps edges in insertion order so that conventions which
    depend on "the first listed edge" are reproducible.
    """

    vertices: Tuple[Tuple[int, Vertex], ...]
    edge_order: Tuple[Tuple[int, int], ...]
    generation: int
    walls: str = "U"
    next_id: int = 0

    @property
    def vertex_map(self) -> Dict[int, Vertex]:
        return dict(self.vertices)

    @property
    def edges(self) -> List[Edge]:
        return [frozenset(e) for e in self.edge_order]

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edge_order if v in e)

    def neighbors(self, v: int) -> List[int]:
        return [b if a == v else a for a, b in self.edge_order if v in (a, b)]

    def has_edge(self, a: int, b: int) -> bool:
        return frozenset((a, b)) in set(self.edges)

    def adjacency(self) -> List[str]:
        lines = []
        for vid, v in self.vertices:
            nb = " ".join(str(n) for n in sorted(self.neighbors(vid)))
            lines.append(f"{vid} {v}: {nb}".rstrip())
        return lines

    def to_dot(self, name: str = "G") -> str:
        out = [f"graph {name} {{"]
        for vid, v in self.vertices:
            out.append(f'  {vid} [label="{v.interval} {"+" if v.sign > 0 else "-"}"];')
        for a, b in self.edge_order:
            out.append(f"  {a} -- {b};")
        out.append("}")
        return "\n".join(out)

    def to_dict(self) -> dict:
        return {
            "generation": self.generation,
            "vertices": [{"id": vid, "interval": v.interval, "sign": v.sign} for vid, v in self.vertices],
            "edges": [list(e) for e in self.edge_order],
        }


@dataclass(frozen=True)
class BlowupEvent:
    case: str
    edge: Optional[Tuple[int, int]] = None
    vertex: Optional[int] = None
    position: Optional[str] = None
    omega: int = 1
    kind: Optional[str] = None

    def __str__(self):
        if self.case == CASE1:
            return f"case1 {self.edge[0]} {self.edge[1]}"
        if self.case == CASE2_1:
            return f"case2.1 {self.vertex} {self.position} {self.omega}"
        if self.kind == FIRST_STEP_U:
            return "case2.2 first-step-U"
        return f"case2.2 later {self.vertex}"


def case1(a: int, b: int) -> BlowupEvent:
    return BlowupEvent(CASE1, edge=(a, b))


def case2_1(a: int, position: str, omega: int) -> BlowupEvent:
    return BlowupEvent(CASE2_1, vertex=a, position=position, omega=omega)


def case2_2_first() -> BlowupEvent:
    return BlowupEvent(CASE2_2, kind=FIRST_STEP_U)


def case2_2_later(a: int) -> BlowupEvent:
    return BlowupEvent(CASE2_2, vertex=a, kind=LATER)


def init_graph(walls: str = "U") -> SignedDualGraph:
    if walls not in ("U", "V"):
        raise ValueError(f"W must be U or V, got {walls!r}")
    return SignedDualGraph(((0, Vertex("E1", 1)),), (), 1, walls, 1)


class _Edit:
    def __init__(self, g: SignedDualGraph):
        self.vertices: Dict[int, Vertex] = dict(g.vertices)
        self.order: List[int] = [vid for vid, _ in g.vertices]
        self.edges: List[Tuple[int, int]] = list(g.edge_order)
        self.next_id = g.next_id
        self.g = g

    def add(self, v: Vertex) -> int:
        vid = self.next_id
        self.next_id += 1
        self.vertices[vid] = v
        self.order.append(vid)
        return vid

    def remove_edge(self, a: int, b: int) -> int:
        for k, e in enumerate(self.edges):
            if set(e) == {a, b}:
                del self.edges[k]
                return k
        raise InvalidEvent(f"no edge ({a}, {b})")

    def build(self) -> SignedDualGraph:
        verts = tuple((vid, self.vertices[vid]) for vid in self.order)
        return SignedDualGraph(verts, tuple(self.edges), self.g.generation + 1, self.g.walls, self.next_id)


def _require_vertex(g: SignedDualGraph, a) -> Vertex:
    v = g.vertex_map.get(a)
    if v is None:
        raise InvalidEvent(f"vertex {a} does not exist")
    return v


def apply_event(g: SignedDualGraph, e: BlowupEvent) -> SignedDualGraph:
    """Return the graph after one blowup event; ``g`` is left untouched."""
    gen = g.generation + 1
    ed = _Edit(g)
    if e.case == CASE1:
        a, b = e.edge
        va, vb = _require_vertex(g, a), _require_vertex(g, b)
        if not g.has_edge(a, b):
            raise InvalidEvent(f"no edge ({a}, {b}) to split")
        sigma = va.sign * vb.sign
        k = ed.remove_edge(a, b)
        c = ed.add(Vertex(f"J{gen}", vb.sign))
        ed.vertices[a] = Vertex(va.interval, sigma)
        ed.vertices[b] = Vertex(vb.interval, sigma)
        ed.edges[k:k] = [(a, c), (c, b)]
        return ed.build()

    if e.case == CASE2_1:
        a = e.vertex
        va = _require_vertex(g, a)
        if e.position not in POSITIONS:
            raise InvalidEvent(f"unknown position {e.position!r}")
        if not isinstance(e.omega, int) or e.omega < 1:
            raise InvalidEvent(f"omega must be a positive integer, got {e.omega!r}")
        need = {"two-edges": 2, "one-edge": 1, "isolated": 0}[e.position]
        if g.degree(a) != need:
            raise InvalidEvent(f"{e.position} needs degree {need} at vertex {a}, found {g.degree(a)}")
        s = va.sign
        nbrs = g.neighbors(a)
        for b in nbrs:
            ed.remove_edge(a, b)
        # the old id is kept for the first interval of the chain
        chain = [a]
        ed.vertices[a] = Vertex(f"{va.interval}.0", s)
        for t in range(1, e.omega + 1):
            chain.append(ed.add(Vertex(f"R{gen}.{t}", s)))
            chain.append(ed.add(Vertex(f"{va.interval}.{t}", s if t % 2 == 0 else -s)))
        ed.edges += list(zip(chain, chain[1:]))
        if need >= 1:
            ed.edges.append((nbrs[0], chain[0]))
        if need == 2:
            ed.edges.append((chain[-1], nbrs[1]))
        return ed.build()

    if e.case == CASE2_2:
        if e.kind == FIRST_STEP_U:
            if g.generation != 1 or g.walls != "U" or len(g.vertices) != 1:
                raise InvalidEvent("first-step-U applies only to the initial graph with W = U")
            a = g.vertices[0][0]
            ed.vertices[a] = Vertex("F+", 1)
            mid = ed.add(Vertex("E2", 1))
            low = ed.add(Vertex("F-", -1))
            ed.order = [a, mid, low]
            ed.edges = [(a, mid), (mid, low)]
            return ed.build()
        if e.kind == LATER:
            if g.generation == 1 and g.walls == "U":
                raise InvalidEvent("the first event for W = U at a non-distinguished point is first-step-U")
            a = e.vertex
            _require_vertex(g, a)
            if g.degree(a) > 1:
                raise InvalidEvent(f"vertex {a} is not an endpoint")
            b = ed.add(Vertex(f"E{gen}", 1))
            ed.edges.append((a, b))
            return ed.build()
        raise InvalidEvent(f"unknown case 2.2 kind {e.kind!r}")
    raise InvalidEvent(f"unknown event case {e.case!r}")


def is_bamboo(g: SignedDualGraph) -> bool:
    """Connected, acyclic and every vertex on at most two edges."""
    ids = [vid for vid, _ in g.vertices]
    if not ids:
        return False
    edges = g.edge_order
    if len(set(frozenset(e) for e in edges)) != len(edges) or any(a == b for a, b in edges):
        return False
    if any(g.degree(v) > 2 for v in ids):
        return False
    if len(edges) != len(ids) - 1:
        return False
    seen = {ids[0]}
    stack = [ids[0]]
    while stack:
        v = stack.pop()
        for n in g.neighbors(v):
            if n not in seen:
                seen.add(n)
                stack.append(n)
    return len(seen) == len(ids)


def graph_from_edges(n: int, edges: Iterable[Tuple[int, int]]) -> SignedDualGraph:
    """Plain graph on vertices 0..n-1 with + signs, for testing is_bamboo."""
    verts = tuple((i, Vertex(f"v{i}", 1)) for i in range(n))
    return SignedDualGraph(verts, tuple(edges), 1, "U", n)


def valid_events(g: SignedDualGraph, max_omega: int = 3) -> List[BlowupEvent]:
    """Every event whose preconditions hold on ``g`` (omega up to max_omega)."""
    out: List[BlowupEvent] = []
    for a, b in g.edge_order:
        out.append(case1(a, b))
    for vid, _ in g.vertices:
        d = g.degree(vid)
        pos = {2: "two-edges", 1: "one-edge", 0: "isolated"}.get(d)
        if pos is not None:
            out.extend(case2_1(vid, pos, w) for w in range(1, max_omega + 1))
        if d <= 1 and not (g.generation == 1 and g.walls == "U"):
            out.append(case2_2_later(vid))
    if g.generation == 1 and g.walls == "U":
        out.append(case2_2_first())
    return out


@dataclass
class GraphScript:
    walls: str
    events: List[Tuple[int, BlowupEvent]] = field(default_factory=list)


def parse_event_script(text: str) -> GraphScript:
    """Parse a line-oriented event list.

    Lines::

        init U|V
        case1 A B
        case2.1 A two-edges|one-edge|isolated OMEGA
        case2.2 first-step-U
        case2.2 later A

    ``#`` starts a comment. ``init`` is optional and defaults to U.
    """
    script = GraphScript("U")
    seen_event = False

    def err(lineno, col, msg):
        return SyntaxErrorAt(msg, line=lineno, col=col)

    def as_int(tok, lineno, line):
        try:
            return int(tok)
        except ValueError:
            raise err(lineno, line.index(tok) + 1, f"expected an integer, got {tok!r}") from None

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        toks = line.split()
        if not toks:
            continue
        head = toks[0]
        col = line.index(head) + 1
        if head == "init":
            if seen_event or len(toks) != 2 or toks[1] not in ("U", "V"):
                raise err(lineno, col, "init must come first and name U or V")
            script.walls = toks[1]
        elif head == "case1":
            if len(toks) != 3:
                raise err(lineno, col, "case1 takes two vertex ids")
            ev = case1(as_int(toks[1], lineno, line), as_int(toks[2], lineno, line))
            script.events.append((lineno, ev))
        elif head == "case2.1":
            if len(toks) != 4 or toks[2] not in POSITIONS:
                raise err(lineno, col, "case2.1 takes a vertex id, a position and omega")
            ev = case2_1(as_int(toks[1], lineno, line), toks[2], as_int(toks[3], lineno, line))
            script.events.append((lineno, ev))
        elif head == "case2.2":
            if toks[1:] == [FIRST_STEP_U]:
                script.events.append((lineno, case2_2_first()))
            elif len(toks) == 3 and toks[1] == "later":
                script.events.append((lineno, case2_2_later(as_int(toks[2], lineno, line))))
            else:
                raise err(lineno, col, "case2.2 takes 'first-step-U' or 'later A'")
        else:
            raise err(lineno, col, f"unknown event {head!r}")
        seen_event = seen_event or head != "init"
    return script


def run_script(script: GraphScript) -> List[Tuple[Optional[BlowupEvent], SignedDualGraph]]:
    g = init_graph(script.walls)
    out: List[Tuple[Optional[BlowupEvent], SignedDualGraph]] = [(None, g)]
    for lineno, ev in script.events:
        try:
            g = apply_event(g, ev)
        except InvalidEvent as exc:
            raise InvalidEvent(f"line {lineno}: {exc}") from None
        out.append((ev, g))
    return out
