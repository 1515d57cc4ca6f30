"""Isomorphism-preserving moves on finite directed graphs.

Each move is a pure function from a graph to a graph.  Generated names are
deterministic: a path-vertex created by hereditary expansion is its edge
names joined with dots and its edge is ``ov_<path>``; a head attached at
``v`` uses vertices ``v.h1..v.hn`` and edges ``v.e1..v.en``; subdividing
``e0`` by ``n`` uses vertices ``e0.v1..e0.vn`` and edges ``e0.e1..e0.e(n+1)``;
sources attached at ``v`` use vertices ``v.s1..v.sn`` and edges
``v.f1..v.fn``.  Name collisions with existing vertices or edges are caught
by the graph constructor.

A ``MoveTrace`` is a replayable certificate: each record carries the move
kind, its parameters, and FNV-1a hashes of its input and output graphs.
Traces are not always linear chains — ``desourcify`` applies its hereditary
expansion to the original input graph and documents the intermediate head
form of each source conversion — so replay keeps every graph it has seen,
keyed by hash, applies each record to the graph matching its input hash, and
returns the final record's output.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .algebra import CkFamily, LpaElement, Monomial, element, vertex_element
from .graph import (
    Edge,
    Graph,
    PathSeq,
    classify,
    graph_hash,
    hereditary_closure,
    is_hereditary,
)

__all__ = [
    "MoveRecord",
    "MoveTrace",
    "ExpansionReport",
    "entry_paths",
    "expand_hereditary",
    "expansion_preconditions",
    "attach_head",
    "subdivide_edge",
    "attach_sources",
    "eliminate_source",
    "desourcify",
    "matrix_graph",
    "stabilization_fragment",
    "apply_move",
    "replay",
    "serialize_trace",
    "parse_trace",
    "expansion_family",
    "subdivision_family",
]


# ── hereditary expansion ──────────────────────────────────────────────────────


def _checked_hereditary(g: Graph, hs: Iterable[str]) -> frozenset[str]:
    h = frozenset(hs)
    for v in h:
        g.require_vertex(v)
    if not is_hereditary(g, h):
        raise ValueError("the vertex set is not hereditary")
    return h


def entry_paths(g: Graph, hs: Iterable[str]) -> tuple[PathSeq, ...]:
    """All paths entering the hereditary set through their final edge.

    Every vertex of such a path except its range lies outside the set.  The
    collection is finite exactly when no cycle outside the set reaches it;
    otherwise this raises.  Sorted by path label.
    """
    h = _checked_hereditary(g, hs)
    boundary = [e for e in g.edges if e.src not in h and e.dst in h]
    outside = [e for e in g.edges if e.src not in h and e.dst not in h]
    # a cycle outside h that reaches a boundary source makes the family infinite
    sources_needed = {e.src for e in boundary}
    can_reach: set[str] = set(sources_needed)
    changed = True
    while changed:
        changed = False
        for e in outside:
            if e.dst in can_reach and e.src not in can_reach:
                can_reach.add(e.src)
                changed = True
    relevant = [e for e in outside if e.src in can_reach and e.dst in can_reach]
    if _has_cycle(can_reach, relevant):
        raise ValueError("a cycle outside the hereditary set reaches it: "
                         "infinitely many entry paths")
    prefix_cache: dict[str, list[tuple[Edge, ...]]] = {}

    def prefixes_to(v: str) -> list[tuple[Edge, ...]]:
        if v not in prefix_cache:
            acc: list[tuple[Edge, ...]] = [()]
            for e in relevant:
                if e.dst == v:
                    acc.extend(p + (e,) for p in prefixes_to(e.src))
            prefix_cache[v] = acc
        return prefix_cache[v]

    paths = [
        PathSeq.of(prefix + (b,))
        for b in boundary
        for prefix in prefixes_to(b.src)
    ]
    paths.sort(key=lambda p: p.label())
    return tuple(paths)


def _has_cycle(vertices: set[str], edges: list[Edge]) -> bool:
    indeg = {v: 0 for v in vertices}
    for e in edges:
        indeg[e.dst] += 1
    queue = [v for v, d in indeg.items() if d == 0]
    removed = 0
    while queue:
        u = queue.pop()
        removed += 1
        for e in edges:
            if e.src == u:
                indeg[e.dst] -= 1
                if indeg[e.dst] == 0:
                    queue.append(e.dst)
    return removed < len(vertices)


def expand_hereditary(g: Graph, hs: Iterable[str]) -> Graph:
    """Replace the graph by the hereditary set plus one source vertex per
    entry path, each emitting a single edge onto the path's range.

    The result keeps the set's vertices and the edges emitted inside it, adds
    a vertex named by each entry path, and an edge ``ov_<path>`` from that
    vertex to the path's range.
    """
    h = _checked_hereditary(g, hs)
    if not h and g.vertices:
        raise ValueError("the hereditary set must be nonempty (nothing outside "
                         "an empty set can reach it)")
    paths = entry_paths(g, h)
    vertices = tuple(v for v in g.vertices if v in h) + tuple(p.label() for p in paths)
    edges = tuple(e for e in g.edges if e.src in h) + tuple(
        Edge(f"ov_{p.label()}", p.label(), p.target) for p in paths
    )
    return Graph(vertices, edges)


@dataclass(frozen=True)
class ExpansionReport:
    """Preconditions under which hereditary expansion preserves the algebra."""

    complement_acyclic: bool
    all_reach: bool
    boundary_finite: bool
    ok: bool


def expansion_preconditions(g: Graph, hs: Iterable[str]) -> ExpansionReport:
    """Check the hypotheses: the graph outside the set (with the edges ranging
    outside it) is acyclic and finite, every outside vertex reaches the set,
    and only finitely many edges cross into it (automatic here)."""
    h = frozenset(hs)
    for v in h:
        g.require_vertex(v)
    outside_edges = [e for e in g.edges if e.dst not in h]
    outside_vertices = {v for v in g.vertices if v not in h}
    acyclic = not _has_cycle(outside_vertices, [e for e in outside_edges
                                                if e.src in outside_vertices])
    # vertices that reach h: backward closure of h over all edges
    reach = set(h)
    changed = True
    while changed:
        changed = False
        for e in g.edges:
            if e.dst in reach and e.src not in reach:
                reach.add(e.src)
                changed = True
    all_reach = outside_vertices <= reach
    boundary_finite = True
    return ExpansionReport(acyclic, all_reach, boundary_finite,
                           acyclic and all_reach and boundary_finite)


def expansion_family(g: Graph, hs: Iterable[str]) -> CkFamily:
    """Generator images showing the expanded graph's algebra inside L(g):
    vertices of the set map to themselves, each path-vertex to ``alpha alpha*``,
    kept edges to themselves, and each ``ov_`` edge to its path."""
    h = _checked_hereditary(g, hs)
    paths = entry_paths(g, h)
    one = Fraction(1)
    vertex_images: dict[str, LpaElement] = {}
    edge_images: dict[str, LpaElement] = {}
    for v in g.vertices:
        if v in h:
            vertex_images[v] = vertex_element(g, v)
    for p in paths:
        vertex_images[p.label()] = element([Monomial(one, p, p)])
    for e in g.edges:
        if e.src in h:
            pe = PathSeq.of((e,))
            edge_images[e.name] = element([Monomial(one, pe, PathSeq.at(e.dst))])
    for p in paths:
        edge_images[f"ov_{p.label()}"] = element([Monomial(one, p, PathSeq.at(p.target))])
    return CkFamily(vertex_images, edge_images)


# ── local moves ───────────────────────────────────────────────────────────────


def _check_count(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValueError("the length must be a positive integer")


def attach_head(g: Graph, v0: str, n: int) -> Graph:
    """Attach a chain of ``n`` new vertices feeding into ``v0``."""
    g.require_vertex(v0)
    _check_count(n)
    heads = tuple(f"{v0}.h{i}" for i in range(1, n + 1))
    new_edges = [Edge(f"{v0}.e1", f"{v0}.h1", v0)]
    new_edges += [Edge(f"{v0}.e{i}", f"{v0}.h{i}", f"{v0}.h{i - 1}") for i in range(2, n + 1)]
    return Graph(g.vertices + heads, g.edges + tuple(new_edges))


def subdivide_edge(g: Graph, e0: str, n: int) -> Graph:
    """Replace edge ``e0`` by a chain through ``n`` new vertices."""
    e = g.edge(e0)
    _check_count(n)
    mids = tuple(f"{e0}.v{i}" for i in range(1, n + 1))
    chain = [Edge(f"{e0}.e1", f"{e0}.v1", e.dst)]
    chain += [Edge(f"{e0}.e{i}", f"{e0}.v{i}", f"{e0}.v{i - 1}") for i in range(2, n + 1)]
    chain.append(Edge(f"{e0}.e{n + 1}", e.src, f"{e0}.v{n}"))
    kept = tuple(x for x in g.edges if x.name != e0)
    return Graph(g.vertices + mids, kept + tuple(chain))


def attach_sources(g: Graph, v0: str, n: int) -> Graph:
    """Attach ``n`` new source vertices, each with one edge into ``v0``."""
    g.require_vertex(v0)
    _check_count(n)
    vs = tuple(f"{v0}.s{i}" for i in range(1, n + 1))
    es = tuple(Edge(f"{v0}.f{i}", f"{v0}.s{i}", v0) for i in range(1, n + 1))
    return Graph(g.vertices + vs, g.edges + es)


def eliminate_source(g: Graph, v: str) -> Graph:
    """Remove a source vertex together with the edges it emits."""
    g.require_vertex(v)
    if g.in_edges(v):
        raise ValueError(f"vertex {v!r} is not a source")
    return Graph(
        tuple(w for w in g.vertices if w != v),
        tuple(e for e in g.edges if e.src != v),
    )


def subdivision_family(g: Graph, e0: str, n: int) -> CkFamily:
    """Generator images showing the head-at-range form inside the subdivided
    form: the head graph's generators map into L(subdivide_edge(g, e0, n)),
    with the subdivided edge sent to the whole chain and everything else to
    its renamed counterpart."""
    e = g.edge(e0)
    _check_count(n)
    host = subdivide_edge(g, e0, n)
    v0 = e.dst
    one = Fraction(1)
    vertex_images: dict[str, LpaElement] = {v: vertex_element(host, v) for v in g.vertices}
    for i in range(1, n + 1):
        vertex_images[f"{v0}.h{i}"] = vertex_element(host, f"{e0}.v{i}")
    edge_images: dict[str, LpaElement] = {}
    for x in g.edges:
        if x.name != e0:
            px = PathSeq.of((host.edge(x.name),))
            edge_images[x.name] = element([Monomial(one, px, PathSeq.at(x.dst))])
    chain = PathSeq.of(host.edge(f"{e0}.e{i}") for i in range(n + 1, 0, -1))
    edge_images[e0] = element([Monomial(one, chain, PathSeq.at(chain.target))])
    for i in range(1, n + 1):
        pe = PathSeq.of((host.edge(f"{e0}.e{i}"),))
        edge_images[f"{v0}.e{i}"] = element([Monomial(one, pe, PathSeq.at(pe.target))])
    return CkFamily(vertex_images, edge_images)


# ── traces ────────────────────────────────────────────────────────────────────

_ARITY = {
    "ExpandHereditary": 1,
    "AttachHead": 2,
    "SubdivideEdge": 2,
    "AttachSources": 2,
    "EliminateSource": 1,
}


@dataclass(frozen=True)
class MoveRecord:
    kind: str
    params: tuple[str, ...]
    input_hash: str
    output_hash: str

    def __post_init__(self) -> None:
        if self.kind not in _ARITY:
            raise ValueError(f"unknown move kind {self.kind!r}")
        if len(self.params) != _ARITY[self.kind]:
            raise ValueError(f"{self.kind} takes {_ARITY[self.kind]} parameter(s)")


@dataclass(frozen=True)
class MoveTrace:
    records: tuple[MoveRecord, ...] = ()


def apply_move(g: Graph, kind: str, params: tuple[str, ...]) -> Graph:
    if kind == "ExpandHereditary":
        return expand_hereditary(g, params[0].split(",") if params[0] else ())
    if kind == "AttachHead":
        return attach_head(g, params[0], int(params[1]))
    if kind == "SubdivideEdge":
        return subdivide_edge(g, params[0], int(params[1]))
    if kind == "AttachSources":
        return attach_sources(g, params[0], int(params[1]))
    if kind == "EliminateSource":
        return eliminate_source(g, params[0])
    raise ValueError(f"unknown move kind {kind!r}")


def replay(trace: MoveTrace, g: Graph) -> Graph:
    """Re-run a trace from its input graph, verifying every hash."""
    known = {graph_hash(g): g}
    last = g
    for i, rec in enumerate(trace.records):
        src = known.get(rec.input_hash)
        if src is None:
            raise ValueError(f"record {i}: input hash {rec.input_hash} matches no known graph")
        out = apply_move(src, rec.kind, rec.params)
        got = graph_hash(out)
        if got != rec.output_hash:
            raise ValueError(f"record {i}: output hash mismatch ({got} != {rec.output_hash})")
        known[got] = out
        last = out
    return last


def serialize_trace(trace: MoveTrace) -> str:
    lines = [
        " ".join(("move", r.kind) + r.params + (r.input_hash, r.output_hash))
        for r in trace.records
    ]
    return "".join(line + "\n" for line in lines)


def parse_trace(text: str) -> MoveTrace:
    records = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] != "move" or len(parts) < 2:
            raise ValueError(f"line {lineno}: expected 'move <kind> <params...> <in> <out>'")
        kind = parts[1]
        arity = _ARITY.get(kind)
        if arity is None or len(parts) != 2 + arity + 2:
            raise ValueError(f"line {lineno}: malformed {kind} record")
        records.append(MoveRecord(kind, tuple(parts[2:2 + arity]), parts[-2], parts[-1]))
    return MoveTrace(tuple(records))


# ── desourcification ──────────────────────────────────────────────────────────


def desourcify(g: Graph) -> tuple[Graph, MoveTrace]:
    """Remove all sources while preserving the algebra up to isomorphism.

    Pipeline: iterate source eliminations to find the source-free core F;
    apply one hereditary expansion with the core's vertex set to the ORIGINAL
    graph (its entry-path vertices are the only sources of the result); then
    per core vertex, in name order, eliminate the path-vertex sources aimed
    at it, record the equivalent head form, and absorb the head by
    subdividing the lexicographically least edge into that vertex.  A graph
    with no sources comes back unchanged with an empty trace.
    """
    profile = classify(g)
    if profile.sinks:
        raise ValueError("desourcify requires a graph with no sinks")
    records: list[MoveRecord] = []
    cur = g
    while True:
        srcs = classify(cur).sources
        if not srcs:
            break
        v = srcs[0]
        nxt = eliminate_source(cur, v)
        records.append(MoveRecord("EliminateSource", (v,), graph_hash(cur), graph_hash(nxt)))
        cur = nxt
    if not records:
        return g, MoveTrace(())
    core = cur
    if not core.vertices:
        raise AssertionError("a finite sink-free graph keeps a cycle; the core cannot be empty")
    expanded = expand_hereditary(g, core.vertices)
    records.append(MoveRecord(
        "ExpandHereditary",
        (",".join(sorted(core.vertices)),),
        graph_hash(g),
        graph_hash(expanded),
    ))
    cur = expanded
    for v in sorted(core.vertices):
        aimed = sorted(
            w for w in classify(cur).sources
            if cur.out_edges(w) and all(e.dst == v for e in cur.out_edges(w))
        )
        if not aimed:
            continue
        n = len(aimed)
        for w in aimed:
            nxt = eliminate_source(cur, w)
            records.append(MoveRecord("EliminateSource", (w,), graph_hash(cur), graph_hash(nxt)))
            cur = nxt
        base = cur
        headed = attach_head(base, v, n)
        records.append(MoveRecord(
            "AttachHead", (v, str(n)), graph_hash(base), graph_hash(headed)
        ))
        e0 = min(e.name for e in base.in_edges(v))
        sub = subdivide_edge(base, e0, n)
        records.append(MoveRecord(
            "SubdivideEdge", (e0, str(n)), graph_hash(base), graph_hash(sub)
        ))
        cur = sub
    final = classify(cur)
    assert not final.sources and not final.sinks
    return cur, MoveTrace(tuple(records))


# ── stabilizations ────────────────────────────────────────────────────────────


def matrix_graph(g: Graph, n: int) -> Graph:
    """Attach a head of length n-1 at every vertex (the n x n matrix form)."""
    _check_count(n)
    cur = g
    if n > 1:
        for v in g.vertices:
            cur = attach_head(cur, v, n - 1)
    return cur


def stabilization_fragment(g: Graph, k: int) -> Graph:
    """The depth-k truncation of the fully stabilized graph: a head of
    length k at every vertex.  Depth 0 is the graph itself."""
    if not isinstance(k, int) or k < 0:
        raise ValueError("the depth must be a nonnegative integer")
    return matrix_graph(g, k + 1)
