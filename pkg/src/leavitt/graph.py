"""Finite directed multigraphs with the vocabulary used by graph algebras.

Graphs are immutable: vertices and edges keep their declaration order, names
are unique within their kind, and every operation is a pure function.
Set-valued results come back as lexicographically sorted tuples so that
repeated runs are byte-identical.

Text format (one declaration per line, LF-terminated)::

    # comment
    vertex <name>
    edge <name> <source> <target>

Names match ``[A-Za-z0-9_.]+``.  The serializer emits all vertices, then all
edges, in declaration order; parsing its output reproduces the graph exactly.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

__all__ = [
    "NAME_RE",
    "Edge",
    "Graph",
    "PathSeq",
    "VertexClassification",
    "classify",
    "reaches",
    "is_hereditary",
    "is_saturated",
    "hereditary_closure",
    "saturated_closure",
    "hs_closure",
    "cycles_without_exits",
    "distinguished_paths",
    "restrict",
    "complement_graph",
    "parse_graph",
    "serialize_graph",
    "fnv1a64",
    "graph_hash",
]

NAME_RE = re.compile(r"[A-Za-z0-9_.]+\Z")


class Edge(NamedTuple):
    """A named edge from ``src`` to ``dst``."""

    name: str
    src: str
    dst: str


def _check_name(kind: str, name: str) -> None:
    if not isinstance(name, str) or not NAME_RE.match(name):
        raise ValueError(f"invalid {kind} name {name!r}: names match [A-Za-z0-9_.]+")


@dataclass(frozen=True)
class Graph:
    """Immutable finite directed multigraph with named vertices and edges.

    Edge endpoints must be declared vertices; names are unique within their
    kind (a vertex and an edge may share a name).
    """

    vertices: tuple[str, ...] = ()
    edges: tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(Edge(*e) for e in self.edges))
        seen: set[str] = set()
        for v in self.vertices:
            _check_name("vertex", v)
            if v in seen:
                raise ValueError(f"duplicate vertex {v!r}")
            seen.add(v)
        enames: set[str] = set()
        for e in self.edges:
            _check_name("edge", e.name)
            if e.name in enames:
                raise ValueError(f"duplicate edge {e.name!r}")
            enames.add(e.name)
            if e.src not in seen:
                raise ValueError(f"edge {e.name!r}: unknown vertex {e.src!r}")
            if e.dst not in seen:
                raise ValueError(f"edge {e.name!r}: unknown vertex {e.dst!r}")

    def __repr__(self) -> str:
        return f"Graph({len(self.vertices)} vertices, {len(self.edges)} edges)"

    @cached_property
    def vertex_set(self) -> frozenset[str]:
        return frozenset(self.vertices)

    @cached_property
    def _out(self) -> dict[str, tuple[Edge, ...]]:
        m: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            m[e.src].append(e)
        return {v: tuple(es) for v, es in m.items()}

    @cached_property
    def _in(self) -> dict[str, tuple[Edge, ...]]:
        m: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            m[e.dst].append(e)
        return {v: tuple(es) for v, es in m.items()}

    @cached_property
    def _edge_by_name(self) -> dict[str, Edge]:
        return {e.name: e for e in self.edges}

    def require_vertex(self, v: str) -> None:
        if v not in self.vertex_set:
            raise ValueError(f"unknown vertex {v!r}")

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        """Edges emitted by ``v`` (s^-1(v)), in declaration order."""
        self.require_vertex(v)
        return self._out[v]

    def in_edges(self, v: str) -> tuple[Edge, ...]:
        """Edges received by ``v`` (r^-1(v)), in declaration order."""
        self.require_vertex(v)
        return self._in[v]

    def edge(self, name: str) -> Edge:
        try:
            return self._edge_by_name[name]
        except KeyError:
            raise ValueError(f"unknown edge {name!r}") from None


@dataclass(frozen=True)
class PathSeq:
    """A finite path: a base vertex (length 0) or a composable edge sequence.

    Consecutive edges must compose (the target of each edge is the source of
    the next); the length is the edge count.
    """

    vertex: str | None
    edges: tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple(Edge(*e) for e in self.edges))
        if self.edges:
            if self.vertex is not None:
                raise ValueError("a nonempty path has no separate base vertex")
            for a, b in zip(self.edges, self.edges[1:]):
                if a.dst != b.src:
                    raise ValueError(f"edges {a.name!r} and {b.name!r} do not compose")
        elif self.vertex is None:
            raise ValueError("a length-0 path needs a base vertex")

    @classmethod
    def at(cls, v: str) -> "PathSeq":
        return cls(v, ())

    @classmethod
    def of(cls, edges: Iterable[Edge]) -> "PathSeq":
        return cls(None, tuple(edges))

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def source(self) -> str:
        return self.edges[0].src if self.edges else self.vertex  # type: ignore[return-value]

    @property
    def target(self) -> str:
        """The path's range: where it ends."""
        return self.edges[-1].dst if self.edges else self.vertex  # type: ignore[return-value]

    def edge_names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.edges)

    def vertex_seq(self) -> tuple[str, ...]:
        """All vertices visited, in order (length + 1 entries)."""
        if not self.edges:
            return (self.vertex,)  # type: ignore[return-value]
        return (self.edges[0].src,) + tuple(e.dst for e in self.edges)

    def label(self) -> str:
        """Display name: the base vertex, or edge names joined with dots."""
        return self.vertex if not self.edges else ".".join(self.edge_names())  # type: ignore[return-value]

    def extend(self, e: Edge) -> "PathSeq":
        if self.target != e.src:
            raise ValueError(f"edge {e.name!r} does not start where the path ends")
        return PathSeq.of(self.edges + (e,))

    def concat(self, other: "PathSeq") -> "PathSeq":
        if self.target != other.source:
            raise ValueError("paths do not compose")
        if not other.edges:
            return self
        if not self.edges:
            return other
        return PathSeq.of(self.edges + other.edges)

    def drop_last(self) -> "PathSeq":
        if not self.edges:
            raise ValueError("cannot shorten a length-0 path")
        if len(self.edges) == 1:
            return PathSeq.at(self.edges[0].src)
        return PathSeq.of(self.edges[:-1])

    def sort_key(self) -> tuple:
        return (self.length, self.source, self.edge_names())

    def __repr__(self) -> str:
        return f"PathSeq({self.label()!r})"


def path_in(g: Graph, names: Iterable[str]) -> PathSeq:
    """Resolve a sequence of edge names to a path of ``g``."""
    return PathSeq.of(g.edge(n) for n in names)


@dataclass(frozen=True)
class VertexClassification:
    sinks: tuple[str, ...]
    sources: tuple[str, ...]
    regular: tuple[str, ...]
    singular: tuple[str, ...]


def classify(g: Graph) -> VertexClassification:
    """Partition the vertices: sinks emit nothing, sources receive nothing,
    regular vertices emit at least one edge (finitely many, the graph being
    finite), and the singular ones are exactly the sinks."""
    sinks = sorted(v for v in g.vertices if not g._out[v])
    sources = sorted(v for v in g.vertices if not g._in[v])
    regular = sorted(v for v in g.vertices if g._out[v])
    return VertexClassification(tuple(sinks), tuple(sources), tuple(regular), tuple(sinks))


def reaches(g: Graph, v: str, w: str) -> bool:
    """Whether some path (possibly of length 0) runs from ``v`` to ``w``."""
    g.require_vertex(v)
    g.require_vertex(w)
    if v == w:
        return True
    seen = {v}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        for e in g._out[u]:
            if e.dst == w:
                return True
            if e.dst not in seen:
                seen.add(e.dst)
                queue.append(e.dst)
    return False


def _validated(g: Graph, xs: Iterable[str]) -> set[str]:
    s = set(xs)
    for v in s:
        g.require_vertex(v)
    return s


def is_hereditary(g: Graph, hs: Iterable[str]) -> bool:
    h = _validated(g, hs)
    return all(e.dst in h for e in g.edges if e.src in h)


def is_saturated(g: Graph, hs: Iterable[str]) -> bool:
    h = _validated(g, hs)
    for v in g.vertices:
        if v not in h and g._out[v] and all(e.dst in h for e in g._out[v]):
            return False
    return True


def hereditary_closure(g: Graph, xs: Iterable[str]) -> tuple[str, ...]:
    """Smallest hereditary superset: everything reachable from ``xs``."""
    seen = _validated(g, xs)
    queue = deque(seen)
    while queue:
        u = queue.popleft()
        for e in g._out[u]:
            if e.dst not in seen:
                seen.add(e.dst)
                queue.append(e.dst)
    return tuple(sorted(seen))


def saturated_closure(g: Graph, hs: Iterable[str]) -> tuple[str, ...]:
    """Smallest saturated superset: keep adding regular vertices all of whose
    edge targets already lie inside."""
    h = _validated(g, hs)
    changed = True
    while changed:
        changed = False
        for v in g.vertices:
            if v not in h and g._out[v] and all(e.dst in h for e in g._out[v]):
                h.add(v)
                changed = True
    return tuple(sorted(h))


def hs_closure(g: Graph, xs: Iterable[str]) -> tuple[str, ...]:
    """Smallest hereditary and saturated superset (fixpoint of both closures)."""
    cur = tuple(sorted(_validated(g, xs)))
    while True:
        nxt = saturated_closure(g, hereditary_closure(g, cur))
        if nxt == cur:
            return cur
        cur = nxt


def cycles_without_exits(g: Graph) -> tuple[PathSeq, ...]:
    """All cycles whose vertices each emit exactly one edge.

    Each cycle is listed once, rotated to start at its lexicographically
    least vertex; the list is sorted by that starting vertex.  Such cycles
    are pairwise vertex-disjoint.
    """
    nxt = {v: g._out[v][0] for v in g.vertices if len(g._out[v]) == 1}
    done: set[str] = set()
    found: list[list[str]] = []
    for v in sorted(nxt):
        if v in done:
            continue
        trail: list[str] = []
        index: dict[str, int] = {}
        u = v
        while u in nxt and u not in done and u not in index:
            index[u] = len(trail)
            trail.append(u)
            u = nxt[u].dst
        if u in index:
            found.append(trail[index[u]:])
        done.update(trail)
    out = []
    for cyc in found:
        start = cyc.index(min(cyc))
        rot = cyc[start:] + cyc[:start]
        out.append(PathSeq.of(nxt[w] for w in rot))
    out.sort(key=lambda p: p.source)
    return tuple(out)


def distinguished_paths(g: Graph, max_len: int) -> tuple[PathSeq, ...]:
    """All paths of length <= ``max_len`` ending on a cycle without exits,
    including the length-0 paths at the cycle vertices themselves."""
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    bases: set[str] = set()
    for cyc in cycles_without_exits(g):
        bases.update(cyc.vertex_seq())
    paths: list[PathSeq] = [PathSeq.at(v) for v in sorted(bases)]
    frontier = list(paths)
    for _ in range(max_len):
        nxt: list[PathSeq] = []
        for p in frontier:
            for e in g.in_edges(p.source):
                nxt.append(PathSeq.of((e,) + p.edges))
        frontier = nxt
        paths.extend(nxt)
    paths.sort(key=PathSeq.sort_key)
    return tuple(paths)


def restrict(g: Graph, hs: Iterable[str]) -> Graph:
    """Subgraph on a hereditary set ``hs`` with every edge emitted inside it."""
    h = _validated(g, hs)
    if not is_hereditary(g, h):
        raise ValueError("restriction requires a hereditary vertex set")
    return Graph(
        tuple(v for v in g.vertices if v in h),
        tuple(e for e in g.edges if e.src in h),
    )


def complement_graph(g: Graph, hs: Iterable[str]) -> Graph:
    """Graph on the vertices outside ``hs`` with every edge ranging outside it."""
    h = _validated(g, hs)
    return Graph(
        tuple(v for v in g.vertices if v not in h),
        tuple(e for e in g.edges if e.dst not in h),
    )


# ── text format ──────────────────────────────────────────────────────────────


def parse_graph(text: str) -> Graph:
    vertices: list[str] = []
    edges: list[tuple[str, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "vertex" and len(parts) == 2:
            vertices.append(parts[1])
        elif parts[0] == "edge" and len(parts) == 4:
            edges.append((parts[1], parts[2], parts[3]))
        else:
            raise ValueError(f"line {lineno}: expected 'vertex <name>' or 'edge <name> <src> <dst>'")
    return Graph(tuple(vertices), tuple(edges))


def serialize_graph(g: Graph) -> str:
    lines = [f"vertex {v}" for v in g.vertices]
    lines += [f"edge {e.name} {e.src} {e.dst}" for e in g.edges]
    return "".join(line + "\n" for line in lines)


def fnv1a64(data: bytes) -> int:
    """64-bit FNV-1a."""
    h = 0xCBF29CE484222325
    for b in data:
        h ^= b
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


def graph_hash(g: Graph) -> str:
    """FNV-1a of the canonical serialization, as 16 hex digits."""
    return format(fnv1a64(serialize_graph(g).encode("utf-8")), "016x")
