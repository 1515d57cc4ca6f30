"""Corner graphs cut out of a host graph by a directed forest.

A forest is a subset of the host's edges with in-degree at most one and no
cycles; its roots are the vertices with no incoming forest edge, and every
forest vertex is reached from a root along a unique forest path ``tau(v)``.
The corner graph keeps the forest vertices that emit at least one non-forest
edge and, for each non-forest edge ``e`` emitted inside the forest, one edge
``e_u`` for every kept vertex ``u`` below ``r(e)`` in the forest.

The corner's algebra sits inside the host's as a corner by an explicit
family: ``Q_v = tau(v) tau(v)* - sum tau(v) e e* tau(v)*`` over the forest
edges emitted by ``v``, and ``T_{e_u} = tau(s(e)) e tau(r(e))* Q_u``; the
weight map below makes every ``Q_v`` degree 0 and every ``T_{e_u}`` degree 1.

Text format for forests (host graph given separately)::

    root <vertex>
    tedge <edge>
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from .algebra import CkFamily, LpaElement, Monomial, element
from .graph import Edge, Graph, PathSeq, classify, hereditary_closure, serialize_graph
from .moves import attach_head, matrix_graph, stabilization_fragment

__all__ = [
    "Forest",
    "build_forest",
    "tau",
    "t_corner",
    "corner_family",
    "corner_weights",
    "full_idempotent_corner",
    "se_corner",
    "parse_forest",
    "serialize_forest",
]


@dataclass(frozen=True)
class Forest:
    """A directed forest inside a host graph.

    ``roots`` must be exactly the forest vertices with no incoming forest
    edge; the forest edges must have in-degree at most one and no cycles, so
    every forest vertex hangs from a unique root.
    """

    graph: Graph
    roots: tuple[str, ...]
    tree_edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "roots", tuple(sorted(self.roots)))
        object.__setattr__(
            self, "tree_edges",
            tuple(sorted((Edge(*e) for e in self.tree_edges), key=lambda e: e.name)),
        )
        g = self.graph
        for v in self.roots:
            g.require_vertex(v)
        names = set()
        for e in self.tree_edges:
            if g.edge(e.name) != e:
                raise ValueError(f"tree edge {e.name!r} is not an edge of the host")
            if e.name in names:
                raise ValueError(f"duplicate tree edge {e.name!r}")
            names.add(e.name)
        if len(set(self.roots)) != len(self.roots):
            raise ValueError("duplicate root")
        parent: dict[str, Edge] = {}
        for e in self.tree_edges:
            if e.dst in parent:
                raise ValueError(f"vertex {e.dst!r} has two incoming tree edges")
            parent[e.dst] = e
        members = set(self.roots) | {e.src for e in self.tree_edges} | set(parent)
        rootless = {v for v in members if v not in parent} - set(self.roots)
        if rootless:
            raise ValueError(f"vertices {sorted(rootless)} have no incoming tree edge "
                             "but are not roots")
        if set(self.roots) & set(parent):
            raise ValueError("a root cannot have an incoming tree edge")
        # with in-degree <= 1 a cycle is a parent loop: walk up with a bound
        for v in members:
            u, hops = v, 0
            while u in parent:
                u = parent[u].src
                hops += 1
                if hops > len(members):
                    raise ValueError("the tree edges contain a cycle")

    @cached_property
    def vertices(self) -> tuple[str, ...]:
        """Forest vertices in host declaration order."""
        members = set(self.roots) | {e.src for e in self.tree_edges} | {
            e.dst for e in self.tree_edges
        }
        return tuple(v for v in self.graph.vertices if v in members)

    @cached_property
    def parent(self) -> dict[str, Edge]:
        return {e.dst: e for e in self.tree_edges}

    @cached_property
    def leaves(self) -> tuple[str, ...]:
        """Forest vertices emitting no tree edge."""
        srcs = {e.src for e in self.tree_edges}
        return tuple(v for v in self.vertices if v not in srcs)

    def tau(self, v: str) -> PathSeq:
        """The unique forest path from a root down to ``v``."""
        if v not in set(self.vertices):
            raise ValueError(f"vertex {v!r} is not in the forest")
        chain: list[Edge] = []
        u = v
        while u in self.parent:
            e = self.parent[u]
            chain.append(e)
            u = e.src
        chain.reverse()
        return PathSeq.of(chain) if chain else PathSeq.at(v)

    def descendants(self, v: str) -> frozenset[str]:
        """Vertices reachable from ``v`` along tree edges (including ``v``)."""
        out: set[str] = {v}
        frontier = [v]
        while frontier:
            u = frontier.pop()
            for e in self.tree_edges:
                if e.src == u and e.dst not in out:
                    out.add(e.dst)
                    frontier.append(e.dst)
        return frozenset(out)


def build_forest(g: Graph, roots: Iterable[str]) -> Forest:
    """Grow a forest over the hereditary closure of ``roots``.

    Greedy search: among all edges from an already-reached vertex to an
    unreached one, repeatedly take the lexicographically least edge name.
    No edge ever enters the root set.
    """
    x = set(roots)
    if not x:
        raise ValueError("the root set must be nonempty")
    for v in x:
        g.require_vertex(v)
    if x == set(g.vertices):
        raise ValueError("the root set must be a proper subset of the vertices")
    reached = set(x)
    chosen: list[Edge] = []
    while True:
        candidates = [e for e in g.edges if e.src in reached and e.dst not in reached]
        if not candidates:
            break
        e = min(candidates, key=lambda e: e.name)
        chosen.append(e)
        reached.add(e.dst)
    assert reached == set(hereditary_closure(g, x))
    return Forest(g, tuple(sorted(x)), tuple(chosen))


def tau(t: Forest, v: str) -> PathSeq:
    return t.tau(v)


def _corner_vertices(g: Graph, t: Forest) -> tuple[str, ...]:
    tree_names = {e.name for e in t.tree_edges}
    out = []
    for v in t.vertices:
        emitted = g.out_edges(v)
        if emitted and all(e.name in tree_names for e in emitted):
            continue  # every edge out of v is a tree edge: v is swallowed
        out.append(v)
    return tuple(out)


def _corner_edges(g: Graph, t: Forest) -> list[tuple[Edge, str]]:
    """(host edge, kept vertex below its range) pairs, in declaration order."""
    tset = set(t.vertices)
    tree_names = {e.name for e in t.tree_edges}
    kept = _corner_vertices(g, t)
    kept_set = set(kept)
    pairs: list[tuple[Edge, str]] = []
    for e in g.edges:
        if e.src not in tset or e.name in tree_names:
            continue
        below = t.descendants(e.dst)
        for u in t.vertices:
            if u in kept_set and u in below:
                pairs.append((e, u))
    return pairs


def t_corner(g: Graph, t: Forest) -> Graph:
    """The corner graph cut out by the forest."""
    if t.graph != g:
        raise ValueError("the forest belongs to a different host graph")
    kept = _corner_vertices(g, t)
    edges = tuple(Edge(f"{e.name}_{u}", e.src, u) for e, u in _corner_edges(g, t))
    return Graph(kept, edges)


def corner_family(g: Graph, t: Forest) -> CkFamily:
    """Images of the corner graph's generators inside the host algebra."""
    if t.graph != g:
        raise ValueError("the forest belongs to a different host graph")
    one = Fraction(1)
    tree_names = {e.name for e in t.tree_edges}
    q: dict[str, LpaElement] = {}
    for v in _corner_vertices(g, t):
        tv = t.tau(v)
        terms = [Monomial(one, tv, tv)]
        for e in g.out_edges(v):
            if e.name in tree_names:
                ext = tv.extend(e)
                terms.append(Monomial(-one, ext, ext))
        q[v] = element(terms)
    td: dict[str, LpaElement] = {}
    for e, u in _corner_edges(g, t):
        stem = element([Monomial(one, t.tau(e.src).extend(e), t.tau(e.dst))])
        td[f"{e.name}_{u}"] = stem * q[u]
    return CkFamily(q, td)


def corner_weights(g: Graph, t: Forest) -> dict[str, int]:
    """Edge weights making the corner family graded: a non-tree edge between
    forest vertices weighs ``len(tau(r(e))) - len(tau(s(e))) + 1``; every
    other edge weighs 1."""
    if t.graph != g:
        raise ValueError("the forest belongs to a different host graph")
    tset = set(t.vertices)
    tree_names = {e.name for e in t.tree_edges}
    out: dict[str, int] = {}
    for e in g.edges:
        if e.name not in tree_names and e.src in tset and e.dst in tset:
            out[e.name] = t.tau(e.dst).length - t.tau(e.src).length + 1
        else:
            out[e.name] = 1
    return out


def full_idempotent_corner(g: Graph, m: Mapping[str, int], n: int) -> Graph:
    """The corner of the n x n matrix form cut by heads of length m(v)-1.

    ``m`` assigns every vertex a multiplicity >= 1 with ``n >= max(m)``.  The
    chosen vertex set is hereditary in the matrix form, so the corner is just
    the graph with a head of length m(v)-1 attached at each vertex; the same
    graph is recomputed through ``t_corner`` (with the trivial forest, which
    renames each edge ``e`` to ``e_<target>``) as an internal cross-check.
    """
    profile = classify(g)
    if profile.sinks or profile.sources:
        raise ValueError("the host graph must have no sinks and no sources")
    missing = [v for v in g.vertices if v not in m]
    if missing:
        raise ValueError(f"multiplicity map is missing vertices: {', '.join(missing)}")
    for v, k in m.items():
        g.require_vertex(v)
        if not isinstance(k, int) or k < 1:
            raise ValueError(f"multiplicity of {v!r} must be a positive integer")
    if not isinstance(n, int) or n < max(m.values()):
        raise ValueError("the matrix size must be at least every multiplicity")
    mn = matrix_graph(g, n)
    picked = set(g.vertices)
    for v in g.vertices:
        picked.update(f"{v}.h{i}" for i in range(1, m[v]))
    induced = g
    for v in g.vertices:
        if m[v] > 1:
            induced = attach_head(induced, v, m[v] - 1)
    roots = tuple(v for v in mn.vertices if v in picked)
    corner = t_corner(mn, Forest(mn, roots, ()))
    renamed = Graph(
        induced.vertices,
        tuple(Edge(f"{e.name}_{e.dst}", e.src, e.dst) for e in induced.edges),
    )
    assert serialize_graph(corner) == serialize_graph(renamed)
    return induced


def se_corner(g: Graph, xs: Iterable[str], k: int) -> Graph:
    """Corner of the stabilized graph, computed in its depth-k truncation.

    ``xs`` names vertices of the fragment (head coordinates like ``v.h2``
    allowed).  The result does not depend on the depth once every name fits
    and the root set is proper; that independence is asserted by recomputing
    at depth k+1.
    """
    x = sorted(set(xs))
    if not x:
        raise ValueError("the root set must be nonempty")
    frag = stabilization_fragment(g, k)
    for v in x:
        if v not in frag.vertex_set:
            raise ValueError(
                f"vertex {v!r} is not in the depth-{k} stabilization fragment; "
                "increase the depth or fix the name"
            )
    if len(x) == len(frag.vertices):
        raise ValueError("the root set exhausts the fragment; increase the depth")
    corner = t_corner(frag, build_forest(frag, x))
    deeper = stabilization_fragment(g, k + 1)
    check = t_corner(deeper, build_forest(deeper, x))
    assert serialize_graph(corner) == serialize_graph(check)
    return corner


def parse_forest(text: str, g: Graph) -> Forest:
    roots: list[str] = []
    tedges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "root" and len(parts) == 2:
            roots.append(parts[1])
        elif parts[0] == "tedge" and len(parts) == 2:
            tedges.append(g.edge(parts[1]))
        else:
            raise ValueError(f"line {lineno}: expected 'root <vertex>' or 'tedge <edge>'")
    return Forest(g, tuple(roots), tuple(tedges))


def serialize_forest(t: Forest) -> str:
    lines = [f"root {v}" for v in t.roots]
    lines += [f"tedge {e.name}" for e in t.tree_edges]
    return "".join(line + "\n" for line in lines)
