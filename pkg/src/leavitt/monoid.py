"""The graph monoid: finite vertex multisets modulo v = sum of out-edge ranges.

Elements are finite multisets over the vertex set.  The single relation
schema, one instance per regular vertex, replaces a copy of ``v`` by the
multiset of ranges of the edges ``v`` emits (``expand``); ``contract`` is its
inverse.  Two elements are equal in the monoid when a chain of such moves
connects them; ``equivalent`` searches for a chain within explicit bounds and
answers with an honest tri-state (a found chain is definitive, a missed one
is only inconclusive).

Text syntax: ``v1:2 v2:1`` — whitespace-separated ``vertex:multiplicity``
pairs; ``0`` is the empty element.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

from .graph import Graph, classify, hs_closure, reaches

__all__ = [
    "MonoidElement",
    "parse_monoid",
    "format_monoid",
    "expand",
    "contract",
    "Equivalent",
    "NotWithinBound",
    "equivalent",
    "is_full",
    "rebalance_full",
]


@dataclass(frozen=True)
class MonoidElement:
    """A finite multiset of vertices as sorted ``(vertex, count)`` pairs."""

    counts: tuple[tuple[str, int], ...] = ()

    def __post_init__(self) -> None:
        pairs = tuple(sorted((v, int(k)) for v, k in self.counts))
        names = [v for v, _ in pairs]
        if len(set(names)) != len(names):
            raise ValueError("duplicate vertex in monoid element")
        if any(k <= 0 for _, k in pairs):
            raise ValueError("multiplicities must be positive")
        object.__setattr__(self, "counts", pairs)

    @classmethod
    def of(cls, counts: Mapping[str, int] | Iterable[tuple[str, int]]) -> "MonoidElement":
        """Build from any vertex -> count mapping, dropping zero counts."""
        items = counts.items() if isinstance(counts, Mapping) else counts
        return cls(tuple((v, k) for v, k in items if k))

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.counts)

    @property
    def total(self) -> int:
        return sum(k for _, k in self.counts)

    def get(self, v: str) -> int:
        for name, k in self.counts:
            if name == v:
                return k
        return 0

    def __bool__(self) -> bool:
        return bool(self.counts)

    def __repr__(self) -> str:
        return f"MonoidElement({format_monoid(self)!r})"


def parse_monoid(g: Graph, text: str) -> MonoidElement:
    """Parse ``v1:2 v2:1`` against the graph's vertex set; ``0`` is empty."""
    s = text.strip()
    if s in ("", "0"):
        return MonoidElement()
    counts: Counter[str] = Counter()
    for tok in s.split():
        name, sep, mult = tok.partition(":")
        if not sep or not mult:
            raise ValueError(f"expected vertex:multiplicity, got {tok!r}")
        g.require_vertex(name)
        try:
            k = int(mult)
        except ValueError:
            raise ValueError(f"multiplicity of {name!r} must be an integer") from None
        if k < 0:
            raise ValueError(f"multiplicity of {name!r} must be nonnegative")
        counts[name] += k
    return MonoidElement.of(counts)


def format_monoid(m: MonoidElement) -> str:
    if not m:
        return "0"
    return " ".join(f"{v}:{k}" for v, k in m.counts)


def _require_supported(g: Graph, m: MonoidElement) -> None:
    for v in m.support:
        g.require_vertex(v)


def expand(g: Graph, m: MonoidElement, v: str) -> MonoidElement:
    """Replace one copy of ``v`` by the ranges of the edges ``v`` emits."""
    g.require_vertex(v)
    _require_supported(g, m)
    if m.get(v) < 1:
        raise ValueError(f"vertex {v!r} is not in the support")
    out = g.out_edges(v)
    if not out:
        raise ValueError(f"vertex {v!r} is singular: the relation does not apply")
    c = Counter(dict(m.counts))
    c[v] -= 1
    for e in out:
        c[e.dst] += 1
    return MonoidElement.of(c)


def contract(g: Graph, m: MonoidElement, v: str) -> MonoidElement:
    """Inverse of :func:`expand`: swallow the out-edge ranges of ``v`` back."""
    g.require_vertex(v)
    _require_supported(g, m)
    out = g.out_edges(v)
    if not out:
        raise ValueError(f"vertex {v!r} is singular: the relation does not apply")
    need = Counter(e.dst for e in out)
    c = Counter(dict(m.counts))
    if any(c[w] < k for w, k in need.items()):
        raise ValueError(f"the out-edge ranges of {v!r} are not contained in the element")
    c.subtract(need)
    c[v] += 1
    return MonoidElement.of(c)


@dataclass(frozen=True)
class Equivalent:
    """Definitive: a chain of the stated length connects the two elements."""

    steps: int


@dataclass(frozen=True)
class NotWithinBound:
    """Inconclusive: no chain was found within the bounds.

    ``exhausted`` means both search frontiers died out, so no chain whose
    intermediate elements stay within the size bound exists at all; larger
    intermediate elements could still connect the pair.
    """

    step_bound: int
    size_bound: int
    exhausted: bool


def _neighbours(g: Graph, m: MonoidElement, size_bound: int) -> list[MonoidElement]:
    out: list[MonoidElement] = []
    c = dict(m.counts)
    for v in g.vertices:
        edges = g.out_edges(v)
        if not edges:
            continue
        if c.get(v, 0) >= 1:
            out.append(expand(g, m, v))
        need = Counter(e.dst for e in edges)
        if all(c.get(w, 0) >= k for w, k in need.items()):
            out.append(contract(g, m, v))
    return [n for n in out if n.total <= size_bound]


def equivalent(
    g: Graph,
    a: MonoidElement,
    b: MonoidElement,
    step_bound: int,
    size_bound: int,
) -> Equivalent | NotWithinBound:
    """Search for a chain of expand/contract moves from ``a`` to ``b``.

    Bidirectional breadth-first search, alternating sides level by level, so
    a returned ``Equivalent.steps`` is the length of a shortest chain whose
    intermediate elements never exceed ``size_bound`` total multiplicity.
    """
    if step_bound < 1 or size_bound < 1:
        raise ValueError("bounds must be at least 1")
    _require_supported(g, a)
    _require_supported(g, b)
    if a == b:
        return Equivalent(0)
    seen: tuple[dict[MonoidElement, int], dict[MonoidElement, int]] = ({a: 0}, {b: 0})
    frontier: list[list[MonoidElement]] = [[a], [b]]
    depth = [0, 0]
    while depth[0] + depth[1] < step_bound and (frontier[0] or frontier[1]):
        if frontier[0] and (depth[0] <= depth[1] or not frontier[1]):
            side = 0
        else:
            side = 1
        grown: list[MonoidElement] = []
        for m in frontier[side]:
            for n in _neighbours(g, m, size_bound):
                if n not in seen[side]:
                    seen[side][n] = depth[side] + 1
                    grown.append(n)
        depth[side] += 1
        frontier[side] = grown
        common = seen[0].keys() & seen[1].keys()
        if common:
            return Equivalent(min(seen[0][s] + seen[1][s] for s in common))
    return NotWithinBound(step_bound, size_bound, not frontier[0] and not frontier[1])


def is_full(g: Graph, m: MonoidElement) -> bool:
    """Whether the support's hereditary-saturated closure is every vertex."""
    _require_supported(g, m)
    if not m:
        raise ValueError("the zero element is never full")
    return set(hs_closure(g, m.support)) == g.vertex_set


def rebalance_full(g: Graph, m: MonoidElement) -> MonoidElement:
    """Expand a full element until every vertex carries multiplicity >= 1.

    Requires every vertex to sit on a loop (which rules out sinks and
    sources), so expanding a vertex never un-covers it.  For each uncovered
    vertex, taken in name order, the least covered vertex that reaches it is
    expanded along the lexicographically least shortest path.  The result is
    connected to the input by expand moves alone.
    """
    profile = classify(g)
    if profile.sinks:
        raise ValueError(f"the graph has a sink: {profile.sinks[0]}")
    if profile.sources:
        raise ValueError(f"the graph has a source: {profile.sources[0]}")
    for v in g.vertices:
        if all(e.dst != v for e in g.out_edges(v)):
            raise ValueError(f"vertex {v!r} has no loop")
    if not is_full(g, m):
        raise ValueError("the element is not full")
    cur = m
    for w in sorted(g.vertices):
        if cur.get(w) >= 1:
            continue
        v = next(u for u in cur.support if reaches(g, u, w))
        dist = {w: 0}
        layer = [w]
        while layer:
            grown = []
            for u in layer:
                for e in g.in_edges(u):
                    if e.src not in dist:
                        dist[e.src] = dist[u] + 1
                        grown.append(e.src)
            layer = grown
        at = v
        while at != w:
            step = min(
                e.dst
                for e in g.out_edges(at)
                if e.dst in dist and dist[e.dst] == dist[at] - 1
            )
            cur = expand(g, cur, at)
            at = step
    assert all(cur.get(v) >= 1 for v in g.vertices)
    return cur
