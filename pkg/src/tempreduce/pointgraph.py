"""Endpoint graphs: conversion, equality merging and transitive reduction.

After merging, every edge of a :class:`MergedPointGraph` points "forward" and
carries ``<`` or ``<=``; greater-than directions are implied by symmetry.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

from .algebra import EQ, GE, GT, LE, LT, POINT_ALL, PointRelation, mask_to_endpoints
from .closure import IntervalGraph
from .errors import InconsistencyError, NonConvexError


class Side(enum.IntEnum):
    BEGIN = 1
    END = 2


class Endpoint(NamedTuple):
    entity: str
    side: Side

    def __str__(self) -> str:
        return f"{self.entity}{int(self.side)}"


def _sort_key(ep: Endpoint) -> tuple[str, int]:
    return (str(ep), 0)


@dataclass(frozen=True)
class RawPointGraph:
    """Unmerged endpoint graph; ``relations[(p, q)]`` reads "p rel q"."""

    points: tuple[Endpoint, ...]
    relations: dict[tuple[Endpoint, Endpoint], PointRelation]
    event_count: int

    def relation(self, p: Endpoint, q: Endpoint) -> PointRelation:
        if p == q:
            return EQ
        if (p, q) in self.relations:
            return self.relations[(p, q)]
        if (q, p) in self.relations:
            return self.relations[(q, p)].inverse()
        return POINT_ALL


def to_point_graph(g: IntervalGraph) -> RawPointGraph:
    """Four endpoint relations per interval edge, plus begin < end per event."""
    if not g.saturated:
        raise ValueError("to_point_graph expects a saturated interval graph")
    points = []
    relations: dict[tuple[Endpoint, Endpoint], PointRelation] = {}
    for node in g.nodes:
        b, e = Endpoint(node, Side.BEGIN), Endpoint(node, Side.END)
        points += [b, e]
        relations[(b, e)] = LT
    for a, c, rel in g.edges():
        a1, a2 = Endpoint(a, Side.BEGIN), Endpoint(a, Side.END)
        c1, c2 = Endpoint(c, Side.BEGIN), Endpoint(c, Side.END)
        quad = mask_to_endpoints(rel.mask)
        for (p, q), r in zip(((a1, c1), (a2, c2), (a1, c2), (a2, c1)), quad):
            if r != POINT_ALL:
                relations[(p, q)] = PointRelation(r)
    return RawPointGraph(tuple(points), relations, len(g.nodes))


class _UnionFind:
    def __init__(self, items: Iterable):
        self.parent = {x: x for x in items}

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


@dataclass(frozen=True)
class MergedPointGraph:
    """Endpoint equality classes with forward ``<`` / ``<=`` edges between them."""

    nodes: tuple[frozenset[Endpoint], ...]
    edges: dict[tuple[int, int], PointRelation]
    event_count: int
    saturated: bool = False
    index: dict[Endpoint, int] = field(default=None, compare=False, repr=False)  # type: ignore[assignment]

    def __post_init__(self):
        if self.index is None:
            object.__setattr__(
                self, "index", {ep: i for i, node in enumerate(self.nodes) for ep in node}
            )

    @property
    def entities(self) -> frozenset[str]:
        return frozenset(ep.entity for ep in self.index)

    def label(self, i: int, j: int) -> PointRelation | None:
        """Relation from node ``i`` to node ``j``; ``None`` when unrelated."""
        if i == j:
            return EQ
        rel = self.edges.get((i, j))
        if rel is not None:
            return rel
        rel = self.edges.get((j, i))
        if rel is not None:
            return rel.inverse()
        return None

    def is_trivial(self, i: int, j: int) -> bool:
        """True when the edge links the begin and end of one same event."""
        begins = {ep.entity for ep in self.nodes[i] if ep.side is Side.BEGIN}
        return any(ep.side is Side.END and ep.entity in begins for ep in self.nodes[j])

    def nontrivial_edges(self) -> dict[tuple[int, int], PointRelation]:
        return {k: v for k, v in self.edges.items() if not self.is_trivial(*k)}

    def node_name(self, i: int) -> str:
        return "{" + ",".join(sorted(str(ep) for ep in self.nodes[i])) + "}"

    def find(self, endpoint_names: Iterable[str]) -> int:
        """Index of the node holding exactly the named endpoints (test helper)."""
        wanted = set(endpoint_names)
        for i, node in enumerate(self.nodes):
            if {str(ep) for ep in node} == wanted:
                return i
        raise KeyError(f"no node {sorted(wanted)}")


def close_point_edges(
    n: int, edges: dict[tuple[int, int], PointRelation]
) -> dict[tuple[int, int], PointRelation]:
    """Transitive closure of forward ``<`` / ``<=`` edges over an acyclic graph.

    A pair is labelled ``<`` when some path between them uses a ``<`` edge.
    Raises :class:`InconsistencyError` on a cycle.
    """
    succ = [0] * n
    lt_succ = [0] * n
    indeg = [0] * n
    for (i, j), rel in edges.items():
        if not succ[i] >> j & 1:
            indeg[j] += 1
        succ[i] |= 1 << j
        if rel == LT:
            lt_succ[i] |= 1 << j
    order = _topological_order(n, succ, indeg)
    reach = [0] * n
    strict = [0] * n
    for i in reversed(order):
        r, s = succ[i], lt_succ[i]
        bits = succ[i]
        while bits:
            low = bits & -bits
            j = low.bit_length() - 1
            bits ^= low
            r |= reach[j]
            s |= strict[j]
            if lt_succ[i] & low:
                s |= reach[j]
        reach[i], strict[i] = r, s
    out = {}
    for i in range(n):
        bits = reach[i]
        while bits:
            low = bits & -bits
            j = low.bit_length() - 1
            bits ^= low
            out[(i, j)] = LT if strict[i] & low else LE
    return out


def _topological_order(n: int, succ: list[int], indeg: list[int]) -> list[int]:
    indeg = list(indeg)
    ready = [i for i in range(n) if indeg[i] == 0]
    order = []
    while ready:
        i = ready.pop()
        order.append(i)
        bits = succ[i]
        while bits:
            low = bits & -bits
            j = low.bit_length() - 1
            bits ^= low
            indeg[j] -= 1
            if indeg[j] == 0:
                ready.append(j)
    if len(order) != n:
        raise InconsistencyError("cycle in point graph")
    return order


def _strongly_connected(n: int, adj: list[list[int]]) -> list[list[int]]:
    index = [0] * n
    low = [0] * n
    seen = [False] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 1
    for root in range(n):
        if seen[root]:
            continue
        work = [(root, 0)]
        while work:
            v, pos = work.pop()
            if pos == 0:
                seen[v] = True
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            for k in range(pos, len(adj[v])):
                w = adj[v][k]
                if not seen[w]:
                    work.append((v, k + 1))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comps


def merge_equalities(raw: RawPointGraph) -> MergedPointGraph:
    """Collapse equal endpoints into single nodes and close the result.

    Equalities come from ``=`` relations and from ``<=`` cycles.  The returned
    graph is acyclic and closed under point composition.
    """
    for (p, q), r in raw.relations.items():
        if r == LT | GT:
            raise NonConvexError(f"non-convex point relation between {p} and {q}")
    uf = _UnionFind(raw.points)
    for (p, q), r in raw.relations.items():
        if r == EQ:
            uf.union(p, q)

    while True:
        roots = sorted({uf.find(p) for p in raw.points}, key=_sort_key)
        members: dict[Endpoint, list[Endpoint]] = {r: [] for r in roots}
        for p in raw.points:
            members[uf.find(p)].append(p)
        nodes = tuple(
            frozenset(members[r]) for r in sorted(roots, key=lambda r: sorted(map(str, members[r])))
        )
        index = {ep: i for i, node in enumerate(nodes) for ep in node}

        pair_rel: dict[tuple[int, int], PointRelation] = {}
        for (p, q), r in raw.relations.items():
            i, j = index[p], index[q]
            if i == j:
                if not r & EQ:
                    raise InconsistencyError(f"{p} and {q} are both equal and unequal")
                continue
            if i > j:
                i, j, r = j, i, r.inverse()
            acc = pair_rel.get((i, j), POINT_ALL) & r
            if not acc:
                raise InconsistencyError(f"contradictory relations between {p} and {q}")
            pair_rel[(i, j)] = acc

        merged_any = False
        for (i, j), r in pair_rel.items():
            if r == EQ:
                merged_any |= uf.union(next(iter(nodes[i])), next(iter(nodes[j])))
        n = len(nodes)
        forward: dict[tuple[int, int], PointRelation] = {}
        for (i, j), r in pair_rel.items():
            if r in (LT, LE):
                forward[(i, j)] = r
            elif r in (GT, GE):
                forward[(j, i)] = r.inverse()
        adj: list[list[int]] = [[] for _ in range(n)]
        for (i, j) in forward:
            adj[i].append(j)
        for comp in _strongly_connected(n, adj):
            if len(comp) < 2:
                continue
            inside = set(comp)
            if any(forward[(i, j)] == LT for (i, j) in forward if i in inside and j in inside):
                names = ", ".join(sorted(str(ep) for c in comp for ep in nodes[c]))
                raise InconsistencyError(f"strict cycle among {names}")
            first = next(iter(nodes[comp[0]]))
            for c in comp[1:]:
                merged_any |= uf.union(first, next(iter(nodes[c])))
        if not merged_any:
            break

    closed = close_point_edges(n, forward)
    return MergedPointGraph(nodes, closed, raw.event_count, saturated=True)


def merged_from_interval_graph(g: IntervalGraph) -> MergedPointGraph:
    from .closure import saturate

    return merge_equalities(to_point_graph(saturate(g)))


@dataclass(frozen=True)
class ReducedGraph:
    """Transitive reduction of a merged graph.

    ``major`` holds every reduction edge (trivial ones included, so that
    closing it gives back ``base.edges``); ``minor`` holds the non-trivial
    closure edges outside the reduction.
    """

    base: MergedPointGraph
    major: dict[tuple[int, int], PointRelation]
    minor: dict[tuple[int, int], PointRelation]

    @property
    def major_nontrivial(self) -> dict[tuple[int, int], PointRelation]:
        return {k: v for k, v in self.major.items() if not self.base.is_trivial(*k)}

    def label(self, i: int, j: int) -> PointRelation | None:
        """Relation between two nodes as stated by the reduction alone."""
        if i == j:
            return EQ
        rel = self.major.get((i, j))
        if rel is not None:
            return rel
        rel = self.major.get((j, i))
        if rel is not None:
            return rel.inverse()
        return None


def transitive_reduction(g: MergedPointGraph) -> ReducedGraph:
    """Closure edges minus those obtained by composing two closure edges.

    An edge is derivable only when some two-step path composes to its own
    label: a ``<`` edge needs a path with at least one ``<`` on it, since
    ``<=`` composed with ``<=`` says less than ``<``.
    """
    if not g.saturated:
        raise ValueError("transitive_reduction expects a closed merged graph")
    n = len(g.nodes)
    succ = [0] * n
    lt_succ = [0] * n
    for (i, j), rel in g.edges.items():
        if i == j:
            raise ValueError("self-loop in merged point graph")
        succ[i] |= 1 << j
        if rel == LT:
            lt_succ[i] |= 1 << j
    major = {}
    minor = {}
    for i in range(n):
        composed = 0
        strict = 0
        for k in _iter_bits(succ[i]):
            composed |= succ[k]
            strict |= succ[k] if lt_succ[i] >> k & 1 else lt_succ[k]
        for j in _iter_bits(succ[i]):
            rel = g.edges[(i, j)]
            derived = composed >> j & 1 and (rel != LT or strict >> j & 1)
            if derived:
                if not g.is_trivial(i, j):
                    minor[(i, j)] = rel
            else:
                major[(i, j)] = rel
    return ReducedGraph(g, major, minor)


def _iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def major_minor(g: MergedPointGraph):
    """Partition of the non-trivial closure edges into (major, minor)."""
    red = transitive_reduction(g)
    return red.major_nontrivial, dict(red.minor)


def serialize_point_graph(g: MergedPointGraph | ReducedGraph) -> str:
    """Debug listing: one node per line, then one edge per line."""
    if isinstance(g, ReducedGraph):
        base, edges = g.base, g.major
    else:
        base, edges = g, g.edges
    names = [base.node_name(i) for i in range(len(base.nodes))]
    lines = sorted(names)
    edge_lines = sorted(
        (names[i], names[j], "<" if rel == LT else "<=") for (i, j), rel in edges.items()
    )
    lines += [f"{a} {sym} {b}" for a, b, sym in edge_lines]
    return "\n".join(lines) + "\n"
