"""Interval graphs over events and their path-consistency closure."""

from __future__ import annotations

from collections import deque
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from .algebra import (
    ALL_MASK,
    INVERSE_MASK,
    RelationSet,
    BaseRelation,
    compose_mask,
    is_convex_mask,
)
from .errors import AnnotationParseError, InconsistencyError, NonConvexError

EQUALS_MASK = BaseRelation.e.bit


def _key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a < b else (b, a)


class IntervalGraph:
    """Events linked by convex Allen relation sets.

    At most one edge is stored per unordered pair, keyed by the sorted pair;
    absence of an edge means the universal relation.  Instances are treated
    as immutable: every transformation returns a new graph.
    """

    __slots__ = ("nodes", "_edges", "annotated", "saturated")

    def __init__(
        self,
        nodes: Iterable[str] = (),
        edges: Mapping[tuple[str, str], RelationSet | int] | None = None,
        annotated: Iterable[tuple[str, str]] | None = None,
        saturated: bool = False,
    ):
        node_set = set(nodes)
        stored: dict[tuple[str, str], int] = {}
        for (a, b), rel in (edges or {}).items():
            mask = rel.mask if isinstance(rel, RelationSet) else int(rel)
            if a == b:
                raise ValueError(f"self-loop on {a!r}")
            if mask == 0:
                raise InconsistencyError(f"empty relation between {a} and {b}")
            if not is_convex_mask(mask):
                raise NonConvexError(f"non-convex relation {RelationSet(mask)} between {a} and {b}")
            key = _key(a, b)
            if key != (a, b):
                mask = INVERSE_MASK[mask]
            if key in stored and stored[key] != mask:
                raise ValueError(f"conflicting relations given for pair {key}")
            node_set.update(key)
            if mask != ALL_MASK:
                stored[key] = mask
        self.nodes: tuple[str, ...] = tuple(sorted(node_set))
        self._edges = stored
        if annotated is None:
            self.annotated = frozenset(stored)
        else:
            self.annotated = frozenset(_key(a, b) for a, b in annotated) & frozenset(stored)
        self.saturated = saturated

    # -- access ---------------------------------------------------------
    def relation(self, a: str, b: str) -> RelationSet:
        return RelationSet(self.mask(a, b))

    def mask(self, a: str, b: str) -> int:
        if a == b:
            return EQUALS_MASK
        if a < b:
            return self._edges.get((a, b), ALL_MASK)
        return INVERSE_MASK[self._edges.get((b, a), ALL_MASK)]

    def edges(self) -> Iterator[tuple[str, str, RelationSet]]:
        for (a, b) in sorted(self._edges):
            yield a, b, RelationSet(self._edges[(a, b)])

    def edge_masks(self) -> dict[tuple[str, str], int]:
        return dict(self._edges)

    def has_edge(self, a: str, b: str) -> bool:
        return _key(a, b) in self._edges

    def __len__(self) -> int:
        return len(self._edges)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntervalGraph)
            and self.nodes == other.nodes
            and self._edges == other._edges
        )

    def __hash__(self):
        return hash((self.nodes, frozenset(self._edges.items())))

    def __repr__(self) -> str:
        return f"IntervalGraph({len(self.nodes)} nodes, {len(self._edges)} edges, saturated={self.saturated})"

    # -- derivation -----------------------------------------------------
    def with_nodes(self, extra: Iterable[str]) -> IntervalGraph:
        return IntervalGraph(
            set(self.nodes) | set(extra), self._edges, self.annotated, self.saturated
        )

    def restricted_to(self, pairs: Iterable[tuple[str, str]]) -> IntervalGraph:
        """Keep only the given edges (all nodes retained, result unsaturated)."""
        keep = {_key(a, b) for a, b in pairs}
        edges = {k: m for k, m in self._edges.items() if k in keep}
        return IntervalGraph(self.nodes, edges, annotated=edges.keys())

    def replace_edge(self, a: str, b: str, rel: RelationSet) -> IntervalGraph:
        edges = dict(self._edges)
        key = _key(a, b)
        edges[key] = rel.mask if key == (a, b) else INVERSE_MASK[rel.mask]
        if edges[key] == ALL_MASK:
            del edges[key]
        return IntervalGraph(self.nodes, edges, annotated=set(self.annotated) | {key})

    @property
    def annotated_graph(self) -> IntervalGraph:
        edges = {k: self._edges[k] for k in self.annotated}
        return IntervalGraph(self.nodes, edges)


def saturate(g: IntervalGraph) -> IntervalGraph:
    """Path-consistency closure; raises :class:`InconsistencyError` on an empty edge."""
    if g.saturated:
        return g
    nodes = g.nodes
    n = len(nodes)
    idx = {name: i for i, name in enumerate(nodes)}
    R = [[ALL_MASK] * n for _ in range(n)]
    for i in range(n):
        R[i][i] = EQUALS_MASK
    queue: deque[tuple[int, int]] = deque()
    queued: set[tuple[int, int]] = set()
    for (a, b), m in g._edges.items():
        i, j = idx[a], idx[b]
        R[i][j] = m
        R[j][i] = INVERSE_MASK[m]
        queue.append((i, j))
        queued.add((i, j))

    inv = INVERSE_MASK
    while queue:
        i, j = queue.popleft()
        queued.discard((i, j))
        Ri, Rj = R[i], R[j]
        rij = Ri[j]
        for k in range(n):
            if k == i or k == j:
                continue
            # (i, k) through j
            rjk = Rj[k]
            if rjk != ALL_MASK:
                c = compose_mask(rij, rjk)
                old = Ri[k]
                new = old & c
                if new != old:
                    if not new:
                        raise InconsistencyError(
                            f"no relation left between {nodes[i]} and {nodes[k]} via {nodes[j]}",
                            triple=(nodes[i], nodes[j], nodes[k]),
                        )
                    Ri[k] = new
                    R[k][i] = inv[new]
                    key = (i, k) if i < k else (k, i)
                    if key not in queued:
                        queued.add(key)
                        queue.append(key)
            # (k, j) through i
            Rk = R[k]
            rki = Rk[i]
            if rki != ALL_MASK:
                c = compose_mask(rki, rij)
                old = Rk[j]
                new = old & c
                if new != old:
                    if not new:
                        raise InconsistencyError(
                            f"no relation left between {nodes[k]} and {nodes[j]} via {nodes[i]}",
                            triple=(nodes[k], nodes[i], nodes[j]),
                        )
                    Rk[j] = new
                    Rj[k] = inv[new]
                    key = (k, j) if k < j else (j, k)
                    if key not in queued:
                        queued.add(key)
                        queue.append(key)

    edges = {}
    for i in range(n):
        Ri = R[i]
        for j in range(i + 1, n):
            if Ri[j] != ALL_MASK:
                edges[(nodes[i], nodes[j])] = Ri[j]
    return IntervalGraph(nodes, edges, annotated=g.annotated, saturated=True)


def saturate_loop(g: IntervalGraph, order: Sequence[str] | None = None) -> IntervalGraph:
    """Plain triple loop until nothing changes, visiting nodes in ``order``.

    Quadratically slower than :func:`saturate`; kept as the reference
    semantics the queue-based version is tested against.
    """
    nodes = list(order) if order is not None else list(g.nodes)
    if sorted(nodes) != list(g.nodes):
        raise ValueError("order must be a permutation of the graph's nodes")
    R = {(a, b): g.mask(a, b) for a in nodes for b in nodes if a != b}
    changed = True
    while changed:
        changed = False
        for i in nodes:
            for j in nodes:
                if i == j:
                    continue
                for k in nodes:
                    if k in (i, j):
                        continue
                    rik, rkj = R[(i, k)], R[(k, j)]
                    if rik == ALL_MASK or rkj == ALL_MASK:
                        continue
                    new = compose_mask(rik, rkj) & R[(i, j)]
                    if not new:
                        raise InconsistencyError(
                            f"no relation left between {i} and {j} via {k}", triple=(i, k, j)
                        )
                    if new != R[(i, j)]:
                        R[(i, j)] = new
                        R[(j, i)] = INVERSE_MASK[new]
                        changed = True
    edges = {(a, b): m for (a, b), m in R.items() if a < b and m != ALL_MASK}
    return IntervalGraph(g.nodes, edges, annotated=g.annotated, saturated=True)


def is_consistent(g: IntervalGraph) -> bool:
    try:
        saturate(g)
    except InconsistencyError:
        return False
    return True


# -- native annotation format ---------------------------------------------


def parse_annotation(text: str) -> IntervalGraph:
    """Parse the line-oriented annotation format.

    ``events: A B C`` declares nodes, ``A b,m B`` adds an edge, ``#`` starts
    a comment.
    """
    nodes: set[str] = set()
    edges: dict[tuple[str, str], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("events:"):
            nodes.update(line[len("events:"):].split())
            continue
        parts = line.split()
        if len(parts) != 3:
            raise AnnotationParseError(f"expected 'idA rel idB', got {raw.strip()!r}", line=lineno)
        a, rel_text, b = parts
        try:
            rel = RelationSet.parse(rel_text)
        except ValueError as exc:
            raise AnnotationParseError(str(exc), line=lineno) from None
        if a == b:
            raise AnnotationParseError(f"relation from {a!r} to itself", line=lineno)
        key = _key(a, b)
        mask = rel.mask if key == (a, b) else INVERSE_MASK[rel.mask]
        if key in edges and edges[key] != mask:
            raise AnnotationParseError(f"contradictory duplicate relation for {a} and {b}", line=lineno)
        edges[key] = mask
        nodes.update(key)
    try:
        return IntervalGraph(nodes, edges)
    except NonConvexError as exc:
        raise AnnotationParseError(str(exc)) from None


def serialize_annotation(g: IntervalGraph) -> str:
    lines = []
    if g.nodes:
        lines.append("events: " + " ".join(g.nodes))
    for a, b, rel in g.edges():
        lines.append(f"{a} {rel} {b}")
    return "\n".join(lines) + "\n"


def read_annotation(path: str | Path) -> IntervalGraph:
    return parse_annotation(Path(path).read_text(encoding="utf-8"))
