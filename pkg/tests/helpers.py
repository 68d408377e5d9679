"""Random graph builders and brute-force oracles shared by the tests."""

from __future__ import annotations

import itertools
import random
from pathlib import Path

from tempreduce.algebra import ALL_MASK, BASE_RELATIONS, enumerate_convex
from tempreduce.closure import IntervalGraph, read_annotation

FIXTURES = Path(__file__).parent / "fixtures"

_CONVEX = [s.mask for s in enumerate_convex()]


def fixture(name: str) -> IntervalGraph:
    return read_annotation(FIXTURES / f"{name}.txt")


def classify(ib, ie, jb, je) -> str:
    """Allen relation of [ib, ie] to [jb, je], written out case by case."""
    if ie < jb:
        return "b"
    if je < ib:
        return "bi"
    if ie == jb:
        return "m"
    if je == ib:
        return "mi"
    if ib == jb and ie == je:
        return "e"
    if ib == jb:
        return "s" if ie < je else "si"
    if ie == je:
        return "f" if ib > jb else "fi"
    if jb < ib and ie < je:
        return "d"
    if ib < jb and je < ie:
        return "di"
    return "o" if ib < jb else "oi"


def random_intervals(rng: random.Random, n: int, span: int = 12) -> list[tuple[int, int]]:
    out = []
    for _ in range(n):
        b = rng.randrange(span)
        out.append((b, rng.randrange(b + 1, span + 1)))
    return out


def names(n: int) -> list[str]:
    return [chr(ord("A") + i) for i in range(n)]


def widen(rng: random.Random, mask: int) -> int:
    """A random convex superset of ``mask``."""
    supersets = [m for m in _CONVEX if m & mask == mask]
    return rng.choice(supersets)


def random_consistent_graph(
    rng: random.Random, n: int, density: float = 0.6, vague: float = 0.3, span: int = 12
) -> IntervalGraph:
    """Relations read off random intervals, some dropped, some widened.

    Consistency holds by construction since the intervals are a model.
    """
    iv = random_intervals(rng, n, span)
    ns = names(n)
    edges = {}
    for i, j in itertools.combinations(range(n), 2):
        if rng.random() > density:
            continue
        rel = classify(*iv[i], *iv[j])
        mask = next(r.bit for r in BASE_RELATIONS if r.value == rel)
        if rng.random() < vague:
            mask = widen(rng, mask)
        if mask != ALL_MASK:
            edges[(ns[i], ns[j])] = mask
    return IntervalGraph(ns, edges)


def random_convex_graph(rng: random.Random, n: int, density: float = 0.5) -> IntervalGraph:
    """Arbitrary convex labels; may well be inconsistent."""
    ns = names(n)
    edges = {}
    for i, j in itertools.combinations(range(n), 2):
        if rng.random() < density:
            m = rng.choice(_CONVEX)
            if m != ALL_MASK:
                edges[(ns[i], ns[j])] = m
    return IntervalGraph(ns, edges)


def brute_force_realizable(intervals, I: int) -> dict[tuple[int, int], set[str]]:
    """Relations reachable by placing every endpoint inside its window.

    Works on a doubled grid so half-width windows have integer bounds.
    """
    out = {}
    for i, j in itertools.combinations(range(len(intervals)), 2):
        (bi, ei), (bj, ej) = intervals[i], intervals[j]
        rels = set()
        win = lambda c: range(2 * c - I, 2 * c + I + 1)
        for pb in win(bi):
            for pe in win(ei):
                if pe <= pb:
                    continue
                for qb in win(bj):
                    for qe in win(ej):
                        if qe > qb:
                            rels.add(classify(pb, pe, qb, qe))
        out[(i, j)] = rels
    return out


def reachability(n: int, edges) -> set[tuple[int, int]]:
    """All (a, b) with a path from a to b, by breadth-first search."""
    adj = {i: [] for i in range(n)}
    for a, b in edges:
        adj[a].append(b)
    out = set()
    for start in range(n):
        seen, todo = set(), list(adj[start])
        while todo:
            v = todo.pop()
            if v not in seen:
                seen.add(v)
                todo.extend(adj[v])
        out.update((start, v) for v in seen)
    return out


def labelled_reachability(n: int, edges: dict) -> dict[tuple[int, int], str]:
    """Pairs joined by a path, tagged "<" when some path crosses a strict edge.

    Searches over (node, crossed-a-strict-edge) states.
    """
    adj = {i: [] for i in range(n)}
    for (a, b), rel in edges.items():
        adj[a].append((b, int(rel) == 1))
    out = {}
    for start in range(n):
        seen = set()
        todo = [(b, s) for b, s in adj[start]]
        while todo:
            v, s = todo.pop()
            if (v, s) in seen:
                continue
            seen.add((v, s))
            todo.extend((w, s or t) for w, t in adj[v])
        for v, s in seen:
            if s:
                out[(start, v)] = "<"
            else:
                out.setdefault((start, v), "<=")
    return out


def brute_force_reduction(n: int, edges: dict) -> set[tuple[int, int]]:
    """Drop edges one at a time while the labelled reachability is unchanged.

    On an acyclic graph the minimum equivalent graph is unique, so greedy
    deletion in any order reaches it.
    """
    kept = dict(edges)
    target = labelled_reachability(n, kept)
    for e in sorted(edges):
        trial = {k: v for k, v in kept.items() if k != e}
        if labelled_reachability(n, trial) == target:
            kept = trial
    return set(kept)
