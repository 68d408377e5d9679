"""Random interval graphs with uncertain endpoints."""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass

from .algebra import EQ, GT, LT, PointRelation, endpoints_to_mask
from .closure import IntervalGraph
from .metrics import vagueness


@dataclass(frozen=True)
class GenConfig:
    E: int
    N: int
    I: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.E < 2:
            raise ValueError("need at least two events")
        if self.N < 1:
            raise ValueError("range N must be positive")
        if self.I < 0:
            raise ValueError("indeterminacy I must be nonnegative")
        if self.N <= self.I:
            raise ValueError(f"range N={self.N} leaves no room for intervals longer than I={self.I}")


def window_relation(a: int, b: int, I: int) -> PointRelation:
    """Possible order of two points each free within ``I/2`` of its center.

    The windows are closed real intervals ``[a - I/2, a + I/2]``; working with
    the full width keeps every comparison in integers.
    """
    rel = PointRelation(0)
    if a - b < I:
        rel |= LT
    if abs(a - b) <= I:
        rel |= EQ
    if b - a < I:
        rel |= GT
    return rel


def sample_intervals(c: GenConfig) -> list[tuple[int, int]]:
    """Draw ``(b, e)`` per event in index order, ``b`` first."""
    rng = random.Random(c.seed)
    out = []
    for _ in range(c.E):
        b = rng.randint(0, c.N - c.I - 1)
        e = rng.randint(b + c.I + 1, c.N)
        out.append((b, e))
    return out


def event_names(n: int) -> list[str]:
    return [f"E{i + 1}" for i in range(n)]


def graph_from_intervals(intervals: list[tuple[int, int]], I: int) -> IntervalGraph:
    names = event_names(len(intervals))
    edges = {}
    for i, (bi, ei) in enumerate(intervals):
        for j in range(i + 1, len(intervals)):
            bj, ej = intervals[j]
            quad = (
                window_relation(bi, bj, I),
                window_relation(ei, ej, I),
                window_relation(bi, ej, I),
                window_relation(ei, bj, I),
            )
            edges[(names[i], names[j])] = endpoints_to_mask(quad)
    # every relation is realised by some placement of all events at once,
    # so the graph is already path-consistent
    return IntervalGraph(names, edges, saturated=True)


def generate(c: GenConfig) -> IntervalGraph:
    return graph_from_intervals(sample_intervals(c), c.I)


def sidecar(c: GenConfig, g: IntervalGraph) -> str:
    return json.dumps({"config": asdict(c), "vagueness": round(vagueness(g), 6)}, indent=2) + "\n"
