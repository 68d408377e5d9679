"""Evaluation measures for temporal graphs.

Point-based measures work on merged endpoint graphs and their transitive
reductions; the strict, relaxed and core baselines work on saturated
interval graphs.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Iterable, Iterator

from .algebra import ALL_MASK, EQ, GE, GT, LE, LT, PointRelation, compose_mask
from .closure import IntervalGraph, saturate
from .errors import DegenerateCandidateError, DegenerateReferenceError, InconsistencyError
from .pointgraph import (
    Endpoint,
    MergedPointGraph,
    ReducedGraph,
    merge_equalities,
    to_point_graph,
    transitive_reduction,
)

_LABELS = (EQ, LT, LE, GT, GE)
_LABEL_NAMES = {EQ: "=", LT: "<", LE: "<=", GT: ">", GE: ">="}


class WeightTable:
    """Symmetric credit table over the labels ``= < <= > >=``."""

    def __init__(self, name: str, weights: dict[tuple[PointRelation, PointRelation], float]):
        self.name = name
        table = {}
        for a in _LABELS:
            for b in _LABELS:
                table[(a, b)] = 1.0 if a == b else 0.0
        for (a, b), v in weights.items():
            table[(a, b)] = table[(b, a)] = float(v)
        self._table = table

    def __call__(self, reference: PointRelation, candidate: PointRelation | None) -> float:
        if candidate is None:
            return 0.0
        return self._table[(reference, candidate)]

    def __repr__(self) -> str:
        return f"WeightTable({self.name})"


STRICT = WeightTable("strict", {})
RELAXED = WeightTable(
    "relaxed",
    {(EQ, LE): 0.5, (EQ, GE): 0.5, (LT, LE): 0.5, (LE, GE): 0.5, (GT, GE): 0.5},
)
MODES = {"strict": STRICT, "relaxed": RELAXED}


def value(g: MergedPointGraph | ReducedGraph) -> int:
    """Merged equalities plus non-trivial relations."""
    if isinstance(g, ReducedGraph):
        base, relations = g.base, len(g.major_nontrivial)
    else:
        base, relations = g, len(g.nontrivial_edges())
    return 2 * base.event_count - len(base.nodes) + relations


@dataclass(frozen=True)
class Alignment:
    """Node correspondence between a reference and a candidate merged graph."""

    mapping: dict[int, tuple[int, ...]]
    splits: float
    conflations: float


def _fragment_cost(
    source: MergedPointGraph, target: MergedPointGraph, w: WeightTable
) -> tuple[dict[int, tuple[int, ...]], float]:
    """Cost of cutting each source node into the target nodes it meets.

    Fragments are joined along a minimum spanning tree whose edge cost is
    ``1 - w(=, label)`` with the label read in ``target``; a ``<=`` link
    under the relaxed table therefore costs half a unit.
    """
    mapping: dict[int, tuple[int, ...]] = {}
    total = 0.0
    for i, node in enumerate(source.nodes):
        frags = tuple(sorted({target.index[ep] for ep in node}))
        mapping[i] = frags
        if len(frags) < 2:
            continue
        in_tree = {frags[0]}
        best = {f: 1.0 - w(EQ, target.label(frags[0], f)) for f in frags[1:]}
        while best:
            f = min(best, key=lambda x: (best[x], x))
            total += best.pop(f)
            in_tree.add(f)
            for other in best:
                best[other] = min(best[other], 1.0 - w(EQ, target.label(f, other)))
    return mapping, total


def align(k: MergedPointGraph, g: MergedPointGraph, w: WeightTable) -> Alignment:
    if set(k.index) != set(g.index):
        raise ValueError("graphs must cover the same endpoints; add the missing events first")
    mapping, splits = _fragment_cost(k, g, w)
    _, conflations = _fragment_cost(g, k, w)
    return Alignment(mapping, splits, conflations)


Edge = tuple[frozenset[Endpoint], frozenset[Endpoint], PointRelation]


def match_credit(edge: Edge, g: MergedPointGraph | ReducedGraph, w: WeightTable) -> float:
    """Best credit over candidate node pairs meeting both ends of ``edge``."""
    x, y, rel = edge
    base = g.base if isinstance(g, ReducedGraph) else g
    xs = {base.index[ep] for ep in x}
    ys = {base.index[ep] for ep in y}
    best = 0.0
    for i in xs:
        for j in ys:
            best = max(best, w(rel, g.label(i, j)))
            if best == 1.0:
                return best
    return best


def _edges_of(g: MergedPointGraph, edges: dict[tuple[int, int], PointRelation]) -> Iterator[Edge]:
    for (i, j), rel in sorted(edges.items()):
        yield g.nodes[i], g.nodes[j], rel


def count_misses(k_red: ReducedGraph, g_sat: MergedPointGraph, w: WeightTable) -> float:
    return sum(1.0 - match_credit(e, g_sat, w) for e in _edges_of(k_red.base, k_red.major_nontrivial))


def count_errors(g_red: ReducedGraph, k_sat: MergedPointGraph, w: WeightTable) -> float:
    return sum(1.0 - match_credit(e, k_sat, w) for e in _edges_of(g_red.base, g_red.major_nontrivial))


def major_recall(k_red: ReducedGraph, g_sat: MergedPointGraph, a: Alignment, w: WeightTable) -> float:
    v = value(k_red)
    if v == 0:
        raise DegenerateReferenceError("reference carries no temporal information")
    misses = count_misses(k_red, g_sat, w)
    return max(0.0, (v - (a.splits + misses)) / v)


def minor_recall(k_red: ReducedGraph, g_red: ReducedGraph, w: WeightTable) -> float:
    if not k_red.minor:
        return 0.0
    found = sum(match_credit(e, g_red, w) for e in _edges_of(k_red.base, k_red.minor))
    return found / len(k_red.minor)


def full_recall(major: float, minor: float, v_k_maj: float) -> float:
    if v_k_maj <= 0:
        raise DegenerateReferenceError("reference carries no temporal information")
    return major + minor / v_k_maj


def precision(g_red: ReducedGraph, k_sat: MergedPointGraph, a: Alignment, w: WeightTable) -> float:
    v = value(g_red)
    if v == 0:
        raise DegenerateCandidateError("candidate carries no temporal information")
    errors = count_errors(g_red, k_sat, w)
    return max(0.0, (v - (a.conflations + errors)) / v)


# -- interval-level baselines ----------------------------------------------


@dataclass(frozen=True)
class PRScore:
    precision: float
    recall: float
    degenerate: bool = False

    def __iter__(self):
        yield self.precision
        yield self.recall


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


def strict_pr(k_sat: IntervalGraph, g_sat: IntervalGraph) -> PRScore:
    """Share of stored edges whose relation set is matched exactly."""
    k_edges, g_edges = k_sat.edge_masks(), g_sat.edge_masks()
    matched = sum(1 for key, m in k_edges.items() if g_edges.get(key) == m)
    p = matched / len(g_edges) if g_edges else 0.0
    r = matched / len(k_edges) if k_edges else 0.0
    return PRScore(p, r, degenerate=not k_edges or not g_edges)


def relaxed_pr(k_sat: IntervalGraph, g_sat: IntervalGraph) -> PRScore:
    """Per-edge overlap scores; a missing edge stands for the universal relation.

    Per pair, precision divides the overlap by the reference set size and
    recall divides it by the candidate set size.
    """
    k_edges, g_edges = k_sat.edge_masks(), g_sat.edge_masks()
    p_sum = 0.0
    for key, s in g_edges.items():
        kk = k_edges.get(key, ALL_MASK)
        p_sum += _popcount(s & kk) / _popcount(kk)
    r_sum = 0.0
    for key, kk in k_edges.items():
        s = g_edges.get(key, ALL_MASK)
        r_sum += _popcount(s & kk) / _popcount(s)
    p = p_sum / len(g_edges) if g_edges else 0.0
    r = r_sum / len(k_edges) if k_edges else 0.0
    return PRScore(p, r, degenerate=not k_edges or not g_edges)


def core_relations(g_sat: IntervalGraph) -> dict[tuple[str, str], int]:
    """Edges not recoverable by intersecting every two-step derivation."""
    if not g_sat.saturated:
        raise ValueError("core_relations expects a saturated graph")
    core = {}
    nodes = g_sat.nodes
    for (a, b), m in g_sat.edge_masks().items():
        derived = ALL_MASK
        for c in nodes:
            if c == a or c == b:
                continue
            rac, rcb = g_sat.mask(a, c), g_sat.mask(c, b)
            if rac == ALL_MASK or rcb == ALL_MASK:
                continue
            derived &= compose_mask(rac, rcb)
            if derived == m:
                break
        if derived != m:
            core[(a, b)] = m
    return core


def core_recall(k_core: dict[tuple[str, str], int], g_sat: IntervalGraph) -> float:
    if not k_core:
        return 0.0
    g_edges = g_sat.edge_masks()
    return sum(1 for key, m in k_core.items() if g_edges.get(key) == m) / len(k_core)


def vagueness(g: IntervalGraph) -> float:
    edges = g.edge_masks()
    if not edges:
        return 0.0
    return sum(1.0 - 1.0 / _popcount(m) for m in edges.values()) / len(edges)


# -- full evaluation ---------------------------------------------------------


@dataclass
class EvalReport:
    mode: str
    v_K_maj: float
    v_G_maj: float
    splits: float
    conflations: float
    misses: float
    errors: float
    R_t: float
    r_t: float
    TR: float
    TP: float
    strict_P: float
    strict_R: float
    relaxed_P: float
    relaxed_R: float
    core_R: float
    vagueness_K: float
    vagueness_G: float
    consistent_K: bool = True
    consistent_G: bool = True
    degenerate: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {}
        for key, val in asdict(self).items():
            if isinstance(val, float):
                val = round(val, 6)
            out[key] = val
        return out

    def metric_items(self) -> Iterator[tuple[str, float]]:
        for key, val in asdict(self).items():
            if isinstance(val, (int, float)) and not isinstance(val, bool):
                yield key, val


@dataclass(frozen=True)
class PreparedGraph:
    """One side of a comparison after saturation, merging and reduction."""

    interval: IntervalGraph
    saturated: IntervalGraph
    merged: MergedPointGraph
    reduced: ReducedGraph


def prepare(g: IntervalGraph, side: str = "graph") -> PreparedGraph:
    try:
        sat = saturate(g)
        merged = merge_equalities(to_point_graph(sat))
    except InconsistencyError as exc:
        exc.side = side
        raise
    return PreparedGraph(g, sat, merged, transitive_reduction(merged))


def evaluate(k: IntervalGraph, g: IntervalGraph, mode: str = "relaxed") -> EvalReport:
    """Compare candidate ``g`` against reference ``k``."""
    w = MODES[mode]
    universe = set(k.nodes) | set(g.nodes)
    kp = prepare(k.with_nodes(universe), "reference")
    gp = prepare(g.with_nodes(universe), "candidate")
    return evaluate_prepared(kp, gp, mode)


def evaluate_prepared(kp: PreparedGraph, gp: PreparedGraph, mode: str = "relaxed", k_core=None) -> EvalReport:
    w = MODES[mode]
    degenerate = []
    a = align(kp.merged, gp.merged, w)
    v_k, v_g = value(kp.reduced), value(gp.reduced)
    misses = count_misses(kp.reduced, gp.merged, w)
    errors = count_errors(gp.reduced, kp.merged, w)
    if v_k > 0:
        r_major = major_recall(kp.reduced, gp.merged, a, w)
        # minor matches only earn full-credit labels, in both modes
        r_minor = minor_recall(kp.reduced, gp.reduced, STRICT)
        tr = full_recall(r_major, r_minor, v_k)
    else:
        r_major = r_minor = tr = 0.0
        degenerate.append("reference")
    if v_g > 0:
        tp = precision(gp.reduced, kp.merged, a, w)
    else:
        tp = 0.0
        degenerate.append("candidate")
    strict = strict_pr(kp.saturated, gp.saturated)
    relaxed = relaxed_pr(kp.saturated, gp.saturated)
    if k_core is None:
        k_core = core_relations(kp.saturated)
    if not k_core:
        degenerate.append("core")
    return EvalReport(
        mode=mode,
        v_K_maj=v_k,
        v_G_maj=v_g,
        splits=a.splits,
        conflations=a.conflations,
        misses=misses,
        errors=errors,
        R_t=r_major,
        r_t=r_minor,
        TR=tr,
        TP=tp,
        strict_P=strict.precision,
        strict_R=strict.recall,
        relaxed_P=relaxed.precision,
        relaxed_R=relaxed.recall,
        core_R=core_recall(k_core, gp.saturated),
        vagueness_K=vagueness(kp.interval),
        vagueness_G=vagueness(gp.interval),
        degenerate=degenerate,
    )


def macro_average(reports: Iterable[EvalReport]) -> dict[str, float]:
    """Unweighted mean of each numeric field over documents."""
    reports = list(reports)
    if not reports:
        return {}
    sums: dict[str, float] = {}
    for rep in reports:
        for key, val in rep.metric_items():
            sums[key] = sums.get(key, 0.0) + val
    return {key: round(total / len(reports), 6) for key, total in sums.items()}
