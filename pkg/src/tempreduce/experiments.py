"""Degradation and disturbance experiments and their regression summaries."""

from __future__ import annotations

import csv
import io
import math
import random
import statistics
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import BASE_RELATIONS, RelationSet
from .closure import IntervalGraph, is_consistent
from .metrics import PreparedGraph, core_relations, evaluate_prepared, prepare

RECALL_METRICS = ("TR", "strict_R", "relaxed_R", "core_R")
PRECISION_METRICS = ("TP", "strict_P", "relaxed_P")
DEFAULT_FRACTIONS = tuple(i / 10 for i in range(11))
DISTURB_FRACTIONS = (0.0, 0.1, 0.2, 0.3, 0.4)
MAX_DISTURB = 0.4


def _count(fraction: float, m: int) -> int:
    # guard against 0.3 * 10 == 3.0000000000000004
    return min(m, math.ceil(fraction * m - 1e-9))


def degrade(g: IntervalGraph, keep_fraction: float, seed) -> IntervalGraph:
    """Keep a random subset of the annotated edges."""
    if not 0 <= keep_fraction <= 1:
        raise ValueError("keep_fraction must lie in [0, 1]")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    pool = sorted(g.annotated)
    kept = rng.sample(pool, _count(keep_fraction, len(pool)))
    return g.restricted_to(kept)


def disturb_counted(
    g: IntervalGraph, change_fraction: float, seed, max_retries: int = 10
) -> tuple[IntervalGraph, int]:
    """Switch annotated edges to other base relations, keeping ``g`` consistent.

    Returns the new graph and the number of edges given up after
    ``max_retries`` inconsistent draws.
    """
    if not 0 <= change_fraction <= 1:
        raise ValueError("change_fraction must lie in [0, 1]")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    pool = sorted(g.annotated)
    for a, b in pool:
        if len(g.relation(a, b)) != 1:
            raise ValueError(f"edge {a}-{b} is not a single base relation")
    current = g.annotated_graph
    skipped = 0
    for a, b in rng.sample(pool, _count(change_fraction, len(pool))):
        old = next(iter(current.relation(a, b)))
        choices = [r for r in BASE_RELATIONS if r != old]
        for _ in range(max_retries):
            trial = current.replace_edge(a, b, RelationSet.of(rng.choice(choices)))
            if is_consistent(trial):
                current = trial
                break
        else:
            skipped += 1
    return current, skipped


def disturb(g: IntervalGraph, change_fraction: float, seed, max_retries: int = 10) -> IntervalGraph:
    return disturb_counted(g, change_fraction, seed, max_retries)[0]


@dataclass(frozen=True)
class CurvePoint:
    fraction: float
    metric: str
    mean: float
    stddev: float
    trials: int


def _trial_rng(seed, fraction_index: int, trial: int) -> random.Random:
    return random.Random(f"{seed}:{fraction_index}:{trial}")


def _summarise(fractions, metrics, samples) -> list[CurvePoint]:
    out = []
    for fi, f in enumerate(fractions):
        for name in metrics:
            vals = samples[fi][name]
            out.append(CurvePoint(f, name, statistics.fmean(vals), statistics.pstdev(vals), len(vals)))
    return out


def _check_metrics(metrics, allowed):
    bad = [m for m in metrics if m not in allowed]
    if bad:
        raise ValueError(f"unknown metric(s) {', '.join(bad)}; choose from {', '.join(allowed)}")


def _prepared_reference(reference: IntervalGraph) -> tuple[PreparedGraph, dict]:
    kp = prepare(reference, "reference")
    return kp, core_relations(kp.saturated)


def degradation_curve(
    reference: IntervalGraph,
    fractions: Sequence[float] = DEFAULT_FRACTIONS,
    trials: int = 20,
    metrics: Sequence[str] = RECALL_METRICS,
    seed=0,
    mode: str = "relaxed",
) -> list[CurvePoint]:
    """Recall of randomly thinned copies of ``reference`` against itself."""
    _check_metrics(metrics, RECALL_METRICS + PRECISION_METRICS)
    if trials < 1:
        raise ValueError("trials must be at least 1")
    kp, core = _prepared_reference(reference)
    samples = []
    for fi, f in enumerate(fractions):
        per = {m: [] for m in metrics}
        for t in range(trials):
            cand = degrade(reference, f, _trial_rng(seed, fi, t))
            rep = evaluate_prepared(kp, prepare(cand, "candidate"), mode, k_core=core)
            for m in metrics:
                per[m].append(getattr(rep, m))
        samples.append(per)
    return _summarise(fractions, metrics, samples)


def disturbance_curve(
    reference: IntervalGraph,
    fractions: Sequence[float] = DISTURB_FRACTIONS,
    trials: int = 20,
    metrics: Sequence[str] = PRECISION_METRICS,
    seed=0,
    max_retries: int = 10,
    mode: str = "relaxed",
) -> list[CurvePoint]:
    """Precision of randomly perturbed copies of ``reference``."""
    _check_metrics(metrics, RECALL_METRICS + PRECISION_METRICS)
    if any(not 0 <= f <= MAX_DISTURB for f in fractions):
        raise ValueError(f"disturbance fractions must lie in [0, {MAX_DISTURB}]")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    kp, core = _prepared_reference(reference)
    samples = []
    for fi, f in enumerate(fractions):
        per = {m: [] for m in metrics}
        for t in range(trials):
            cand = disturb(reference, f, _trial_rng(seed, fi, t), max_retries)
            rep = evaluate_prepared(kp, prepare(cand, "candidate"), mode, k_core=core)
            for m in metrics:
                per[m].append(getattr(rep, m))
        samples.append(per)
    return _summarise(fractions, metrics, samples)


def curve_csv(points: Sequence[CurvePoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["fraction", "metric", "mean", "stddev", "trials"])
    for p in points:
        w.writerow([f"{p.fraction:g}", p.metric, f"{p.mean:.6f}", f"{p.stddev:.6f}", p.trials])
    return buf.getvalue()


def curve_series(points: Sequence[CurvePoint], metric: str) -> list[tuple[float, float]]:
    return [(p.fraction, p.mean) for p in points if p.metric == metric]


@dataclass(frozen=True)
class FitResult:
    a: float
    b: float
    c: float
    r2: float

    @property
    def coefficients(self) -> tuple[float, float, float]:
        return self.a, self.b, self.c


def fit_quadratic(points: Sequence[tuple[float, float]], degree: int = 2) -> FitResult:
    """Least-squares ``y = a x^2 + b x + c``; with ``degree=1``, ``a`` is 0."""
    if degree not in (1, 2):
        raise ValueError("degree must be 1 or 2")
    xs = np.array([p[0] for p in points], dtype=float)
    ys = np.array([p[1] for p in points], dtype=float)
    need = degree + 1
    if len(xs) < need or len(set(xs.tolist())) < need:
        raise ValueError(f"a degree-{degree} fit needs at least {need} distinct x values")
    A = np.vander(xs, need)
    coef, *_ = np.linalg.lstsq(A, ys, rcond=None)
    resid = ys - A @ coef
    ss_res = float(resid @ resid)
    ss_tot = float(((ys - ys.mean()) ** 2).sum())
    if ss_tot == 0:
        r2 = 1.0 if ss_res < 1e-12 else 0.0
    else:
        r2 = 1.0 - ss_res / ss_tot
    if degree == 1:
        return FitResult(0.0, float(coef[0]), float(coef[1]), r2)
    return FitResult(float(coef[0]), float(coef[1]), float(coef[2]), r2)
