import random

import pytest

from helpers import random_consistent_graph
from tempreduce.closure import is_consistent, parse_annotation
from tempreduce.experiments import (
    CurvePoint,
    curve_csv,
    curve_series,
    degradation_curve,
    degrade,
    disturb,
    disturb_counted,
    disturbance_curve,
    fit_quadratic,
)
from tempreduce.synthgen import GenConfig, generate

CHAIN = parse_annotation("A b B\nB b C\nC b D\nD b E\n")


def test_degrade_extremes():
    assert degrade(CHAIN, 1, 0) == CHAIN
    empty = degrade(CHAIN, 0, 0)
    assert len(empty) == 0 and empty.nodes == CHAIN.nodes


def test_degrade_count_and_determinism():
    g = degrade(CHAIN, 0.5, 3)
    assert len(g) == 2
    assert degrade(CHAIN, 0.5, 3) == g
    assert len(degrade(CHAIN, 0.3, 1)) == 2
    with pytest.raises(ValueError):
        degrade(CHAIN, 1.5, 0)


def test_disturb_zero_is_identity():
    assert disturb(CHAIN, 0, 1) == CHAIN


def test_disturb_two_events():
    g = parse_annotation("A b B\n")
    for seed in range(20):
        h = disturb(g, 1, seed)
        assert h.relation("A", "B") != g.relation("A", "B")
        assert len(h.relation("A", "B")) == 1


def test_disturb_keeps_consistency_on_rigid_graph():
    rigid = generate(GenConfig(6, 30, 0, 2))
    for seed in range(10):
        h, skipped = disturb_counted(rigid, 0.4, seed, max_retries=3)
        assert is_consistent(h)
        assert skipped >= 0


def test_disturb_requires_base_relations():
    with pytest.raises(ValueError):
        disturb(parse_annotation("A b,m B\n"), 0.5, 0)


def test_degradation_curve_endpoints():
    ref = generate(GenConfig(8, 50, 2, 1))
    pts = degradation_curve(ref, [0.0, 1.0], trials=3, seed=4)
    by = {(p.fraction, p.metric): p for p in pts}
    for m in ("TR", "strict_R", "relaxed_R"):
        assert by[(1.0, m)].mean == pytest.approx(1)
    assert by[(0.0, "TR")].mean == 0
    assert by[(0.0, "strict_R")].mean == 0
    assert by[(0.0, "relaxed_R")].mean > 0
    assert all(p.trials == 3 for p in pts)


def test_degradation_rejects_inconsistent_reference():
    from tempreduce.errors import InconsistencyError

    bad = parse_annotation("A b B\nB b C\nC b A\n")
    with pytest.raises(InconsistencyError):
        degradation_curve(bad, [1.0], trials=1)


def test_disturbance_curve():
    rng = random.Random(2)
    ref = random_consistent_graph(rng, 8, density=0.5, vague=0)
    pts = disturbance_curve(ref, [0.0, 0.2, 0.4], trials=4, seed=1)
    zero = [p for p in pts if p.fraction == 0]
    assert all(p.mean == pytest.approx(1) for p in zero)
    with pytest.raises(ValueError):
        disturbance_curve(ref, [0.5], trials=1)


def test_unknown_metric_rejected():
    with pytest.raises(ValueError):
        degradation_curve(CHAIN, [1.0], trials=1, metrics=["nope"])


def test_curves_are_deterministic():
    ref = generate(GenConfig(6, 40, 2, 8))
    a = curve_csv(degradation_curve(ref, [0.2, 0.6], trials=3, seed=5))
    b = curve_csv(degradation_curve(ref, [0.2, 0.6], trials=3, seed=5))
    assert a == b
    assert a.splitlines()[0] == "fraction,metric,mean,stddev,trials"


def test_curve_series():
    pts = [CurvePoint(0.0, "TR", 0.1, 0, 1), CurvePoint(0.0, "TP", 0.2, 0, 1), CurvePoint(1.0, "TR", 1, 0, 1)]
    assert curve_series(pts, "TR") == [(0.0, 0.1), (1.0, 1)]


def test_fit_line():
    f = fit_quadratic([(x, x) for x in range(5)])
    assert f.coefficients == pytest.approx((0, 1, 0), abs=1e-9)
    assert f.r2 == pytest.approx(1)


def test_fit_parabola():
    f = fit_quadratic([(x, x * x) for x in range(-2, 3)])
    assert f.coefficients == pytest.approx((1, 0, 0), abs=1e-9)


def test_fit_three_points_interpolates():
    # through (0, 1), (1, 0), (2, 3): c = 1, a + b = -1, 4a + 2b = 2 -> a = 2, b = -3
    f = fit_quadratic([(0, 1), (1, 0), (2, 3)])
    assert f.coefficients == pytest.approx((2, -3, 1), abs=1e-9)
    assert f.r2 == pytest.approx(1)


def test_linear_fit_forces_zero_curvature():
    f = fit_quadratic([(0, 0), (1, 1), (2, 4)], degree=1)
    assert f.a == 0 and f.r2 < 1


def test_fit_underdetermined():
    with pytest.raises(ValueError):
        fit_quadratic([(0, 0), (1, 1)])
    with pytest.raises(ValueError):
        fit_quadratic([(0, 0), (0, 1), (1, 1)])
