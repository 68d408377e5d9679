import random

import pytest

from helpers import brute_force_reduction, fixture, random_consistent_graph, reachability
from tempreduce.algebra import LE, LT
from tempreduce.closure import parse_annotation, saturate
from tempreduce.errors import InconsistencyError
from tempreduce.pointgraph import (
    Endpoint,
    MergedPointGraph,
    Side,
    close_point_edges,
    major_minor,
    merge_equalities,
    merged_from_interval_graph,
    serialize_point_graph,
    to_point_graph,
    transitive_reduction,
)


def reduced(name):
    return transitive_reduction(merged_from_interval_graph(fixture(name)))


def major_lines(red):
    text = serialize_point_graph(red)
    return sorted(line for line in text.splitlines() if " " in line)


def test_endpoint_names():
    assert str(Endpoint("A", Side.BEGIN)) == "A1"
    assert str(Endpoint("A", Side.END)) == "A2"


def test_point_graph_requires_saturation():
    with pytest.raises(ValueError):
        to_point_graph(parse_annotation("A b B\n"))


def test_meets_merges_endpoints():
    m = merged_from_interval_graph(parse_annotation("A m B\n"))
    assert m.find(["A2", "B1"]) >= 0
    assert len(m.nodes) == 3


def test_equals_merges_both_ends():
    m = merged_from_interval_graph(parse_annotation("A e B\n"))
    assert len(m.nodes) == 2
    assert m.label(m.find(["A1", "B1"]), m.find(["A2", "B2"])) == LT


def test_k1_reduction():
    red = reduced("k1")
    assert len(red.base.nodes) == 6
    assert major_lines(red) == [
        "{A1,B1,E1} < {A2}",
        "{A2} < {B2,D1,F1}",
        "{B2,D1,F1} < {D2,E2,F2}",
        "{C1} < {C2}",
        "{C2} < {A1,B1,E1}",
    ]
    assert len(red.major_nontrivial) == 2
    assert len(red.minor) == 8


def test_g1_reduction():
    red = reduced("g1")
    assert len(red.base.nodes) == 8
    assert len(red.major_nontrivial) == 5
    assert "{D1,E1,F1} < {E2,F2}" in major_lines(red)


def test_k2_reduction_keeps_weak_edge():
    red = reduced("k2")
    assert len(red.base.nodes) == 7
    assert "{C2} <= {A2}" in major_lines(red)
    assert len(red.major_nontrivial) == 2
    assert len(red.minor) == 10


def test_g2_reduction():
    red = reduced("g2")
    assert len(red.base.nodes) == 10
    assert len(red.major_nontrivial) == 5
    assert "{A1,B1} <= {E1}" in major_lines(red)


def test_reduction_matches_greedy_oracle():
    rng = random.Random(11)
    for _ in range(300):
        n = rng.randint(1, 8)
        edges = {}
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.35:
                    edges[(i, j)] = rng.choice([LT, LE])
        closed = close_point_edges(n, edges)
        nodes = tuple(frozenset([Endpoint(f"X{i}", Side.BEGIN)]) for i in range(n))
        g = MergedPointGraph(nodes, closed, event_count=n, saturated=True)
        red = transitive_reduction(g)
        assert set(red.major) == brute_force_reduction(n, closed)
        assert close_point_edges(n, red.major) == closed
        assert set(closed) == reachability(n, edges)


def test_closure_labels_strict_when_any_path_is_strict():
    closed = close_point_edges(3, {(0, 1): LE, (1, 2): LT})
    assert closed[(0, 2)] == LT
    closed = close_point_edges(3, {(0, 1): LE, (1, 2): LE})
    assert closed[(0, 2)] == LE


def test_cycle_is_rejected():
    with pytest.raises(InconsistencyError):
        close_point_edges(2, {(0, 1): LT, (1, 0): LT})


def test_le_cycle_merges_to_equality():
    # begins ordered A1 <= B1 <= C1 <= A1 collapse into one node
    g = saturate(parse_annotation("A s,e,d,f B\nB s,e,d,f C\nC s,e,d,f A\n"))
    m = merge_equalities(to_point_graph(g))
    assert m.find(["A1", "B1", "C1"]) >= 0
    assert m.find(["A2", "B2", "C2"]) >= 0


def test_major_minor_partition():
    rng = random.Random(5)
    for _ in range(100):
        g = random_consistent_graph(rng, rng.randint(2, 6))
        m = merged_from_interval_graph(g)
        major, minor = major_minor(m)
        assert not set(major) & set(minor)
        assert set(major) | set(minor) == set(m.nontrivial_edges())


def test_strict_edge_over_weak_path_stays_major():
    closed = close_point_edges(3, {(0, 1): LE, (1, 2): LE, (0, 2): LT})
    nodes = tuple(frozenset([Endpoint(f"X{i}", Side.BEGIN)]) for i in range(3))
    red = transitive_reduction(MergedPointGraph(nodes, closed, event_count=3, saturated=True))
    assert set(red.major) == {(0, 1), (1, 2), (0, 2)}
