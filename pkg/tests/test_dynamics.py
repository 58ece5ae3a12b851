import pytest
from hypothesis import given, settings

from graphs import TEST_GRAPHS, fib, full2, signed2, signed_graphs
from sdh.algebra import Matrix
from sdh.dynamics import (
    DEFAULT_ORBIT_BUDGET,
    PeriodicPoint,
    orbit_budget,
    orbit_sign,
    periodic_points,
    signed_count,
    toral_fixed_point_count,
)
from sdh.errors import BadPeriod, DegeneratePeriod, OrbitBudgetExceeded
from sdh.graph import signed_adjacency, unsigned_adjacency

FIB = Matrix([[1, 1], [1, 0]])


def test_periodic_points_examples():
    assert len(periodic_points(full2(), 3)) == 8
    assert [p.edges for p in periodic_points(fib(), 1)] == [("e1",)]
    assert sorted(p.edges for p in periodic_points(fib(), 2)) == [("e1", "e1"), ("e2", "e3"), ("e3", "e2")]


def test_periodic_points_rejects_bad_period():
    with pytest.raises(BadPeriod):
        periodic_points(fib(), 0)


def test_points_are_closed_paths():
    for g in TEST_GRAPHS.values():
        for n in range(1, 6):
            for p in periodic_points(g, n):
                es = [g.edge(e) for e in p.edges]
                assert all(a.dst == b.src for a, b in zip(es, es[1:] + es[:1]))


def test_orbit_sign_examples():
    assert orbit_sign(PeriodicPoint(("a", "b"), (1, 1))) == 1
    assert orbit_sign(PeriodicPoint(("z", "z", "z"), (-1, -1, -1))) == -1
    assert orbit_sign(PeriodicPoint(("z", "o"), (-1, 1))) == -1


def test_signed_count_examples():
    assert all(signed_count(signed2(), n) == 0 for n in range(1, 9))
    assert signed_count(full2(), 4) == 16
    assert signed_count(fib(), 3) == 4


def test_counts_match_traces_on_test_graphs():
    for g in TEST_GRAPHS.values():
        A, U = signed_adjacency(g), unsigned_adjacency(g)
        for n in range(1, 9):
            assert signed_count(g, n) == (A**n).trace()
            assert len(periodic_points(g, n)) == (U**n).trace()


@settings(max_examples=40, deadline=None)
@given(signed_graphs())
def test_sign_is_shift_invariant(g):
    for n in range(1, 6):
        points = periodic_points(g, n)
        edges = {p.edges for p in points}
        for p in points:
            q = p.shifted()
            assert q.edges in edges
            assert orbit_sign(q) == orbit_sign(p)


def test_budget_refuses_large_requests(monkeypatch):
    with pytest.raises(OrbitBudgetExceeded):
        periodic_points(full2(), 5, budget=10)
    monkeypatch.setenv("SDH_ORBIT_BUDGET", "16")
    assert orbit_budget() == 16
    assert len(periodic_points(full2(), 4)) == 16
    with pytest.raises(OrbitBudgetExceeded):
        periodic_points(full2(), 5)
    monkeypatch.delenv("SDH_ORBIT_BUDGET")
    assert orbit_budget() == DEFAULT_ORBIT_BUDGET


def test_torus_count_examples():
    assert toral_fixed_point_count(FIB, 1) == 1
    assert toral_fixed_point_count(FIB, 2) == 1
    assert toral_fixed_point_count(Matrix([[2, 1], [1, 1]]), 1) == 1


def test_torus_count_matches_trace_formula():
    for n in range(1, 11):
        assert toral_fixed_point_count(FIB, n) == (FIB**n).trace() - 1 - (-1) ** n


def test_torus_count_degenerate():
    with pytest.raises(DegeneratePeriod):
        toral_fixed_point_count(Matrix.identity(2), 1)
