import json

import pytest
from hypothesis import given, settings

from graphs import TEST_GRAPHS, fib, full2, signed2, signed_graphs
from sdh.algebra import Matrix, core_poly
from sdh.dynamics import signed_count
from sdh.errors import BadBlockLevel, BadSign, DanglingEdge, DuplicateId, EmptyGraph, InputError
from sdh.graph import (
    Edge,
    SignedGraph,
    enumerate_paths,
    higher_block,
    load_graph,
    signed_adjacency,
    transfer_on_paths,
    unsigned_adjacency,
    validate,
)


def test_validate_accepts_two_signed_loops():
    validate(signed2())


def test_validate_rejects_dangling_edge():
    with pytest.raises(DanglingEdge):
        validate(SignedGraph(("a",), (Edge("e", "a", "b", 1),)))


def test_validate_rejects_zero_sign():
    with pytest.raises(BadSign):
        validate(SignedGraph(("a",), (Edge("e", "a", "a", 0),)))


def test_validate_rejects_bool_sign():
    with pytest.raises(BadSign):
        validate(SignedGraph(("a",), (Edge("e", "a", "a", True),)))


def test_validate_rejects_duplicates():
    with pytest.raises(DuplicateId):
        validate(SignedGraph(("a",), (Edge("e", "a", "a", 1), Edge("e", "a", "a", -1))))
    with pytest.raises(DuplicateId):
        validate(SignedGraph(("a", "a"), ()))


def test_validate_rejects_empty_graph():
    with pytest.raises(EmptyGraph):
        validate(SignedGraph((), ()))


def test_json_round_trip_and_default_sign(tmp_path):
    obj = {"vertices": ["a"], "edges": [{"id": "e", "src": "a", "dst": "a"}]}
    path = tmp_path / "g.json"
    path.write_text(json.dumps(obj))
    g = load_graph(path)
    assert g.sign("e") == 1
    assert SignedGraph.from_json(g.to_json()) == g


def test_from_json_rejects_malformed_object():
    with pytest.raises(InputError):
        SignedGraph.from_json({"vertices": ["a"]})


# --- paths --------------------------------------------------------------


def test_enumerate_paths_full_two_shift():
    assert enumerate_paths(full2(), 2) == [("z", "z"), ("z", "o"), ("o", "z"), ("o", "o")]


def test_enumerate_paths_fibonacci():
    paths = enumerate_paths(fib(), 2)
    assert len(paths) == 5
    assert sum(sum(row) for row in (unsigned_adjacency(fib()) ** 2).tolist()) == 5


def test_enumerate_paths_zero_gives_vertices():
    for g in TEST_GRAPHS.values():
        assert enumerate_paths(g, 0) == list(g.vertices)


@settings(max_examples=40, deadline=None)
@given(signed_graphs())
def test_paths_are_composable_and_counted_by_adjacency(g):
    A = unsigned_adjacency(g)
    for m in (1, 2, 3):
        paths = enumerate_paths(g, m)
        for p in paths:
            assert all(g.edge(a).dst == g.edge(b).src for a, b in zip(p, p[1:]))
        assert len(paths) == sum(sum(r) for r in (A**m).tolist())
        assert len(set(paths)) == len(paths)


# --- higher block -------------------------------------------------------


def test_higher_block_one_is_identity():
    g = fib()
    assert higher_block(g, 1) == g


def test_higher_block_rejects_level_zero():
    with pytest.raises(BadBlockLevel):
        higher_block(fib(), 0)


def test_higher_block_signed_two_shift():
    g2 = higher_block(signed2(), 2)
    assert list(g2.vertices) == [("z",), ("o",)]
    signs = {e.id: e.sign for e in g2.edges}
    assert signs == {("z", "z"): -1, ("z", "o"): 1, ("o", "z"): -1, ("o", "o"): 1}
    A = signed_adjacency(g2)
    assert A == Matrix([[-1, 1], [-1, 1]])
    assert A @ A == Matrix.zeros(2, 2)


def test_higher_block_fibonacci_size():
    g2 = higher_block(fib(), 2)
    assert len(g2.vertices) == 3 and len(g2.edges) == 5


@settings(max_examples=30, deadline=None)
@given(signed_graphs(max_edges=4))
def test_higher_block_preserves_signed_counts(g):
    for k in (2, 3):
        gk = higher_block(g, k)
        for n in range(1, 5):
            assert signed_count(gk, n) == signed_count(g, n)


# --- adjacency and transfer ---------------------------------------------


def test_signed_adjacency_examples():
    assert signed_adjacency(signed2()) == Matrix([[0]])
    assert signed_adjacency(fib()) == Matrix([[1, 1], [1, 0]])


def test_transfer_on_paths_examples():
    g = signed2()
    assert transfer_on_paths(g, 0) == signed_adjacency(g)
    T = transfer_on_paths(g, 1)
    # columns are images of z and o in the basis (z, o)
    assert T == Matrix([[-1, 1], [-1, 1]])
    assert T.trace() == 0
    assert transfer_on_paths(fib(), 1).trace() == 1


@settings(max_examples=40, deadline=None)
@given(signed_graphs(max_edges=4))
def test_transfer_traces_match_adjacency(g):
    A = signed_adjacency(g)
    for m in range(4):
        T = transfer_on_paths(g, m)
        for n in range(1, 6):
            assert (T**n).trace() == (A**n).trace()


@settings(max_examples=40, deadline=None)
@given(signed_graphs(max_edges=3))
def test_transfer_core_poly_independent_of_path_length(g):
    reference = core_poly(signed_adjacency(g))
    for m in (1, 2, 3):
        assert core_poly(transfer_on_paths(g, m)) == reference


@settings(max_examples=40, deadline=None)
@given(signed_graphs())
def test_signed_adjacency_traces_match_counts(g):
    A = signed_adjacency(g)
    for n in range(1, 7):
        assert (A**n).trace() == signed_count(g, n)
