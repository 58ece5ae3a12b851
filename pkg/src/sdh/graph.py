"""Signed directed graphs and the matrices they carry.

A graph is a presentation of an edge shift: points are bi-infinite edge
sequences, and a signed presentation attaches to each edge the sign of
every point whose 0th coordinate is that edge.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path as FsPath
from typing import Hashable, Iterator, Sequence

from .algebra import Matrix
from .errors import BadBlockLevel, BadSign, DanglingEdge, DuplicateId, EmptyGraph, InputError

__all__ = [
    "Edge",
    "SignedGraph",
    "validate",
    "enumerate_paths",
    "higher_block",
    "signed_adjacency",
    "unsigned_adjacency",
    "transfer_on_paths",
    "load_graph",
]


@dataclass(frozen=True)
class Edge:
    id: Hashable
    src: Hashable
    dst: Hashable
    sign: int = 1


@dataclass(frozen=True)
class SignedGraph:
    """Finite directed graph with +-1 edge signs.

    Identifiers are opaque (strings from JSON, tuples for derived graphs);
    all orderings follow construction order.
    """

    vertices: tuple
    edges: tuple[Edge, ...]
    _by_id: dict = field(init=False, repr=False, compare=False, hash=False)
    _into: dict = field(init=False, repr=False, compare=False, hash=False)
    _out: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        into: dict = {v: [] for v in self.vertices}
        out: dict = {v: [] for v in self.vertices}
        for e in self.edges:
            into.setdefault(e.dst, []).append(e)
            out.setdefault(e.src, []).append(e)
        object.__setattr__(self, "_by_id", {e.id: e for e in self.edges})
        object.__setattr__(self, "_into", into)
        object.__setattr__(self, "_out", out)

    def edge(self, edge_id) -> Edge:
        return self._by_id[edge_id]

    def edges_into(self, v) -> list[Edge]:
        return self._into.get(v, [])

    def edges_out(self, v) -> list[Edge]:
        return self._out.get(v, [])

    def sign(self, edge_id) -> int:
        return self._by_id[edge_id].sign

    def vertex_index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    def with_signs(self, sign: int | None) -> SignedGraph:
        """Copy with every sign forced to ``sign`` (None leaves them alone)."""
        if sign is None:
            return self
        return SignedGraph(self.vertices, tuple(Edge(e.id, e.src, e.dst, sign) for e in self.edges))

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"id": e.id, "src": e.src, "dst": e.dst, "sign": e.sign} for e in self.edges],
        }

    @classmethod
    def from_json(cls, obj: dict) -> SignedGraph:
        try:
            vertices = list(obj["vertices"])
            edges = [Edge(e["id"], e["src"], e["dst"], e.get("sign", 1)) for e in obj["edges"]]
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed graph object: {exc!r}") from exc
        g = cls(tuple(vertices), tuple(edges))
        validate(g)
        return g


def validate(graph: SignedGraph) -> None:
    if not graph.vertices:
        raise EmptyGraph("graph has no vertices")
    if len(set(graph.vertices)) != len(graph.vertices):
        raise DuplicateId("duplicate vertex identifier")
    seen = set()
    vs = set(graph.vertices)
    for e in graph.edges:
        if e.id in seen:
            raise DuplicateId(f"duplicate edge identifier {e.id!r}")
        seen.add(e.id)
        if e.src not in vs or e.dst not in vs:
            raise DanglingEdge(f"edge {e.id!r} references an unknown vertex")
        if type(e.sign) is not int or e.sign not in (-1, 1):
            raise BadSign(f"edge {e.id!r} has sign {e.sign!r}; expected -1 or +1")


def load_graph(path: str | FsPath) -> SignedGraph:
    with open(path, encoding="utf-8") as fh:
        return SignedGraph.from_json(json.load(fh))


def _paths(graph: SignedGraph, m: int) -> Iterator[tuple]:
    def extend(prefix: tuple, remaining: int):
        if remaining == 0:
            yield prefix
            return
        for e in graph.edges_out(graph.edge(prefix[-1]).dst):
            yield from extend(prefix + (e.id,), remaining - 1)

    for e in graph.edges:
        yield from extend((e.id,), m - 1)


def enumerate_paths(graph: SignedGraph, m: int) -> list[tuple]:
    """All length-m paths as tuples of edge ids (m = 0 gives the vertices).

    Order is lexicographic in the graph's edge order; with edges listed in
    sorted order that is the lexicographic order of the id sequences.
    """
    if m < 0:
        raise ValueError("path length must be nonnegative")
    if m == 0:
        return list(graph.vertices)
    return list(_paths(graph, m))


def higher_block(graph: SignedGraph, k: int) -> SignedGraph:
    """The k-block presentation G^k.

    Edges are length-k paths, vertices length-(k-1) paths (vertices of G
    when k = 1 and G^1 is G itself); the path g_0...g_(k-1) carries the
    sign of g_(k-1).
    """
    if k < 1:
        raise BadBlockLevel(f"block level must be >= 1, got {k}")
    if k == 1:
        return graph
    vertices = enumerate_paths(graph, k - 1)
    edges = [Edge(p, p[:-1], p[1:], graph.sign(p[-1])) for p in enumerate_paths(graph, k)]
    return SignedGraph(tuple(vertices), tuple(edges))


def signed_adjacency(graph: SignedGraph) -> Matrix:
    """Entry [u][v] is the sum of the signs of the edges u -> v.

    Column v is the image of v under the signed transfer map, which sends
    a vertex to the signed sum of the sources of the edges entering it.
    """
    idx = graph.vertex_index()
    n = len(graph.vertices)
    rows = [[0] * n for _ in range(n)]
    for e in graph.edges:
        rows[idx[e.src]][idx[e.dst]] += e.sign
    return Matrix(rows, n)


def unsigned_adjacency(graph: SignedGraph) -> Matrix:
    return signed_adjacency(graph.with_signs(1))


def transfer_images(graph: SignedGraph, path: Sequence) -> list[tuple[tuple, int]]:
    """Signed images of one length-m path (m >= 1) under the transfer map.

    An edge e entering the start of p_1...p_m contributes
    sign(p_m) * (e, p_1, ..., p_(m-1)).
    """
    first = graph.edge(path[0])
    s = graph.sign(path[-1])
    rest = tuple(path[:-1])
    return [((e.id,) + rest, s) for e in graph.edges_into(first.src)]


def transfer_on_paths(graph: SignedGraph, m: int) -> Matrix:
    """Matrix of the signed transfer map on the free group over length-m paths.

    Basis order is that of ``enumerate_paths``; m = 0 is the signed
    adjacency matrix.
    """
    if m == 0:
        return signed_adjacency(graph)
    basis = enumerate_paths(graph, m)
    idx = {p: i for i, p in enumerate(basis)}
    n = len(basis)
    rows = [[0] * n for _ in range(n)]
    for j, p in enumerate(basis):
        for image, s in transfer_images(graph, p):
            rows[idx[image]][j] += s
    return Matrix(rows, n)
