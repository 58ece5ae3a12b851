"""Brute-force periodic points: the oracle side of every trace formula.

Periodic points of an edge shift are enumerated as closed paths by
depth-first search; no matrix powers are used to produce them.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from math import prod

from .algebra import Matrix, det
from .errors import BadPeriod, DegeneratePeriod, OrbitBudgetExceeded, ShapeMismatch
from .graph import SignedGraph, unsigned_adjacency

DEFAULT_ORBIT_BUDGET = 10**6


def orbit_budget() -> int:
    """Enumeration cap; the SDH_ORBIT_BUDGET environment variable overrides it."""
    raw = os.environ.get("SDH_ORBIT_BUDGET")
    return int(raw) if raw else DEFAULT_ORBIT_BUDGET


@dataclass(frozen=True)
class PeriodicPoint:
    """A closed path of length n, i.e. the periodic point repeating it."""

    edges: tuple
    signs: tuple[int, ...]

    @property
    def period(self) -> int:
        return len(self.edges)

    def shifted(self) -> PeriodicPoint:
        return PeriodicPoint(self.edges[1:] + self.edges[:1], self.signs[1:] + self.signs[:1])


def _check_budget(graph: SignedGraph, n: int, budget: int | None) -> None:
    budget = orbit_budget() if budget is None else budget
    # the count itself is only used to refuse oversized requests
    expected = (unsigned_adjacency(graph) ** n).trace()
    if expected > budget:
        raise OrbitBudgetExceeded(f"{expected} points of period {n} exceed the budget of {budget}")


def periodic_points(graph: SignedGraph, n: int, budget: int | None = None) -> list[PeriodicPoint]:
    if n < 1:
        raise BadPeriod(f"period must be >= 1, got {n}")
    _check_budget(graph, n, budget)
    points = []

    def walk(start, path, signs):
        last = graph.edge(path[-1])
        if len(path) == n:
            if last.dst == start:
                points.append(PeriodicPoint(tuple(path), tuple(signs)))
            return
        for e in graph.edges_out(last.dst):
            path.append(e.id)
            signs.append(e.sign)
            walk(start, path, signs)
            path.pop()
            signs.pop()

    for e in graph.edges:
        walk(e.src, [e.id], [e.sign])
    return points


def orbit_sign(p: PeriodicPoint) -> int:
    return prod(p.signs)


def signed_count(graph: SignedGraph, n: int, budget: int | None = None) -> int:
    return sum(orbit_sign(p) for p in periodic_points(graph, n, budget))


def signed_counts(graph: SignedGraph, n_max: int, budget: int | None = None) -> list[int]:
    return [signed_count(graph, n, budget) for n in range(1, n_max + 1)]


def toral_fixed_point_count(A: Matrix, n: int) -> int:
    """Number of period-n points of the automorphism of R^2/Z^2 induced by A.

    Fixed points of A^n are the cosets of (A^n - I)^(-1) Z^2 mod Z^2, so
    there are |det(A^n - I)| of them.
    """
    if A.shape != (2, 2):
        raise ShapeMismatch("torus oracle needs a 2x2 matrix")
    if n < 1:
        raise BadPeriod(f"period must be >= 1, got {n}")
    d = det(A**n - Matrix.identity(2))
    if d == 0:
        raise DegeneratePeriod(f"det(A^{n} - I) = 0")
    return abs(d)
