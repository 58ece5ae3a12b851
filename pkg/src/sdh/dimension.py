"""Signed dimension groups and the invariants compared against them.

The inductive limit is never materialized as an abstract group.  Over Q
it is the eventual range of the transfer map, which is determined by its
dimension and the core polynomial of the action; the Bowen-Franks group
serves as the integral fingerprint.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Mapping

from .algebra import Matrix, Polynomial, core_poly, elementary_divisors, eventual_range
from .errors import NotSquare, ShapeMismatch
from .graph import SignedGraph, transfer_on_paths

Parity = Literal["even", "odd"]


@dataclass(frozen=True)
class DimensionGroupData:
    block_level: int
    transfer: Matrix
    dimension: int
    core_polynomial: Polynomial
    restricted_action: Matrix
    bowen_franks: tuple[int, ...]
    source: str = ""

    def to_json(self) -> dict:
        return {
            "source": self.source,
            "block_level": self.block_level,
            "transfer": self.transfer.to_json(),
            "dimension": self.dimension,
            "core_polynomial": self.core_polynomial.to_json(),
            "bowen_franks": list(self.bowen_franks),
        }


def signed_dimension_group(graph: SignedGraph, m: int = 0, source: str = "") -> DimensionGroupData:
    T = transfer_on_paths(graph, m)
    basis, restricted = eventual_range(T)
    cp = core_poly(T)
    assert cp.degree == basis.ncols, "eventual range dimension disagrees with the core polynomial"
    return DimensionGroupData(
        block_level=m,
        transfer=T,
        dimension=basis.ncols,
        core_polynomial=cp,
        restricted_action=restricted,
        bowen_franks=tuple(bowen_franks(T)),
        source=source,
    )


def bowen_franks(A: Matrix) -> list[int]:
    """Elementary divisors of I - A; Z^n/(I - A)Z^n is their direct sum of cyclic groups."""
    if not A.is_square:
        raise NotSquare("Bowen-Franks group of a non-square matrix")
    return elementary_divisors(Matrix.identity(A.nrows) - A)


@dataclass(frozen=True)
class ShiftEquivalenceCertificate:
    A: Matrix
    B: Matrix
    R: Matrix
    S: Matrix
    lag: int

    @classmethod
    def from_json(cls, obj: dict) -> ShiftEquivalenceCertificate:
        return cls(*(Matrix.from_json(obj[k]) for k in "ABRS"), int(obj["lag"]))


def verify_shift_equivalence(c: ShiftEquivalenceCertificate) -> bool:
    """Check AR = RB, SA = BS, RS = A^lag, SR = B^lag exactly."""
    n, m = c.A.nrows, c.B.nrows
    if not (c.A.is_square and c.B.is_square and c.R.shape == (n, m) and c.S.shape == (m, n)):
        raise ShapeMismatch(f"incompatible certificate shapes A{c.A.shape} B{c.B.shape} R{c.R.shape} S{c.S.shape}")
    if c.lag < 1:
        raise ShapeMismatch("lag must be >= 1")
    ok = (
        c.A @ c.R == c.R @ c.B
        and c.S @ c.A == c.B @ c.S
        and c.R @ c.S == c.A**c.lag
        and c.S @ c.R == c.B**c.lag
    )
    if ok:
        assert core_poly(c.A) == core_poly(c.B), "verified certificate with differing nonzero spectra"
    return ok


def _assemble(actions: Mapping[int, Matrix], parity: int) -> list[Matrix]:
    blocks = []
    for deg in sorted(actions):
        M = actions[deg]
        if not M.is_square:
            raise ShapeMismatch(f"action in degree {deg} is not square")
        if deg % 2 == parity:
            blocks.append(M)
    return blocks


def even_odd_sums(
    q_parity: Parity,
    homology_actions: Mapping[int, Matrix],
    manifold_actions: Mapping[int, Matrix],
) -> tuple[Matrix, Matrix]:
    """The two direct sums whose nonzero spectra should agree.

    Odd q pairs even with even and odd with odd; even q pairs the even
    part of one side with the odd part of the other.
    """
    h_even, h_odd = _assemble(homology_actions, 0), _assemble(homology_actions, 1)
    f_even, f_odd = _assemble(manifold_actions, 0), _assemble(manifold_actions, 1)
    if q_parity == "odd":
        left, right = h_even + f_even, h_odd + f_odd
    elif q_parity == "even":
        left, right = h_even + f_odd, h_odd + f_even
    else:
        raise ValueError(f"q_parity must be 'even' or 'odd', got {q_parity!r}")
    return Matrix.block_diag(left), Matrix.block_diag(right)


def compare_even_odd(
    q_parity: Parity,
    homology_actions: Mapping[int, Matrix],
    manifold_actions: Mapping[int, Matrix],
) -> bool:
    left, right = even_odd_sums(q_parity, homology_actions, manifold_actions)
    return core_poly(left) == core_poly(right)


def load_actions(obj: Mapping[str, list]) -> dict[int, Matrix]:
    """Parse a JSON object mapping degree strings to matrices."""
    return {int(k): Matrix.from_json(v) for k, v in obj.items()}
