"""The signed homology double complex of a symbolically presented s/u-bijective pair.

A presentation is two signed graphs H (for Y) and K (for Z) plus a set of
compatible edge pairs.  The fiber shift on (L+1) copies of Y and (M+1)
copies of Z is presented by the tuples of edges that are pairwise
compatible.  Chain groups are built on length-k paths of those fiber
graphs (vertices when k = 0), cut down by the symmetric-group
constructions and then by the eventual range of the signed transfer map;
everything is over Q.

Internally a generator is kept in *track form* ``(ys, zs)``: ``ys[i]`` is
the sequence of H-items (edges, or a single vertex when k = 0) seen by
the i-th Y-coordinate along the path.  Permutations reorder tracks and
the face maps delete them.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product

from .algebra import Matrix, column_basis, core_poly, eventual_range, nullspace, rref, solve
from .dynamics import periodic_points
from .errors import (
    BadPeriod,
    CapExceeded,
    InvalidPresentation,
    InvarianceViolated,
    NonIntegralTrace,
    NotAChainMap,
    NotAComplex,
    InputError,
)
from .graph import Edge, SignedGraph, enumerate_paths, validate

__all__ = [
    "SuPairPresentation",
    "ChainSpace",
    "Differential",
    "GradedHomology",
    "diagonal_pair",
    "fiber_graph",
    "chain_space",
    "differential",
    "generator_differential",
    "homology",
    "lefschetz_check",
    "load_pair",
]


# --------------------------------------------------------------------------
# presentations
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SuPairPresentation:
    """Finite data for a signed s/u-bijective pair.

    ``X`` optionally names a presentation of the underlying signed shift;
    it is used only as the periodic-point oracle in ``lefschetz_check``.
    """

    Y: SignedGraph
    Z: SignedGraph
    pairs: tuple[tuple, ...]
    k: int = 1
    L_max: int = 4
    M_max: int = 4
    X: SignedGraph | None = None

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(tuple(p) for p in self.pairs))
        validate_pair(self)

    def to_json(self) -> dict:
        out = {
            "Y": self.Y.to_json(),
            "Z": self.Z.to_json(),
            "E00": [list(p) for p in self.pairs],
            "k": self.k,
            "Lmax": self.L_max,
            "Mmax": self.M_max,
        }
        if self.X is not None:
            out["X"] = self.X.to_json()
        return out

    @classmethod
    def from_json(cls, obj: dict) -> SuPairPresentation:
        try:
            Y = SignedGraph.from_json(obj["Y"])
            Z = SignedGraph.from_json(obj["Z"])
            X = SignedGraph.from_json(obj["X"]) if obj.get("X") is not None else None
            return cls(
                Y,
                Z,
                tuple(tuple(p) for p in obj["E00"]),
                k=int(obj.get("k", 1)),
                L_max=int(obj.get("Lmax", 4)),
                M_max=int(obj.get("Mmax", 4)),
                X=X,
            )
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed pair object: {exc!r}") from exc


def validate_pair(p: SuPairPresentation) -> None:
    validate(p.Y)
    validate(p.Z)
    if p.X is not None:
        validate(p.X)
    if p.k < 0:
        raise InvalidPresentation(f"block level k must be >= 0, got {p.k}")
    if p.L_max < 0 or p.M_max < 0:
        raise InvalidPresentation("caps must be nonnegative")
    if len(set(p.pairs)) != len(p.pairs):
        raise InvalidPresentation("duplicate compatible pair")
    y_ids = {e.id for e in p.Y.edges}
    z_ids = {e.id for e in p.Z.edges}
    for pair in p.pairs:
        if len(pair) != 2:
            raise InvalidPresentation(f"pair {pair!r} must have two entries")
        h, kappa = pair
        if h not in y_ids or kappa not in z_ids:
            raise InvalidPresentation(f"pair {pair!r} references an unknown edge")
        if p.Y.sign(h) != p.Z.sign(kappa):
            raise InvalidPresentation(f"pair {pair!r} joins edges of different sign")
    if y_ids - {h for h, _ in p.pairs}:
        raise InvalidPresentation("some Y edge occurs in no pair")
    if z_ids - {kappa for _, kappa in p.pairs}:
        raise InvalidPresentation("some Z edge occurs in no pair")


def load_pair(path) -> SuPairPresentation:
    with open(path, encoding="utf-8") as fh:
        return SuPairPresentation.from_json(json.load(fh))


def diagonal_pair(graph: SignedGraph, k: int = 1, L_max: int = 4, M_max: int = 4) -> SuPairPresentation:
    """Both factor maps are the identity; the canonical pair of a shift of finite type."""
    return SuPairPresentation(graph, graph, tuple((e.id, e.id) for e in graph.edges), k, L_max, M_max, X=graph)


def fiber_graph(p: SuPairPresentation, L: int, M: int) -> SignedGraph:
    """Graph of (L+1, M+1)-tuples of pairwise compatible edges.

    Edge ids are ``((h_0..h_L), (kappa_0..kappa_M))``; the sign is that of
    h_0; vertices are the componentwise sources and targets.
    """
    if not (0 <= L <= p.L_max and 0 <= M <= p.M_max):
        raise CapExceeded(f"level ({L}, {M}) is outside the caps ({p.L_max}, {p.M_max})")
    return _fiber_graph(p, L, M)


@lru_cache(maxsize=256)
def _fiber_graph(p: SuPairPresentation, L: int, M: int) -> SignedGraph:
    y_pos = {e.id: i for i, e in enumerate(p.Y.edges)}
    z_pos = {e.id: i for i, e in enumerate(p.Z.edges)}
    ks_for: dict = defaultdict(list)
    hs_for: dict = defaultdict(set)
    for h, kappa in p.pairs:
        ks_for[h].append(kappa)
        hs_for[kappa].add(h)
    tuples = []
    for e in p.Y.edges:
        h0 = e.id
        for ks in product(sorted(ks_for[h0], key=z_pos.get), repeat=M + 1):
            allowed = sorted(set.intersection(*(hs_for[kappa] for kappa in ks)), key=y_pos.get)
            for rest in product(allowed, repeat=L):
                tuples.append(((h0,) + rest, ks))
    tuples.sort(key=lambda t: ([y_pos[h] for h in t[0]], [z_pos[x] for x in t[1]]))
    Yg, Zg = p.Y, p.Z
    edges = []
    vertices = {}
    for hs, ks in tuples:
        src = (tuple(Yg.edge(h).src for h in hs), tuple(Zg.edge(x).src for x in ks))
        dst = (tuple(Yg.edge(h).dst for h in hs), tuple(Zg.edge(x).dst for x in ks))
        vertices.setdefault(src, None)
        vertices.setdefault(dst, None)
        edges.append(Edge((hs, ks), src, dst, Yg.sign(hs[0])))
    yv = {v: i for i, v in enumerate(Yg.vertices)}
    zv = {v: i for i, v in enumerate(Zg.vertices)}
    order = sorted(vertices, key=lambda v: ([yv[a] for a in v[0]], [zv[b] for b in v[1]]))
    return SignedGraph(tuple(order), tuple(edges))


# --------------------------------------------------------------------------
# permutations and sparse vectors
# --------------------------------------------------------------------------


def perm_sign(perm) -> int:
    """Sign of a permutation given as a sequence of images of 0..n-1."""
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _add(acc: dict, key, c) -> None:
    v = acc.get(key, 0) + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


# --------------------------------------------------------------------------
# one level (L, M) of the double complex
# --------------------------------------------------------------------------


class _Level:
    """Generators, the B-quotient, the A-subspace and the transfer map at (L, M)."""

    def __init__(self, p: SuPairPresentation, L: int, M: int):
        self.p, self.L, self.M, self.k = p, L, M, p.k
        self.graph = fiber_graph(p, L, M)
        if self.k == 0:
            self.y_key = {v: i for i, v in enumerate(p.Y.vertices)}
            self.generators = [self._from_vertex(v) for v in self.graph.vertices]
        else:
            self.y_key = {e.id: i for i, e in enumerate(p.Y.edges)}
            self.generators = [self._from_path(path) for path in enumerate_paths(self.graph, self.k)]
        self.gen_index = {g: i for i, g in enumerate(self.generators)}
        self.reps = [g for g in self.generators if self.quotient(g) == (g, 1)]
        self.rep_index = {g: i for i, g in enumerate(self.reps)}

    # track form ---------------------------------------------------------

    @staticmethod
    def _from_vertex(v):
        hv, kv = v
        return tuple((x,) for x in hv), tuple((x,) for x in kv)

    @staticmethod
    def _from_path(path):
        ys = tuple(zip(*(e[0] for e in path)))
        zs = tuple(zip(*(e[1] for e in path)))
        return ys, zs

    # the transfer map ---------------------------------------------------

    def transfer(self, g) -> dict:
        """Signed transfer image of one generator, as a sparse vector over generators."""
        ys, zs = g
        out: dict = {}
        if self.k == 0:
            vertex = (tuple(t[0] for t in ys), tuple(t[0] for t in zs))
            for e in self.graph.edges_into(vertex):
                _add(out, self._from_vertex(e.src), e.sign)
            return out
        start = (
            tuple(self.p.Y.edge(t[0]).src for t in ys),
            tuple(self.p.Z.edge(t[0]).src for t in zs),
        )
        s = self.p.Y.sign(ys[0][-1])
        for e in self.graph.edges_into(start):
            hs, ks = e.id
            image = (
                tuple((h,) + t[:-1] for h, t in zip(hs, ys)),
                tuple((x,) + t[:-1] for x, t in zip(ks, zs)),
            )
            _add(out, image, s)
        return out

    def transfer_vec(self, vec: dict) -> dict:
        out: dict = {}
        for g, c in vec.items():
            for h, d in self.transfer(g).items():
                _add(out, h, c * d)
        return out

    # the B-quotient -----------------------------------------------------

    def quotient(self, g):
        """(representative, sign) with g = sign * rep modulo B, or None if g lies in B."""
        ys, zs = g
        keys = [tuple(self.y_key[x] for x in t) for t in ys]
        if len(set(keys)) < len(keys):
            return None
        order = sorted(range(len(ys)), key=keys.__getitem__)
        return (tuple(ys[i] for i in order), zs), perm_sign(order)

    def quotient_vec(self, vec: dict) -> dict:
        """Sparse vector over representative indices."""
        out: dict = {}
        for g, c in vec.items():
            q = self.quotient(g)
            if q is not None:
                _add(out, self.rep_index[q[0]], c * q[1])
        return out

    # the A-subspace -----------------------------------------------------

    def antisymmetric_basis(self) -> list[dict]:
        """One Z-antisymmetrized orbit sum per Z-orbit of Z-distinct generators."""
        z_key = {x: i for i, x in enumerate(self.p.Z.vertices if self.k == 0 else (e.id for e in self.p.Z.edges))}
        perms = list(permutations(range(self.M + 1)))
        signs = [perm_sign(b) for b in perms]
        basis = []
        for ys, zs in self.generators:
            keys = [tuple(z_key[x] for x in t) for t in zs]
            if len(set(keys)) < len(keys) or keys != sorted(keys):
                continue
            vec: dict = {}
            for beta, s in zip(perms, signs):
                _add(vec, (ys, tuple(zs[b] for b in beta)), s)
            basis.append(vec)
        return basis

    def is_antisymmetric(self, vec: dict) -> bool:
        for j in range(self.M):
            for (ys, zs), c in vec.items():
                swapped = zs[:j] + (zs[j + 1], zs[j]) + zs[j + 2:]
                if vec.get((ys, swapped), 0) != -c:
                    return False
        return True


def _dense(cols: list[dict], nrows: int) -> Matrix:
    return Matrix.from_columns([[c.get(i, 0) for i in range(nrows)] for c in cols], nrows)


def _is_zero(m: Matrix) -> bool:
    return all(x == 0 for row in m.rows for x in row)


def _combine(coeffs, vectors: list[dict]) -> dict:
    out: dict = {}
    for c, vec in zip(coeffs, vectors):
        if c:
            for i, x in vec.items():
                _add(out, i, c * x)
    return out


class SparseBasis:
    """Reduced echelon basis of a subspace of Q^n with sparse vectors.

    Each basis vector has a 1 at its pivot and 0 at every other pivot, so
    the basis is canonical for the subspace and coordinates are read off
    at the pivots.
    """

    def __init__(self, vectors=()):
        self._rows: dict = {}  # pivot -> vector
        for v in vectors:
            self.add(v)

    def add(self, vec: dict) -> None:
        v = self._residual(vec)
        if not v:
            return
        pivot = min(v)
        scale = Fraction(1) / v[pivot]
        v = {i: x * scale for i, x in v.items()}
        for p, row in self._rows.items():
            c = row.get(pivot)
            if c:
                for i, x in v.items():
                    _add(row, i, -c * x)
        self._rows[pivot] = v

    def _residual(self, vec: dict) -> dict:
        v = dict(vec)
        for p, row in self._rows.items():
            c = v.get(p)
            if c:
                for i, x in row.items():
                    _add(v, i, -c * x)
        return v

    @property
    def vectors(self) -> list[dict]:
        return [self._rows[p] for p in sorted(self._rows)]

    def __len__(self) -> int:
        return len(self._rows)

    def coordinates(self, vec: dict) -> list | None:
        """Coordinates of vec in this basis, or None if vec is outside the span."""
        pivots = sorted(self._rows)
        coords = [vec.get(p, 0) for p in pivots]
        check = dict(vec)
        for c, p in zip(coords, pivots):
            if c:
                for i, x in self._rows[p].items():
                    _add(check, i, -c * x)
        return None if check else coords


@dataclass(frozen=True)
class ChainSpace:
    """Chain group at (L, M) inside the B-quotient.

    Coordinates are over the representative generators ``reps``.  ``span``
    is the image of A (before the eventual range), ``embedding`` expresses
    the chain basis in the ``span`` basis and ``action`` is the transfer
    map on the chain basis (invertible).
    """

    L: int
    M: int
    reps: tuple
    span: SparseBasis = field(repr=False)
    embedding: Matrix = field(repr=False)
    action: Matrix = field(repr=False)
    vectors: tuple = field(repr=False, default=())

    @property
    def dim(self) -> int:
        return self.action.nrows

    @property
    def quotient_dim(self) -> int:
        return len(self.span)

    @property
    def degree(self) -> int:
        return self.L - self.M

    @property
    def basis(self) -> Matrix:
        """Chain basis as dense columns over ``reps``."""
        return _dense(list(self.vectors), len(self.reps))


@dataclass(frozen=True)
class Differential:
    """Chain-level components out of (L, M), already carrying their signs.

    ``to_left`` goes to (L-1, M) and is sum_i (-1)^i delta_i; ``to_right``
    goes to (L, M+1) and is (-1)^L sum_j (-1)^j delta*_j.  Either is None
    when the target lies outside the grid.
    """

    L: int
    M: int
    to_left: Matrix | None
    to_right: Matrix | None


@dataclass(frozen=True)
class GradedHomology:
    """Degree -> (dimension, matrix of the induced transfer action)."""

    degrees: dict[int, tuple[int, Matrix]]
    chain_dims: dict[tuple[int, int], int] = field(default_factory=dict)

    def dimension(self, n: int) -> int:
        return self.degrees.get(n, (0, None))[0]

    def action(self, n: int) -> Matrix:
        return self.degrees[n][1] if n in self.degrees else Matrix.zeros(0, 0)

    def actions(self) -> dict[int, Matrix]:
        return {n: a for n, (_, a) in self.degrees.items()}

    def lefschetz_number(self, n: int) -> Fraction:
        return sum(((-1) ** (N % 2) * Fraction((a**n).trace()) for N, (_, a) in self.degrees.items()), Fraction(0))

    def to_json(self) -> dict:
        return {
            "degrees": {
                str(N): {"dimension": d, "action": a.to_json(), "core_polynomial": core_poly(a).to_json()}
                for N, (d, a) in sorted(self.degrees.items())
            },
        }


class _Complex:
    """Lazily built levels, chain spaces and differentials of one presentation."""

    def __init__(self, p: SuPairPresentation):
        self.p = p
        self._levels: dict = {}
        self._chains: dict = {}
        self._quotient_maps: dict = {}

    def level(self, L: int, M: int) -> _Level:
        if (L, M) not in self._levels:
            self._levels[(L, M)] = _Level(self.p, L, M)
        return self._levels[(L, M)]

    # chain spaces -------------------------------------------------------

    def chain(self, L: int, M: int) -> ChainSpace:
        if (L, M) in self._chains:
            return self._chains[(L, M)]
        lv = self.level(L, M)
        # transfer on the B-quotient, well defined iff gamma(B) lies in B
        tq_cols = [lv.quotient_vec(lv.transfer(g)) for g in lv.reps]
        for g in lv.generators:
            q = lv.quotient(g)
            lhs = lv.quotient_vec(lv.transfer(g))
            rhs = {} if q is None else {i: q[1] * c for i, c in tq_cols[lv.rep_index[q[0]]].items()}
            if lhs != rhs:
                raise InvarianceViolated(f"transfer map does not preserve B at level ({L}, {M})")
        a_basis = lv.antisymmetric_basis()
        for a in a_basis:
            if not lv.is_antisymmetric(lv.transfer_vec(a)):
                raise InvarianceViolated(f"transfer map does not preserve A at level ({L}, {M})")
        span = SparseBasis(lv.quotient_vec(a) for a in a_basis)
        cols = []
        for w in span.vectors:
            coords = span.coordinates(_combine([w[i] for i in w], [tq_cols[i] for i in w]))
            if coords is None:
                raise InvarianceViolated(f"Q(A) is not invariant at level ({L}, {M})")
            cols.append(coords)
        gamma = Matrix.from_columns(cols, len(span))
        E, R = eventual_range(gamma)
        vectors = tuple(_combine(E.column(j), span.vectors) for j in range(E.ncols))
        cs = ChainSpace(L, M, tuple(lv.reps), span, E, R, vectors)
        self._chains[(L, M)] = cs
        return cs

    # differentials ------------------------------------------------------

    def _check_descent(self, src: _Level, tgt: _Level, raw, D_cols: list[dict], what: str) -> None:
        for g in src.generators:
            q = src.quotient(g)
            lhs = tgt.quotient_vec(raw(g))
            rhs = {} if q is None else {i: q[1] * c for i, c in D_cols[src.rep_index[q[0]]].items()}
            if lhs != rhs:
                raise NotAChainMap(f"{what} out of ({src.L}, {src.M}) does not descend to the B-quotient")

    def face_y(self, L: int, M: int) -> list[dict]:
        """sum_i (-1)^i delta_i on B-quotient coordinates, (L, M) -> (L-1, M), by columns."""
        key = ("y", L, M)
        if key not in self._quotient_maps:
            src, tgt = self.level(L, M), self.level(L - 1, M)

            def raw(g):
                ys, zs = g
                out: dict = {}
                for i in range(L + 1):
                    _add(out, (ys[:i] + ys[i + 1:], zs), (-1) ** i)
                return out

            cols = [tgt.quotient_vec(raw(g)) for g in src.reps]
            self._check_descent(src, tgt, raw, cols, "Y-face map")
            self._quotient_maps[key] = cols
        return self._quotient_maps[key]

    def coface_z(self, L: int, M: int) -> list[dict]:
        """sum_j (-1)^j delta*_j on B-quotient coordinates, (L, M) -> (L, M+1), by columns."""
        key = ("z", L, M)
        if key not in self._quotient_maps:
            src, tgt = self.level(L, M), self.level(L, M + 1)
            preimages: dict = defaultdict(list)
            for g in tgt.generators:
                ys, zs = g
                for j in range(M + 2):
                    preimages[(j, (ys, zs[:j] + zs[j + 1:]))].append(g)

            def raw(g):
                out: dict = {}
                for j in range(M + 2):
                    for h in preimages.get((j, g), ()):
                        _add(out, h, (-1) ** j)
                return out

            cols = [tgt.quotient_vec(raw(g)) for g in src.reps]
            self._check_descent(src, tgt, raw, cols, "Z-coface map")
            self._quotient_maps[key] = cols
        return self._quotient_maps[key]

    def induced(self, D_cols: list[dict], src: ChainSpace, tgt: ChainSpace, what: str) -> Matrix:
        """Restrict a B-quotient map to chain spaces, checking it is a chain-level map."""
        where = f"{what} ({src.L},{src.M})->({tgt.L},{tgt.M})"
        images = [_combine([c[i] for i in c], [D_cols[i] for i in c]) for c in src.vectors]
        if tgt.dim == 0:
            if any(images):
                raise NotAChainMap(f"{where} leaves the chain space; try a larger k")
            return Matrix.zeros(0, src.dim)
        coords = []
        for v in images:
            c = tgt.span.coordinates(v)
            if c is None:
                raise NotAChainMap(f"{where} leaves the chain space; try a larger k")
            coords.append(c)
        try:
            X = solve(tgt.embedding, Matrix.from_columns(coords, tgt.quotient_dim))
        except ValueError as exc:
            raise NotAChainMap(f"{where} leaves the chain space; try a larger k") from exc
        if X @ src.action != tgt.action @ X:
            raise NotAChainMap(f"{where} does not commute with the transfer map; try a larger k")
        return X


@lru_cache(maxsize=32)
def _complex(p: SuPairPresentation) -> _Complex:
    return _Complex(p)


# --------------------------------------------------------------------------
# public operations
# --------------------------------------------------------------------------


def chain_space(p: SuPairPresentation, L: int, M: int) -> ChainSpace:
    fiber_graph(p, L, M)  # cap check
    return _complex(p).chain(L, M)


def generator_differential(p: SuPairPresentation, L: int, M: int) -> tuple[Matrix | None, Matrix | None]:
    """Raw face/coface sums on the generator bases (before any quotient).

    Returns (sum_i (-1)^i delta_i into (L-1, M), sum_j (-1)^j delta*_j into
    (L, M+1)); rows and columns follow the generator orders of the levels.
    """
    cx = _complex(p)
    src = cx.level(L, M)
    left = right = None
    if L >= 1:
        tgt = cx.level(L - 1, M)
        cols = []
        for ys, zs in src.generators:
            col: dict = {}
            for i in range(L + 1):
                _add(col, tgt.gen_index[(ys[:i] + ys[i + 1:], zs)], (-1) ** i)
            cols.append(col)
        left = _dense(cols, len(tgt.generators))
    if M + 1 <= p.M_max:
        tgt = cx.level(L, M + 1)
        cols = [dict() for _ in src.generators]
        for g in tgt.generators:
            ys, zs = g
            for j in range(M + 2):
                _add(cols[src.gen_index[(ys, zs[:j] + zs[j + 1:])]], tgt.gen_index[g], (-1) ** j)
        right = _dense(cols, len(tgt.generators))
    return left, right


def differential(p: SuPairPresentation, L: int, M: int) -> Differential:
    cx = _complex(p)
    src = chain_space(p, L, M)
    left = right = None
    if L >= 1:
        left = cx.induced(cx.face_y(L, M), src, chain_space(p, L - 1, M), "Y-face map")
    if M + 1 <= p.M_max:
        right = cx.induced(cx.coface_z(L, M), src, chain_space(p, L, M + 1), "Z-coface map")
        if L % 2:
            right = -right
    return Differential(L, M, left, right)


def _grid_extent(p: SuPairPresentation) -> tuple[int, int]:
    """First L (resp. M) whose chain groups vanish identically.

    The quotient dimension is monotone: deleting a coordinate of a
    generator with distinct tracks keeps them distinct.  So an empty
    (L, 0) means every (L', M) with L' >= L is empty, and likewise for M.
    """
    L0 = next((L for L in range(p.L_max + 1) if chain_space(p, L, 0).quotient_dim == 0), None)
    M0 = next((M for M in range(p.M_max + 1) if chain_space(p, 0, M).quotient_dim == 0), None)
    if L0 is None or M0 is None:
        raise CapExceeded(
            f"chain groups are still nonzero at the caps (Lmax={p.L_max}, Mmax={p.M_max}); raise the caps"
        )
    return L0, M0


def homology(p: SuPairPresentation) -> GradedHomology:
    L0, M0 = _grid_extent(p)
    cells = [(L, M) for L in range(L0) for M in range(M0)]
    chains = {c: chain_space(p, *c) for c in cells}
    diffs = {c: differential(p, *c) for c in cells}

    by_degree: dict[int, list] = defaultdict(list)
    for L, M in cells:
        by_degree[L - M].append((L, M))

    def offsets(N):
        off, pos = 0, {}
        for c in by_degree.get(N, []):
            pos[c] = off
            off += chains[c].dim
        return pos, off

    layout = {N: offsets(N) for N in range(-M0 - 1, L0 + 2)}

    def d(N) -> Matrix:
        src_pos, src_dim = layout[N]
        tgt_pos, tgt_dim = layout[N - 1]
        rows = [[0] * src_dim for _ in range(tgt_dim)]
        for (L, M), so in src_pos.items():
            dd = diffs[(L, M)]
            for part, tgt in ((dd.to_left, (L - 1, M)), (dd.to_right, (L, M + 1))):
                if part is None or tgt not in tgt_pos:
                    continue
                to = tgt_pos[tgt]
                for i, row in enumerate(part.rows):
                    for j, x in enumerate(row):
                        rows[to + i][so + j] += x
        return Matrix(rows, src_dim)

    def action(N) -> Matrix:
        return Matrix.block_diag([chains[c].action for c in by_degree.get(N, [])])

    degrees = range(-M0, L0 + 1)
    dmaps = {N: d(N) for N in range(-M0, L0 + 2)}
    for N in degrees:
        if not _is_zero(dmaps[N] @ dmaps[N + 1]):
            raise NotAComplex(f"d o d != 0 into degree {N - 1}; try a larger k")

    result = {}
    for N in degrees:
        dim_N = layout[N][1]
        if dim_N == 0:
            continue
        ker = nullspace(dmaps[N])
        img = column_basis(dmaps[N + 1]) if dmaps[N + 1].ncols else Matrix.zeros(dim_N, 0)
        both = Matrix.hstack([img, ker], dim_N)
        _, pivots = rref(both)
        extra = [c - img.ncols for c in pivots if c >= img.ncols]
        if not extra:
            continue
        H = Matrix.from_columns([ker.column(c) for c in extra], dim_N)
        frame = Matrix.hstack([img, H], dim_N)
        coords = solve(frame, action(N) @ H)
        phi = Matrix(coords.rows[img.ncols:], H.ncols)
        result[N] = (H.ncols, phi)
    return GradedHomology(result, {c: chains[c].dim for c in cells})


def euler_lefschetz(p: SuPairPresentation, n: int) -> Fraction:
    """Alternating trace over the chain groups; equals the homological one."""
    L0, M0 = _grid_extent(p)
    return sum(
        (
            (-1) ** ((L - M) % 2) * Fraction((chain_space(p, L, M).action ** n).trace())
            for L in range(L0)
            for M in range(M0)
        ),
        Fraction(0),
    )


def x_signed_count(p: SuPairPresentation, n: int, budget: int | None = None) -> int:
    """Signed count of period-n points of the underlying shift.

    Uses ``p.X`` when supplied; otherwise the distinct Y-projections of the
    closed n-paths of the (0, 0) fiber graph, which is the underlying shift
    whenever the Y-side factor map is a conjugacy (e.g. diagonal pairs).
    """
    if n < 1:
        raise BadPeriod(f"period must be >= 1, got {n}")
    if p.X is not None:
        return sum(_prod_signs(pt.signs) for pt in periodic_points(p.X, n, budget))
    projected = {}
    for pt in periodic_points(fiber_graph(p, 0, 0), n, budget):
        hs = tuple(e[0][0] for e in pt.edges)
        projected[hs] = _prod_signs(pt.signs)
    return sum(projected.values())


def _prod_signs(signs) -> int:
    out = 1
    for s in signs:
        out *= s
    return out


@dataclass(frozen=True)
class LefschetzRow:
    n: int
    lhs: int
    rhs: int

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def lefschetz_check(p: SuPairPresentation, n: int, h: GradedHomology | None = None) -> LefschetzRow:
    if n < 1:
        raise BadPeriod(f"period must be >= 1, got {n}")
    h = homology(p) if h is None else h
    lhs = h.lefschetz_number(n)
    if lhs.denominator != 1:
        raise NonIntegralTrace(f"alternating trace {lhs} is not an integer")
    return LefschetzRow(n, lhs.numerator, x_signed_count(p, n))
