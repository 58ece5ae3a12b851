"""Exact integer/rational linear algebra, polynomials and rational functions.

Nothing in here touches floating point.  Matrix entries are Python ints or
``fractions.Fraction``; polynomials keep ``Fraction`` coefficients and know
whether they happen to be integral.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

from .errors import NotSquare, PoleAtZero, ShapeMismatch

__all__ = [
    "Matrix",
    "Polynomial",
    "RationalFunction",
    "TruncatedSeries",
    "smith_normal_form",
    "char_poly",
    "core_poly",
    "det",
    "rref",
    "rank",
    "nullspace",
    "column_basis",
    "solve",
    "eventual_range",
    "series_of_rational",
    "exp_of_count_series",
    "log_derivative",
]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"non-exact entry {x!r}")


def _simplify(x):
    """Return an int when a Fraction is integral, so integer matrices stay integral."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


# --------------------------------------------------------------------------
# matrices
# --------------------------------------------------------------------------


class Matrix:
    """Immutable dense matrix with exact entries.

    Shape is stored explicitly so that 0-row and 0-column matrices behave
    (they show up as maps out of / into zero chain spaces).
    """

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        data = tuple(tuple(_simplify(_frac(x)) for x in row) for row in rows)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        for row in data:
            if len(row) != ncols:
                raise ShapeMismatch("ragged matrix rows")
        object.__setattr__(self, "rows", data)
        object.__setattr__(self, "nrows", len(data))
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    # construction -------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> Matrix:
        return cls([[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int) -> Matrix:
        return cls([[col[i] for col in columns] for i in range(nrows)], len(columns))

    @classmethod
    def diag(cls, entries: Sequence) -> Matrix:
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def block_diag(cls, blocks: Sequence[Matrix]) -> Matrix:
        n = sum(b.nrows for b in blocks)
        m = sum(b.ncols for b in blocks)
        out = [[0] * m for _ in range(n)]
        r = c = 0
        for b in blocks:
            for i, row in enumerate(b.rows):
                out[r + i][c:c + b.ncols] = row
            r += b.nrows
            c += b.ncols
        return cls(out, m)

    @classmethod
    def hstack(cls, blocks: Sequence[Matrix], nrows: int) -> Matrix:
        if any(b.nrows != nrows for b in blocks):
            raise ShapeMismatch("hstack row counts differ")
        rows = [sum((b.rows[i] for b in blocks), ()) for i in range(nrows)]
        return cls(rows, sum(b.ncols for b in blocks))

    @classmethod
    def vstack(cls, blocks: Sequence[Matrix], ncols: int) -> Matrix:
        if any(b.ncols != ncols for b in blocks):
            raise ShapeMismatch("vstack column counts differ")
        return cls([row for b in blocks for row in b.rows], ncols)

    # basic protocol -----------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __repr__(self):
        return f"Matrix({[list(r) for r in self.rows]!r})"

    def tolist(self) -> list[list]:
        return [list(r) for r in self.rows]

    def column(self, j: int) -> list:
        return [row[j] for row in self.rows]

    def columns(self) -> list[list]:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    @property
    def is_integral(self) -> bool:
        return all(isinstance(x, int) for row in self.rows for x in row)

    @property
    def T(self) -> Matrix:
        return Matrix([self.column(j) for j in range(self.ncols)], self.nrows)

    # arithmetic ---------------------------------------------------------

    def __add__(self, other: Matrix) -> Matrix:
        if self.shape != other.shape:
            raise ShapeMismatch(f"cannot add {self.shape} and {other.shape}")
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other: Matrix) -> Matrix:
        if self.shape != other.shape:
            raise ShapeMismatch(f"cannot subtract {other.shape} from {self.shape}")
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self) -> Matrix:
        return Matrix([[-a for a in r] for r in self.rows], self.ncols)

    def scale(self, c) -> Matrix:
        return Matrix([[c * a for a in r] for r in self.rows], self.ncols)

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.ncols != other.nrows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.columns()
        out = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if a]
            out.append([sum((a * c[k] for k, a in nz), 0) for c in cols])
        return Matrix(out, other.ncols)

    def apply(self, vec: Sequence) -> list:
        if len(vec) != self.ncols:
            raise ShapeMismatch("vector length does not match matrix")
        return [_simplify(sum((a * v for a, v in zip(r, vec) if a and v), Fraction(0))) for r in self.rows]

    def __pow__(self, n: int) -> Matrix:
        if not self.is_square:
            raise NotSquare("power of a non-square matrix")
        if n < 0:
            raise ValueError("negative matrix power")
        result = Matrix.identity(self.nrows)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def trace(self):
        if not self.is_square:
            raise NotSquare("trace of a non-square matrix")
        return _simplify(sum((self.rows[i][i] for i in range(self.nrows)), Fraction(0)))

    def to_json(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.rows]

    @classmethod
    def from_json(cls, rows) -> Matrix:
        rows = list(rows)
        return cls([[_frac(x) if not isinstance(x, int) else x for x in r] for r in rows])


def det(A: Matrix):
    """Determinant by fraction-free Bareiss elimination."""
    if not A.is_square:
        raise NotSquare("determinant of a non-square matrix")
    n = A.nrows
    if n == 0:
        return 1
    M = [list(r) for r in A.rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[i][j] * M[k][k] - M[i][k] * M[k][j]
                # exact: Bareiss guarantees divisibility
                M[i][j] = num // prev if isinstance(num, int) and isinstance(prev, int) else _simplify(Fraction(num) / prev)
        prev = M[k][k]
    return _simplify(sign * M[n - 1][n - 1])


# --------------------------------------------------------------------------
# polynomials
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Polynomial:
    """Univariate polynomial, coefficients lowest degree first."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def monomial(cls, degree: int, c=1) -> Polynomial:
        return cls([0] * degree + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # zero polynomial has degree -1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def int_coeffs(self) -> list[int]:
        if not self.is_integral:
            raise ValueError("polynomial has non-integral coefficients")
        return [c.numerator for c in self.coeffs]

    def __add__(self, other: Polynomial) -> Polynomial:
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self[i] + other[i] for i in range(n))

    def __sub__(self, other: Polynomial) -> Polynomial:
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self[i] - other[i] for i in range(n))

    def __neg__(self) -> Polynomial:
        return Polynomial(-c for c in self.coeffs)

    def __mul__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            return Polynomial(c * other for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Polynomial:
        return reduce(lambda p, _: p * self, range(n), Polynomial([1]))

    def divmod(self, other: Polynomial) -> tuple[Polynomial, Polynomial]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        lead = other.leading
        for i in range(len(q) - 1, -1, -1):
            c = rem[i + other.degree] / lead
            q[i] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] -= c * b
        return Polynomial(q), Polynomial(rem[: other.degree] if other.degree > 0 else [])

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monic(self) -> Polynomial:
        return self * (1 / self.leading) if self.coeffs else self

    def shift_out_zero_roots(self) -> Polynomial:
        """Divide by the largest power of the variable that divides self."""
        k = 0
        while k < len(self.coeffs) and self.coeffs[k] == 0:
            k += 1
        return Polynomial(self.coeffs[k:])

    def reversed(self, degree: int | None = None) -> Polynomial:
        """x^d p(1/x) for d = degree (defaults to the actual degree)."""
        d = self.degree if degree is None else degree
        return Polynomial(self[d - i] for i in range(d + 1))

    def format(self, var: str = "z") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    def __str__(self) -> str:
        return self.format("t")

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, coeffs) -> Polynomial:
        return cls(_frac(c) for c in coeffs)


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd over Q (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic()


def _content(cs: Iterable[Fraction]) -> Fraction:
    cs = [c for c in cs if c]
    if not cs:
        return Fraction(1)
    num = reduce(gcd, (c.numerator for c in cs))
    den = reduce(lambda x, y: x * y // gcd(x, y), (c.denominator for c in cs))
    return Fraction(num, den)


# --------------------------------------------------------------------------
# rational functions
# --------------------------------------------------------------------------


class RationalFunction:
    """Reduced ratio of integer polynomials in the variable z.

    Normal form: gcd(num, den) = 1 over Q, both have integer coefficients
    with joint content 1, and the denominator's constant term is positive
    (leading coefficient if the constant term vanishes).  Equality is
    equality of normal forms.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Polynomial) else Polynomial([num])
        den = Polynomial([1]) if den is None else (den if isinstance(den, Polynomial) else Polynomial([den]))
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            num, den = Polynomial(), Polynomial([1])
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num.divmod(g)[0], den.divmod(g)[0]
            c = _content(num.coeffs + den.coeffs)
            num, den = num * (1 / c), den * (1 / c)
            pivot = den[0] if den[0] != 0 else den.leading
            if pivot < 0:
                num, den = -num, -den
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    @classmethod
    def one(cls) -> RationalFunction:
        return cls(Polynomial([1]))

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __mul__(self, other: RationalFunction) -> RationalFunction:
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: RationalFunction) -> RationalFunction:
        return RationalFunction(self.num * other.den, self.den * other.num)

    def inverse(self) -> RationalFunction:
        return RationalFunction(self.den, self.num)

    def is_one(self) -> bool:
        return self == RationalFunction.one()

    def __str__(self) -> str:
        def wrap(p: Polynomial) -> str:
            s = p.format("z")
            return f"({s})" if sum(1 for c in p.coeffs if c) > 1 else s

        if self.den == Polynomial([1]):
            return self.num.format("z")
        return f"{wrap(self.num)} / {wrap(self.den)}"

    def __repr__(self) -> str:
        return f"RationalFunction({self})"

    def to_json(self) -> dict:
        return {"numerator": self.num.to_json(), "denominator": self.den.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> RationalFunction:
        return cls(Polynomial.from_json(obj["numerator"]), Polynomial.from_json(obj["denominator"]))


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients c_0..c_order of a power series."""

    order: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.order + 1:
            raise ValueError("series length must be order + 1")

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]


def series_of_rational(f: RationalFunction, order: int) -> TruncatedSeries:
    """Taylor coefficients of f at 0 through z^order by long division."""
    q0 = f.den[0]
    if q0 == 0:
        raise PoleAtZero("denominator vanishes at z = 0")
    out: list[Fraction] = []
    for n in range(order + 1):
        acc = f.num[n] - sum((f.den[j] * out[n - j] for j in range(1, min(n, f.den.degree) + 1)), Fraction(0))
        out.append(acc / q0)
    return TruncatedSeries(order, tuple(out))


def exp_of_count_series(counts: Sequence[int], order: int) -> TruncatedSeries:
    """Truncation of exp(sum_m counts[m-1]/m z^m).

    Uses f' = g' f with g' = sum_m N_m z^(m-1), i.e. n f_n = sum_m N_m f_(n-m).
    """
    if len(counts) < order:
        raise ValueError(f"need {order} counts, got {len(counts)}")
    f = [Fraction(1)]
    for n in range(1, order + 1):
        f.append(sum((counts[m - 1] * f[n - m] for m in range(1, n + 1)), Fraction(0)) / n)
    return TruncatedSeries(order, tuple(f))


def log_derivative(f: RationalFunction, order: int) -> list[Fraction]:
    """Coefficients a_0..a_(order-1) of f'/f; a_(k-1) is N_k for a zeta function."""
    s = series_of_rational(f, order).coeffs
    if s[0] == 0:
        raise PoleAtZero("log-derivative needs f(0) != 0")
    d = [(i + 1) * s[i + 1] for i in range(order)]
    out: list[Fraction] = []
    for n in range(order):
        out.append((d[n] - sum((s[j] * out[n - j] for j in range(1, n + 1)), Fraction(0))) / s[0])
    return out


# --------------------------------------------------------------------------
# characteristic polynomials
# --------------------------------------------------------------------------


def char_poly(A: Matrix) -> Polynomial:
    """det(tI - A) by Berkowitz's division-free algorithm."""
    if not A.is_square:
        raise NotSquare(f"characteristic polynomial of a {A.shape} matrix")
    n = A.nrows
    M = A.rows
    poly = [1]  # highest degree first
    for r in range(n):
        a = M[r][r]
        row = M[r][:r]
        col = [M[i][r] for i in range(r)]
        toeplitz = [1, -a]
        vec = col
        for _ in range(r):
            toeplitz.append(-sum((x * y for x, y in zip(row, vec)), 0))
            vec = [sum((M[i][j] * vec[j] for j in range(r)), 0) for i in range(r)]
        new = []
        for i in range(r + 2):
            new.append(sum((toeplitz[i - j] * poly[j] for j in range(min(i, r) + 1)), 0))
        poly = new
    return Polynomial(reversed(poly))


def core_poly(A: Matrix) -> Polynomial:
    """Characteristic polynomial with every factor of t removed."""
    return char_poly(A).shift_out_zero_roots()


# --------------------------------------------------------------------------
# row reduction
# --------------------------------------------------------------------------


def rref(A: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    M = [[_frac(x) for x in r] for r in A.rows]
    pivots: list[int] = []
    r = 0
    for c in range(A.ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        if piv != 1:
            M[r] = [x / piv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                Mi, Mr = M[i], M[r]
                M[i] = [x - f * y for x, y in zip(Mi, Mr)]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(A: Matrix) -> int:
    return len(rref(A)[1])


def nullspace(A: Matrix) -> Matrix:
    """Basis of {x : A x = 0}, as the columns of the returned matrix."""
    R, pivots = rref(A)
    free = [c for c in range(A.ncols) if c not in set(pivots)]
    cols = []
    for f in free:
        v = [Fraction(0)] * A.ncols
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        cols.append(v)
    return Matrix.from_columns(cols, A.ncols)


def column_basis(A: Matrix) -> Matrix:
    """Canonical basis of the column space: the nonzero rows of rref(A^T)."""
    R, _ = rref(A.T)
    return Matrix.from_columns(R, A.nrows)


def solve(A: Matrix, B: Matrix) -> Matrix:
    """The unique X with A X = B, for A of full column rank.

    Raises ValueError when some column of B is outside the column space of A.
    """
    if A.nrows != B.nrows:
        raise ShapeMismatch("solve: row counts differ")
    aug = Matrix.hstack([A, B], A.nrows)
    R, pivots = rref(aug)
    if len([p for p in pivots if p < A.ncols]) != A.ncols:
        raise ValueError("solve: coefficient matrix lacks full column rank")
    if any(p >= A.ncols for p in pivots):
        raise ValueError("solve: right-hand side not in the column space")
    return Matrix([row[A.ncols:] for row in R[: A.ncols]], B.ncols)


def eventual_range(T: Matrix) -> tuple[Matrix, Matrix]:
    """Basis of the eventual range of T and the matrix of T restricted to it.

    The images T^j(V) shrink until their dimension stops dropping; from
    then on T acts invertibly, so the restriction is nonsingular.
    """
    if not T.is_square:
        raise NotSquare("eventual range of a non-square matrix")
    W = Matrix.identity(T.nrows)
    while True:
        image = column_basis(T @ W)
        if image.ncols == W.ncols:
            break
        W = image
    W = column_basis(W) if W.ncols else Matrix.zeros(T.nrows, 0)
    restricted = solve(W, T @ W) if W.ncols else Matrix.zeros(0, 0)
    return W, restricted


# --------------------------------------------------------------------------
# Smith normal form
# --------------------------------------------------------------------------


def smith_normal_form(A: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Return (U, D, V) with U A V = D, U and V unimodular, D in Smith form."""
    if not A.is_integral:
        raise ValueError("Smith normal form needs an integer matrix")
    m, n = A.shape
    D = [list(r) for r in A.rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row_dst += q row_src
        D[dst] = [x + q * y for x, y in zip(D[dst], D[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, q):  # col_dst += q col_src
        for M in (D, V):
            for row in M:
                row[dst] += q * row[src]

    def negate_row(i):
        D[i] = [-x for x in D[i]]
        U[i] = [-x for x in U[i]]

    t = 0
    while t < min(m, n):
        nonzero = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            changed = False
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    add_row(t, i, -q)
                    if D[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    add_col(t, j, -q)
                    if D[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            # pivot now isolated; enforce divisibility of the remaining block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % D[t][t]), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if D[t][t] < 0:
            negate_row(t)
        t += 1
    return Matrix(U, m), Matrix(D, n), Matrix(V, n)


def elementary_divisors(A: Matrix) -> list[int]:
    _, D, _ = smith_normal_form(A)
    return [D[i, i] for i in range(min(D.shape))]
