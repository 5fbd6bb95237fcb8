"""Exact dense linear algebra over the rationals.

Everything here works on :class:`Matrix`, an immutable row-major matrix of
:class:`fractions.Fraction`.  Determinants and ranks go through fraction-free
(Bareiss) elimination on integer rows, which is considerably faster than
eliminating with ``Fraction`` directly.  Positive (semi)definiteness is decided
exactly, without floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

Number = int | Fraction


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def parse_rational(s: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; whitespace and decimals are rejected."""
    if not isinstance(s, str) or not s or any(c.isspace() for c in s) or "." in s or "e" in s.lower():
        raise ValueError(f"malformed rational {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed rational {s!r}") from exc


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


class Matrix:
    """Immutable dense rational matrix.

    Indexing is 0-based, as everywhere else in Python; ``m[i, j]`` returns an
    entry and ``m.row(i)`` a tuple.
    """

    __slots__ = ("_rows", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        data = tuple(tuple(to_fraction(x) for x in r) for r in rows)
        if data:
            width = len(data[0])
            if any(len(r) != width for r in data):
                raise ValueError("ragged rows")
            if ncols is not None and ncols != width:
                raise ValueError("column count mismatch")
        else:
            width = 0 if ncols is None else ncols
        self._rows = data
        self.nrows = len(data)
        self.ncols = width
        self._hash = None

    @classmethod
    def _wrap(cls, rows: tuple, ncols: int) -> Matrix:
        # trusted constructor: rows already tuples of Fractions
        m = cls.__new__(cls)
        m._rows = rows
        m.nrows = len(rows)
        m.ncols = ncols
        m._hash = None
        return m

    # constructors

    @classmethod
    def zeros(cls, nrows: int, ncols: int | None = None) -> Matrix:
        ncols = nrows if ncols is None else ncols
        z = Fraction(0)
        return cls._wrap(tuple((z,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, n: int) -> Matrix:
        one, z = Fraction(1), Fraction(0)
        return cls._wrap(tuple(tuple(one if i == j else z for j in range(n)) for i in range(n)), n)

    @classmethod
    def diag(cls, entries: Sequence) -> Matrix:
        vals = [to_fraction(x) for x in entries]
        n = len(vals)
        z = Fraction(0)
        return cls._wrap(tuple(tuple(vals[i] if i == j else z for j in range(n)) for i in range(n)), n)

    @classmethod
    def unit(cls, nrows: int, ncols: int, i: int, j: int) -> Matrix:
        """The matrix unit with a single 1 at ``(i, j)``."""
        rows = [[0] * ncols for _ in range(nrows)]
        rows[i][j] = 1
        return cls(rows)

    @classmethod
    def block(cls, blocks: Sequence[Sequence[Matrix]]) -> Matrix:
        rows = []
        for brow in blocks:
            h = brow[0].nrows
            if any(b.nrows != h for b in brow):
                raise ValueError("block row heights differ")
            for i in range(h):
                rows.append(sum((b._rows[i] for b in brow), ()))
        ncols = sum(b.ncols for b in blocks[0])
        return cls._wrap(tuple(rows), ncols)

    @classmethod
    def hstack(cls, *ms: Matrix) -> Matrix:
        return cls.block([list(ms)])

    @classmethod
    def vstack(cls, *ms: Matrix) -> Matrix:
        return cls.block([[m] for m in ms])

    # access

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, idx):
        i, j = idx
        return self._rows[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._rows[i]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._rows)

    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> Matrix:
        return Matrix._wrap(tuple(tuple(self._rows[i][j] for j in col_idx) for i in row_idx), len(col_idx))

    def select_rows(self, row_idx: Sequence[int]) -> Matrix:
        return Matrix._wrap(tuple(self._rows[i] for i in row_idx), self.ncols)

    def select_cols(self, col_idx: Sequence[int]) -> Matrix:
        return self.submatrix(range(self.nrows), col_idx)

    def replace(self, i: int, j: int, value) -> Matrix:
        rows = [list(r) for r in self._rows]
        rows[i][j] = to_fraction(value)
        return Matrix(rows)

    # arithmetic

    def __add__(self, other: Matrix) -> Matrix:
        self._same_shape(other)
        return Matrix._wrap(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)), self.ncols)

    def __sub__(self, other: Matrix) -> Matrix:
        self._same_shape(other)
        return Matrix._wrap(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)), self.ncols)

    def __neg__(self) -> Matrix:
        return Matrix._wrap(tuple(tuple(-a for a in r) for r in self._rows), self.ncols)

    def scale(self, c) -> Matrix:
        c = to_fraction(c)
        return Matrix._wrap(tuple(tuple(c * a for a in r) for r in self._rows), self.ncols)

    def __rmul__(self, c) -> Matrix:
        return self.scale(c)

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other._rows)) if other.nrows else [()] * other.ncols
        out = []
        for r in self._rows:
            nz = [(k, a) for k, a in enumerate(r) if a]
            out.append(tuple(sum((a * c[k] for k, a in nz), Fraction(0)) for c in cols))
        return Matrix._wrap(tuple(out), other.ncols)

    @property
    def T(self) -> Matrix:
        if self.nrows == 0:
            return Matrix.zeros(self.ncols, 0)
        return Matrix._wrap(tuple(zip(*self._rows)), self.nrows)

    def transpose(self) -> Matrix:
        return self.T

    def is_zero(self) -> bool:
        return not any(a for r in self._rows for a in r)

    def is_symmetric(self) -> bool:
        return self.is_square and all(
            self._rows[i][j] == self._rows[j][i] for i in range(self.nrows) for j in range(i + 1, self.ncols)
        )

    def frobenius_sq(self) -> Fraction:
        return sum((a * a for r in self._rows for a in r), Fraction(0))

    def _same_shape(self, other: Matrix) -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    # protocol

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.shape, self._rows))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(a) for a in r) for r in self._rows)
        return f"Matrix[{self.nrows}x{self.ncols}]({body})"

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._rows]

    def to_float(self):
        import numpy as np

        return np.array([[float(a) for a in r] for r in self._rows], dtype=float).reshape(self.nrows, self.ncols)

    # serialization

    def to_json(self) -> dict:
        return {
            "rows": self.nrows,
            "cols": self.ncols,
            "data": [[format_rational(a) for a in r] for r in self._rows],
        }

    @classmethod
    def from_json(cls, obj: dict) -> Matrix:
        try:
            nrows, ncols, data = obj["rows"], obj["cols"], obj["data"]
        except (KeyError, TypeError) as exc:
            raise ValueError("matrix JSON needs rows, cols and data") from exc
        if not isinstance(data, list) or len(data) != nrows or any(
            not isinstance(r, list) or len(r) != ncols for r in data
        ):
            raise ValueError("matrix JSON data does not match the declared shape")
        return cls([[to_fraction(x) for x in r] for r in data], ncols=ncols)


# -- integer kernels ---------------------------------------------------------


def _integer_rows(m: Matrix) -> tuple[list[list[int]], Fraction]:
    """Scale each row to integers; returns the rows and the product of scales."""
    out = []
    scale = Fraction(1)
    for r in m.rows():
        d = lcm(*(a.denominator for a in r)) if r else 1
        out.append([int(a * d) for a in r])
        scale *= d
    return out, scale


def _bareiss(rows: list[list[int]], ncols: int, col_order: Sequence[int] | None = None) -> tuple[int, int]:
    """Fraction-free elimination in place.

    Returns ``(rank, sign * last_pivot)``; for a square nonsingular input the
    second value is the determinant.
    """
    order = list(range(ncols)) if col_order is None else list(col_order)
    m = len(rows)
    prev = 1
    sign = 1
    r = 0
    for c in order:
        if r >= m:
            break
        piv = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            sign = -sign
        p = rows[r][c]
        for i in range(r + 1, m):
            ri = rows[i]
            f = ri[c]
            rr = rows[r]
            for j in order:
                ri[j] = (p * ri[j] - f * rr[j]) // prev
        prev = p
        r += 1
    return r, sign * prev


def rank(m: Matrix, col_order: Sequence[int] | None = None) -> int:
    """Rank over Q.  ``col_order`` changes the pivot search order."""
    if m.nrows == 0 or m.ncols == 0:
        return 0
    rows, _ = _integer_rows(m)
    return _bareiss(rows, m.ncols, col_order)[0]


def det(m: Matrix) -> Fraction:
    if not m.is_square:
        raise ValueError("determinant of a non-square matrix")
    n = m.nrows
    if n == 0:
        return Fraction(1)
    rows, scale = _integer_rows(m)
    r, d = _bareiss(rows, n)
    if r < n:
        return Fraction(0)
    return Fraction(d) / scale


def minor(m: Matrix, row_set: Iterable[int], col_set: Iterable[int]) -> Fraction:
    """Determinant of the submatrix on ``row_set`` x ``col_set`` (0-based, taken sorted)."""
    rs, cs = sorted(set(row_set)), sorted(set(col_set))
    if len(rs) != len(cs):
        raise ValueError("minor needs equally many rows and columns")
    if any(not 0 <= i < m.nrows for i in rs) or any(not 0 <= j < m.ncols for j in cs):
        raise IndexError("minor index out of range")
    return det(m.submatrix(rs, cs))


# -- symmetric matrices ------------------------------------------------------


def _require_symmetric(s: Matrix) -> None:
    if not s.is_symmetric():
        raise ValueError("matrix is not symmetric")


def char_poly_sums(s: Matrix) -> tuple[Fraction, ...]:
    """``(E_1, ..., E_n)`` with ``det(x I + s) = sum_k E_k x^(n-k)``.

    ``E_k`` is the sum of the k x k principal minors.  Computed with the
    Faddeev-LeVerrier recursion, which is exact over Q.
    """
    _require_symmetric(s)
    n = s.nrows
    # det(xI - s) = x^n + c_1 x^(n-1) + ... ; E_k = (-1)^k c_k
    coeffs = []
    mk = Matrix.zeros(n)
    ident = Matrix.identity(n)
    c = Fraction(1)
    for k in range(1, n + 1):
        mk = s @ (mk + ident.scale(c))
        c = -sum((mk[i, i] for i in range(n)), Fraction(0)) / k
        coeffs.append(c)
    return tuple(c if k % 2 == 0 else -c for k, c in enumerate(coeffs, start=1))


def is_positive_semidefinite(s: Matrix) -> bool:
    # real spectrum, so all elementary symmetric functions >= 0 iff eigenvalues >= 0
    return all(e >= 0 for e in char_poly_sums(s))


def leading_minors(s: Matrix) -> list[Fraction]:
    return [det(s.submatrix(range(k), range(k))) for k in range(1, s.nrows + 1)]


def is_positive_definite(s: Matrix) -> bool:
    _require_symmetric(s)
    return all(d > 0 for d in leading_minors(s))


@dataclass(frozen=True)
class LdlFactorization:
    """``s = unit_lower @ diag(diag) @ unit_lower.T`` with ``diag >= 0``.

    ``support`` holds the 1-based indices of the positive pivots.
    """

    unit_lower: Matrix
    diag: tuple[Fraction, ...]
    support: frozenset[int]

    def reconstruct(self) -> Matrix:
        L = self.unit_lower
        return L @ Matrix.diag(self.diag) @ L.T


def ldl(s: Matrix) -> LdlFactorization:
    """Pivot-free LDL^t of a symmetric positive semidefinite matrix.

    Pivots are taken in natural order.  A zero pivot forces the rest of its
    column to vanish (true for PSD input) and the column of ``L`` is left as
    the unit column.  Raises ``ValueError`` if ``s`` is not PSD.
    """
    _require_symmetric(s)
    n = s.nrows
    work = [list(r) for r in s.rows()]
    L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    D: list[Fraction] = []
    for j in range(n):
        d = work[j][j]
        if d < 0:
            raise ValueError(f"negative pivot at position {j + 1}: not positive semidefinite")
        if d == 0:
            if any(work[i][j] for i in range(j + 1, n)):
                raise ValueError(f"zero pivot with nonzero column at position {j + 1}: not positive semidefinite")
            D.append(Fraction(0))
            continue
        D.append(d)
        for i in range(j + 1, n):
            L[i][j] = work[i][j] / d
        for i in range(j + 1, n):
            lij = L[i][j]
            if not lij:
                continue
            for k in range(j + 1, i + 1):
                work[i][k] -= lij * work[j][k]
                work[k][i] = work[i][k]
    support = frozenset(j + 1 for j, d in enumerate(D) if d > 0)
    return LdlFactorization(Matrix(L), tuple(D), support)


# -- solving -----------------------------------------------------------------


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the pivot columns."""
    rows = [list(r) for r in m.rows()]
    pivots: list[int] = []
    r = 0
    for c in range(m.ncols):
        piv = next((i for i in range(r, m.nrows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        rows[r] = [a / p for a in rows[r]]
        for i in range(m.nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m.nrows:
            break
    return Matrix(rows, ncols=m.ncols), pivots


def kernel_basis(m: Matrix) -> Matrix:
    """Basis of the right kernel, as the columns of the returned matrix."""
    red, pivots = rref(m)
    free = [c for c in range(m.ncols) if c not in pivots]
    cols = []
    for f in free:
        v = [Fraction(0)] * m.ncols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -red[i, f]
        cols.append(v)
    if not cols:
        return Matrix.zeros(m.ncols, 0)
    return Matrix(cols).T


def solve(m: Matrix, b: Matrix) -> Matrix:
    """One exact solution ``x`` of ``m @ x = b`` (free variables set to 0)."""
    if b.nrows != m.nrows:
        raise ValueError("right-hand side has the wrong number of rows")
    aug, pivots = rref(Matrix.hstack(m, b))
    if any(p >= m.ncols for p in pivots):
        raise ValueError("inconsistent linear system")
    x = [[Fraction(0)] * b.ncols for _ in range(m.ncols)]
    for i, p in enumerate(pivots):
        x[p] = list(aug.row(i)[m.ncols:])
    return Matrix(x, ncols=b.ncols)


def inverse(m: Matrix) -> Matrix:
    if not m.is_square:
        raise ValueError("inverse of a non-square matrix")
    n = m.nrows
    aug, pivots = rref(Matrix.hstack(m, Matrix.identity(n)))
    if sum(1 for p in pivots if p < n) < n:
        raise ValueError("matrix is singular")
    return aug.select_cols(range(n, 2 * n))
