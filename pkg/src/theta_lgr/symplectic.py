"""Sp_2n(Q) with its pinning, the theta-nonnegative monoid, and the cell U*.

Matrices are 2n x 2n :class:`~theta_lgr.linalg.Matrix` objects written in
blocks ``[[A, B], [C, D]]``.  The symplectic form is ``[[0, I], [-I, 0]]``.

Chevalley generators: ``e_n = E_{n,2n}`` and, for ``i < n``,
``e_i = E_{i,i+1} - E_{n+i+1,n+i}``; ``f_i`` is the transpose of ``e_i``.
See :data:`CHEVALLEY_E_CORRECTION` for why the second index pair is not
``(n+i+1, i)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .linalg import (
    Matrix,
    det,
    format_rational,
    inverse,
    is_positive_definite,
    is_positive_semidefinite,
    minor,
    to_fraction,
)

#: ``E_{i,i+1} - E_{n+i+1,i}`` (as sometimes printed) is not in sp_2n; the
#: generator used here is ``E_{i,i+1} - E_{n+i+1,n+i}``, the only one-entry
#: change that is, and the one whose transpose gives
#: ``y_i(b) = I + b(E_{i+1,i} - E_{n+i,n+i+1})``.
CHEVALLEY_E_CORRECTION = {
    "printed": "E[i,i+1] - E[n+i+1,i]",
    "used": "E[i,i+1] - E[n+i+1,n+i]",
}


def omega(n: int) -> Matrix:
    z, one = Matrix.zeros(n), Matrix.identity(n)
    return Matrix.block([[z, one], [-one, z]])


def is_symplectic(m: Matrix) -> bool:
    if m.nrows != m.ncols or m.nrows % 2:
        return False
    om = omega(m.nrows // 2)
    return m.T @ om @ m == om


def blocks(m: Matrix) -> tuple[Matrix, Matrix, Matrix, Matrix]:
    n = m.nrows // 2
    top, bot = range(n), range(n, 2 * n)
    return m.submatrix(top, top), m.submatrix(top, bot), m.submatrix(bot, top), m.submatrix(bot, bot)


def chevalley_e(i: int, n: int) -> Matrix:
    if not 1 <= i <= n:
        raise ValueError(f"generator index {i} out of range for rank {n}")
    rows = [[0] * (2 * n) for _ in range(2 * n)]
    if i == n:
        rows[n - 1][2 * n - 1] = 1
    else:
        rows[i - 1][i] = 1
        rows[n + i][n + i - 1] = -1
    return Matrix(rows)


def gen_x(i: int, a, n: int) -> Matrix:
    """``x_i(a) = exp(a e_i) = I + a e_i`` (``e_i`` squares to zero)."""
    e = chevalley_e(i, n)
    assert (e @ e).is_zero()
    return Matrix.identity(2 * n) + e.scale(a)


def gen_y(i: int, a, n: int) -> Matrix:
    return gen_x(i, a, n).T


def torus(diag) -> Matrix:
    vals = [to_fraction(x) for x in diag]
    if any(v == 0 for v in vals):
        raise ValueError("torus entries must be nonzero")
    return Matrix.diag(vals + [1 / v for v in vals])


def levi(a: Matrix) -> Matrix:
    """``diag(A, A^{-t})``."""
    n = a.nrows
    z = Matrix.zeros(n)
    return Matrix.block([[a, z], [z, inverse(a).T]])


def lower_unipotent(c: Matrix) -> Matrix:
    n = c.nrows
    return Matrix.block([[Matrix.identity(n), Matrix.zeros(n)], [c, Matrix.identity(n)]])


def upper_unipotent(b: Matrix) -> Matrix:
    n = b.nrows
    return Matrix.block([[Matrix.identity(n), b], [Matrix.zeros(n), Matrix.identity(n)]])


# -- the theta-nonnegative monoid ------------------------------------------


def is_in_theta_monoid(g: Matrix) -> bool:
    """Symplectic, ``D`` invertible and ``C D^t``, ``D^t B`` positive semidefinite.

    This is the block criterion for the contraction semigroup.  It does not
    see the sign of ``det A``, so it also accepts e.g. ``-I``; use
    :func:`theta_triple_factor` to certify membership in the identity-component
    factorization.
    """
    if not is_symplectic(g):
        return False
    _, b, c, d = blocks(g)
    if det(d) == 0:
        return False
    return is_positive_semidefinite(c @ d.T) and is_positive_semidefinite(d.T @ b)


class FactorizationError(ValueError):
    pass


def theta_triple_factor(g: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """``g = u_minus @ l @ u_plus`` anchored on the upper-left block ``A``.

    ``u_minus = [[I, 0], [C A^-1, I]]``, ``l = diag(A, A^-t)``,
    ``u_plus = [[I, A^-1 B], [0, I]]``.  Raises :class:`FactorizationError`
    unless ``A`` is invertible with ``det A > 0`` and both unipotent blocks are
    symmetric positive semidefinite.
    """
    if not is_symplectic(g):
        raise FactorizationError("matrix is not symplectic")
    a, b, c, _ = blocks(g)
    da = det(a)
    if da == 0:
        raise FactorizationError("upper-left block is singular")
    if da < 0:
        raise FactorizationError("det A < 0: Levi factor outside the identity component")
    a_inv = inverse(a)
    lower = c @ a_inv
    upper = a_inv @ b
    for name, s in (("C A^-1", lower), ("A^-1 B", upper)):
        if not s.is_symmetric() or not is_positive_semidefinite(s):
            raise FactorizationError(f"{name} is not symmetric positive semidefinite")
    factors = lower_unipotent(lower), levi(a), upper_unipotent(upper)
    if factors[0] @ factors[1] @ factors[2] != g:
        raise FactorizationError("reassembly failed")
    return factors


# -- the cell U* ------------------------------------------------------------


def ustar_index_pattern(n: int) -> list[tuple[int, int]]:
    """Parameter keys ``(p, q)`` in product order."""
    return [(p, i) for i in range(1, n + 1) for p in range(n + 1 - i, n + 1)]


@dataclass(frozen=True)
class UStarParams:
    """Parameters ``a[(p, q)]`` of ``prod_i y_{n+1-i}(a_{n+1-i,i}) .. y_n(a_{n,i})``."""

    n: int
    a: Mapping[tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "a", {tuple(k): to_fraction(v) for k, v in dict(self.a).items()})

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        return self.a[key]

    def is_complete(self) -> bool:
        return all(k in self.a for k in ustar_index_pattern(self.n))

    def in_ustar(self) -> bool:
        return self.is_complete() and all(self.a[k] != 0 for k in ustar_index_pattern(self.n))

    def in_positive_part(self) -> bool:
        """All parameters nonzero and every ``a_{n,q} > 0``."""
        return self.in_ustar() and all(self.a[(self.n, q)] > 0 for q in range(1, self.n + 1))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "a": {f"{p},{q}": format_rational(self.a[(p, q)]) for p, q in ustar_index_pattern(self.n) if (p, q) in self.a},
        }

    @classmethod
    def from_json(cls, obj: dict) -> UStarParams:
        a = {}
        for key, val in obj["a"].items():
            p, q = (int(x) for x in key.split(","))
            a[(p, q)] = to_fraction(val)
        return cls(int(obj["n"]), a)


def _right_mul_y(rows: list[list[Fraction]], p: int, a: Fraction, n: int) -> None:
    # rows <- rows @ y_p(a), done as column operations
    if p == n:
        for r in rows:
            r[n - 1] += a * r[2 * n - 1]
    else:
        for r in rows:
            r[p - 1] += a * r[p]
            r[n + p] -= a * r[n + p - 1]


def u_star_product(params: UStarParams, drop_last_generator: bool = False) -> Matrix:
    """The product matrix; ``drop_last_generator`` deletes every ``y_n`` factor."""
    n = params.n
    if not params.is_complete():
        missing = [k for k in ustar_index_pattern(n) if k not in params.a]
        raise ValueError(f"incomplete parameters, missing {missing}")
    rows = [[Fraction(int(i == j)) for j in range(2 * n)] for i in range(2 * n)]
    for p, q in ustar_index_pattern(n):
        if drop_last_generator and p == n:
            continue
        _right_mul_y(rows, p, params.a[(p, q)], n)
    return Matrix(rows)


def _prod(values) -> Fraction:
    out = Fraction(1)
    for v in values:
        out *= v
    return out


def closed_form_c_minor(params: UStarParams, k: int) -> Fraction:
    n, a = params.n, params.a
    return (
        _prod(a[(n, p)] for p in range(1, k + 1))
        * _prod(a[(n - i + j, i)] for i in range(k + 1, n + 1) for j in range(1, k + 1))
        * _prod(a[(n - i + j, i)] ** 2 for i in range(2, k + 1) for j in range(1, i))
    )


def closed_form_a_minor(params: UStarParams, k: int) -> Fraction:
    n, a = params.n, params.a
    return _prod(a[(n - i + j, i)] for i in range(k + 1, n + 1) for j in range(1, k + 1))


def closed_form_gram_minor(params: UStarParams, k: int) -> Fraction:
    n, a = params.n, params.a
    return _prod(a[(n, p)] for p in range(1, k + 1)) * _prod(
        a[(q, i)] ** 2 for q, i in ustar_index_pattern(n) if q < n and q + i <= n + k
    )


@dataclass(frozen=True)
class MinorIdentity:
    name: str
    k: int
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def minor_identity_report(params: UStarParams) -> list[MinorIdentity]:
    """Computed minors of ``u_star_product(params)`` beside their closed forms.

    For ``k = 1..n`` the minors are ``C`` and ``A`` on rows ``n-k+1..n`` and
    columns ``1..k``, and the leading ``k x k`` minor of ``A^t C``.
    """
    n = params.n
    u = u_star_product(params)
    a_blk, _, c_blk, _ = blocks(u)
    gram = a_blk.T @ c_blk
    out = []
    for k in range(1, n + 1):
        rows, cols = range(n - k, n), range(k)
        out.append(MinorIdentity("C", k, minor(c_blk, rows, cols), closed_form_c_minor(params, k)))
        out.append(MinorIdentity("A", k, minor(a_blk, rows, cols), closed_form_a_minor(params, k)))
        out.append(MinorIdentity("AtC", k, minor(gram, range(k), range(k)), closed_form_gram_minor(params, k)))
    return out


def theorem_dense_check(params: UStarParams) -> bool:
    """Whether ``A^t C`` of the product is positive definite."""
    if not params.in_positive_part():
        raise ValueError("parameters must be nonzero with every a_{n,q} > 0")
    a_blk, _, c_blk, _ = blocks(u_star_product(params))
    return is_positive_definite(a_blk.T @ c_blk)
