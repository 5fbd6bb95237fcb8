"""Points of the Lagrangian Grassmannian LG(n, 2n) and their theta-positivity.

A point is the column span of a rank-n ``2n x n`` matrix ``[A; C]`` with
``A^t C`` symmetric; representatives differ by right multiplication with an
invertible ``n x n`` matrix.  The point is theta-nonnegative when ``A^t C`` is
positive semidefinite and theta-positive when it has a chart form ``[I; S]``
with ``S`` positive definite.

Subsets ``K`` of ``{1..n}`` and Plücker keys are 1-based, matching the
combinatorics in :mod:`theta_lgr.weyl`; matrix positions are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import weyl
from .linalg import (
    Matrix,
    det,
    format_rational,
    inverse,
    is_positive_definite,
    is_positive_semidefinite,
    kernel_basis,
    ldl,
    rank,
    to_fraction,
)


class NotLagrangianError(ValueError):
    """The matrix does not represent a Lagrangian subspace."""

    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        super().__init__(f"{invariant}: {detail}" if detail else invariant)


@dataclass(frozen=True)
class LagrangianPoint:
    n: int
    rep: Matrix

    def __post_init__(self):
        n, rep = self.n, self.rep
        if rep.shape != (2 * n, n):
            raise NotLagrangianError("shape", f"expected {2 * n}x{n}, got {rep.nrows}x{rep.ncols}")
        if rank(rep) != n:
            raise NotLagrangianError("rank", f"representative has rank {rank(rep)} < {n}")
        if not gram(self).is_symmetric():
            raise NotLagrangianError("isotropy", "A^t C is not symmetric")

    @classmethod
    def from_blocks(cls, a: Matrix, c: Matrix) -> LagrangianPoint:
        return cls(a.nrows, Matrix.vstack(a, c))

    @classmethod
    def from_chart_form(cls, s: Matrix) -> LagrangianPoint:
        """``[I; S]``."""
        return cls.from_blocks(Matrix.identity(s.nrows), s)

    @property
    def top(self) -> Matrix:
        return self.rep.select_rows(range(self.n))

    @property
    def bottom(self) -> Matrix:
        return self.rep.select_rows(range(self.n, 2 * self.n))

    def right_multiply(self, g: Matrix) -> LagrangianPoint:
        return LagrangianPoint(self.n, self.rep @ g)

    def left_multiply(self, g: Matrix) -> LagrangianPoint:
        return LagrangianPoint(self.n, g @ self.rep)

    def to_json(self) -> dict:
        return {"n": self.n, "rep": self.rep.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> LagrangianPoint:
        try:
            n = int(obj["n"])
            rep = Matrix.from_json(obj["rep"])
        except (KeyError, TypeError) as exc:
            raise ValueError("point JSON needs n and rep") from exc
        return cls(n, rep)


def equivalent(p: LagrangianPoint, q: LagrangianPoint) -> bool:
    if p.n != q.n:
        raise ValueError("rank mismatch")
    return rank(Matrix.hstack(p.rep, q.rep)) == p.n


def gram(p: LagrangianPoint) -> Matrix:
    """``A^t C``; changes by congruence under a change of representative."""
    return p.top.T @ p.bottom


def is_theta_nonnegative(p: LagrangianPoint) -> bool:
    return is_positive_semidefinite(gram(p))


def chart_form(p: LagrangianPoint) -> Matrix | None:
    """``S = C A^-1`` when ``A`` is invertible, else ``None``."""
    a = p.top
    if det(a) == 0:
        return None
    return p.bottom @ inverse(a)


def is_theta_positive(p: LagrangianPoint) -> bool:
    s = chart_form(p)
    return s is not None and is_positive_definite(s)


def theta_class(p: LagrangianPoint) -> str:
    if is_theta_positive(p):
        return "positive"
    if is_theta_nonnegative(p):
        return "nonnegative"
    return "none"


# -- strata ------------------------------------------------------------------


def _corner_diag(n: int, ones: Iterable[int], value=1) -> Matrix:
    ones = set(ones)
    return Matrix.diag([value if i in ones else 0 for i in range(n)])


def leading_ones(n: int, k: int) -> Matrix:
    """``diag(1^k, 0^(n-k))``."""
    return _corner_diag(n, range(k))


def trailing_ones(n: int, k: int) -> Matrix:
    """``diag(0^(n-k), 1^k)``."""
    return _corner_diag(n, range(n - k, n))


def _check_pair(k: int, l: int, n: int) -> None:
    if not 0 <= k <= l <= n:
        raise ValueError(f"need 0 <= k <= l <= n, got k={k}, l={l}, n={n}")


def base_point(k: int, l: int, n: int) -> LagrangianPoint:
    """``[diag(1^(n-k), 0^k); diag(0^(n-l), 1^l)]``."""
    _check_pair(k, l, n)
    return LagrangianPoint.from_blocks(leading_ones(n, n - k), trailing_ones(n, l))


def classify_double(p: LagrangianPoint) -> tuple[int, int]:
    """``(k, l)`` with ``k = dim ker A`` and ``l = rank C``."""
    return p.n - rank(p.top), rank(p.bottom)


def schubert_profile(p: LagrangianPoint) -> tuple[int, ...]:
    """``dim(F ∩ span(e_1..e_j))`` for ``j = 1..n``."""
    n = p.n
    return tuple(n - rank(p.rep.select_rows(range(j, 2 * n))) for j in range(1, n + 1))


def opposite_schubert_profile(p: LagrangianPoint) -> tuple[int, ...]:
    """``dim(F ∩ span(e_{n+1}..e_{n+j}))`` for ``j = 1..n``."""
    n = p.n
    return tuple(
        n - rank(p.rep.select_rows(list(range(n)) + list(range(n + j, 2 * n)))) for j in range(1, n + 1)
    )


def classify_schubert(p: LagrangianPoint) -> frozenset[int]:
    """The ``K`` with ``F`` in the Schubert cell of ``w_K``: solves ``f_K == profile``."""
    d = schubert_profile(p)
    try:
        return weyl.subset_from_profile([j - dj for j, dj in enumerate(d, start=1)])
    except ValueError as exc:
        raise NotLagrangianError("schubert-profile", str(exc)) from None


def classify_opposite_schubert(p: LagrangianPoint) -> frozenset[int]:
    """The ``K`` with ``F`` in the opposite Schubert cell of ``w_K``: ``f_{K^vee} == opposite profile``."""
    try:
        return weyl.subset_from_profile(opposite_schubert_profile(p))
    except ValueError as exc:
        raise NotLagrangianError("opposite-schubert-profile", str(exc)) from None


@dataclass(frozen=True)
class StratumSignature:
    k: int
    l: int
    K_plus: frozenset[int]
    K_minus: frozenset[int]

    def to_json(self) -> dict:
        return {"k": self.k, "l": self.l, "K_plus": sorted(self.K_plus), "K_minus": sorted(self.K_minus)}

    @classmethod
    def from_json(cls, obj: dict) -> StratumSignature:
        return cls(int(obj["k"]), int(obj["l"]), frozenset(obj["K_plus"]), frozenset(obj["K_minus"]))


def signature(p: LagrangianPoint) -> StratumSignature:
    k, l = classify_double(p)
    return StratumSignature(k, l, classify_schubert(p), classify_opposite_schubert(p))


def cell_index(p: LagrangianPoint) -> frozenset[int]:
    """Cholesky cell of a chart point ``[I; S]``: the support of the LDL pivots of ``S``."""
    s = chart_form(p)
    if s is None:
        raise ValueError("point is not in the chart [I; S]")
    if not is_positive_semidefinite(s):
        raise ValueError("chart matrix is not positive semidefinite")
    return ldl(s).support


def dim_R_KL(K: Iterable[int], L: Iterable[int], n: int) -> int:
    K, L = frozenset(K), frozenset(L)
    if not weyl.bruhat_leq_cosets(K, L, n):
        raise ValueError(f"w_{sorted(K)} is not below w_{sorted(L)}")
    return (n + 1) * (len(L) - len(K)) + sum(K) - sum(L)


def orbit_dimension_formula(k: int, l: int, n: int) -> int:
    _check_pair(k, l, n)
    return n * l - l * (l - 1) // 2 - k * (k + 1) // 2


def tangent_orbit_rank(p: LagrangianPoint) -> int:
    """Rank of the infinitesimal ``gl_n`` action at ``p``.

    ``X`` acts by ``diag(X, -X^t)``; the tangent vector is its image modulo
    the column span of the representative.
    """
    n, R = p.n, p.rep
    cols = list(R.T.rows())
    for i in range(2 * n):
        if len(cols) == 2 * n:
            break
        e = tuple(Fraction(int(r == i)) for r in range(2 * n))
        if rank(Matrix(cols + [e])) == len(cols) + 1:
            cols.append(e)
    frame_inv = inverse(Matrix(cols).T)
    quotient = frame_inv.select_rows(range(n, 2 * n))
    images = []
    for a in range(n):
        for b in range(n):
            # diag(E_ab, -E_ba) @ R
            rows = [[Fraction(0)] * n for _ in range(2 * n)]
            rows[a] = list(R.row(b))
            rows[n + b] = [-x for x in R.row(n + a)]
            tangent = quotient @ Matrix(rows)
            images.append([x for r in tangent.rows() for x in r])
    return rank(Matrix(images))


def orbit_dimension(k: int, l: int, n: int) -> int:
    """Dimension of the Levi orbit through ``base_point(k, l, n)``, from the exact tangent rank."""
    _check_pair(k, l, n)
    return tangent_orbit_rank(base_point(k, l, n))


# -- sequences with explicit limits -----------------------------------------


@dataclass(frozen=True)
class InversePowerSequence:
    """``member(p) = sum_d coeffs[d] * p^-d``; ``limit`` is ``coeffs[0]``."""

    coeffs: tuple[Matrix, ...]

    def member(self, p: int) -> Matrix:
        inv = Fraction(1, p)
        out = self.coeffs[0]
        for d, c in enumerate(self.coeffs[1:], start=1):
            out = out + c.scale(inv**d)
        return out

    @property
    def limit(self) -> Matrix:
        return self.coeffs[0]


def _stack_sequence(top: Sequence[Matrix], bot: Sequence[Matrix]) -> InversePowerSequence:
    return InversePowerSequence(tuple(Matrix.vstack(a, c) for a, c in zip(top, bot)))


def approach_sequence_of(k: int, l: int, n: int) -> InversePowerSequence:
    _check_pair(k, l, n)
    return _stack_sequence(
        [leading_ones(n, n - k), trailing_ones(n, k)],
        [trailing_ones(n, l), leading_ones(n, n - l)],
    )


def approach_sequence(k: int, l: int, n: int, p: int) -> LagrangianPoint:
    """Theta-positive points tending to ``base_point(k, l, n)`` as ``p`` grows."""
    if p < 1:
        raise ValueError("p must be a positive integer")
    return LagrangianPoint(n, approach_sequence_of(k, l, n).member(p))


def orbit_degeneration(k: int, l: int, k2: int, l2: int, n: int) -> InversePowerSequence:
    """Points of stratum ``(k, l)`` tending to ``base_point(k2, l2, n)``.

    Needs ``k <= k2 <= l2 <= l``.  Top block ``diag(1^(n-k2), (1/p) 1^(k2-k), 0^k)``,
    bottom block ``diag(0^(n-l), (1/p) 1^(l-l2), 1^l2)``.
    """
    if not 0 <= k <= k2 <= l2 <= l <= n:
        raise ValueError("need k <= k2 <= l2 <= l")
    return _stack_sequence(
        [leading_ones(n, n - k2), _corner_diag(n, range(n - k2, n - k))],
        [trailing_ones(n, l2), _corner_diag(n, range(n - l, n - l2))],
    )


def covering_pairs(n: int) -> list[tuple[frozenset[int], frozenset[int]]]:
    """Pairs ``(K, L)`` with ``K = L - {i}`` or ``K = L - {i} + {i+1}`` (``i`` in ``L``, ``i+1`` not)."""
    out = []
    for L in weyl.subsets(n):
        for i in sorted(L):
            out.append((L - {i}, L))
            if i < n and i + 1 not in L:
                out.append(((L - {i}) | {i + 1}, L))
    return out


def cell_degeneration(a: Matrix, K: Iterable[int], L: Iterable[int]) -> InversePowerSequence:
    """Chart matrices in cell ``L`` tending to ``a @ a.T`` in cell ``K``.

    ``a`` is a Cholesky-pattern factor for ``K``: lower triangular, zero outside
    the ``K`` columns, positive diagonal on ``K``.  ``(K, L)`` must be a covering
    pair.  For ``K = L - {i} + {i+1}`` the columns ``i, i+1`` of ``a`` are swapped
    first, which leaves ``a @ a.T`` unchanged.
    """
    K, L = frozenset(K), frozenset(L)
    diff_removed, diff_added = L - K, K - L
    if len(diff_removed) != 1 or len(diff_added) > 1:
        raise ValueError("not a covering pair")
    (i,) = diff_removed
    n = a.nrows
    if diff_added:
        (j,) = diff_added
        if j != i + 1:
            raise ValueError("not a covering pair")
        swap = list(range(n))
        swap[i - 1], swap[i] = swap[i], swap[i - 1]
        a = a.select_cols(swap)
    bump = Matrix.unit(n, n, i - 1, i - 1)
    # (a + bump/p)(a + bump/p)^t
    return InversePowerSequence((a @ a.T, a @ bump.T + bump @ a.T, bump @ bump.T))


def is_cell_factor(a: Matrix, K: Iterable[int]) -> bool:
    K = frozenset(K)
    n = a.nrows
    return all(
        (a[i, j] == 0 if (i < j or (j + 1) not in K) else True) for i in range(n) for j in range(n)
    ) and all(a[k - 1, k - 1] > 0 for k in K)


# -- Plücker coordinates -----------------------------------------------------


def admissible_sets(n: int) -> list[tuple[int, ...]]:
    """Increasing n-subsets of ``{1..2n}`` containing no pair ``{j, j+n}``."""
    out = []
    for subset in combinations(range(1, 2 * n + 1), n):
        reduced = {(k - 1) % n for k in subset}
        if len(reduced) == n:
            out.append(subset)
    return out


def plucker_sign(index: Sequence[int], n: int) -> int:
    d = [k if k <= n else k - n for k in index]
    inv = sum(1 for p in range(len(d)) for q in range(p + 1, len(d)) if d[p] > d[q])
    return -1 if inv % 2 else 1


def plucker(p: LagrangianPoint) -> dict[tuple[int, ...], Fraction]:
    """Signed maximal minors on admissible row sets; defined up to ``det g``."""
    n = p.n
    return {
        idx: plucker_sign(idx, n) * det(p.rep.select_rows([k - 1 for k in idx]))
        for idx in admissible_sets(n)
    }


def plucker_sign_class(p: LagrangianPoint) -> str:
    """``positive``, ``nonnegative`` or ``mixed``, after fixing the sign of the first nonzero coordinate."""
    coords = plucker(p)
    first = next(v for _, v in sorted(coords.items()) if v != 0)
    normalized = [v / first for v in coords.values()]
    if all(v > 0 for v in normalized):
        return "positive"
    if all(v >= 0 for v in normalized):
        return "nonnegative"
    return "mixed"


def gs_list(p: LagrangianPoint) -> frozenset[tuple[int, ...]]:
    """Gelfand-Serganova list: the support of the Plücker vector."""
    return frozenset(k for k, v in plucker(p).items() if v != 0)


def plucker_to_json(coords: dict[tuple[int, ...], Fraction]) -> dict[str, str]:
    return {",".join(map(str, k)): format_rational(v) for k, v in sorted(coords.items())}


# -- chart and flow ------------------------------------------------------------


def chart(p: LagrangianPoint) -> Matrix:
    """``B = ((A - C)(A + C)^-1)^t``, the coordinates in the eigenbasis of ``[[0, I], [I, 0]]``."""
    a, c = p.top, p.bottom
    s = a + c
    if det(s) == 0:
        raise ValueError("A + C is singular: point outside the chart domain")
    return ((a - c) @ inverse(s)).T


def unchart(b: Matrix) -> LagrangianPoint:
    """Inverse of :func:`chart`: ``[I + B^t; I - B^t]``."""
    n = b.nrows
    one = Matrix.identity(n)
    return LagrangianPoint.from_blocks(one + b.T, one - b.T)


def flow_matrix(c, n: int) -> Matrix:
    """``exp(x tau)`` with ``c = e^x``."""
    c = to_fraction(c)
    if c <= 0:
        raise ValueError("flow parameter must be positive")
    ch, sh = (c + 1 / c) / 2, (c - 1 / c) / 2
    one = Matrix.identity(n)
    return Matrix.block([[one.scale(ch), one.scale(sh)], [one.scale(sh), one.scale(ch)]])


def flow(c, p: LagrangianPoint) -> LagrangianPoint:
    return p.left_multiply(flow_matrix(c, p.n))


# -- orbit witness -----------------------------------------------------------


class OrbitWitnessError(RuntimeError):
    def __init__(self, residual: float, tolerance: float):
        self.residual = residual
        self.tolerance = tolerance
        super().__init__(f"witness residual {residual:.3e} exceeds tolerance {tolerance:.1e}")


def subspace_distance(x: np.ndarray, y: np.ndarray) -> float:
    """Spectral norm of the difference of the orthogonal projectors onto the column spans."""
    qx, _ = np.linalg.qr(x)
    qy, _ = np.linalg.qr(y)
    return float(np.linalg.norm(qx @ qx.T - qy @ qy.T, 2))


def levi_action_float(g: np.ndarray, k: int, l: int, n: int) -> np.ndarray:
    base = base_point(k, l, n).rep.to_float()
    big = np.zeros((2 * n, 2 * n))
    big[:n, :n] = g
    big[n:, n:] = np.linalg.inv(g).T
    return big @ base


def orbit_witness(p: LagrangianPoint, tolerance: float = 1e-9) -> np.ndarray:
    """A float ``g`` with ``det g > 0`` and ``diag(g, g^-t) . I_{k,l}`` spanning ``p``.

    Kernels and the Gram block are found exactly; only the normalization of
    the middle Gram block (a Cholesky factor) is done in floating point.
    Raises :class:`OrbitWitnessError` when the residual exceeds ``tolerance``.
    """
    if not is_theta_nonnegative(p):
        raise ValueError("point is not theta-nonnegative")
    n = p.n
    k, l = classify_double(p)
    a, c = p.top, p.bottom
    ker_c, ker_a = kernel_basis(c), kernel_basis(a)
    cols = list(ker_c.T.rows())
    middle_start = len(cols)
    for i in range(n):
        if len(cols) == n - k:
            break
        e = tuple(Fraction(int(r == i)) for r in range(n))
        if rank(Matrix(cols + [e] + list(ker_a.T.rows()))) == len(cols) + 1 + ker_a.ncols:
            cols.append(e)
    cols += list(ker_a.T.rows())
    frame = Matrix(cols).T
    g_mid = (frame.T @ gram(p) @ frame).submatrix(range(middle_start, n - k), range(middle_start, n - k))
    frame_f = frame.to_float()
    if l > k:
        chol = np.linalg.cholesky(g_mid.to_float())
        frame_f[:, middle_start : n - k] = frame_f[:, middle_start : n - k] @ np.linalg.inv(chol).T
    a_new = a.to_float() @ frame_f
    c_new = c.to_float() @ frame_f
    g = np.zeros((n, n))
    g[:, : n - k] = a_new[:, : n - k]
    if k:
        ck = c_new[:, n - l :]
        rhs = np.zeros((l, k))
        rhs[l - k :, :] = np.eye(k)
        g[:, n - k :] = ck @ np.linalg.solve(ck.T @ ck, rhs)
    if np.linalg.det(g) < 0:
        g[:, 0] = -g[:, 0]
    residual = subspace_distance(levi_action_float(g, k, l, n), p.rep.to_float())
    if not residual < tolerance:
        raise OrbitWitnessError(residual, tolerance)
    return g
