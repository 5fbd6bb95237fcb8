"""Seeded random test data: rational matrices, stratum samples, U* parameters.

Every function takes an explicit ``random.Random`` so a single seed fixes a
whole corpus.  Entries are small integers (optionally divided by a small
denominator); this is a harness choice that keeps exact arithmetic cheap.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Union

from . import weyl
from .lagrangian import LagrangianPoint, base_point
from .linalg import Matrix, det
from .symplectic import UStarParams, levi, lower_unipotent, upper_unipotent, ustar_index_pattern

Stratum = Union[tuple, frozenset, set, list, str]

BOUND = 3


def random_rational(rng: random.Random, bound: int = BOUND, max_den: int = 1, nonzero: bool = False) -> Fraction:
    while True:
        x = Fraction(rng.randint(-bound, bound), rng.randint(1, max_den))
        if x or not nonzero:
            return x


def random_positive(rng: random.Random, bound: int = BOUND, max_den: int = 1) -> Fraction:
    return Fraction(rng.randint(1, bound), rng.randint(1, max_den))


def random_matrix(rng: random.Random, nrows: int, ncols: int | None = None, bound: int = BOUND, max_den: int = 1) -> Matrix:
    ncols = nrows if ncols is None else ncols
    return Matrix([[random_rational(rng, bound, max_den) for _ in range(ncols)] for _ in range(nrows)], ncols=ncols)


def random_invertible(rng: random.Random, n: int, positive_det: bool = True, bound: int = BOUND) -> Matrix:
    """Rejection-sampled invertible matrix; with ``positive_det`` the first column is negated if needed."""
    while True:
        g = random_matrix(rng, n, bound=bound)
        d = det(g)
        if d == 0:
            continue
        if positive_det and d < 0:
            g = Matrix([[-r[0], *r[1:]] for r in g.rows()], ncols=n)
        return g


def random_symmetric(rng: random.Random, n: int, bound: int = BOUND) -> Matrix:
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = random_rational(rng, bound)
    return Matrix(rows, ncols=n)


def random_unit_lower(rng: random.Random, n: int, bound: int = BOUND) -> Matrix:
    return Matrix(
        [[Fraction(1) if i == j else (random_rational(rng, bound) if i > j else Fraction(0)) for j in range(n)] for i in range(n)],
        ncols=n,
    )


def random_psd(rng: random.Random, n: int, support: Iterable[int] | None = None) -> Matrix:
    """``L diag(D) L^t`` with ``D`` positive exactly on ``support`` (1-based; default all)."""
    support = frozenset(range(1, n + 1)) if support is None else frozenset(support)
    L = random_unit_lower(rng, n)
    D = [random_positive(rng) if j + 1 in support else Fraction(0) for j in range(n)]
    return L @ Matrix.diag(D) @ L.T


def random_gram_psd(rng: random.Random, n: int, r: int) -> Matrix:
    """``G^t G`` for a random ``r x n`` matrix ``G``."""
    g = random_matrix(rng, r, n)
    return g.T @ g


def random_cell_factor(rng: random.Random, K: Iterable[int], n: int) -> Matrix:
    """A lower-triangular factor supported on the columns in ``K`` with positive diagonal there."""
    K = frozenset(K)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for j in range(n):
        if j + 1 not in K:
            continue
        rows[j][j] = random_positive(rng)
        for i in range(j + 1, n):
            rows[i][j] = random_rational(rng)
    return Matrix(rows, ncols=n)


# -- points -------------------------------------------------------------------


def sample_double(rng: random.Random, k: int, l: int, n: int) -> LagrangianPoint:
    """``diag(g, g^-t) . I_{k,l}`` with random ``det g > 0``."""
    base = base_point(k, l, n)
    return base.left_multiply(levi(random_invertible(rng, n)))


def sample_cell(rng: random.Random, K: Iterable[int], n: int) -> LagrangianPoint:
    """``[I; L diag(D) L^t]`` whose LDL support is ``K``."""
    K = weyl._check_subset(K, n)
    return LagrangianPoint.from_chart_form(random_psd(rng, n, K))


def sample_interior(rng: random.Random, n: int) -> LagrangianPoint:
    return LagrangianPoint.from_chart_form(random_psd(rng, n))


def sample_nonnegative(rng: random.Random, n: int) -> LagrangianPoint:
    """A theta-nonnegative point in a random stratum, with a scrambled representative."""
    k = rng.randint(0, n)
    l = rng.randint(k, n)
    return sample_double(rng, k, l, n).right_multiply(random_invertible(rng, n, positive_det=False))


def sample_any(rng: random.Random, n: int) -> LagrangianPoint:
    """A random Lagrangian point, usually outside the theta-nonnegative part.

    ``[I; S]`` with ``S`` symmetric, moved by a random Weyl lift and a random
    Levi element, with a scrambled representative.
    """
    p = LagrangianPoint.from_chart_form(random_symmetric(rng, n))
    w = weyl.random_element(rng, n)
    p = p.left_multiply(weyl.lift_matrix(w))
    if rng.random() < 0.5:
        p = p.left_multiply(levi(random_invertible(rng, n)))
    return p.right_multiply(random_invertible(rng, n, positive_det=False))


def sample_mixed(rng: random.Random, n: int) -> LagrangianPoint:
    """Half theta-nonnegative samples, half arbitrary ones."""
    if rng.random() < 0.5:
        return sample_nonnegative(rng, n)
    return sample_any(rng, n)


def parse_stratum(stratum: Stratum, n: int) -> Stratum:
    if isinstance(stratum, str):
        if stratum not in ("interior", "nonnegative", "any"):
            raise ValueError(f"unknown stratum {stratum!r}")
        return stratum
    if isinstance(stratum, tuple):
        if len(stratum) != 2:
            raise ValueError("double coset stratum must be a pair (k, l)")
        k, l = (int(x) for x in stratum)
        if not 0 <= k <= l <= n:
            raise ValueError(f"need 0 <= k <= l <= n, got ({k}, {l}) at n={n}")
        return (k, l)
    return weyl._check_subset(stratum, n)


def sample(stratum: Stratum, seed: int, n: int) -> LagrangianPoint:
    """One deterministic point: ``(k, l)`` pair, cell index set, or a named family."""
    return sample_many(stratum, seed, n, 1)[0]


def sample_many(stratum: Stratum, seed: int, n: int, count: int) -> list[LagrangianPoint]:
    if n < 1:
        raise ValueError("rank must be at least 1")
    stratum = parse_stratum(stratum, n)
    rng = random.Random(seed)
    if stratum == "interior":
        return [sample_interior(rng, n) for _ in range(count)]
    if stratum == "nonnegative":
        return [sample_nonnegative(rng, n) for _ in range(count)]
    if stratum == "any":
        return [sample_any(rng, n) for _ in range(count)]
    if isinstance(stratum, tuple):
        return [sample_double(rng, *stratum, n) for _ in range(count)]
    return [sample_cell(rng, stratum, n) for _ in range(count)]


# -- group data ---------------------------------------------------------------


def random_ustar_params(rng: random.Random, n: int, positive: bool = False, max_den: int = 3) -> UStarParams:
    """Nonzero rational parameters; with ``positive`` every ``a_{n,q}`` is positive."""
    a = {}
    for p, q in ustar_index_pattern(n):
        if positive and p == n:
            a[(p, q)] = random_positive(rng, max_den=max_den)
        else:
            a[(p, q)] = random_rational(rng, max_den=max_den, nonzero=True)
    return UStarParams(n, a)


def random_monoid_element(rng: random.Random, n: int) -> Matrix:
    """``u_minus(S1) diag(g, g^-t) u_plus(S2)`` with ``S1, S2`` PSD and ``det g > 0``."""
    s1 = random_psd(rng, n, {j for j in range(1, n + 1) if rng.random() < 0.7})
    s2 = random_psd(rng, n, {j for j in range(1, n + 1) if rng.random() < 0.7})
    return lower_unipotent(s1) @ levi(random_invertible(rng, n)) @ upper_unipotent(s2)
