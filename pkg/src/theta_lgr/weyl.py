"""The Weyl group of type B_n / C_n as signed permutations of {1..n}.

Generators are ``s_i = (i, i+1)`` for ``1 <= i < n`` and ``t``, the sign change
of ``n``.  In words the letter ``n`` stands for ``t``.  Composition is
functional: ``(u * v)(i) == u(v(i))``, so the word ``(a, b, c)`` is the element
``g_a * g_b * g_c`` and acts on points right to left.

The parabolic subgroup ``W_J`` is generated by ``s_1..s_{n-1}``.  Cosets
``w W_J`` are indexed by subsets ``K`` of ``{1..n}`` (the absolute values that
``w`` sends to negatives) and double cosets ``W_J w W_J`` by ``#K``.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .linalg import Matrix

Word = tuple[int, ...]


@dataclass(frozen=True)
class SignedPermutation:
    """``image[i-1] == w(i)``; ``w(-i) == -w(i)`` is implied."""

    image: tuple[int, ...]

    def __post_init__(self):
        img = tuple(int(x) for x in self.image)
        if sorted(abs(x) for x in img) != list(range(1, len(img) + 1)):
            raise ValueError(f"{img} is not a signed permutation")
        object.__setattr__(self, "image", img)

    @property
    def n(self) -> int:
        return len(self.image)

    @classmethod
    def identity(cls, n: int) -> SignedPermutation:
        return cls(tuple(range(1, n + 1)))

    def __call__(self, i: int) -> int:
        if i > 0:
            return self.image[i - 1]
        if i < 0:
            return -self.image[-i - 1]
        raise ValueError("0 is not in the domain")

    def __mul__(self, other: SignedPermutation) -> SignedPermutation:
        return compose(self, other)

    def inverse(self) -> SignedPermutation:
        inv = [0] * self.n
        for i, v in enumerate(self.image, start=1):
            inv[abs(v) - 1] = i if v > 0 else -i
        return SignedPermutation(tuple(inv))

    def is_identity(self) -> bool:
        return self.image == tuple(range(1, self.n + 1))

    def to_json(self) -> list[int]:
        return list(self.image)

    @classmethod
    def from_json(cls, data: Sequence[int]) -> SignedPermutation:
        return cls(tuple(data))

    def __repr__(self) -> str:
        return f"SignedPermutation{self.image}"


def compose(u: SignedPermutation, v: SignedPermutation) -> SignedPermutation:
    if u.n != v.n:
        raise ValueError(f"rank mismatch: {u.n} vs {v.n}")
    return SignedPermutation(tuple(u(x) for x in v.image))


def generator(letter: int, n: int) -> SignedPermutation:
    """``s_letter`` for ``letter < n``, ``t`` for ``letter == n``."""
    if not 1 <= letter <= n:
        raise ValueError(f"generator index {letter} out of range for rank {n}")
    img = list(range(1, n + 1))
    if letter == n:
        img[n - 1] = -n
    else:
        img[letter - 1], img[letter] = letter + 1, letter
    return SignedPermutation(tuple(img))


def word_to_perm(word: Iterable[int], n: int) -> SignedPermutation:
    w = SignedPermutation.identity(n)
    for letter in word:
        w = w * generator(letter, n)
    return w


def longest_element(n: int) -> SignedPermutation:
    return SignedPermutation(tuple(-i for i in range(1, n + 1)))


# -- roots and lengths -------------------------------------------------------
#
# Roots of C_n in the basis e_1..e_n: e_i - e_j, e_i + e_j (i < j), 2 e_i.
# A root is positive iff its lowest-index nonzero coefficient is positive.  A
# signed permutation sends e_i to sign(w(i)) e_|w(i)|.


def _pair_is_negative(a: int, b: int) -> bool:
    # sign of  sgn(a) e_|a| + sgn(b) e_|b|  with |a| != |b|
    return (a < 0) if abs(a) < abs(b) else (b < 0)


def length(w: SignedPermutation) -> int:
    """Coxeter length, counted as the positive roots sent to negative roots."""
    img = w.image
    n = len(img)
    count = sum(1 for a in img if a < 0)
    for i in range(n):
        a = img[i]
        for j in range(i + 1, n):
            b = img[j]
            if _pair_is_negative(a, -b):  # e_i - e_j
                count += 1
            if _pair_is_negative(a, b):  # e_i + e_j
                count += 1
    return count


def _sends_simple_root_negative(w: SignedPermutation, letter: int) -> bool:
    n = w.n
    if letter == n:
        return w(n) < 0
    return _pair_is_negative(w(letter), -w(letter + 1))


def is_left_descent(w: SignedPermutation, letter: int) -> bool:
    return _sends_simple_root_negative(w.inverse(), letter)


def is_right_descent(w: SignedPermutation, letter: int) -> bool:
    return _sends_simple_root_negative(w, letter)


def reduced_word(w: SignedPermutation) -> Word:
    """Greedy reduced word: repeatedly strip the smallest left descent."""
    n = w.n
    letters = []
    cur = w
    while not cur.is_identity():
        letter = next(a for a in range(1, n + 1) if is_left_descent(cur, a))
        letters.append(letter)
        cur = generator(letter, n) * cur
    return tuple(letters)


def descent_length(w: SignedPermutation) -> int:
    """Length via greedy descent stripping; a cross-check on :func:`length`."""
    return len(reduced_word(w))


def is_reduced(word: Sequence[int], n: int) -> bool:
    return length(word_to_perm(word, n)) == len(word)


def reduced_words(w: SignedPermutation) -> Iterator[Word]:
    """Every reduced word of ``w``.  Exponential; meant for tiny ranks."""
    if w.is_identity():
        yield ()
        return
    for a in range(1, w.n + 1):
        if is_left_descent(w, a):
            for rest in reduced_words(generator(a, w.n) * w):
                yield (a,) + rest


def random_reduced_word(w: SignedPermutation, rng: random.Random) -> Word:
    letters = []
    cur = w
    while not cur.is_identity():
        letter = rng.choice([a for a in range(1, w.n + 1) if is_left_descent(cur, a)])
        letters.append(letter)
        cur = generator(letter, w.n) * cur
    return tuple(letters)


def random_element(rng: random.Random, n: int) -> SignedPermutation:
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    return SignedPermutation(tuple(p if rng.random() < 0.5 else -p for p in perm))


def enumerate_group(n: int) -> dict[SignedPermutation, int]:
    """All of W with lengths, by breadth-first search on the Cayley graph."""
    e = SignedPermutation.identity(n)
    dist = {e: 0}
    queue = deque([e])
    gens = [generator(a, n) for a in range(1, n + 1)]
    while queue:
        w = queue.popleft()
        for g in gens:
            v = w * g
            if v not in dist:
                dist[v] = dist[w] + 1
                queue.append(v)
    return dist


# -- parabolic cosets --------------------------------------------------------


def _check_subset(K: Iterable[int], n: int) -> frozenset[int]:
    K = frozenset(K)
    if any(not 1 <= k <= n for k in K):
        raise ValueError(f"{sorted(K)} is not a subset of 1..{n}")
    return K


def w_K_word(K: Iterable[int], n: int) -> Word:
    """Reduced word of ``w_K``: blocks ``s_k s_{k+1} .. s_{n-1} t``, largest ``k`` leftmost."""
    K = _check_subset(K, n)
    word: list[int] = []
    for k in sorted(K, reverse=True):
        word.extend(range(k, n + 1))
    return tuple(word)


def build_w_K(K: Iterable[int], n: int) -> SignedPermutation:
    """Minimal representative of the coset indexed by ``K``."""
    return word_to_perm(w_K_word(K, n), n)


def build_x_k(k: int, n: int) -> SignedPermutation:
    """Minimal double coset representative, by ``x_{i+1} = t s_{n-1} .. s_{n-i} x_i``."""
    if not 0 <= k <= n:
        raise ValueError(f"double coset index {k} out of range for rank {n}")
    x = SignedPermutation.identity(n)
    if k == 0:
        return x
    x = generator(n, n)
    for i in range(1, k):
        prefix = (n,) + tuple(range(n - 1, n - i - 1, -1))
        x = word_to_perm(prefix, n) * x
    return x


def coset_index_of(w: SignedPermutation) -> frozenset[int]:
    return frozenset(-v for v in w.image if v < 0)


def double_coset_index(w: SignedPermutation) -> int:
    return sum(1 for v in w.image if v < 0)


def f_invariant(K: Iterable[int], n: int) -> tuple[int, ...]:
    """``f_K(j) = j - #(K ∩ {1..j})`` for ``j = 1..n``."""
    K = _check_subset(K, n)
    return tuple(j - sum(1 for k in K if k <= j) for j in range(1, n + 1))


def f_count(w: SignedPermutation) -> tuple[int, ...]:
    """The defining count ``#{i > 0 : 0 <= w(i) <= j}``."""
    return tuple(sum(1 for v in w.image if 0 <= v <= j) for j in range(1, w.n + 1))


def subset_from_profile(profile: Sequence[int]) -> frozenset[int]:
    """The ``K`` with ``#(K ∩ {1..j}) == profile[j-1]``; ValueError if none exists."""
    K = set()
    prev = 0
    for j, c in enumerate(profile, start=1):
        step = c - prev
        if step == 1:
            K.add(j)
        elif step != 0:
            raise ValueError(f"profile {tuple(profile)} is not a counting profile")
        prev = c
    return frozenset(K)


def bruhat_leq_cosets(K: Iterable[int], L: Iterable[int], n: int) -> bool:
    """``w_K <= w_L`` in Bruhat order, by comparing prefix counts."""
    K, L = _check_subset(K, n), _check_subset(L, n)
    return all(
        sum(1 for k in K if k <= j) <= sum(1 for m in L if m <= j) for j in range(1, n + 1)
    )


def left_multiplication(letter: int, K: Iterable[int], n: int) -> tuple[str, object]:
    """Predict ``g . w_K`` for the generator ``g = letter``.

    Returns ``("coset", K')`` when ``g w_K = w_{K'}`` and ``("right", j)`` when
    ``g w_K = w_K s_j``.  In the right-multiplication case with ``i, i+1``
    both outside ``K`` the index is ``i - #(K ∩ {1..i-1})``.
    """
    K = _check_subset(K, n)
    i = letter
    if not 1 <= i <= n:
        raise ValueError(f"letter {i} out of range for rank {n}")
    if i == n:
        return "coset", K ^ {n}
    if i not in K and i + 1 in K:
        return "coset", (K - {i + 1}) | {i}
    if i in K and i + 1 not in K:
        return "coset", (K - {i}) | {i + 1}
    below = sum(1 for k in K if k < i)
    return "right", (n - 1 - below) if i in K else (i - below)


def dual_index(K: Iterable[int], n: int) -> frozenset[int]:
    return frozenset(range(1, n + 1)) - _check_subset(K, n)


def min_length_single(K: Iterable[int], n: int) -> int:
    K = _check_subset(K, n)
    return (n + 1) * len(K) - sum(K)


def max_length_single(K: Iterable[int], n: int) -> int:
    """Length of the longest element of ``w_K W_J``."""
    return min_length_single(K, n) + n * (n - 1) // 2


def max_length_double(k: int, n: int) -> int:
    """Length of the longest element of ``W_J x_k W_J``."""
    if not 0 <= k <= n:
        raise ValueError(f"double coset index {k} out of range for rank {n}")
    return n * (n - 1) // 2 + k * (k + 1) // 2 + n * k - k * k


def subsets(n: int) -> list[frozenset[int]]:
    return [frozenset(i + 1 for i in range(n) if mask >> i & 1) for mask in range(1 << n)]


# -- Bruhat order on all of W -------------------------------------------------


def bruhat_leq(u: SignedPermutation, w: SignedPermutation) -> bool:
    """Subword criterion against the greedy reduced word of ``w``."""
    word = reduced_word(w)
    n = w.n
    gens = [generator(a, n) for a in word]
    reach = {SignedPermutation.identity(n)}
    for g in gens:
        reach |= {x * g for x in reach}
    return u in reach


# -- coroots ---------------------------------------------------------------
#
# Simple coroots of the dual system (type B_n, alpha_n^vee short):
# alpha_i^vee = e_i - e_{i+1}, alpha_n^vee = e_n.  Coroots are integer vectors
# in simple-coroot coordinates.


@lru_cache(maxsize=None)
def pairing_matrix(n: int) -> tuple[tuple[int, ...], ...]:
    """``P[i][j] = <alpha_{i+1}, alpha_{j+1}^vee>``; the transposed C_n Cartan matrix."""
    P = [[0] * n for _ in range(n)]
    for i in range(n):
        P[i][i] = 2
        if i + 1 < n:
            P[i][i + 1] = -1
            P[i + 1][i] = -1
    if n >= 2:
        P[n - 1][n - 2] = -2
    return tuple(tuple(r) for r in P)


def reflect_coroot(letter: int, beta: Sequence[int], n: int) -> tuple[int, ...]:
    """``s_letter`` applied to a coroot given in simple-coroot coordinates."""
    P = pairing_matrix(n)
    c = sum(P[letter - 1][j] * beta[j] for j in range(n))
    out = list(beta)
    out[letter - 1] -= c
    return tuple(out)


def simple_coroot(letter: int, n: int) -> tuple[int, ...]:
    return tuple(int(j == letter - 1) for j in range(n))


def coroot_to_e_basis(beta: Sequence[int]) -> tuple[int, ...]:
    n = len(beta)
    v = [0] * n
    for j, c in enumerate(beta):
        v[j] += c
        if j + 1 < n:
            v[j + 1] -= c
    return tuple(v)


def reflection_sequence(word: Sequence[int], n: int) -> list[tuple[int, ...]]:
    """Positive coroots ``beta_j = s_{i_k} ... s_{i_{j+1}} alpha_{i_j}^vee`` of a reduced word."""
    word = tuple(word)
    if any(not 1 <= a <= n for a in word):
        raise ValueError("letter out of range")
    if not is_reduced(word, n):
        raise ValueError(f"word {word} is not reduced")
    seq = []
    for j, a in enumerate(word):
        beta = simple_coroot(a, n)
        for b in word[j + 1 :]:
            beta = reflect_coroot(b, beta, n)
        seq.append(beta)
    return seq


def top_coset_word(n: int) -> Word:
    """``prod_{i=1..n} s_{n+1-i} .. s_{n-1} t``: reduced word of ``w_{{1..n}}``."""
    word: list[int] = []
    for i in range(1, n + 1):
        word.extend(range(n + 1 - i, n + 1))
    return tuple(word)


def levi_longest_word(n: int) -> Word:
    """``top_coset_word`` with every ``t`` deleted: the longest element of ``W_J``."""
    return tuple(a for a in top_coset_word(n) if a != n)


# -- matrix lifts -------------------------------------------------------------


@lru_cache(maxsize=None)
def simple_lift(letter: int, n: int) -> Matrix:
    """``x_i(-1) y_i(1) x_i(-1)`` for the generator ``letter``."""
    from .symplectic import gen_x, gen_y

    return gen_x(letter, -1, n) @ gen_y(letter, 1, n) @ gen_x(letter, -1, n)


def lift_matrix(w: SignedPermutation | Sequence[int], n: int | None = None) -> Matrix:
    """The lift of ``w`` to Sp_{2n}, multiplied along a reduced word.

    ``w`` may be a :class:`SignedPermutation` (its greedy reduced word is used)
    or a word, which must then be reduced.
    """
    if isinstance(w, SignedPermutation):
        if n is not None and n != w.n:
            raise ValueError("rank mismatch")
        n = w.n
        word = reduced_word(w)
    else:
        if n is None:
            raise ValueError("rank is required when lifting a word")
        word = tuple(w)
        if not is_reduced(word, n):
            raise ValueError(f"word {word} is not reduced")
    m = Matrix.identity(2 * n)
    for a in word:
        m = m @ simple_lift(a, n)
    return m
