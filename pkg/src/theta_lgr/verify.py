"""Property suites behind ``theta-lgr verify``.

Each suite checks one family of properties at a fixed rank and returns a
:class:`SuiteResult` with case counts and the first counterexample as a
replayable JSON fixture.  All randomness comes from the ``random.Random``
passed in.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import weyl
from .lagrangian import (
    LagrangianPoint,
    OrbitWitnessError,
    approach_sequence_of,
    base_point,
    cell_degeneration,
    cell_index,
    chart,
    classify_double,
    classify_opposite_schubert,
    classify_schubert,
    covering_pairs,
    dim_R_KL,
    flow,
    is_theta_nonnegative,
    is_theta_positive,
    orbit_degeneration,
    orbit_dimension,
    orbit_dimension_formula,
    orbit_witness,
    plucker,
    plucker_sign_class,
)
from .linalg import det, format_rational
from .sampling import (
    random_cell_factor,
    random_invertible,
    random_ustar_params,
    sample_cell,
    sample_double,
    sample_mixed,
    sample_nonnegative,
)
from .symplectic import is_symplectic, minor_identity_report, theorem_dense_check

SUITES = ("weyl", "minors", "plucker", "flow", "cells", "orbits", "closure")
FLOW_PARAMETERS = (Fraction(3, 2), Fraction(2), Fraction(10))


@dataclass
class SuiteResult:
    suite: str
    n: int
    cases: int = 0
    failures: int = 0
    counterexample: dict | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def check(self, ok: bool, fixture: Callable[[], dict]) -> bool:
        self.cases += 1
        if not ok:
            self.failures += 1
            if self.counterexample is None:
                self.counterexample = fixture()
        return ok

    def to_json(self) -> dict:
        out = {"suite": self.suite, "n": self.n, "cases": self.cases, "failures": self.failures, "passed": self.passed}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


def _point_fixture(prop: str, p: LagrangianPoint, **extra) -> Callable[[], dict]:
    return lambda: {"property": prop, "point": p.to_json(), **extra}


# -- weyl ---------------------------------------------------------------------


def suite_weyl(n: int, count: int, rng: random.Random) -> SuiteResult:
    """Coset calculus against brute-force enumeration, plus lift well-definedness."""
    res = SuiteResult("weyl", n)
    group = enumerate_capped(n)
    if group is not None:
        levi_part = [w for w in group if all(v > 0 for v in w.image)]
        for w, dist in group.items():
            res.check(weyl.length(w) == dist, lambda w=w: {"property": "length", "w": w.to_json()})
        for K in weyl.subsets(n):
            wK = weyl.build_w_K(K, n)
            coset = [wK * v for v in levi_part]
            lengths = [group[u] for u in coset]
            fx = lambda K=K: {"property": "coset", "K": sorted(K)}
            res.check(group[wK] == min(lengths) and lengths.count(min(lengths)) == 1, fx)
            res.check(max(lengths) == weyl.max_length_single(K, n), fx)
            res.check(weyl.coset_index_of(wK) == K, fx)
            res.check(weyl.f_invariant(K, n) == weyl.f_count(wK), fx)
            for L in weyl.subsets(n):
                wL = weyl.build_w_K(L, n)
                res.check(
                    weyl.bruhat_leq_cosets(K, L, n) == weyl.bruhat_leq(wK, wL),
                    lambda K=K, L=L: {"property": "bruhat", "K": sorted(K), "L": sorted(L)},
                )
            for a in range(1, n + 1):
                kind, v = weyl.left_multiplication(a, K, n)
                rhs = weyl.build_w_K(v, n) if kind == "coset" else wK * weyl.generator(v, n)
                res.check(
                    weyl.generator(a, n) * wK == rhs,
                    lambda K=K, a=a: {"property": "left-multiplication", "K": sorted(K), "letter": a},
                )
        w0 = weyl.longest_element(n)
        for k in range(n + 1):
            xk = weyl.build_x_k(k, n)
            double = {u * xk * v for u in levi_part for v in levi_part}
            lengths = [group[u] for u in double]
            fx = lambda k=k: {"property": "double-coset", "k": k}
            res.check(group[xk] == min(lengths) and max(lengths) == weyl.max_length_double(k, n), fx)
            res.check(xk == weyl.build_w_K(range(n - k + 1, n + 1), n), fx)
            res.check(weyl.double_coset_index(w0 * xk) == n - k, fx)
    else:
        res.notes.append("group too large for enumeration; lift checks only")
    for _ in range(count):
        w = weyl.random_element(rng, n)
        words = {weyl.reduced_word(w), weyl.random_reduced_word(w, rng), weyl.random_reduced_word(w, rng)}
        lifts = {weyl.lift_matrix(word, n) for word in words}
        res.check(
            len(lifts) == 1 and is_symplectic(next(iter(lifts))),
            lambda w=w, words=words: {"property": "lift", "w": w.to_json(), "words": sorted(map(list, words))},
        )
    return res


def enumerate_capped(n: int, cap: int = 4):
    return weyl.enumerate_group(n) if n <= cap else None


# -- minors -------------------------------------------------------------------


def suite_minors(n: int, count: int, rng: random.Random) -> SuiteResult:
    res = SuiteResult("minors", n)
    if n < 2:
        res.notes.append("U* products need n >= 2")
        return res
    for _ in range(count):
        params = random_ustar_params(rng, n)
        report = minor_identity_report(params)
        bad = [m for m in report if not m.holds]
        res.check(
            not bad,
            lambda params=params, bad=bad: {
                "property": "minor-identity",
                "params": params.to_json(),
                "identity": bad[0].name,
                "k": bad[0].k,
                "computed": format_rational(bad[0].lhs),
                "closed_form": format_rational(bad[0].rhs),
            },
        )
        pos = random_ustar_params(rng, n, positive=True)
        res.check(theorem_dense_check(pos), lambda pos=pos: {"property": "gram-positive-definite", "params": pos.to_json()})
    return res


# -- plucker ------------------------------------------------------------------


def suite_plucker(n: int, count: int, rng: random.Random) -> SuiteResult:
    res = SuiteResult("plucker", n)
    expected = {"positive": "positive", "nonnegative": "nonnegative", "none": "mixed"}
    for _ in range(count):
        p = sample_mixed(rng, n)
        theta = "positive" if is_theta_positive(p) else ("nonnegative" if is_theta_nonnegative(p) else "none")
        got = plucker_sign_class(p)
        res.check(got == expected[theta], _point_fixture("sign-class", p, theta=theta, plucker_class=got))
        g = random_invertible(rng, n, positive_det=False)
        q = p.right_multiply(g)
        d = det(g)
        base, moved = plucker(p), plucker(q)
        res.check(
            all(moved[k] == d * v for k, v in base.items()) and plucker_sign_class(q) == got,
            _point_fixture("plucker-equivariance", p, g=g.to_json()),
        )
    return res


# -- flow ---------------------------------------------------------------------


def suite_flow(n: int, count: int, rng: random.Random) -> SuiteResult:
    res = SuiteResult("flow", n)
    for _ in range(count):
        p = sample_nonnegative(rng, n)
        b = chart(p)
        for c in FLOW_PARAMETERS:
            fx = _point_fixture("flow", p, c=format_rational(c))
            q = flow(c, p)
            bq = chart(q)
            contraction = b.is_zero() or bq.frobenius_sq() < b.frobenius_sq()
            res.check(
                is_theta_positive(q)
                and bq == b.scale(1 / (c * c))
                and flow(c, flow(2, p)).rep == flow(2 * c, p).rep
                and contraction,
                fx,
            )
    return res


# -- cells --------------------------------------------------------------------


def suite_cells(n: int, count: int, rng: random.Random) -> SuiteResult:
    res = SuiteResult("cells", n)
    all_K = weyl.subsets(n)
    for _ in range(count):
        K = rng.choice(all_K)
        p = sample_cell(rng, K, n)
        res.check(
            cell_index(p) == K == classify_schubert(p),
            _point_fixture("cell-coherence", p, K=sorted(K)),
        )
        q = sample_nonnegative(rng, n)
        res.check(det(q.top + q.bottom) != 0, _point_fixture("chart-domain", q))
    return res


# -- orbits -------------------------------------------------------------------


def suite_orbits(n: int, count: int, rng: random.Random, tolerance: float = 1e-9) -> SuiteResult:
    res = SuiteResult("orbits", n)
    for k in range(n + 1):
        for l in range(k, n + 1):
            res.check(
                classify_double(base_point(k, l, n)) == (k, l),
                lambda k=k, l=l: {"property": "base-point", "k": k, "l": l},
            )
            if n <= 4:
                got = orbit_dimension(k, l, n)
                res.check(
                    got == orbit_dimension_formula(k, l, n),
                    lambda k=k, l=l, got=got: {"property": "orbit-dimension", "k": k, "l": l, "rank": got},
                )
    full = frozenset(range(1, n + 1))
    res.check(
        dim_R_KL(frozenset(), full, n) == n * (n + 1) // 2,
        lambda: {"property": "top-dimension"},
    )
    for _ in range(count):
        k = rng.randint(0, n)
        l = rng.randint(k, n)
        p = sample_double(rng, k, l, n).right_multiply(random_invertible(rng, n, positive_det=False))
        res.check(classify_double(p) == (k, l), _point_fixture("orbit-class", p, k=k, l=l))
        kp, km = classify_schubert(p), classify_opposite_schubert(p)
        res.check(
            len(kp) == l and len(km) == k and weyl.bruhat_leq_cosets(km, kp, n),
            _point_fixture("richardson-signature", p, K_plus=sorted(kp), K_minus=sorted(km)),
        )
        try:
            orbit_witness(p, tolerance)
            ok, residual = True, None
        except OrbitWitnessError as exc:
            ok, residual = False, exc.residual
        res.check(ok, _point_fixture("orbit-witness", p, residual=residual))
    return res


# -- closure ------------------------------------------------------------------

CLOSURE_STEPS = range(1, 21)


def suite_closure(n: int, count: int, rng: random.Random) -> SuiteResult:
    """Orbit and cell degenerations, and approach sequences into the boundary."""
    res = SuiteResult("closure", n)
    for k in range(n + 1):
        for l in range(k, n + 1):
            seq = approach_sequence_of(k, l, n)
            res.check(
                LagrangianPoint(n, seq.limit) == base_point(k, l, n)
                and all(is_theta_positive(LagrangianPoint(n, seq.member(p))) for p in CLOSURE_STEPS),
                lambda k=k, l=l: {"property": "approach", "k": k, "l": l},
            )
            for k2 in range(k, l + 1):
                for l2 in range(k2, l + 1):
                    seq = orbit_degeneration(k, l, k2, l2, n)
                    ok = classify_double(LagrangianPoint(n, seq.limit)) == (k2, l2) and all(
                        classify_double(LagrangianPoint(n, seq.member(p))) == (k, l) for p in CLOSURE_STEPS
                    )
                    res.check(ok, lambda q=(k, l, k2, l2): {"property": "orbit-degeneration", "quadruple": list(q)})
    for K, L in covering_pairs(n):
        for _ in range(max(1, count // 10)):
            a = random_cell_factor(rng, K, n)
            seq = cell_degeneration(a, K, L)
            limit = LagrangianPoint.from_chart_form(seq.limit)
            ok = cell_index(limit) == K and all(
                cell_index(LagrangianPoint.from_chart_form(seq.member(p))) == L for p in CLOSURE_STEPS
            )
            res.check(
                ok,
                lambda K=K, L=L, a=a: {"property": "cell-degeneration", "K": sorted(K), "L": sorted(L), "factor": a.to_json()},
            )
    return res


SUITE_FUNCTIONS: dict[str, Callable[..., SuiteResult]] = {
    "weyl": suite_weyl,
    "minors": suite_minors,
    "plucker": suite_plucker,
    "flow": suite_flow,
    "cells": suite_cells,
    "orbits": suite_orbits,
    "closure": suite_closure,
}


def run_suites(suites, ranks, count: int, seed: int, tolerance: float = 1e-9) -> list[SuiteResult]:
    """Run each suite at each rank, each with its own generator derived from ``seed``."""
    out = []
    for name in suites:
        if name not in SUITE_FUNCTIONS:
            raise ValueError(f"unknown suite {name!r}")
        for n in ranks:
            rng = random.Random(f"{seed}:{name}:{n}")
            if name == "orbits":
                out.append(suite_orbits(n, count, rng, tolerance))
            else:
                out.append(SUITE_FUNCTIONS[name](n, count, rng))
    return out


def report(results: list[SuiteResult], seed: int) -> dict:
    return {"seed": seed, "passed": all(r.passed for r in results), "results": [r.to_json() for r in results]}
