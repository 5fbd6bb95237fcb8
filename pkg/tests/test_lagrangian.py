import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from theta_lgr import weyl
from theta_lgr import lagrangian as lg
from theta_lgr.lagrangian import LagrangianPoint, NotLagrangianError, StratumSignature
from theta_lgr.linalg import Matrix, det, rank
from theta_lgr.sampling import (
    random_cell_factor,
    random_gram_psd,
    random_invertible,
    sample_any,
    sample_cell,
    sample_double,
    sample_mixed,
    sample_nonnegative,
)
from theta_lgr.symplectic import levi

from oracles import double_class_oracle, plucker_oracle, theta_class_oracle

I2 = Matrix.identity(2)
ONES = Matrix([[1, 1], [1, 1]])
SWAP = Matrix([[0, 1], [1, 0]])


def chart_point(s):
    return LagrangianPoint.from_chart_form(Matrix(s) if not isinstance(s, Matrix) else s)


def top_point(n):
    return LagrangianPoint.from_blocks(Matrix.identity(n), Matrix.zeros(n))


def bottom_point(n):
    return LagrangianPoint.from_blocks(Matrix.zeros(n), Matrix.identity(n))


def schubert_point(K, n):
    """``w_K`` applied to the coordinate subspace ``span(e_1..e_n)``."""
    return LagrangianPoint(n, weyl.lift_matrix(weyl.build_w_K(K, n)).select_cols(range(n)))


# -- the point type --------------------------------------------------------------


def test_invalid_points_name_the_invariant():
    with pytest.raises(NotLagrangianError) as exc:
        LagrangianPoint(2, Matrix([[1, 0], [0, 1], [1, 2], [0, 1]]))
    assert exc.value.invariant == "isotropy"
    with pytest.raises(NotLagrangianError) as exc:
        LagrangianPoint(2, Matrix([[1, 0], [1, 0], [0, 0], [0, 0]]))
    assert exc.value.invariant == "rank"
    with pytest.raises(NotLagrangianError) as exc:
        LagrangianPoint(2, Matrix.identity(2))
    assert exc.value.invariant == "shape"


def test_point_json_round_trip():
    p = chart_point([[1, Fraction(1, 2)], [Fraction(1, 2), 3]])
    obj = p.to_json()
    assert obj["n"] == 2 and obj["rep"]["rows"] == 4
    assert LagrangianPoint.from_json(obj) == p
    sig = lg.signature(p)
    assert StratumSignature.from_json(sig.to_json()) == sig


def test_equivalent_examples():
    p = chart_point(ONES)
    assert lg.equivalent(p, p.right_multiply(Matrix([[2, 1], [1, 1]])))
    assert not lg.equivalent(top_point(1), bottom_point(1))
    assert lg.equivalent(chart_point(ONES), LagrangianPoint.from_blocks(I2.scale(2), ONES.scale(2)))


def test_gram_examples():
    assert lg.gram(chart_point(ONES)) == ONES
    assert lg.gram(bottom_point(3)).is_zero()
    for n in range(1, 5):
        for k in range(n + 1):
            for l in range(k, n + 1):
                expected = Matrix.diag([0] * (n - l) + [1] * (l - k) + [0] * k)
                assert lg.gram(lg.base_point(k, l, n)) == expected


def test_theta_class_examples():
    assert lg.theta_class(chart_point(I2)) == "positive"
    assert lg.theta_class(chart_point(ONES)) == "nonnegative"
    assert lg.theta_class(chart_point(SWAP)) == "none"


def test_base_point_examples():
    assert lg.base_point(0, 0, 3) == top_point(3)
    assert lg.base_point(3, 3, 3) == bottom_point(3)
    p = lg.base_point(1, 1, 2)
    assert p.top == Matrix.diag([1, 0]) and p.bottom == Matrix.diag([0, 1])
    with pytest.raises(ValueError):
        lg.base_point(2, 1, 3)


# -- classifiers -------------------------------------------------------------------


def test_classify_double_examples():
    assert lg.classify_double(chart_point(ONES)) == (0, 1)
    assert lg.classify_double(bottom_point(4)) == (4, 4)
    for n in range(1, 7):
        for k in range(n + 1):
            for l in range(k, n + 1):
                assert lg.classify_double(lg.base_point(k, l, n)) == (k, l)


def test_classify_schubert_examples():
    assert lg.schubert_profile(top_point(3)) == (1, 2, 3)
    assert lg.classify_schubert(top_point(3)) == frozenset()
    assert lg.schubert_profile(chart_point(ONES)) == (0, 1)
    assert lg.classify_schubert(chart_point(ONES)) == {1}
    assert lg.schubert_profile(bottom_point(3)) == (0, 0, 0)
    assert lg.classify_schubert(bottom_point(3)) == {1, 2, 3}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_schubert_points_have_signature_K_K(n):
    for K in weyl.subsets(n):
        p = schubert_point(K, n)
        sig = lg.signature(p)
        assert sig.K_plus == K and sig.K_minus == K
        assert (sig.k, sig.l) == (len(K), len(K))
        coords = {k: v for k, v in lg.plucker(p).items() if v}
        assert list(coords.values()) == [1]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_signature_of_double_coset_samples(n):
    rng = random.Random(n)
    for _ in range(40):
        k = rng.randint(0, n)
        l = rng.randint(k, n)
        p = sample_double(rng, k, l, n)
        sig = lg.signature(p)
        assert (sig.k, sig.l) == (k, l)
        assert len(sig.K_plus) == l and len(sig.K_minus) == k
        assert weyl.bruhat_leq_cosets(sig.K_minus, sig.K_plus, n)


def test_opposite_profile_is_dimension_count():
    # F = span(e_{n+1}) + span(e_2) at n=2 meets span(e_3) in dimension 1
    p = LagrangianPoint(2, Matrix([[0, 0], [0, 1], [1, 0], [0, 0]]))
    assert lg.opposite_schubert_profile(p) == (1, 1)
    assert lg.classify_opposite_schubert(p) == {1}


@pytest.mark.parametrize("n", [1, 2, 3])
def test_classifiers_are_representative_independent(n):
    rng = random.Random(50 + n)
    for _ in range(30):
        p = sample_mixed(rng, n)
        g = random_invertible(rng, n, positive_det=False)
        q = p.right_multiply(g)
        assert lg.signature(q) == lg.signature(p)
        assert lg.theta_class(q) == lg.theta_class(p)
        assert lg.plucker_sign_class(q) == lg.plucker_sign_class(p)
        assert lg.gs_list(q) == lg.gs_list(p)
        d = det(g)
        pp, pq = lg.plucker(p), lg.plucker(q)
        assert all(pq[key] == d * v for key, v in pp.items())


@pytest.mark.parametrize("n", [1, 2, 3])
def test_classifiers_match_oracles(n):
    rng = random.Random(70 + n)
    for _ in range(30):
        p = sample_mixed(rng, n)
        rows = p.rep.tolist()
        assert lg.classify_double(p) == double_class_oracle(rows, n)
        assert lg.theta_class(p) == theta_class_oracle(rows, n)
        assert lg.plucker(p) == plucker_oracle(rows, n)


# -- cells ---------------------------------------------------------------------------


def test_cell_index_examples():
    assert lg.cell_index(chart_point(Matrix.zeros(2))) == frozenset()
    assert lg.cell_index(chart_point(ONES)) == {1}
    assert lg.cell_index(chart_point(Matrix.identity(3))) == {1, 2, 3}
    with pytest.raises(ValueError):
        lg.cell_index(bottom_point(2))
    with pytest.raises(ValueError):
        lg.cell_index(chart_point(SWAP))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_cell_index_is_schubert_class(n):
    rng = random.Random(n)
    for K in weyl.subsets(n):
        for _ in range(4):
            p = sample_cell(rng, K, n)
            assert lg.cell_index(p) == K == lg.classify_schubert(p)


def test_cell_factors_match_pattern():
    rng = random.Random(3)
    for K in weyl.subsets(3):
        a = random_cell_factor(rng, K, 3)
        assert lg.is_cell_factor(a, K)
        assert lg.cell_index(chart_point(a @ a.T)) == K


def test_covering_pairs_small():
    pairs = set(lg.covering_pairs(2))
    f = frozenset
    assert pairs == {
        (f(), f({1})),
        (f({2}), f({1})),
        (f(), f({2})),
        (f({2}), f({1, 2})),
        (f({1}), f({1, 2})),
    }


@pytest.mark.parametrize("n", [1, 2, 3])
def test_cell_degenerations(n):
    rng = random.Random(n)
    for K, L in lg.covering_pairs(n):
        assert weyl.bruhat_leq_cosets(K, L, n)
        a = random_cell_factor(rng, K, n)
        seq = lg.cell_degeneration(a, K, L)
        assert seq.limit == a @ a.T
        assert lg.cell_index(chart_point(seq.limit)) == K
        for p in (1, 2, 7, 20):
            assert lg.cell_index(chart_point(seq.member(p))) == L


def test_cell_degeneration_rejects_non_covering():
    a = Matrix.zeros(3)
    with pytest.raises(ValueError):
        lg.cell_degeneration(a, [], [1, 2])
    with pytest.raises(ValueError):
        lg.cell_degeneration(a, [3], [1])


# -- orbit closures ----------------------------------------------------------------


def test_approach_sequence_examples():
    for n in range(1, 4):
        for k in range(n + 1):
            for l in range(k, n + 1):
                seq = lg.approach_sequence_of(k, l, n)
                assert LagrangianPoint(n, seq.limit) == lg.base_point(k, l, n)
                for p in (1, 2, 5):
                    q = lg.approach_sequence(k, l, n, p)
                    assert lg.is_theta_positive(q)
                    assert lg.classify_double(q) == (0, n)
    with pytest.raises(ValueError):
        lg.approach_sequence(0, 0, 2, 0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_orbit_degenerations(n):
    for k in range(n + 1):
        for l in range(k, n + 1):
            for k2 in range(k, l + 1):
                for l2 in range(k2, l + 1):
                    seq = lg.orbit_degeneration(k, l, k2, l2, n)
                    assert lg.classify_double(LagrangianPoint(n, seq.limit)) == (k2, l2)
                    assert LagrangianPoint(n, seq.limit) == lg.base_point(k2, l2, n)
                    for p in (1, 3, 20):
                        q = LagrangianPoint(n, seq.member(p))
                        assert lg.classify_double(q) == (k, l)
                        assert lg.is_theta_nonnegative(q)


def test_orbit_degeneration_needs_nested_pairs():
    with pytest.raises(ValueError):
        lg.orbit_degeneration(1, 1, 0, 1, 2)


# -- dimensions --------------------------------------------------------------------


def test_orbit_dimension_examples():
    assert lg.orbit_dimension(0, 0, 3) == 0
    assert lg.orbit_dimension(1, 1, 2) == 1
    for n in range(1, 5):
        assert lg.orbit_dimension(0, n, n) == n * (n + 1) // 2
        for k in range(n + 1):
            for l in range(k, n + 1):
                assert lg.orbit_dimension(k, l, n) == lg.orbit_dimension_formula(k, l, n)


def test_dim_R_KL_examples():
    assert lg.dim_R_KL([2], [2], 3) == 0
    assert lg.dim_R_KL([], [1, 2], 2) == 3
    assert lg.dim_R_KL([3], [1], 3) == 2
    assert lg.dim_R_KL([3], [1], 3) == weyl.length(weyl.build_w_K([1], 3)) - weyl.length(weyl.build_w_K([3], 3))
    with pytest.raises(ValueError):
        lg.dim_R_KL([1], [3], 3)
    for n in range(1, 6):
        assert lg.dim_R_KL([], range(1, n + 1), n) == n * (n + 1) // 2


# -- Plücker coordinates -----------------------------------------------------------


def test_admissible_sets():
    assert lg.admissible_sets(1) == [(1,), (2,)]
    assert lg.admissible_sets(2) == [(1, 2), (1, 4), (2, 3), (3, 4)]
    assert len(lg.admissible_sets(4)) == 16


def test_plucker_examples():
    a, c = Fraction(3), Fraction(-2)
    p = LagrangianPoint(1, Matrix([[a], [c]]))
    assert lg.plucker(p) == {(1,): a, (2,): c}
    s11, s12, s22 = Fraction(2), Fraction(5), Fraction(-7)
    s = Matrix([[s11, s12], [s12, s22]])
    assert lg.plucker(chart_point(s)) == {(1, 2): 1, (1, 4): s22, (2, 3): s11, (3, 4): det(s)}
    assert list(lg.plucker(chart_point(ONES)).values()) == [1, 1, 1, 0]
    assert lg.plucker_to_json(lg.plucker(chart_point(ONES))) == {"1,2": "1", "1,4": "1", "2,3": "1", "3,4": "0"}


def test_plucker_sign_class_examples():
    assert lg.plucker_sign_class(chart_point(I2)) == "positive"
    assert lg.plucker_sign_class(chart_point(ONES)) == "nonnegative"
    assert lg.plucker_sign_class(chart_point(SWAP)) == "mixed"
    assert list(lg.plucker(chart_point(SWAP)).values()) == [1, 0, 0, -1]


def test_gs_list_examples():
    assert lg.gs_list(chart_point(I2)) == set(lg.admissible_sets(2))
    assert lg.gs_list(top_point(2)) == {(1, 2)}
    assert lg.gs_list(chart_point(ONES)) == {(1, 2), (1, 4), (2, 3)}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_plucker_class_matches_theta_class(n):
    rng = random.Random(200 + n)
    expected = {"positive": "positive", "nonnegative": "nonnegative", "none": "mixed"}
    seen = set()
    for _ in range(60):
        p = sample_mixed(rng, n)
        theta = lg.theta_class(p)
        seen.add(theta)
        assert lg.plucker_sign_class(p) == expected[theta]
    assert seen == {"positive", "nonnegative", "none"}


def test_sample_any_is_mostly_outside():
    rng = random.Random(1)
    classes = [lg.theta_class(sample_any(rng, 3)) for _ in range(50)]
    assert classes.count("none") > 25


# -- chart and flow ------------------------------------------------------------------


def test_chart_examples():
    assert lg.chart(chart_point(I2)).is_zero()
    assert lg.chart(top_point(2)) == I2
    assert lg.chart(chart_point(ONES)) == Matrix([[1, -2], [-2, 1]]).scale(Fraction(1, 3))
    with pytest.raises(ValueError):
        lg.chart(chart_point(Matrix.identity(1).scale(-1)))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_chart_round_trip(n):
    rng = random.Random(n)
    for _ in range(20):
        p = sample_nonnegative(rng, n)
        assert det(p.top + p.bottom) != 0
        b = lg.chart(p)
        assert b.is_symmetric()
        assert lg.equivalent(lg.unchart(b), p)


def test_flow_examples():
    p = chart_point(ONES)
    assert lg.flow(1, p) == p
    q = lg.flow(2, lg.base_point(1, 1, 2))
    assert lg.gram(q) == Matrix.diag([Fraction(15, 16), Fraction(15, 16)])
    assert lg.is_theta_positive(q)
    with pytest.raises(ValueError):
        lg.flow(0, p)
    with pytest.raises(ValueError):
        lg.flow(-1, p)


@settings(max_examples=40, deadline=None)
@given(
    st.integers(1, 3),
    st.integers(0, 10**6),
    st.fractions(min_value=Fraction(11, 10), max_value=20, max_denominator=10),
    st.fractions(min_value=Fraction(1, 10), max_value=10, max_denominator=10),
)
def test_flow_properties(n, seed, c, c2):
    p = sample_nonnegative(random.Random(seed), n)
    q = lg.flow(c, p)
    assert lg.is_theta_positive(q)
    b = lg.chart(p)
    assert lg.chart(q) == b.scale(1 / (c * c))
    assert b.is_zero() or lg.chart(q).frobenius_sq() < b.frobenius_sq()
    assert lg.flow(c, lg.flow(c2, p)).rep == lg.flow(c * c2, p).rep


# -- orbit witness -----------------------------------------------------------------


def test_witness_of_base_points_is_identity():
    for n in range(1, 5):
        for k in range(n + 1):
            for l in range(k, n + 1):
                g = lg.orbit_witness(lg.base_point(k, l, n))
                assert np.allclose(g, np.eye(n))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_witness_round_trip(n):
    rng = random.Random(n)
    for _ in range(25):
        k = rng.randint(0, n)
        l = rng.randint(k, n)
        h = random_invertible(rng, n)
        p = lg.base_point(k, l, n).left_multiply(levi(h)).right_multiply(random_invertible(rng, n, positive_det=False))
        g = lg.orbit_witness(p)
        assert np.linalg.det(g) > 0
        assert lg.subspace_distance(lg.levi_action_float(g, k, l, n), p.rep.to_float()) < 1e-9


@pytest.mark.parametrize("n", [2, 3, 4])
def test_witness_for_gram_samples(n):
    rng = random.Random(n)
    for r in range(n + 1):
        s = random_gram_psd(rng, n, r)
        p = chart_point(s)
        assert lg.classify_double(p) == (0, rank(s))
        lg.orbit_witness(p)


def test_witness_errors():
    with pytest.raises(ValueError):
        lg.orbit_witness(chart_point(SWAP))
    p = chart_point(Matrix([[2, 1], [1, 3]])).right_multiply(Matrix([[3, 1], [1, 1]]))
    with pytest.raises(lg.OrbitWitnessError) as exc:
        lg.orbit_witness(p, tolerance=1e-300)
    assert exc.value.residual >= 0
