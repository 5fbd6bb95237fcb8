import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from theta_lgr.linalg import Matrix
from theta_lgr.sampling import random_monoid_element, random_ustar_params
from theta_lgr.symplectic import (
    CHEVALLEY_E_CORRECTION,
    FactorizationError,
    UStarParams,
    blocks,
    chevalley_e,
    gen_x,
    gen_y,
    is_in_theta_monoid,
    is_symplectic,
    levi,
    lower_unipotent,
    minor_identity_report,
    omega,
    theorem_dense_check,
    theta_triple_factor,
    torus,
    u_star_product,
    ustar_index_pattern,
)

from oracles import leibniz_det


def E(i, j, n):
    """1-based matrix unit in 2n x 2n."""
    return Matrix.unit(2 * n, 2 * n, i - 1, j - 1)


def in_lie_algebra(x, n):
    om = omega(n)
    return (x.T @ om + om @ x).is_zero()


def params2(a21, a12, a22):
    return UStarParams(2, {(2, 1): a21, (1, 2): a12, (2, 2): a22})


# -- pinning ----------------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_chevalley_generators_lie_in_sp(n):
    for i in range(1, n + 1):
        e = chevalley_e(i, n)
        assert in_lie_algebra(e, n)
        assert (e @ e).is_zero()
        assert is_symplectic(gen_x(i, Fraction(5, 3), n))
        assert is_symplectic(gen_y(i, -2, n))


def test_printed_generator_is_not_in_sp():
    n = 3
    for i in range(1, n):
        printed = E(i, i + 1, n) - E(n + i + 1, i, n)
        assert not in_lie_algebra(printed, n)
    assert CHEVALLEY_E_CORRECTION["used"] == "E[i,i+1] - E[n+i+1,n+i]"


def test_generator_examples():
    n = 3
    assert gen_x(n, 7, n) == Matrix.identity(2 * n) + E(n, 2 * n, n).scale(7)
    assert gen_x(1, 0, n) == Matrix.identity(2 * n)
    b = Fraction(2)
    assert gen_y(1, b, 2) == Matrix.identity(4) + (E(2, 1, 2) - E(3, 4, 2)).scale(b)
    with pytest.raises(ValueError):
        gen_x(4, 1, 3)


def test_torus():
    assert torus([1, 1]) == Matrix.identity(4)
    assert torus([2]) == Matrix.diag([2, Fraction(1, 2)])
    assert torus([2, 3]) @ torus([5, -1]) == torus([10, -3])
    assert is_symplectic(torus([2, -3, Fraction(1, 7)]))
    with pytest.raises(ValueError):
        torus([1, 0])


# -- monoid -------------------------------------------------------------------------


def test_monoid_examples():
    n = 2
    assert is_in_theta_monoid(Matrix.identity(4))
    assert is_in_theta_monoid(Matrix.identity(4).scale(-1))
    assert is_in_theta_monoid(lower_unipotent(Matrix([[1, 1], [1, 1]])))
    assert not is_in_theta_monoid(lower_unipotent(Matrix([[0, 1], [1, 0]])))
    assert not is_in_theta_monoid(Matrix.identity(2 * n).scale(2))


def test_block_criterion_does_not_see_det_sign():
    # odd rank, so det A = -1
    minus = Matrix.identity(6).scale(-1)
    assert is_in_theta_monoid(minus)
    with pytest.raises(FactorizationError):
        theta_triple_factor(minus)


def test_factor_examples():
    one = Matrix.identity(4)
    assert theta_triple_factor(one) == (one, one, one)
    g = lower_unipotent(Matrix([[2, 1], [1, 1]]))
    assert theta_triple_factor(g) == (g, one, one)
    g = gen_y(2, 1, 2) @ torus([2, 2]) @ gen_x(2, 3, 2)
    u_minus, l, u_plus = theta_triple_factor(g)
    assert u_minus @ l @ u_plus == g
    assert l == torus([2, 2])
    with pytest.raises(FactorizationError):
        theta_triple_factor(lower_unipotent(Matrix([[0, 1], [1, 0]])))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_factor_reassembles_sampled_elements(n):
    rng = random.Random(100 + n)
    for _ in range(40):
        g = random_monoid_element(rng, n)
        assert is_symplectic(g)
        assert is_in_theta_monoid(g)
        u_minus, l, u_plus = theta_triple_factor(g)
        assert u_minus @ l @ u_plus == g
        assert all(is_symplectic(x) for x in (u_minus, l, u_plus))


def test_levi_is_symplectic():
    assert is_symplectic(levi(Matrix([[1, 2], [3, 4]])))


# -- U* ------------------------------------------------------------------------------


def test_ustar_pattern():
    assert ustar_index_pattern(2) == [(2, 1), (1, 2), (2, 2)]
    assert len(ustar_index_pattern(5)) == 15


def test_ustar_examples():
    assert u_star_product(UStarParams(1, {(1, 1): 4})) == Matrix([[1, 0], [4, 1]])
    u = u_star_product(params2(1, 2, 3))
    a, b, c, _ = blocks(u)
    assert a == Matrix([[1, 0], [2, 1]])
    assert c == Matrix([[0, -6], [2, 4]])
    assert b.is_zero()
    assert a.T @ c == Matrix([[4, 2], [2, 4]])
    # explicit product of the three factors
    n = 2
    direct = (
        (Matrix.identity(4) + E(4, 2, n))
        @ (Matrix.identity(4) + (E(2, 1, n) - E(3, 4, n)).scale(2))
        @ (Matrix.identity(4) + E(4, 2, n).scale(3))
    )
    assert u == direct
    with pytest.raises(ValueError):
        u_star_product(UStarParams(2, {(2, 1): 1}))


def test_ustar_zero_parameter_stays_symplectic():
    assert is_symplectic(u_star_product(params2(0, 2, 3)))


def test_ustar_json_round_trip():
    p = params2(1, Fraction(-2, 3), 3)
    assert p.to_json() == {"n": 2, "a": {"2,1": "1", "1,2": "-2/3", "2,2": "3"}}
    assert UStarParams.from_json(p.to_json()) == p


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_matrix_form(n):
    rng = random.Random(n)
    for _ in range(20):
        params = random_ustar_params(rng, n)
        u = u_star_product(params)
        assert is_symplectic(u)
        a, b, c, _ = blocks(u)
        assert b.is_zero()
        assert all(c[p - 1, q - 1] == 0 for p in range(1, n + 1) for q in range(1, n + 1) if p + q < n + 1)
        assert blocks(u_star_product(params, drop_last_generator=True))[0] == a


def test_minor_report_examples():
    rep = {(m.name, m.k): m for m in minor_identity_report(params2(1, 2, 3))}
    assert rep[("C", 1)].lhs == rep[("C", 1)].rhs == 2
    assert rep[("AtC", 1)].lhs == rep[("AtC", 1)].rhs == 4
    assert rep[("AtC", 2)].lhs == rep[("AtC", 2)].rhs == 12
    assert all(m.holds for m in rep.values())


@pytest.mark.parametrize("n", [2, 3, 4])
def test_minor_identities_against_leibniz(n):
    rng = random.Random(7 * n)
    for _ in range(10):
        params = random_ustar_params(rng, n)
        a, _, c, _ = blocks(u_star_product(params))
        for m in minor_identity_report(params):
            k = m.k
            src = {"C": c, "A": a, "AtC": a.T @ c}[m.name]
            rows = range(k) if m.name == "AtC" else range(n - k, n)
            lhs = leibniz_det([[src[i, j] for j in range(k)] for i in rows])
            assert lhs == m.lhs == m.rhs


def test_dense_check_examples():
    assert theorem_dense_check(params2(1, 2, 3))
    assert theorem_dense_check(params2(1, -2, 3))
    a, _, c, _ = blocks(u_star_product(params2(1, -2, 3)))
    assert a.T @ c == Matrix([[4, -2], [-2, 4]])
    with pytest.raises(ValueError):
        theorem_dense_check(params2(-1, 2, 3))


@given(
    st.integers(2, 4).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.lists(
                st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(bool),
                min_size=n * (n + 1) // 2,
                max_size=n * (n + 1) // 2,
            ),
        )
    )
)
def test_dense_property(data):
    n, values = data
    a = {}
    for key, v in zip(ustar_index_pattern(n), values):
        a[key] = abs(v) if key[0] == n else v
    params = UStarParams(n, a)
    assert theorem_dense_check(params)
    assert all(m.holds for m in minor_identity_report(params))
