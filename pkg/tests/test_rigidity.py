import random

import pytest
from hypothesis import given, strategies as st

from curvesing.coeff import I, ONE, GaussianRational
from curvesing.errors import PreconditionError
from curvesing.rigidity import (
    LaurentPoly,
    LinearTaylorMap,
    MapClass,
    classify_linear_map,
    constraint_holds,
    constraint_sides,
    family_member,
    refutation_sweep,
    solve_constraints,
    trig_term,
)

M = LinearTaylorMap.of


def cos_term(k):
    return trig_term(1, 0, k)


def sin_term(k):
    return trig_term(0, 1, k)


def test_constraint_examples():
    assert constraint_holds(2, 3, M(1, "i", 1, "i"))
    assert constraint_holds(2, 3, M(1, "-i", 1, "-i"))
    assert not constraint_holds(2, 3, M(1, 1, 1, 1))


def test_constraint_sides_are_pure_exponentials():
    # (1, i) is the identity x_R + i x_I, so both sides are exp(6iθ)
    lhs, rhs = constraint_sides(2, 3, M(1, "i", 1, "i"))
    assert lhs == rhs == LaurentPoly({6: 1})
    lhs, rhs = constraint_sides(2, 3, M(1, "-i", 1, "-i"))
    assert lhs == rhs == LaurentPoly({-6: 1})


def test_constraint_short_circuit_agrees_with_expansion():
    rng = random.Random(1)
    for _ in range(200):
        m = LinearTaylorMap(*(GaussianRational(rng.randint(-2, 2), rng.randint(-2, 2))
                              for _ in range(4)))
        lhs, rhs = constraint_sides(2, 3, m)
        assert constraint_holds(2, 3, m) == (lhs == rhs)


def test_constraint_precondition():
    with pytest.raises(PreconditionError):
        constraint_holds(2, 4, M(1, 0, 1, 0))
    with pytest.raises(PreconditionError):
        constraint_holds(3, 2, M(1, 0, 1, 0))


def test_classify_examples():
    assert classify_linear_map(M(1, "i", 1, "i")) is MapClass.HOLOMORPHIC
    assert classify_linear_map(M(1, "-i", 1, "-i")) is MapClass.ANTIHOLOMORPHIC
    assert classify_linear_map(M(1, 1, 1, 1)) is MapClass.NEITHER
    assert classify_linear_map(M(1, "i", 1, "-i")) is MapClass.NEITHER


def test_solve_constraints_members():
    out = solve_constraints(2, 3, 20, seed=3)
    assert out[0] == M(1, "i", 1, "i")
    assert out[1] == M(1, "-i", 1, "-i")
    for m in out:
        assert constraint_holds(2, 3, m)
        assert classify_linear_map(m) is not MapClass.NEITHER
        assert m.alpha ** 3 == m.beta ** 2


def test_family_members_for_every_unit_pair():
    for v0, v1 in [(2, 3), (2, 5), (3, 4), (3, 5), (4, 9), (5, 7)]:
        for idx in range(16):
            for hol in (True, False):
                m = family_member(v0, v1, GaussianRational(2, -1), idx, hol)
                assert constraint_holds(v0, v1, m)


def test_refutation_sweep_small():
    stats = refutation_sweep(2, 3, 300, seed=5)
    assert stats["checked"] == 300
    assert stats["solutions"] == 0
    assert stats["neither"] == 300


def test_compatibility_is_needed():
    # same-sign family but α**v1 != β**v0
    m = LinearTaylorMap(ONE, I, GaussianRational(2), GaussianRational(0, 2))
    assert classify_linear_map(m) is MapClass.HOLOMORPHIC
    assert not constraint_holds(2, 3, m)


@given(st.integers(min_value=-30, max_value=30))
def test_laurent_pythagoras(k):
    c, s = cos_term(k), sin_term(k)
    assert c * c + s * s == LaurentPoly.constant(1)


@given(st.integers(min_value=1, max_value=12), st.integers(min_value=0, max_value=6))
def test_binomial_power_matches_repeated_product(k, n):
    p = trig_term(GaussianRational(1, 2), GaussianRational(-3, 1), k)
    q = LaurentPoly.constant(1)
    for _ in range(n):
        q = q * p
    assert p ** n == q


def test_double_angle():
    # cos 2θ = cos²θ - sin²θ and sin 2θ = 2 sinθ cosθ
    assert cos_term(2) == cos_term(1) * cos_term(1) - sin_term(1) * sin_term(1)
    assert sin_term(2) == sin_term(1) * cos_term(1) * 2
