import random

import pytest

from curvesing.bivariate import BivariatePoly
from curvesing.branch import BranchParam, SourceReparam, TargetShear
from curvesing.coeff import ONE
from curvesing.curves import (
    CurveSet,
    _local_intersection,
    implicitize,
    intersection_matrix,
    intersection_multiplicity,
    topologically_equivalent,
)
from curvesing.errors import NonPolynomialInput, PreconditionError, SameBranch, TooManyBranches
from curvesing.powerseries import TruncatedSeries

from support import rand_branch, rand_coeff


def bp(x, y):
    return BranchParam.from_polys(x, y)


CUSP = bp({2: 1}, {3: 1})
LINE_X = bp({1: 1}, {})
LINE_Y = bp({}, {1: 1})


def vanishes_along(f, b, prec=40):
    v = f.evaluate(b.x.with_precision(prec), b.y.with_precision(prec))
    return v.order() is None


def up_to_unit(f, terms):
    """``f`` equals the polynomial ``terms`` times a nonzero constant."""
    g = BivariatePoly(terms)
    (a, b), c = next(iter(g.items()))
    return f == g.scale(f.coeff(a, b) / c)


def test_implicitize_examples():
    f = implicitize(LINE_X)
    assert up_to_unit(f, {(0, 1): 1})
    f = implicitize(CUSP)
    assert up_to_unit(f, {(0, 2): 1, (3, 0): -1})
    f = implicitize(bp({2: 1}, {5: 1}))
    assert up_to_unit(f, {(0, 2): 1, (5, 0): -1})


def test_implicitize_vanishes_on_random_branches():
    rng = random.Random(13)
    for _ in range(10):
        b = rand_branch(rng, tail=4)
        f = implicitize(b)
        assert vanishes_along(f, b, 60)
        assert f.leading_term()[1] == ONE


def test_implicitize_needs_polynomials():
    b = BranchParam(TruncatedSeries({2: 1}, 10), TruncatedSeries({3: 1}, 10))
    with pytest.raises(NonPolynomialInput):
        implicitize(b)


def test_intersection_examples():
    assert intersection_multiplicity(LINE_X, LINE_Y) == 1
    assert intersection_multiplicity(CUSP, LINE_X) == 3
    assert intersection_multiplicity(LINE_X, CUSP) == 3
    flipped = bp({3: 1}, {2: 1})
    assert intersection_multiplicity(CUSP, flipped) == 4
    assert intersection_multiplicity(flipped, CUSP) == 4


def test_intersection_same_branch():
    # t -> 2t reparametrizes the cusp
    with pytest.raises(SameBranch):
        intersection_multiplicity(CUSP, bp({2: 4}, {3: 8}))


def test_local_equation_fallback_agrees():
    # the local Weierstrass equation gives the same numbers as the global one
    rng = random.Random(17)
    for _ in range(8):
        b1, b2 = rand_branch(rng, tail=4), rand_branch(rng, tail=4)
        if implicitize(b1) == implicitize(b2):
            continue
        assert _local_intersection(b1, b2) == intersection_multiplicity(b1, b2)


def test_intersection_matrix_examples():
    assert intersection_matrix(CurveSet("C", (CUSP,))) == [[0]]
    assert intersection_matrix(CurveSet("L", (LINE_X, LINE_Y))) == [[0, 1], [1, 0]]
    assert intersection_matrix(CurveSet("CL", (CUSP, LINE_X))) == [[0, 3], [3, 0]]
    with pytest.raises(SameBranch):
        intersection_matrix(CurveSet("D", (CUSP, bp({2: 4}, {3: 8}))))


def test_intersection_lower_bound():
    rng = random.Random(19)
    for _ in range(15):
        b1, b2 = rand_branch(rng, tail=4), rand_branch(rng, tail=4)
        if implicitize(b1) == implicitize(b2):
            continue
        m = intersection_multiplicity(b1, b2)
        assert m == intersection_multiplicity(b2, b1)
        assert m >= b1.x.order() * b2.x.order()


def lines(slopes):
    return tuple(bp({1: 1}, {1: s}) if s is not None else LINE_Y for s in slopes)


def test_topology_examples():
    assert topologically_equivalent(CurveSet("a", (bp({3: 1}, {7: 1}),)),
                                    CurveSet("b", (bp({3: 1}, {7: 1, 8: 1}),)))
    four_a = CurveSet("a", lines([0, 1, -1, 2]))
    four_b = CurveSet("b", lines([0, 1, 3, None]))
    d = topologically_equivalent(four_a, four_b)
    assert d.equivalent and sorted(d.bijection) == [0, 1, 2, 3]
    assert not topologically_equivalent(CurveSet("c", (CUSP,)), CurveSet("l", (LINE_X,)))
    assert not topologically_equivalent(CurveSet("c", (CUSP, LINE_X)), CurveSet("c", (CUSP, LINE_Y)))


def test_topology_too_many_branches():
    c = CurveSet("many", lines(range(11)))
    with pytest.raises(TooManyBranches):
        topologically_equivalent(c, c)


def exact(b, degree_bound=60):
    """Re-mark a transformed polynomial branch as exact."""
    assert b.prec > degree_bound and max(b.x.support() + b.y.support()) < degree_bound
    return BranchParam(b.x, b.y, True)


def test_topology_invariant_under_permutation_and_changes():
    rng = random.Random(23)
    base = (CUSP, LINE_X, bp({3: 1}, {2: 1}), bp({3: 1}, {5: 1, 6: 1}))
    c1 = CurveSet("c1", base)
    perm = list(base)
    rng.shuffle(perm)
    assert topologically_equivalent(c1, CurveSet("c2", tuple(perm)))
    checked = 0
    while checked < 3:
        # a common linear target change and an independent source change per branch
        try:
            target = TargetShear(BivariatePoly({(0, 1): rand_coeff(rng)}),
                                 BivariatePoly({(1, 0): rand_coeff(rng)}))
        except PreconditionError:
            continue
        moved = []
        for b in base:
            phi = TruncatedSeries({1: rand_coeff(rng), 2: rand_coeff(rng)}, 80)
            moved.append(exact(target.apply(SourceReparam(phi).apply(b.at_precision(80)))))
        assert topologically_equivalent(c1, CurveSet("m", tuple(moved)))
        checked += 1


def test_topology_is_an_equivalence_on_samples():
    sets = [
        CurveSet("a", (CUSP, LINE_X)),
        CurveSet("b", (LINE_X, CUSP)),
        CurveSet("c", (bp({2: 1}, {3: 1, 4: 1}), bp({1: 1}, {2: 1}))),
        CurveSet("d", (CUSP, LINE_Y)),
    ]
    eq = [[bool(topologically_equivalent(p, q)) for q in sets] for p in sets]
    n = len(sets)
    for i in range(n):
        assert eq[i][i]
        for j in range(n):
            assert eq[i][j] == eq[j][i]
            for k in range(n):
                if eq[i][j] and eq[j][k]:
                    assert eq[i][k]
    assert eq[0][1] and eq[0][2] and not eq[0][3]
