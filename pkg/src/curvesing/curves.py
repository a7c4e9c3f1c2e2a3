"""Curves with several branches: implicit equations, intersections, topology."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional, Sequence

from gmpy2 import mpq
from sympy import I as SYMPY_I
from sympy import Poly, QQ_I, Rational, symbols

from .bivariate import BivariatePoly
from .branch import BranchParam, TargetScaleX, TargetSwap, _straighten_x
from .coeff import ONE, GaussianRational
from .errors import (
    NonPolynomialInput,
    PrecisionExhausted,
    SameBranch,
    TooManyBranches,
)
from .normalform import BranchAnalysis, analyze_branch
from .powerseries import TruncatedSeries, compose

__all__ = [
    "BivariatePoly",
    "CurveSet",
    "implicitize",
    "intersection_multiplicity",
    "intersection_matrix",
    "topologically_equivalent",
    "TopologyDecision",
    "MAX_BRANCHES",
]

MAX_BRANCHES = 10

_s, _x, _y = symbols("s x y")


@dataclass(frozen=True)
class CurveSet:
    """A named union of branches through the origin."""

    name: str
    branches: tuple

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(self.branches))

    def conj(self) -> "CurveSet":
        return CurveSet(self.name, tuple(b.conj() for b in self.branches))


# -- implicit equations --------------------------------------------------------------


def _to_sympy(c: GaussianRational):
    return Rational(int(c.re.numerator), int(c.re.denominator)) + SYMPY_I * Rational(
        int(c.im.numerator), int(c.im.denominator))


def _sympy_series(s: TruncatedSeries):
    return sum((_to_sympy(c) * _s**e for e, c in s.items()), Rational(0))


def implicitize(b: BranchParam) -> BivariatePoly:
    """The reduced equation ``f(x, y) = 0`` of the image of a polynomial branch.

    ``f`` is the resultant in ``s`` of ``x - X(s)`` and ``y - Y(s)``, reduced
    to its squarefree part and scaled so that the monomial of largest
    ``(deg_y, deg_x)`` has coefficient 1.
    """
    if not b.exact:
        raise NonPolynomialInput("implicitization needs polynomial components")
    gens = (_s, _x, _y)
    X = Poly(_x - _sympy_series(b.x), *gens, domain=QQ_I)
    Y = Poly(_y - _sympy_series(b.y), *gens, domain=QQ_I)
    res = Poly(X.resultant(Y).as_expr(), _x, _y, domain=QQ_I)
    # the resultant is f**k with k the degree of the parametrizing map, and k
    # divides both component degrees
    if gcd(b.x.degree() or 0, b.y.degree() or 0) != 1:
        res = res.sqf_part()
    out = {}
    for (a, bb), c in res.as_dict(native=True).items():
        out[(a, bb)] = GaussianRational._raw(mpq(c.x), mpq(c.y))
    return BivariatePoly._make(out).monic()


def _eval_order(f: BivariatePoly, b: BranchParam, prec: int):
    """``ord_t f(γ(t))`` if it is below ``prec``; otherwise None."""
    v = f.evaluate(b.x.with_precision(prec) if b.exact else b.x,
                   b.y.with_precision(prec) if b.exact else b.y)
    o = v.order()
    if o is not None and o <= v.prec:
        return o
    return None


def _degree_along(f: BivariatePoly, b: BranchParam) -> int:
    dx = b.x.degree() or 0
    dy = b.y.degree() or 0
    return max((a * dx + c * dy for (a, c), _ in f.items()), default=0)


def _multiplicity_at_origin(f: BivariatePoly) -> int:
    return min(a + c for (a, c), _ in f.items())


def _branch_multiplicity(b: BranchParam) -> int:
    return min(o for o in (b.x.order(), b.y.order()) if o is not None)


def intersection_multiplicity(b1: BranchParam, b2: BranchParam,
                              f2: Optional[BivariatePoly] = None) -> int:
    """``ord_t f2(γ1(t))`` for the equation ``f2`` of the second branch.

    When the polynomial image of ``b2`` passes through the origin along other
    local branches too, ``f2`` is replaced by the local equation of ``b2``
    alone (a Weierstrass polynomial built from power sums).
    """
    if f2 is None:
        f2 = implicitize(b2)
    if _multiplicity_at_origin(f2) != _branch_multiplicity(b2):
        return _local_intersection(b1, b2)
    top = _degree_along(f2, b1)
    p = 16
    while True:
        p = min(p, top)
        o = _eval_order(f2, b1, p)
        if o is not None:
            return o
        if p >= top:
            break
        p *= 2
    raise SameBranch("the branches parametrize the same curve germ")


def _local_intersection(b1: BranchParam, b2: BranchParam, max_prec: int = 512) -> int:
    p = 16
    while p <= max_prec:
        try:
            o = _local_order(b1.at_precision(p), b2.at_precision(p), p)
        except PrecisionExhausted:
            o = None
        if o is not None:
            return o
        p *= 2
    raise SameBranch("no finite intersection found; the branches seem to coincide")


def _local_order(g1: BranchParam, g2: BranchParam, p: int):
    # put the second branch in the shape (t**n, y2(t)) using changes that
    # act on the target (applied to both) or on its own source
    if g2.x.order() is None or (g2.y.order() is not None and g2.y.order() < g2.x.order()):
        g1, g2 = TargetSwap().apply(g1), TargetSwap().apply(g2)
    n = g2.x.order()
    lc = g2.x.leading_coeff()
    if lc != ONE:
        sc = TargetScaleX(lc.inverse())
        g1, g2 = sc.apply(g1), sc.apply(g2)
    g2 = _straighten_x(g2.x, n).apply(g2)
    y2 = g2.y
    # power sums p_k(x) = n * [terms of y2**k with exponent divisible by n]
    q = y2.prec // n
    powers = [None, y2]
    for _ in range(n - 1):
        powers.append(powers[-1] * y2)
    psums = [None]
    for k in range(1, n + 1):
        pk = powers[k]
        d = {e // n: c * n for e, c in pk.items() if e % n == 0}
        psums.append(TruncatedSeries._make(d, pk.prec // n))
    # Newton: k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i
    es = [TruncatedSeries.one(q)]
    for k in range(1, n + 1):
        acc = TruncatedSeries.zero(q)
        for i in range(1, k + 1):
            term = es[k - i] * psums[i]
            acc = acc + term if i % 2 else acc - term
        es.append(acc.scale(GaussianRational(1) / k))
    # F(x, y) = sum_k (-1)^k e_k(x) y**(n-k)
    x1, y1 = g1.x, g1.y
    total = None
    ypow = [TruncatedSeries.one(y1.prec)]
    for _ in range(n):
        ypow.append(ypow[-1] * y1)
    for k in range(n + 1):
        ek = compose(es[k], x1)
        term = ek * ypow[n - k]
        if k % 2:
            term = -term
        total = term if total is None else total + term
    return total.order()


def intersection_matrix(c: CurveSet, equations: Optional[Sequence[BivariatePoly]] = None) -> list:
    """Pairwise intersection numbers; the diagonal holds the marker 0."""
    n = len(c.branches)
    eqs = list(equations) if equations is not None else [implicitize(b) for b in c.branches]
    for i in range(n):
        for j in range(i + 1, n):
            if eqs[i] == eqs[j]:
                raise SameBranch(f"branches {i} and {j} of {c.name!r} coincide")
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = intersection_multiplicity(c.branches[i], c.branches[j], eqs[j])
            m[i][j] = m[j][i] = v
    return m


# -- topology ------------------------------------------------------------------------------


@dataclass(frozen=True)
class TopologyDecision:
    equivalent: bool
    bijection: Optional[tuple]
    reason: str

    def __bool__(self):
        return self.equivalent


def _semigroup_key(a: BranchAnalysis) -> tuple:
    return a.semigroup.generators


def topologically_equivalent(c1: CurveSet, c2: CurveSet) -> TopologyDecision:
    """Search for a branch bijection preserving semigroups and intersection numbers."""
    n = len(c1.branches)
    if max(n, len(c2.branches)) > MAX_BRANCHES:
        raise TooManyBranches(f"at most {MAX_BRANCHES} branches are matched exhaustively")
    if n != len(c2.branches):
        return TopologyDecision(False, None, "branch counts differ")
    k1 = [_semigroup_key(analyze_branch(b, normal_form=False)) for b in c1.branches]
    k2 = [_semigroup_key(analyze_branch(b, normal_form=False)) for b in c2.branches]
    if sorted(k1) != sorted(k2):
        return TopologyDecision(False, None, "branch semigroups differ")
    m1 = intersection_matrix(c1)
    m2 = intersection_matrix(c2)
    perm = [None] * n
    used = [False] * n

    def extend(i):
        if i == n:
            return True
        for j in range(n):
            if used[j] or k1[i] != k2[j]:
                continue
            if any(m1[i][p] != m2[j][perm[p]] for p in range(i)):
                continue
            used[j] = True
            perm[i] = j
            if extend(i + 1):
                return True
            used[j] = False
        perm[i] = None
        return False

    if extend(0):
        return TopologyDecision(True, tuple(perm), "bijection found")
    return TopologyDecision(False, None, "no bijection preserves the intersection numbers")
