"""Random generators shared by the test modules."""

import random
from math import gcd

from curvesing.bivariate import BivariatePoly
from curvesing.branch import (
    BranchParam,
    SourceReparam,
    TargetScaleX,
    TargetScaleY,
    TargetShear,
    TargetSwap,
)
from curvesing.coeff import GaussianRational
from curvesing.errors import PreconditionError
from curvesing.powerseries import TruncatedSeries

# working precision for branches that are pushed through random changes
CHANGE_PREC = 60


def rand_coeff(rng: random.Random, size: int = 3, complex_rate: float = 0.3) -> GaussianRational:
    """A small nonzero Gaussian rational."""
    while True:
        re = rng.randint(-size, size)
        im = rng.randint(-size, size) if rng.random() < complex_rate else 0
        den = rng.choice((1, 1, 1, 2, 3))
        c = GaussianRational(re, im) / den
        if c:
            return c


def rand_poly(rng: random.Random, degree: int, lowest: int = 0, density: float = 0.7) -> dict:
    """Exponent -> coefficient map with exponents in ``[lowest, degree]``."""
    out = {}
    for e in range(lowest, degree + 1):
        if rng.random() < density:
            out[e] = rand_coeff(rng)
    return out


def rand_series(rng: random.Random, degree: int, prec: int, lowest: int = 0) -> TruncatedSeries:
    return TruncatedSeries(rand_poly(rng, degree, lowest), prec)


def rand_branch(rng: random.Random, max_v0: int = 4, max_v1: int = 9, tail: int = 8) -> BranchParam:
    """A primitive singular branch ``(t**v0, t**v1 + ...)`` with polynomial entries."""
    while True:
        v0 = rng.randint(2, max_v0)
        v1 = rng.randint(v0 + 1, max_v1)
        if v1 % v0 == 0:
            continue
        y = {v1: 1}
        for s in range(v1 + 1, v1 + tail):
            if rng.random() < 0.5:
                y[s] = rand_coeff(rng)
        if gcd(v0, *y) == 1:
            return BranchParam.from_polys({v0: 1}, y)


def _rand_bivariate(rng: random.Random, min_degree: int) -> BivariatePoly:
    d = {}
    for a in range(3):
        for b in range(3):
            if a + b >= min_degree and rng.random() < 0.3:
                d[(a, b)] = rand_coeff(rng)
    return BivariatePoly(d)


def rand_change(rng: random.Random, prec: int = CHANGE_PREC):
    """One random elementary change of source or target."""
    while True:
        k = rng.randrange(5)
        if k == 0:
            phi = {1: rand_coeff(rng)}
            for e in range(2, 5):
                if rng.random() < 0.6:
                    phi[e] = rand_coeff(rng)
            return SourceReparam(TruncatedSeries(phi, prec))
        if k == 1:
            return TargetScaleX(rand_coeff(rng))
        if k == 2:
            return TargetScaleY(rand_coeff(rng))
        if k == 3:
            return TargetSwap()
        lowest = 1 if rng.random() < 0.3 else 2
        p = _rand_bivariate(rng, lowest)
        try:
            if rng.random() < 0.5:
                return TargetShear(p, BivariatePoly())
            return TargetShear(BivariatePoly(), p)
        except PreconditionError:
            continue
