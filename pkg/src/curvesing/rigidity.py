"""Exact checks of the linear rigidity identity for diffeomorphisms of branches.

A real-linear map ``(x, y) -> (α x_R + α' x_I, β y_R + β' y_I)`` preserving
``(t**v0, t**v1 + ...)`` must satisfy, for every θ,

    (α cos(v0 θ) + α' sin(v0 θ))**v1 == (β cos(v1 θ) + β' sin(v1 θ))**v0.

With ``z = exp(iθ)`` both sides are Laurent polynomials in ``z`` over Q(i),
so "for every θ" becomes an exact polynomial identity.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from math import comb, gcd
from typing import Mapping

from .coeff import I, ONE, ZERO, GaussianRational, gr
from .errors import PreconditionError, RefutationFailure

__all__ = [
    "LaurentPoly",
    "LinearTaylorMap",
    "MapClass",
    "trig_term",
    "constraint_holds",
    "classify_linear_map",
    "family_member",
    "refutation_sweep",
    "solve_constraints",
]

_HALF = GaussianRational(1) / 2
_UNITS = (ONE, I, -ONE, -I)


class LaurentPoly:
    """Finitely supported ``sum c_k z**k`` with ``k`` of either sign."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, object] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c = {}
        for k, v in items:
            v = gr(v)
            c[int(k)] = c.get(int(k), ZERO) + v
        self._c = {k: c[k] for k in sorted(c) if c[k]}

    @classmethod
    def _make(cls, c):
        obj = object.__new__(cls)
        obj._c = {k: c[k] for k in sorted(c) if c[k]}
        return obj

    @classmethod
    def constant(cls, c):
        return cls._make({0: gr(c)})

    def items(self):
        return self._c.items()

    def is_zero(self) -> bool:
        return not self._c

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(tuple(self._c.items()))

    def __add__(self, other):
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, ZERO) + v
        return LaurentPoly._make(out)

    def __neg__(self):
        return LaurentPoly._make({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            c = gr(other)
            return LaurentPoly._make({k: v * c for k, v in self._c.items()})
        out = {}
        for k1, v1 in self._c.items():
            for k2, v2 in other._c.items():
                out[k1 + k2] = out.get(k1 + k2, ZERO) + v1 * v2
        return LaurentPoly._make(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not needed here")
        if len(self._c) == 2:
            (k1, a), (k2, b) = self._c.items()
            return _binomial_power(a, k1, b, k2, n)
        out = LaurentPoly.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def __repr__(self):
        body = " + ".join(f"({v})*z^{k}" for k, v in self._c.items()) or "0"
        return f"LaurentPoly({body})"


def _binomial_power(a, ka, b, kb, n):
    """``(a z**ka + b z**kb)**n`` by the binomial theorem."""
    out = {}
    apow = [ONE]
    bpow = [ONE]
    for _ in range(n):
        apow.append(apow[-1] * a)
        bpow.append(bpow[-1] * b)
    for j in range(n + 1):
        k = ka * j + kb * (n - j)
        out[k] = out.get(k, ZERO) + apow[j] * bpow[n - j] * comb(n, j)
    return LaurentPoly._make(out)


def trig_term(a, a_prime, k: int) -> LaurentPoly:
    """``a cos(kθ) + a' sin(kθ)`` as ``z**k (a - i a')/2 + z**-k (a + i a')/2``."""
    a, a_prime = gr(a), gr(a_prime)
    ia = I * a_prime
    if k == 0:
        return LaurentPoly.constant(a)
    return LaurentPoly._make({k: (a - ia) * _HALF, -k: (a + ia) * _HALF})


@dataclass(frozen=True)
class LinearTaylorMap:
    """Entries ``(α, α', β, β')`` of the real-linear map."""

    alpha: GaussianRational
    alphaP: GaussianRational
    beta: GaussianRational
    betaP: GaussianRational

    @classmethod
    def of(cls, alpha, alphaP, beta, betaP) -> "LinearTaylorMap":
        return cls(gr(alpha), gr(alphaP), gr(beta), gr(betaP))


class MapClass(Enum):
    HOLOMORPHIC = "Holomorphic"
    ANTIHOLOMORPHIC = "Antiholomorphic"
    NEITHER = "Neither"


def _check_pair(v0, v1):
    if not (2 <= v0 < v1) or gcd(v0, v1) != 1:
        raise PreconditionError("need 2 <= v0 < v1 with gcd(v0, v1) = 1")


def constraint_sides(v0: int, v1: int, m: LinearTaylorMap):
    lhs = trig_term(m.alpha, m.alphaP, v0) ** v1
    rhs = trig_term(m.beta, m.betaP, v1) ** v0
    return lhs, rhs


def constraint_holds(v0: int, v1: int, m: LinearTaylorMap) -> bool:
    """Does the θ-identity hold exactly?"""
    _check_pair(v0, v1)
    # the coefficients of z**(±v0 v1) must agree before anything else can
    ia, ib = I * m.alphaP, I * m.betaP
    if ((m.alpha - ia) ** v1 * _HALF ** v1 != (m.beta - ib) ** v0 * _HALF ** v0
            or (m.alpha + ia) ** v1 * _HALF ** v1 != (m.beta + ib) ** v0 * _HALF ** v0):
        return False
    lhs, rhs = constraint_sides(v0, v1, m)
    return lhs == rhs


def classify_linear_map(m: LinearTaylorMap) -> MapClass:
    """Cauchy–Riemann test: holomorphic iff α = -iα' and β = -iβ'."""
    if m.alpha == -I * m.alphaP and m.beta == -I * m.betaP:
        return MapClass.HOLOMORPHIC
    if m.alpha == I * m.alphaP and m.beta == I * m.betaP:
        return MapClass.ANTIHOLOMORPHIC
    return MapClass.NEITHER


# -- search ------------------------------------------------------------------------------


def _rand_gr(rng: random.Random, size: int = 5) -> GaussianRational:
    while True:
        re = rng.randint(-size, size)
        im = rng.randint(-size, size)
        den = rng.choice((1, 1, 2, 3))
        c = GaussianRational(re, im) / den
        if c:
            return c


@lru_cache(maxsize=None)
def _unit_pairs(v0: int, v1: int) -> tuple:
    return tuple((u, w) for u in _UNITS for w in _UNITS if u ** v1 == w ** v0)


def family_member(v0: int, v1: int, gamma: GaussianRational, unit_index: int,
                  holomorphic: bool) -> LinearTaylorMap:
    """A map with ``α**v1 == β**v0`` in the (anti)holomorphic family.

    ``α = u γ**v0`` and ``β = w γ**v1`` where the units satisfy
    ``u**v1 == w**v0``; ``unit_index`` picks among the admissible pairs.
    """
    pairs = _unit_pairs(v0, v1)
    u, w = pairs[unit_index % len(pairs)]
    alpha = u * gamma ** v0
    beta = w * gamma ** v1
    turn = I if holomorphic else -I
    return LinearTaylorMap(alpha, turn * alpha, beta, turn * beta)


def refutation_sweep(v0: int, v1: int, count: int, seed: int) -> dict:
    """Look for maps outside both families that satisfy the identity.

    A third of the candidates are uniformly random, a third perturb a family
    member in one entry, and a third mix the two families (holomorphic in
    ``x``, antiholomorphic in ``y`` or the reverse).  Raises
    :class:`RefutationFailure` on a counterexample.
    """
    _check_pair(v0, v1)
    rng = random.Random(seed)
    stats = {"checked": 0, "solutions": 0, "neither": 0}
    for n in range(count):
        kind = n % 3
        if kind == 0:
            m = LinearTaylorMap(*(_rand_gr(rng) for _ in range(4)))
        else:
            base = family_member(v0, v1, _rand_gr(rng, 3), rng.randrange(16), rng.random() < 0.5)
            if kind == 1:
                entries = [base.alpha, base.alphaP, base.beta, base.betaP]
                j = rng.randrange(4)
                entries[j] = entries[j] + _rand_gr(rng, 2)
                m = LinearTaylorMap(*entries)
            else:
                sign = rng.choice((I, -I))
                m = LinearTaylorMap(base.alpha, sign * base.alpha, base.beta, -sign * base.beta)
        cls = classify_linear_map(m)
        stats["checked"] += 1
        if cls is MapClass.NEITHER:
            stats["neither"] += 1
        if constraint_holds(v0, v1, m):
            stats["solutions"] += 1
            if cls is MapClass.NEITHER:
                raise RefutationFailure(f"{m} satisfies the identity but is neither holomorphic nor antiholomorphic")
            if m.beta * m.alphaP != m.alpha * m.betaP:
                raise RefutationFailure(f"{m} satisfies the identity but not βα' = αβ'")
    return stats


def solve_constraints(v0: int, v1: int, samples: int, seed: int, sweep: int = 0) -> list:
    """Verified family members, after an optional refutation sweep.

    Every returned map satisfies the identity; ``sweep`` random maps outside
    the families are checked to fail it.
    """
    _check_pair(v0, v1)
    if sweep:
        refutation_sweep(v0, v1, sweep, seed)
    rng = random.Random(seed + 1)
    out = []
    seeds = [(ONE, 0, True), (ONE, 0, False)]
    for n in range(samples):
        if n < len(seeds):
            gamma, idx, hol = seeds[n]
        else:
            gamma, idx, hol = _rand_gr(rng), rng.randrange(16), rng.random() < 0.5
        m = family_member(v0, v1, gamma, idx, hol)
        if not constraint_holds(v0, v1, m):
            raise RefutationFailure(f"family member {m} fails the identity")
        out.append(m)
    return out
