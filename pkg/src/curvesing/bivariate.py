"""Polynomials in two variables over Q(i), keyed by ``(deg_x, deg_y)``."""

from __future__ import annotations

from typing import Mapping

from .coeff import ONE, ZERO, GaussianRational, gr, render_coeff
from .powerseries import TruncatedSeries

__all__ = ["BivariatePoly"]


class BivariatePoly:
    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[tuple, object] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c = {}
        for (a, b), v in items:
            if a < 0 or b < 0:
                raise ValueError("negative exponent in a polynomial")
            v = gr(v)
            if v:
                key = (int(a), int(b))
                c[key] = c.get(key, ZERO) + v
        self._c = {k: c[k] for k in sorted(c) if c[k]}

    @classmethod
    def _make(cls, c):
        obj = object.__new__(cls)
        obj._c = {k: c[k] for k in sorted(c) if c[k]}
        return obj

    @classmethod
    def x(cls):
        return cls._make({(1, 0): ONE})

    @classmethod
    def y(cls):
        return cls._make({(0, 1): ONE})

    @classmethod
    def monomial(cls, a, b, coeff=1):
        return cls._make({(a, b): gr(coeff)})

    def items(self):
        return self._c.items()

    def coeff(self, a, b) -> GaussianRational:
        return self._c.get((a, b), ZERO)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        if not isinstance(other, BivariatePoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(tuple(self._c.items()))

    def __add__(self, other):
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, ZERO) + v
        return BivariatePoly._make(out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return BivariatePoly._make({k: -v for k, v in self._c.items()})

    def scale(self, c):
        c = gr(c)
        return BivariatePoly._make({k: v * c for k, v in self._c.items()})

    def __mul__(self, other):
        if not isinstance(other, BivariatePoly):
            return self.scale(other)
        out = {}
        for (a1, b1), v1 in self._c.items():
            for (a2, b2), v2 in other._c.items():
                k = (a1 + a2, b1 + b2)
                out[k] = out.get(k, ZERO) + v1 * v2
        return BivariatePoly._make(out)

    __rmul__ = __mul__

    def diff_x(self):
        return BivariatePoly._make({(a - 1, b): v * a for (a, b), v in self._c.items() if a})

    def diff_y(self):
        return BivariatePoly._make({(a, b - 1): v * b for (a, b), v in self._c.items() if b})

    def conj(self):
        return BivariatePoly._make({k: v.conj() for k, v in self._c.items()})

    def weighted_order(self, wx: int, wy: int):
        if not self._c:
            return None
        return min(wx * a + wy * b for a, b in self._c)

    def drop_above_weight(self, wx: int, wy: int, bound: int):
        """Keep the monomials of weighted degree ``<= bound``."""
        return BivariatePoly._make({(a, b): v for (a, b), v in self._c.items() if wx * a + wy * b <= bound})

    def degree_x(self):
        return max((a for a, _ in self._c), default=0)

    def degree_y(self):
        return max((b for _, b in self._c), default=0)

    def leading_term(self):
        """Monomial with the largest (deg_y, deg_x); the normalization anchor."""
        key = max(self._c, key=lambda k: (k[1], k[0]))
        return key, self._c[key]

    def monic(self):
        if not self._c:
            return self
        _, lc = self.leading_term()
        return self.scale(lc.inverse())

    def evaluate(self, x: TruncatedSeries, y: TruncatedSeries) -> TruncatedSeries:
        """``f(x(t), y(t))`` with precision tracked through every product."""
        if not self._c:
            return TruncatedSeries.zero(min(x.prec, y.prec) * 2)
        max_a = self.degree_x()
        max_b = self.degree_y()
        xp = [None] * (max_a + 1)
        yp = [None] * (max_b + 1)
        total = None
        for (a, b), v in self._c.items():
            term = None
            if a:
                term = _power(xp, x, a)
            if b:
                yb = _power(yp, y, b)
                term = yb if term is None else term * yb
            if term is None:
                term = TruncatedSeries.one(10**9)
            term = term.scale(v)
            total = term if total is None else total + term
        if total.prec >= 10**9:
            # constant polynomial: precision of the inputs is irrelevant
            total = total.truncate(max(x.prec, y.prec))
        return total

    def to_pairs(self):
        return [[a, b, render_coeff(v)] for (a, b), v in self._c.items()]

    def __repr__(self):
        if not self._c:
            return "BivariatePoly(0)"
        terms = [f"({v})*x^{a}*y^{b}" for (a, b), v in self._c.items()]
        return "BivariatePoly(" + " + ".join(terms) + ")"


def _power(cache, s, k):
    if cache[k] is None:
        if k == 1:
            cache[k] = s
        else:
            half = _power(cache, s, k // 2)
            p = half * half
            if k % 2:
                p = p * s
            cache[k] = p
    return cache[k]
