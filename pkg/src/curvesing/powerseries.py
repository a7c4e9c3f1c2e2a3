"""Truncated one-variable power series over Q(i) with precision tracking.

A :class:`TruncatedSeries` knows the coefficients of ``t**0 .. t**prec``
exactly; everything above ``prec`` is unknown.  Every operation returns the
largest precision that is still determined by its inputs, and asking for a
coefficient beyond it raises :class:`PrecisionExhausted` instead of
answering zero.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from gmpy2 import mpq

from .coeff import ONE, ZERO, GaussianRational, gr, gr_nth_root
from .errors import (
    CompositionOrderError,
    OrderNotDivisible,
    PrecisionExhausted,
    PreconditionError,
)

__all__ = [
    "TruncatedSeries",
    "order",
    "ring_op",
    "compose",
    "unit_root",
    "nth_root",
    "comp_inverse",
    "conj_series",
]

_Q0 = mpq(0)
_raw = GaussianRational._raw


def _dense(items, n):
    """Dense (re, im) lists of length n + 1 from sorted (exp, coeff) items."""
    re = [_Q0] * (n + 1)
    im = [_Q0] * (n + 1)
    for e, c in items:
        if e > n:
            break
        re[e] = c.re
        im[e] = c.im
    return re, im


def _from_dense(re, im, prec):
    out = {}
    for e in range(min(prec, len(re) - 1) + 1):
        if re[e] or im[e]:
            out[e] = _raw(re[e], im[e])
    return TruncatedSeries._make(out, prec)


class TruncatedSeries:
    """Power series ``sum c_e t**e`` known for ``e <= prec``."""

    __slots__ = ("_c", "prec", "_real")

    def __init__(self, coeffs: Mapping[int, object] | Iterable = (), prec: int = 0):
        if prec < 0:
            raise ValueError("precision must be non-negative")
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c = {}
        for e, v in items:
            e = int(e)
            if e < 0:
                raise ValueError("negative exponent in a power series")
            v = gr(v)
            if v and e <= prec:
                c[e] = c.get(e, ZERO) + v
        self._c = {e: c[e] for e in sorted(c) if c[e]}
        self.prec = prec
        self._real = None

    @classmethod
    def _make(cls, c: dict, prec: int) -> "TruncatedSeries":
        # c must already be sorted, zero-free and within prec
        obj = object.__new__(cls)
        obj._c = c
        obj.prec = prec
        obj._real = None
        return obj

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, prec: int) -> "TruncatedSeries":
        return cls._make({}, prec)

    @classmethod
    def one(cls, prec: int) -> "TruncatedSeries":
        return cls._make({0: ONE}, prec)

    @classmethod
    def monomial(cls, exp: int, coeff=1, prec: int = 0) -> "TruncatedSeries":
        c = gr(coeff)
        return cls._make({exp: c} if c and exp <= prec else {}, prec)

    @classmethod
    def t(cls, prec: int) -> "TruncatedSeries":
        return cls.monomial(1, 1, prec)

    # -- access -------------------------------------------------------------

    def coeff(self, e: int) -> GaussianRational:
        if e > self.prec:
            raise PrecisionExhausted(f"coefficient of t^{e} requested, known only to t^{self.prec}")
        return self._c.get(e, ZERO)

    __getitem__ = coeff

    def items(self):
        return self._c.items()

    def support(self):
        return list(self._c)

    def as_dict(self) -> dict:
        return dict(self._c)

    def order(self):
        """Least exponent with a nonzero coefficient; ``None`` if zero to precision."""
        for e in self._c:
            return e
        return None

    def effective_order(self) -> int:
        o = self.order()
        return self.prec + 1 if o is None else o

    def leading_coeff(self) -> GaussianRational:
        o = self.order()
        if o is None:
            raise PrecisionExhausted("series is zero to its precision")
        return self._c[o]

    def is_real(self) -> bool:
        if self._real is None:
            self._real = all(not c.im for c in self._c.values())
        return self._real

    def is_zero(self) -> bool:
        return not self._c

    def degree(self):
        return max(self._c) if self._c else None

    # -- comparison -----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.prec == other.prec and self._c == other._c

    def __hash__(self):
        return hash((self.prec, tuple(self._c.items())))

    def agrees_with(self, other: "TruncatedSeries", upto: int | None = None) -> bool:
        """Equal on every exponent both series know (and ``<= upto`` if given)."""
        p = min(self.prec, other.prec)
        if upto is not None:
            p = min(p, upto)
        a = {e: c for e, c in self._c.items() if e <= p}
        b = {e: c for e, c in other._c.items() if e <= p}
        return a == b

    def __repr__(self):
        if not self._c:
            body = "0"
        else:
            body = " + ".join(f"({c})*t^{e}" for e, c in self._c.items())
        return f"TruncatedSeries({body} + O(t^{self.prec + 1}))"

    # -- precision handling ---------------------------------------------------

    def truncate(self, prec: int) -> "TruncatedSeries":
        if prec >= self.prec:
            return self
        if prec < 0:
            raise ValueError("precision must be non-negative")
        return TruncatedSeries._make({e: c for e, c in self._c.items() if e <= prec}, prec)

    def with_precision(self, prec: int) -> "TruncatedSeries":
        """Reinterpret a polynomial as known to ``prec`` (missing terms are zero)."""
        return TruncatedSeries._make({e: c for e, c in self._c.items() if e <= prec}, prec)

    # -- ring operations ------------------------------------------------------

    def __neg__(self):
        return TruncatedSeries._make({e: -c for e, c in self._c.items()}, self.prec)

    def _addsub(self, other, sign):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries._make({0: gr(other)} if gr(other) else {}, self.prec)
        p = min(self.prec, other.prec)
        out = {e: c for e, c in self._c.items() if e <= p}
        for e, c in other._c.items():
            if e > p:
                break
            v = out.get(e, ZERO) + c if sign > 0 else out.get(e, ZERO) - c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return TruncatedSeries._make({e: out[e] for e in sorted(out)}, p)

    def __add__(self, other):
        return self._addsub(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._addsub(other, -1)

    def __rsub__(self, other):
        return (-self)._addsub(other, 1)

    def scale(self, c) -> "TruncatedSeries":
        c = gr(c)
        if not c:
            return TruncatedSeries.zero(self.prec)
        return TruncatedSeries._make({e: v * c for e, v in self._c.items()}, self.prec)

    def mul_prec(self, other: "TruncatedSeries") -> int:
        pa, pb = self.prec, other.prec
        return min(pa + other.effective_order(), pb + self.effective_order(), pa + pb)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        return self._mul_to(other, self.mul_prec(other))

    __rmul__ = __mul__

    def _mul_to(self, other: "TruncatedSeries", p: int) -> "TruncatedSeries":
        a = [(e, c.re, c.im) for e, c in self._c.items() if e <= p]
        b = [(e, c.re, c.im) for e, c in other._c.items() if e <= p]
        if not a or not b:
            return TruncatedSeries.zero(p)
        re = [_Q0] * (p + 1)
        if self.is_real() and other.is_real():
            for ea, ar, _ in a:
                lim = p - ea
                for eb, br, _ in b:
                    if eb > lim:
                        break
                    re[ea + eb] += ar * br
            return _from_dense(re, [_Q0] * (p + 1), p)
        im = [_Q0] * (p + 1)
        for ea, ar, ai in a:
            lim = p - ea
            for eb, br, bi in b:
                if eb > lim:
                    break
                k = ea + eb
                re[k] += ar * br - ai * bi
                im[k] += ar * bi + ai * br
        return _from_dense(re, im, p)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        if n == 0:
            return TruncatedSeries.one(self.prec)
        result = self
        for _ in range(n - 1):
            result = result * self
        return result

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by ``t**k``."""
        return TruncatedSeries._make({e + k: c for e, c in self._c.items()}, self.prec + k)

    def unshift(self, k: int) -> "TruncatedSeries":
        """Divide by ``t**k``; requires every known coefficient below ``k`` to vanish."""
        if self.prec < k:
            raise PrecisionExhausted("cannot divide by t^k beyond the known precision")
        o = self.order()
        if o is not None and o < k:
            raise PreconditionError(f"series has order {o} < {k}; not divisible by t^{k}")
        return TruncatedSeries._make({e - k: c for e, c in self._c.items()}, self.prec - k)

    def derivative(self) -> "TruncatedSeries":
        if self.prec == 0:
            raise PrecisionExhausted("derivative of a series known only to its constant term")
        return TruncatedSeries._make(
            {e - 1: c * e for e, c in self._c.items() if e >= 1}, self.prec - 1
        )

    def conj(self) -> "TruncatedSeries":
        return TruncatedSeries._make({e: c.conj() for e, c in self._c.items()}, self.prec)

    def substitute_power(self, d: int) -> "TruncatedSeries":
        """``s(t**d)``."""
        return TruncatedSeries._make({e * d: c for e, c in self._c.items()}, self.prec * d + d - 1)

    def contract_power(self, d: int) -> "TruncatedSeries":
        """Inverse of :meth:`substitute_power`; every exponent must be divisible by d."""
        if any(e % d for e in self._c):
            raise PreconditionError(f"exponents are not all divisible by {d}")
        return TruncatedSeries._make({e // d: c for e, c in self._c.items()}, self.prec // d)

    # -- composition and friends -----------------------------------------------

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        return compose(self, inner)

    def reciprocal(self) -> "TruncatedSeries":
        """Multiplicative inverse of a unit series."""
        c0 = self._c.get(0)
        if not c0:
            raise PreconditionError("only series with nonzero constant term are invertible")
        p = self.prec
        inv0 = c0.inverse()
        s = [(e, c) for e, c in self._c.items() if e >= 1]
        g = [inv0]
        for m in range(1, p + 1):
            acc = ZERO
            for k, c in s:
                if k > m:
                    break
                acc = acc + c * g[m - k]
            g.append(-acc * inv0)
        return TruncatedSeries._make({e: v for e, v in enumerate(g) if v}, p)


def order(s: TruncatedSeries):
    return s.order()


def ring_op(a: TruncatedSeries, b: TruncatedSeries, op: str) -> TruncatedSeries:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown ring operation {op!r}")


def compose_prec(outer: TruncatedSeries, inner: TruncatedSeries) -> int:
    ob = inner.effective_order()
    pa, pb = outer.prec, inner.prec
    p = (pa + 1) * ob - 1
    for k in outer._c:
        if k >= 1:
            p = min(p, pb + (k - 1) * ob)
            break
    return p


def compose(outer: TruncatedSeries, inner: TruncatedSeries) -> TruncatedSeries:
    """``outer(inner(t))`` for an inner series without constant term.

    The coefficients equal the partition sums of Faa di Bruno's formula; they
    are accumulated through successive powers of ``inner`` rather than by
    enumerating partitions.
    """
    if inner._c.get(0):
        raise CompositionOrderError("inner series must have zero constant term")
    p = compose_prec(outer, inner)
    ob = inner.effective_order()
    c0 = outer._c.get(0)
    real = outer.is_real() and inner.is_real()
    re = [_Q0] * (p + 1)
    im = [_Q0] * (p + 1)
    if c0:
        re[0], im[0] = c0.re, c0.im
    top = max((k for k in outer._c if k * ob <= p), default=0)
    if top == 0:
        return _from_dense(re, im, p)
    b = [(e, c.re, c.im) for e, c in inner._c.items() if e <= p]
    # pw holds inner**k densely, truncated at p
    pw_re, pw_im = _dense(inner._c.items(), p)
    for k in range(1, top + 1):
        ak = outer._c.get(k)
        start = k * ob
        if ak:
            ar, ai = ak.re, ak.im
            if real:
                for e in range(start, p + 1):
                    v = pw_re[e]
                    if v:
                        re[e] += ar * v
            else:
                for e in range(start, p + 1):
                    vr, vi = pw_re[e], pw_im[e]
                    if vr or vi:
                        re[e] += ar * vr - ai * vi
                        im[e] += ar * vi + ai * vr
        if k == top:
            break
        nre = [_Q0] * (p + 1)
        if real:
            for e in range(start, p - ob + 1):
                v = pw_re[e]
                if not v:
                    continue
                lim = p - e
                for eb, br, _ in b:
                    if eb > lim:
                        break
                    nre[e + eb] += v * br
            pw_re = nre
        else:
            nim = [_Q0] * (p + 1)
            for e in range(start, p - ob + 1):
                vr, vi = pw_re[e], pw_im[e]
                if not (vr or vi):
                    continue
                lim = p - e
                for eb, br, bi in b:
                    if eb > lim:
                        break
                    nre[e + eb] += vr * br - vi * bi
                    nim[e + eb] += vr * bi + vi * br
            pw_re, pw_im = nre, nim
    return _from_dense(re, im, p)


def _power_recurrence(s: TruncatedSeries, alpha: mpq) -> TruncatedSeries:
    """``s**alpha`` for a series with constant term 1 (J.C.P. Miller recurrence)."""
    p = s.prec
    terms = [(k, c.re, c.im) for k, c in s._c.items() if k >= 1]
    gre = [mpq(1)] + [_Q0] * p
    gim = [_Q0] * (p + 1)
    real = s.is_real()
    for m in range(1, p + 1):
        ar = _Q0
        ai = _Q0
        for k, sr, si in terms:
            if k > m:
                break
            w = alpha * k - (m - k)
            if not w:
                continue
            gr_, gi = gre[m - k], gim[m - k]
            if real:
                ar += w * sr * gr_
            else:
                ar += w * (sr * gr_ - si * gi)
                ai += w * (sr * gi + si * gr_)
        gre[m] = ar / m
        gim[m] = ai / m
    return _from_dense(gre, gim, p)


def unit_root(s: TruncatedSeries, n: int) -> TruncatedSeries:
    """The n-th root with constant term 1 of a series with constant term 1."""
    if n < 1:
        raise ValueError("root index must be positive")
    if s._c.get(0) != ONE:
        raise PreconditionError("unit_root needs constant term exactly 1")
    if n == 1:
        return s
    return _power_recurrence(s, mpq(1, n))


def nth_root(s: TruncatedSeries, n: int) -> TruncatedSeries:
    """A series r with ``r**n == s`` to precision.

    Raises :class:`OrderNotDivisible` or :class:`NoRootInField`.
    """
    o = s.order()
    if o is None:
        raise PrecisionExhausted("series is zero to its precision")
    if o % n:
        raise OrderNotDivisible(f"order {o} not divisible by {n}")
    lc = s._c[o]
    r0 = gr_nth_root(lc, n)
    unit = s.unshift(o).scale(lc.inverse())
    return unit_root(unit, n).scale(r0).shift(o // n)


def comp_inverse(b: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse of an order-one series by Lagrange inversion.

    ``[t^n] b^{-1} = (1/n) [t^{n-1}] (t / b)^n``.
    """
    if b.order() != 1:
        raise PreconditionError("compositional inverse needs a series of order exactly 1")
    p = b.prec
    h = b.unshift(1).reciprocal()  # t / b, known to p - 1
    if p <= 1:
        return TruncatedSeries._make({1: h._c[0]}, p)
    h = h.truncate(p - 1)
    out = {}
    pw = h
    for n in range(1, p + 1):
        c = pw._c.get(n - 1)
        if c:
            out[n] = c * mpq(1, n)
        if n < p:
            pw = pw._mul_to(h, p - 1)
    return TruncatedSeries._make(out, p)


def conj_series(s: TruncatedSeries) -> TruncatedSeries:
    return s.conj()
