"""Exact arithmetic in the Gaussian rationals Q(i).

Values are immutable.  Real and imaginary parts are ``gmpy2.mpq`` rationals,
which are kept reduced with positive denominators by gmpy2 itself.
"""

from __future__ import annotations

import re
from fractions import Fraction

import gmpy2
from gmpy2 import mpq
from sympy import factorint
from sympy.ntheory import sqrt_mod

from .errors import DivisionByZero, NoRootInField, ParseError

__all__ = [
    "GaussianRational",
    "ZERO",
    "ONE",
    "I",
    "gr",
    "gr_arith",
    "gr_conj",
    "gr_nth_root",
    "gr_root_of_unity_order",
    "parse_coeff",
    "render_coeff",
]

_MPQ_ZERO = mpq(0)


_MPQ_TYPE = type(mpq(0))
_MPZ_TYPE = type(gmpy2.mpz(0))


def _q(value) -> mpq:
    if isinstance(value, _MPQ_TYPE):
        return value
    if isinstance(value, (int, _MPZ_TYPE)):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


class GaussianRational:
    """An element ``re + im*i`` of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _q(re))
        object.__setattr__(self, "im", _q(im))

    @classmethod
    def _raw(cls, re: mpq, im: mpq) -> "GaussianRational":
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- conversion ---------------------------------------------------------

    @staticmethod
    def coerce(value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            raise TypeError("floating point complex numbers are not exact")
        if isinstance(value, float):
            raise TypeError("floats are not exact")
        return GaussianRational._raw(_q(value), _MPQ_ZERO)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return not self.im

    # -- field operations ---------------------------------------------------

    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            return GaussianRational._raw(a * c - b * d, a * d + b * c)
        try:
            o = _q(other)
        except TypeError:
            return NotImplemented
        return GaussianRational._raw(self.re * o, self.im * o)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def norm(self) -> mpq:
        """Squared absolute value ``re**2 + im**2``."""
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussianRational":
        n = self.norm()
        if not n:
            raise DivisionByZero("division by zero in Q(i)")
        return GaussianRational._raw(self.re / n, -self.im / n)

    def __truediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> "GaussianRational":
        return GaussianRational._raw(self.re, -self.im)

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        try:
            o = _q(other)
        except TypeError:
            return NotImplemented
        return not self.im and self.re == o

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def sort_key(self):
        """Lexicographic (re, im) key used to order roots."""
        return (self.re, self.im)

    def __repr__(self):
        return f"GaussianRational({render_coeff(self)!r})"

    def __str__(self):
        return render_coeff(self)


ZERO = GaussianRational._raw(_MPQ_ZERO, _MPQ_ZERO)
ONE = GaussianRational._raw(mpq(1), _MPQ_ZERO)
I = GaussianRational._raw(_MPQ_ZERO, mpq(1))


def gr(value) -> GaussianRational:
    """Build a coefficient from an int, Fraction, mpq, literal string or itself."""
    if isinstance(value, str):
        return parse_coeff(value)
    return GaussianRational.coerce(value)


def gr_arith(a: GaussianRational, b: GaussianRational, op: str) -> GaussianRational:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def gr_conj(a: GaussianRational) -> GaussianRational:
    return a.conj()


def gr_root_of_unity_order(a: GaussianRational):
    """Multiplicative order of ``a`` if it is a root of unity, else ``None``.

    Q(i) contains exactly four roots of unity.
    """
    if a == ONE:
        return 1
    if a == -ONE:
        return 2
    if a == I or a == -I:
        return 4
    return None


# -- Gaussian integers as (re, im) pairs of Python ints ------------------------


def _gi_mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gi_pow(a, n):
    result = (1, 0)
    while n:
        if n & 1:
            result = _gi_mul(result, a)
        a = _gi_mul(a, a)
        n >>= 1
    return result


def _gi_divmod_exact(a, b):
    """Return a/b if b divides a in Z[i], else None."""
    n = b[0] * b[0] + b[1] * b[1]
    num = _gi_mul(a, (b[0], -b[1]))
    if num[0] % n or num[1] % n:
        return None
    return (num[0] // n, num[1] // n)


def _gi_rem(a, b):
    n = b[0] * b[0] + b[1] * b[1]
    num = _gi_mul(a, (b[0], -b[1]))
    # round to nearest; ties are harmless for a Euclidean remainder
    q = ((2 * num[0] + n) // (2 * n), (2 * num[1] + n) // (2 * n))
    qb = _gi_mul(q, b)
    return (a[0] - qb[0], a[1] - qb[1])


def _gi_gcd(a, b):
    while b != (0, 0):
        a, b = b, _gi_rem(a, b)
    return a


def _gaussian_primes_over(p: int):
    """Gaussian primes (up to units) dividing the rational prime ``p``."""
    if p == 2:
        return [(1, 1)]
    if p % 4 == 3:
        return [(p, 0)]
    x = sqrt_mod(-1, p)
    pi = _gi_gcd((p, 0), (x, 1))
    return [pi, (pi[0], -pi[1])]


def _gi_nth_roots(z, n):
    """All w in Z[i] with w**n == z, for z != 0."""
    norm = z[0] * z[0] + z[1] * z[1]
    m, exact = gmpy2.iroot(gmpy2.mpz(norm), n)
    if not exact:
        return []
    m = int(m)
    base = (1, 0)
    rest = z
    for p, _ in factorint(m).items():
        for pi in _gaussian_primes_over(p):
            e = 0
            while True:
                q = _gi_divmod_exact(rest, pi)
                if q is None:
                    break
                rest = q
                e += 1
            if e % n:
                return []
            base = _gi_mul(base, _gi_pow(pi, e // n))
    # what is left must be a unit
    if rest[0] * rest[0] + rest[1] * rest[1] != 1:
        return []
    roots = []
    base_n = _gi_pow(base, n)
    for u in ((1, 0), (0, 1), (-1, 0), (0, -1)):
        w = _gi_mul(base, u)
        if _gi_mul(base_n, _gi_pow(u, n)) == z:
            roots.append(w)
    return roots


def gr_nth_root(a: GaussianRational, n: int) -> GaussianRational:
    """An x in Q(i) with ``x**n == a``; the largest by (re, im) if several.

    The tie-break picks the principal-looking root: 2 for 4, i for -1.

    Raises :class:`NoRootInField` when no such x exists.
    """
    if n < 1:
        raise ValueError("root index must be positive")
    if not a:
        raise ValueError("root of zero requested")
    if n == 1:
        return a
    # a = (A + B i) / D;  if x**n == a then (x D)**n = (A + B i) D**(n-1) in Z[i]
    d = int(gmpy2.lcm(a.re.denominator, a.im.denominator))
    A = int(a.re * d)
    B = int(a.im * d)
    scale = d ** (n - 1)
    roots = _gi_nth_roots((A * scale, B * scale), n)
    if not roots:
        raise NoRootInField(f"{render_coeff(a)} has no {n}-th root in Q(i)")
    cands = [GaussianRational(mpq(w[0], d), mpq(w[1], d)) for w in roots]
    return max(cands, key=GaussianRational.sort_key)


# -- literal grammar -------------------------------------------------------

_RAT = r"-?\d+(?:/\d+)?"
_URAT = r"\d+(?:/\d+)?"
_COEFF_RE = re.compile(
    rf"""^(?:
        (?P<re_only>{_RAT})
      | (?P<im_only>{_RAT})i
      | (?P<re>{_RAT})(?P<sign>[+-])(?P<im>{_URAT})?i
      | (?P<unit>-?)i
    )$""",
    re.VERBOSE,
)


def _parse_rat(text: str) -> mpq:
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise ParseError(f"zero denominator in {text!r}")
        return mpq(int(num), int(den))
    return mpq(int(text))


def parse_coeff(text: str) -> GaussianRational:
    """Parse a coefficient literal such as ``19/18``, ``1/2+1/3i`` or ``-i``."""
    if not isinstance(text, str):
        raise ParseError(f"coefficient must be a string, got {type(text).__name__}")
    s = text.strip()
    m = _COEFF_RE.match(s)
    if m is None:
        raise ParseError(f"malformed coefficient {text!r}")
    if m.group("re_only") is not None:
        return GaussianRational._raw(_parse_rat(m.group("re_only")), _MPQ_ZERO)
    if m.group("im_only") is not None:
        return GaussianRational._raw(_MPQ_ZERO, _parse_rat(m.group("im_only")))
    if m.group("re") is not None:
        im = _parse_rat(m.group("im")) if m.group("im") else mpq(1)
        if m.group("sign") == "-":
            im = -im
        return GaussianRational._raw(_parse_rat(m.group("re")), im)
    return -I if m.group("unit") else I


def _render_rat(q: mpq) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def render_coeff(a: GaussianRational) -> str:
    """Canonical literal; always accepted by :func:`parse_coeff`."""
    re_, im = a.re, a.im
    if not im:
        return _render_rat(re_)
    if not re_:
        if im == 1:
            return "i"
        if im == -1:
            return "-i"
        return _render_rat(im) + "i"
    sign = "+" if im > 0 else "-"
    return f"{_render_rat(re_)}{sign}{_render_rat(abs(im))}i"
