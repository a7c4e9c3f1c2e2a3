"""Single branches: normalization and the invariants Γ, Λ and λ.

A branch is given by a parametrization ``t -> (x(t), y(t))``.  Normalizing
brings it to ``(t**v0, sum w_s t**s)`` with ``w_{v1} = 1``; every change made
on the way is recorded in a :class:`ChangeLog` so the result can be checked
by replaying the log on the original input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Mapping, Optional

from .bivariate import BivariatePoly
from .coeff import ONE, ZERO, GaussianRational, gr
from .errors import (
    NotFinitelyDetermined,
    PrecisionExhausted,
    PreconditionError,
)
from .powerseries import TruncatedSeries, comp_inverse, compose, unit_root

__all__ = [
    "BranchParam",
    "SourceReparam",
    "TargetScaleX",
    "TargetScaleY",
    "TargetSwap",
    "TargetShear",
    "ChangeLog",
    "NormalizedBranch",
    "Semigroup",
    "ValueSet",
    "primitive_reduce",
    "normalize",
    "semigroup",
    "char_exponents",
    "semigroup_from_char",
    "conductor_from_char",
    "differential_values",
    "zariski_invariant",
    "conj_branch",
    "estimate_precision",
]


# -- parametrizations ----------------------------------------------------------


@dataclass(frozen=True)
class BranchParam:
    """A parametrization ``(x(t), y(t))``.

    ``exact`` marks polynomial input: coefficients past ``prec`` are known to
    vanish, so the branch can be re-read at any precision.
    """

    x: TruncatedSeries
    y: TruncatedSeries
    exact: bool = False

    @classmethod
    def from_polys(cls, x: Mapping[int, object], y: Mapping[int, object]) -> "BranchParam":
        xs = TruncatedSeries(x, max(list(x) + [1]))
        ys = TruncatedSeries(y, max(list(y) + [1]))
        if xs.order() == 0 or ys.order() == 0:
            raise PreconditionError("a branch must pass through the origin")
        p = max(xs.prec, ys.prec)
        return cls(xs.with_precision(p), ys.with_precision(p), True)

    @property
    def prec(self) -> int:
        return min(self.x.prec, self.y.prec)

    def at_precision(self, n: int) -> "BranchParam":
        if self.exact:
            return BranchParam(self.x.with_precision(n), self.y.with_precision(n), True)
        return BranchParam(self.x.truncate(n), self.y.truncate(n), False)

    def conj(self) -> "BranchParam":
        return BranchParam(self.x.conj(), self.y.conj(), self.exact)

    def agrees_with(self, other: "BranchParam", upto: Optional[int] = None) -> bool:
        return self.x.agrees_with(other.x, upto) and self.y.agrees_with(other.y, upto)

    def exponent_gcd(self) -> int:
        g = 0
        for e in self.x.support() + self.y.support():
            g = gcd(g, e)
        return g

    def __repr__(self):
        tag = "exact" if self.exact else f"prec {self.prec}"
        return f"BranchParam(x={self.x!r}, y={self.y!r}, {tag})"


def conj_branch(b: BranchParam) -> BranchParam:
    return b.conj()


# -- elementary changes ------------------------------------------------------------


@dataclass(frozen=True)
class SourceReparam:
    """``t -> phi(t)`` with ``phi`` of order one."""

    phi: TruncatedSeries

    def __post_init__(self):
        if self.phi.order() != 1:
            raise PreconditionError("a source reparametrization must have order 1")

    def apply(self, b: BranchParam) -> BranchParam:
        return BranchParam(compose(b.x, self.phi), compose(b.y, self.phi))


@dataclass(frozen=True)
class TargetScaleX:
    c: GaussianRational

    def apply(self, b: BranchParam) -> BranchParam:
        if not self.c:
            raise PreconditionError("scaling by zero is not invertible")
        return BranchParam(b.x.scale(self.c), b.y, b.exact)


@dataclass(frozen=True)
class TargetScaleY:
    c: GaussianRational

    def apply(self, b: BranchParam) -> BranchParam:
        if not self.c:
            raise PreconditionError("scaling by zero is not invertible")
        return BranchParam(b.x, b.y.scale(self.c), b.exact)


@dataclass(frozen=True)
class TargetSwap:
    def apply(self, b: BranchParam) -> BranchParam:
        return BranchParam(b.y, b.x, b.exact)


@dataclass(frozen=True)
class TargetShear:
    """``(x, y) -> (x + dx(x, y), y + dy(x, y))``.

    The polynomials have no constant term and the linear part of the map must
    stay invertible, so this is a biholomorphism of the target.
    """

    dx: BivariatePoly = field(default_factory=BivariatePoly)
    dy: BivariatePoly = field(default_factory=BivariatePoly)

    def __post_init__(self):
        if self.dx.coeff(0, 0) or self.dy.coeff(0, 0):
            raise PreconditionError("a target shear must fix the origin")
        a = ONE + self.dx.coeff(1, 0)
        b = self.dx.coeff(0, 1)
        c = self.dy.coeff(1, 0)
        d = ONE + self.dy.coeff(0, 1)
        if not (a * d - b * c):
            raise PreconditionError("target shear has a singular linear part")

    def apply(self, b: BranchParam) -> BranchParam:
        x, y = b.x, b.y
        nx = x + self.dx.evaluate(x, y) if self.dx else x
        ny = y + self.dy.evaluate(x, y) if self.dy else y
        return BranchParam(nx, ny)


@dataclass(frozen=True)
class ChangeLog:
    """An ordered list of elementary changes."""

    changes: tuple = ()

    def then(self, other) -> "ChangeLog":
        if isinstance(other, ChangeLog):
            return ChangeLog(self.changes + other.changes)
        return ChangeLog(self.changes + (other,))

    def replay(self, b: BranchParam) -> BranchParam:
        for ch in self.changes:
            b = ch.apply(b)
        return b

    def __len__(self):
        return len(self.changes)

    def __iter__(self):
        return iter(self.changes)


# -- normalization --------------------------------------------------------------------


@dataclass(frozen=True)
class NormalizedBranch:
    """``(t**v0, y)`` with ``y`` of order ``v1`` and leading coefficient 1.

    For a smooth branch (``v0 == 1``) the second component is sheared to 0.
    ``source`` is the parametrization the ``witness`` starts from.
    """

    v0: int
    y: TruncatedSeries
    witness: ChangeLog
    source: BranchParam

    @property
    def smooth(self) -> bool:
        return self.v0 == 1

    @property
    def v1(self) -> Optional[int]:
        return None if self.smooth else self.y.order()

    @property
    def prec(self) -> int:
        return self.y.prec

    @property
    def ycoeffs(self) -> dict:
        return self.y.as_dict()

    @property
    def param(self) -> BranchParam:
        return BranchParam(TruncatedSeries.monomial(self.v0, 1, self.prec + self.v0), self.y)

    def replay_matches(self) -> bool:
        """Replay the witness on the source and compare with ``param``."""
        out = self.witness.replay(self.source.at_precision(self._source_prec()))
        return out.agrees_with(self.param) and out.prec >= self.prec

    def _source_prec(self) -> int:
        return self.prec if self.source.exact else self.source.prec


def primitive_reduce(g: BranchParam) -> BranchParam:
    """Replace ``t**d`` by ``t`` when every exponent is divisible by ``d > 1``."""
    if g.x.is_zero() and g.y.is_zero():
        raise PreconditionError("both components vanish")
    d = g.exponent_gcd()
    if d <= 1:
        return g
    if g.exact:
        p = max(g.x.degree() or 0, g.y.degree() or 0) // d
        return BranchParam(g.x.contract_power(d).with_precision(max(p, 1)),
                           g.y.contract_power(d).with_precision(max(p, 1)), True)
    return BranchParam(g.x.contract_power(d), g.y.contract_power(d), False)


def _straighten_x(x: TruncatedSeries, v0: int) -> SourceReparam:
    """The reparametrization turning a monic order-``v0`` series into ``t**v0``."""
    u = unit_root(x.unshift(v0), v0).shift(1)
    return SourceReparam(comp_inverse(u))


def normalize(g: BranchParam, prec: int) -> NormalizedBranch:
    """Bring ``g`` to ``(t**v0, t**v1 + ...)`` working at precision ``prec``."""
    if g.exact and g.exponent_gcd() > 1:
        raise PreconditionError("parametrization is not primitive; call primitive_reduce")
    b = g.at_precision(prec)
    log = []

    def do(ch):
        nonlocal b
        log.append(ch)
        b = ch.apply(b)

    ox, oy = b.x.order(), b.y.order()
    if ox is None and oy is None:
        raise PrecisionExhausted("both components vanish to the working precision")
    if ox is None or (oy is not None and oy < ox):
        do(TargetSwap())
    v0 = b.x.order()
    lc = b.x.leading_coeff()
    if lc != ONE:
        do(TargetScaleX(lc.inverse()))
    if b.x.as_dict() != {v0: ONE}:
        do(_straighten_x(b.x, v0))
    # x is now t**v0 to its precision; remove y-terms at multiples of v0
    dy = BivariatePoly()
    v1 = None
    for e, c in b.y.items():
        if e % v0:
            v1 = e
            break
        dy = dy - BivariatePoly.monomial(e // v0, 0, c)
    if dy:
        do(TargetShear(dy=dy))
    if v0 > 1:
        if v1 is None:
            raise NotFinitelyDetermined(
                f"no exponent prime to the multiplicity {v0} up to t^{b.y.prec}")
        w = b.y.coeff(v1)
        if w != ONE:
            do(TargetScaleY(w.inverse()))
    expected = TruncatedSeries.monomial(v0, 1, b.x.prec)
    if b.x != expected:
        raise PrecisionExhausted("first component could not be straightened to t^v0")
    y = b.y if v0 > 1 else TruncatedSeries.zero(b.y.prec)
    return NormalizedBranch(v0, y, ChangeLog(tuple(log)), g)


# -- characteristic exponents -------------------------------------------------------


def char_exponents(nb: NormalizedBranch) -> tuple:
    """Puiseux characteristic ``(beta_0; beta_1, ..., beta_g)`` by gcd descent."""
    if nb.smooth:
        return (1,)
    e = nb.v0
    betas = [nb.v0]
    for s in nb.y.support():
        if s % e:
            betas.append(s)
            e = gcd(e, s)
            if e == 1:
                return tuple(betas)
    raise NotFinitelyDetermined(
        f"gcd descent stopped at {e} with the series known to t^{nb.y.prec}")


def semigroup_from_char(betas) -> tuple:
    """Minimal generators of Γ from the characteristic exponents.

    ``g_1 = beta_1`` and ``g_{k+1} = n_k g_k + beta_{k+1} - beta_k`` with
    ``n_k = e_{k-1} / e_k``.
    """
    betas = list(betas)
    if betas[0] == 1:
        return (1,)
    gens = [betas[0], betas[1]]
    es = [betas[0]]
    for b in betas[1:]:
        es.append(gcd(es[-1], b))
    for k in range(1, len(betas) - 1):
        n_k = es[k - 1] // es[k]
        gens.append(n_k * gens[k] + betas[k + 1] - betas[k])
    return tuple(gens)


def conductor_from_char(betas) -> int:
    """``c = sum (n_k - 1) g_k - beta_0 + 1``."""
    betas = list(betas)
    if betas[0] == 1:
        return 0
    gens = semigroup_from_char(betas)
    es = [betas[0]]
    for b in betas[1:]:
        es.append(gcd(es[-1], b))
    c = -betas[0] + 1
    for k in range(1, len(betas)):
        n_k = es[k - 1] // es[k]
        c += (n_k - 1) * gens[k]
    return c


def estimate_precision(nb: NormalizedBranch) -> int:
    """Working precision that makes Γ, Λ and the normal form exact."""
    if nb.smooth:
        return 2
    c = conductor_from_char(char_exponents(nb))
    return c + 2 * nb.v0


# -- staircase closure -----------------------------------------------------------------


class _Staircase:
    """Row echelon form indexed by leading exponent.

    Rows are sparse dicts truncated at ``bound``; an optional tag is carried
    through the same linear combinations.
    """

    def __init__(self, bound: int):
        self.bound = bound
        self.rows = {}

    def insert(self, vec: dict, tag=None):
        rows = self.rows
        while vec:
            lead = min(vec)
            row = rows.get(lead)
            if row is None:
                rows[lead] = (vec, tag)
                return lead
            rvec, rtag = row
            f = vec[lead] / rvec[lead]
            for e, c in rvec.items():
                v = vec.get(e, ZERO) - f * c
                if v:
                    vec[e] = v
                else:
                    vec.pop(e, None)
            if tag is not None:
                tag = _tag_sub(tag, rtag, f)
        return None


def _tag_sub(tag, rtag, f):
    return tuple(a - b.scale(f) for a, b in zip(tag, rtag))


def _window(s: TruncatedSeries, bound: int) -> dict:
    if s.prec < bound:
        raise PrecisionExhausted(f"need t^{bound}, series known to t^{s.prec}")
    return {e: c for e, c in s.items() if e <= bound}


def _y_powers(y: TruncatedSeries, top: int, bound: int) -> list:
    out = [TruncatedSeries.one(bound)]
    for _ in range(top):
        out.append(out[-1]._mul_to(y, bound))
    return out


@dataclass(frozen=True)
class Semigroup:
    """Γ as its members in ``[0, bound]``; every integer ``>= bound`` belongs."""

    v0: int
    members: tuple
    conductor: int
    generators: tuple
    bound: int

    def __post_init__(self):
        object.__setattr__(self, "_set", frozenset(self.members))

    def __contains__(self, n: int) -> bool:
        return n >= self.bound or n in self._set

    def gaps(self) -> tuple:
        return tuple(n for n in range(self.conductor) if n not in self)


@dataclass(frozen=True)
class ValueSet:
    """Λ as its members in ``[1, bound]``; every integer ``>= bound`` belongs."""

    members: tuple
    bound: int

    def __post_init__(self):
        object.__setattr__(self, "_set", frozenset(self.members))

    def __contains__(self, n: int) -> bool:
        return n >= self.bound or n in self._set


def _minimal_generators(members, bound) -> tuple:
    mem = [m for m in members if m > 0]
    mset = set(mem)
    gens = []
    for m in mem:
        if not any((m - a) in mset for a in mem if a < m):
            gens.append(m)
    return tuple(gens)


def semigroup(nb: NormalizedBranch) -> Semigroup:
    """Γ by Gaussian elimination on the orders of ``x**a y**b`` along the branch."""
    if nb.smooth:
        return Semigroup(1, (0, 1), 0, (1,), 1)
    v0, v1 = nb.v0, nb.v1
    bound = conductor_from_char(char_exponents(nb)) + v0
    while True:
        if nb.prec < bound:
            raise PrecisionExhausted(f"semigroup needs the branch to t^{bound}")
        st = _Staircase(bound)
        ypow = _y_powers(nb.y, bound // v1, bound)
        for b in range(bound // v1 + 1):
            yb = _window(ypow[b], bound)
            for a in range((bound - v1 * b) // v0 + 1):
                st.insert({e + v0 * a: c for e, c in yb.items() if e + v0 * a <= bound})
        members = sorted(st.rows)
        gaps = [n for n in range(bound + 1) if n not in st.rows]
        cond = gaps[-1] + 1 if gaps else 0
        if bound - cond + 1 >= v0:
            gens = _minimal_generators(members, bound)
            return Semigroup(v0, tuple(members), cond, gens, bound)
        bound += v0


def differential_values(nb: NormalizedBranch, sg: Optional[Semigroup] = None) -> ValueSet:
    """Λ: orders plus one of ``h1 dx + h2 dy`` pulled back along the branch.

    Works with ``t * (h1(γ) x' + h2(γ) y')`` whose order is already the value.
    """
    if nb.smooth:
        raise PreconditionError("Λ is only defined here for singular branches")
    if sg is None:
        sg = semigroup(nb)
    v0, v1 = nb.v0, nb.v1
    bound = sg.conductor + v0
    if nb.prec < bound:
        raise PrecisionExhausted(f"Λ needs the branch to t^{bound}")
    y = nb.y
    # Euler derivative t*y'
    ty = TruncatedSeries._make({e: c * e for e, c in y.items()}, y.prec)
    tx = {v0: GaussianRational(v0)}
    st = _Staircase(bound)
    ypow = _y_powers(y, bound // v1, bound)
    tyw = _window(ty, bound)
    for b in range(bound // v1 + 1):
        yb = _window(ypow[b], bound)
        for a in range((bound - v1 * b - v0) // v0 + 1):
            shift = v0 * a
            # x^a y^b * t x'
            st.insert({e + shift + v0: c * tx[v0] for e, c in yb.items() if e + shift + v0 <= bound})
        if v1 * b + v1 <= bound:
            prod = ypow[b]._mul_to(ty, bound)
            pw = _window(prod, bound)
            for a in range((bound - v1 * b - v1) // v0 + 1):
                shift = v0 * a
                st.insert({e + shift: c for e, c in pw.items() if e + shift <= bound})
    members = tuple(n for n in sorted(st.rows) if n != 1)
    return ValueSet(members, bound)


def zariski_invariant(nb: NormalizedBranch, sg: Optional[Semigroup] = None,
                      lam: Optional[ValueSet] = None) -> Optional[int]:
    """``min(Λ \\ Γ) - v0``, or ``None`` for the monomial class."""
    if sg is None:
        sg = semigroup(nb)
    if lam is None:
        lam = differential_values(nb, sg)
    extra = [n for n in lam.members if n not in sg]
    if not extra:
        return None
    return extra[0] - nb.v0
