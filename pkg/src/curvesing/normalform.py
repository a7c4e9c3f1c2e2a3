"""Normal forms of singular branches and the equivalence decisions built on them.

The reduction kills, in increasing order, every coefficient ``w_s`` of
``(t**v0, t**v1 + ...)`` whose exponent lies in ``Λ - v0``, apart from the
Zariski exponent λ.  Each kill is the time-``c`` flow of a weighted
homogeneous vector field of positive weight, followed by the
reparametrization that restores ``x = t**v0``.  Two normal forms with the
same invariants are then equivalent iff their coefficients differ by the
scaling ``a_s -> r**(s - v1) a_s``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Optional

from .bivariate import BivariatePoly
from .branch import (
    BranchParam,
    ChangeLog,
    NormalizedBranch,
    Semigroup,
    SourceReparam,
    TargetScaleX,
    TargetScaleY,
    TargetShear,
    ValueSet,
    _Staircase,
    _straighten_x,
    char_exponents,
    differential_values,
    estimate_precision,
    normalize,
    semigroup,
    zariski_invariant,
)
from .coeff import ONE, GaussianRational, gr_nth_root, gr_root_of_unity_order, render_coeff
from .errors import (
    EliminationStuck,
    NoRootInField,
    PrecisionExhausted,
    PreconditionError,
    UnsupportedMultiBranch,
    UnsupportedSmoothBranches,
)
from .powerseries import TruncatedSeries

__all__ = [
    "NormalFormData",
    "BranchAnalysis",
    "OrbitDecision",
    "EquivalenceResult",
    "analyze_branch",
    "eliminate",
    "scaling_orbit_equal",
    "analytic_equivalent",
    "conjugate_branch",
    "smooth_equivalent",
]

MAX_RETRIES = 3
INITIAL_PRECISION = 16


@dataclass(frozen=True)
class NormalFormData:
    """``(t**v0, t**v1 + sum coeffs[s] t**s)`` together with its witness.

    ``coeffs`` holds the exponents strictly between ``v1`` and ``c - v0``;
    from ``c - v0`` on every exponent is removable, so ``param`` may still
    carry such terms without changing the class.
    """

    v0: int
    v1: Optional[int]
    lam: Optional[int]
    coeffs: dict
    witness: ChangeLog
    lambda_normalized: bool
    param: BranchParam
    source: BranchParam
    source_prec: int

    @property
    def monomial(self) -> bool:
        return self.lam is None

    def replay_matches(self) -> bool:
        start = self.source.at_precision(self.source_prec)
        out = self.witness.replay(start)
        return out.agrees_with(self.param) and out.prec >= self.param.y.prec

    def rendered(self) -> dict:
        return {str(s): render_coeff(c) for s, c in sorted(self.coeffs.items())}


@dataclass(frozen=True)
class BranchAnalysis:
    """Every invariant of one branch, computed at a single working precision."""

    source: BranchParam
    precision: int
    normalized: NormalizedBranch
    semigroup: Semigroup
    char: tuple
    values: Optional[ValueSet]
    lam: Optional[int]
    normal_form: Optional[NormalFormData]

    @property
    def v0(self) -> int:
        return self.normalized.v0

    @property
    def smooth(self) -> bool:
        return self.normalized.smooth


def analyze_branch(b: BranchParam, prec: Optional[int] = None, normal_form: bool = True) -> BranchAnalysis:
    """Normalize ``b`` and compute Γ, the characteristic, Λ, λ and the normal form.

    Without ``prec`` the working precision is derived from the conductor and
    doubled on :class:`PrecisionExhausted`, at most ``MAX_RETRIES`` times.
    """
    if prec is not None:
        return _analyze_at(b, prec, normal_form, fixed=True)
    p = INITIAL_PRECISION
    last = None
    for _ in range(MAX_RETRIES + 1):
        try:
            return _analyze_at(b, p, normal_form, fixed=False)
        except PrecisionExhausted as exc:
            last = exc
            p *= 2
    raise PrecisionExhausted(f"gave up after {MAX_RETRIES} retries: {last}")


def _analyze_at(b, p, want_nf, fixed):
    nb = normalize(b, p)
    if not fixed:
        need = estimate_precision(nb)
        if need > p:
            p = need
            nb = normalize(b, p)
    sg = semigroup(nb)
    ch = char_exponents(nb)
    if nb.smooth:
        nf = _smooth_normal_form(nb) if want_nf else None
        return BranchAnalysis(b, p, nb, sg, ch, None, None, nf)
    vs = differential_values(nb, sg)
    lam = zariski_invariant(nb, sg, vs)
    nf = eliminate(nb, sg, vs, lam) if want_nf else None
    return BranchAnalysis(b, p, nb, sg, ch, vs, lam, nf)


def _smooth_normal_form(nb):
    return NormalFormData(1, None, None, {}, nb.witness, False, nb.param, nb.source,
                          _source_prec(nb))


def _source_prec(nb: NormalizedBranch) -> int:
    return nb.prec if nb.source.exact else nb.source.prec


# -- elimination ------------------------------------------------------------------------


def _euler(y: TruncatedSeries) -> TruncatedSeries:
    return TruncatedSeries._make({e: c * e for e, c in y.items()}, y.prec)


def _window(s: TruncatedSeries, lo_shift: int, bound: int) -> dict:
    """Coefficients of ``t**lo_shift * s`` up to ``bound``."""
    top = bound - lo_shift
    if s.prec < top:
        raise PrecisionExhausted(f"elimination needs t^{top}, known to t^{s.prec}")
    return {e + lo_shift: c for e, c in s.items() if e <= top}


def _killing_field(v0, v1, y, s):
    """A positive-weight field whose first-order effect on ``y`` starts at ``t**s``.

    A field ``X`` with ``X(x) = -xi``, ``X(y) = eta`` moves ``y`` by
    ``eta(γ) + xi(γ) y'/x'`` once ``x`` is restored to ``t**v0``.  Returns
    ``(kappa, xi, eta)`` where ``kappa`` is the coefficient of ``t**s``.
    """
    st = _Staircase(s)
    ty = _euler(y)
    inv_v0 = GaussianRational(1) / v0
    top_b = s // v1
    ypow = [TruncatedSeries.one(s + v0)]
    for _ in range(top_b):
        ypow.append(ypow[-1]._mul_to(y, s + v0))
    gens = []
    for b in range(top_b + 1):
        # eta = x^a y^b, order v0 a + v1 b, weight v0 a + v1 b - v1 > 0
        for a in range((s - v1 * b) // v0 + 1):
            w = v0 * a + v1 * b
            if w > v1:
                gens.append((w, 0, a, b))
        # xi = x^a y^b, order v0 (a - 1) + v1 (b + 1), weight v0 a + v1 b - v0 > 0
        for a in range((s - v1 * (b + 1)) // v0 + 2):
            if (a, b) in ((0, 0), (1, 0)):
                continue
            w = v0 * (a - 1) + v1 * (b + 1)
            if w <= s:
                gens.append((w, 1, a, b))
    gens.sort()
    yty = {}
    for _, kind, a, b in gens:
        if kind == 0:
            vec = _window(ypow[b], v0 * a, s)
            tag = (BivariatePoly(), BivariatePoly.monomial(a, b))
        else:
            if b not in yty:
                yty[b] = ypow[b]._mul_to(ty, s + v0)
            if a >= 1:
                vec = _window(yty[b], v0 * (a - 1), s)
            else:
                vec = _window(yty[b].unshift(v0), 0, s)
            vec = {e: c * inv_v0 for e, c in vec.items()}
            tag = (BivariatePoly.monomial(a, b), BivariatePoly())
        lead = st.insert(vec, tag)
        if lead == s:
            v, (xi, eta) = st.rows[s]
            return v[s], xi, eta
    return None


def _flow(xi, eta, c, v0, v1, bound):
    """``exp(c X)`` applied to the coordinates, dropping weights above ``bound``."""
    mxi = -xi

    def X(f):
        return (mxi * f.diff_x() + eta * f.diff_y()).drop_above_weight(v0, v1, bound)

    out = []
    for f in (BivariatePoly.x(), BivariatePoly.y()):
        total = BivariatePoly()
        term = f
        k = 1
        while True:
            term = X(term).scale(c / k)
            if not term:
                break
            total = total + term
            k += 1
        out.append(total)
    return out


def _restore(v0, x, y, prec):
    """Reparametrize so that ``x`` becomes ``t**v0``; returns the change and new y."""
    ch = _straighten_x(x, v0)
    nb = ch.apply(BranchParam(x, y))
    if nb.x.truncate(prec + v0).as_dict() != {v0: ONE}:
        raise EliminationStuck("first component drifted away from t^v0")
    if nb.y.prec < prec:
        raise PrecisionExhausted("elimination lost precision while restoring t^v0")
    return ch, nb.y.truncate(prec)


def eliminate(nb: NormalizedBranch, sg: Optional[Semigroup] = None,
              vs: Optional[ValueSet] = None, lam=False) -> NormalFormData:
    """Reduce a normalized singular branch to its normal form."""
    if nb.smooth:
        raise PreconditionError("eliminate needs a singular branch")
    if sg is None:
        sg = semigroup(nb)
    if vs is None:
        vs = differential_values(nb, sg)
    if lam is False:
        lam = zariski_invariant(nb, sg, vs)
    v0, v1 = nb.v0, nb.v1
    top = max(sg.conductor - v0 - 1, v1)
    if nb.prec < top:
        raise PrecisionExhausted(f"elimination needs the branch to t^{top}")
    y = nb.y.truncate(top)
    log = []
    for s in range(v1 + 1, top + 1):
        w = y.coeff(s)
        if not w or s == lam or (s + v0) not in vs:
            continue
        found = _killing_field(v0, v1, y, s)
        if found is None:
            raise EliminationStuck(f"no positive-weight field reaches t^{s}")
        kappa, xi, eta = found
        c = -w / kappa
        dx, dy = _flow(xi, eta, c, v0, v1, top + v0)
        shear = TargetShear(dx, dy)
        x0 = TruncatedSeries.monomial(v0, 1, top + v0)
        moved = shear.apply(BranchParam(x0, y))
        fix, ny = _restore(v0, moved.x, moved.y, top)
        if not ny.agrees_with(y, s - 1) or ny.coeff(s):
            raise EliminationStuck(f"killing t^{s} disturbed lower terms")
        log += [shear, fix]
        y = ny
    normalized = False
    if lam is not None:
        a = y.coeff(lam)
        if a == ONE:
            normalized = True
        else:
            try:
                r = gr_nth_root(a.inverse(), lam - v1)
            except NoRootInField:
                r = None
            if r is not None:
                rt = TruncatedSeries.monomial(1, r, top)
                log += [SourceReparam(rt), TargetScaleX(r ** (-v0)), TargetScaleY(r ** (-v1))]
                y = TruncatedSeries._make(
                    {e: c * r ** (e - v1) for e, c in y.items()}, y.prec)
                normalized = True
    coeffs = {s: c for s, c in y.items() if v1 < s < sg.conductor - v0}
    for s in coeffs:
        if s != lam and ((lam is None or s < lam) or (s + v0) in vs):
            raise EliminationStuck(f"coefficient at t^{s} should have been removed")
    param = BranchParam(TruncatedSeries.monomial(v0, 1, top + v0), y)
    witness = nb.witness.then(ChangeLog(tuple(log)))
    return NormalFormData(v0, v1, lam, coeffs, witness, normalized, param, nb.source,
                          _source_prec(nb))


# -- orbit comparison ---------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitDecision:
    equal: bool
    certificate: dict

    def __bool__(self):
        return self.equal


def _bezout(values):
    """Coefficients ``c`` with ``sum c_i v_i = gcd(values)``."""
    g, coeffs = 0, []
    for v in values:
        if g == 0:
            g, coeffs = v, [1]
            continue
        # extended Euclid on (g, v)
        old_r, r = g, v
        old_s, s_ = 1, 0
        old_t, t_ = 0, 1
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s_ = s_, old_s - q * s_
            old_t, t_ = t_, old_t - q * t_
        coeffs = [c * old_s for c in coeffs] + [old_t]
        g = old_r
    return g, coeffs


def _solve_congruences(system):
    """Solve ``a k = b (mod m)`` for all triples; returns ``(k0, modulus)`` or None."""
    k0, mod = 0, 1
    for a, b, m in system:
        # substitute k = k0 + mod * j:  a mod j = b - a k0  (mod m)
        a2 = (a * mod) % m
        b2 = (b - a * k0) % m
        g = gcd(a2, m)
        if b2 % g:
            return None
        if g == m:
            continue
        m2 = m // g
        j = (b2 // g) * pow(a2 // g, -1, m2) % m2
        k0 = k0 + mod * j
        mod = mod * m2
        k0 %= mod
    return k0, mod


def _unity_exponent(rho):
    """``q`` with ``rho == i**q``, or None."""
    order = gr_root_of_unity_order(rho)
    if order is None:
        return None
    return {(1, 0): 0, (0, 1): 1, (-1, 0): 2, (0, -1): 3}[(int(rho.re), int(rho.im))]


def scaling_orbit_equal(n1: NormalFormData, n2: NormalFormData) -> OrbitDecision:
    """Is there ``r != 0`` with ``a_s = r**(s - v1) a'_s`` for every ``s``?"""
    if (n1.v0, n1.v1, n1.lam) != (n2.v0, n2.v1, n2.lam):
        return OrbitDecision(False, {"reason": "invariants differ"})
    if set(n1.coeffs) != set(n2.coeffs):
        bad = min(set(n1.coeffs) ^ set(n2.coeffs))
        return OrbitDecision(False, {"reason": "supports differ", "index": bad})
    if not n1.coeffs:
        return OrbitDecision(True, {"g": 0, "R": "1", "bezout": {}})
    v1 = n1.v1
    idx = sorted(n1.coeffs)
    exps = [s - v1 for s in idx]
    rhos = [n1.coeffs[s] / n2.coeffs[s] for s in idx]
    g, bez = _bezout(exps)
    R = ONE
    for rho, c in zip(rhos, bez):
        R = R * rho ** c
    failing = None
    for s, e, rho in zip(idx, exps, rhos):
        if R ** (e // g) != rho:
            failing = s
            break
    equal = failing is None
    cert = {"g": g, "R": render_coeff(R), "bezout": {str(s): c for s, c in zip(idx, bez)}}
    if failing is not None:
        cert["index"] = failing
    if n1.lambda_normalized and n2.lambda_normalized:
        # r is then a d-th root of unity; r**e must land in the four units of Q(i)
        d = n1.lam - v1
        system = []
        for e, rho in zip(exps, rhos):
            q = _unity_exponent(rho)
            if q is None:
                system = None
                break
            # r = exp(2 pi i k/d):  4 e k = q d  (mod 4 d)
            system.append((4 * e, q * d, 4 * d))
        sol = None if system is None else _solve_congruences(system)
        if (sol is not None) != equal:
            raise AssertionError("root-of-unity check disagrees with the scaling test")
        if sol is not None:
            cert["unity"] = {"d": d, "k": sol[0], "modulus": sol[1]}
    return OrbitDecision(equal, cert)


# -- equivalence ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EquivalenceResult:
    """Decision plus what is needed to re-check it.

    Both normal forms carry replayable witnesses from their inputs; the orbit
    certificate ties the two normal forms together.
    """

    equivalent: bool
    reason: str
    left: BranchAnalysis
    right: BranchAnalysis
    orbit: Optional[OrbitDecision] = None

    def __bool__(self):
        return self.equivalent

    @property
    def certificate(self) -> dict:
        out = {"reason": self.reason}
        if self.orbit is not None:
            out["orbit"] = self.orbit.certificate
        return out

    def replays(self) -> bool:
        """Replay both witnesses and re-verify the orbit certificate."""
        for a in (self.left, self.right):
            if a.normal_form is None or not a.normal_form.replay_matches():
                return False
        if self.orbit is None:
            return True
        again = scaling_orbit_equal(self.left.normal_form, self.right.normal_form)
        return again.equal == self.orbit.equal and again.certificate == self.orbit.certificate


def _as_analysis(b) -> BranchAnalysis:
    return b if isinstance(b, BranchAnalysis) else analyze_branch(b)


def analytic_equivalent(b1, b2) -> EquivalenceResult:
    """Decide A-equivalence of two branches (parametrizations or analyses)."""
    a1, a2 = _as_analysis(b1), _as_analysis(b2)
    if a1.smooth or a2.smooth:
        same = a1.smooth and a2.smooth
        return EquivalenceResult(same, "smooth" if same else "multiplicity differs", a1, a2)
    if a1.semigroup.members != a2.semigroup.members or a1.semigroup.bound != a2.semigroup.bound:
        return EquivalenceResult(False, "semigroups differ", a1, a2)
    if a1.values.members != a2.values.members:
        return EquivalenceResult(False, "differential values differ", a1, a2)
    if a1.lam != a2.lam:
        return EquivalenceResult(False, "Zariski invariants differ", a1, a2)
    orbit = scaling_orbit_equal(a1.normal_form, a2.normal_form)
    reason = "same scaling orbit" if orbit.equal else "different scaling orbits"
    return EquivalenceResult(orbit.equal, reason, a1, a2, orbit)


def conjugate_branch(b: BranchParam) -> BranchParam:
    return b.conj()


def smooth_equivalent(c1, c2) -> bool:
    """Diffeomorphism class of single-branch singular curves.

    Equivalent iff analytically equivalent to the other curve or to its
    complex conjugate.  When the branch lists coincide, or coincide after
    conjugation, the identity or ``(x, y) -> (conj x, conj y)`` is itself the
    diffeomorphism and no classification is needed.
    """
    s1 = set(c1.branches)
    if s1 == set(c2.branches) or s1 == {b.conj() for b in c2.branches}:
        return True
    b1 = _single_singular_branch(c1)
    b2 = _single_singular_branch(c2)
    a1 = analyze_branch(b1)
    if analytic_equivalent(a1, analyze_branch(b2)):
        return True
    return bool(analytic_equivalent(a1, analyze_branch(conjugate_branch(b2))))


def _single_singular_branch(c) -> BranchParam:
    branches = list(c.branches)
    if len(branches) != 1:
        raise UnsupportedMultiBranch(
            f"curve {c.name!r} has {len(branches)} branches; only single branches are classified")
    b = branches[0]
    xo, yo = b.x.order(), b.y.order()
    if min(o for o in (xo, yo) if o is not None) == 1:
        raise UnsupportedSmoothBranches(f"curve {c.name!r} is a smooth branch")
    return b
