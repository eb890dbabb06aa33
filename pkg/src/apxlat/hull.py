r"""Desk-scale dynamics on the 2-torus hull of a 1-d cut-and-project set.

The lattice {(x, conj(x)) : x in Z[sqrt(d)]} has fundamental parallelepiped
spanned by v1 = (1, 1) and v2 = (sqrt(d), -sqrt(d)).  Hull points are stored
with both coordinates exact in Q(sqrt(d)), which covers every input the
package generates (ring translates of exact offsets) and keeps the
cross-section boundary decisions deterministic; the half-open domain makes
the section single-valued.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cutproject import enumerate_interval
from .ring import DomainError, QuadExact, QuadInt, Rational

Coord = QuadExact


def _as_coord(x: Rational | QuadExact, d: int) -> QuadExact:
    if isinstance(x, QuadExact):
        if x.d != d:
            raise DomainError("coordinate in the wrong ring")
        return x
    return QuadExact(Fraction(x), Fraction(0), d)


def embed(x: QuadInt) -> tuple[QuadExact, QuadExact]:
    """Diagonal lattice embedding x -> (x, conj(x))."""
    return x.to_exact(), x.conj().to_exact()


@dataclass(frozen=True)
class HullPoint:
    """Representative in the half-open fundamental parallelepiped
    [0,1) v1 + [0,1) v2."""

    p1: QuadExact
    p2: QuadExact

    @property
    def d(self) -> int:
        return self.p1.d

    def __post_init__(self) -> None:
        if self.p1.d != self.p2.d:
            raise DomainError("hull coordinates must share a ring")

    def coords(self) -> tuple[QuadExact, QuadExact]:
        """Coefficients (c1, c2) in the lattice basis: c1 = (p1 + p2)/2,
        c2 = (p1 - p2)/(2 sqrt(d))."""
        d = self.d
        half = Fraction(1, 2)
        c1 = (self.p1 + self.p2).scale(half)
        inv2sd = QuadExact(Fraction(0), Fraction(1, 2 * d), d)
        c2 = (self.p1 - self.p2) * inv2sd
        return c1, c2


def section(v1: Rational | QuadExact, v2: Rational | QuadExact, d: int = 2) -> tuple[HullPoint, QuadInt]:
    """Reduce a point of R^2 (coordinates exact in Q(sqrt(d))) modulo the
    lattice into the fundamental domain; returns the representative and the
    lattice element subtracted."""
    p1 = _as_coord(v1, d)
    p2 = _as_coord(v2, d)
    half = Fraction(1, 2)
    c1 = (p1 + p2).scale(half)
    inv2sd = QuadExact(Fraction(0), Fraction(1, 2 * d), d)
    c2 = (p1 - p2) * inv2sd
    m1, m2 = c1.floor(), c2.floor()
    gamma = QuadInt(m1, m2, d)
    g1, g2 = embed(gamma)
    return HullPoint(p1 - g1, p2 - g2), gamma


def translate(x: HullPoint, t: Rational | QuadExact) -> HullPoint:
    """Physical flow: add (t, 0) and reduce."""
    return section(x.p1 + _as_coord(t, x.d), x.p2, x.d)[0]


def origin(d: int = 2) -> HullPoint:
    z = QuadExact(Fraction(0), Fraction(0), d)
    return HullPoint(z, z)


def cocycle_alpha(t: Rational | QuadExact, x: HullPoint) -> QuadInt:
    """The lattice element gamma with s((t,0) + X) = (t,0) + X_rep - gamma."""
    return section(x.p1 + _as_coord(t, x.d), x.p2, x.d)[1]


@dataclass(frozen=True)
class CrossSectionPoint:
    point: HullPoint
    certificate: QuadInt  # lattice element carrying the orbit to {0} x window
    internal: QuadExact  # the internal coordinate hit, |internal| <= W0


def cross_section(x: HullPoint, w0: Rational) -> CrossSectionPoint | None:
    """Decide whether the lattice orbit of X meets {0} x [-W0, W0]; the orbit
    hits physical coordinate 0 only for the single lattice element with
    embedding -p1, which must have integer coefficients."""
    w0 = Fraction(w0)
    if w0 <= 0:
        raise DomainError("W0 must be > 0")
    a, b = -x.p1.a, -x.p1.b
    if a.denominator != 1 or b.denominator != 1:
        return None
    gamma = QuadInt(int(a), int(b), x.d)
    h = x.p2 + gamma.conj().to_exact()
    bound = QuadExact(w0, Fraction(0), x.d)
    if (bound - h.abs()).sign() >= 0:
        return CrossSectionPoint(x, gamma, h)
    return None


def hitting_times(x: HullPoint, w0: Rational, horizon: Rational) -> list[QuadExact]:
    """All t in [-horizon, horizon] with (t,0) + X in the cross-section:
    t = -p1 - phys(gamma) over lattice gamma with |p2 + conj(gamma)| <= W0."""
    w0 = Fraction(w0)
    horizon = Fraction(horizon)
    if w0 <= 0 or horizon < 0:
        raise DomainError("need W0 > 0 and horizon >= 0")
    d = x.d
    hq = QuadExact(horizon, Fraction(0), d)
    wq = QuadExact(w0, Fraction(0), d)
    # phys(gamma) in [-horizon - p1, horizon - p1]; conj(gamma) in [-w0 - p2, w0 - p2]
    gammas = enumerate_interval(d, -hq - x.p1, hq - x.p1, -wq - x.p2, wq - x.p2)
    times = [-x.p1 - g.to_exact() for g in gammas]
    return sorted(times, key=float)


@dataclass(frozen=True)
class ReturnTimeSet:
    points: tuple[QuadInt, ...]  # distinct ring elements, sorted by value
    horizon: Fraction
    w0: Fraction


def _hit_gammas(x: HullPoint, w0: Fraction, horizon: Fraction) -> list[QuadInt]:
    d = x.d
    hq = QuadExact(horizon, Fraction(0), d)
    wq = QuadExact(w0, Fraction(0), d)
    return enumerate_interval(d, -hq - x.p1, hq - x.p1, -wq - x.p2, wq - x.p2)


def return_times(
    points: Sequence[HullPoint], w0: Rational, horizon: Rational
) -> ReturnTimeSet:
    """Return times {h in [-R, R] : B cap hB nonempty} of the sampled
    cross-section subset B.

    Two hull points X and hX lie in the cross-section exactly when the orbit
    configuration of X hits {0} x window at two times differing by h, so per
    orbit the return times are the differences of its hitting-time set;
    distinct sampled orbits contribute only when they coincide up to a flow
    translation, checked exactly.
    """
    if not points:
        raise DomainError("empty cross-section sample")
    w0 = Fraction(w0)
    horizon = Fraction(horizon)
    d = points[0].d
    margin = Fraction(64)
    seen: set[tuple[int, int]] = set()
    rq = QuadExact(horizon, Fraction(0), d)
    for x in points:
        gammas = [(g.a, g.b) for g in _hit_gammas(x, w0, horizon + margin)]
        raw: set[tuple[int, int]] = set()
        for i, (a1, b1) in enumerate(gammas):
            for a2, b2 in gammas[i:]:
                raw.add((a2 - a1, b2 - b1))
        for a, b in raw:
            if (a, b) in seen or (-a, -b) in seen:
                continue
            if (rq - QuadInt(a, b, d).to_exact().abs()).sign() >= 0:
                seen.add((a, b))
                seen.add((-a, -b))
    # exact coincidences between distinct sampled orbits: X_a = (h,0) + X_b
    # mod the lattice forces conj(gamma) = p2a - p2b with integer gamma
    for i, xa in enumerate(points):
        for xb in points[i + 1 :]:
            if not (xa.p1 - xb.p1).is_zero():
                continue  # samples share physical coordinate 0 by construction
            da = xa.p2 - xb.p2
            if da.a.denominator == 1 and da.b.denominator == 1:
                g = QuadInt(-int(da.a), int(da.b), d)  # h = -phys(gamma)
                if (rq - g.to_exact().abs()).sign() >= 0:
                    seen.add((g.a, g.b))
                    seen.add((-g.a, -g.b))
    pts = sorted((QuadInt(a, b, d) for a, b in seen), key=float)
    return ReturnTimeSet(tuple(pts), horizon, w0)


def section_samples(w0: Rational, count: int, d: int = 2) -> list[HullPoint]:
    """Deterministic cross-section members: internal offsets on a rational
    grid strictly inside [-W0, W0] at physical coordinate 0."""
    w0 = Fraction(w0)
    if count < 1:
        raise DomainError("need at least one sample")
    pts = []
    for k in range(count):
        off = (Fraction(2 * k + 1, count) - 1) * w0 * Fraction(99, 100)
        z = QuadExact(Fraction(0), Fraction(0), d)
        pts.append(HullPoint(z, QuadExact(off, Fraction(0), d)))
    return pts


def integrability_bound(alpha_rate: float = 1.0, d: int = 2) -> float:
    """Recorded finite bound on the exponential moment of the section over
    the fundamental domain: the domain is compact, so
    integral of e^{alpha dist(e, g)} is at most area x e^{alpha diam}.

    This documents that the integrability condition on the section holds
    trivially at this scale; nothing dynamical is being tested.
    """
    sd = math.sqrt(d)
    area = 2 * sd  # |det [[1, sqrt d], [1, -sqrt d]]|
    diam = (1 + sd) * 2
    return area * math.exp(alpha_rate * diam)


@dataclass(frozen=True)
class EquidistributionReport:
    epsilon: Fraction
    t_max: Fraction
    measure: QuadExact  # time spent within epsilon of the cross-section
    expected: QuadExact  # 2 epsilon (w0 / sqrt(d)) t_max
    within_5_percent: bool


def equidistribution_check(
    w0: Rational, epsilon: Rational, t_max: Rational, d: int = 2
) -> EquidistributionReport:
    """Fraction of flow time t in [0, T] with (t,0) + origin within epsilon
    of the cross-section, against the transverse-measure prediction
    2 epsilon w0 / sqrt(d); the visit set is exactly the union of
    epsilon-intervals around the model-set times."""
    w0 = Fraction(w0)
    epsilon = Fraction(epsilon)
    t_max = Fraction(t_max)
    if epsilon <= 0 or t_max <= 0:
        raise DomainError("need epsilon > 0 and t_max > 0")
    eq = QuadExact(epsilon, Fraction(0), d)
    zero = QuadExact(Fraction(0), Fraction(0), d)
    tq = QuadExact(t_max, Fraction(0), d)
    times = hitting_times(origin(d), w0, t_max + epsilon)
    total = zero
    prev_end: QuadExact | None = None
    for t in times:
        lo, hi = t - eq, t + eq
        if (hi - zero).sign() < 0 or (lo - tq).sign() > 0:
            continue
        if (zero - lo).sign() > 0:
            lo = zero
        if (hi - tq).sign() > 0:
            hi = tq
        if prev_end is not None and (prev_end - lo).sign() > 0:
            lo = prev_end
        if (hi - lo).sign() > 0:
            total = total + (hi - lo)
            prev_end = hi
        elif prev_end is None or (hi - prev_end).sign() > 0:
            prev_end = hi
    # 1/sqrt(d) = sqrt(d)/d
    inv_sd = QuadExact(Fraction(0), Fraction(1, d), d)
    expected = inv_sd.scale(2 * epsilon * w0) * tq
    lo_ok = (total.scale(100) - expected.scale(95)).sign() >= 0
    hi_ok = (expected.scale(105) - total.scale(100)).sign() >= 0
    return EquidistributionReport(epsilon, t_max, total, expected, lo_ok and hi_ok)
