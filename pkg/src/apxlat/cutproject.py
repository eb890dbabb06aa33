r"""Cut-and-project schemes and exact enumeration of model-set patches.

The lattice is the diagonal embedding {(x, conj(x)) : x in Z[sqrt(d)]^n} in
R^n x R^n.  A closed axis-aligned box window in internal space cuts the
model set; truncation in physical space is also a box (sup norm), which
gives exact integer loop bounds per coordinate.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .ring import (
    _sign_int_pair,
    DomainError,
    QuadExact,
    QuadInt,
    Rational,
    RingContext,
    abs_le,
    make_context,
)

Point = tuple[QuadInt, ...]


@dataclass(frozen=True)
class CutProjectScheme:
    """Physical dimension, ring context, and per-coordinate window half-widths."""

    ctx: RingContext
    physical_dim: int = 1
    window: tuple[Fraction, ...] = (Fraction(1),)

    def __post_init__(self) -> None:
        if self.physical_dim < 1:
            raise DomainError("physical_dim must be >= 1")
        if len(self.window) != self.physical_dim:
            raise DomainError("one window half-width per physical coordinate")
        if any(w < 0 for w in self.window):
            raise DomainError("window half-widths must be >= 0")

    @property
    def d(self) -> int:
        return self.ctx.d


def make_scheme(d: int, window: Rational | Sequence[Rational] = 1, dim: int = 1) -> CutProjectScheme:
    if isinstance(window, (int, Fraction, str)):
        ws = (Fraction(window),) * dim
    else:
        ws = tuple(Fraction(w) for w in window)
    return CutProjectScheme(make_context(d, max(ws) if ws else 0), dim, ws)


def _sort_key(p: Point) -> tuple:
    return tuple((q.a, q.b) for q in p)


@dataclass(frozen=True)
class PointPatch:
    """Finite truncation of a model set inside the physical box of
    half-width ``radius``; points sorted lexicographically on (a, b) tuples."""

    scheme: CutProjectScheme
    radius: Fraction
    points: tuple[Point, ...]

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def point_set(self) -> frozenset[Point]:
        return frozenset(self.points)

    def contains(self, p: Point) -> bool:
        """Membership in the underlying (untruncated) model set."""
        return all(
            abs_le(q, w, "conjugate") for q, w in zip(p, self.scheme.window)
        )

    def scalars(self) -> tuple[QuadInt, ...]:
        if self.scheme.physical_dim != 1:
            raise DomainError("scalars() requires a 1-dimensional patch")
        return tuple(p[0] for p in self.points)

    def to_csv(self) -> str:
        buf = io.StringIO()
        n = self.scheme.physical_dim
        buf.write(f"# d={self.scheme.d} dim={n} radius={self.radius}\n")
        buf.write("# window=" + ",".join(str(w) for w in self.scheme.window) + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        header: list[str] = []
        for i in range(n):
            header += [f"a{i}", f"b{i}", f"phys{i}", f"internal{i}"]
        writer.writerow(header)
        for p in self.points:
            row: list[str] = []
            for q in p:
                row += [str(q.a), str(q.b), f"{float(q):.12g}", f"{q.conj_float():.12g}"]
            writer.writerow(row)
        return buf.getvalue()

    @staticmethod
    def from_csv(text: str) -> "PointPatch":
        meta: dict[str, str] = {}
        rows: list[list[str]] = []
        for line in text.splitlines():
            if line.startswith("#"):
                for part in line[1:].strip().split():
                    if "=" in part:
                        k, v = part.split("=", 1)
                        meta[k] = v
            elif line.strip():
                rows.append(next(csv.reader([line])))
        try:
            d = int(meta["d"])
            dim = int(meta["dim"])
            radius = Fraction(meta["radius"])
            window = tuple(Fraction(w) for w in meta["window"].split(","))
        except KeyError as exc:
            raise DomainError(f"patch CSV is missing metadata field {exc}") from exc
        pts = []
        for row in rows[1:]:  # skip header
            point = tuple(
                QuadInt(int(row[4 * i]), int(row[4 * i + 1]), d) for i in range(dim)
            )
            pts.append(point)
        scheme = CutProjectScheme(make_context(d, max(window)), dim, window)
        return PointPatch(scheme, radius, tuple(sorted(pts, key=_sort_key)))

    def to_json(self) -> dict:
        return {
            "d": self.scheme.d,
            "dim": self.scheme.physical_dim,
            "window": [str(w) for w in self.scheme.window],
            "radius": str(self.radius),
            "points": [[q.to_json() for q in p] for p in self.points],
        }


def _floor_rat_plus_bsqrtd(p: int, q: int, b: int, d: int) -> int:
    """floor(p/q + b sqrt(d)) by integers only (q > 0).

    With f = floor(q b sqrt(d)), the argument lies in [(p+f)/q, (p+f+1)/q),
    an interval shorter than 1/q that cannot contain an integer above
    (p+f)//q, so the floor is (p+f)//q.
    """
    if b == 0:
        return p // q
    qb = q * b
    r = math.isqrt(d * qb * qb)
    f = r if qb >= 0 else -r - 1  # q b sqrt(d) is irrational for b != 0
    return (p + f) // q


def _ceil_rat_plus_bsqrtd(p: int, q: int, b: int, d: int) -> int:
    return -_floor_rat_plus_bsqrtd(-p, q, -b, d)


def _floor_sqrtd_quotient(x: int, q: int, d: int) -> int:
    """floor(x sqrt(d) / q) by integers only (q > 0), same interval argument."""
    if x == 0:
        return 0
    r = math.isqrt(d * x * x)
    f = r if x >= 0 else -r - 1
    return f // q


def enumerate_interval(
    d: int,
    phys_lo: QuadExact,
    phys_hi: QuadExact,
    conj_lo: QuadExact,
    conj_hi: QuadExact,
) -> list[QuadInt]:
    """All x = a + b sqrt(d) with phys(x) in [phys_lo, phys_hi] and
    conj(x) in [conj_lo, conj_hi].

    2 b sqrt(d) = phys - conj fixes the b range; for each b both conditions
    pin a to an exact integer interval.  Rational bounds take a pure-integer
    path; bounds with a sqrt(d) part fall back to exact field arithmetic.
    """
    bounds = (phys_lo, phys_hi, conj_lo, conj_hi)
    if all(x.b == 0 for x in bounds):
        pl, ph, cl, ch = (x.a for x in bounds)
        den = 1
        for x in (pl, ph, cl, ch):
            den = den * x.denominator // math.gcd(den, x.denominator)
        pl_n, ph_n, cl_n, ch_n = (int(x * den) for x in (pl, ph, cl, ch))
        # b in [(pl - ch)/(2 sqrt d), (ph - cl)/(2 sqrt d)]; with rationals
        # X/den this is X sqrt(d) / (2 d den)
        b_lo = -_floor_sqrtd_quotient(ch_n - pl_n, 2 * d * den, d)
        b_hi = _floor_sqrtd_quotient(ph_n - cl_n, 2 * d * den, d)
        out = []
        for b in range(b_lo, b_hi + 1):
            a_lo = max(
                _ceil_rat_plus_bsqrtd(pl_n, den, -b, d),
                _ceil_rat_plus_bsqrtd(cl_n, den, b, d),
            )
            a_hi = min(
                _floor_rat_plus_bsqrtd(ph_n, den, -b, d),
                _floor_rat_plus_bsqrtd(ch_n, den, b, d),
            )
            for a in range(a_lo, a_hi + 1):
                out.append(QuadInt(a, b, d))
        return out
    inv2sd = QuadExact(Fraction(0), Fraction(1, 2 * d), d)  # 1/(2 sqrt(d))
    b_lo = ((phys_lo - conj_hi) * inv2sd).ceil()
    b_hi = ((phys_hi - conj_lo) * inv2sd).floor()
    out = []
    for b in range(b_lo, b_hi + 1):
        bsd = QuadExact(Fraction(0), Fraction(b), d)
        a_lo = max((phys_lo - bsd).ceil(), (conj_lo + bsd).ceil())
        a_hi = min((phys_hi - bsd).floor(), (conj_hi + bsd).floor())
        for a in range(a_lo, a_hi + 1):
            out.append(QuadInt(a, b, d))
    return out


def _axis_points(d: int, w: Fraction, radius: Fraction) -> list[QuadInt]:
    r = QuadExact(radius, Fraction(0), d)
    wq = QuadExact(w, Fraction(0), d)
    return enumerate_interval(d, -r, r, -wq, wq)


def enumerate_model_set(scheme: CutProjectScheme, radius: Rational) -> PointPatch:
    """Exactly the model-set points in the physical box of half-width ``radius``."""
    radius = Fraction(radius)
    if radius < 0:
        raise DomainError("radius must be >= 0")
    axes = [_axis_points(scheme.d, w, radius) for w in scheme.window]
    pts: list[Point] = [()]
    for axis in axes:
        pts = [p + (q,) for p in pts for q in axis]
    pts.sort(key=_sort_key)
    return PointPatch(scheme, radius, tuple(pts))


def enumerate_bruteforce(scheme: CutProjectScheme, radius: Rational) -> PointPatch:
    """Independent oracle: naive double loop over the full (a, b) box with
    exact membership checks per coordinate.

    From |a + b sqrt(d)| <= R and |a - b sqrt(d)| <= w one gets
    2|a| <= R + w and 2|b| sqrt(d) <= R + w; the box uses those bounds
    with one unit of slack.
    """
    radius = Fraction(radius)
    if radius < 0:
        raise DomainError("radius must be >= 0")
    d = scheme.d
    axes = []
    for w in scheme.window:
        lim = (radius + w) / 2
        a_max = int(lim) + 1
        b_max = int(lim) + 1  # sqrt(d) > 1, so this overshoots; harmless
        rp, rq = radius.numerator, radius.denominator
        wp, wq = w.numerator, w.denominator
        sgn = _sign_int_pair
        axis = []
        for a in range(-a_max, a_max + 1):
            for b in range(-b_max, b_max + 1):
                # |a + b sqrt d| <= rp/rq and |a - b sqrt d| <= wp/wq
                if (
                    sgn(a * rq - rp, b * rq, d) <= 0
                    and sgn(a * rq + rp, b * rq, d) >= 0
                    and sgn(a * wq - wp, -b * wq, d) <= 0
                    and sgn(a * wq + wp, -b * wq, d) >= 0
                ):
                    axis.append(QuadInt(a, b, d))
        axes.append(axis)
    pts: list[Point] = [()]
    for axis in axes:
        pts = [p + (q,) for p in pts for q in axis]
    pts.sort(key=_sort_key)
    return PointPatch(scheme, radius, tuple(pts))


def star_map(patch: PointPatch) -> list[tuple[QuadInt, ...]]:
    """Galois conjugate of every point (the internal coordinates)."""
    return [tuple(q.conj() for q in p) for p in patch.points]


@dataclass(frozen=True)
class GoodModelReport:
    passed: bool
    bounded_ok: bool
    inverse_image_ok: bool
    witnesses: tuple[Point, ...]


def verify_good_model(patch: PointPatch, u_halfwidth: Rational) -> GoodModelReport:
    """Check both good-model axioms at patch scale for the star map:
    (i) the internal image of the patch stays in the window;
    (ii) every lattice point with physical norm <= radius and conjugate
    norm <= U belongs to the patch.
    """
    u = Fraction(u_halfwidth)
    if not 0 < u <= min(patch.scheme.window):
        raise DomainError("need 0 < U <= window half-width")
    bounded_ok = all(
        abs_le(q, w, "conjugate")
        for p in patch.points
        for q, w in zip(p, patch.scheme.window)
    )
    shrunk = make_scheme(patch.scheme.d, [u] * patch.scheme.physical_dim, patch.scheme.physical_dim)
    inner = enumerate_model_set(shrunk, patch.radius)
    have = patch.point_set()
    witnesses = tuple(p for p in inner.points if p not in have)
    return GoodModelReport(
        passed=bounded_ok and not witnesses,
        bounded_ok=bounded_ok,
        inverse_image_ok=not witnesses,
        witnesses=witnesses,
    )


def graph_patch(
    f_values: Mapping[Point, QuadInt],
    patch: PointPatch,
    k_halfwidth: Rational,
    fiber_radius: Rational | None = None,
):
    """Materialize the graph set {(p, f(p) + k) : k in the K-box patch} as a
    twisted patch for approximate-group analysis.

    The fiber is the PVS patch with conjugate window ``k_halfwidth``;
    ``fiber_radius`` bounds its physical truncation (defaults to the patch
    radius).
    """
    from .quasi import TwistedPatch  # local import to keep module layering acyclic

    k = Fraction(k_halfwidth)
    if k < 0:
        raise DomainError("K half-width must be >= 0")
    missing = [p for p in patch.points if p not in f_values]
    if missing:
        raise DomainError(f"f undefined on {len(missing)} patch points, e.g. {missing[0]}")
    rad = Fraction(fiber_radius) if fiber_radius is not None else patch.radius
    fiber = _axis_points(patch.scheme.d, k, rad)
    pairs = []
    for p in patch.points:
        base = f_values[p]
        for xi in fiber:
            pairs.append((p, base + xi))
    return TwistedPatch(
        pairs=tuple(pairs),
        window=k,
        fiber_d=patch.scheme.d,
        group_kind="point",
    )


def density_ratio(patch: PointPatch) -> float:
    """|patch| / (2R)^n, for quick reporting (exact comparisons are done
    against vol(window)/covol in the tests)."""
    n = patch.scheme.physical_dim
    return len(patch) / float((2 * patch.radius) ** n)
