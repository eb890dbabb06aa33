r"""Finite-patch analytics for approximate subgroups.

Symmetry, uniform discreteness (min gap), relative denseness (covering
radius), the approximate-group constant K via greedy covering, pairwise
commensurability covers, and logarithmic-length generation chains.

Sums and products are only required of elements in the half-radius core of
a patch: membership of boundary sums is not decidable from a truncation, so
the fixed margin R/2 avoids false failures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .cutproject import Point, PointPatch, enumerate_interval
from .ring import (
    DomainError,
    QuadExact,
    QuadInt,
    Rational,
    RingContext,
    cover_conj_interval,
    pvs_member,
)


class CoverageError(RuntimeError):
    """The greedy cover ran out of candidates before covering the universe."""


def greedy_cover(
    universe: Sequence,
    candidates: Sequence,
    covers: Callable,
    cand_key: Callable = lambda c: c,
) -> list:
    """Greedy set cover: repeatedly pick the candidate covering the most
    uncovered universe elements; ties go to the smallest ``cand_key``.
    Coverage masks are big-int bitsets."""
    masks = []
    for c in candidates:
        m = 0
        for i, u in enumerate(universe):
            if covers(c, u):
                m |= 1 << i
        masks.append(m)
    remaining = (1 << len(universe)) - 1
    order = sorted(range(len(candidates)), key=lambda i: cand_key(candidates[i]))
    chosen = []
    while remaining:
        best_i, best_gain = -1, 0
        for i in order:
            gain = (masks[i] & remaining).bit_count()
            if gain > best_gain:
                best_i, best_gain = i, gain
        if best_i < 0:
            stuck = [u for i, u in enumerate(universe) if remaining >> i & 1]
            raise CoverageError(f"{len(stuck)} elements uncoverable, e.g. {stuck[0]!r}")
        chosen.append(candidates[best_i])
        remaining &= ~masks[best_i]
    return chosen


def check_symmetry(points: Iterable[Point]) -> bool:
    pts = set(points)
    return all(tuple(-q for q in p) in pts for p in pts)


def _sup_dist(p: Point, q: Point) -> QuadExact:
    best = None
    for x, y in zip(p, q):
        v = (x - y).to_exact().abs()
        if best is None or (v - best).sign() > 0:
            best = v
    return best


def min_gap(patch: PointPatch) -> QuadExact:
    """Minimum sup-norm distance over distinct pairs, by a sweep over the
    first physical coordinate."""
    pts = patch.points
    if len(pts) < 2:
        raise DomainError("min_gap needs at least two points")
    if len(set(pts)) != len(pts):
        raise DomainError("patch contains duplicate points")
    order = sorted(pts, key=lambda p: (float(p[0]), p[0].a, p[0].b))
    best: QuadExact | None = None
    for i, p in enumerate(order):
        for j in range(i + 1, len(order)):
            q = order[j]
            gap0 = (q[0] - p[0]).to_exact()
            if best is not None and (gap0 - best).sign() > 0:
                break  # all later first coordinates are even further
            dist = _sup_dist(p, q)
            if best is None or (dist - best).sign() < 0:
                best = dist
    assert best is not None and best.sign() > 0
    return best


def covering_radius(patch: PointPatch, margin: Rational | None = None) -> QuadExact:
    """Largest gap between consecutive points (dimension 1) or largest
    empty-box diameter on a midpoint grid sweep (dimension 2), restricted
    to the inner box of half-width R - margin.  Default margin R/2."""
    if len(patch) < 1:
        raise DomainError("covering_radius needs a non-empty patch")
    r = patch.radius
    m = Fraction(margin) if margin is not None else r / 2
    inner = QuadExact(r - m, Fraction(0), patch.scheme.d)
    n = patch.scheme.physical_dim
    if n == 1:
        vals = sorted(
            (p[0].to_exact() for p in patch.points), key=float
        )
        best = None
        prev = None
        for v in vals:
            if (v + inner).sign() < 0 or (inner - v).sign() < 0:
                continue
            if prev is not None:
                gap = v - prev
                if best is None or (gap - best).sign() > 0:
                    best = gap
            prev = v
        if best is None:  # zero or one point in the inner box
            return inner if prev is None else inner - prev.abs()
        return best
    if n == 2:
        xs = sorted({p[0].to_exact() for p in patch.points}, key=float)
        ys = sorted({p[1].to_exact() for p in patch.points}, key=float)
        half = QuadExact(Fraction(1, 2), Fraction(0), patch.scheme.d)
        cand_x = [((a + b) * half) for a, b in zip(xs, xs[1:])]
        cand_y = [((a + b) * half) for a, b in zip(ys, ys[1:])]
        best = None
        for cx in cand_x:
            if (cx + inner).sign() < 0 or (inner - cx).sign() < 0:
                continue
            for cy in cand_y:
                if (cy + inner).sign() < 0 or (inner - cy).sign() < 0:
                    continue
                nearest = None
                for p in patch.points:
                    dx = (p[0].to_exact() - cx).abs()
                    dy = (p[1].to_exact() - cy).abs()
                    dist = dx if (dx - dy).sign() > 0 else dy
                    if nearest is None or (dist - nearest).sign() < 0:
                        nearest = dist
                if best is None or (nearest - best).sign() > 0:
                    best = nearest
        if best is None:
            return inner
        return best + best  # report the diameter, matching the 1-d gap convention
    raise DomainError("covering_radius implemented for dimensions 1 and 2")


@dataclass(frozen=True)
class PatchReport:
    k_constant: int
    min_gap: QuadExact
    covering_radius: QuadExact
    boundary_margin: Fraction
    translates: tuple[Point, ...]

    def to_json(self) -> dict:
        def exact(v: QuadExact) -> dict:
            return {"a": str(v.a), "b": str(v.b), "d": v.d, "float": float(v)}

        return {
            "k_constant": self.k_constant,
            "min_gap": exact(self.min_gap),
            "covering_radius": exact(self.covering_radius),
            "boundary_margin": str(self.boundary_margin),
            "translates": [[q.to_json() for q in t] for t in self.translates],
        }


def _core_points(patch: PointPatch, margin: Fraction) -> list[Point]:
    half = QuadExact(patch.radius - margin, Fraction(0), patch.scheme.d)
    return [
        p
        for p in patch.points
        if all((half - q.to_exact().abs()).sign() >= 0 for q in p)
    ]


def _translate_candidates(patch: PointPatch) -> list[Point]:
    """Per-coordinate ring elements with conjugate within 3x the window and
    small physical norm; their Cartesian product is the candidate pool."""
    d = patch.scheme.d
    axes = []
    for w in patch.scheme.window:
        w3 = QuadExact(3 * w, Fraction(0), d)
        phys = max(Fraction(8), 4 * w * d)
        axes.append(
            enumerate_interval(d, QuadExact(-Fraction(phys), Fraction(0), d),
                               QuadExact(Fraction(phys), Fraction(0), d), -w3, w3)
        )
    pool: list[Point] = [()]
    for axis in axes:
        pool = [p + (q,) for p in pool for q in axis]
    return pool


def _point_key(p: Point) -> tuple:
    return tuple((q.a, q.b) for q in p)


def covering_constant(
    patch: PointPatch,
    margin: Rational | None = None,
    member_fn: Callable[[Point], bool] | None = None,
    extra_candidates: Iterable[Point] = (),
    require_symmetry: bool = True,
) -> PatchReport:
    """Greedy K with (core sums) inside F + patch.

    Greedy is an upper bound for the minimal |F| (set cover is hard); the
    acceptance checks use stability of the greedy value across radii, not
    minimality.  Coverage is decided against the underlying model set
    (window condition, exactly decidable for any ring point) rather than the
    truncated list, which would re-introduce the boundary artifacts the core
    margin removes; ``member_fn`` overrides that for non-model point sets.
    """
    if require_symmetry and not check_symmetry(patch.points):
        raise DomainError("covering_constant requires a symmetric patch")
    origin = tuple(QuadInt(0, 0, patch.scheme.d) for _ in range(patch.scheme.physical_dim))
    if origin not in patch.point_set():
        raise DomainError("covering_constant requires the origin in the patch")
    m = Fraction(margin) if margin is not None else patch.radius / 2
    member = member_fn if member_fn is not None else patch.contains
    core = _core_points(patch, m)
    sums = sorted(
        {tuple(x + y for x, y in zip(p, q)) for p in core for q in core},
        key=_point_key,
    )
    cands = sorted(set(_translate_candidates(patch)) | set(extra_candidates), key=_point_key)

    def covers(f: Point, s: Point) -> bool:
        return member(tuple(x - y for x, y in zip(s, f)))

    chosen = greedy_cover(sums, cands, covers, _point_key)
    return PatchReport(
        k_constant=len(chosen),
        min_gap=min_gap(patch) if len(patch) >= 2 else QuadExact(Fraction(0), Fraction(0), patch.scheme.d),
        covering_radius=covering_radius(patch, m),
        boundary_margin=m,
        translates=tuple(chosen),
    )


def commensurability_cover(
    x_points: Sequence[Point],
    y: "PointPatch | Sequence[Point]",
    x_radius: Rational,
    d: int,
    margin: Rational | None = None,
    extra_candidates: Iterable[Point] = (),
) -> tuple[int, tuple[Point, ...]]:
    """Greedy minimal |F| with X_core inside F + Y.

    When Y is a PointPatch, membership is decided against its underlying
    model set; for a raw point sequence, by set lookup.  Candidates are the
    pairwise differences x - y with bounded physical norm, plus extras.
    """
    if isinstance(y, PointPatch):
        y_points: Sequence[Point] = y.points
        member = y.contains
    else:
        y_points = list(y)
        yset = set(y_points)
        member = lambda p: p in yset  # noqa: E731
    x_points = list(x_points)
    if not x_points or not y_points:
        raise DomainError("need non-empty point sets")
    dim = len(x_points[0])
    if any(len(p) != dim for p in y_points):
        raise DomainError("dimension mismatch between X and Y")
    R = Fraction(x_radius)
    m = Fraction(margin) if margin is not None else R / 2
    half = QuadExact(R - m, Fraction(0), d)
    core = [
        p for p in x_points if all((half - q.to_exact().abs()).sign() >= 0 for q in p)
    ]
    if not core:
        raise DomainError("half-radius core of X is empty")
    bound = QuadExact(Fraction(8), Fraction(0), d)
    # float bisect narrows the difference pool before the exact check
    import bisect

    y_sorted = sorted(y_points, key=lambda p: float(p[0]))
    y_keys = [float(p[0]) for p in y_sorted]
    cands = set(extra_candidates)
    for p in core:
        centre = float(p[0])
        lo = bisect.bisect_left(y_keys, centre - 8.5)
        hi = bisect.bisect_right(y_keys, centre + 8.5)
        for q in y_sorted[lo:hi]:
            f = tuple(a - b for a, b in zip(p, q))
            if all((bound - c.to_exact().abs()).sign() >= 0 for c in f):
                cands.add(f)
    cand_list = sorted(cands, key=_point_key)

    def covers(f: Point, s: Point) -> bool:
        return member(tuple(a - b for a, b in zip(s, f)))

    chosen = greedy_cover(core, cand_list, covers, _point_key)
    return len(chosen), tuple(chosen)


def intersection_cover_classes(
    x_points: Sequence[Point],
    covers_per_set: Sequence[tuple[Sequence[Point], Sequence[Point]]],
) -> tuple[int, dict]:
    """Constructive intersection cover: given for each i a translate set F_i
    and points Y_i with X inside F_i + Y_i, group X by the tuple of chosen
    translates.  The class representatives F' satisfy |F'| <= prod |F_i| and
    X inside F' + ((Y_1 - Y_1) cap ... cap (Y_n - Y_n))."""
    classes: dict[tuple, Point] = {}
    assignment: dict[Point, tuple] = {}
    for x in x_points:
        key = []
        for f_set, y_pts in covers_per_set:
            yset = set(y_pts)
            found = None
            for f in f_set:
                if tuple(a - b for a, b in zip(x, f)) in yset:
                    found = f
                    break
            if found is None:
                raise CoverageError(f"point {x!r} not covered by a translate set")
            key.append(found)
        key_t = tuple(key)
        classes.setdefault(key_t, x)
        assignment[x] = key_t
    return len(classes), {"representatives": classes, "assignment": assignment}


@dataclass(frozen=True)
class ChainCertificate:
    """Replayable generation chain: starting from the small seed, each step
    applies u -> contraction^{-1} * (u + F[index])."""

    target: QuadInt
    seed: QuadInt
    steps: tuple[int, ...]  # translate indices, applied small-to-large
    contraction: QuadInt
    translates: tuple[QuadInt, ...]

    @property
    def length(self) -> int:
        return len(self.steps)

    def replay(self) -> QuadInt:
        d = self.target.d
        inv = self.contraction.to_exact().inverse()
        u = self.seed
        for idx in self.steps:
            v = (u + self.translates[idx]).to_exact() * inv
            assert v.a.denominator == 1 and v.b.denominator == 1
            u = QuadInt(int(v.a), int(v.b), d)
        return u

    def to_json(self) -> dict:
        return {
            "target": self.target.to_json(),
            "seed": self.seed.to_json(),
            "steps": list(self.steps),
            "contraction": self.contraction.to_json(),
            "translates": [f.to_json() for f in self.translates],
            "length": self.length,
        }


def chain_translates(ctx: RingContext, alpha: QuadInt) -> tuple[QuadInt, ...]:
    """Translate set F realizing alpha * PVS-set inside PVS-set + F: the
    conjugate image of the window under multiplication by conj(alpha) is an
    interval, covered once and for all."""
    w = ctx.window_bound
    bound = alpha.conj().to_exact().abs().scale(w)
    return tuple(cover_conj_interval(ctx, -bound, bound))


def chain_length_constant(alpha: QuadInt) -> float:
    """The reported growth constant C with chain length <= C log|target| + C':
    one contraction step shrinks the physical norm by |alpha|."""
    return 1.0 / math.log(1.0 / abs(float(alpha)))


def efficient_chain(
    u: QuadInt,
    ctx: RingContext,
    alpha: QuadInt | None = None,
    translates: tuple[QuadInt, ...] | None = None,
) -> ChainCertificate:
    """Contraction chain u_{-k-1} = alpha u_{-k} - f with f from the
    precomputed translate set, run until the physical norm drops below
    C0 = (1 - |alpha|)^{-1} max |f|; the reversed chain generates u in
    O(log |u|) steps."""
    if alpha is None:
        eps = ctx.fundamental_unit
        inv = eps.to_exact().inverse()
        assert inv.a.denominator == 1 and inv.b.denominator == 1
        alpha = QuadInt(int(inv.a), int(inv.b), ctx.d)
        if alpha.sign() < 0:
            alpha = -alpha
    if not (alpha.to_exact().abs() - QuadExact(Fraction(1), Fraction(0), ctx.d)).sign() < 0:
        raise DomainError("contraction must satisfy |alpha| < 1 at the identity place")
    if not pvs_member(u, ctx):
        raise DomainError("u lies outside the PVS window")
    F = translates if translates is not None else chain_translates(ctx, alpha)
    sup_f = QuadExact(Fraction(0), Fraction(0), ctx.d)
    for f in F:
        v = f.to_exact().abs()
        if (v - sup_f).sign() > 0:
            sup_f = v
    one = QuadExact(Fraction(1), Fraction(0), ctx.d)
    c0 = sup_f * (one - alpha.to_exact().abs()).inverse()
    steps: list[int] = []
    cur = u
    guard = 0
    while (cur.to_exact().abs() - c0).sign() > 0:
        nxt_base = alpha * cur
        pick = None
        for i, f in enumerate(F):
            if pvs_member(nxt_base - f, ctx):
                pick = i
                break
        if pick is None:
            raise DomainError("translate set too small: no f restores membership")
        steps.append(pick)
        cur = nxt_base - F[pick]
        guard += 1
        if guard > 10_000:
            raise DomainError("chain did not contract; check alpha and window")
    steps.reverse()
    cert = ChainCertificate(
        target=u, seed=cur, steps=tuple(steps), contraction=alpha, translates=tuple(F)
    )
    assert cert.replay() == u
    bound = chain_length_constant(alpha) * math.log(max(abs(float(u)), 2.0)) + 8
    assert cert.length <= bound, (cert.length, bound)
    return cert


def matrix_norms(m: Sequence[Sequence[Rational]]) -> tuple[Fraction, Fraction]:
    """(norm of m, norm of m - id plus one), with the max-absolute-row-sum
    operator norm.

    Row sums rather than the bare sup entry: the sup-entry norm picks up a
    dimension factor under products at an Archimedean place, which breaks
    sub-multiplicativity of the primed norm; with a genuinely
    sub-multiplicative base norm, ||xy - id|| <= ||x-id|| ||y-id|| + ||x-id||
    + ||y-id|| makes the primed norm sub-multiplicative.
    """
    n = len(m)
    if any(len(row) != n for row in m):
        raise DomainError("matrix must be square")
    if n == 0:
        return Fraction(0), Fraction(1)
    norm = max(sum(abs(Fraction(v)) for v in row) for row in m)
    primed = (
        max(
            sum(abs(Fraction(v) - (1 if i == j else 0)) for j, v in enumerate(row))
            for i, row in enumerate(m)
        )
        + 1
    )
    return Fraction(norm), Fraction(primed)
