r"""Exact arithmetic in real quadratic rings Z[\sqrt{d}].

Elements are pairs of big integers ``a + b*sqrt(d)`` with ``d`` squarefree.
Every comparison against a rational bound is decided by integer sign
analysis (never floating point), so window-membership decisions at exact
boundary points are deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Union[int, Fraction]


class RingMismatchError(ValueError):
    """Two elements with different discriminant parameter ``d`` were mixed."""


class DomainError(ValueError):
    """An argument is outside the documented domain of an operation."""


def is_squarefree(d: int) -> bool:
    if d < 1:
        return False
    f = 2
    while f * f <= d:
        if d % (f * f) == 0:
            return False
        f += 1
    return True


def _sign_int_pair(a: int, b: int, d: int) -> int:
    """Sign of a + b*sqrt(d), by pure integer comparison.

    For squarefree d >= 2, a + b*sqrt(d) = 0 only when a = b = 0.
    """
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return (b > 0) - (b < 0)
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    lhs = a * a
    rhs = d * b * b
    if a > 0:  # b < 0: positive iff a^2 > d b^2
        return (lhs > rhs) - (lhs < rhs)
    return (rhs > lhs) - (rhs < lhs)  # a < 0 < b


@dataclass(frozen=True, slots=True)
class QuadInt:
    """Element a + b*sqrt(d) of Z[sqrt(d)]."""

    a: int
    b: int
    d: int = 2

    def __post_init__(self) -> None:
        if not isinstance(self.a, int) or not isinstance(self.b, int):
            raise DomainError(f"coefficients must be integers, got {self.a!r}, {self.b!r}")

    def _check(self, other: "QuadInt") -> None:
        if self.d != other.d:
            raise RingMismatchError(f"mixed rings: sqrt({self.d}) vs sqrt({other.d})")

    def __add__(self, other: "QuadInt") -> "QuadInt":
        self._check(other)
        return QuadInt(self.a + other.a, self.b + other.b, self.d)

    def __sub__(self, other: "QuadInt") -> "QuadInt":
        self._check(other)
        return QuadInt(self.a - other.a, self.b - other.b, self.d)

    def __mul__(self, other: "QuadInt") -> "QuadInt":
        self._check(other)
        return QuadInt(
            self.a * other.a + self.d * self.b * other.b,
            self.a * other.b + self.b * other.a,
            self.d,
        )

    def __neg__(self) -> "QuadInt":
        return QuadInt(-self.a, -self.b, self.d)

    def conj(self) -> "QuadInt":
        """Galois conjugate a - b*sqrt(d)."""
        return QuadInt(self.a, -self.b, self.d)

    def norm(self) -> int:
        """Field norm a^2 - d b^2 (an ordinary integer)."""
        return self.a * self.a - self.d * self.b * self.b

    def sign(self) -> int:
        return _sign_int_pair(self.a, self.b, self.d)

    def conj_sign(self) -> int:
        return _sign_int_pair(self.a, -self.b, self.d)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __float__(self) -> float:
        return self.a + self.b * math.sqrt(self.d)

    def conj_float(self) -> float:
        return self.a - self.b * math.sqrt(self.d)

    def to_exact(self) -> "QuadExact":
        return QuadExact(Fraction(self.a), Fraction(self.b), self.d)

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b), "d": self.d}

    @staticmethod
    def from_json(obj: dict) -> "QuadInt":
        return QuadInt(int(obj["a"]), int(obj["b"]), int(obj["d"]))


@dataclass(frozen=True, slots=True)
class QuadExact:
    """Element a + b*sqrt(d) of Q(sqrt(d)) with exact rational coefficients.

    Used where the lattice Z[sqrt(d)] is not enough: window bounds, hull
    coordinates, contraction constants.  Same exact sign machinery as
    QuadInt after clearing denominators.
    """

    a: Fraction
    b: Fraction
    d: int = 2

    @staticmethod
    def of(x: Union["QuadExact", QuadInt, Rational], d: int = 2) -> "QuadExact":
        if isinstance(x, QuadExact):
            return x
        if isinstance(x, QuadInt):
            return x.to_exact()
        return QuadExact(Fraction(x), Fraction(0), d)

    def _check(self, other: "QuadExact") -> None:
        if self.d != other.d:
            raise RingMismatchError(f"mixed rings: sqrt({self.d}) vs sqrt({other.d})")

    def __add__(self, other: "QuadExact") -> "QuadExact":
        self._check(other)
        return QuadExact(self.a + other.a, self.b + other.b, self.d)

    def __sub__(self, other: "QuadExact") -> "QuadExact":
        self._check(other)
        return QuadExact(self.a - other.a, self.b - other.b, self.d)

    def __mul__(self, other: "QuadExact") -> "QuadExact":
        self._check(other)
        return QuadExact(
            self.a * other.a + self.d * self.b * other.b,
            self.a * other.b + self.b * other.a,
            self.d,
        )

    def __neg__(self) -> "QuadExact":
        return QuadExact(-self.a, -self.b, self.d)

    def scale(self, r: Rational) -> "QuadExact":
        r = Fraction(r)
        return QuadExact(self.a * r, self.b * r, self.d)

    def inverse(self) -> "QuadExact":
        n = self.a * self.a - self.d * self.b * self.b
        if n == 0:
            raise ZeroDivisionError("inverse of 0 in Q(sqrt(d))")
        return QuadExact(self.a / n, -self.b / n, self.d)

    def conj(self) -> "QuadExact":
        return QuadExact(self.a, -self.b, self.d)

    def sign(self) -> int:
        q = self.a.denominator * self.b.denominator // math.gcd(
            self.a.denominator, self.b.denominator
        )
        return _sign_int_pair(int(self.a * q), int(self.b * q), self.d)

    def abs(self) -> "QuadExact":
        return self if self.sign() >= 0 else -self

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __lt__(self, other: "QuadExact") -> bool:
        return (self - other).sign() < 0

    def __le__(self, other: "QuadExact") -> bool:
        return (self - other).sign() <= 0

    def floor(self) -> int:
        """Largest integer <= a + b*sqrt(d), found by integer estimate plus
        exact sign corrections."""
        if self.b == 0:
            return self.a.numerator // self.a.denominator
        # |b|*sqrt(d) ~ isqrt(d * b_num^2 // b_den^2), off by at most a few.
        babs = abs(self.b)
        approx_b = math.isqrt(self.d * babs.numerator * babs.numerator // (babs.denominator * babs.denominator))
        if self.b < 0:
            approx_b = -approx_b - 1
        m = self.a.numerator // self.a.denominator + approx_b - 2
        while (self - QuadExact(Fraction(m + 1), Fraction(0), self.d)).sign() >= 0:
            m += 1
        while (self - QuadExact(Fraction(m), Fraction(0), self.d)).sign() < 0:
            m -= 1
        return m

    def ceil(self) -> int:
        return -(-self).floor()


def quad_add(x: QuadInt, y: QuadInt) -> QuadInt:
    return x + y


def quad_mul(x: QuadInt, y: QuadInt) -> QuadInt:
    return x * y


def galois_conj(x: QuadInt) -> QuadInt:
    return x.conj()


def abs_le(x: Union[QuadInt, QuadExact], bound: Rational, embedding: str = "identity") -> bool:
    """Decide |sigma(x)| <= bound exactly, sigma the chosen real embedding.

    The comparison |a + b*sqrt(d)| <= p/q reduces to the two sign tests
    (aq -+ p) + bq*sqrt(d) <=> 0, i.e. integer comparisons of (aq -+ p)^2
    against d (bq)^2.
    """
    bound = Fraction(bound)
    if bound < 0:
        raise DomainError(f"bound must be >= 0, got {bound}")
    if embedding not in ("identity", "conjugate"):
        raise DomainError(f"unknown embedding {embedding!r}")
    p, q = bound.numerator, bound.denominator
    if isinstance(x, QuadInt):
        a, b, d = x.a, x.b, x.d
    else:
        den = x.a.denominator * x.b.denominator // math.gcd(
            x.a.denominator, x.b.denominator
        )
        a, b, d = int(x.a * den), int(x.b * den), x.d
        p *= den  # |x| <= p0/q0 with x scaled by den means |a + b sqrt(d)| <= den p0/q0
    if embedding == "conjugate":
        b = -b
    aq, bq = a * q, b * q
    return _sign_int_pair(aq - p, bq, d) <= 0 and _sign_int_pair(aq + p, bq, d) >= 0


@dataclass(frozen=True, slots=True)
class RingContext:
    """Ring parameters: discriminant d, a fundamental unit, and the window
    bound at the conjugate place defining the PVS set."""

    d: int
    fundamental_unit: QuadInt
    window_bound: Fraction

    def __post_init__(self) -> None:
        if not is_squarefree(self.d) or self.d < 2:
            raise DomainError(f"d must be squarefree and >= 2, got {self.d}")
        if self.fundamental_unit.d != self.d:
            raise RingMismatchError("fundamental unit lives in a different ring")
        if self.fundamental_unit.norm() not in (1, -1):
            raise DomainError("fundamental unit must have norm +-1")
        if self.window_bound < 0:
            raise DomainError("window_bound must be >= 0")


def make_context(d: int, window_bound: Rational = 1) -> RingContext:
    return RingContext(d, fundamental_unit(d), Fraction(window_bound))


def pvs_member(x: QuadInt, ctx: RingContext) -> bool:
    """Membership in the PVS set {x in Z[sqrt(d)] : |conj(x)| <= window}.

    The finite-place conditions |x|_v <= 1 hold automatically for ring
    elements, so only the conjugate real place is checked.
    """
    if x.d != ctx.d:
        raise RingMismatchError("element does not belong to the context ring")
    return abs_le(x, ctx.window_bound, "conjugate")


_CF_PERIOD_CAP = 10**7


def fundamental_unit(d: int) -> QuadInt:
    """Fundamental solution of a^2 - d b^2 = +-1 with a, b > 0 minimal,
    via the continued-fraction expansion of sqrt(d)."""
    if not (2 <= d <= 10**6):
        raise DomainError(f"d must satisfy 2 <= d <= 10^6, got {d}")
    if not is_squarefree(d):
        raise DomainError(f"d must be squarefree, got {d}")
    a0 = math.isqrt(d)
    m, den, a = 0, 1, a0
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    for _ in range(_CF_PERIOD_CAP):
        m = den * a - m
        den = (d - m * m) // den
        a = (a0 + m) // den
        if a == 2 * a0:
            unit = QuadInt(p, q, d)
            assert unit.norm() in (1, -1)
            return unit
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    raise DomainError(f"continued fraction of sqrt({d}) did not close within cap")


def poly_eval(coeffs: Sequence[Union[int, QuadInt]], x: QuadInt, d: int) -> QuadInt:
    """Horner evaluation of a polynomial with int or ring coefficients,
    constant term first."""
    acc = QuadInt(0, 0, d)
    for c in reversed(coeffs):
        cq = c if isinstance(c, QuadInt) else QuadInt(int(c), 0, d)
        acc = acc * x + cq
    return acc


def _poly_conj_sup(coeffs: Sequence[Union[int, QuadInt]], w: Fraction, d: int) -> QuadExact:
    """Upper bound sum_i |conj(c_i)| w^i for |P-bar| over conjugate values in [-w, w]."""
    total = QuadExact(Fraction(0), Fraction(0), d)
    wp = Fraction(1)
    for c in coeffs:
        cq = c if isinstance(c, QuadInt) else QuadInt(int(c), 0, d)
        total = total + cq.conj().to_exact().abs().scale(wp)
        wp *= w
    return total


@dataclass(frozen=True)
class TranslateCover:
    """Finite translate set F with P(patch) inside F + PVS set."""

    translates: tuple[QuadInt, ...]
    conj_bound: QuadExact  # conjugate values of P(patch) lie in [-B, B]
    verified: bool

    @property
    def size(self) -> int:
        return len(self.translates)


def enumerate_conj_slab(
    d: int, conj_lo: QuadExact, conj_hi: QuadExact, phys_bound: Rational
) -> list[QuadInt]:
    """All x in Z[sqrt(d)] with conj(x) in [conj_lo, conj_hi], |x| <= phys_bound.

    Same change of variables as model-set enumeration, with the roles of the
    two embeddings swapped: conj = a - b sqrt(d) pins a to an interval for
    each b.
    """
    out = []
    pb = QuadExact(Fraction(phys_bound), Fraction(0), d)
    # 2 b sqrt(d) = phys - conj in [-phys_bound - conj_hi, phys_bound - conj_lo]
    inv2sd = QuadExact(Fraction(0), Fraction(1, 2 * d), d)  # 1/(2 sqrt(d))
    b_lo = ((-pb - conj_hi) * inv2sd).ceil()
    b_hi = ((pb - conj_lo) * inv2sd).floor()
    for b in range(b_lo, b_hi + 1):
        bsd = QuadExact(Fraction(0), Fraction(b), d)
        a_lo = max((conj_lo + bsd).ceil(), (-pb - bsd).ceil())
        a_hi = min((conj_hi + bsd).floor(), (pb - bsd).floor())
        for a in range(a_lo, a_hi + 1):
            out.append(QuadInt(a, b, d))
    return sorted(out, key=lambda v: (v.a, v.b))


def cover_conj_interval(
    ctx: RingContext,
    lo: QuadExact,
    hi: QuadExact,
    candidate_phys_bound: Rational = 16,
) -> list[QuadInt]:
    """Translates f whose conjugate windows [conj(f) - w, conj(f) + w] cover
    the closed interval [lo, hi].

    Left-to-right greedy: at each step take the translate whose window starts
    at or before the cursor and reaches furthest right (ties broken by
    lexicographically smallest (a, b)).
    """
    d, w = ctx.d, ctx.window_bound
    if w <= 0:
        raise DomainError("window bound must be positive to build a cover")
    wq = QuadExact(w, Fraction(0), d)
    translates: list[QuadInt] = []
    cursor = lo
    while not translates or (hi - cursor).sign() > 0:
        pb = Fraction(candidate_phys_bound)
        best = None
        best_edge = None
        for _ in range(8):  # widen the candidate pool until a step is possible
            for f in enumerate_conj_slab(d, cursor - wq, cursor + wq, pb):
                fc = f.conj().to_exact()
                if (cursor - (fc - wq)).sign() < 0:
                    continue  # window starts after the cursor
                edge = fc + wq
                if best_edge is None or (edge - best_edge).sign() > 0:
                    best, best_edge = f, edge
            if best is not None:
                break
            pb *= 2
        if best is None:
            raise DomainError("no translate candidate found; widen the candidate pool")
        translates.append(best)
        cursor = best_edge
    return translates


def pvs_product_translates(
    coeffs: Sequence[Union[int, QuadInt]],
    patch_points: Iterable[QuadInt],
    ctx: RingContext,
    candidate_phys_bound: Rational = 16,
) -> TranslateCover:
    """Evaluate the polynomial P (coefficient list, constant term first)
    pointwise on the patch and produce a finite translate set F with
    P(patch) inside F + PVS set.

    Under conjugation P maps the window [-w, w] into [-B, B] with
    B = sum |conj(c_i)| w^i, so covering that interval by the conjugate
    windows of the translates makes |F| independent of the physical radius
    of the input patch.
    """
    points = list(patch_points)
    if not points:
        raise DomainError("empty patch")
    bound = _poly_conj_sup(coeffs, ctx.window_bound, ctx.d)
    translates = cover_conj_interval(ctx, -bound, bound, candidate_phys_bound)
    ok = True
    for x in points:
        y = poly_eval(coeffs, x, ctx.d)
        if not any(pvs_member(y - f, ctx) for f in translates):
            ok = False
            break
    return TranslateCover(tuple(translates), bound, ok)


def shrink_window_for_polynomial(
    coeffs: Sequence[Union[int, QuadInt]], ctx: RingContext, grid: int = 64
) -> Fraction:
    """Largest w' = k/grid <= window with sum |conj(c_i)| w'^i <= window.

    Gives a sub-window whose image under P stays in the PVS set; requires
    P(0) = 0 (zero constant term), matching the polynomial lemma's part (2).
    """
    c0 = coeffs[0] if coeffs else 0
    c0q = c0 if isinstance(c0, QuadInt) else QuadInt(int(c0), 0, ctx.d)
    if not c0q.is_zero():
        raise DomainError("polynomial must satisfy P(0) = 0")
    w = ctx.window_bound
    target = QuadExact(w, Fraction(0), ctx.d)
    for k in range(int(w * grid), 0, -1):
        wp = Fraction(k, grid)
        if (target - _poly_conj_sup(coeffs, wp, ctx.d)).sign() >= 0:
            return wp
    raise DomainError("no positive sub-window on the grid satisfies the bound")
