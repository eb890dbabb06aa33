r"""Counting quasimorphisms on the free group F2, defects, homogenization,
the bounded cochain complex, twisted extensions, and the laminarity probe.

Words are strings over {a, A, b, B} with A = a^{-1}, B = b^{-1}.  A
quasimorphism is a weighted difference of overlapping occurrence counts
h(g) = sum_i w_i (C_{p_i}(g) - C_{p_i^{-1}}(g)); occurrence counts are taken
in the reduced word.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

from .ring import DomainError, QuadInt, Rational, abs_le

ALPHABET = "aAbB"

FiberValue = Union[int, QuadInt]


class ConvergenceError(RuntimeError):
    """Homogenization did not stabilize within the iteration cap."""


class PartialSupportError(ValueError):
    """A coboundary evaluation needed cochain values outside the support."""

    def __init__(self, missing: list):
        self.missing = missing
        super().__init__(f"{len(missing)} missing tuples, e.g. {missing[0]!r}")


def check_word(word: str) -> str:
    bad = set(word) - set(ALPHABET)
    if bad:
        raise DomainError(f"invalid letters {sorted(bad)!r}; alphabet is a A b B")
    return word


def reduce_word(word: str) -> str:
    """Free reduction: cancel adjacent inverse pairs until none remain."""
    check_word(word)
    out: list[str] = []
    for ch in word:
        if out and out[-1] == ch.swapcase():
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def invert_word(word: str) -> str:
    return word[::-1].swapcase()


def is_reduced(word: str) -> bool:
    return all(word[i] != word[i + 1].swapcase() for i in range(len(word) - 1))


def mul_words(g: str, h: str) -> str:
    return reduce_word(g + h)


def all_reduced_words(max_len: int, min_len: int = 0) -> Iterator[str]:
    """Reduced words in length-then-lexicographic order."""
    if min_len <= 0:
        yield ""
    layer = [""]
    for length in range(1, max_len + 1):
        nxt = []
        for w in layer:
            for ch in ALPHABET:
                if not w or ch != w[-1].swapcase():
                    nxt.append(w + ch)
        layer = nxt
        if length >= min_len:
            yield from layer


def count_occurrences(word: str, pattern: str) -> int:
    """Overlapping occurrences of the pattern in the (already reduced) word."""
    if not pattern:
        raise DomainError("empty pattern")
    count = 0
    start = word.find(pattern)
    while start != -1:
        count += 1
        start = word.find(pattern, start + 1)
    return count


@dataclass(frozen=True)
class QuasiMorphism:
    """Weighted counting quasimorphism; patterns must be reduced and nonempty."""

    terms: tuple[tuple[str, Fraction], ...]

    def __post_init__(self) -> None:
        for pat, _ in self.terms:
            check_word(pat)
            if not pat or not is_reduced(pat):
                raise DomainError(f"pattern {pat!r} must be nonempty and reduced")

    @staticmethod
    def of(*terms: tuple[str, Rational]) -> "QuasiMorphism":
        return QuasiMorphism(tuple((p, Fraction(w)) for p, w in terms))

    @property
    def max_pattern_len(self) -> int:
        return max((len(p) for p, _ in self.terms), default=1)

    def to_json(self) -> dict:
        return {"terms": [{"pattern": p, "weight": str(w)} for p, w in self.terms]}

    @staticmethod
    def from_json(obj: Mapping) -> "QuasiMorphism":
        return QuasiMorphism.of(
            *((t["pattern"], Fraction(t["weight"])) for t in obj["terms"])
        )


def brooks(pattern: str, weight: Rational = 1) -> QuasiMorphism:
    return QuasiMorphism.of((pattern, weight))


H_AB = brooks("ab")


def qm_eval(h: QuasiMorphism, g: str) -> Fraction:
    """h(g) = sum w_i (C_{p_i}(g) - C_{p_i^{-1}}(g)) on the reduced form."""
    w = reduce_word(g)
    total = Fraction(0)
    for pat, weight in h.terms:
        total += weight * (count_occurrences(w, pat) - count_occurrences(w, invert_word(pat)))
    return total


def _junction(h: QuasiMorphism, left: str, right: str) -> Fraction:
    """Weighted count of pattern occurrences spanning the junction of the
    reduced concatenation left + right (both windows of size < max pattern
    length suffice)."""
    total = Fraction(0)
    for pat, weight in h.terms:
        for p, sgn in ((pat, 1), (invert_word(pat), -1)):
            k = len(p) - 1
            if k <= 0:
                continue
            lw, rw = left[-k:], right[:k]
            joined = lw + rw
            spanning = 0
            for start in range(len(joined) - len(p) + 1):
                if start < len(lw) < start + len(p) and joined[start : start + len(p)] == p:
                    spanning += 1
            total += sgn * weight * spanning
    return total


def defect(h: QuasiMorphism, max_len: int) -> Fraction:
    """sup |h(g g') - h(g) - h(g')| over reduced word pairs of length <= L.

    Every pair decomposes uniquely as g = g1 c, g' = c^{-1} g2 with maximal
    cancellation c.  Interior occurrences inside c cancel in the
    antisymmetrized counts, so the value equals
    junc(g1|g2) - junc(g1|c) - junc(c^{-1}|g2) and depends only on windows of
    size (max pattern length - 1) around the three junctions.  The maximum is
    therefore taken over window triples, each realized at its own length.
    """
    if max_len < 0:
        raise DomainError("max_len must be >= 0")
    if max_len > 64:
        raise DomainError("max_len too large for the exhaustive-defect contract")
    k = h.max_pattern_len - 1
    windows = list(all_reduced_words(min(k, max_len)))
    best = Fraction(0)
    for u in windows:
        for c in windows:
            if len(u) + len(c) > max_len:
                continue
            if u and c and u[-1] == c[0].swapcase():
                continue  # g1 * c must be reduced
            for v in windows:
                if len(c) + len(v) > max_len:
                    continue
                if c and v and c[0] == v[0]:
                    continue  # c^{-1} * g2 must be reduced
                if u and v and u[-1] == v[0].swapcase():
                    continue  # cancellation would extend past c
                val = _junction(h, u, v) - _junction(h, u, c) - _junction(h, invert_word(c), v)
                if abs(val) > best:
                    best = abs(val)
    return best


def defect_direct(h: QuasiMorphism, max_len: int) -> Fraction:
    """Plain exhaustive defect over all reduced pairs (quadratic; for
    cross-checks at small lengths)."""
    words = list(all_reduced_words(max_len))
    vals = {w: qm_eval(h, w) for w in words}
    best = Fraction(0)
    for g in words:
        for g2 in words:
            val = abs(qm_eval(h, mul_words(g, g2)) - vals[g] - vals[g2])
            if val > best:
                best = val
    return best


def defect_profile(h: QuasiMorphism, max_len: int) -> list[tuple[int, Fraction]]:
    return [(l, defect(h, l)) for l in range(1, max_len + 1)]


def stabilized_defect(h: QuasiMorphism, max_len: int = 8) -> tuple[Fraction, int]:
    """The defect value at max_len together with the first length at which
    the profile reaches it."""
    prof = defect_profile(h, max_len)
    final = prof[-1][1]
    first = next(l for l, v in prof if v == final)
    return final, first


def _cyclic_split(g: str) -> tuple[str, str]:
    """g = pre * cyc * pre^{-1} with cyc cyclically reduced."""
    w = reduce_word(g)
    pre = ""
    while len(w) >= 2 and w[0] == w[-1].swapcase():
        pre += w[0]
        w = w[1:-1]
    return pre, w


def power_word(g: str, n: int) -> str:
    """Reduced form of g^n (n >= 0)."""
    pre, cyc = _cyclic_split(g)
    if not cyc:
        return ""
    return pre + cyc * n + invert_word(pre)


def homogenize(h: QuasiMorphism, g: str, start: int = 1, cap: int = 2**16) -> Fraction:
    """Exact limit of h(g^n)/n, by detecting the eventual exact linearity of
    n -> h(g^n) for counting quasimorphisms (constant difference sequence,
    probed at n, n+1, n+2, 2n, 2n+1 and doubled until consistent)."""
    if start < 1:
        raise DomainError("start must be >= 1")
    if not reduce_word(g):
        return Fraction(0)
    n = start
    while n <= cap:
        v = {m: qm_eval(h, power_word(g, m)) for m in (n, n + 1, n + 2, 2 * n, 2 * n + 1)}
        slope = v[n + 1] - v[n]
        if (
            v[n + 2] - v[n + 1] == slope
            and v[2 * n] == v[n] + (n) * slope
            and v[2 * n + 1] == v[n] + (n + 1) * slope
        ):
            return slope
        n *= 2
    raise ConvergenceError(f"h(g^n) not eventually linear up to n = {cap}")


# ---------------------------------------------------------------------------
# bounded cochain complex


Action = Callable[[str, Fraction], Fraction]


def trivial_action(_g: str, v: Fraction) -> Fraction:
    return v


@dataclass(frozen=True)
class BoundedCochain:
    """Cochain of the given degree with values on an explicit finite support
    of reduced-word tuples; the module action hook defaults to trivial."""

    degree: int
    values: Mapping[tuple[str, ...], Fraction]
    action: Action = trivial_action

    def __post_init__(self) -> None:
        for key in self.values:
            if len(key) != self.degree:
                raise DomainError(f"support tuple {key!r} has wrong arity")

    def __call__(self, *args: str) -> Fraction:
        return self.values[tuple(args)]


def cochain_from_qm(h: QuasiMorphism, support: Iterable[str]) -> BoundedCochain:
    return BoundedCochain(1, {(w,): qm_eval(h, w) for w in support})


def coboundary(c: BoundedCochain, support: Iterable[tuple[str, ...]]) -> BoundedCochain:
    """Inhomogeneous coboundary, evaluated on the given (degree+1)-tuples:

        (dc)(g_1, ..., g_{n+1}) = g_1 . c(g_2, ..., g_{n+1})
            + sum_{i=1..n} (-1)^i c(g_1, ..., g_i g_{i+1}, ..., g_{n+1})
            + (-1)^{n+1} c(g_1, ..., g_n)
    """
    n = c.degree
    out: dict[tuple[str, ...], Fraction] = {}
    missing: list[tuple[str, ...]] = []
    for tup in support:
        if len(tup) != n + 1:
            raise DomainError(f"tuple {tup!r} has arity {len(tup)}, expected {n + 1}")
        tup = tuple(reduce_word(g) for g in tup)
        needed: list[tuple[str, Union[tuple, None]]] = []
        total = Fraction(0)
        ok = True

        def fetch(key: tuple[str, ...]) -> Fraction | None:
            if key in c.values:
                return c.values[key]
            missing.append(key)
            return None

        head = fetch(tup[1:])
        if head is None:
            ok = False
        else:
            total += c.action(tup[0], head)
        for i in range(1, n + 1):
            key = tup[: i - 1] + (mul_words(tup[i - 1], tup[i]),) + tup[i + 1 :]
            val = fetch(key)
            if val is None:
                ok = False
            else:
                total += val if i % 2 == 0 else -val
        tail = fetch(tup[:n])
        if tail is None:
            ok = False
        else:
            total += tail if (n + 1) % 2 == 0 else -tail
        if ok:
            out[tup] = total
    if missing:
        raise PartialSupportError(sorted(set(missing)))
    return BoundedCochain(n + 1, out, c.action)


# ---------------------------------------------------------------------------
# twisted patches


@dataclass(frozen=True)
class TwistedPatch:
    """Finite truncation of a twisted extension {(g, q(g) + xi)}.

    ``pairs`` lists (group element, fiber value); the fiber is integer-valued
    (fiber_d None) or ring-valued.  ``q_fn`` evaluates the twisting map on
    arbitrary group elements, which makes membership decidable beyond the
    materialized list.
    """

    pairs: tuple[tuple[object, FiberValue], ...]
    window: Fraction
    fiber_d: int | None = None
    group_kind: str = "word"
    q_fn: Callable[[object], FiberValue] | None = None
    max_word_len: int | None = None

    def fiber_in_window(self, v: FiberValue) -> bool:
        if self.fiber_d is None:
            return abs(int(v)) <= self.window
        return abs_le(v, self.window, "conjugate")

    def member(self, g: object, v: FiberValue) -> bool:
        if self.q_fn is None:
            return (g, v) in set(self.pairs)
        base = self.q_fn(g)
        if base is None:
            return False
        if self.fiber_d is None:
            return abs(int(v) - int(base)) <= self.window
        return abs_le(v - base, self.window, "conjugate")

    def group_mul(self, g1: object, g2: object):
        if self.group_kind == "word":
            return mul_words(g1, g2)
        return tuple(x + y for x, y in zip(g1, g2))

    def to_json(self) -> dict:
        def fib(v: FiberValue):
            return v.to_json() if isinstance(v, QuadInt) else int(v)

        def grp(g):
            return g if isinstance(g, str) else [q.to_json() for q in g]

        return {
            "window": str(self.window),
            "fiber_d": self.fiber_d,
            "group_kind": self.group_kind,
            "pairs": [[grp(g), fib(v)] for g, v in self.pairs],
        }


def build_twisted(
    h: QuasiMorphism,
    window: Rational,
    max_len: int,
) -> TwistedPatch:
    """Materialize {(g, h(g) + xi) : |g| <= max_len, xi integer, |xi| <= window}
    with the integer fiber Z sitting inside the ring."""
    window = Fraction(window)
    if window < 0:
        raise DomainError("window must be >= 0")
    xi_range = range(-int(window), int(window) + 1)

    def q_fn(g: str) -> int:
        v = qm_eval(h, g)
        if v.denominator != 1:
            raise DomainError("integer fiber needs integer quasimorphism values")
        return int(v)

    pairs = []
    for g in all_reduced_words(max_len):
        base = q_fn(g)
        for xi in xi_range:
            pairs.append((g, base + xi))
    return TwistedPatch(
        pairs=tuple(pairs),
        window=window,
        fiber_d=None,
        group_kind="word",
        q_fn=q_fn,
        max_word_len=max_len,
    )


def twisted_covering_constant(tp: TwistedPatch, core_len: int | None = None) -> tuple[int, tuple[FiberValue, ...]]:
    """Greedy K for the twisted patch in the product metric: word length on
    the group part, fiber translates (e, t) as covering moves.

    A fiber translate (e, t) covers (g, v) iff the residual v - q(g) - t is
    within the fiber window, so coverage reduces to residual counts.
    """
    if tp.group_kind != "word" or tp.fiber_d is not None:
        raise DomainError("twisted covering implemented for word groups with integer fiber")
    L = tp.max_word_len or max(len(g) for g, _ in tp.pairs)
    cl = core_len if core_len is not None else L // 2
    core = [(g, v) for g, v in tp.pairs if len(g) <= cl]
    qcache: dict[str, int] = {}

    def q_of(g: str) -> int:
        if g not in qcache:
            qcache[g] = int(tp.q_fn(g))
        return qcache[g]

    counts: dict[int, int] = {}
    for g1, v1 in core:
        for g2, v2 in core:
            res = (v1 + v2) - q_of(tp.group_mul(g1, g2))
            counts[res] = counts.get(res, 0) + 1
    w = int(tp.window)
    cands = range(min(counts) - w, max(counts) + w + 1)
    uncovered = dict(counts)
    chosen: list[int] = []
    while uncovered:
        best_t, best_gain = None, 0
        for t in cands:
            gain = sum(n for res, n in uncovered.items() if abs(res - t) <= w)
            if gain > best_gain:
                best_t, best_gain = t, gain
        if best_t is None:
            raise DomainError("fiber translate pool cannot cover the residuals")
        chosen.append(best_t)
        uncovered = {res: n for res, n in uncovered.items() if abs(res - best_t) > w}
    return len(chosen), tuple(chosen)


def graph_covering_constant(
    tp: TwistedPatch,
    f_map: Mapping[object, QuadInt],
    core_filter: Callable[[object], bool],
) -> tuple[int, tuple[QuadInt, ...]]:
    """Greedy K for a graph patch over an abelian point group: sums of core
    pairs must be covered by fiber translates (0, t).

    ``f_map`` must be defined on all core-pair sums (use a box truncation of
    the group, whose half-radius core is closed under addition into the
    box).  Membership is the fiber window condition on the conjugate place.
    """
    if tp.group_kind != "point":
        raise DomainError("graph covering implemented for point groups")
    from .ring import cover_conj_interval, make_context

    core = [(g, v) for g, v in tp.pairs if core_filter(g)]
    if not core:
        raise DomainError("empty core")
    d = tp.fiber_d
    residuals: dict[tuple[int, int], int] = {}
    missing = 0
    for g1, v1 in core:
        for g2, v2 in core:
            s = tp.group_mul(g1, g2)
            base = f_map.get(s)
            if base is None:
                missing += 1
                continue
            r = (v1 + v2) - base
            residuals[(r.a, r.b)] = residuals.get((r.a, r.b), 0) + 1
    if missing:
        raise DomainError(f"f undefined on {missing} core-pair sums")
    res_pts = [QuadInt(a, b, d) for a, b in residuals]
    conj_vals = [r.conj().to_exact() for r in res_pts]
    lo = min(conj_vals, key=float)
    hi = max(conj_vals, key=float)
    ctx = make_context(d, tp.window)
    cands = cover_conj_interval(ctx, lo, hi)
    uncovered = dict(residuals)
    chosen: list[QuadInt] = []
    while uncovered:
        best_t, best_gain = None, 0
        for t in cands:
            gain = sum(
                n
                for (a, b), n in uncovered.items()
                if abs_le(QuadInt(a, b, d) - t, tp.window, "conjugate")
            )
            if gain > best_gain:
                best_t, best_gain = t, gain
        if best_t is None:
            raise DomainError("translate pool cannot cover the graph residuals")
        chosen.append(best_t)
        uncovered = {
            k: n
            for k, n in uncovered.items()
            if not abs_le(QuadInt(k[0], k[1], d) - best_t, tp.window, "conjugate")
        }
    return len(chosen), tuple(chosen)


@dataclass(frozen=True)
class SplitReport:
    splits: bool
    section_on_generators: dict
    witness: str | None
    witness_value: Fraction | None


def splitting_section(tp: TwistedPatch) -> SplitReport:
    """Try the homomorphic section determined by the fiber values on the
    generators; the patch splits exactly when that section stays within the
    fiber window of the twisting map on every materialized group element."""
    if tp.group_kind != "word" or tp.q_fn is None:
        raise DomainError("splitting check implemented for word groups with a value map")
    qa, qb = tp.q_fn("a"), tp.q_fn("b")

    def hom(g: str) -> int:
        ea = g.count("a") - g.count("A")
        eb = g.count("b") - g.count("B")
        return ea * qa + eb * qb

    group_elems = sorted({g for g, _ in tp.pairs}, key=lambda g: (len(g), g))
    for g in group_elems:
        if not tp.member(g, hom(g)):
            return SplitReport(False, {"a": qa, "b": qb}, g, Fraction(tp.q_fn(g) - hom(g)))
    return SplitReport(True, {"a": qa, "b": qb}, None, None)


# ---------------------------------------------------------------------------
# quasi-cocycle residuals and the laminarity probe


@dataclass(frozen=True)
class ResidualReport:
    passed: bool
    bound: Fraction
    checked: int
    violations: tuple[tuple[str, str], ...]


def qc_residual_check(
    q: Mapping[str, FiberValue],
    window: Rational,
    m1: int,
    m2: int,
    samples: Sequence[tuple[str, str]],
    fiber_d: int | None = None,
) -> ResidualReport:
    """Check that every residual q(g1 g2) - q(g1) - q(g2) (trivial action)
    lies in the fiber set with window bound 2 (m1 + m2) w."""
    bound = 2 * (m1 + m2) * Fraction(window)
    violations = []
    for g1, g2 in samples:
        if len(g1) > m1 or len(g2) > m2:
            raise DomainError(f"sample ({g1!r}, {g2!r}) exceeds word-length bounds")
        try:
            r = q[mul_words(g1, g2)] - q[g1] - q[g2]
        except KeyError as exc:
            raise DomainError(f"q undefined on needed element {exc}") from exc
        ok = abs(int(r)) <= bound if fiber_d is None else abs_le(r, bound, "conjugate")
        if not ok:
            violations.append((g1, g2))
    return ResidualReport(not violations, bound, len(samples), tuple(violations))


LAMINAR_CONSISTENT = "LAMINAR-CONSISTENT"
NON_LAMINAR = "NON-LAMINAR"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class ProbeReport:
    verdict: str
    certificate: tuple[str, Fraction] | None
    values: tuple[tuple[str, Fraction | None], ...]

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "certificate": None
            if self.certificate is None
            else {"element": self.certificate[0], "homogenized": str(self.certificate[1])},
            "values": [
                {"element": g, "homogenized": None if v is None else str(v)}
                for g, v in self.values
            ],
        }


def commutator(g: str, h: str) -> str:
    return reduce_word(g + h + invert_word(g) + invert_word(h))


def in_commutator_subgroup(g: str) -> bool:
    w = reduce_word(g)
    return w.count("a") == w.count("A") and w.count("b") == w.count("B")


def laminarity_probe(
    h: QuasiMorphism, test_elements: Sequence[str], cap: int = 2**16
) -> ProbeReport:
    """Homogenize on commutator test elements.  A nonzero value certifies
    unbounded distance from every homomorphism (homomorphisms vanish on the
    commutator subgroup), hence a non-laminar twisted patch; all zeros only
    mean the probe found nothing.
    """
    if not test_elements:
        raise DomainError("empty test set")
    for t in test_elements:
        if not in_commutator_subgroup(t):
            raise DomainError(f"test element {t!r} is not in the commutator subgroup")
    values: list[tuple[str, Fraction | None]] = []
    certificate = None
    inconclusive = False
    for t in test_elements:
        try:
            v = homogenize(h, t, cap=cap)
        except ConvergenceError:
            values.append((t, None))
            inconclusive = True
            continue
        values.append((t, v))
        if v != 0 and certificate is None:
            certificate = (t, v)
    if certificate is not None:
        return ProbeReport(NON_LAMINAR, certificate, tuple(values))
    if inconclusive:
        return ProbeReport(INCONCLUSIVE, None, tuple(values))
    return ProbeReport(LAMINAR_CONSISTENT, None, tuple(values))
