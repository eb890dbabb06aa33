"""Deterministic SVG scatter plots: fixed 800x600 canvas, 2px markers,
byte-identical output for identical input."""

from __future__ import annotations

from .ring import DomainError

WIDTH, HEIGHT = 800, 600
MARGIN = 40


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def _scatter(points: list[tuple[float, float]], x_label: str, y_label: str, title: str) -> str:
    if not points:
        raise DomainError("nothing to plot")
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    x_span = (x_hi - x_lo) or 1.0
    y_span = (y_hi - y_lo) or 1.0

    def sx(x: float) -> float:
        return MARGIN + (x - x_lo) / x_span * (WIDTH - 2 * MARGIN)

    def sy(y: float) -> float:
        return HEIGHT - MARGIN - (y - y_lo) / y_span * (HEIGHT - 2 * MARGIN)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH // 2}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        f'<text x="{WIDTH // 2}" y="{HEIGHT - 8}" text-anchor="middle" font-size="12">{x_label}</text>',
        f'<text x="14" y="{HEIGHT // 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {HEIGHT // 2})">{y_label}</text>',
    ]
    for x, y in points:
        out.append(f'<circle cx="{_fmt(sx(x))}" cy="{_fmt(sy(y))}" r="1" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def plot_patch(patch) -> str:
    """Physical vs internal coordinate of a 1-d point patch."""
    if patch.scheme.physical_dim != 1:
        pts = [(float(p[0]), float(p[1])) for p in patch.points]
        return _scatter(pts, "physical x0", "physical x1", "model-set patch")
    pts = [(float(p[0]), p[0].conj_float()) for p in patch.points]
    return _scatter(pts, "physical", "internal", "model-set patch")


def plot_twisted(tp) -> str:
    """Word length (jittered by lexicographic rank) vs fiber value."""
    if tp.group_kind != "word":
        raise DomainError("twisted plot implemented for word groups")
    groups = sorted({g for g, _ in tp.pairs}, key=lambda g: (len(g), g))
    rank = {g: i for i, g in enumerate(groups)}
    by_len: dict[int, list[str]] = {}
    for g in groups:
        by_len.setdefault(len(g), []).append(g)
    pts = []
    for g, v in sorted(tp.pairs, key=lambda p: (rank[p[0]], float(p[1]))):
        peers = by_len[len(g)]
        off = (peers.index(g) + 1) / (len(peers) + 1) - 0.5
        pts.append((len(g) + 0.8 * off, float(v)))
    return _scatter(pts, "word length", "fiber value", "twisted patch")
