#!/usr/bin/env python3
"""Chain-length growth experiment: sample window elements across several
norm scales and print length / log(norm) statistics, checking the
logarithmic-generation bound empirically."""

import math
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from apxlat import apxgroup  # noqa: E402
from apxlat.cli import sample_window_elements  # noqa: E402
from apxlat.prng import Xoshiro256StarStar  # noqa: E402
from apxlat.ring import QuadInt, make_context  # noqa: E402


def main(seed: int = 7, per_scale: int = 500) -> int:
    ctx = make_context(2, 1)
    alpha = QuadInt(-1, 1)
    translates = apxgroup.chain_translates(ctx, alpha)
    print(f"contraction alpha = -1 + sqrt(2), |F| = {len(translates)}")
    print(f"{'norm bound':>12} {'mean len':>9} {'max len':>8} {'max ratio':>10}")
    for exp in range(3, 10):
        bound = 10**exp
        rng = Xoshiro256StarStar(seed + exp)
        lengths, ratios = [], []
        for u in sample_window_elements(ctx, per_scale, bound, rng):
            cert = apxgroup.efficient_chain(u, ctx, alpha, translates)
            assert cert.replay() == u
            lengths.append(cert.length)
            ratios.append(cert.length / math.log(max(abs(float(u)), 2.0)))
        print(
            f"{bound:>12} {sum(lengths) / len(lengths):>9.2f} "
            f"{max(lengths):>8} {max(ratios):>10.3f}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
