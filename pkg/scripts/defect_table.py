#!/usr/bin/env python3
"""Print defect profiles and homogenized commutator values for a family of
counting quasimorphisms."""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from apxlat import quasi as Q  # noqa: E402

FAMILY = ["ab", "aab", "abb", "abA", "aabb", "abab"]

if __name__ == "__main__":
    comm = Q.commutator("a", "b")
    print(f"{'pattern':>8} {'defect(L=1..8)':>34} {'hom on [a,b]':>13}")
    for pat in FAMILY:
        h = Q.brooks(pat)
        prof = [str(v) for _, v in Q.defect_profile(h, 8)]
        hom = Q.homogenize(h, comm)
        print(f"{pat:>8} {' '.join(f'{p:>4}' for p in prof):>34} {str(hom):>13}")
