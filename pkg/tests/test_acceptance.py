"""Acceptance suite: one test per criterion, each printing a PASS line with
its elapsed time.  Budgets follow the stated limits."""

import json
import math
import os
import time
from fractions import Fraction

import pytest

from apxlat import apxgroup, cli, hull
from apxlat import quasi as Q
from apxlat.cutproject import enumerate_bruteforce, enumerate_model_set, make_scheme
from apxlat.prng import Xoshiro256StarStar
from apxlat.ring import QuadInt, make_context

REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def _report(n: int, label: str, t0: float, budget: float):
    elapsed = time.monotonic() - t0
    print(f"ACCEPTANCE {n}: PASS  {label}  ({elapsed:.2f}s / budget {budget:.0f}s)")
    assert elapsed < budget


def test_criterion_1_model_set_exactness():
    t0 = time.monotonic()
    for d in (2, 3, 5):
        for w in (Fraction(1, 2), Fraction(1), Fraction(2)):
            scheme = make_scheme(d, w, 1)
            for radius in (10, 50, 200):
                fast = enumerate_model_set(scheme, radius)
                slow = enumerate_bruteforce(scheme, radius)
                assert fast.points == slow.points, (d, w, radius)
    _report(1, "enumerate == brute force on 27 parameter triples", t0, 5)


def test_criterion_2_density():
    t0 = time.monotonic()
    scheme = make_scheme(2, 1, 1)
    # |patch| sqrt(2) within 2% of 2R at R = 1e4, 0.5% at 1e5: integer squares
    for radius, pct in ((10**4, Fraction(2, 100)), (10**5, Fraction(5, 1000))):
        c = len(enumerate_model_set(scheme, radius))
        lo, hi = (1 - pct) * 2 * radius, (1 + pct) * 2 * radius
        assert lo * lo <= 2 * c * c and 2 * c * c <= hi * hi, (radius, c)
    # cross-check the counting route against the brute-force loop at R = 1e3
    assert len(enumerate_model_set(scheme, 1000)) == len(
        enumerate_bruteforce(scheme, 1000)
    )
    _report(2, "density 1/sqrt(2) within 2% at 1e4 and 0.5% at 1e5", t0, 10)


def test_criterion_3_covering_constant_stable():
    t0 = time.monotonic()
    scheme = make_scheme(2, 1, 1)
    ks = [
        apxgroup.covering_constant(enumerate_model_set(scheme, r)).k_constant
        for r in (50, 100, 200)
    ]
    assert ks[0] == ks[1] == ks[2], ks
    _report(3, f"greedy K identical at R in {{50,100,200}} (K={ks[0]})", t0, 30)


def test_criterion_4_efficient_chains():
    t0 = time.monotonic()
    ctx = make_context(2, 1)
    alpha = QuadInt(-1, 1)
    translates = apxgroup.chain_translates(ctx, alpha)
    rng = Xoshiro256StarStar(2026)
    ratios = []
    for u in cli.sample_window_elements(ctx, 1000, 10**6, rng):
        cert = apxgroup.efficient_chain(u, ctx, alpha, translates)
        assert cert.replay() == u
        ratios.append(cert.length / math.log(max(abs(float(u)), 2.0)))
    ratios.sort()
    median = ratios[len(ratios) // 2]
    assert median > 0
    assert ratios[-1] <= 3 * median, (ratios[-1], median)
    _report(
        4,
        f"1000 chains replay exactly; max/median ratio {ratios[-1] / median:.2f} <= 3",
        t0,
        10,
    )


def test_criterion_5_quasimorphism_suite():
    t0 = time.monotonic()
    h = Q.H_AB
    # defect stabilizes by L = 8
    profile = Q.defect_profile(h, 8)
    stabilized, from_len = Q.stabilized_defect(h, 8)
    assert from_len <= 8
    assert all(v == stabilized for l, v in profile if l >= from_len)
    # homogenization of the basic commutator
    assert Q.homogenize(h, Q.commutator("a", "b")) == Fraction(1)
    # d o d = 0 on 100 random 1-cochains, exactly
    rng = Xoshiro256StarStar(55)
    support_words = list(Q.all_reduced_words(4))
    letters = list(Q.all_reduced_words(1, 1))
    for _ in range(100):
        c = Q.BoundedCochain(
            1,
            {
                (w,): Fraction(rng.randint(-20, 20), rng.randint(1, 5))
                for w in support_words
            },
        )
        triples = [
            tuple(letters[rng.randrange(4)] for _ in range(3)) for _ in range(10)
        ]
        pairs = set()
        for g1, g2, g3 in triples:
            pairs |= {
                (g2, g3),
                (Q.mul_words(g1, g2), g3),
                (g1, Q.mul_words(g2, g3)),
                (g1, g2),
            }
        ddc = Q.coboundary(Q.coboundary(c, pairs), triples)
        assert all(v == 0 for v in ddc.values.values())
    # residuals bounded by the stabilized defect: window D / (2 (m1 + m2))
    m1 = m2 = 3
    q = {w: int(Q.qm_eval(h, w)) for w in Q.all_reduced_words(6)}
    samples = [
        (g1, g2) for g1 in Q.all_reduced_words(3) for g2 in Q.all_reduced_words(3)
    ]
    rep = Q.qc_residual_check(
        q, Fraction(stabilized, 2 * (m1 + m2)), m1, m2, samples
    )
    assert rep.passed and rep.bound == stabilized
    _report(5, f"defect profile stabilizes (D={stabilized}); dd=0; residuals pass", t0, 20)


def test_criterion_6_laminarity_dichotomy():
    t0 = time.monotonic()
    comm = Q.commutator("a", "b")
    probe = Q.laminarity_probe(Q.H_AB, [comm])
    assert probe.verdict == Q.NON_LAMINAR
    assert probe.certificate == ("abAB", Fraction(1))
    abel = Q.brooks("a")
    probe2 = Q.laminarity_probe(abel, [comm])
    assert probe2.verdict == Q.LAMINAR_CONSISTENT
    # the homomorphism's twisted patch splits via an exact section
    assert Q.splitting_section(Q.build_twisted(abel, 1, 5)).splits
    # h_ab's twisted patch drifts unboundedly along powers of the commutator
    assert not Q.splitting_section(Q.build_twisted(Q.H_AB, 1, 5)).splits
    for n in range(1, 65):
        assert Q.qm_eval(Q.H_AB, Q.power_word(comm, n)) == n
    _report(6, "NON-LAMINAR cert ([a,b], 1) vs splitting homomorphism", t0, 20)


def test_criterion_7_return_times():
    t0 = time.monotonic()
    w0 = Fraction(1)
    results = {}
    for horizon in (1000, 2000):
        b = hull.section_samples(w0, 3)
        rt = hull.return_times(b, w0, horizon)
        patch2 = enumerate_model_set(make_scheme(2, 2 * w0, 1), horizon)
        rt_pts = [(q,) for q in rt.points]
        k1, _ = apxgroup.commensurability_cover(rt_pts, patch2, horizon, 2)
        k2, _ = apxgroup.commensurability_cover(patch2.points, rt_pts, horizon, 2)
        assert k1 <= 4 and k2 <= 4, (horizon, k1, k2)
        results[horizon] = (k1, k2)
    assert results[1000] == results[2000], results
    _report(
        7,
        f"mutual covers {results[1000]} <= 4, stable when the horizon doubles",
        t0,
        30,
    )


def test_criterion_8_cocycle_identities():
    t0 = time.monotonic()
    rng = Xoshiro256StarStar(314159)
    failures = 0
    from apxlat.ring import QuadExact

    for _ in range(1000):
        t1 = Fraction(rng.randint(-4000, 4000), rng.randint(1, 9))
        t2 = Fraction(rng.randint(-4000, 4000), rng.randint(1, 9))
        v1 = QuadExact(
            Fraction(rng.randint(-500, 500), rng.randint(1, 7)),
            Fraction(rng.randint(-200, 200), rng.randint(1, 5)),
            2,
        )
        v2 = QuadExact(
            Fraction(rng.randint(-500, 500), rng.randint(1, 7)),
            Fraction(rng.randint(-200, 200), rng.randint(1, 5)),
            2,
        )
        x = hull.section(v1, v2)[0]
        if hull.cocycle_alpha(t1 + t2, x) != hull.cocycle_alpha(
            t1, hull.translate(x, t2)
        ) + hull.cocycle_alpha(t2, x):
            failures += 1
        g = QuadInt(rng.randint(-9, 9), rng.randint(-9, 9))
        e1, e2 = hull.embed(g)
        s1 = hull.section(v1, v2)[0]
        s2 = hull.section(v1 + e1, v2 + e2)[0]
        if not ((s1.p1 - s2.p1).is_zero() and (s1.p2 - s2.p2).is_zero()):
            failures += 1
    assert failures == 0
    _report(8, "cocycle identity and section invariance: 0 failures in 1000", t0, 30)


def test_criterion_9_determinism(tmp_path):
    t0 = time.monotonic()
    cfg = os.path.join(REPO, "configs", "default.json")
    out1, out2 = str(tmp_path / "r1"), str(tmp_path / "r2")
    assert cli.main(["run", "--config", cfg, "--out", out1]) == 0
    assert cli.main(["run", "--config", cfg, "--out", out2]) == 0
    names = sorted(os.listdir(out1))
    assert names == sorted(os.listdir(out2))
    for name in names:
        b1 = open(os.path.join(out1, name), "rb").read()
        b2 = open(os.path.join(out2, name), "rb").read()
        assert b1 == b2, f"{name} differs between runs"
    assert "report.json" in names and "patch.svg" in names
    _report(9, f"two runs byte-identical across {len(names)} artifacts", t0, 60)
