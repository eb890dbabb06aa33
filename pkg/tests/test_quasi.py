from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apxlat import quasi as Q
from apxlat.ring import DomainError

words = st.text(alphabet="aAbB", max_size=10)


def test_reduce_examples():
    assert Q.reduce_word("aA") == ""
    assert Q.reduce_word("abBA") == ""
    assert Q.reduce_word("abab") == "abab"
    with pytest.raises(DomainError):
        Q.reduce_word("xyz")


@given(words)
def test_reduce_idempotent(w):
    r = Q.reduce_word(w)
    assert Q.reduce_word(r) == r
    assert Q.is_reduced(r)


@given(words)
def test_inverse_cancels(w):
    assert Q.reduce_word(w + Q.invert_word(w)) == ""


def test_qm_eval_examples():
    h = Q.H_AB
    assert Q.qm_eval(h, "abab") == 2
    assert Q.qm_eval(h, "") == 0
    assert Q.qm_eval(h, "BABA") == -2


@given(words)
def test_qm_antisymmetry(w):
    h = Q.H_AB
    assert Q.qm_eval(h, Q.invert_word(w)) == -Q.qm_eval(h, w)


def test_qm_antisymmetry_exhaustive():
    h = Q.H_AB
    for w in Q.all_reduced_words(8):
        assert Q.qm_eval(h, Q.invert_word(w)) == -Q.qm_eval(h, w)


@given(words)
@settings(max_examples=100)
def test_qm_antisymmetry_longer_pattern(w):
    h = Q.QuasiMorphism.of(("aab", Fraction(2, 3)), ("bA", -1))
    assert Q.qm_eval(h, Q.invert_word(w)) == -Q.qm_eval(h, w)


QMS = [
    Q.H_AB,
    Q.brooks("a"),
    Q.brooks("aab"),
    Q.brooks("abA"),
    Q.QuasiMorphism.of(("ab", 1), ("ba", Fraction(-1, 2))),
    Q.QuasiMorphism.of(("aa", 1), ("bb", 2)),
]


@pytest.mark.parametrize("h", QMS, ids=range(len(QMS)))
def test_defect_matches_exhaustive_oracle(h):
    # the cancellation-window enumeration against the naive double loop
    for L in range(0, 5):
        assert Q.defect(h, L) == Q.defect_direct(h, L)


def test_defect_abelianization_vanishes():
    hom = Q.brooks("a")
    assert all(Q.defect(hom, L) == 0 for L in range(1, 9))


def test_defect_h_ab_profile():
    # frozen from the exhaustive oracle: the products of single letters
    # already realize the defect, so the profile is 1 from L = 1 on
    profile = Q.defect_profile(Q.H_AB, 8)
    assert profile == [(l, Fraction(1)) for l in range(1, 9)]
    assert Q.stabilized_defect(Q.H_AB, 8) == (Fraction(1), 1)


def test_defect_monotone():
    h = Q.QuasiMorphism.of(("aab", 1), ("ab", Fraction(1, 2)))
    prof = [v for _, v in Q.defect_profile(h, 8)]
    assert all(x <= y for x, y in zip(prof, prof[1:]))


def test_power_word():
    assert Q.power_word("abAB", 3) == "abAB" * 3
    assert Q.power_word("aBA", 3) == "a" + "B" * 3 + "A"  # conjugate powers
    assert Q.power_word("aA", 5) == ""


def test_homogenize_examples():
    h = Q.H_AB
    assert Q.homogenize(h, Q.commutator("a", "b")) == 1
    assert Q.homogenize(h, "a") == 0
    assert Q.homogenize(h, "") == 0
    assert Q.homogenize(Q.brooks("aaa"), "a") == 1  # needs a late start
    assert Q.homogenize(h, "ab") == 1


def test_homogenize_power_values_exact():
    h = Q.H_AB
    comm = Q.commutator("a", "b")
    for n in range(1, 65):
        assert Q.qm_eval(h, Q.power_word(comm, n)) == n


def test_homogenize_error_bound():
    # |h(g^n)/n - hom| <= D/n with the stabilized defect D, all rationals
    h = Q.QuasiMorphism.of(("aab", 1), ("ab", Fraction(1, 2)))
    d8 = Q.defect(h, 8)
    for g in ("ab", "aab", "abAB", "aabb"):
        hom = Q.homogenize(h, g)
        for n in (1, 2, 5, 16):
            vn = Q.qm_eval(h, Q.power_word(g, n))
            assert abs(Fraction(vn, n) - hom) <= d8 / n


def test_homogenize_cap_raises():
    with pytest.raises(Q.ConvergenceError):
        Q.homogenize(Q.brooks("aaa"), "a", cap=1)


def test_coboundary_of_constant_vanishes():
    c0 = Q.BoundedCochain(0, {(): Fraction(7)})
    dc = Q.coboundary(c0, [("a",), ("bA",), ("abab",)])
    assert all(v == 0 for v in dc.values.values())


def test_coboundary_sign_convention():
    h = Q.H_AB
    support = [(w,) for w in Q.all_reduced_words(4)]
    c = Q.cochain_from_qm(h, (w for (w,) in support))
    dc = Q.coboundary(c, [("a", "b")])
    residual = Q.qm_eval(h, "ab") - Q.qm_eval(h, "a") - Q.qm_eval(h, "b")
    assert dc("a", "b") == -residual


def test_coboundary_squared_zero():
    import random

    rng = random.Random(12)
    words = list(Q.all_reduced_words(4))
    c = Q.BoundedCochain(
        1, {(w,): Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for w in words}
    )
    triples = [
        (g1, g2, g3)
        for g1 in Q.all_reduced_words(1, 1)
        for g2 in Q.all_reduced_words(1, 1)
        for g3 in Q.all_reduced_words(1, 1)
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


def test_coboundary_missing_support():
    c = Q.BoundedCochain(1, {("a",): Fraction(1)})
    with pytest.raises(Q.PartialSupportError) as err:
        Q.coboundary(c, [("a", "b")])
    assert ("b",) in err.value.missing
    assert ("ab",) in err.value.missing


def test_coboundary_supnorm_equals_defect():
    # d(h) as a 2-cochain has sup over length-<=L pairs equal to defect(h, L)
    h = Q.H_AB
    L = 4
    support_words = list(Q.all_reduced_words(2 * L))
    c = Q.cochain_from_qm(h, support_words)
    pairs = [
        (g1, g2) for g1 in Q.all_reduced_words(L) for g2 in Q.all_reduced_words(L)
    ]
    dc = Q.coboundary(c, pairs)
    assert max(abs(v) for v in dc.values.values()) == Q.defect(h, L)


def test_residual_check_passes_for_counting_qm():
    q = {w: int(Q.qm_eval(Q.H_AB, w)) for w in Q.all_reduced_words(6)}
    samples = [
        (g1, g2) for g1 in Q.all_reduced_words(3) for g2 in Q.all_reduced_words(3)
    ]
    rep = Q.qc_residual_check(q, 1, 3, 3, samples)
    assert rep.passed and rep.bound == 12 and rep.checked == len(samples)


def test_residual_check_zero_map():
    q = {w: 0 for w in Q.all_reduced_words(4)}
    rep = Q.qc_residual_check(q, 1, 2, 2, [("a", "b"), ("ab", "BA")])
    assert rep.passed


def test_residual_check_corrupted_value():
    q = {w: int(Q.qm_eval(Q.H_AB, w)) for w in Q.all_reduced_words(4)}
    q["ab"] = 500
    rep = Q.qc_residual_check(q, 1, 2, 2, [("a", "b"), ("a", "A")])
    assert not rep.passed and ("a", "b") in rep.violations


def test_build_twisted_zero_map_is_product():
    zero = Q.QuasiMorphism.of(("ab", 0))
    tp = Q.build_twisted(zero, 1, 4)
    n_words = sum(1 for _ in Q.all_reduced_words(4))
    assert len(tp.pairs) == 3 * n_words
    k, _ = Q.twisted_covering_constant(tp)
    # matches the fiber patch's own constant
    assert k == 3


def test_twisted_covering_stable_in_length():
    k6, _ = Q.twisted_covering_constant(Q.build_twisted(Q.H_AB, 1, 6))
    k8, _ = Q.twisted_covering_constant(Q.build_twisted(Q.H_AB, 1, 8))
    assert k6 == k8


def test_homomorphism_twisted_splits():
    tp = Q.build_twisted(Q.brooks("a"), 1, 5)
    rep = Q.splitting_section(tp)
    assert rep.splits and rep.witness is None


def test_h_ab_twisted_does_not_split():
    tp = Q.build_twisted(Q.H_AB, 1, 5)
    rep = Q.splitting_section(tp)
    assert not rep.splits
    assert abs(rep.witness_value) > 1


def test_probe_h_ab_non_laminar():
    rep = Q.laminarity_probe(Q.H_AB, [Q.commutator("a", "b")])
    assert rep.verdict == Q.NON_LAMINAR
    assert rep.certificate == ("abAB", Fraction(1))


def test_probe_homomorphism_consistent():
    rep = Q.laminarity_probe(Q.brooks("a"), [Q.commutator("a", "b"), "aabABA"])
    assert rep.verdict == Q.LAMINAR_CONSISTENT


def test_probe_zero_weight_consistent():
    rep = Q.laminarity_probe(Q.QuasiMorphism.of(("ab", 0)), [Q.commutator("a", "b")])
    assert rep.verdict == Q.LAMINAR_CONSISTENT


def test_probe_rejects_non_commutator():
    with pytest.raises(DomainError):
        Q.laminarity_probe(Q.H_AB, ["ab"])
    with pytest.raises(DomainError):
        Q.laminarity_probe(Q.H_AB, [])


def test_probe_inconclusive_with_tiny_cap():
    rep = Q.laminarity_probe(Q.brooks("aaa"), ["abAB"], cap=0)
    assert rep.verdict == Q.INCONCLUSIVE


def test_quasimorphism_json_round_trip():
    h = Q.QuasiMorphism.of(("ab", Fraction(2, 3)), ("aab", -2))
    blob = h.to_json()
    assert blob["terms"][0] == {"pattern": "ab", "weight": "2/3"}
    assert Q.QuasiMorphism.from_json(blob) == h


def test_probe_report_json():
    rep = Q.laminarity_probe(Q.H_AB, [Q.commutator("a", "b")])
    blob = rep.to_json()
    assert blob["verdict"] == "NON-LAMINAR"
    assert blob["certificate"] == {"element": "abAB", "homogenized": "1"}
