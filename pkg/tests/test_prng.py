from apxlat.prng import Xoshiro256StarStar


def test_deterministic_stream():
    a = Xoshiro256StarStar(42)
    b = Xoshiro256StarStar(42)
    assert [a.next_u64() for _ in range(64)] == [b.next_u64() for _ in range(64)]


def test_frozen_reference_values():
    # first outputs for seed 1, frozen so any reimplementation of the update
    # equations can be checked against them
    rng = Xoshiro256StarStar(1)
    got = [rng.next_u64() for _ in range(4)]
    assert got == [
        12966619160104079557,
        9600361134598540522,
        10590380919521690900,
        7218738570589545383,
    ]


def test_seeds_differ():
    assert Xoshiro256StarStar(1).next_u64() != Xoshiro256StarStar(2).next_u64()


def test_ranges():
    rng = Xoshiro256StarStar(7)
    for _ in range(2000):
        v = rng.randint(-5, 5)
        assert -5 <= v <= 5
    counts = {k: 0 for k in range(3)}
    for _ in range(3000):
        counts[rng.randrange(3)] += 1
    assert all(c > 800 for c in counts.values())
