from neuromap.rng import SplitMix64, mix64, substream

import pytest


def test_streams_are_reproducible():
    a = SplitMix64(12345)
    b = SplitMix64(12345)
    assert [a.next_u64() for _ in range(20)] == [b.next_u64() for _ in range(20)]


def test_known_answer_is_stable():
    # Reference values of the splitmix64 sequence for seed 0; pins the
    # algorithm so workloads regenerate identically across releases.
    rng = SplitMix64(0)
    assert rng.next_u64() == 0xE220A8397B1DCDAF
    assert rng.next_u64() == 0x6E789E6AA1B965F4
    assert rng.next_u64() == 0x06C45D188009454F


def test_randrange_bounds_and_determinism():
    rng = SplitMix64(7)
    values = [rng.randrange(10) for _ in range(1000)]
    assert all(0 <= v < 10 for v in values)
    assert set(values) == set(range(10))
    with pytest.raises(ValueError):
        rng.randrange(0)


def test_randint_inclusive():
    rng = SplitMix64(3)
    values = {rng.randint(2, 4) for _ in range(200)}
    assert values == {2, 3, 4}


def test_uniform_in_unit_interval():
    rng = SplitMix64(11)
    values = [rng.uniform() for _ in range(1000)]
    assert all(0.0 <= v < 1.0 for v in values)


def test_sample_prefix_is_injective_sample():
    rng = SplitMix64(5)
    items = list(range(30))
    for k in (0, 1, 7, 30):
        picked = rng.sample_prefix(items, k)
        assert len(picked) == k
        assert len(set(picked)) == k
        assert set(picked) <= set(items)
    assert items == list(range(30))  # input untouched


def test_substreams_differ_and_reproduce():
    s0 = substream(42, 0)
    s0_again = substream(42, 0)
    s1 = substream(42, 1)
    seq0 = [s0.next_u64() for _ in range(5)]
    assert seq0 == [s0_again.next_u64() for _ in range(5)]
    assert seq0 != [s1.next_u64() for _ in range(5)]


def test_mix64_avalanches():
    # 0 is the finalizer's sole fixed point; the stream never revisits it
    # because the state advances by the golden gamma before mixing.
    assert mix64(0) == 0
    assert mix64(1) not in (0, 1)
    assert mix64(1) != mix64(2)
    rng = SplitMix64(0)
    assert rng.next_u64() != 0
