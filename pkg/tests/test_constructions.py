import pytest
from hypothesis import given, settings, strategies as st

from bairechaos.constructions import (
    A_SLOT,
    checkpoint_indices,
    dense_family_point,
    disagreement_witness,
    hat_encode,
    hat_locate,
    hat_source,
    primitive,
    read_seed_config,
    safe_positions,
    sbt_scrambled_point,
    sbt_seed,
    sft_scrambled_point,
)
from bairechaos.points import ConstantPoint, FormatError, PeriodicPoint, PrefixPoint, cylinder_contains
from bairechaos.rng import random_point
from bairechaos.subshift import SubshiftSpec, allowed_word, prefix_in_shift

from oracles import hat_naive

BASIS01 = SubshiftSpec.from_words([(0, 1)], 1)
FULL = SubshiftSpec.from_words([], 1)


def test_hat_examples():
    assert hat_encode(ConstantPoint(0), 2).prefix(9) == (0, 2, 0, 0, 2, 0, 0, 0, 2)
    assert safe_positions(5) == [1, 4, 8, 13, 19]


@given(st.lists(st.integers(0, 5), min_size=1, max_size=6).map(tuple))
def test_hat_matches_naive(word):
    base = PeriodicPoint(word)
    assert hat_encode(base, 9).prefix(80) == tuple(hat_naive(base, 9, 80))


def test_hat_locate_roundtrip():
    for i in range(2000):
        k, off = hat_locate(i)
        assert 0 <= off <= k + 1
        src = hat_source(i)
        assert (src is None) == (off == k + 1)


def test_sft_point_shape():
    x = sft_scrambled_point(BASIS01, (0,), ConstantPoint(2))
    assert x.prefix(500) == (0,) + (2,) * 499
    assert cylinder_contains((0,), x)
    assert x.schedule.m(0) == 3


def test_sft_rejects_bad_input():
    with pytest.raises(ValueError):
        sft_scrambled_point(BASIS01, (0, 1), ConstantPoint(2))
    with pytest.raises(ValueError):
        sft_scrambled_point(BASIS01, (0,), ConstantPoint(2), K=1)


def test_sft_point_lies_in_shift():
    base = random_point(1, (0,), 2, 3)
    x = sft_scrambled_point(BASIS01, (0,), base)
    assert prefix_in_shift(BASIS01, x, x.schedule.m(6))


def test_dense_example():
    x = dense_family_point(BASIS01, 1, 0, PeriodicPoint((4, 5)))
    assert x.prefix(6) == (0, 2, 4, 2, 2, 4)
    assert x.origin == 2


@pytest.mark.parametrize("p,g", [(p, g) for p in (1, 2, 3) for g in (0, 1, 2)])
def test_dense_starts_with_word(p, g):
    w = allowed_word(BASIS01, p, g)
    r = 2 * (2 + g)
    x = dense_family_point(BASIS01, p, g, random_point(3, (p, g), r, r + p))
    assert x.prefix(p) == w
    assert prefix_in_shift(BASIS01, x, 10_000)


def test_dense_rejects_wrong_alphabet():
    with pytest.raises(ValueError):
        dense_family_point(BASIS01, 1, 0, PeriodicPoint((4, 6)))
    with pytest.raises(ValueError):
        dense_family_point(BASIS01, 1, 0, ConstantPoint(4))


def test_primitive():
    assert not primitive((0, 0))
    assert not primitive((0, 1, 0, 1))
    assert primitive((0, 1))
    assert primitive((0, 1, 0))


def test_sbt_seed_example():
    seed = sbt_seed(FULL, PeriodicPoint((0, 1)), PeriodicPoint((0, 1, 2)), PeriodicPoint((0, 1, 2, 3, 4)))
    assert seed.a == (0, 1)
    assert seed.b == (2, 0, 1, 2)
    assert seed.c == (2, 3, 4, 0, 1, 2, 3, 4)
    assert (seed.M, seed.A, seed.B, seed.C) == (30, 15, 5, 3)
    assert len(seed.a) * seed.A == len(seed.b + seed.a) * seed.B == len(seed.c + seed.a) * seed.C == 30
    I0, I1 = seed.I0, seed.I1
    diffs = [i for i in range(30) if I0[i] != I1[i]]
    assert diffs and seed.theta == diffs[0] < 30


def test_sbt_seed_rejections():
    z, x, y = PeriodicPoint((0, 1)), PeriodicPoint((0, 1, 2)), PeriodicPoint((0, 1, 2, 3, 4))
    with pytest.raises(ValueError):
        sbt_seed(FULL, PeriodicPoint((0, 0)), x, y)
    with pytest.raises(ValueError):
        sbt_seed(FULL, x, z, y)


def test_sbt_first_slots():
    seed = sbt_seed(FULL, PeriodicPoint((0, 1)), PeriodicPoint((0, 1, 2)), PeriodicPoint((0, 1, 2, 3, 4)))
    alpha = PrefixPoint((1,), ConstantPoint(0))
    pt = sbt_scrambled_point(seed, alpha)
    M, s = seed.M, pt.schedule
    assert pt.labels.prefix(3) == (1, A_SLOT, 1)
    assert pt.prefix(M) == seed.I1
    assert pt.symbols(M, M + M * s.s(1)).tolist() == list(seed.a) * (M * s.s(1) // 2)
    assert pt.symbols(s.m(1), s.m(1) + M).tolist() == list(seed.I1)


def test_sbt_injectivity_witness():
    seed = sbt_seed(FULL, PeriodicPoint((0, 1)), PeriodicPoint((0, 1, 2)), PeriodicPoint((0, 1, 2, 3, 4)))
    a = PrefixPoint((0, 0, 1), ConstantPoint(0))
    b = PrefixPoint((0, 0, 0), ConstantPoint(0))
    x, y = sbt_scrambled_point(seed, a), sbt_scrambled_point(seed, b)
    gamma = disagreement_witness(x, y, 10**40)
    assert gamma is not None and x.symbol_at(gamma) != y.symbol_at(gamma)


def test_checkpoint_indices_examples():
    nu, mu = checkpoint_indices(ConstantPoint(2), PrefixPoint((3,), ConstantPoint(2)), 2, 4)
    assert nu == [1, 4, 8, 13]
    assert mu == [0, 2, 5, 9]
    with pytest.raises(ValueError):
        checkpoint_indices(ConstantPoint(2), ConstantPoint(2), 2, 4)


def test_witness_none_for_equal_points():
    assert disagreement_witness(ConstantPoint(1), ConstantPoint(1), 10**6) is None


@settings(max_examples=50)
@given(st.integers(0, 2**63), st.integers(0, 3), st.integers(0, 3), st.integers(1, 3))
def test_distinct_offsets_have_witness(seed, g, h, p):
    if g == h:
        return
    K = 2
    x = random_point(seed, (0,), 2 * (K + g), 2 * (K + g) + p)
    y = random_point(seed, (1,), 2 * (K + h), 2 * (K + h) + p)
    gamma = disagreement_witness(x, y, 4096)
    assert gamma is not None and x.symbol_at(gamma) != y.symbol_at(gamma)


def test_seed_config_parse(tmp_path):
    path = tmp_path / "seed.txt"
    path.write_text("# seeds\nz 0 1\nx 0 1 2\ny 0 1 2 3 4\nalpha pattern 0 1 1\nbeta random 17\n")
    cfg = read_seed_config(path)
    assert cfg["z"] == PeriodicPoint((0, 1))
    assert cfg["alpha"] == ("pattern", (0, 1, 1))
    assert cfg["beta"] == ("random", 17)
    path.write_text("z 0 1\nx 0 1 2\nq 1\n")
    with pytest.raises(FormatError) as exc:
        read_seed_config(path)
    assert exc.value.line == 3
