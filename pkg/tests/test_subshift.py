from itertools import islice, product

import pytest
from hypothesis import given, settings, strategies as st

from bairechaos.matching import AhoCorasick
from bairechaos.points import ConstantPoint, FormatError, PeriodicPoint, PrefixPoint
from bairechaos.subshift import (
    ForbiddenBasis,
    Gluing,
    SubshiftSpec,
    allowed_word,
    allowed_word_index,
    compute_safe_symbol_K,
    enumerate_allowed_words,
    is_allowed,
    prefix_in_shift,
    read_basis,
    verify_gluing_instance,
    write_basis,
)

from oracles import allowed_naive, allowed_words_naive, occurs

small_word = st.lists(st.integers(0, 2), min_size=1, max_size=3).map(tuple)
bases = st.lists(small_word, max_size=4)


def spec_of(*words, N=None):
    return SubshiftSpec.from_words(words, N)


def test_is_allowed_examples():
    sp = spec_of((0, 1), (2, 2))
    assert is_allowed(sp, (0, 2, 1))
    assert not is_allowed(sp, (2, 2))
    assert is_allowed(sp, ())


def test_safe_symbol_examples():
    assert compute_safe_symbol_K(ForbiddenBasis([(0, 1)])) == 2
    assert compute_safe_symbol_K(ForbiddenBasis([(3,), (5, 2)])) == 6
    assert compute_safe_symbol_K(ForbiddenBasis([])) == 0


def test_basis_rejects_empty_word():
    with pytest.raises(ValueError):
        ForbiddenBasis([()])


def test_prefix_in_shift_examples():
    sp = spec_of((0, 1))
    assert prefix_in_shift(sp, PeriodicPoint((0, 2)), 10**4)
    assert not prefix_in_shift(sp, PrefixPoint((2, 0, 1), ConstantPoint(2)), 3)
    assert prefix_in_shift(SubshiftSpec(), PeriodicPoint((0, 1)), 10**6)


def test_gluing_examples():
    assert verify_gluing_instance(spec_of(N=1), (0,), (1, 1), (0,)) is Gluing.HOLDS
    sp = spec_of((0, 1), N=1)
    assert verify_gluing_instance(sp, (0,), (2,), (1,)) is Gluing.HOLDS
    assert verify_gluing_instance(sp, (0,), (), (1,)) is Gluing.INAPPLICABLE
    with pytest.raises(ValueError):
        verify_gluing_instance(spec_of((0, 1)), (0,), (2,), (1,))


def test_enumeration_examples():
    assert list(islice(enumerate_allowed_words(SubshiftSpec(), 1), 4)) == [(0,), (1,), (2,), (3,)]
    assert next(enumerate_allowed_words(spec_of((0, 1)), 2)) == (0, 0)
    assert list(islice(enumerate_allowed_words(spec_of((0,)), 1), 3)) == [(1,), (2,), (3,)]


def test_unrank_examples():
    sp = spec_of((0, 1))
    assert allowed_word(sp, 1, 0) == (0,)
    assert allowed_word(sp, 2, 0) == (0, 0)
    assert allowed_word_index(sp, (0, 0)) == 0
    with pytest.raises(ValueError):
        allowed_word_index(sp, (0, 1))


@given(bases, st.lists(st.integers(0, 3), max_size=10).map(tuple))
def test_is_allowed_matches_scan(basis, w):
    assert is_allowed(SubshiftSpec.from_words(basis), w) == allowed_naive(basis, w)


@given(bases, st.lists(st.integers(0, 3), max_size=10))
def test_automaton_first_match(basis, w):
    basis = [b for b in basis]
    if not basis:
        return
    ac = AhoCorasick(basis)
    naive = next((i for i in range(len(w)) if any(occurs(b, w[: i + 1]) for b in basis)), None)
    assert ac.first_match(w) == naive


@settings(max_examples=60)
@given(bases, st.integers(1, 3))
def test_enumeration_matches_brute_force(basis, p):
    sp = SubshiftSpec.from_words(basis)
    K = compute_safe_symbol_K(sp.basis)
    # words with max symbol <= K+1 form a prefix of the canonical order
    expected = [w for w in allowed_words_naive(basis, p, K + 1)]
    got = list(islice(enumerate_allowed_words(sp, p), len(expected)))
    assert got == expected
    for g, w in enumerate(expected):
        assert allowed_word(sp, p, g) == w
        assert allowed_word_index(sp, w) == g


@given(bases, st.lists(st.integers(0, 2), max_size=4), st.lists(st.integers(0, 2), max_size=4), st.integers(0, 4))
def test_safe_symbol_glues(basis, a, b, n):
    sp = SubshiftSpec.from_words(basis)
    K = compute_safe_symbol_K(sp.basis)
    if is_allowed(sp, a) and is_allowed(sp, b):
        assert is_allowed(sp, tuple(a) + (K,) * n + tuple(b)) or n == 0


@given(bases, st.lists(st.integers(0, 3), max_size=8).map(tuple), st.integers(0, 8), st.integers(0, 8))
def test_subword_closure(basis, w, i, j):
    sp = SubshiftSpec.from_words(basis)
    if is_allowed(sp, w):
        assert is_allowed(sp, w[min(i, j): max(i, j)])


@settings(max_examples=40)
@given(bases, st.lists(st.integers(0, 3), max_size=6).map(tuple), st.lists(st.integers(0, 3), min_size=1, max_size=5).map(tuple),
       st.integers(0, 200))
def test_prefix_in_shift_paths_agree(basis, head, tail, n):
    sp = SubshiftSpec.from_words(basis)
    x = PrefixPoint(head, PeriodicPoint(tail))
    expected = allowed_naive(basis, x.prefix(n))
    assert prefix_in_shift(sp, x, n) == expected
    assert prefix_in_shift(sp, x, n, use_segments=False) == expected


def test_basis_file_roundtrip(tmp_path):
    sp = SubshiftSpec.from_words([(0, 1), (2, 2)], 3)
    path = tmp_path / "basis.txt"
    write_basis(path, sp)
    back = read_basis(path)
    assert back.basis == sp.basis and back.gluing_constant_N == 3


def test_basis_file_errors(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("0 1\nN 2\n")
    with pytest.raises(FormatError) as exc:
        read_basis(path)
    assert exc.value.line == 2
    path.write_text("N 1\n0 z\n")
    with pytest.raises(FormatError) as exc:
        read_basis(path)
    assert exc.value.line == 2


def test_sbt_constant():
    assert SubshiftSpec.from_words([(0, 1, 2)], 2).sbt_constant == 3
    assert SubshiftSpec.from_words([(0,)], 5).sbt_constant == 5
    with pytest.raises(ValueError):
        SubshiftSpec.from_words([(0,)]).sbt_constant
