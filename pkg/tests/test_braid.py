import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from hocolimcat.braid import (
    BraidError,
    BraidWord,
    block_decompose,
    block_sum,
    braid_equal,
    braid_equal_bfs,
    braid_equal_garside,
    delete_strands,
    garside_normal_form,
    identity_braid,
    normal_word,
    perm_block_sum,
    perm_identity,
    permutation_braid,
    positive_class,
    transposition,
    underlying_permutation,
)

W = BraidWord.of


def words(max_n=4, max_len=8, positive=False):
    signs = st.just(1) if positive else st.sampled_from([1, -1])

    @st.composite
    def build(draw):
        n = draw(st.integers(2, max_n))
        letters = draw(st.lists(st.tuples(st.integers(1, n - 1), signs), max_size=max_len))
        return BraidWord(n, tuple(letters))

    return build()


def test_braid_relation():
    assert braid_equal(W(3, 1, 2, 1), W(3, 2, 1, 2))


def test_distant_commutation():
    assert braid_equal(W(4, 1, 3), W(4, 3, 1))


def test_length_is_invariant_in_monoid():
    assert not braid_equal(W(2, 1, 1), W(2, 1))


def test_strand_mismatch_raises():
    with pytest.raises(BraidError):
        braid_equal(W(2, 1), W(3, 1))


def test_underlying_permutation_examples():
    assert underlying_permutation(W(2, 1)) == (2, 1)
    assert underlying_permutation(W(3, 1, 2, 1)) == (3, 2, 1)
    assert underlying_permutation(identity_braid(4)) == perm_identity(4)


def test_block_sum_examples():
    assert str(block_sum([W(2, 1), W(2, 1)])) == "s1 s3"
    assert block_sum([identity_braid(1), W(2, 1)]) == W(3, 2)


def test_block_sum_commutes_with_permutation():
    rng = random.Random(7)
    for _ in range(20):
        a, b = rng.randint(1, 4), rng.randint(1, 4)
        u = BraidWord(a, tuple((rng.randint(1, a - 1), rng.choice([1, -1])) for _ in range(rng.randint(0, 5) if a > 1 else 0)))
        v = BraidWord(b, tuple((rng.randint(1, b - 1), rng.choice([1, -1])) for _ in range(rng.randint(0, 5) if b > 1 else 0)))
        assert underlying_permutation(block_sum([u, v])) == perm_block_sum(
            [underlying_permutation(u), underlying_permutation(v)])


def test_text_round_trip():
    w = BraidWord.parse(3, "s1 s2^-1 s1")
    assert w == W(3, 1, -2, 1)
    assert BraidWord.parse(3, str(w)) == w
    assert BraidWord.parse(3, "e") == identity_braid(3)
    with pytest.raises(BraidError):
        BraidWord.parse(3, "s3")


def test_garside_agrees_with_bfs_exhaustively():
    # partitions of all positive words (length <= 6, <= 4 strands) must coincide
    for n in (2, 3, 4):
        for length in range(7):
            by_nf: dict = {}
            for letters in itertools.product(range(1, n), repeat=length):
                w = BraidWord(n, tuple((i, 1) for i in letters))
                by_nf.setdefault(garside_normal_form(w), set()).add(letters)
            for cls in by_nf.values():
                rep = next(iter(cls))
                assert positive_class(BraidWord(n, tuple((i, 1) for i in rep))) == frozenset(cls)


@settings(max_examples=150, deadline=None)
@given(words())
def test_normal_form_idempotent_and_faithful(w):
    nf = normal_word(w)
    assert normal_word(nf) == nf
    assert braid_equal_garside(nf, w, cap=None)
    assert underlying_permutation(nf) == underlying_permutation(w)


@settings(max_examples=150, deadline=None)
@given(words())
def test_group_inverse(w):
    assert braid_equal(w * w.inverse(), identity_braid(w.n))
    assert braid_equal(w.inverse() * w, identity_braid(w.n))


@settings(max_examples=100, deadline=None)
@given(words(max_n=3, max_len=5, positive=True), st.data())
def test_congruence(u, data):
    # build v equal to u by one relation application, then multiply on both sides
    cls = sorted(positive_class(u))
    v = BraidWord(u.n, tuple((i, 1) for i in data.draw(st.sampled_from(cls))))
    w = data.draw(st.lists(st.tuples(st.integers(1, u.n - 1), st.sampled_from([1, -1])), max_size=4))
    w = BraidWord(u.n, tuple(w))
    assert braid_equal(u * w, v * w)
    assert braid_equal(w * u, w * v)


@settings(max_examples=100, deadline=None)
@given(words(positive=True, max_len=6), words(positive=True, max_len=6))
def test_positive_equality_preserves_length_and_permutation(u, v):
    if u.n == v.n and braid_equal(u, v):
        assert len(u) == len(v)
        assert underlying_permutation(u) == underlying_permutation(v)


def test_positive_normal_form_stays_positive():
    for letters in itertools.product(range(1, 4), repeat=4):
        w = BraidWord(4, tuple((i, 1) for i in letters))
        assert normal_word(w).positive


def test_permutation_braid_is_reduced():
    for p in itertools.permutations(range(1, 5)):
        b = permutation_braid(p)
        assert b.positive
        assert underlying_permutation(b) == p
    assert len(permutation_braid(transposition(3, 2))) == 1


def test_delete_strands_on_pure_braid():
    # in s1 s2 s2 s1 strand 1 crosses each other strand twice; strands 2 and 3 never meet
    w = W(3, 1, 2, 2, 1)
    assert braid_equal(delete_strands(w, [1, 3]), W(2, 1, 1))
    assert braid_equal(delete_strands(w, [1, 2]), W(2, 1, 1))
    assert braid_equal(delete_strands(w, [2, 3]), identity_braid(2))


def test_block_decompose():
    parts = block_decompose(W(4, 1, 3, -1), [2, 2])
    assert parts is not None
    assert braid_equal(parts[0], identity_braid(2))
    assert braid_equal(parts[1], W(2, 1))
    # pure braid that links the two blocks
    assert block_decompose(W(4, 2, 2), [2, 2]) is None
    assert block_decompose(W(4, 2), [2, 2]) is None
