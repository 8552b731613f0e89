import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from hocolimcat.braid import BraidWord, braid_equal, identity_braid, perm_identity
from hocolimcat.cat_core import arrow, point
from hocolimcat.operads import (
    BraidMor,
    BraidOperad,
    FaultyOperad,
    FreeOperad,
    InitialOperad,
    MonoidalWord,
    MonoidalWordOperad,
    NonFreeActionError,
    OperadError,
    PermElt,
    PosetWitness,
    TranslationOperad,
    TranslationPair,
    beta_map,
    cable,
    check_factorization,
    check_free_action,
    check_operad_axioms,
    check_operad_map,
    factorization_initial,
    iota_map,
    lambda_map,
    mu_map,
    one_object_binary_collection,
    operad_map_apply,
    parse_operad,
    parse_word,
    word_restrict,
)

M2 = MonoidalWordOperad(2)
W = M2.parse


def brute_force_words(n, k):
    """All words via fully bracketed binary expressions, flattened by a separate routine."""

    def exprs(leaves):
        if len(leaves) == 1:
            yield str(leaves[0])
            return
        for cut in range(1, len(leaves)):
            for left in exprs(leaves[:cut]):
                for right in exprs(leaves[cut:]):
                    for i in range(1, k + 1):
                        yield f"({left} b{i} {right})"

    out = set()
    for p in itertools.permutations(range(1, n + 1)):
        for e in exprs(list(p)):
            out.add(parse_word(e).tree)
    return out


def test_substitution_example():
    assert M2.substitute(W("1 b1 2"), [W("1 b2 2"), W("1")]) == W("(1 b2 2) b1 3")


def test_action_example():
    assert M2.act(W("1 b1 2"), (2, 1)) == W("2 b1 1")


def test_box_notation_is_accepted():
    assert parse_word("(1□₂3)□₁(2□₂4)") == W("(1 b2 3) b1 (2 b2 4)")


def test_parse_errors_name_column():
    with pytest.raises(OperadError, match="column"):
        parse_word("1 b1 2 b2 3")
    with pytest.raises(OperadError):
        parse_word("1 b1 1")


def test_m2_of_two():
    objs = M2.objects(2)
    assert len(objs) == 4
    non_identity = [(a, b) for a in objs for b in objs if a != b and M2.hom_witness(a, b)]
    assert len(non_identity) == 4


def test_hom_examples():
    assert M2.hom_witness(W("1 b1 2"), W("2 b2 1")) is not None
    assert M2.hom_witness(W("1 b2 2"), W("2 b1 1")) is None


def test_orbits_of_m2_of_two():
    orbits = {frozenset(M2.act(a, s) for s in [(1, 2), (2, 1)]) for a in M2.objects(2)}
    assert sorted(map(len, orbits)) == [2, 2]


@pytest.mark.parametrize("k,n", [(1, 3), (2, 3), (2, 4), (3, 3)])
def test_word_enumeration_matches_bracketing_oracle(k, n):
    op = MonoidalWordOperad(k)
    assert {w.tree for w in op.objects(n)} == brute_force_words(n, k)


@pytest.mark.parametrize("m", range(1, 6))
def test_m1_is_discrete(m):
    op = MonoidalWordOperad(1)
    objs = op.objects(m)
    assert len(objs) == math.factorial(m)
    assert all(op.hom_witness(a, b) is None for a in objs for b in objs if a != b)


@pytest.mark.parametrize("k,m", [(2, 3), (2, 4), (3, 3)])
def test_words_form_a_poset(k, m):
    op = MonoidalWordOperad(k)
    objs = op.objects(m)
    up = {a: {b for b in objs if op.leq(a, b)} for a in objs}
    for a in objs:
        assert a in up[a]
        for b in up[a]:
            assert a == b or a not in up[b]
            assert up[b] <= up[a]


def test_restriction_examples():
    g = W("(1 b2 3) b1 (2 b2 4)")
    assert word_restrict(g, {1, 2}) == W("1 b1 2")
    assert word_restrict(g, {1, 2, 3, 4}) == g
    assert word_restrict(W("1 b1 2 b1 3"), {2}) == MonoidalWord(1)
    assert word_restrict(g, set()) == MonoidalWord(0)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 5))
def test_restriction_composes(seed, n):
    rng = random.Random(seed)
    g = M2.random_object(rng, n)
    S = sorted(rng.sample(range(1, n + 1), rng.randint(1, n)))
    T = sorted(rng.sample(range(1, len(S) + 1), rng.randint(1, len(S))))
    assert word_restrict(word_restrict(g, S), T) == word_restrict(g, [S[t - 1] for t in T])


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 5))
def test_restriction_is_monotone(seed, n):
    rng = random.Random(seed)
    a = M2.random_object(rng, n)
    b = M2.random_morphism(rng, a).target
    S = rng.sample(range(1, n + 1), rng.randint(1, n))
    assert M2.leq(word_restrict(a, S), word_restrict(b, S))


def test_sigma_tilde_identity_substitution():
    op = TranslationOperad()
    e = lambda n: PermElt(perm_identity(n))
    assert op.substitute(e(2), [e(2), e(3)]) == e(5)
    assert op.hom_witness(e(2), PermElt((2, 1))) == TranslationPair(e(2), PermElt((2, 1)))


def test_sigma_hat_has_no_nullary():
    assert TranslationOperad(False).objects(0) == []
    with pytest.raises(OperadError):
        TranslationOperad(False).substitute(PermElt((1,)), [PermElt(())])


def test_sigma_tilde_substitution_matches_word_reading():
    # the leaf sequence of B∗C must be what grafting the leaf sequences gives
    lam = lambda_map(2)
    rng = random.Random(3)
    for _ in range(200):
        n = rng.randint(1, 3)
        a = M2.random_object(rng, n)
        bs = [M2.random_object(rng, rng.randint(0, 3)) for _ in range(n)]
        assert lam(M2.substitute(a, bs)) == lam.target.substitute(lam(a), [lam(b) for b in bs])


def test_lambda_and_beta_examples():
    assert operad_map_apply("lambda", W("2 b1 1")) == PermElt((2, 1))
    b = operad_map_apply("beta", PosetWitness(W("1 b1 2"), W("2 b2 1")))
    assert braid_equal(b.word, BraidWord.of(2, 1))
    b = operad_map_apply("beta", PosetWitness(W("1 b1 2"), W("1 b2 2")))
    assert braid_equal(b.word, identity_braid(2))


def test_free_operad_counts():
    free = FreeOperad(one_object_binary_collection())
    assert len(free.objects(3)) == 12
    assert len(free.objects(1)) == 1
    unary = FreeOperad({1: point()}, node_cap=0)
    assert [len(unary.objects(n, node_cap=0)) for n in (1, 2)] == [1, 0]


def test_non_free_action_is_rejected():
    c = point()
    with pytest.raises(NonFreeActionError):
        check_free_action(c, 2, {(2, 1): ({"*": "*"}, {"id*": "id*"})})


def test_cable_of_single_crossing():
    # one crossing of a 2-ribbon over a 1-ribbon is a positive 3-strand braid with two letters
    w = cable(BraidWord.of(2, 1), [2, 1])
    assert w.n == 3 and len(w) == 2 and w.positive


def test_braid_morphism_substitution_targets():
    op = BraidOperad()
    g = BraidMor(PermElt((2, 1)), BraidWord.of(2, 1, -1, 1))
    f1 = BraidMor(PermElt((1, 2)), BraidWord.of(2, 1))
    f2 = op.identity(PermElt((1,)))
    h = op.mor_substitute(g, [f1, f2])
    assert h.source == op.substitute(g.source, [f1.source, f2.source])
    assert h.target == op.substitute(g.target, [f1.target, f2.target])


def test_factorization_examples():
    A, B = W("1 b1 2 b1 3 b1 4"), W("1 b1 2")
    C = [W("1 b1 2")] * 2
    init = factorization_initial(M2, A, B, (2, 2), PosetWitness(A, M2.substitute(B, C)), C)
    assert init.objects == (W("1 b1 2"), W("1 b1 2"))
    assert init.rho == M2.identity(A)
    A = W("(1 b2 2) b1 (3 b2 4)")
    C = [W("1 b2 2")] * 2
    init = factorization_initial(M2, A, B, (2, 2), PosetWitness(A, M2.substitute(B, C)))
    assert init.objects == (W("1 b2 2"), W("1 b2 2"))
    tilde = TranslationOperad()
    cs = [PermElt((2, 1)), PermElt((1,))]
    b = PermElt((1, 2))
    a = PermElt((3, 1, 2))
    gamma = TranslationPair(a, tilde.substitute(b, cs))
    init = factorization_initial(tilde, a, b, (2, 1), gamma, cs)
    assert init.objects == tuple(cs)
    assert init.comparisons == tuple(tilde.identity(c) for c in cs)


def test_factorization_is_idempotent():
    rng = random.Random(5)
    for _ in range(100):
        b = M2.random_object(rng, 2)
        rs = (rng.randint(0, 2), rng.randint(0, 2))
        cs = [M2.random_object(rng, r) for r in rs]
        target = M2.substitute(b, cs)
        below = [a for a in M2.objects(sum(rs)) if M2.leq(a, target)]
        a = rng.choice(below)
        init = factorization_initial(M2, a, b, rs, PosetWitness(a, target), cs)
        again = factorization_initial(M2, a, b, rs, init.rho, list(init.objects))
        assert again.objects == init.objects


@pytest.mark.parametrize(
    "op",
    [InitialOperad(), MonoidalWordOperad(2), TranslationOperad(), TranslationOperad(False),
     BraidOperad(), BraidOperad(True), FreeOperad(one_object_binary_collection())],
    ids=lambda o: o.name,
)
def test_axioms_hold(op):
    report = check_operad_axioms(op, m_max=3, sample=60)
    assert report.passed, report.to_text()


def test_axiom_checker_catches_corrupted_table():
    report = check_operad_axioms(FaultyOperad(MonoidalWordOperad(2)), m_max=3, sample=20)
    assert not report.passed
    assert "associativity" in report.failed_laws()


def test_free_operad_on_arrow_collection():
    free = FreeOperad({2: arrow()})
    assert check_operad_axioms(free, m_max=3, sample=60).passed
    assert check_factorization(free, m_max=3).passed


@pytest.mark.parametrize(
    "op,m",
    [(MonoidalWordOperad(2), 3), (TranslationOperad(), 3), (BraidOperad(), 3),
     (FreeOperad(one_object_binary_collection()), 3)],
    ids=lambda o: getattr(o, "name", str(o)),
)
def test_factorization_condition(op, m):
    report = check_factorization(op, m_max=m, sample=60 if isinstance(op, BraidOperad) else None)
    assert report.passed, report.to_text()


def test_braid_factorization_rejects_linked_blocks():
    op = BraidOperad()
    b = PermElt((1, 2))
    cs = [PermElt((1,)), PermElt((1,))]
    target = op.substitute(b, cs)
    alpha = op.identity(target)
    twist = BraidMor(target, BraidWord.of(2, 1, 1))
    assert op.factorization_morphisms(b, (tuple(cs), alpha), (tuple(cs), op.compose(twist, alpha))) == []
    assert len(op.factorization_morphisms(b, (tuple(cs), alpha), (tuple(cs), alpha))) == 1


@pytest.mark.parametrize("f", [lambda_map(2), iota_map(2), mu_map()], ids=lambda f: f.name)
def test_operad_maps(f):
    assert check_operad_map(f, m_max=3, sample=80).passed


def test_beta_preserves_composition_small():
    assert check_operad_map(beta_map(), m_max=3, sample=50).passed


def test_selectors():
    assert parse_operad("Mk:3").k == 3
    assert parse_operad("Minf:2").k == 2
    assert parse_operad("SigmaHat").objects(0) == []
    assert parse_operad("BrPlus").positive
    assert isinstance(parse_operad("initial"), InitialOperad)
    with pytest.raises(OperadError):
        parse_operad("nope")
