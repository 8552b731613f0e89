import json
import os
import random

import pytest
from hypothesis import given, settings, strategies as st

import hocolimcat
from hocolimcat.algebras import (
    AlgDiagram,
    AlgebraError,
    CapOverflowError,
    ChainGroupAlgebra,
    LaxMorphism,
    TableAlgebra,
    algebra_from_json,
    algebra_to_json,
    bar_degree,
    braided_profile,
    chain_lax,
    chain_lax_candidates,
    check_algebra,
    check_bar,
    check_cone,
    check_diagram,
    check_lax,
    check_monad_presentation,
    compose_lax,
    constant_alg_diagram,
    diagram_from_json,
    diagram_to_json,
    finite_sets_algebra,
    free_algebra,
    identity_lax,
    lax_agree,
    random_chain_cone,
    random_chain_diagram,
    strict_morphism,
)
from hocolimcat.cat_core import arrow, discrete, point
from hocolimcat.operads import (
    BraidMor,
    BraidOperad,
    InitialOperad,
    MonoidalWordOperad,
    PermElt,
    TranslationOperad,
    TranslationPair,
    parse_word,
)
from hocolimcat.braid import BraidWord

FIXTURES = os.path.join(os.path.dirname(hocolimcat.__file__), "fixtures")


def load_fixture(name):
    with open(os.path.join(FIXTURES, name)) as fh:
        return json.load(fh)


def sign_rule():
    return algebra_from_json(load_fixture("sigma-tilde-perm.json"), FIXTURES)


def arities(alg):
    out = {}
    for z in alg.carrier.objects():
        out[len(z.xs)] = out.get(len(z.xs), 0) + 1
    return out


# ---------------------------------------------------------------------------
# free algebras


def test_free_algebra_on_a_point_over_translation_operad():
    F = free_algebra(point(), TranslationOperad(), 3)
    assert arities(F) == {0: 1, 1: 1, 2: 1, 3: 1}


def test_free_algebra_over_initial_operad_is_the_base():
    F = free_algebra(discrete(["a", "b"]), InitialOperad(), 2)
    assert len(F.carrier.objects()) == 2
    assert sorted(x for z in F.carrier.objects() for x in z.xs) == ["a", "b"]


def test_free_algebra_on_a_point_over_two_fold_words():
    F = free_algebra(point(), MonoidalWordOperad(2), 2)
    assert arities(F) == {0: 1, 1: 1, 2: 2}


def test_free_algebra_cap_is_a_hard_error():
    op = TranslationOperad()
    F = free_algebra(point(), op, 2)
    two = [z for z in F.carrier.objects() if len(z.xs) == 2][0]
    with pytest.raises(CapOverflowError):
        F.act(op.objects(2)[0], [two, two])


@pytest.mark.parametrize("selector", ["Mk:2", "SigmaTilde", "Br"])
def test_free_algebras_satisfy_the_laws(selector):
    from hocolimcat.operads import parse_operad

    F = free_algebra(point(), parse_operad(selector), 2)
    assert check_algebra(F, max_arity=2, sample=20).passed


# ---------------------------------------------------------------------------
# evaluation


def test_unit_acts_trivially():
    for alg in (ChainGroupAlgebra(MonoidalWordOperad(2), 3, 2), sign_rule(), finite_sets_algebra(TranslationOperad())):
        for K in alg.carrier.objects()[:4]:
            assert alg.evaluate(alg.operad.unit(), [K]) == K


def test_permutative_algebra_evaluates_product_and_symmetry():
    alg = sign_rule()
    e2, tau = PermElt((1, 2)), PermElt((2, 1))
    c = alg.carrier
    for a in ("0", "1"):
        for b in ("0", "1"):
            assert alg.act(e2, [a, b]) == alg.tensor_ob(a, b)
            swap = alg.act_mor(TranslationPair(e2, tau), [c.identity(a), c.identity(b)])
            assert c.mor_eq(swap, alg.braiding(a, b))
    # the sign rule: the swap of 1 with itself is the non-trivial automorphism
    assert alg.braiding("1", "1") == "g0"


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_equivariance_on_random_inputs(seed):
    rng = random.Random(seed)
    alg = ChainGroupAlgebra(MonoidalWordOperad(2), 3, 3, rng.choice(["max", "capped-sum"]))
    op = alg.operad
    n = rng.randint(1, 4)
    a = op.random_object(rng, n)
    ks = [rng.choice(alg.carrier.objects()) for _ in range(n)]
    sigma = list(range(1, n + 1))
    rng.shuffle(sigma)
    assert alg.act(op.act(a, tuple(sigma)), ks) == alg.act(a, [ks[s - 1] for s in sigma])


def test_arity_mismatch_is_an_error():
    alg = ChainGroupAlgebra(MonoidalWordOperad(2), 2, 2)
    with pytest.raises(AlgebraError):
        alg.evaluate(parse_word("1 b1 2"), ["0"])


@pytest.mark.parametrize("make", [
    lambda: ChainGroupAlgebra(MonoidalWordOperad(2), 3, 3, "capped-sum"),
    lambda: ChainGroupAlgebra(TranslationOperad(), 2, 2),
    sign_rule,
    lambda: finite_sets_algebra(TranslationOperad(), 3),
    lambda: finite_sets_algebra(BraidOperad(), 3),
], ids=["chain-capped", "chain-translation", "sign-rule", "finite-sets", "finite-sets-braids"])
def test_algebra_laws(make):
    rep = check_algebra(make(), max_arity=3, sample=30)
    assert rep.passed, rep.to_text()


def test_broken_action_is_detected():
    base = ChainGroupAlgebra(MonoidalWordOperad(2), 2, 2)
    table = TableAlgebra.tabulate(base, 2)
    # swap one value of the binary product: associativity or equivariance must notice
    key = next(k for k in table.ob_table if k.count("|") == 2 and k.endswith("|1|0"))
    table.ob_table[key] = "0"
    assert not check_algebra(table, max_arity=2).passed


def test_table_algebra_matches_its_source():
    base = ChainGroupAlgebra(TranslationOperad(), 2, 2)
    table = TableAlgebra.tabulate(base, 2)
    assert check_algebra(table, max_arity=2).passed
    doc = algebra_to_json(table)
    again = algebra_from_json(json.loads(json.dumps(doc)))
    assert again.ob_table == table.ob_table and again.mor_table == table.mor_table


def test_monad_presentation_agrees_with_the_action():
    for alg in (ChainGroupAlgebra(MonoidalWordOperad(2), 2, 2), sign_rule()):
        assert check_monad_presentation(alg, cap=2, sample=30).passed


# ---------------------------------------------------------------------------
# lax morphisms


def chain_pair(kind="max", op=None):
    op = op or MonoidalWordOperad(2)
    return ChainGroupAlgebra(op, 3, 3, kind, name="S"), ChainGroupAlgebra(op, 3, 3, "max", name="T")


def test_strict_homomorphism_is_lax():
    S, _ = chain_pair()
    assert check_lax(identity_lax(S)).passed


def test_corrupted_unit_cell_is_reported():
    S, _ = chain_pair()
    good = identity_lax(S)

    def cell(a, ks):
        if len(ks) == 1 and ks[0] == "1":
            return S.mor(1, 1, 1)
        return good.cell(a, ks)

    rep = check_lax(LaxMorphism(S, S, good.ob, good.mor, cell, "broken"))
    assert "unit cell" in rep.failed_laws()


def test_chain_lax_morphisms_pass_for_every_candidate():
    S, T = chain_pair("capped-sum")
    cands = chain_lax_candidates(S, T)
    assert cands
    for h in cands:
        assert check_lax(chain_lax(S, T, h, 2), max_arity=3).passed


def test_non_multiplicative_cells_are_reported():
    S, T = chain_pair()
    good = chain_lax(S, T, (0, 1, 2), 1)

    def cell(a, ks):
        c = good.cell(a, ks)
        lo, hi, _ = T.parts[c]
        return T.mor(lo, hi, (len(ks) - 1) ** 2)

    rep = check_lax(LaxMorphism(S, T, good.ob, good.mor, cell, "square"))
    assert "multiplicativity" in rep.failed_laws()
    assert "unit cell" not in rep.failed_laws()


def test_compose_with_identity_is_unchanged():
    S, T = chain_pair("capped-sum")
    f = chain_lax(S, T, chain_lax_candidates(S, T)[-1], 1)
    assert lax_agree(compose_lax(f, identity_lax(S)), f) == []
    assert lax_agree(compose_lax(identity_lax(T), f), f) == []


def test_strict_composite_is_strict():
    S, T = chain_pair()
    f = strict_morphism(S, T, lambda x: x, lambda m: m)
    g = strict_morphism(T, T, lambda x: x, lambda m: m)
    gf = compose_lax(g, f)
    for a in S.operad.objects(2):
        for ks in (("0", "1"), ("2", "2")):
            assert gf.cell(a, ks) == T.carrier.identity(T.act(a, ks))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_lax_composition_is_associative(seed):
    rng = random.Random(seed)
    op = MonoidalWordOperad(2)
    algs = [ChainGroupAlgebra(op, rng.randint(1, 3), 3, rng.choice(["max", "capped-sum"])) for _ in range(4)]
    fs = [chain_lax(s, t, rng.choice(chain_lax_candidates(s, t)), rng.randrange(3)) for s, t in zip(algs, algs[1:])]
    left = compose_lax(fs[2], compose_lax(fs[1], fs[0]))
    right = compose_lax(compose_lax(fs[2], fs[1]), fs[0])
    assert lax_agree(left, right, max_arity=3) == []
    assert check_lax(left, max_arity=2).passed


# ---------------------------------------------------------------------------
# diagrams and cones


def test_constant_diagram_passes():
    S, _ = chain_pair()
    assert check_diagram(constant_alg_diagram(arrow(), S)).passed


def test_bad_arrow_is_located():
    S, T = chain_pair()
    good = chain_lax(S, T, (0, 1, 2), 1, name="a")

    def cell(a, ks):
        c = good.cell(a, ks)
        lo, hi, _ = T.parts[c]
        return T.mor(lo, hi, (len(ks) - 1) ** 2)

    L = arrow()
    bad = LaxMorphism(S, T, good.ob, good.mor, cell, "a")
    arrow_id = next(u for u in L.src if not L.is_identity(u))
    X = AlgDiagram(L, {"0": S, "1": T}, {L.identity["0"]: identity_lax(S), L.identity["1"]: identity_lax(T),
                                         arrow_id: bad})
    rep = check_diagram(X)
    assert "multiplicativity" in rep.failed_laws()
    assert all(arrow_id in f.witness for f in rep.findings if f.law == "multiplicativity")


SHAPES = ["arrow", "chain3", "span", "cospan", "discrete2", "z2"]


@pytest.mark.parametrize("shape", SHAPES)
def test_random_chain_diagrams_and_cones(shape):
    rng = random.Random(SHAPES.index(shape))
    X = random_chain_diagram(rng, MonoidalWordOperad(2), shape)
    assert check_diagram(X, max_arity=2).passed
    k = random_chain_cone(rng, X, ChainGroupAlgebra(X.operad, 3, 3, name="S"))
    assert k is not None
    assert check_cone(k, max_arity=2).passed


def test_broken_cocycle_is_reported():
    rng = random.Random(3)
    X = random_chain_diagram(rng, MonoidalWordOperad(2), "chain3")
    S = ChainGroupAlgebra(X.operad, 3, 3, name="S")
    k = random_chain_cone(rng, X, S)
    good = k.cells["0<2"]
    k.cells["0<2"] = lambda x: S.carrier.compose(S.mor(0, 0, 1), good(x)) if S.parts[good(x)][0] == 0 else good(x)
    assert not check_cone(k, max_arity=1).passed


def test_shipped_square_diagram_and_cone():
    doc = load_fixture("m2-square.json")
    X = diagram_from_json(doc, FIXTURES)
    assert check_diagram(X, max_arity=2).passed
    round_trip = diagram_from_json(json.loads(json.dumps(diagram_to_json(X))), FIXTURES)
    for u in X.index.src:
        assert lax_agree(round_trip.on(u), X.on(u)) == []


# ---------------------------------------------------------------------------
# bar construction


def test_bar_identities_over_translation_operad():
    rep = check_bar(finite_sets_algebra(TranslationOperad(), 2), top=2, cap=2, samples=10)
    assert rep.passed, rep.to_text()
    assert rep.checked["d0s-1=id"] > 0
    assert rep.checked["d0d1=d0d0"] > 0


def test_bar_degree_zero_over_initial_operad():
    base = ChainGroupAlgebra(InitialOperad(), 3, 2)
    B0, faces, degens = bar_degree(base, 0, 2)
    assert len(B0.carrier.objects()) == len(base.carrier.objects())
    d0 = faces[0][0]
    for z in B0.carrier.objects():
        assert d0(z) == z.xs[0]
    s = degens[0][0]
    for x in base.carrier.objects():
        assert d0(s(x)) == x


def test_bar_degree_is_bounded():
    with pytest.raises(AlgebraError):
        bar_degree(finite_sets_algebra(TranslationOperad(), 2), 4, 2)


# ---------------------------------------------------------------------------
# braided profile


def test_finite_sets_are_braided_over_positive_braids():
    alg = finite_sets_algebra(BraidOperad(positive=True), 3)
    rep = braided_profile(alg, objects=[0, 1, 2])
    assert rep.passed, rep.to_text()


def test_profile_rejects_a_twisted_braiding():
    alg = finite_sets_algebra(BraidOperad(positive=True), 3)
    good = alg.braiding
    alg.braiding = lambda a, b: good(b, a) if a != b else good(a, b)
    assert not braided_profile(alg, objects=[0, 1, 2]).passed


def test_profile_needs_a_braid_operad():
    with pytest.raises(AlgebraError):
        braided_profile(sign_rule())


def test_braid_crossing_acts_by_the_braiding():
    alg = finite_sets_algebra(BraidOperad(), 3)
    c = alg.carrier
    m = alg.act_mor(BraidMor(PermElt((1, 2)), BraidWord.of(2, 1)), [c.identity(1), c.identity(2)])
    assert c.mor_eq(m, alg.braiding(1, 2))
