import itertools
import json
import os
import random

import pytest
from hypothesis import given, settings, strategies as st

import hocolimcat
from hocolimcat.algebras import (
    ChainGroupAlgebra,
    chain_cone,
    check_algebra,
    check_cone,
    check_lax,
    constant_alg_diagram,
    diagram_from_json,
    free_algebra,
    random_chain_cone,
    random_chain_diagram,
)
from hocolimcat.braid import perm_inverse
from hocolimcat.cat_core import (
    CatDiagram,
    Functor,
    NatTransformation,
    arrow,
    compose_functors,
    identity_functor,
    iso_categories,
    linear_order,
    point,
    product,
)
from hocolimcat.hocolim import (
    HCObject,
    Hocolim,
    HocolimError,
    InducedR,
    RawMorphism,
    change_index,
    check_modification,
    check_natural,
    check_universal,
    decompose_atoms,
    eval_counit,
    grothendieck_case,
    hc_act,
    hc_compose,
    hc_object,
    identity_cone,
    induced_r,
    morphism_to_json,
    perturbations,
    raw_from_json,
    strictify,
    tau_star,
    two_cell_t,
    universal_cone,
    universal_j,
    universal_samples,
)
from hocolimcat.operads import BraidOperad, MonoidalWordOperad, PermElt, TranslationOperad
from hocolimcat.samples import monotone_maps, seeded_diagrams, thin_functor

FIXTURES = os.path.join(os.path.dirname(hocolimcat.__file__), "fixtures")


def fixture(name):
    with open(os.path.join(FIXTURES, name)) as fh:
        return json.load(fh)


def square():
    return Hocolim(diagram_from_json(fixture("m2-square.json"), FIXTURES))


SQUARE = square()
PAIRS = [(K, l) for l in SQUARE.L.objects for K in SQUARE.alg(l).carrier.objects()]


def chain_hocolim(op, shape="arrow", seed=0):
    return Hocolim(random_chain_diagram(random.Random(seed), op, shape))


def samples(H, count, seed=0, max_arity=2):
    rng = random.Random(seed)
    objs = H.objects(max_arity)
    return [H.random_morphism(rng, rng.choice(objs)) for _ in range(count)]


def chains(H, count, seed=0):
    """Composable triples w, v, u."""
    rng = random.Random(seed)
    objs = H.objects(2)
    out = []
    for _ in range(count):
        u = H.random_morphism(rng, rng.choice(objs))
        v = H.random_morphism(rng, u.target)
        w = H.random_morphism(rng, v.target)
        out.append((w, v, u))
    return out


# ---------------------------------------------------------------------------
# objects


def test_normalized_object_is_unchanged():
    H = square()
    for y in H.objects(2):
        assert hc_object(H, y.A, y.pairs) == y


def test_object_relation_swaps_pairs():
    H = square()
    op = H.op
    p, q = ("0", "(0,0)"), ("2", "(1,1)")
    for a in op.objects(2):
        assert hc_object(H, op.act(a, (2, 1)), [p, q]) == hc_object(H, a, [q, p])


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_object_presentations_normalize_to_one_class(data):
    H = SQUARE
    op = H.op
    n = data.draw(st.integers(1, 3))
    a = data.draw(st.sampled_from(op.objects(n)))
    pairs = data.draw(st.lists(st.sampled_from(PAIRS), min_size=n, max_size=n))
    sigma = tuple(data.draw(st.permutations(range(1, n + 1))))
    inv = perm_inverse(sigma)
    y = hc_object(H, op.act(a, sigma), pairs)
    assert y == hc_object(H, a, [pairs[i - 1] for i in inv])
    assert hc_object(H, y.A, y.pairs) == y


def test_translation_operad_representative_is_the_identity_permutation():
    H = chain_hocolim(TranslationOperad())
    l = H.L.objects[0]
    K1, K2 = H.alg(l).carrier.objects()[0], H.alg(l).carrier.objects()[-1]
    y = hc_object(H, PermElt((2, 1)), [(K1, l), (K2, l)])
    assert y == HCObject(PermElt((1, 2)), ((K2, l), (K1, l)))


def test_product_of_generators_over_translation_operad():
    H = chain_hocolim(TranslationOperad())
    L0, L1 = H.L.objects[0], H.L.objects[-1]
    K, K2 = H.alg(L0).carrier.objects()[0], H.alg(L1).carrier.objects()[0]
    e1 = PermElt((1,))
    y = hc_act(H, PermElt((1, 2)), [HCObject(e1, ((K, L0),)), HCObject(e1, ((K2, L1),))])
    assert y == HCObject(PermElt((1, 2)), ((K, L0), (K2, L1)))


@pytest.mark.parametrize("make", [square, lambda: chain_hocolim(TranslationOperad(), "span")], ids=["M2", "Sigma"])
def test_action_is_unital_and_equivariant(make):
    H = make()
    op = H.op
    rng = random.Random(1)
    objs = H.objects(2)
    for y in objs:
        assert H.act(op.unit(), [y]) == y
    for _ in range(40):
        n = rng.randint(1, 3)
        b = op.random_object(rng, n)
        ys = [rng.choice(objs) for _ in range(n)]
        sigma = list(range(1, n + 1))
        rng.shuffle(sigma)
        inv = perm_inverse(tuple(sigma))
        assert H.act(op.act(b, tuple(sigma)), ys) == H.act(b, [ys[s - 1] for s in inv])


# ---------------------------------------------------------------------------
# morphisms: normal forms


def raw_of(m):
    return RawMorphism(m.source.A, m.source.pairs, m.target.A, m.target.pairs, [list(f) for f in m.fibers()],
                       list(m.cs), m.gamma, list(m.lams), list(m.fs))


def test_identity_is_fixed_by_normalization():
    H = square()
    for y in H.objects(2):
        i = H.identity(y)
        assert H.equal(H.normalize(raw_of(i)), i)
        assert H.is_identity(i)


def test_factor_move_gives_the_same_morphism():
    # push every factor C_k up along α_k: C_k → C'_k; chain-group algebras act
    # by identities on operad morphisms, so the f's are unchanged
    H = square()
    op = H.op
    rng = random.Random(5)
    moved = 0
    for m in samples(H, 60, seed=2):
        alphas = [op.random_morphism(rng, c) for c in m.cs]
        sigma = perm_inverse(m.sigma_inverse())
        beta = op.mor_act(op.mor_substitute(op.identity(m.target.A), alphas), sigma)
        raw = raw_of(m)
        raw.cs = [op.target(a) for a in alphas]
        raw.gamma = op.compose(beta, m.gamma)
        moved += any(op.target(a) != c for a, c in zip(alphas, m.cs))
        assert H.equal(H.normalize(raw), m)
    assert moved > 0


def test_source_presentation_move_gives_the_same_morphism():
    # present the source as (A·ρ; P) with (A·ρ; P) ~ (A; Q) and renumber the data
    H = square()
    op = H.op
    rng = random.Random(7)
    for m in samples(H, 40, seed=3):
        n = m.source.arity
        rho = list(range(1, n + 1))
        rng.shuffle(rho)
        rho = tuple(rho)
        rho_inv = perm_inverse(rho)
        A = op.act(m.source.A, rho)
        P = tuple(m.source.pairs[rho[j] - 1] for j in range(n))
        assert hc_object(H, A, P) == m.source
        raw = RawMorphism(A, P, m.target.A, m.target.pairs, [[rho_inv[i - 1] for i in f] for f in m.fibers()],
                          list(m.cs), op.mor_act(m.gamma, rho), [m.lams[rho[j] - 1] for j in range(n)], list(m.fs))
        assert H.equal(H.normalize(raw), m)


# ---------------------------------------------------------------------------
# composition


@pytest.mark.parametrize("make", [
    square,
    lambda: chain_hocolim(TranslationOperad(), "chain3", seed=4),
    lambda: chain_hocolim(BraidOperad(), "arrow", seed=2),
], ids=["M2", "Sigma", "Br"])
def test_composition_is_associative_and_unital(make):
    H = make()
    for w, v, u in chains(H, 25):
        assert H.equal(H.compose(w, H.compose(v, u)), H.compose(H.compose(w, v), u))
        assert H.equal(H.compose(u, H.identity(u.source)), u)
        assert H.equal(H.compose(H.identity(u.target), u), u)


@pytest.mark.parametrize("make", [square, lambda: chain_hocolim(TranslationOperad(), "span", seed=1)],
                         ids=["M2", "Sigma"])
def test_hocolim_is_an_algebra(make):
    H = make()
    rep = check_algebra(H.algebra, max_arity=2, sample=15)
    assert rep.passed, rep.to_text()


def test_example_composition_replay():
    doc = fixture("example-4-2.json")
    X = diagram_from_json(doc["diagram"], FIXTURES)
    H = Hocolim(X)
    op, L = H.op, H.L
    r1, r2, r3 = (raw_from_json(H, doc[k]) for k in ("morphism1", "morphism2", "composite"))
    m1, m2 = H.normalize(r1), H.normalize(r2)
    # increasing fibers and the permutation they induce
    assert r1.fibers == [[2, 4, 6], [1, 5], [], [3, 7]]
    assert tuple(i for f in r1.fibers for i in f) == (2, 4, 6, 1, 5, 3, 7)
    assert sorted(i for f in m1.fibers() for i in f) == list(range(1, 8))
    # the stored composite follows the composition formulas
    fib1, fib2 = r1.fibers, r2.fibers
    assert r3.cs == [op.substitute(r2.cs[k], [r1.cs[j - 1] for j in fib2[k]]) for k in range(3)]
    assert r3.fibers == [[i for j in fib2[k] for i in fib1[j - 1]] for k in range(3)]
    phi1 = {i: k + 1 for k, f in enumerate(fib1) for i in f}
    assert r3.lams == [L.table[(r2.lams[phi1[i] - 1], r1.lams[i - 1])] for i in range(1, 8)]
    sigma1 = perm_inverse(r1.sigma_inverse())
    g3 = op.compose(op.mor_act(op.mor_substitute(r2.gamma, [op.identity(c) for c in r1.cs]), sigma1), r1.gamma)
    assert op.mor_equal(g3, r3.gamma)
    # and composing in the homotopy colimit gives the same class
    assert H.equal(hc_compose(H, m2, m1), H.normalize(r3))


def test_morphism_json_round_trip():
    H = square()
    for m in samples(H, 20, seed=8):
        again = H.normalize(raw_from_json(H, json.loads(json.dumps(morphism_to_json(H, m)))))
        assert H.equal(again, m)


# ---------------------------------------------------------------------------
# atoms


def test_identity_decomposes_to_nothing():
    H = square()
    y = H.objects(2)[-1]
    assert decompose_atoms(H, H.identity(y)) == []


def test_index_atom_decomposes_to_itself():
    H = square()
    u = next(u for u in H.L.src if not H.L.is_identity(u))
    K = H.alg(H.L.src[u]).carrier.objects()[1]
    atom = H.index_atom(u, K)
    parts = decompose_atoms(H, atom)
    assert len(parts) == 1 and parts[0].kind == "index" and H.equal(parts[0].morphism, atom)


def test_decomposition_round_trip():
    H = square()
    kinds = set()
    for m in samples(H, 50, seed=11):
        atoms = H.decompose(m)
        kinds.update(a.kind for a in atoms)
        assert H.equal(H.recompose(atoms, m.source), m)
    assert kinds == {"operad", "index", "evaluation", "carrier"}


# ---------------------------------------------------------------------------
# universal property


def square_cone(H):
    doc = fixture("m2-square.json")["cone"]
    S = ChainGroupAlgebra(H.op, doc["target"]["size"], doc["target"]["order"], doc["target"].get("kind", "max"))
    return chain_cone(H.X, S, {o: (tuple(v["h"]), v["t"]) for o, v in doc["legs"].items()})


def test_universal_leg_on_objects_and_cells():
    H = square()
    for l in H.L.objects:
        j = universal_j(H, l)
        for K in H.alg(l).carrier.objects():
            assert j.ob(K) == HCObject(H.op.unit(), ((K, l),))
        a = H.op.objects(2)[0]
        Ks = H.alg(l).carrier.objects()[:2]
        assert H.equal(j.cell(a, Ks), H.evaluation_atom(a, Ks, l))


def test_universal_cone_is_a_cone():
    H = square()
    objs = {l: H.alg(l).carrier.objects() for l in H.L.objects}
    assert check_lax(universal_j(H, "(0,0)"), max_arity=2, objects=objs["(0,0)"]).passed
    assert check_cone(universal_cone(H), max_arity=2, objects=objs).passed


def test_induced_homomorphism_restricts_to_the_cone():
    H = square()
    k = square_cone(H)
    assert check_cone(k, max_arity=2).passed
    r = induced_r(H, k)
    for l in H.L.objects:
        for K in H.alg(l).carrier.objects():
            assert r.ob(HCObject(H.op.unit(), ((K, l),))) == k.legs[l].ob(K)
    rep = check_universal(H, k, r)
    assert rep.passed, rep.to_text()


def test_every_perturbation_breaks_a_defining_equation():
    H = square()
    k = square_cone(H)
    pool = universal_samples(H, seed=0)
    ps = perturbations(H, k, 10, samples=pool)
    assert len(ps) == 10
    assert len({tuple(sorted(p.overrides)) for p in ps}) == 10
    for p in ps:
        assert not check_universal(H, k, p, samples=pool).passed, p.overrides


@pytest.mark.parametrize("seed", range(3))
def test_universal_property_on_random_translation_diagrams(seed):
    rng = random.Random(seed)
    X = random_chain_diagram(rng, TranslationOperad(), ["arrow", "span", "chain3"][seed])
    H = Hocolim(X)
    k = random_chain_cone(rng, X, ChainGroupAlgebra(X.operad, 3, 3, name="S"))
    assert check_universal(H, k, InducedR(H, k), seed=seed).passed


def test_universal_cone_of_a_strictification_induces_the_identity():
    A = ChainGroupAlgebra(MonoidalWordOperad(2), 3, 3, "capped-sum")
    st_ = strictify(A)
    H = st_.H
    r = InducedR(H, universal_cone(H))
    for y in H.objects(2):
        assert r.ob(y) == y
    for m in samples(H, 30, seed=4):
        assert H.equal(r.mor(m), m)


# ---------------------------------------------------------------------------
# 2-cells


def shifted_cone(H, k, c):
    return chain_cone(H.X, k.target, {o: (leg.h, leg.t + c) for o, leg in k.legs.items()})


def group_shift(S, k, c):
    return {o: (lambda K, o=o: S.mor(k.legs[o].h[int(K)], k.legs[o].h[int(K)], -c)) for o in k.legs}


def test_identity_two_cell_gives_identity_transformation():
    H = square()
    k = square_cone(H)
    S = k.target
    s = {o: (lambda K, o=o: S.carrier.identity(k.legs[o].ob(K))) for o in k.legs}
    assert check_modification(k, k, s).passed
    r = InducedR(H, k)
    t = two_cell_t(H, r, r, s)
    for y in H.objects(2):
        assert S.carrier.mor_eq(t.component(y), S.carrier.identity(r.ob(y)))


def test_two_cell_between_shifted_cones():
    H = square()
    k = square_cone(H)
    S = k.target
    k2 = shifted_cone(H, k, 1)
    s = group_shift(S, k, 1)
    assert check_modification(k, k2, s).passed
    r, r2 = InducedR(H, k), InducedR(H, k2)
    t = two_cell_t(H, r, r2, s)
    assert check_natural(t, samples(H, 40, seed=6)).passed
    for l in H.L.objects:
        j = universal_j(H, l)
        for K in H.alg(l).carrier.objects():
            assert S.carrier.mor_eq(t.component(j.ob(K)), s[l](K))
    for y in H.objects(2):
        expected = S.act_mor(H.op.identity(y.A), [s[l](K) for K, l in y.pairs])
        assert S.carrier.mor_eq(t.component(y), expected)


def test_wrong_two_cell_is_rejected():
    H = square()
    k = square_cone(H)
    k2 = shifted_cone(H, k, 1)
    assert not check_modification(k, k2, group_shift(k.target, k, 2)).passed


# ---------------------------------------------------------------------------
# evaluation counit


def constant_hocolim():
    S = ChainGroupAlgebra(MonoidalWordOperad(2), 3, 2, "capped-sum")
    return Hocolim(constant_alg_diagram(arrow(), S)), S


def test_counit_evaluates_objects():
    H, S = constant_hocolim()
    eps = eval_counit(H)
    for y in H.objects(2):
        assert eps.ob(y) == S.act(y.A, [K for K, _ in y.pairs])


def test_counit_sends_evaluation_and_index_atoms_to_identities():
    H, S = constant_hocolim()
    eps = eval_counit(H)
    a = H.op.objects(2)[0]
    for Ks in itertools.product(S.carrier.objects(), repeat=2):
        m = H.evaluation_atom(a, list(Ks), "0")
        assert S.carrier.mor_eq(eps.mor(m), S.carrier.identity(S.act(a, Ks)))
    u = next(u for u in H.L.src if not H.L.is_identity(u))
    for K in S.carrier.objects():
        assert S.carrier.mor_eq(eps.mor(H.index_atom(u, K)), S.carrier.identity(K))


def test_counit_is_the_map_induced_by_the_identity_cone():
    H, S = constant_hocolim()
    eps = eval_counit(H)
    r = InducedR(H, identity_cone(H.X))
    for y in H.objects(2):
        assert eps.ob(y) == r.ob(y)
    for m in samples(H, 50, seed=9):
        assert S.carrier.mor_eq(eps.mor(m), r.mor(m))


def test_counit_needs_a_constant_diagram():
    with pytest.raises(HocolimError):
        eval_counit(square())


# ---------------------------------------------------------------------------
# change of index


def test_identity_change_of_index_is_the_identity():
    H = square()
    F = change_index(identity_functor(H.L), H, H)
    for y in H.objects(2):
        assert F.ob(y) == y
    for m in samples(H, 20):
        assert H.equal(F.mor(m), m)


@pytest.mark.parametrize("seed", range(4))
def test_change_of_index_is_functorial(seed):
    rng = random.Random(seed)
    L, N, P = linear_order(3), linear_order(3), arrow()
    H = Hocolim(random_chain_diagram(rng, MonoidalWordOperad(2), "chain3"))
    F = thin_functor(N, L, rng.choice(monotone_maps(N, L)))
    G = thin_functor(P, N, rng.choice(monotone_maps(P, N)))
    F_star = change_index(F, H)
    G_star = change_index(G, F_star.source)
    FG_star = change_index(compose_functors(F, G), H, G_star.source)
    HP = G_star.source
    for y in HP.objects(2):
        assert FG_star.ob(y) == F_star.ob(G_star.ob(y))
    for m in samples(HP, 50, seed=seed):
        assert H.equal(FG_star.mor(m), F_star.mor(G_star.mor(m)))
    # F_* is a strict homomorphism
    for w, v, u in chains(HP, 10, seed=seed):
        assert H.equal(FG_star.mor(HP.compose(v, u)), H.compose(FG_star.mor(v), FG_star.mor(u)))


def test_tau_star_over_a_point_is_made_of_index_atoms():
    H = square()
    N = point()
    src = Functor(N, H.L, {"*": "(0,0)"}, {"id*": H.L.identity["(0,0)"]})
    dst = Functor(N, H.L, {"*": "(1,1)"}, {"id*": H.L.identity["(1,1)"]})
    u = H.L.hom("(0,0)", "(1,1)")[0]
    t = tau_star(NatTransformation(src, dst, {"*": u}), H)
    HN = t.F_star.source
    for K in H.alg("(0,0)").carrier.objects():
        y = HCObject(H.op.unit(), ((K, "*"),))
        assert H.equal(t.component(y), H.index_atom(u, K))
    for y in HN.objects(2):
        expected = H.act_mor(H.op.identity(y.A), [H.index_atom(u, K) for K, _ in y.pairs])
        assert H.equal(t.component(y), expected)
    assert t.check(samples(HN, 30)).passed


# ---------------------------------------------------------------------------
# strictification


def test_strictification_section_and_naturality():
    A = ChainGroupAlgebra(MonoidalWordOperad(2), 3, 3, "capped-sum")
    st_ = strictify(A)
    assert st_.check_rj() == []
    rep = st_.check_s(samples(st_.H, 40, seed=2))
    assert rep.passed and rep.checked["naturality"] == 40


def test_strictification_of_a_free_algebra():
    F = free_algebra(point(), TranslationOperad(), 2)
    st_ = strictify(F)
    rng = random.Random(0)
    c = F.carrier
    for z in c.objects():
        assert c.ob_eq(st_.r.ob(st_.k_ob(z)), z)
        for _ in range(3):
            m = c.random_morphism(rng, z)
            assert c.mor_eq(st_.r.mor(st_.k_mor(m)), m)
    H = st_.H
    for y in H.objects(1):
        tau = st_.kr_to_id(y)
        assert tau.source == st_.k_ob(st_.r.ob(y)) and tau.target == y


def test_strictification_is_over_a_point():
    A = ChainGroupAlgebra(MonoidalWordOperad(2), 2, 2)
    assert strictify(A).H.L.objects == ("*",)


# ---------------------------------------------------------------------------
# initial operad


def test_grothendieck_case_over_a_point():
    X = CatDiagram(point(), {"*": arrow()}, {"id*": identity_functor(arrow())})
    g = grothendieck_case(X)
    assert iso_categories(g.category, arrow()) is not None


def test_grothendieck_case_of_identity_over_arrow():
    L = arrow()
    a = next(u for u in L.src if not L.is_identity(u))
    c = arrow()
    X = CatDiagram(L, {"0": c, "1": c}, {L.identity["0"]: identity_functor(c), L.identity["1"]: identity_functor(c),
                                         a: identity_functor(c)})
    g = grothendieck_case(X)
    assert iso_categories(g.category, product(arrow(), arrow())) is not None


def test_grothendieck_case_on_seeded_diagrams():
    for X in seeded_diagrams(0, 25):
        g = grothendieck_case(X)
        assert g.coend_witness is not None
        assert len(g.category.objects) == len(g.grothendieck.objects)


def test_grothendieck_case_needs_the_initial_operad():
    X = CatDiagram(point(), {"*": arrow()}, {"id*": identity_functor(arrow())})
    with pytest.raises(HocolimError):
        grothendieck_case(X, H=square())
