import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from hocolimcat.cat_core import (
    CatDiagram,
    CategoryError,
    FinCat,
    Functor,
    arrow,
    cat_coend,
    comma_two_sided,
    constant_diagram,
    discrete,
    dual_grothendieck,
    grothendieck,
    identity_functor,
    indiscrete,
    is_isomorphism,
    iso_categories,
    linear_order,
    one_object_group,
    opposite,
    point,
    product,
    under_diagram,
    validate_category,
    validate_diagram,
    validate_functor,
)
from hocolimcat.samples import INDEX_SHAPES, random_diagram


def constant_point_diagram(L):
    return CatDiagram(opposite(L), {o: point() for o in L.objects},
                      {m: identity_functor(point()) for m in L.src})


def test_validate_point_and_arrow():
    assert validate_category(point()) == []
    assert validate_category(arrow()) == []


def test_validate_reports_bad_typing():
    c = arrow()
    bad = FinCat(c.objects, [(m, c.src[m], c.dst[m]) for m in c.src], c.identity,
                 {**c.table, ("a", "id0"): "id1"})
    problems = validate_category(bad)
    assert any("composition closure/typing" in p for p in problems)


def test_validate_reports_associativity():
    # a two-element monoid table that is not associative
    ms = ["e", "x"]
    table = {("e", "e"): "e", ("e", "x"): "x", ("x", "e"): "x", ("x", "x"): "e"}
    good = FinCat(["*"], [(m, "*", "*") for m in ms], {"*": "e"}, table)
    assert validate_category(good) == []
    ms = ["e", "x", "y"]
    table = {(a, b): "y" for a in ms for b in ms}
    for m in ms:
        table[("e", m)] = table[(m, "e")] = m
    table[("x", "y")] = "x"
    bad = FinCat(["*"], [(m, "*", "*") for m in ms], {"*": "e"}, table)
    assert any("associativ" in p for p in validate_category(bad))


def test_comma_examples():
    L = arrow()
    c = comma_two_sided(L, "0", "1")
    assert len(c.objects) == 2
    assert len([m for m in c.src if not c.is_identity(m)]) == 1
    assert validate_category(c) == []
    assert len(comma_two_sided(point(), "*", "*").src) == 1
    assert comma_two_sided(L, "1", "0").objects == ()
    with pytest.raises(CategoryError):
        comma_two_sided(L, "2", "0")


@pytest.mark.parametrize("L", [arrow(), linear_order(3), one_object_group(3), indiscrete(["x", "y"])],
                         ids=["arrow", "chain3", "z3", "indiscrete2"])
def test_comma_object_count(L):
    for a, b in itertools.product(L.objects, repeat=2):
        expected = sum(len(L.hom(a, c)) * len(L.hom(c, b)) for c in L.objects)
        c = comma_two_sided(L, a, b)
        assert len(c.objects) == expected
        assert validate_category(c) == []


def brute_force_grothendieck_counts(L, X):
    objs = [(l, x) for l in L.objects for x in X.cats[l].objects]
    count = 0
    for (l, x) in objs:
        for (l2, x2) in objs:
            for u in L.hom(l, l2):
                count += len(X.cats[l2].hom(X.functors[u].ob(x), x2))
    return len(objs), count


def test_grothendieck_examples():
    L = arrow()
    g = grothendieck(L, constant_diagram(L, arrow()))
    assert (len(g.objects), len(g.src)) == (4, 9)
    assert iso_categories(g, product(arrow(), arrow())) is not None
    c = linear_order(3)
    assert iso_categories(grothendieck(point(), constant_diagram(point(), c)), c) is not None
    to_point = Functor(arrow(), point(), {"0": "*", "1": "*"}, {m: "id*" for m in arrow().src})
    X = CatDiagram(L, {"0": arrow(), "1": point()},
                   {"id0": identity_functor(arrow()), "id1": identity_functor(point()), "a": to_point})
    assert validate_diagram(X) == []
    assert len(grothendieck(L, X).objects) == 3


def test_grothendieck_matches_brute_force_counts():
    rng = random.Random(11)
    for shape in INDEX_SHAPES:
        X = random_diagram(rng, shape)
        g = grothendieck(X.index, X)
        assert (len(g.objects), len(g.src)) == brute_force_grothendieck_counts(X.index, X)
        assert validate_category(g) == []


def test_dual_grothendieck_examples():
    c = linear_order(3)
    assert iso_categories(dual_grothendieck(constant_diagram(point(), c)), c) is not None
    L = arrow()
    d = dual_grothendieck(constant_diagram(L, arrow()))
    assert (len(d.objects), len(d.src)) == (4, 9)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(INDEX_SHAPES))
def test_dual_grothendieck_is_opposite_of_grothendieck(seed, shape):
    X = random_diagram(random.Random(seed), shape, max_size=3)
    d = dual_grothendieck(X)
    g = grothendieck(X.index, X.op())
    assert validate_category(d) == []
    assert iso_categories(d, opposite(g)) is not None


def test_coend_over_point():
    c = linear_order(2)
    W = under_diagram(point())
    X = constant_diagram(point(), c)
    assert iso_categories(cat_coend(W, X), product(W.cats["*"], c)) is not None


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(INDEX_SHAPES))
def test_coend_with_under_categories_is_grothendieck(seed, shape):
    X = random_diagram(random.Random(seed), shape, max_size=3)
    co = cat_coend(under_diagram(X.index), X)
    assert iso_categories(co, grothendieck(X.index, X)) is not None


def test_coend_with_point_weights_is_colimit():
    # pushout of  [1] ← point → [1]  gluing the sources: the V shape with three objects
    L = __import__("hocolimcat.samples", fromlist=["index_category"]).index_category("span")
    ar = arrow()
    f0 = Functor(point(), ar, {"*": "0"}, {"id*": "id0"})
    X = CatDiagram(L, {"a": point(), "b": ar, "c": ar},
                   {"id_a": identity_functor(point()), "id_b": identity_functor(ar), "id_c": identity_functor(ar),
                    "a<b": f0, "a<c": f0})
    assert validate_diagram(X) == []
    co = cat_coend(constant_point_diagram(L), X)
    v = FinCat(["0", "1", "2"], [("i0", "0", "0"), ("i1", "1", "1"), ("i2", "2", "2"), ("x", "0", "1"),
                                 ("y", "0", "2")],
               {"0": "i0", "1": "i1", "2": "i2"},
               {("i0", "i0"): "i0", ("i1", "i1"): "i1", ("i2", "i2"): "i2", ("x", "i0"): "x", ("i1", "x"): "x",
                ("y", "i0"): "y", ("i2", "y"): "y"})
    assert iso_categories(co, v) is not None


def test_coend_with_point_weights_over_group_is_quotient():
    # colimit of Z/2 acting on the discrete two-point category by the swap
    L = one_object_group(2)
    d = discrete(["p", "q"])
    swap = Functor(d, d, {"p": "q", "q": "p"}, {"id_p": "id_q", "id_q": "id_p"})
    X = CatDiagram(L, {"*": d}, {"g0": identity_functor(d), "g1": swap})
    co = cat_coend(constant_point_diagram(L), X)
    assert (len(co.objects), len(co.src)) == (1, 1)


def test_iso_examples():
    c = linear_order(3)
    w = iso_categories(c, c)
    assert w is not None and is_isomorphism(w)
    assert iso_categories(arrow(), point()) is None
    assert iso_categories(one_object_group(2), discrete(["a", "b"])) is None


def test_functor_validation():
    assert validate_functor(identity_functor(arrow())) == []
    bad = Functor(arrow(), arrow(), {"0": "1", "1": "0"}, {"id0": "id1", "id1": "id0", "a": "a"})
    assert validate_functor(bad)


def test_json_round_trip():
    rng = random.Random(2)
    X = random_diagram(rng, "chain3")
    assert CatDiagram.from_json(X.to_json()).to_json() == X.to_json()
    g = grothendieck(X.index, X)
    assert FinCat.from_json(g.to_json()) == g
