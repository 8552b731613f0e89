import random

import pytest
from hypothesis import given, settings, strategies as st

from hocolimcat.cat_core import (
    arrow,
    discrete,
    grothendieck,
    indiscrete,
    linear_order,
    one_object_group,
    point,
    poset_category,
    product,
)
from hocolimcat.operads import MonoidalWordOperad
from hocolimcat.samples import INDEX_SHAPES, index_category, random_diagram, random_poset
from hocolimcat.simplicial import (
    BiSSet,
    NECESSARY_ONLY,
    SSetDiagram,
    SimplicialError,
    chain_complex,
    check_simplicial_identities,
    constant_ssdiagram,
    diag,
    elementary_divisors,
    homology,
    mat_mul,
    nerve,
    smith_normal_form,
    ss_hocolim,
    ss_hocolim_normal_form_counts,
    weak_equivalence_check,
)


def m2_of_two():
    op = MonoidalWordOperad(2)
    objs = op.objects(2)
    names = {str(o): o for o in objs}
    return poset_category(list(names), lambda a, b: op.leq(names[a], names[b]))


def test_nerve_counts():
    assert nerve(arrow(), 2).nondegenerate_counts() == (2, 1, 0)
    assert nerve(m2_of_two(), 2).nondegenerate_counts() == (4, 4, 0)
    assert nerve(indiscrete(["e", "t"]), 3).nondegenerate_counts() == (2, 2, 2, 2)


def test_nerve_rejects_bad_cap():
    with pytest.raises(SimplicialError):
        nerve(point(), 0)


@pytest.mark.parametrize("c", [arrow(), linear_order(3), one_object_group(3), indiscrete(["a", "b", "c"])],
                         ids=["arrow", "chain3", "z3", "indiscrete3"])
def test_nerve_satisfies_simplicial_identities(c):
    assert check_simplicial_identities(nerve(c, 3)) == []


def test_homology_examples():
    assert homology(nerve(point(), 3)).groups() == ["Z", "0", "0"]
    assert homology(nerve(m2_of_two(), 3)).groups() == ["Z", "Z", "0"]
    assert homology(nerve(indiscrete(["e", "t"]), 4)).groups() == ["Z", "0", "0", "0"]


def test_homology_of_cyclic_group():
    # chain-level oracle: the normalized bar complex of Z/2 has boundaries 0, 2, 0, 2, ...
    h = homology(nerve(one_object_group(2), 4))
    assert h.betti == [1, 0, 0, 0]
    assert h.torsion == [[], [2], [], [2]]
    assert h.trusted_top == 3


def test_smith_examples():
    assert smith_normal_form([[2, 0], [0, 3]])[0] == [1, 6]
    assert smith_normal_form([[0, 0], [0, 0]])[0] == [0, 0]
    assert smith_normal_form([[2, 4], [6, 8]])[0] == [2, 4]


@settings(max_examples=80, deadline=None)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=1, max_size=5), min_size=1, max_size=5).filter(
    lambda m: len({len(r) for r in m}) == 1))
def test_smith_certificates(m):
    d, U, V = smith_normal_form(m)
    D = mat_mul(mat_mul(U, m), V)
    for i, row in enumerate(D):
        for j, x in enumerate(row):
            assert x == (d[i] if i == j else 0)
    nonzero = [x for x in d if x]
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    assert all(x >= 0 for x in d)
    # sparse elimination and the dense form agree on the invariant factors
    cols = {j: {i: m[i][j] for i in range(len(m)) if m[i][j]} for j in range(len(m[0]))}
    assert sorted(elementary_divisors(cols)) == sorted(nonzero)


@pytest.mark.parametrize("c", [arrow(), linear_order(3), m2_of_two(), discrete(["a", "b"]), one_object_group(3)],
                         ids=["arrow", "chain3", "m2", "discrete2", "z3"])
def test_boundary_squares_to_zero(c):
    assert chain_complex(nerve(c, 4)).check() == []


def test_initial_object_gives_point_homology():
    rng = random.Random(4)
    for _ in range(10):
        p = random_poset(rng, 5)
        bottom = poset_category(["⊥"] + list(p.objects), lambda a, b: a == "⊥" or bool(p.hom(a, b)))
        assert homology(nerve(bottom, 3)) == homology(nerve(point(), 3))


def test_components_multiply():
    rng = random.Random(9)
    for _ in range(10):
        c, d = random_poset(rng, 3, "c"), random_poset(rng, 3, "d")
        h0 = lambda x: homology(nerve(x, 2)).betti[0]
        assert h0(product(c, d)) == h0(c) * h0(d)


def test_diag_of_constant_direction():
    x = nerve(linear_order(3), 2)
    dx = diag(BiSSet.constant_vertically(x))
    assert dx.counts() == x.counts()
    assert check_simplicial_identities(dx) == []


def test_diag_of_external_product_is_nerve_of_product():
    c, d = arrow(), linear_order(3)
    dx = diag(BiSSet.external_product(nerve(c, 3), nerve(d, 3)))
    assert check_simplicial_identities(dx) == []
    assert dx.counts() == nerve(product(c, d), 3).counts()
    assert homology(dx) == homology(nerve(product(c, d), 3))


def test_hocolim_over_point():
    x = nerve(linear_order(3), 3)
    h = ss_hocolim(point(), constant_ssdiagram(point(), x))
    assert h.counts() == x.counts()
    assert homology(h) == homology(x)


@pytest.mark.parametrize("shape", ["arrow", "chain3", "span"])
def test_hocolim_over_category_with_initial_object(shape):
    L = index_category(shape)
    x = nerve(one_object_group(2), 3)
    h = ss_hocolim(L, constant_ssdiagram(L, x))
    assert homology(h) == homology(x)


@pytest.mark.parametrize("seed", range(6))
def test_hocolim_agrees_with_grothendieck(seed):
    rng = random.Random(seed)
    X = random_diagram(rng, INDEX_SHAPES[seed % len(INDEX_SHAPES)], max_size=3)
    Z = SSetDiagram.nerve_of(X, 3)
    h = ss_hocolim(X.index, Z)
    assert check_simplicial_identities(h) == []
    assert h.counts() == ss_hocolim_normal_form_counts(X.index, Z)
    report = weak_equivalence_check(h, nerve(grothendieck(X.index, X), 3))
    assert report["label"] == NECESSARY_ONLY and report["agree"]


def test_json_round_trip():
    x = nerve(arrow(), 2)
    y = type(x).from_json(x.to_json())
    assert y.counts() == x.counts()
    assert homology(y) == homology(x)
