"""Seeded random small categories and Cat-valued diagrams."""
from __future__ import annotations

import itertools
import random

from .cat_core import (
    CatDiagram,
    FinCat,
    Functor,
    arrow,
    discrete,
    identity_functor,
    linear_order,
    one_object_group,
    point,
    poset_category,
)

INDEX_SHAPES = ("point", "arrow", "chain3", "span", "cospan", "discrete2", "z2")


def index_category(shape: str) -> FinCat:
    if shape == "point":
        return point()
    if shape == "arrow":
        return arrow()
    if shape == "chain3":
        return linear_order(3)
    if shape == "span":
        # b ← a → c
        return poset_category(["a", "b", "c"], lambda x, y: x == y or x == "a")
    if shape == "cospan":
        # a → c ← b
        return poset_category(["a", "b", "c"], lambda x, y: x == y or y == "c")
    if shape == "discrete2":
        return discrete(["0", "1"])
    if shape == "z2":
        return one_object_group(2)
    raise ValueError(f"unknown index shape {shape!r}")


def random_poset(rng: random.Random, max_size: int = 4, prefix: str = "p") -> FinCat:
    n = rng.randint(1, max_size)
    els = [f"{prefix}{i}" for i in range(n)]
    rel = {(i, i) for i in range(n)}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.4:
                rel.add((i, j))
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(rel), list(rel)):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    idx = {e: i for i, e in enumerate(els)}
    return poset_category(els, lambda x, y: (idx[x], idx[y]) in rel)


def _leq(c: FinCat, a: str, b: str) -> bool:
    return bool(c.hom(a, b))


def thin_functor(src: FinCat, dst: FinCat, obmap: dict[str, str]) -> Functor:
    """The functor between thin categories determined by a monotone object map."""
    mormap = {m: dst.hom(obmap[src.src[m]], obmap[src.dst[m]])[0] for m in src.src}
    return Functor(src, dst, dict(obmap), mormap)


def monotone_maps(src: FinCat, dst: FinCat) -> list[dict[str, str]]:
    out = []
    for image in itertools.product(dst.objects, repeat=len(src.objects)):
        obmap = dict(zip(src.objects, image))
        if all(_leq(dst, obmap[src.src[m]], obmap[src.dst[m]]) for m in src.src):
            out.append(obmap)
    return out


def _automorphism_involutions(c: FinCat) -> list[dict[str, str]]:
    out = []
    for p in itertools.permutations(c.objects):
        obmap = dict(zip(c.objects, p))
        if any(obmap[obmap[o]] != o for o in c.objects):
            continue
        if all(_leq(c, obmap[a], obmap[b]) == _leq(c, a, b) for a in c.objects for b in c.objects):
            out.append(obmap)
    return out


def random_diagram(rng: random.Random, shape: str | None = None, max_size: int = 4) -> CatDiagram:
    """A functor from a small index category into finite posets of at most ``max_size`` elements."""
    shape = shape or rng.choice(INDEX_SHAPES)
    L = index_category(shape)
    if shape == "z2":
        c = random_poset(rng, max_size)
        inv = rng.choice(_automorphism_involutions(c))
        flip = thin_functor(c, c, inv)
        return CatDiagram(L, {"*": c}, {"g0": identity_functor(c), "g1": flip})
    cats = {o: random_poset(rng, max_size, prefix=f"{o}.") for o in L.objects}
    functors: dict[str, Functor] = {}
    for o in L.objects:
        functors[L.identity[o]] = identity_functor(cats[o])
    gens = [m for m in L.src if not L.is_identity(m)]
    if shape == "chain3":
        gens = ["0<1", "1<2"]
    for m in gens:
        s, d = L.src[m], L.dst[m]
        functors[m] = thin_functor(cats[s], cats[d], rng.choice(monotone_maps(cats[s], cats[d])))
    if shape == "chain3":
        f, g = functors["0<1"], functors["1<2"]
        functors["0<2"] = thin_functor(cats["0"], cats["2"], {o: g.ob(f.ob(o)) for o in cats["0"].objects})
    return CatDiagram(L, cats, functors)


def seeded_diagrams(seed: int, count: int, max_size: int = 4) -> list[CatDiagram]:
    rng = random.Random(seed)
    shapes = list(INDEX_SHAPES)
    return [random_diagram(rng, shapes[i % len(shapes)], max_size) for i in range(count)]
