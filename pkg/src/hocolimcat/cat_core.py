"""Finite categories given by explicit tables, and constructions on them.

Objects and morphisms are identified by strings.  Composite identifiers built by
the constructions in this module use ``tid`` so that they serialize
deterministically.
"""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping, Sequence


class CategoryError(ValueError):
    pass


def tid(*parts: Hashable) -> str:
    """Deterministic string id for a tuple of parts."""
    return "(" + ",".join(str(p) for p in parts) + ")"


class FinCat:
    """A finite category with a total composition table on composable pairs."""

    __slots__ = ("objects", "src", "dst", "identity", "table", "_hom", "_out", "_in")

    def __init__(
        self,
        objects: Iterable[str],
        morphisms: Iterable[tuple[str, str, str]],
        identity: Mapping[str, str],
        table: Mapping[tuple[str, str], str],
    ):
        self.objects: tuple[str, ...] = tuple(objects)
        self.src: dict[str, str] = {}
        self.dst: dict[str, str] = {}
        for m, s, d in morphisms:
            if m in self.src:
                raise CategoryError(f"duplicate morphism id {m!r}")
            self.src[m] = s
            self.dst[m] = d
        self.identity: dict[str, str] = dict(identity)
        self.table: dict[tuple[str, str], str] = dict(table)
        hom: dict[tuple[str, str], list[str]] = defaultdict(list)
        out: dict[str, list[str]] = defaultdict(list)
        inc: dict[str, list[str]] = defaultdict(list)
        for m in self.src:
            hom[(self.src[m], self.dst[m])].append(m)
            out[self.src[m]].append(m)
            inc[self.dst[m]].append(m)
        self._hom = dict(hom)
        self._out = dict(out)
        self._in = dict(inc)

    # basic access
    @property
    def morphisms(self) -> list[str]:
        return list(self.src)

    def hom(self, a: str, b: str) -> list[str]:
        return self._hom.get((a, b), [])

    def out_of(self, a: str) -> list[str]:
        return self._out.get(a, [])

    def into(self, b: str) -> list[str]:
        return self._in.get(b, [])

    def compose(self, g: str, f: str) -> str:
        """Return g∘f."""
        try:
            return self.table[(g, f)]
        except KeyError:
            raise CategoryError(f"{g!r} and {f!r} are not composable") from None

    def compose_path(self, *ms: str) -> str:
        """Compose right to left: compose_path(h, g, f) = h∘g∘f."""
        out = ms[-1]
        for m in reversed(ms[:-1]):
            out = self.compose(m, out)
        return out

    def is_identity(self, m: str) -> bool:
        return self.identity.get(self.src[m]) == m

    def __len__(self) -> int:
        return len(self.objects)

    def __repr__(self) -> str:
        return f"FinCat({len(self.objects)} objects, {len(self.src)} morphisms)"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinCat):
            return NotImplemented
        return (
            set(self.objects) == set(other.objects)
            and self.src == other.src
            and self.dst == other.dst
            and self.identity == other.identity
            and self.table == other.table
        )

    def __hash__(self) -> int:
        return hash((frozenset(self.objects), len(self.src)))

    # serialization
    def to_json(self) -> dict:
        return {
            "objects": list(self.objects),
            "morphisms": [{"id": m, "src": self.src[m], "dst": self.dst[m]} for m in self.src],
            "compose": [{"g": g, "f": f, "gf": h} for (g, f), h in sorted(self.table.items())],
            "identities": dict(self.identity),
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "FinCat":
        return cls(
            doc["objects"],
            [(m["id"], m["src"], m["dst"]) for m in doc["morphisms"]],
            doc["identities"],
            {(c["g"], c["f"]): c["gf"] for c in doc["compose"]},
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def validate_category(c: FinCat) -> list[str]:
    """Return a list of violated category laws; empty when ``c`` is a category."""
    problems: list[str] = []
    objs = set(c.objects)
    for m in c.src:
        if c.src[m] not in objs or c.dst[m] not in objs:
            problems.append(f"typing: morphism {m} has unknown endpoint")
    for o in c.objects:
        i = c.identity.get(o)
        if i is None or i not in c.src:
            problems.append(f"identity: object {o} has no identity morphism")
        elif c.src[i] != o or c.dst[i] != o:
            problems.append(f"identity: {i} is not an endomorphism of {o}")
    for (g, f), h in c.table.items():
        if g not in c.src or f not in c.src:
            problems.append(f"composition closure/typing: entry ({g},{f}) uses unknown morphism")
            continue
        if c.src[g] != c.dst[f]:
            problems.append(f"composition closure/typing: ({g},{f}) is not a composable pair")
            continue
        if h not in c.src:
            problems.append(f"composition closure/typing: {g}∘{f} = {h} is not a morphism")
        elif c.src[h] != c.src[f] or c.dst[h] != c.dst[g]:
            problems.append(f"composition closure/typing: {g}∘{f} = {h} has wrong source or target")
    if problems:
        return problems
    for f in c.src:
        for g in c.out_of(c.dst[f]):
            if (g, f) not in c.table:
                problems.append(f"composition totality: {g}∘{f} undefined")
    if problems:
        return problems
    for f in c.src:
        a, b = c.src[f], c.dst[f]
        if c.table[(c.identity[b], f)] != f or c.table[(f, c.identity[a])] != f:
            problems.append(f"unit law fails at {f}")
    for f in c.src:
        for g in c.out_of(c.dst[f]):
            gf = c.table[(g, f)]
            for h in c.out_of(c.dst[g]):
                if c.table[(h, gf)] != c.table[(c.table[(h, g)], f)]:
                    problems.append(f"associativity fails at ({h},{g},{f})")
    return problems


# ---------------------------------------------------------------------------
# builders


def point() -> FinCat:
    return FinCat(["*"], [("id*", "*", "*")], {"*": "id*"}, {("id*", "id*"): "id*"})


def discrete(objects: Sequence[str]) -> FinCat:
    ids = {o: f"id_{o}" for o in objects}
    return FinCat(objects, [(ids[o], o, o) for o in objects], ids, {(ids[o], ids[o]): ids[o] for o in objects})


def empty_category() -> FinCat:
    return FinCat([], [], {}, {})


def poset_category(elements: Sequence[str], leq: Callable[[str, str], bool]) -> FinCat:
    """Thin category with a morphism a→b iff leq(a, b); leq must be a preorder."""
    mors = []
    ident = {}
    for a in elements:
        for b in elements:
            if leq(a, b):
                m = f"id_{a}" if a == b else f"{a}<{b}"
                mors.append((m, a, b))
                if a == b:
                    ident[a] = m
    name = {(s, d): m for m, s, d in mors}
    table = {}
    for (a, b), f in name.items():
        for c in elements:
            if (b, c) in name:
                table[(name[(b, c)], f)] = name[(a, c)]
    return FinCat(elements, mors, ident, table)


def linear_order(n: int) -> FinCat:
    """The ordinal [n-1] = 0 → 1 → … → n-1."""
    els = [str(i) for i in range(n)]
    return poset_category(els, lambda a, b: int(a) <= int(b))


def arrow() -> FinCat:
    """[1] = (0 → 1); the non-identity morphism is named 'a'."""
    return FinCat(
        ["0", "1"],
        [("id0", "0", "0"), ("id1", "1", "1"), ("a", "0", "1")],
        {"0": "id0", "1": "id1"},
        {("id0", "id0"): "id0", ("id1", "id1"): "id1", ("a", "id0"): "a", ("id1", "a"): "a"},
    )


def one_object_group(order: int) -> FinCat:
    """The cyclic group of the given order as a one-object category."""
    ms = [f"g{i}" for i in range(order)]
    return FinCat(
        ["*"],
        [(m, "*", "*") for m in ms],
        {"*": "g0"},
        {(ms[i], ms[j]): ms[(i + j) % order] for i in range(order) for j in range(order)},
    )


def indiscrete(objects: Sequence[str]) -> FinCat:
    """Exactly one morphism between any two objects."""
    return poset_category(objects, lambda a, b: True)


def product(c: FinCat, d: FinCat) -> FinCat:
    objs = [tid(a, b) for a in c.objects for b in d.objects]
    mors = [(tid(f, g), tid(c.src[f], d.src[g]), tid(c.dst[f], d.dst[g])) for f in c.src for g in d.src]
    ident = {tid(a, b): tid(c.identity[a], d.identity[b]) for a in c.objects for b in d.objects}
    table = {}
    for (f2, f1), f in c.table.items():
        for (g2, g1), g in d.table.items():
            table[(tid(f2, g2), tid(f1, g1))] = tid(f, g)
    return FinCat(objs, mors, ident, table)


def opposite(c: FinCat) -> FinCat:
    return FinCat(
        c.objects,
        [(m, c.dst[m], c.src[m]) for m in c.src],
        c.identity,
        {(f, g): h for (g, f), h in c.table.items()},
    )


def relabel(c: FinCat, prefix: str) -> FinCat:
    """Copy of ``c`` with every id prefixed; useful to keep disjoint unions apart."""
    p = lambda x: prefix + x
    return FinCat(
        [p(o) for o in c.objects],
        [(p(m), p(c.src[m]), p(c.dst[m])) for m in c.src],
        {p(o): p(i) for o, i in c.identity.items()},
        {(p(g), p(f)): p(h) for (g, f), h in c.table.items()},
    )


# ---------------------------------------------------------------------------
# functors and natural transformations


@dataclass
class Functor:
    source: FinCat
    target: FinCat
    obmap: dict[str, str]
    mormap: dict[str, str]

    def __call__(self, x: str) -> str:
        if x in self.mormap and x not in self.obmap:
            return self.mormap[x]
        return self.obmap[x]

    def ob(self, o: str) -> str:
        return self.obmap[o]

    def mor(self, m: str) -> str:
        return self.mormap[m]


def identity_functor(c: FinCat) -> Functor:
    return Functor(c, c, {o: o for o in c.objects}, {m: m for m in c.src})


def compose_functors(g: Functor, f: Functor) -> Functor:
    return Functor(
        f.source,
        g.target,
        {o: g.obmap[f.obmap[o]] for o in f.source.objects},
        {m: g.mormap[f.mormap[m]] for m in f.source.src},
    )


def opposite_functor(f: Functor) -> Functor:
    return Functor(opposite(f.source), opposite(f.target), f.obmap, f.mormap)


def validate_functor(f: Functor) -> list[str]:
    s, t = f.source, f.target
    problems = []
    for o in s.objects:
        if o not in f.obmap or f.obmap[o] not in t.identity:
            problems.append(f"functor object map undefined or invalid at {o}")
    for m in s.src:
        if m not in f.mormap or f.mormap[m] not in t.src:
            problems.append(f"functor morphism map undefined or invalid at {m}")
    if problems:
        return problems
    for m in s.src:
        fm = f.mormap[m]
        if t.src[fm] != f.obmap[s.src[m]] or t.dst[fm] != f.obmap[s.dst[m]]:
            problems.append(f"functor does not preserve endpoints of {m}")
    if problems:
        return problems
    for o in s.objects:
        if f.mormap[s.identity[o]] != t.identity[f.obmap[o]]:
            problems.append(f"functor does not preserve identity of {o}")
    for (g, h), gh in s.table.items():
        if t.compose(f.mormap[g], f.mormap[h]) != f.mormap[gh]:
            problems.append(f"functor does not preserve composite {g}∘{h}")
    return problems


@dataclass
class NatTransformation:
    source: Functor
    target: Functor
    components: dict[str, str]


def validate_nat(t: NatTransformation) -> list[str]:
    c, d = t.source.source, t.source.target
    problems = []
    for o in c.objects:
        m = t.components.get(o)
        if m is None or d.src.get(m) != t.source.obmap[o] or d.dst.get(m) != t.target.obmap[o]:
            problems.append(f"component at {o} missing or mistyped")
    if problems:
        return problems
    for m in c.src:
        lhs = d.compose(t.target.mormap[m], t.components[c.src[m]])
        rhs = d.compose(t.components[c.dst[m]], t.source.mormap[m])
        if lhs != rhs:
            problems.append(f"naturality square fails at {m}")
    return problems


# ---------------------------------------------------------------------------
# diagrams of categories


@dataclass
class CatDiagram:
    """A functor from a finite index category into finite categories."""

    index: FinCat
    cats: dict[str, FinCat]
    functors: dict[str, Functor]

    def on(self, m: str) -> Functor:
        return self.functors[m]

    def op(self) -> "CatDiagram":
        """Pointwise opposite: L ↦ X(L)^op."""
        return CatDiagram(
            self.index,
            {o: opposite(c) for o, c in self.cats.items()},
            {m: opposite_functor(f) for m, f in self.functors.items()},
        )

    def to_json(self) -> dict:
        return {
            "index": self.index.to_json(),
            "cats": {o: c.to_json() for o, c in self.cats.items()},
            "functors": {
                m: {"obmap": f.obmap, "mormap": f.mormap} for m, f in self.functors.items()
            },
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "CatDiagram":
        index = FinCat.from_json(doc["index"])
        cats = {o: FinCat.from_json(c) for o, c in doc["cats"].items()}
        functors = {}
        for m, fd in doc["functors"].items():
            functors[m] = Functor(cats[index.src[m]], cats[index.dst[m]], dict(fd["obmap"]), dict(fd["mormap"]))
        d = cls(index, cats, functors)
        problems = validate_diagram(d)
        if problems:
            raise CategoryError("; ".join(problems))
        return d


def validate_diagram(x: CatDiagram, contravariant: bool = False) -> list[str]:
    L = x.index
    problems = []
    for m in L.src:
        f = x.functors.get(m)
        if f is None:
            problems.append(f"diagram missing functor for {m}")
            continue
        s, d = (L.dst[m], L.src[m]) if contravariant else (L.src[m], L.dst[m])
        if f.source is not x.cats[s] and f.source != x.cats[s]:
            problems.append(f"functor for {m} has wrong source")
        problems += [f"{m}: {p}" for p in validate_functor(f)]
    if problems:
        return problems
    for o in L.objects:
        f = x.functors[L.identity[o]]
        if any(f.obmap[a] != a for a in x.cats[o].objects) or any(f.mormap[a] != a for a in x.cats[o].src):
            problems.append(f"non-functorial: identity of {o} not sent to identity functor")
    for (g, h), gh in L.table.items():
        comp = compose_functors(x.functors[h], x.functors[g]) if contravariant else compose_functors(x.functors[g], x.functors[h])
        if comp.obmap != x.functors[gh].obmap or comp.mormap != x.functors[gh].mormap:
            problems.append(f"non-functorial at {g}∘{h}")
    return problems


def constant_diagram(L: FinCat, c: FinCat) -> CatDiagram:
    idf = identity_functor(c)
    return CatDiagram(L, {o: c for o in L.objects}, {m: idf for m in L.src})


# ---------------------------------------------------------------------------
# comma categories and Grothendieck constructions


def comma_two_sided(L: FinCat, a: str | None = None, b: str | None = None) -> FinCat:
    """a/L/b; pass ``b=None`` for a/L and ``a=None`` for L/b.

    Objects are triples (c, f: a→c, g: c→b) encoded by ``tid``; a missing leg is
    recorded as '-'.
    """
    for x in (a, b):
        if x is not None and x not in L.identity:
            raise CategoryError(f"unknown object {x!r}")
    objs = []
    for c in L.objects:
        fs = L.hom(a, c) if a is not None else ["-"]
        gs = L.hom(c, b) if b is not None else ["-"]
        for f in fs:
            for g in gs:
                objs.append((c, f, g))
    names = {o: tid(*o) for o in objs}
    mors = []
    ident = {}
    for (c, f, g) in objs:
        for (c2, f2, g2) in objs:
            for lam in L.hom(c, c2):
                if a is not None and L.compose(lam, f) != f2:
                    continue
                if b is not None and L.compose(g2, lam) != g:
                    continue
                mid = tid(lam, names[(c, f, g)])
                mors.append((mid, names[(c, f, g)], names[(c2, f2, g2)], lam))
                if lam == L.identity[c] and (c, f, g) == (c2, f2, g2):
                    ident[names[(c, f, g)]] = mid
    lam_of = {m[0]: m[3] for m in mors}
    by_src_lam = {(m[1], m[3]): m[0] for m in mors}
    src_of = {m[0]: m[1] for m in mors}
    dst_of = {m[0]: m[2] for m in mors}
    table = {}
    for f_id in lam_of:
        for g_id in lam_of:
            if src_of[g_id] == dst_of[f_id]:
                table[(g_id, f_id)] = by_src_lam[(src_of[f_id], L.compose(lam_of[g_id], lam_of[f_id]))]
    return FinCat([names[o] for o in objs], [m[:3] for m in mors], ident, table)


def under_category(L: FinCat, a: str) -> FinCat:
    return comma_two_sided(L, a, None)


def grothendieck(L: FinCat, X: CatDiagram) -> FinCat:
    """L∫X: objects (l, x), morphisms (u: l→l', ξ: X(u)x → x') with id tid(u, x, ξ)."""
    objs = [(l, x) for l in L.objects for x in X.cats[l].objects]
    mors = []
    for (l, x) in objs:
        for u in L.out_of(l):
            l2 = L.dst[u]
            xu = X.functors[u].obmap[x]
            for xi in X.cats[l2].out_of(xu):
                mors.append((tid(u, x, xi), tid(l, x), tid(l2, X.cats[l2].dst[xi]), u, xi, x))
    ident = {tid(l, x): tid(L.identity[l], x, X.cats[l].identity[x]) for (l, x) in objs}
    table = {}
    out_by_obj = defaultdict(list)
    for m in mors:
        out_by_obj[m[1]].append(m)
    for (fid, fs, fd, u1, xi1, x1) in mors:
        for (gid, gs, gd, u2, xi2, _) in out_by_obj[fd]:
            c2 = X.cats[L.dst[u2]]
            comp_xi = c2.compose(xi2, X.functors[u2].mormap[xi1])
            table[(gid, fid)] = tid(L.compose(u2, u1), x1, comp_xi)
    return FinCat([tid(*o) for o in objs], [m[:3] for m in mors], ident, table)


def dual_grothendieck(X: CatDiagram) -> FinCat:
    """F∫L for F contravariant given as a covariant diagram on L (so F(l): F(L')→F(L) for l: L'→L).

    Morphisms (L,x) → (L',x') are pairs (l: L'→L, ξ: x → F(l)x'), with id tid(l, ξ, x').
    """
    L = X.index
    objs = [(l, x) for l in L.objects for x in X.cats[l].objects]
    mors = []
    for (l, x) in objs:
        for u in L.into(l):
            l2 = L.src[u]
            for x2 in X.cats[l2].objects:
                target = X.functors[u].obmap[x2]
                for xi in X.cats[l].hom(x, target):
                    mors.append((tid(u, xi, x2), tid(l, x), tid(l2, x2), u, xi, x2))
    ident = {tid(l, x): tid(L.identity[l], X.cats[l].identity[x], x) for (l, x) in objs}
    out_by_obj = defaultdict(list)
    for m in mors:
        out_by_obj[m[1]].append(m)
    table = {}
    for (fid, fs, fd, u1, xi1, _) in mors:
        l = L.dst[u1]
        for (gid, gs, gd, u2, xi2, x3) in out_by_obj[fd]:
            comp = X.cats[l].compose(X.functors[u1].mormap[xi2], xi1)
            table[(gid, fid)] = tid(L.compose(u1, u2), comp, x3)
    return FinCat([tid(*o) for o in objs], [m[:3] for m in mors], ident, table)


def _contravariant_grothendieck_diagram(X: CatDiagram) -> CatDiagram:
    """Reinterpret a covariant diagram on L as the contravariant diagram on L^op it is."""
    return CatDiagram(opposite(X.index), X.cats, X.functors)


def under_diagram(L: FinCat) -> CatDiagram:
    """The contravariant functor l ↦ l/L, returned as a covariant diagram on L^op.

    For u: l0 → l1 the functor l1/L → l0/L precomposes with u.
    """
    cats = {l: under_category(L, l) for l in L.objects}
    functors = {}
    for u in L.src:
        l0, l1 = L.src[u], L.dst[u]
        c1, c0 = cats[l1], cats[l0]
        obmap = {}
        for (c, f, g) in ((c, f, "-") for c in L.objects for f in L.hom(l1, c)):
            obmap[tid(c, f, g)] = tid(c, L.compose(f, u), g)
        mormap = {}
        for m in c1.src:
            # morphism id is tid(lam, source-object-id)
            lam, srcobj = _split_comma_mor(m)
            mormap[m] = tid(lam, obmap[srcobj])
        functors[u] = Functor(c1, c0, obmap, mormap)
    return CatDiagram(opposite(L), cats, functors)


def _split_comma_mor(m: str) -> tuple[str, str]:
    # m = "(lam,(c,f,g))"; lam never contains a top-level comma-free '(' issue since
    # morphism names of L are plain strings or nested tids; split at first top-level comma.
    inner = m[1:-1]
    depth = 0
    for i, ch in enumerate(inner):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            return inner[:i], inner[i + 1 :]
    raise CategoryError(f"malformed comma morphism id {m!r}")


# ---------------------------------------------------------------------------
# quotient categories from presentations (used for coends)


class _PathEnumerator:
    """Todd–Coxeter style enumeration of a category given by generators and relations.

    Generators are morphisms of a disjoint union of finite categories, already
    mapped to object classes.  Relations are the composition tables of the pieces
    and the given identifications of generators; identity generators are identified
    with the empty path.
    """

    def __init__(self, objects: list[str], gens: dict[str, tuple[str, str]], identities: set[str],
                 relations: list[tuple[str, str, str]], limit: int):
        self.objects = objects
        self.gens = gens
        self.identities = identities
        self.relations = relations
        self.limit = limit
        self.parent: list[int] = []
        self.src: list[str] = []
        self.dst: list[str] = []
        self.word: list[tuple[str, ...]] = []
        self.trans: list[dict[str, int]] = []
        self.gens_from: dict[str, list[str]] = defaultdict(list)
        for g, (s, _) in gens.items():
            self.gens_from[s].append(g)
        self.pending: list[tuple[int, int]] = []

    def new(self, s: str, d: str, word: tuple[str, ...]) -> int:
        if len(self.parent) >= self.limit:
            raise CategoryError("presentation enumeration exceeded its node limit")
        self.parent.append(len(self.parent))
        self.src.append(s)
        self.dst.append(d)
        self.word.append(word)
        self.trans.append({})
        return len(self.parent) - 1

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, a: int, b: int) -> None:
        self.pending.append((a, b))
        while self.pending:
            x, y = self.pending.pop()
            x, y = self.find(x), self.find(y)
            if x == y:
                continue
            if x > y:
                x, y = y, x
            self.parent[y] = x
            for g, t in self.trans[y].items():
                if g in self.trans[x]:
                    self.pending.append((self.trans[x][g], t))
                else:
                    self.trans[x][g] = t
            self.trans[y] = {}

    def step(self, p: int, g: str) -> int:
        p = self.find(p)
        t = self.trans[p].get(g)
        if t is None:
            if g in self.identities:
                t = p
            else:
                t = self.new(self.src[p], self.gens[g][1], (g,) + self.word[p])
            self.trans[p][g] = t
        return self.find(t)

    def run(self) -> None:
        roots = {o: self.new(o, o, ()) for o in self.objects}
        self.roots = roots
        i = 0
        while i < len(self.parent):
            if self.find(i) == i:
                # apply relations at node i: g·(f·p) = h·p
                for g, f, h in self.relations:
                    if self.gens[f][0] == self.dst[i]:
                        a = self.step(self.step(i, f), g)
                        b = self.step(i, h)
                        if a != b:
                            self.union(a, b)
                for g in list(self.gens_from[self.dst[self.find(i)]]):
                    if self.find(i) == i:
                        self.step(i, g)
            i += 1
        # a final sweep so that every live node is closed under all relations
        changed = True
        while changed:
            changed = False
            for i in range(len(self.parent)):
                if self.find(i) != i:
                    continue
                for g in self.gens_from[self.dst[i]]:
                    before = len(self.parent)
                    self.step(i, g)
                    changed |= len(self.parent) != before
                for g, f, h in self.relations:
                    if self.gens[f][0] == self.dst[i]:
                        a = self.step(self.step(i, f), g)
                        b = self.step(i, h)
                        if a != b:
                            self.union(a, b)
                            changed = True

    def category(self, name: Callable[[int], str]) -> FinCat:
        live = [i for i in range(len(self.parent)) if self.find(i) == i]
        ident = {o: name(self.find(r)) for o, r in self.roots.items()}
        mors = [(name(i), self.src[i], self.dst[i]) for i in live]
        table = {}
        for f in live:
            for g in live:
                if self.src[g] != self.dst[f]:
                    continue
                p = f
                for gen in reversed(self.word[g]):
                    p = self.step(p, gen)
                table[(name(g), name(f))] = name(self.find(p))
        return FinCat(list(self.roots), mors, ident, table)


def quotient_presentation(pieces: list[FinCat], object_pairs: Iterable[tuple[str, str]],
                          morphism_pairs: Iterable[tuple[str, str]], limit: int = 50000) -> tuple[FinCat, dict[str, str]]:
    """Colimit-style quotient of a disjoint union of finite categories.

    ``pieces`` must have pairwise disjoint ids.  Returns the quotient category and
    the map sending each object and morphism id of the pieces to its class id.
    """
    parent: dict[str, str] = {}

    def find(x: str) -> str:
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in object_pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    all_objs = [o for c in pieces for o in c.objects]
    obj_class = {o: find(o) for o in all_objs}
    classes = sorted(set(obj_class.values()))
    gens: dict[str, tuple[str, str]] = {}
    identities = set()
    relations = []
    for c in pieces:
        for m in c.src:
            gens[m] = (obj_class[c.src[m]], obj_class[c.dst[m]])
        identities |= set(c.identity.values())
        for (g, f), h in c.table.items():
            if g in c.identity.values() or f in c.identity.values():
                continue
            relations.append((g, f, h))
    ident_of = {}
    for c in pieces:
        for o, i in c.identity.items():
            ident_of.setdefault(obj_class[o], i)
    for a, b in morphism_pairs:
        if gens[a] != gens[b]:
            raise CategoryError(f"identified morphisms {a}, {b} have different endpoints")
        # a·id = b·id forces a = b on every node
        relations.append((a, ident_of[gens[a][0]], b))
    enum = _PathEnumerator(classes, gens, identities, relations, limit)
    enum.run()
    names: dict[int, str] = {}
    for i in range(len(enum.parent)):
        if enum.find(i) == i:
            w = enum.word[i]
            names[i] = "id" + enum.src[i] if not w else "·".join(w)
    quotient = enum.category(lambda i: names[enum.find(i)])
    cls = {o: obj_class[o] for o in all_objs}
    for c in pieces:
        for m in c.src:
            root = enum.roots[obj_class[c.src[m]]]
            cls[m] = names[enum.step(root, m)]
    return quotient, cls


def cat_coend(W: CatDiagram, X: CatDiagram, limit: int = 50000) -> FinCat:
    """∫^L W(L)×X(L) for W contravariant (a covariant diagram on L^op) and X covariant on L.

    For u: l0 → l1 in L the pieces are identified by (W(u)w, x) ~ (w, X(u)x) on
    objects and morphisms; composites across pieces are generated freely and cut
    down by the composition tables.
    """
    L = X.index
    pieces = []
    for l in L.objects:
        pieces.append(relabel(product(W.cats[l], X.cats[l]), f"{l}|"))
    obj_pairs = []
    mor_pairs = []
    for u in L.src:
        l0, l1 = L.src[u], L.dst[u]
        Wu = W.functors[u]  # W(l1) → W(l0)
        Xu = X.functors[u]
        for w in W.cats[l1].objects:
            for x in X.cats[l0].objects:
                obj_pairs.append((f"{l0}|" + tid(Wu.obmap[w], x), f"{l1}|" + tid(w, Xu.obmap[x])))
        for w in W.cats[l1].src:
            for x in X.cats[l0].src:
                mor_pairs.append((f"{l0}|" + tid(Wu.mormap[w], x), f"{l1}|" + tid(w, Xu.mormap[x])))
    quotient, _ = quotient_presentation(pieces, obj_pairs, mor_pairs, limit)
    problems = validate_category(quotient)
    if problems:
        raise CategoryError("coend congruence closure produced a non-category: " + problems[0])
    return quotient


# ---------------------------------------------------------------------------
# isomorphism search


@dataclass
class IsoWitness:
    forward: Functor
    backward: Functor


def _signature(c: FinCat, o: str) -> tuple:
    loops = len(c.hom(o, o))
    return (loops, len(c.out_of(o)), len(c.into(o)))


def iso_categories(c: FinCat, d: FinCat, max_objects: int = 12) -> IsoWitness | None:
    """Exact isomorphism search with degree pruning; inputs are capped at ``max_objects``."""
    if len(c.objects) != len(d.objects) or len(c.src) != len(d.src):
        return None
    if len(c.objects) > max_objects:
        raise CategoryError(f"iso_categories is capped at {max_objects} objects")
    sig_c = {o: _signature(c, o) for o in c.objects}
    sig_d = {o: _signature(d, o) for o in d.objects}
    if sorted(sig_c.values()) != sorted(sig_d.values()):
        return None
    order = sorted(c.objects, key=lambda o: (-len(c.out_of(o)) - len(c.into(o)), o))
    omap: dict[str, str] = {}
    used: set[str] = set()

    def hom_counts_ok(o: str, p: str) -> bool:
        for o2, p2 in omap.items():
            if len(c.hom(o, o2)) != len(d.hom(p, p2)) or len(c.hom(o2, o)) != len(d.hom(p2, p)):
                return False
        return len(c.hom(o, o)) == len(d.hom(p, p))

    def extend_objects(i: int) -> IsoWitness | None:
        if i == len(order):
            return _match_morphisms(c, d, omap)
        o = order[i]
        for p in d.objects:
            if p in used or sig_d[p] != sig_c[o] or not hom_counts_ok(o, p):
                continue
            omap[o] = p
            used.add(p)
            found = extend_objects(i + 1)
            if found is not None:
                return found
            del omap[o]
            used.discard(p)
        return None

    return extend_objects(0)


def _match_morphisms(c: FinCat, d: FinCat, omap: dict[str, str]) -> IsoWitness | None:
    """Given an object bijection, search for a compatible bijection on morphisms."""
    mors = sorted(c.src, key=lambda m: (not c.is_identity(m), m))
    mmap: dict[str, str] = {}
    used: set[str] = set()
    producing = defaultdict(list)
    for (g, f), h in c.table.items():
        producing[h].append((g, f))

    def consistent(m: str) -> bool:
        for g, f in producing[m]:
            if g in mmap and f in mmap and d.table[(mmap[g], mmap[f])] != mmap[m]:
                return False
        for f in c.out_of(c.dst[m]):
            if f in mmap:
                gf = c.table[(f, m)]
                if gf in mmap and d.table[(mmap[f], mmap[m])] != mmap[gf]:
                    return False
        for g in c.into(c.src[m]):
            if g in mmap:
                mg = c.table[(m, g)]
                if mg in mmap and d.table[(mmap[m], mmap[g])] != mmap[mg]:
                    return False
        return True

    def full_check() -> bool:
        for (g, f), h in c.table.items():
            if d.table[(mmap[g], mmap[f])] != mmap[h]:
                return False
        return True

    def go(i: int) -> bool:
        if i == len(mors):
            return full_check()
        m = mors[i]
        if c.is_identity(m):
            cand = [d.identity[omap[c.src[m]]]]
        else:
            cand = [x for x in d.hom(omap[c.src[m]], omap[c.dst[m]]) if not d.is_identity(x)]
        for x in cand:
            if x in used:
                continue
            mmap[m] = x
            used.add(x)
            if consistent(m) and go(i + 1):
                return True
            del mmap[m]
            used.discard(x)
        return False

    if not go(0):
        return None
    inv_o = {v: k for k, v in omap.items()}
    inv_m = {v: k for k, v in mmap.items()}
    return IsoWitness(Functor(c, d, dict(omap), dict(mmap)), Functor(d, c, inv_o, inv_m))


def is_isomorphism(w: IsoWitness) -> bool:
    f, g = w.forward, w.backward
    if validate_functor(f) or validate_functor(g):
        return False
    back = compose_functors(g, f)
    fwd = compose_functors(f, g)
    return all(back.obmap[o] == o for o in f.source.objects) and all(back.mormap[m] == m for m in f.source.src) and \
        all(fwd.obmap[o] == o for o in g.source.objects) and all(fwd.mormap[m] == m for m in g.source.src)
