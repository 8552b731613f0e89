"""Σ-free operads in Cat and their concrete instances.

Every instance uses the right action of Σ_n.  Elements are planar trees or
permutations whose leaves carry the input labels 1..n; ``A·σ`` relabels input
``j`` as ``σ⁻¹(j)``, so that evaluating ``A·σ`` on ``(K_1..K_n)`` is the same as
evaluating ``A`` on ``(K_{σ⁻¹(1)}..K_{σ⁻¹(n)})``.

Trees are plain nested tuples: a leaf is a positive ``int`` and a node is
``(label, children)``.  The monoidal word operads use the ``int`` 0 for the
nullary word.
"""
from __future__ import annotations

import itertools
import json
import random
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, Iterable, Iterator, Sequence

from . import braid as br
from .braid import (
    BraidWord,
    Perm,
    all_perms,
    perm_block,
    perm_block_sum,
    perm_compose,
    perm_identity,
    perm_inverse,
)
from .cat_core import FinCat
from .reports import Report


class OperadError(ValueError):
    pass


class NonFreeActionError(OperadError):
    pass


# ---------------------------------------------------------------------------
# trees


def tree_leaves(t) -> list[int]:
    if isinstance(t, int):
        return [t] if t > 0 else []
    out: list[int] = []
    for c in t[1]:
        out.extend(tree_leaves(c))
    return out


def tree_map_leaves(t, f: Callable[[int], Any]):
    if isinstance(t, int):
        return f(t) if t > 0 else t
    return (t[0], tuple(tree_map_leaves(c, f) for c in t[1]))


def tree_map_labels(t, f: Callable[[Any, int], Any]):
    """Apply ``f(label, arity)`` to every node label."""
    if isinstance(t, int):
        return t
    return (f(t[0], len(t[1])), tuple(tree_map_labels(c, f) for c in t[1]))


def tree_graft(t, subs: Sequence, sizes: Sequence[int]):
    """Replace leaf j by ``subs[j-1]`` with its leaves shifted into block j."""
    offsets = list(itertools.accumulate([0] + list(sizes[:-1])))

    def go(x):
        if isinstance(x, int):
            if x <= 0:
                return x
            off = offsets[x - 1]
            return tree_map_leaves(subs[x - 1], lambda v: v + off)
        return (x[0], tuple(go(c) for c in x[1]))

    return go(t)


def tree_nodes(t) -> int:
    if isinstance(t, int):
        return 0
    return 1 + sum(tree_nodes(c) for c in t[1])


def tree_preorder(t) -> tuple:
    """Token sequence used as the total order on elements."""
    if isinstance(t, int):
        return ((1, t),)
    out: tuple = ((0, str(t[0]), len(t[1])),)
    for c in t[1]:
        out += tree_preorder(c)
    return out


def _relabel_in_order(t):
    leaves = tree_leaves(t)
    rank = {v: i + 1 for i, v in enumerate(sorted(leaves))}
    return tree_map_leaves(t, lambda v: rank[v])


def tree_random_cut(rng: random.Random, t, p: float = 0.4):
    """Cut t at a random antichain of subtrees covering every leaf.

    Returns (outer, pieces, fibers): outer has leaf k where piece k was cut out,
    pieces are relabelled 1..r in leaf order, and fibers[k] lists the original
    labels of piece k in increasing order.  Leafless subtrees may become pieces.
    """
    pieces: list = []

    def go(x):
        if isinstance(x, int) and x <= 0:
            return x
        if isinstance(x, int) or rng.random() < p:
            pieces.append(x)
            return len(pieces)
        return (x[0], tuple(go(c) for c in x[1]))

    outer = go(t)
    fibers = [sorted(tree_leaves(x)) for x in pieces]
    return outer, [_relabel_in_order(x) for x in pieces], fibers


# ---------------------------------------------------------------------------
# elements and morphisms


@dataclass(frozen=True)
class MonoidalWord:
    tree: Any

    @property
    def arity(self) -> int:
        return len(tree_leaves(self.tree))

    def __str__(self) -> str:
        return format_word(self.tree)


@dataclass(frozen=True)
class PermElt:
    perm: Perm

    @property
    def arity(self) -> int:
        return len(self.perm)

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.perm)) + "]"


@dataclass(frozen=True)
class FreeTree:
    tree: Any

    @property
    def arity(self) -> int:
        return len(tree_leaves(self.tree))

    def __str__(self) -> str:
        return format_free_tree(self.tree)


@dataclass(frozen=True)
class UnitOnly:
    @property
    def arity(self) -> int:
        return 1

    def __str__(self) -> str:
        return "id"


@dataclass(frozen=True)
class PosetWitness:
    source: Any
    target: Any

    def __str__(self) -> str:
        return f"{self.source} -> {self.target}"


@dataclass(frozen=True)
class TranslationPair:
    source: PermElt
    target: PermElt

    def __str__(self) -> str:
        return f"{self.source} -> {self.target}"


@dataclass(frozen=True)
class BraidMor:
    source: PermElt
    word: BraidWord

    @property
    def target(self) -> PermElt:
        return PermElt(perm_compose(br.underlying_permutation(self.word), self.source.perm))

    def __str__(self) -> str:
        return f"{self.source} --[{self.word}]--> {self.target}"


@dataclass(frozen=True)
class FreeGenPath:
    """Morphism of a free operad: a tree whose node labels are collection morphisms."""

    tree: Any

    def __str__(self) -> str:
        return format_free_tree(self.tree)


@dataclass
class FactorizationInitial:
    objects: tuple
    rho: Any
    comparisons: tuple | None = None


# ---------------------------------------------------------------------------
# text formats


def format_word(t) -> str:
    if isinstance(t, int):
        return str(t)
    parts = [format_word(c) if isinstance(c, int) else f"({format_word(c)})" for c in t[1]]
    return f" b{t[0]} ".join(parts)


_WORD_TOKEN = re.compile(r"\s*(\(|\)|b\d+|\d+)")
_SUBSCRIPTS = str.maketrans("₀₁₂₃₄₅₆₇₈₉", "0123456789")


def parse_word(text: str) -> MonoidalWord:
    """Parse '(1 b2 3) b1 (2 b2 4)'; box notation '1□₁2' or '1□_1 2' is accepted too."""
    text = re.sub(r"□(?:_(\d+)|([₀-₉]+))", lambda m: " b" + (m.group(1) or m.group(2).translate(_SUBSCRIPTS)) + " ", text)
    tokens: list[tuple[str, int]] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _WORD_TOKEN.match(text, pos)
        if not m:
            raise OperadError(f"unexpected character at column {pos + 1} in {text!r}")
        tokens.append((m.group(1), m.start(1) + 1))
        pos = m.end()
    i = 0

    def expr():
        nonlocal i
        terms = [term()]
        label = None
        while i < len(tokens) and tokens[i][0].startswith("b"):
            lab = int(tokens[i][0][1:])
            if label is not None and lab != label:
                raise OperadError(f"mixed operations without parentheses at column {tokens[i][1]}")
            label = lab
            i += 1
            terms.append(term())
        return terms[0] if label is None else (label, tuple(terms))

    def term():
        nonlocal i
        if i >= len(tokens):
            raise OperadError("unexpected end of word")
        tok, col = tokens[i]
        if tok == "(":
            i += 1
            t = expr()
            if i >= len(tokens) or tokens[i][0] != ")":
                raise OperadError(f"missing ')' for '(' at column {col}")
            i += 1
            return t
        if tok.isdigit():
            i += 1
            return int(tok)
        raise OperadError(f"unexpected token {tok!r} at column {col}")

    t = expr()
    if i != len(tokens):
        raise OperadError(f"trailing input at column {tokens[i][1]}")
    t = reduce_word(t)
    leaves = tree_leaves(t)
    if sorted(leaves) != list(range(1, len(leaves) + 1)):
        raise OperadError(f"leaves of {text!r} are not a permutation of 1..n")
    return MonoidalWord(t)


def format_free_tree(t) -> str:
    if isinstance(t, int):
        return str(t)
    return f"{t[0]}[" + ", ".join(format_free_tree(c) for c in t[1]) + "]"


_FREE_TOKEN = re.compile(r"\s*(\[|\]|,|[^\[\],\s]+)")


def parse_free_tree(text: str):
    tokens = _FREE_TOKEN.findall(text)
    i = 0

    def node():
        nonlocal i
        tok = tokens[i]
        i += 1
        if i < len(tokens) and tokens[i] == "[":
            i += 1
            kids = []
            while tokens[i] != "]":
                kids.append(node())
                if tokens[i] == ",":
                    i += 1
            i += 1
            return (tok, tuple(kids))
        if tok.isdigit():
            return int(tok)
        raise OperadError(f"bad free tree token {tok!r}")

    t = node()
    if i != len(tokens):
        raise OperadError(f"trailing input in free tree {text!r}")
    return t


# ---------------------------------------------------------------------------
# monoidal words


def reduce_word(t):
    """Drop nullary children, collapse unary nodes, merge nested equal labels."""
    if isinstance(t, int):
        return t
    label, kids = t
    out = []
    for k in kids:
        k = reduce_word(k)
        if isinstance(k, int) and k == 0:
            continue
        if not isinstance(k, int) and k[0] == label:
            out.extend(k[1])
        else:
            out.append(k)
    if not out:
        return 0
    if len(out) == 1:
        return out[0]
    return (label, tuple(out))


def word_restrict(w: MonoidalWord, S: Iterable[int]) -> MonoidalWord:
    """γ∩S relabelled order-preservingly to 1..|S|; the empty set gives the nullary word."""
    keep = set(S)
    t = tree_map_leaves(w.tree, lambda v: v if v in keep else 0)
    return MonoidalWord(_relabel_in_order(reduce_word(t)))


def pair_table(t) -> dict[tuple[int, int], tuple[int, bool]]:
    """For x<y: (label of the operation joining them, whether x comes first)."""
    out: dict[tuple[int, int], tuple[int, bool]] = {}

    def go(x):
        if isinstance(x, int):
            return [x] if x > 0 else []
        groups = [go(c) for c in x[1]]
        for a in range(len(groups)):
            for b in range(a + 1, len(groups)):
                for u in groups[a]:
                    for v in groups[b]:
                        out[(min(u, v), max(u, v))] = (x[0], u < v)
        return [v for g in groups for v in g]

    go(t)
    return out


@lru_cache(maxsize=None)
def _word_shapes(n: int, k: int, forbidden: int) -> tuple:
    if n == 1:
        return (-1,)
    out = []
    for label in range(1, k + 1):
        if label == forbidden:
            continue
        for comp in _compositions(n):
            if len(comp) < 2:
                continue
            for kids in itertools.product(*[_word_shapes(c, k, label) for c in comp]):
                out.append((label, tuple(kids)))
    return tuple(out)


@lru_cache(maxsize=None)
def _compositions(n: int) -> tuple:
    if n == 0:
        return ((),)
    out = []
    for first in range(1, n + 1):
        for rest in _compositions(n - first):
            out.append((first,) + rest)
    return tuple(out)


def _weak_compositions(m: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if m == 0:
            yield ()
        return
    for first in range(m + 1):
        for rest in _weak_compositions(m - first, parts - 1):
            yield (first,) + rest


def _fill_leaves(shape, labels: Sequence[int]):
    it = iter(labels)

    def go(x):
        if isinstance(x, int):
            return next(it) if x == -1 else x
        return (x[0], tuple(go(c) for c in x[1]))

    return go(shape)


# ---------------------------------------------------------------------------
# operad interface


class Operad:
    """Interface of a Σ-free operad in Cat with enumerable small arities."""

    name = "operad"
    strategy = "normalize"  # morphism equality in the homotopy colimit
    has_nullary = True
    finite_homs = True

    # objects ------------------------------------------------------------
    def objects(self, n: int) -> list:
        raise NotImplementedError

    def arity(self, a) -> int:
        return a.arity

    def unit(self):
        raise NotImplementedError

    def substitute(self, a, bs: Sequence):
        raise NotImplementedError

    def act(self, a, sigma: Perm):
        raise NotImplementedError

    def leaf_sequence(self, a) -> tuple[int, ...]:
        """Input label sitting at each position, left to right."""
        raise NotImplementedError

    def orbit_split(self, a) -> tuple[Any, Perm]:
        """(rep, σ) with a = rep·σ and rep the chosen orbit representative."""
        s = self.leaf_sequence(a)
        return self.act(a, s), perm_inverse(s)

    def orbit_rep(self, a):
        return self.orbit_split(a)[0]

    def key(self, a) -> tuple:
        return (str(a),)

    def is_object(self, a) -> bool:
        return True

    # morphisms ----------------------------------------------------------
    def source(self, f):
        return f.source

    def target(self, f):
        return f.target

    def identity(self, a):
        raise NotImplementedError

    def compose(self, g, f):
        raise NotImplementedError

    def hom(self, a, b) -> list:
        raise NotImplementedError

    def hom_witness(self, a, b):
        hs = self.hom(a, b)
        return hs[0] if hs else None

    def mor_substitute(self, g, fs: Sequence):
        raise NotImplementedError

    def mor_act(self, f, sigma: Perm):
        raise NotImplementedError

    def mor_equal(self, f, g) -> bool:
        return f == g

    def is_morphism(self, f) -> bool:
        return True

    def random_morphism(self, rng: random.Random, a, length: int = 4):
        """Some morphism out of ``a`` (used for sampling)."""
        objs = [b for b in self.objects(self.arity(a)) if self.hom(a, b)]
        b = rng.choice(objs)
        return rng.choice(self.hom(a, b))

    def random_object(self, rng: random.Random, n: int):
        objs = self.objects(n)
        return rng.choice(objs) if objs else None

    def random_split(self, rng: random.Random, t):
        """Random (b, cs, fibers) with t = (b ∗ ⊕cs)·σ, σ⁻¹ the concatenated fibers; None if unsupported."""
        return None

    # factorization ------------------------------------------------------
    def factorization_initial(self, b, cs: Sequence, gamma) -> FactorizationInitial:
        """Initial object of the component of (C;γ) in the factorization category."""
        raise NotImplementedError

    def factorization_morphisms(self, b, src: tuple, dst: tuple) -> list[tuple]:
        """All δ with (id_B ∗ ⊕δ)∘α = β, for src = (C, α) and dst = (D, β)."""
        cs, alpha = src
        ds, beta = dst
        choices = [self.hom(c, d) for c, d in zip(cs, ds)]
        out = []
        for deltas in itertools.product(*choices):
            lifted = self.mor_substitute(self.identity(b), list(deltas))
            if self.mor_equal(self.compose(lifted, alpha), beta):
                out.append(tuple(deltas))
        return out

    # serialization ------------------------------------------------------
    def format(self, a) -> str:
        return str(a)

    def parse(self, text: str):
        raise NotImplementedError

    def elt_to_json(self, a):
        return self.format(a)

    def elt_from_json(self, doc):
        return self.parse(doc)

    def mor_to_json(self, f):
        return {"source": self.elt_to_json(self.source(f)), "target": self.elt_to_json(self.target(f))}

    def mor_from_json(self, doc):
        a, b = self.elt_from_json(doc["source"]), self.elt_from_json(doc["target"])
        f = self.hom_witness(a, b)
        if f is None:
            raise OperadError(f"no morphism {a} -> {b}")
        return f

    def __repr__(self) -> str:
        return self.name


def block_offsets(sizes: Sequence[int]) -> list[int]:
    return list(itertools.accumulate([0] + list(sizes[:-1])))


# ---------------------------------------------------------------------------
# the initial operad


class InitialOperad(Operad):
    name = "initial"
    has_nullary = False

    def objects(self, n):
        return [UnitOnly()] if n == 1 else []

    def unit(self):
        return UnitOnly()

    def substitute(self, a, bs):
        if len(bs) != 1 or not isinstance(bs[0], UnitOnly):
            raise OperadError("arity mismatch in the initial operad")
        return UnitOnly()

    def act(self, a, sigma):
        if tuple(sigma) != (1,):
            raise OperadError("degree mismatch")
        return a

    def leaf_sequence(self, a):
        return (1,)

    def identity(self, a):
        return PosetWitness(a, a)

    def compose(self, g, f):
        return f

    def hom(self, a, b):
        return [PosetWitness(a, b)]

    def mor_substitute(self, g, fs):
        return g

    def mor_act(self, f, sigma):
        return f

    def factorization_initial(self, b, cs, gamma):
        return FactorizationInitial(tuple(cs), gamma, (self.identity(cs[0]),))

    def parse(self, text):
        if text.strip() not in ("id", "1"):
            raise OperadError("the initial operad has only the unit")
        return UnitOnly()


# ---------------------------------------------------------------------------
# monoidal word operads M_k


class MonoidalWordOperad(Operad):
    """M_k: words in k strictly associative operations with a common unit, as posets."""

    def __init__(self, k: int, name: str | None = None):
        if k < 1:
            raise OperadError("k must be positive")
        self.k = k
        self.name = name or f"Mk:{k}"
        self._objects: dict[int, list] = {}
        self._pairs: dict[Any, dict] = {}

    def objects(self, n):
        if n not in self._objects:
            if n == 0:
                self._objects[0] = [MonoidalWord(0)]
            else:
                out = []
                for shape in _word_shapes(n, self.k, 0):
                    for p in itertools.permutations(range(1, n + 1)):
                        out.append(MonoidalWord(_fill_leaves(shape, p)))
                self._objects[n] = out
        return self._objects[n]

    def unit(self):
        return MonoidalWord(1)

    def is_object(self, a):
        t = a.tree
        if reduce_word(t) != t:
            return False
        labels_ok = True

        def check(x):
            nonlocal labels_ok
            if not isinstance(x, int):
                if not 1 <= x[0] <= self.k:
                    labels_ok = False
                for c in x[1]:
                    check(c)

        check(t)
        leaves = tree_leaves(t)
        return labels_ok and sorted(leaves) == list(range(1, len(leaves) + 1))

    def substitute(self, a, bs):
        n = a.arity
        if len(bs) != n:
            raise OperadError(f"arity mismatch: {n} inputs, {len(bs)} operations")
        sizes = [b.arity for b in bs]
        return MonoidalWord(reduce_word(tree_graft(a.tree, [b.tree for b in bs], sizes)))

    def act(self, a, sigma):
        if len(sigma) != a.arity:
            raise OperadError("degree mismatch")
        inv = perm_inverse(sigma)
        return MonoidalWord(tree_map_leaves(a.tree, lambda v: inv[v - 1]))

    def leaf_sequence(self, a):
        return tuple(tree_leaves(a.tree))

    def random_split(self, rng, t):
        outer, pieces, fibers = tree_random_cut(rng, t.tree)
        return MonoidalWord(outer), [MonoidalWord(x) for x in pieces], fibers

    def key(self, a):
        return tree_preorder(a.tree)

    def pairs(self, a):
        p = self._pairs.get(a.tree)
        if p is None:
            p = pair_table(a.tree)
            if len(self._pairs) < 200000:
                self._pairs[a.tree] = p
        return p

    def leq(self, a, b) -> bool:
        if a.arity != b.arity:
            return False
        pb = self.pairs(b)
        for xy, (i, first) in self.pairs(a).items():
            j, first_b = pb[xy]
            if first_b == first:
                if j < i:
                    return False
            elif j <= i:
                return False
        return True

    def identity(self, a):
        return PosetWitness(a, a)

    def compose(self, g, f):
        if f.target != g.source:
            raise OperadError("morphisms are not composable")
        return PosetWitness(f.source, g.target)

    def hom(self, a, b):
        return [PosetWitness(a, b)] if self.leq(a, b) else []

    def is_morphism(self, f):
        return self.leq(f.source, f.target)

    def mor_substitute(self, g, fs):
        return PosetWitness(
            self.substitute(g.source, [f.source for f in fs]),
            self.substitute(g.target, [f.target for f in fs]),
        )

    def mor_act(self, f, sigma):
        return PosetWitness(self.act(f.source, sigma), self.act(f.target, sigma))

    def random_object(self, rng, n):
        if n == 0:
            return MonoidalWord(0)
        p = list(range(1, n + 1))
        rng.shuffle(p)
        return MonoidalWord(_fill_leaves(self._random_shape(rng, n, 0), p))

    def _random_shape(self, rng, n: int, forbidden: int):
        if n <= 6:
            return rng.choice(_word_shapes(n, self.k, forbidden))
        labels = [i for i in range(1, self.k + 1) if i != forbidden]
        if not labels:
            raise OperadError(f"no words of arity {n} in {self.name}")
        label = rng.choice(labels)
        if self.k == 1:
            comp = [1] * n
        else:
            cuts = sorted(rng.sample(range(1, n), rng.randint(1, min(n - 1, 3))))
            comp = [b - a for a, b in zip([0] + cuts, cuts + [n])]
        return (label, tuple(self._random_shape(rng, c, label) for c in comp))

    def random_morphism(self, rng, a, length=4):
        if a.arity <= 4:
            ups = [b for b in self.objects(a.arity) if self.leq(a, b)]
            return PosetWitness(a, rng.choice(ups))
        # move the pieces of a random cut up and regraft: substitution is functorial
        outer, pieces, fibers = tree_random_cut(rng, a.tree)
        outer = self.random_morphism(rng, MonoidalWord(outer)).target if len(pieces) < a.arity else MonoidalWord(outer)
        ups = [self.random_morphism(rng, MonoidalWord(x)).target if len(f) < a.arity else MonoidalWord(x)
               for x, f in zip(pieces, fibers)]
        sigma = perm_inverse(tuple(itertools.chain.from_iterable(fibers)))
        b = self.act(self.substitute(outer, ups), sigma)
        if not self.leq(a, b):
            raise OperadError(f"regrafted word {b} is not above {a}")
        return PosetWitness(a, b)

    def factorization_initial(self, b, cs, gamma):
        a = gamma.source
        sizes = [c.arity for c in cs]
        es = []
        for off, r in zip(block_offsets(sizes), sizes):
            es.append(word_restrict(a, range(off + 1, off + r + 1)))
        target = self.substitute(b, es)
        if not self.leq(a, target):
            raise OperadError(f"{a} does not factor through {b} with blocks {sizes}")
        comps = tuple(PosetWitness(e, c) for e, c in zip(es, cs))
        for e, c in zip(es, cs):
            if not self.leq(e, c):
                raise OperadError(f"restriction {e} is not below {c}")
        return FactorizationInitial(tuple(es), PosetWitness(a, target), comps)

    def parse(self, text):
        w = parse_word(text)
        if not self.is_object(w):
            raise OperadError(f"{text!r} is not a word of {self.name}")
        return w


# ---------------------------------------------------------------------------
# permutation based operads


def _perm_substitute(a: Perm, bs: Sequence[Perm]) -> Perm:
    if len(bs) != len(a):
        raise OperadError(f"arity mismatch: {len(a)} inputs, {len(bs)} operations")
    return perm_compose(perm_block(a, [len(b) for b in bs]), perm_block_sum(bs))


class _PermObjects(Operad):
    def objects(self, n):
        if n == 0 and not self.has_nullary:
            return []
        return [PermElt(p) for p in all_perms(n)]

    def unit(self):
        return PermElt((1,))

    def substitute(self, a, bs):
        if not self.has_nullary and any(len(b.perm) == 0 for b in bs):
            raise OperadError(f"{self.name} has no nullary operations")
        return PermElt(_perm_substitute(a.perm, [b.perm for b in bs]))

    def act(self, a, sigma):
        if len(sigma) != len(a.perm):
            raise OperadError("degree mismatch")
        return PermElt(perm_compose(a.perm, tuple(sigma)))

    def leaf_sequence(self, a):
        return perm_inverse(a.perm)

    def key(self, a):
        return a.perm

    def is_object(self, a):
        return br.perm_is_valid(a.perm) and (self.has_nullary or len(a.perm) > 0)

    def random_object(self, rng, n):
        if n == 0 and not self.has_nullary:
            return None
        p = list(range(1, n + 1))
        rng.shuffle(p)
        return PermElt(tuple(p))

    def format(self, a):
        return str(a)

    def parse(self, text):
        vals = json.loads(text) if isinstance(text, str) else list(text)
        p = PermElt(tuple(int(v) for v in vals))
        if not self.is_object(p):
            raise OperadError(f"{text!r} is not a permutation")
        return p

    def elt_to_json(self, a):
        return list(a.perm)

    def elt_from_json(self, doc):
        return self.parse(doc if isinstance(doc, str) else json.dumps(doc))


class TranslationOperad(_PermObjects):
    """Σ̃: objects are permutations, exactly one morphism between any two objects."""

    def __init__(self, with_nullary: bool = True):
        self.has_nullary = with_nullary
        self.name = "SigmaTilde" if with_nullary else "SigmaHat"

    def identity(self, a):
        return TranslationPair(a, a)

    def compose(self, g, f):
        if f.target != g.source:
            raise OperadError("morphisms are not composable")
        return TranslationPair(f.source, g.target)

    def hom(self, a, b):
        return [TranslationPair(a, b)] if a.arity == b.arity else []

    def hom_witness(self, a, b):
        return TranslationPair(a, b)

    def mor_substitute(self, g, fs):
        return TranslationPair(
            self.substitute(g.source, [f.source for f in fs]),
            self.substitute(g.target, [f.target for f in fs]),
        )

    def mor_act(self, f, sigma):
        return TranslationPair(self.act(f.source, sigma), self.act(f.target, sigma))

    def random_morphism(self, rng, a, length=4):
        return TranslationPair(a, self.random_object(rng, a.arity))

    def factorization_initial(self, b, cs, gamma):
        # every object of a component is initial; keep the queried one
        return FactorizationInitial(tuple(cs), gamma, tuple(self.identity(c) for c in cs))


def block_swap_braid(a: int, b: int) -> BraidWord:
    """Positive braid moving a block of a strands across a block of b strands to its right."""
    p = tuple([t + b for t in range(1, a + 1)] + [t for t in range(1, b + 1)])
    return br.permutation_braid(p)


def cable(word: BraidWord, widths: Sequence[int]) -> BraidWord:
    """Replace the strand starting at position s by a ribbon of ``widths[s-1]`` parallel strands."""
    if len(widths) != word.n:
        raise OperadError("one width per strand is required")
    cur = list(widths)
    total = sum(widths)
    pieces: list[tuple] = []
    for i, e in reversed(word.letters):
        a, b = cur[i - 1], cur[i]
        off = sum(cur[: i - 1])
        piece = block_swap_braid(a, b) if e == 1 else block_swap_braid(b, a).inverse()
        pieces.append(tuple((g + off, s) for g, s in piece.letters))
        cur[i - 1], cur[i] = b, a
    letters: tuple = ()
    for piece in pieces:
        letters = piece + letters
    return BraidWord(total, letters)


class BraidOperad(_PermObjects):
    """Br (or Br⁺ with ``positive=True``): morphisms σ→π are braids b with p(b)∘σ = π."""

    strategy = "solve"
    finite_homs = False

    def __init__(self, positive: bool = False, cap: int = br.DEFAULT_WORD_CAP):
        self.positive = positive
        self.cap = cap
        self.has_nullary = True
        self.name = "BrPlus" if positive else "Br"

    def mor(self, source: PermElt, word: BraidWord) -> BraidMor:
        if self.positive and not word.positive:
            raise OperadError("Br⁺ morphisms are positive braids")
        if word.n != source.arity:
            raise OperadError("braid strand count differs from arity")
        return BraidMor(source, word)

    def identity(self, a):
        return BraidMor(a, br.identity_braid(a.arity))

    def compose(self, g, f):
        if f.target != g.source:
            raise OperadError("morphisms are not composable")
        return BraidMor(f.source, g.word * f.word)

    def hom(self, a, b):
        raise OperadError("braid hom-sets are infinite; use hom_witness")

    def hom_witness(self, a, b):
        if a.arity != b.arity:
            return None
        return BraidMor(a, br.permutation_braid(perm_compose(b.perm, perm_inverse(a.perm))))

    def mor_substitute(self, g, fs):
        a = g.source.perm
        if len(fs) != len(a):
            raise OperadError("arity mismatch")
        ainv = perm_inverse(a)
        widths = [fs[ainv[s] - 1].source.arity for s in range(len(a))]
        inner = br.block_sum([fs[ainv[s] - 1].word for s in range(len(a))])
        word = cable(g.word, widths) * inner
        return BraidMor(self.substitute(g.source, [f.source for f in fs]), word)

    def mor_act(self, f, sigma):
        return BraidMor(self.act(f.source, sigma), f.word)

    def mor_equal(self, f, g):
        return f.source == g.source and br.braid_equal(f.word, g.word, cap=None)

    def is_morphism(self, f):
        return (not self.positive) or f.word.positive

    def random_morphism(self, rng, a, length=4):
        n = a.arity
        if n < 2:
            return self.identity(a)
        letters = tuple(
            (rng.randint(1, n - 1), 1 if self.positive else rng.choice((1, -1)))
            for _ in range(rng.randint(0, length))
        )
        return BraidMor(a, BraidWord(n, letters))

    def factorization_initial(self, b, cs, gamma):
        # every object of a component is initial (the block subgroup is a group)
        return FactorizationInitial(tuple(cs), gamma, tuple(self.identity(c) for c in cs))

    def factorization_morphisms(self, b, src, dst):
        cs, alpha = src
        ds, beta = dst
        if alpha.source != beta.source:
            return []
        sizes = [c.arity for c in cs]
        bp = b.perm
        binv = perm_inverse(bp)
        slot_sizes = [sizes[binv[s] - 1] for s in range(len(bp))]
        parts = br.block_decompose(beta.word * alpha.word.inverse(), slot_sizes)
        if parts is None:
            return []
        deltas = tuple(BraidMor(c, parts[bp[j] - 1]) for j, c in enumerate(cs))
        if any(d.target != t for d, t in zip(deltas, ds)):
            return []
        if self.positive and not all(br.garside_normal_form(d.word, cap=None).power >= 0 for d in deltas):
            return []
        return [deltas]

    def mor_to_json(self, f):
        return {"source": list(f.source.perm), "braid": str(f.word)}

    def mor_from_json(self, doc):
        src = self.elt_from_json(doc["source"])
        return self.mor(src, BraidWord.parse(src.arity, doc["braid"]))


# ---------------------------------------------------------------------------
# free operads


def check_free_action(cat: FinCat, n: int, action: dict[Perm, tuple[dict, dict]]) -> None:
    """Raise NonFreeActionError if some σ ≠ id fixes an object or morphism of ``cat``."""
    for sigma, (obmap, mormap) in action.items():
        if tuple(sigma) == perm_identity(n):
            continue
        for o in cat.objects:
            if obmap[o] == o:
                raise NonFreeActionError(f"{sigma} fixes object {o}")
        for m in cat.src:
            if mormap[m] == m:
                raise NonFreeActionError(f"{sigma} fixes morphism {m}")


class FreeOperad(Operad):
    """Free operad on the collection K(n) = G_n × Σ_n (free right action on the second factor).

    Elements are planar trees whose nodes carry objects of the G_n and whose
    leaves carry input labels; morphisms keep the tree and change node labels
    along morphisms of the G_n.
    """

    def __init__(self, generators: dict[int, FinCat], node_cap: int | None = None, name: str = "Free"):
        self.generators = {int(n): g for n, g in generators.items() if g.objects}
        self.node_cap = node_cap
        self.name = name
        self.has_nullary = 0 in self.generators
        self._objects: dict[tuple, list] = {}

    def _cap(self, n: int) -> int:
        if self.node_cap is not None:
            return self.node_cap
        return max(n, 1) + (1 if (0 in self.generators or 1 in self.generators) else 0)

    def _shapes(self, leaves: int, budget: int) -> list:
        out = []
        if leaves == 1:
            out.append(-1)
        if budget <= 0:
            return out
        for a, g in sorted(self.generators.items()):
            for comp in _weak_compositions(leaves, a):
                for split in _weak_compositions(budget - 1, a) if a else [()]:
                    kid_lists = [self._shapes(c, s) for c, s in zip(comp, split)]
                    for kids in itertools.product(*kid_lists):
                        for label in g.objects:
                            out.append((label, tuple(kids)))
        # distinct splits can give the same tree
        seen = []
        uniq = set()
        for t in out:
            if t not in uniq:
                uniq.add(t)
                seen.append(t)
        return seen

    def objects(self, n, node_cap: int | None = None):
        cap = self._cap(n) if node_cap is None else node_cap
        key = (n, cap)
        if key not in self._objects:
            out = []
            for shape in self._shapes(n, cap):
                for p in itertools.permutations(range(1, n + 1)):
                    out.append(FreeTree(_fill_leaves(shape, p)))
            self._objects[key] = out
        return self._objects[key]

    def unit(self):
        return FreeTree(1)

    def _gen(self, arity: int) -> FinCat:
        try:
            return self.generators[arity]
        except KeyError:
            raise OperadError(f"no generators of arity {arity}") from None

    def is_object(self, a):
        ok = True

        def go(x):
            nonlocal ok
            if not isinstance(x, int):
                if len(x[1]) not in self.generators or x[0] not in self.generators[len(x[1])].identity:
                    ok = False
                for c in x[1]:
                    go(c)

        go(a.tree)
        leaves = tree_leaves(a.tree)
        return ok and sorted(leaves) == list(range(1, len(leaves) + 1))

    def substitute(self, a, bs):
        if len(bs) != a.arity:
            raise OperadError(f"arity mismatch: {a.arity} inputs, {len(bs)} operations")
        return FreeTree(tree_graft(a.tree, [b.tree for b in bs], [b.arity for b in bs]))

    def act(self, a, sigma):
        if len(sigma) != a.arity:
            raise OperadError("degree mismatch")
        inv = perm_inverse(sigma)
        return FreeTree(tree_map_leaves(a.tree, lambda v: inv[v - 1]))

    def random_split(self, rng, t):
        outer, pieces, fibers = tree_random_cut(rng, t.tree)
        return FreeTree(outer), [FreeTree(x) for x in pieces], fibers

    def leaf_sequence(self, a):
        return tuple(tree_leaves(a.tree))

    def key(self, a):
        return tree_preorder(a.tree)

    # morphisms are trees labelled by collection morphisms
    def source(self, f):
        return FreeTree(tree_map_labels(f.tree, lambda m, n: self._gen(n).src[m]))

    def target(self, f):
        return FreeTree(tree_map_labels(f.tree, lambda m, n: self._gen(n).dst[m]))

    def identity(self, a):
        return FreeGenPath(tree_map_labels(a.tree, lambda o, n: self._gen(n).identity[o]))

    def compose(self, g, f):
        def go(x, y):
            if isinstance(x, int):
                if x != y:
                    raise OperadError("morphisms are not composable")
                return x
            if isinstance(y, int) or len(x[1]) != len(y[1]):
                raise OperadError("morphisms are not composable")
            return (self._gen(len(x[1])).compose(x[0], y[0]), tuple(go(a, b) for a, b in zip(x[1], y[1])))

        return FreeGenPath(go(g.tree, f.tree))

    def hom(self, a, b):
        cells: list[list[str]] = []

        def go(x, y) -> bool:
            if isinstance(x, int) or isinstance(y, int):
                return x == y
            if len(x[1]) != len(y[1]):
                return False
            cells.append(self._gen(len(x[1])).hom(x[0], y[0]))
            return all(go(u, v) for u, v in zip(x[1], y[1]))

        if not go(a.tree, b.tree):
            return []
        out = []
        for choice in itertools.product(*cells):
            it = iter(choice)
            out.append(FreeGenPath(tree_map_labels(a.tree, lambda o, n: next(it))))
        return out

    def mor_substitute(self, g, fs):
        sizes = [self.source(f).arity for f in fs]
        return FreeGenPath(tree_graft(g.tree, [f.tree for f in fs], sizes))

    def mor_act(self, f, sigma):
        inv = perm_inverse(sigma)
        return FreeGenPath(tree_map_leaves(f.tree, lambda v: inv[v - 1]))

    def random_morphism(self, rng, a, length=4):
        def go(x):
            if isinstance(x, int):
                return x
            g = self._gen(len(x[1]))
            return (rng.choice(g.out_of(x[0])), tuple(go(c) for c in x[1]))

        return FreeGenPath(go(a.tree))

    def _cut(self, b_tree, x_tree, sizes):
        """Split ``x_tree`` (shaped like B∗C) into the B-part and the pieces at B's leaves."""
        offsets = block_offsets(sizes)
        pieces: dict[int, Any] = {}

        def go(b, x):
            if isinstance(b, int):
                j = b
                off = offsets[j - 1]
                pieces[j] = tree_map_leaves(x, lambda v: v - off)
                return j
            if isinstance(x, int) or len(b[1]) != len(x[1]):
                raise OperadError("tree does not factor through the outer operation")
            return (x[0], tuple(go(u, v) for u, v in zip(b[1], x[1])))

        top = go(b_tree, x_tree)
        return top, [pieces[j] for j in range(1, len(sizes) + 1)]

    def factorization_initial(self, b, cs, gamma):
        sizes = [c.arity for c in cs]
        a = self.source(gamma)
        _, a_pieces = self._cut(b.tree, a.tree, sizes)
        top_cells, g_pieces = self._cut(b.tree, gamma.tree, sizes)
        es = tuple(FreeTree(p) for p in a_pieces)
        for e, r in zip(es, sizes):
            if sorted(tree_leaves(e.tree)) != list(range(1, r + 1)):
                raise OperadError("tree does not factor through the given blocks")
        rho_pieces = [self.identity(e).tree for e in es]
        rho = FreeGenPath(tree_graft(top_cells, rho_pieces, sizes))
        comps = tuple(FreeGenPath(p) for p in g_pieces)
        return FactorizationInitial(es, rho, comps)

    def format(self, a):
        return format_free_tree(a.tree)

    def parse(self, text):
        t = parse_free_tree(text)
        a = FreeTree(t)
        if not self.is_object(a):
            raise OperadError(f"{text!r} is not an element of {self.name}")
        return a

    def mor_to_json(self, f):
        return {"cells": format_free_tree(f.tree)}

    def mor_from_json(self, doc):
        return FreeGenPath(parse_free_tree(doc["cells"]))

    def collection_to_json(self) -> dict:
        return {"generators": {str(n): g.to_json() for n, g in sorted(self.generators.items())}}

    @classmethod
    def from_json(cls, doc: dict, name: str = "Free") -> "FreeOperad":
        gens = {int(n): FinCat.from_json(g) for n, g in doc["generators"].items()}
        for n, acts in doc.get("sigma", {}).items():
            n = int(n)
            action = {tuple(json.loads(p)): (a["obmap"], a["mormap"]) for p, a in acts.items()}
            check_free_action(FinCat.from_json(doc["collection"][str(n)]), n, action)
        return cls(gens, name=name)


def one_object_binary_collection() -> dict[int, FinCat]:
    """One generator in arity 2 with only its identity."""
    from .cat_core import point

    return {2: point()}


class FaultyOperad(Operad):
    """Wrap an operad and corrupt one entry of its substitution table (for testing the checkers)."""

    def __init__(self, inner: Operad, outer_arity: int = 2, inner_arity: int = 2):
        self.inner = inner
        self.name = f"faulty {inner.name}"
        self.has_nullary = inner.has_nullary
        self.strategy = inner.strategy
        self._victim = (inner.objects(outer_arity)[0], inner.objects(inner_arity)[0])

    def __getattr__(self, attr):
        return getattr(self.inner, attr)

    def objects(self, n):
        return self.inner.objects(n)

    def unit(self):
        return self.inner.unit()

    def act(self, a, sigma):
        return self.inner.act(a, sigma)

    def leaf_sequence(self, a):
        return self.inner.leaf_sequence(a)

    def substitute(self, a, bs):
        out = self.inner.substitute(a, bs)
        if a == self._victim[0] and bs and bs[0] == self._victim[1]:
            n = self.inner.arity(out)
            out = self.inner.act(out, tuple(range(n, 0, -1)))
        return out

    def identity(self, a):
        return self.inner.identity(a)

    def compose(self, g, f):
        return self.inner.compose(g, f)

    def hom(self, a, b):
        return self.inner.hom(a, b)

    def mor_substitute(self, g, fs):
        return self.inner.mor_substitute(g, fs)

    def mor_act(self, f, sigma):
        return self.inner.mor_act(f, sigma)


# ---------------------------------------------------------------------------
# selectors


def parse_operad(selector: str, base_dir: str | None = None) -> Operad:
    """'initial', 'Mk:k', 'Minf:k', 'SigmaTilde', 'SigmaHat', 'Br', 'BrPlus', 'Free:<file>'."""
    sel = selector.strip()
    if sel == "initial":
        return InitialOperad()
    if sel.startswith("Mk:") or sel.startswith("Minf:"):
        head, _, k = sel.partition(":")
        try:
            kk = int(k)
        except ValueError:
            raise OperadError(f"bad operad selector {selector!r}") from None
        return MonoidalWordOperad(kk, name=sel)
    if sel == "SigmaTilde":
        return TranslationOperad(True)
    if sel == "SigmaHat":
        return TranslationOperad(False)
    if sel == "Br":
        return BraidOperad(False)
    if sel == "BrPlus":
        return BraidOperad(True)
    if sel.startswith("Free:"):
        import os

        path = sel[5:]
        if path == "binary":
            return FreeOperad(one_object_binary_collection(), name=sel)
        if base_dir and not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        with open(path) as fh:
            return FreeOperad.from_json(json.load(fh), name=sel)
    raise OperadError(f"unknown operad selector {selector!r}")


# ---------------------------------------------------------------------------
# operad morphisms


@dataclass
class OperadMap:
    name: str
    source: Operad
    target: Operad
    on_object: Callable
    on_morphism: Callable

    def __call__(self, x):
        if isinstance(x, (PosetWitness, TranslationPair, BraidMor, FreeGenPath)):
            return self.on_morphism(x)
        return self.on_object(x)


def _word_perm(w: MonoidalWord) -> PermElt:
    # π(i_k) = k for the leaf sequence (i_1..i_n)
    return PermElt(perm_inverse(tuple(tree_leaves(w.tree))))


def lambda_map(k: int) -> OperadMap:
    """M_k → Σ̃ reading the leaf sequence as a permutation."""
    src, tgt = MonoidalWordOperad(k), TranslationOperad(True)
    return OperadMap(
        "lambda", src, tgt, _word_perm, lambda f: TranslationPair(_word_perm(f.source), _word_perm(f.target))
    )


def beta_map() -> OperadMap:
    """M_2 → Br⁺: a poset morphism becomes the positive braid joining equal inputs."""
    src, tgt = MonoidalWordOperad(2), BraidOperad(True)

    def on_mor(f):
        a, b = _word_perm(f.source), _word_perm(f.target)
        return BraidMor(a, br.permutation_braid(perm_compose(b.perm, perm_inverse(a.perm))))

    return OperadMap("beta", src, tgt, _word_perm, on_mor)


def mu_map() -> OperadMap:
    """Br⁺ → Br, the inclusion."""
    return OperadMap("mu", BraidOperad(True), BraidOperad(False), lambda a: a, lambda f: f)


def iota_map(k: int) -> OperadMap:
    """M_k → M_{k+1}, the inclusion."""
    return OperadMap("iota", MonoidalWordOperad(k), MonoidalWordOperad(k + 1), lambda a: a, lambda f: f)


def component_category(op: Operad, n: int) -> FinCat:
    """M(n) as a finite category (needs finite hom-sets)."""
    if not op.finite_homs:
        raise OperadError(f"{op.name}({n}) has infinite hom-sets")
    objs = op.objects(n)
    names = {op.key(a): op.format(a) for a in objs}
    homs, mors, ident = {}, [], {}
    for a in objs:
        for b in objs:
            hs = op.hom(a, b)
            ids = [f"{names[op.key(a)]} -> {names[op.key(b)]}" + (f" #{i}" if len(hs) > 1 else "") for i in range(len(hs))]
            homs[(op.key(a), op.key(b))] = list(zip(ids, hs))
            mors.extend((i, names[op.key(a)], names[op.key(b)]) for i in ids)
            if a == b:
                ident[names[op.key(a)]] = next(i for i, f in zip(ids, hs) if op.mor_equal(f, op.identity(a)))
    table = {}
    for a, b, c in itertools.product(objs, repeat=3):
        for i, f in homs[(op.key(a), op.key(b))]:
            for j, g in homs[(op.key(b), op.key(c))]:
                gf = op.compose(g, f)
                table[(j, i)] = next(k for k, h in homs[(op.key(a), op.key(c))] if op.mor_equal(h, gf))
    return FinCat([names[op.key(a)] for a in objs], mors, ident, table)


def operad_map_apply(name: str, x, k: int = 2):
    if name in ("lambda", "λ"):
        return lambda_map(k)(x)
    if name in ("iota", "ι"):
        return iota_map(k)(x)
    if name in ("beta", "β"):
        return beta_map()(x)
    if name in ("mu", "μ"):
        return mu_map()(x)
    raise OperadError(f"unknown operad map {name!r} (known: lambda, beta, mu, iota)")


# ---------------------------------------------------------------------------
# checkers


def _sample_or_all(items: list, sample: int | None, rng: random.Random) -> list:
    if sample is None or len(items) <= sample:
        return items
    return rng.sample(items, sample)


def _random_elt(op: Operad, rng: random.Random, n: int):
    return op.random_object(rng, n)


def _nested_instances(op: Operad, max_total: int, rng: random.Random, exhaustive_total: int, sample: int,
                      per_object: int = 2):
    """(A, [B_i]) instances.

    Every pair with arity(A) and Σ arity(B_i) both ≤ ``exhaustive_total`` is listed;
    each larger A up to ``max_total`` gets ``per_object`` random inner tuples, and
    ``sample`` further instances are drawn at random.
    """
    out = []
    for n in range(0, exhaustive_total + 1):
        for a in op.objects(n):
            for sizes in _weak_compositions_upto(n, exhaustive_total):
                lists = [op.objects(r) for r in sizes]
                if any(not l for l in lists):
                    continue
                for bs in itertools.product(*lists):
                    out.append((a, list(bs)))
    extra = []

    def draw(a, n):
        sizes = _random_sizes(rng, n, max_total, op.has_nullary)
        bs = [_random_elt(op, rng, r) for r in sizes]
        if all(b is not None for b in bs):
            extra.append((a, bs))

    for n in range(exhaustive_total + 1, max_total + 1):
        for a in op.objects(n):
            for _ in range(per_object):
                draw(a, n)
    for _ in range(sample):
        n = rng.randint(0, max_total)
        a = _random_elt(op, rng, n)
        if a is not None:
            draw(a, n)
    return out, extra


def _weak_compositions_upto(n: int, total: int) -> Iterator[tuple[int, ...]]:
    for t in range(total + 1):
        yield from _weak_compositions(t, n)


def _random_sizes(rng, n, max_total, nullary) -> list[int]:
    budget = rng.randint(n if not nullary else 0, max(max_total, n if not nullary else 0))
    lo = 0 if nullary else 1
    sizes = [lo] * n
    for _ in range(max(0, budget - lo * n)):
        if n:
            sizes[rng.randrange(n)] += 1
    return sizes


def check_operad_axioms(op: Operad, m_max: int = 3, sample: int = 200, seed: int = 0,
                        exhaustive_total: int | None = None, morphism_samples: int | None = None,
                        braid_len: int = 6) -> Report:
    """Unit, associativity, both equivariance laws and Σ-freeness on objects and morphisms."""
    rng = random.Random(seed)
    rep = Report(f"operad axioms for {op.name}")
    ex_total = min(m_max, 3) if exhaustive_total is None else exhaustive_total
    u = op.unit()
    # unit laws and action laws on every object up to m_max
    for n in range(0, m_max + 1):
        perms = all_perms(n)
        for a in op.objects(n):
            rep.expect(op.substitute(u, [a]) == a, "unit", f"id*{a}")
            rep.expect(op.substitute(a, [u] * n) == a, "unit", f"{a}*(id..id)")
            rep.expect(op.act(a, perm_identity(n)) == a, "action", f"{a}·id")
            for s in perms:
                if s != perm_identity(n):
                    rep.expect(op.act(a, s) != a, "sigma-freeness", f"{a}·{s}")
        if n >= 1:
            objs = op.objects(n)
            for _ in range(min(sample, 50) if objs else 0):
                a = rng.choice(objs)
                s, t = rng.choice(perms), rng.choice(perms)
                rep.expect(op.act(op.act(a, s), t) == op.act(a, perm_compose(s, t)), "action", f"({a}·{s})·{t}")
    exhaustive, extra = _nested_instances(op, m_max, rng, ex_total, sample)
    rep.notes.append(f"{len(exhaustive)} exhaustive and {len(extra)} sampled substitution instances")
    for a, bs in exhaustive + extra:
        _check_substitution_laws(op, rep, rng, a, bs, m_max)
    _check_morphism_laws(op, rep, rng, m_max, morphism_samples or sample, braid_len)
    return rep


def _check_substitution_laws(op: Operad, rep: Report, rng: random.Random, a, bs, m_max: int) -> None:
    n = len(bs)
    sizes = [op.arity(b) for b in bs]
    ab = op.substitute(a, bs)
    rep.expect(op.arity(ab) == sum(sizes), "arity", f"{a}*{bs}")
    # associativity with random third level of total arity ≤ m_max
    cs = []
    for r in sizes:
        row = []
        for _ in range(r):
            k = rng.randint(0 if op.has_nullary else 1, 2)
            c = op.random_object(rng, k)
            row.append(c if c is not None else op.unit())
        cs.append(row)
    flat = [c for row in cs for c in row]
    lhs = op.substitute(ab, flat)
    rhs = op.substitute(a, [op.substitute(b, row) for b, row in zip(bs, cs)])
    rep.expect(lhs == rhs, "associativity", f"A={a} B={[str(b) for b in bs]} C={[str(c) for c in flat]}")
    # outer equivariance
    sigma = tuple(rng.sample(range(1, n + 1), n))
    permuted = [bs[sigma[j] - 1] for j in range(n)]
    lhs = op.substitute(op.act(a, sigma), permuted)
    rhs = op.act(ab, perm_block(sigma, [sizes[sigma[j] - 1] for j in range(n)]))
    rep.expect(lhs == rhs, "equivariance (outer)", f"A={a} σ={sigma} B={[str(b) for b in bs]}")
    # inner equivariance
    taus = [tuple(rng.sample(range(1, r + 1), r)) for r in sizes]
    lhs = op.substitute(a, [op.act(b, t) for b, t in zip(bs, taus)])
    rhs = op.act(ab, perm_block_sum(taus))
    rep.expect(lhs == rhs, "equivariance (inner)", f"A={a} τ={taus} B={[str(b) for b in bs]}")


def _check_morphism_laws(op: Operad, rep: Report, rng: random.Random, m_max: int, samples: int, braid_len: int):
    def rand_obj(n):
        return op.random_object(rng, n)

    for _ in range(samples):
        n = rng.randint(1, max(1, min(m_max, 3)))
        a = rand_obj(n)
        if a is None:
            continue
        f = op.random_morphism(rng, a, braid_len)
        g = op.random_morphism(rng, op.target(f), braid_len)
        rep.expect(op.is_morphism(f), "morphism typing", str(f))
        # identities
        rep.expect(op.mor_equal(op.compose(op.identity(op.target(f)), f), f), "category unit", str(f))
        rep.expect(op.mor_equal(op.compose(f, op.identity(a)), f), "category unit", str(f))
        sizes = _random_sizes(rng, n, m_max, op.has_nullary)
        bs = [rand_obj(r) for r in sizes]
        if any(b is None for b in bs):
            continue
        fs = [op.random_morphism(rng, b, braid_len) for b in bs]
        gs = [op.random_morphism(rng, op.target(x), braid_len) for x in fs]
        sub = op.mor_substitute(f, fs)
        rep.expect(op.source(sub) == op.substitute(a, bs), "morphism substitution typing", str(sub))
        rep.expect(op.target(sub) == op.substitute(op.target(f), [op.target(x) for x in fs]),
                   "morphism substitution typing", str(sub))
        rep.expect(op.is_morphism(sub), "morphism substitution typing", str(sub))
        # interchange: (g∘f)∗(g_i∘f_i) = (g∗g_i)∘(f∗f_i)
        lhs = op.mor_substitute(op.compose(g, f), [op.compose(y, x) for x, y in zip(fs, gs)])
        rhs = op.compose(op.mor_substitute(g, gs), sub)
        rep.expect(op.mor_equal(lhs, rhs), "functoriality of substitution", f"f={f} fs={[str(x) for x in fs]}")
        ids = op.mor_substitute(op.identity(a), [op.identity(b) for b in bs])
        rep.expect(op.mor_equal(ids, op.identity(op.substitute(a, bs))), "functoriality of substitution",
                   f"id {a}")
        # unit laws on morphisms
        rep.expect(op.mor_equal(op.mor_substitute(op.identity(op.unit()), [f]), f), "unit (morphisms)", str(f))
        rep.expect(op.mor_equal(op.mor_substitute(f, [op.identity(op.unit())] * n), f), "unit (morphisms)", str(f))
        # equivariance on morphisms
        sigma = tuple(rng.sample(range(1, n + 1), n))
        rs = [op.arity(b) for b in bs]
        lhs = op.mor_substitute(op.mor_act(f, sigma), [fs[sigma[j] - 1] for j in range(n)])
        rhs = op.mor_act(sub, perm_block(sigma, [rs[sigma[j] - 1] for j in range(n)]))
        rep.expect(op.mor_equal(lhs, rhs), "equivariance (outer, morphisms)", f"f={f} σ={sigma}")
        taus = [tuple(rng.sample(range(1, r + 1), r)) for r in rs]
        lhs = op.mor_substitute(f, [op.mor_act(x, t) for x, t in zip(fs, taus)])
        rhs = op.mor_act(sub, perm_block_sum(taus))
        rep.expect(op.mor_equal(lhs, rhs), "equivariance (inner, morphisms)", f"f={f} τ={taus}")
        # associativity on morphisms
        hs = []
        for x in fs:
            r = op.arity(op.source(x))
            row = []
            for _ in range(r):
                c = rand_obj(rng.randint(1, 2)) or op.unit()
                row.append(op.random_morphism(rng, c, braid_len))
            hs.append(row)
        flat = [h for row in hs for h in row]
        lhs = op.mor_substitute(sub, flat)
        rhs = op.mor_substitute(f, [op.mor_substitute(x, row) for x, row in zip(fs, hs)])
        rep.expect(op.mor_equal(lhs, rhs), "associativity (morphisms)", f"f={f}")
        # freeness on morphisms
        for s in all_perms(n)[1:]:
            rep.expect(not op.mor_equal(op.mor_act(f, s), f), "sigma-freeness (morphisms)", f"{f}·{s}")


# ---------------------------------------------------------------------------
# factorization condition


def factorization_initial(op: Operad, a, b, rs: Sequence[int], gamma, cs: Sequence | None = None
                          ) -> FactorizationInitial:
    """Initial object of the component of (C;γ) in the category of factorizations of ``a`` through ``b``.

    ``cs`` may be omitted for word operads, where the answer only depends on ``a``.
    """
    if cs is None:
        if not isinstance(op, MonoidalWordOperad):
            raise OperadError("the factors C_j are required for this operad")
        es = [word_restrict(a, range(o + 1, o + r + 1)) for o, r in zip(block_offsets(rs), rs)]
        target = op.substitute(b, es)
        if op.source(gamma) != a or not op.leq(a, op.target(gamma)):
            raise OperadError("γ is not a morphism out of A")
        if not op.leq(a, target):
            raise OperadError(f"{a} does not factor through {b} with blocks {list(rs)}")
        return FactorizationInitial(tuple(es), PosetWitness(a, target), None)
    if [op.arity(c) for c in cs] != list(rs):
        raise OperadError("block sizes do not match the factors")
    if op.source(gamma) != a or op.target(gamma) != op.substitute(b, list(cs)):
        raise OperadError("γ is not a morphism A → B∗(C_1⊕…⊕C_n)")
    return op.factorization_initial(b, cs, gamma)


def _factorization_instances(op: Operad, m_max: int, outer_max: int):
    """(m, B, rs) triples; blocks of size 0 only for outer arity ≤ 2."""
    for n in range(1, outer_max + 1):
        for b in op.objects(n):
            for m in range(0, m_max + 1):
                for rs in _weak_compositions(m, n):
                    if 0 in rs and (n > 2 or not op.has_nullary):
                        continue
                    yield m, b, rs


def check_factorization(op: Operad, m_max: int = 4, sample: int | None = None, seed: int = 0,
                        outer_max: int = 3, braid_len: int = 4) -> Report:
    """Every component of every factorization category has the computed initial object."""
    if isinstance(op, BraidOperad):
        return _check_factorization_braid(op, m_max, sample or 200, seed, braid_len)
    if isinstance(op, MonoidalWordOperad):
        return _check_factorization_words(op, m_max, outer_max)
    return _check_factorization_generic(op, m_max, outer_max, sample, seed)


def _check_factorization_generic(op: Operad, m_max: int, outer_max: int, sample: int | None, seed: int) -> Report:
    rep = Report(f"factorization condition for {op.name}")
    rng = random.Random(seed)
    triples = list(_factorization_instances(op, m_max, outer_max))
    for m, b, rs in triples:
        targets = []
        for cs in itertools.product(*[op.objects(r) for r in rs]):
            targets.append((cs, op.substitute(b, list(cs))))
        a_list = _sample_or_all(op.objects(m), sample, rng)
        for a in a_list:
            objs = [(cs, alpha) for cs, t in targets for alpha in op.hom(a, t)]
            if not objs:
                continue
            _check_one_factorization_category(op, rep, a, b, objs)
    return rep


def _check_one_factorization_category(op: Operad, rep: Report, a, b, objs: list) -> None:
    n = len(objs)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(n):
            if i != j and find(i) != find(j) and op.factorization_morphisms(b, objs[i], objs[j]):
                parent[find(i)] = find(j)
    for i, (cs, alpha) in enumerate(objs):
        init = op.factorization_initial(b, cs, alpha)
        e_obj = (init.objects, init.rho)
        where = f"A={a} B={b} C={[str(c) for c in cs]}"
        idx = next((k for k, o in enumerate(objs) if o[0] == e_obj[0] and op.mor_equal(o[1], e_obj[1])), None)
        if not rep.expect(idx is not None and find(idx) == find(i), "initial object lies in the component", where):
            continue
        for j in range(n):
            if find(j) != find(i):
                continue
            maps = op.factorization_morphisms(b, e_obj, objs[j])
            rep.expect(len(maps) == 1, "unique comparison from the initial object",
                       f"{where} to C'={[str(c) for c in objs[j][0]]}: {len(maps)} maps")
        again = op.factorization_initial(b, init.objects, init.rho)
        rep.expect(again.objects == init.objects and op.mor_equal(again.rho, init.rho), "idempotence", where)


def _check_factorization_words(op: MonoidalWordOperad, m_max: int, outer_max: int) -> Report:
    """M_k: restriction is monotone, so the candidate must sit below every object of the category."""
    import numpy as np

    rep = Report(f"factorization condition for {op.name}")
    index: dict[int, dict] = {}
    leq: dict[int, Any] = {}
    for r in range(0, m_max + 1):
        objs = op.objects(r)
        index[r] = {w: i for i, w in enumerate(objs)}
        leq[r] = _word_leq_matrix(op, objs)
    restrict_cache: dict[tuple, Any] = {}

    def restriction_indices(m: int, start: int, size: int):
        key = (m, start, size)
        if key not in restrict_cache:
            restrict_cache[key] = np.array(
                [index[size][word_restrict(a, range(start + 1, start + size + 1))] for a in op.objects(m)],
                dtype=np.int64)
        return restrict_cache[key]

    count = 0
    for m, b, rs in _factorization_instances(op, m_max, outer_max):
        offs = block_offsets(rs)
        e_idx = [restriction_indices(m, o, r) for o, r in zip(offs, rs)]
        radix = [len(op.objects(r)) for r in rs]
        ctuples = list(itertools.product(*[range(k) for k in radix]))
        t_idx = np.array([index[m][op.substitute(b, [op.objects(r)[c] for r, c in zip(rs, ct)])]
                          for ct in ctuples], dtype=np.int64)
        # index of B∗E(A) through the table of B∗C
        flat = np.zeros(len(op.objects(m)), dtype=np.int64)
        for e, k in zip(e_idx, radix):
            flat = flat * k + e
        be_idx = t_idx[flat] if len(t_idx) else flat
        rho_ok = leq[m][np.arange(len(op.objects(m))), be_idx]
        for ci, ct in enumerate(ctuples):
            sources = np.nonzero(leq[m][:, t_idx[ci]])[0]
            if len(sources) == 0:
                continue
            count += len(sources)
            ok = rho_ok[sources].copy()
            for j, (r, c) in enumerate(zip(rs, ct)):
                ok &= leq[r][e_idx[j][sources], c]
            if not ok.all():
                bad = sources[~ok][0]
                rep.fail("initial object below every factorization",
                         f"A={op.objects(m)[bad]} B={b} C={[str(op.objects(r)[c]) for r, c in zip(rs, ct)]}")
    rep.tick("initial object below every factorization", count)
    # idempotence on a few instances
    for m in range(1, m_max + 1):
        for a in op.objects(m)[:50]:
            init = op.factorization_initial(op.unit(), [a], PosetWitness(a, a))
            rep.expect(init.objects == (a,), "idempotence", str(a))
    return rep


def _word_leq_matrix(op: MonoidalWordOperad, objs: list):
    import numpy as np

    n = len(objs)
    if n == 0:
        return np.zeros((0, 0), dtype=bool)
    arity = objs[0].arity
    pairs = [(x, y) for x in range(1, arity + 1) for y in range(x + 1, arity + 1)]
    if not pairs:
        return np.ones((n, n), dtype=bool)
    label = np.zeros((n, len(pairs)), dtype=np.int64)
    first = np.zeros((n, len(pairs)), dtype=bool)
    for i, w in enumerate(objs):
        pt = op.pairs(w)
        for j, xy in enumerate(pairs):
            label[i, j], first[i, j] = pt[xy]
    same = first[:, None, :] == first[None, :, :]
    la, lb = label[:, None, :], label[None, :, :]
    ok = np.where(same, lb >= la, lb > la)
    return ok.all(axis=2)


def _check_factorization_braid(op: BraidOperad, m_max: int, sample: int, seed: int, braid_len: int) -> Report:
    rep = Report(f"factorization condition for {op.name} (sampled)")
    rng = random.Random(seed)
    for _ in range(sample):
        n = rng.randint(1, max(1, min(m_max, 3)))
        b = op.random_object(rng, n)
        m = rng.randint(0, m_max)
        rs = _random_sizes(rng, n, m, True)
        rs = _rebalance(rs, m, rng)
        cs = [op.random_object(rng, r) for r in rs]
        target = op.substitute(b, cs)
        # α: A → B∗C for a random A
        a = op.random_object(rng, sum(rs))
        base = op.hom_witness(a, target)
        loop = op.random_morphism(rng, target, braid_len)
        loop = op.compose(op.hom_witness(op.target(loop), target), loop)
        alpha = op.compose(loop, base)
        if not op.is_morphism(alpha):
            continue
        src = (tuple(cs), alpha)
        init = op.factorization_initial(b, cs, alpha)
        e_obj = (init.objects, init.rho)
        # local search: move along random block braids and check the comparison
        for _ in range(3):
            deltas = [op.random_morphism(rng, c, 2) for c in cs]
            lifted = op.mor_substitute(op.identity(b), deltas)
            dst = (tuple(op.target(d) for d in deltas), op.compose(lifted, alpha))
            maps = op.factorization_morphisms(b, e_obj, dst)
            where = f"B={b} C={[str(c) for c in cs]} α={alpha.word}"
            if not rep.expect(len(maps) == 1, "unique comparison from the initial object", where):
                continue
            found = maps[0]
            back = op.compose(op.mor_substitute(op.identity(b), list(found)), init.rho)
            rep.expect(op.mor_equal(back, dst[1]), "comparison commutes", where)
            # uniqueness: perturbing one block breaks the equation
            for j, d in enumerate(found):
                if d.source.arity >= 2:
                    bumped = list(found)
                    bumped[j] = BraidMor(d.source, d.word * BraidWord.of(d.source.arity, 1))
                    other = op.compose(op.mor_substitute(op.identity(b), bumped), init.rho)
                    rep.expect(not op.mor_equal(other, dst[1]), "unique comparison from the initial object",
                               where + " (perturbed)")
                    break
        # a full twist of two nonempty outer strands leaves the component
        if n >= 2:
            binv = perm_inverse(b.perm)
            if rs[binv[0] - 1] > 0 and rs[binv[1] - 1] > 0:
                twist = op.mor_substitute(BraidMor(b, BraidWord.of(n, 1, 1)), [op.identity(c) for c in cs])
                moved = (tuple(cs), op.compose(twist, alpha))
                rep.expect(not op.factorization_morphisms(b, e_obj, moved), "components are separated",
                           f"B={b} C={[str(c) for c in cs]}")
        again = op.factorization_initial(b, init.objects, init.rho)
        rep.expect(again.objects == init.objects and op.mor_equal(again.rho, init.rho), "idempotence", str(alpha))
    return rep


def _rebalance(rs: list[int], m: int, rng: random.Random) -> list[int]:
    rs = [0] * len(rs)
    for _ in range(m):
        rs[rng.randrange(len(rs))] += 1
    return rs


# ---------------------------------------------------------------------------
# operad maps: law checks


def check_operad_map(f: OperadMap, m_max: int = 4, sample: int = 300, seed: int = 0) -> Report:
    """Functoriality, compatibility with substitution and with the Σ-action."""
    rng = random.Random(seed)
    src, tgt = f.source, f.target
    rep = Report(f"operad map {f.name}: {src.name} -> {tgt.name}")
    for n in range(0, m_max + 1):
        objs = src.objects(n)
        for a in objs:
            rep.expect(tgt.is_object(f(a)) and tgt.arity(f(a)) == n, "image typing", str(a))
            for s in all_perms(n)[:6]:
                rep.expect(f(src.act(a, s)) == tgt.act(f(a), s), "equivariance", f"{a}·{s}")
        # every composable pair of morphisms
        if not src.finite_homs:
            for a in objs:
                f1 = src.random_morphism(rng, a)
                f2 = src.random_morphism(rng, src.target(f1))
                rep.expect(tgt.mor_equal(f(src.compose(f2, f1)), tgt.compose(f(f2), f(f1))),
                           "preserves composition", f"{f1} then {f2}")
                rep.expect(tgt.mor_equal(f(src.identity(a)), tgt.identity(f(a))), "preserves identities", str(a))
        elif len(objs) <= 600:
            ups = {a: [b for b in objs if src.hom(a, b)] for a in objs}
            for a in objs:
                for b in ups[a]:
                    fab = src.hom(a, b)[0]
                    img = f(fab)
                    rep.expect(tgt.source(img) == f(a) and tgt.target(img) == f(b), "morphism typing", str(fab))
                    for c in ups[b]:
                        fbc = src.hom(b, c)[0]
                        lhs = f(src.compose(fbc, fab))
                        rhs = tgt.compose(f(fbc), img)
                        rep.expect(tgt.mor_equal(lhs, rhs), "preserves composition", f"{a} -> {b} -> {c}")
                rep.expect(tgt.mor_equal(f(src.identity(a)), tgt.identity(f(a))), "preserves identities", str(a))
    for _ in range(sample):
        n = rng.randint(1, 3)
        a = src.random_object(rng, n)
        sizes = _random_sizes(rng, n, m_max, src.has_nullary)
        bs = [src.random_object(rng, r) for r in sizes]
        if a is None or any(b is None for b in bs):
            continue
        rep.expect(f(src.substitute(a, bs)) == tgt.substitute(f(a), [f(b) for b in bs]), "commutes with substitution",
                   f"{a}*{[str(b) for b in bs]}")
        g = src.random_morphism(rng, a)
        gs = [src.random_morphism(rng, b) for b in bs]
        lhs = f(src.mor_substitute(g, gs))
        rhs = tgt.mor_substitute(f(g), [f(x) for x in gs])
        rep.expect(tgt.mor_equal(lhs, rhs), "commutes with substitution (morphisms)", f"{g}*{[str(x) for x in gs]}")
    return rep
