"""Algebras over Cat-operads, lax morphisms, diagrams of algebras and bar levels.

An algebra pairs an operad with a *carrier* category and an action
``act(A, ks)`` on objects plus ``act_mor(alpha, fs)`` on morphisms.  Carriers
are small duck-typed category objects (see :class:`Carrier`); finite ones wrap
a :class:`FinCat`, others (finite sets, free algebras, homotopy colimits) are
lazy and only enumerate within explicit bounds.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Mapping, Sequence

from . import braid as br
from .braid import BraidWord, Perm, perm_block, perm_block_sum, perm_compose, perm_identity, perm_inverse
from .cat_core import FinCat, Functor, linear_order
from .operads import (
    BraidMor,
    BraidOperad,
    MonoidalWordOperad,
    Operad,
    OperadError,
    OperadMap,
    PermElt,
    TranslationOperad,
    TranslationPair,
    parse_operad,
)
from .reports import Report


class AlgebraError(ValueError):
    pass


class CapOverflowError(AlgebraError):
    """An action left the arity (or leaf) bound of a truncated free algebra."""


# ---------------------------------------------------------------------------
# carriers


class Carrier:
    """Category interface used by algebras; morphisms are opaque values."""

    finite = True

    def objects(self) -> list:
        raise NotImplementedError

    def hom(self, x, y) -> list:
        raise NotImplementedError

    def compose(self, g, f):
        raise NotImplementedError

    def identity(self, x):
        raise NotImplementedError

    def source(self, f):
        raise NotImplementedError

    def target(self, f):
        raise NotImplementedError

    def mor_eq(self, f, g) -> bool:
        return f == g

    def ob_eq(self, x, y) -> bool:
        return x == y

    def leaves(self, x) -> int:
        return 1

    def out_of(self, x) -> list:
        return [f for y in self.objects() for f in self.hom(x, y)]

    def random_morphism(self, rng: random.Random, x):
        outs = self.out_of(x)
        return rng.choice(outs) if outs else self.identity(x)

    def fmt(self, x) -> str:
        return str(x)


class CatCarrier(Carrier):
    def __init__(self, cat: FinCat):
        self.cat = cat

    def objects(self):
        return list(self.cat.objects)

    def hom(self, x, y):
        return self.cat.hom(x, y)

    def compose(self, g, f):
        return self.cat.compose(g, f)

    def identity(self, x):
        return self.cat.identity[x]

    def source(self, f):
        return self.cat.src[f]

    def target(self, f):
        return self.cat.dst[f]

    def out_of(self, x):
        return self.cat.out_of(x)


class FinSetCarrier(Carrier):
    """Skeletal finite sets and bijections; objects are sizes, morphisms permutations."""

    finite = False

    def __init__(self, max_object: int = 3):
        self.max_object = max_object

    def objects(self):
        return list(range(self.max_object + 1))

    def hom(self, x, y):
        return br.all_perms(x) if x == y else []

    def compose(self, g, f):
        return perm_compose(g, f)

    def identity(self, x):
        return perm_identity(x)

    def source(self, f):
        return len(f)

    def target(self, f):
        return len(f)

    def random_morphism(self, rng, x):
        p = list(range(1, x + 1))
        rng.shuffle(p)
        return tuple(p)


def as_carrier(c) -> Carrier:
    return c if isinstance(c, Carrier) else CatCarrier(c)


# ---------------------------------------------------------------------------
# algebras


class Algebra:
    """An operad together with a carrier category and a functorial action."""

    rule = "abstract"

    def __init__(self, operad: Operad, carrier: Carrier, name: str = "algebra"):
        self.operad = operad
        self.carrier = as_carrier(carrier)
        self.name = name

    def act(self, a, ks: Sequence):
        raise NotImplementedError

    def act_mor(self, alpha, fs: Sequence):
        raise NotImplementedError

    def evaluate(self, a, ks: Sequence):
        if self.operad.arity(a) != len(ks):
            raise AlgebraError(f"arity mismatch: {self.operad.format(a)} applied to {len(ks)} inputs")
        return self.act(a, ks)

    def __repr__(self) -> str:
        return self.name


def _fold(op, unit, xs):
    out = unit
    for x in xs:
        out = op(out, x)
    return out


class TensorAlgebra(Algebra):
    """Every operation acts as the iterated tensor of a strictly commutative monoid in Cat.

    The carrier must satisfy x⊗y = y⊗x on objects and morphisms, so operad
    morphisms act by identities.  This is the ``monoidal-word-eval`` rule: each
    product symbol of a word is evaluated by the same tensor.
    """

    rule = "monoidal-word-eval"

    def __init__(self, operad, carrier, tensor_ob, tensor_mor, unit, name="tensor algebra"):
        super().__init__(operad, carrier, name)
        self.tensor_ob = tensor_ob
        self.tensor_mor = tensor_mor
        self.unit = unit

    def act(self, a, ks):
        return _fold(self.tensor_ob, self.unit, ks)

    def act_mor(self, alpha, fs):
        return _fold(self.tensor_mor, self.carrier.identity(self.unit), fs)


def chain_group_category(size: int, order: int) -> tuple[FinCat, dict[str, tuple[int, int, int]]]:
    """The product of the chain 0<…<size-1 with the cyclic group of ``order``.

    Morphism ``"a-b/gk"`` is (a≤b, k).  Returns the category and the parse table.
    """
    objs = [str(a) for a in range(size)]
    parts: dict[str, tuple[int, int, int]] = {}
    mors = []
    for a in range(size):
        for b in range(a, size):
            for k in range(order):
                m = f"{a}-{b}/g{k}"
                parts[m] = (a, b, k)
                mors.append((m, str(a), str(b)))
    table = {}
    for a in range(size):
        for b in range(a, size):
            for c in range(b, size):
                for k in range(order):
                    for l in range(order):
                        table[(f"{b}-{c}/g{l}", f"{a}-{b}/g{k}")] = f"{a}-{c}/g{(k + l) % order}"
    ident = {str(a): f"{a}-{a}/g0" for a in range(size)}
    return FinCat(objs, mors, ident, table), parts


class ChainGroupAlgebra(TensorAlgebra):
    """Carrier chain×B(Z/order) with a commutative monotone product on the chain.

    ``kind`` is ``"max"`` or ``"capped-sum"`` (a+b truncated at the top); in both
    cases the bottom element is the unit and group parts add.
    """

    def __init__(self, operad, size: int, order: int, kind: str = "max", name=None):
        if kind not in ("max", "capped-sum"):
            raise AlgebraError(f"unknown chain product {kind!r}")
        cat, parts = chain_group_category(size, order)
        self.size, self.order, self.kind, self.parts = size, order, kind, parts
        top = size - 1
        prod = max if kind == "max" else (lambda a, b: min(a + b, top))
        self.prod = prod

        def t_ob(x, y):
            return str(prod(int(x), int(y)))

        def t_mor(f, g):
            a, b, k = parts[f]
            c, d, l = parts[g]
            return f"{prod(a, c)}-{prod(b, d)}/g{(k + l) % order}"

        super().__init__(operad, CatCarrier(cat), t_ob, t_mor, "0",
                         name or f"chain{size}-{kind}×Z/{order}")

    def mor(self, a: int, b: int, k: int) -> str:
        return f"{a}-{b}/g{k % self.order}"

    def to_json(self) -> dict:
        return {"rule": "chain-group", "operad": self.operad.name, "size": self.size, "order": self.order,
                "kind": self.kind, "name": self.name}


class PermutativeAlgebra(Algebra):
    """Algebras from a strict monoidal category with a braiding or symmetry.

    Over Σ̃/Σ̂ the symmetry must be involutive; over Br/Br⁺ the braiding need not be.
    Over M_k words are read through their leaf order and a morphism acts by the
    permutation braid of its underlying permutation.
    """

    rule = "permutative"

    def __init__(self, operad, carrier, tensor_ob, tensor_mor, unit, braiding, braiding_inv=None,
                 name="permutative algebra"):
        super().__init__(operad, carrier, name)
        self.tensor_ob, self.tensor_mor, self.unit = tensor_ob, tensor_mor, unit
        self.braiding = braiding
        self.braiding_inv = braiding_inv

    def _order(self, a) -> tuple[int, ...]:
        return self.operad.leaf_sequence(a)

    def act(self, a, ks):
        return _fold(self.tensor_ob, self.unit, [ks[i - 1] for i in self._order(a)])

    def _word(self, alpha) -> BraidWord:
        op = self.operad
        if isinstance(alpha, BraidMor):
            return alpha.word
        src, dst = op.source(alpha), op.target(alpha)
        p_src = perm_inverse(self._order(src))
        p_dst = perm_inverse(self._order(dst))
        return br.permutation_braid(perm_compose(p_dst, perm_inverse(p_src)))

    def _tensor_all(self, fs):
        return _fold(self.tensor_mor, self.carrier.identity(self.unit), fs)

    def act_mor(self, alpha, fs):
        c = self.carrier
        src = self.operad.source(alpha)
        seq = self._order(src)
        blocks = [c.target(fs[i - 1]) for i in seq]
        out = self._tensor_all([fs[i - 1] for i in seq])
        # letters act right to left on positions
        for i, e in reversed(self._word(alpha).letters):
            x, y = blocks[i - 1], blocks[i]
            if e == 1:
                swap = self.braiding(x, y)
            else:
                if self.braiding_inv is None:
                    raise AlgebraError("negative crossing needs an inverse braiding")
                swap = self.braiding_inv(x, y)
            pre = [c.identity(b) for b in blocks[: i - 1]]
            post = [c.identity(b) for b in blocks[i + 1:]]
            step = self._tensor_all(pre + [swap] + post)
            out = c.compose(step, out)
            blocks[i - 1], blocks[i] = y, x
        return out


def finite_sets_algebra(operad: Operad, max_object: int = 3) -> PermutativeAlgebra:
    """The permutative category of finite sets ⊕ bijections (skeletal, lazy)."""

    def swap(a, b):
        return perm_block((2, 1), (a, b))

    return PermutativeAlgebra(operad, FinSetCarrier(max_object), lambda a, b: a + b,
                              lambda f, g: perm_block_sum([f, g]), 0, swap, swap,
                              name=f"finite sets over {operad.name}")


def _key(*parts) -> str:
    return "|".join(str(p) for p in parts)


class TableAlgebra(Algebra):
    """Action given by lookup tables over a finite carrier, up to ``max_arity``."""

    rule = "table"

    def __init__(self, operad, carrier: FinCat, ob_table: Mapping[str, str], mor_table: Mapping[str, str],
                 max_arity: int, name="table algebra"):
        super().__init__(operad, CatCarrier(carrier), name)
        self.ob_table = dict(ob_table)
        self.mor_table = dict(mor_table)
        self.max_arity = max_arity

    def _mor_key(self, alpha) -> str:
        return json.dumps(self.operad.mor_to_json(alpha), sort_keys=True, ensure_ascii=False)

    def act(self, a, ks):
        k = _key(self.operad.format(a), *ks)
        if k not in self.ob_table:
            raise AlgebraError(f"action table has no entry {k!r}")
        return self.ob_table[k]

    def act_mor(self, alpha, fs):
        k = _key(self._mor_key(alpha), *fs)
        if k not in self.mor_table:
            raise AlgebraError(f"action table has no entry {k!r}")
        return self.mor_table[k]

    @classmethod
    def tabulate(cls, alg: Algebra, max_arity: int, name: str | None = None) -> "TableAlgebra":
        """Freeze a finite algebra into tables (every operation up to ``max_arity``)."""
        op, c = alg.operad, alg.carrier
        if not isinstance(c, CatCarrier):
            raise AlgebraError("only finite carriers can be tabulated")
        ob_table, mor_table = {}, {}
        out = cls(op, c.cat, {}, {}, max_arity, name or alg.name)
        for n in range(max_arity + 1):
            objs = op.objects(n)
            for a in objs:
                for ks in itertools.product(c.objects(), repeat=n):
                    ob_table[_key(op.format(a), *ks)] = alg.act(a, ks)
                for b in objs:
                    for alpha in op.hom(a, b):
                        mk = out._mor_key(alpha)
                        for fs in itertools.product(c.cat.src, repeat=n):
                            mor_table[_key(mk, *fs)] = alg.act_mor(alpha, fs)
        out.ob_table, out.mor_table = ob_table, mor_table
        return out

    def to_json(self) -> dict:
        return {"rule": "table", "operad": self.operad.name, "name": self.name, "max_arity": self.max_arity,
                "carrier": self.carrier.cat.to_json(), "objects": self.ob_table, "morphisms": self.mor_table}


class PullbackAlgebra(Algebra):
    """Restriction of an algebra along an operad map."""

    def __init__(self, alg: Algebra, f: OperadMap, name: str | None = None):
        if f.target is not alg.operad and f.target.name != alg.operad.name:
            raise AlgebraError("operad map does not land in the algebra's operad")
        super().__init__(f.source, alg.carrier, name or f"{alg.name} along {f.name}")
        self.inner, self.map = alg, f

    def act(self, a, ks):
        return self.inner.act(self.map.on_object(a), ks)

    def act_mor(self, alpha, fs):
        return self.inner.act_mor(self.map.on_morphism(alpha), fs)


# ---------------------------------------------------------------------------
# free algebras


@dataclass(frozen=True)
class FreeObj:
    """[A; x_1..x_n] with A the chosen representative of its Σ-orbit."""

    A: Any
    xs: tuple

    def __str__(self) -> str:
        return f"[{self.A}; {', '.join(map(str, self.xs))}]"


@dataclass(frozen=True, eq=False)
class FreeMor:
    """(σ, α: A → A'·σ, ξ_i: x_i → x'_σ(i)) between normalized objects."""

    source: FreeObj
    target: FreeObj
    sigma: Perm
    alpha: Any
    xis: tuple

    def __str__(self) -> str:
        return f"({self.sigma}, {self.alpha}, {'; '.join(map(str, self.xis))})"


class FreeCarrier(Carrier):
    def __init__(self, alg: "FreeAlgebra"):
        self.alg = alg

    @property
    def finite(self):
        return self.alg.operad.finite_homs and self.alg.base.finite

    def objects(self):
        return self.alg.objects()

    def hom(self, x, y):
        return self.alg.hom(x, y)

    def compose(self, g, f):
        return self.alg.compose(g, f)

    def identity(self, x):
        return self.alg.identity(x)

    def source(self, f):
        return f.source

    def target(self, f):
        return f.target

    def mor_eq(self, f, g):
        return self.alg.mor_eq(f, g)

    def leaves(self, x):
        return sum(self.alg.base.leaves(y) for y in x.xs)

    def random_morphism(self, rng, x):
        return self.alg.random_morphism(rng, x)


class FreeAlgebra(Algebra):
    """The free algebra on a carrier, truncated at operad arity ``cap``.

    ``leaf_cap`` optionally bounds the total number of base leaves (used by the
    bar construction, where the base is itself free).  Leaving either bound
    raises :class:`CapOverflowError`.
    """

    rule = "free"

    def __init__(self, base, operad: Operad, cap: int, leaf_cap: int | None = None, name: str | None = None):
        if cap < 1:
            raise AlgebraError("free algebras need cap >= 1")
        self.base = as_carrier(base)
        self.cap = cap
        self.leaf_cap = leaf_cap
        self._reps: dict[int, list] = {}
        super().__init__(operad, FreeCarrier(self), name or f"F_{operad.name}")
        self.carrier = FreeCarrier(self)

    # normal forms -----------------------------------------------------------
    def _bound(self, n: int, xs: Sequence) -> None:
        if n > self.cap:
            raise CapOverflowError(f"arity {n} exceeds cap {self.cap}")
        if self.leaf_cap is not None and sum(self.base.leaves(x) for x in xs) > self.leaf_cap:
            raise CapOverflowError(f"leaf count exceeds cap {self.leaf_cap}")

    def obj(self, a, xs: Sequence) -> FreeObj:
        """Normal form of the raw pair (a; xs)."""
        xs = tuple(xs)
        if self.operad.arity(a) != len(xs):
            raise AlgebraError("arity mismatch")
        self._bound(len(xs), xs)
        rep, sigma = self.operad.orbit_split(a)
        inv = perm_inverse(sigma)
        return FreeObj(rep, tuple(xs[inv[j] - 1] for j in range(len(xs))))

    def raw_mor(self, a, xs, t, ys, alpha, xis) -> FreeMor:
        """Normalize a raw morphism (a; xs) → (t; ys) given by α: a → t and ξ_i: x_i → y_i."""
        op = self.operad
        src_rep, rho_a = op.orbit_split(a)
        dst = self.obj(t, ys)
        _, rho = op.orbit_split(t)
        ra_inv = perm_inverse(rho_a)
        n = len(xs)
        alpha2 = op.mor_act(alpha, ra_inv)
        src = FreeObj(src_rep, tuple(xs[ra_inv[j] - 1] for j in range(n)))
        sigma = perm_compose(rho, ra_inv)
        xis2 = tuple(xis[ra_inv[j] - 1] for j in range(n))
        return FreeMor(src, dst, sigma, alpha2, xis2)

    # category -------------------------------------------------------------
    def _orbit_reps(self, n: int) -> list:
        if n not in self._reps:
            seen, reps = set(), []
            for a in self.operad.objects(n):
                r = self.operad.orbit_rep(a)
                k = self.operad.key(r)
                if k not in seen:
                    seen.add(k)
                    reps.append(r)
            self._reps[n] = reps
        return self._reps[n]

    def objects(self) -> list[FreeObj]:
        base = self.base.objects()
        out = []
        for n in range(self.cap + 1):
            for r in self._orbit_reps(n):
                for xs in itertools.product(base, repeat=n):
                    if self.leaf_cap is None or sum(self.base.leaves(x) for x in xs) <= self.leaf_cap:
                        out.append(FreeObj(r, tuple(xs)))
        return out

    def hom(self, x: FreeObj, y: FreeObj) -> list[FreeMor]:
        op = self.operad
        n = len(x.xs)
        if len(y.xs) != n:
            return []
        out = []
        for sigma in br.all_perms(n):
            alphas = op.hom(x.A, op.act(y.A, sigma))
            if not alphas:
                continue
            choices = [self.base.hom(x.xs[i], y.xs[sigma[i] - 1]) for i in range(n)]
            for alpha in alphas:
                for xis in itertools.product(*choices):
                    out.append(FreeMor(x, y, sigma, alpha, tuple(xis)))
        return out

    def identity(self, x: FreeObj) -> FreeMor:
        n = len(x.xs)
        return FreeMor(x, x, perm_identity(n), self.operad.identity(x.A),
                       tuple(self.base.identity(v) for v in x.xs))

    def compose(self, g: FreeMor, f: FreeMor) -> FreeMor:
        if f.target != g.source:
            raise AlgebraError("free algebra morphisms are not composable")
        op = self.operad
        sigma, tau = f.sigma, g.sigma
        alpha = op.compose(op.mor_act(g.alpha, sigma), f.alpha)
        xis = tuple(self.base.compose(g.xis[sigma[i] - 1], f.xis[i]) for i in range(len(f.xis)))
        return FreeMor(f.source, g.target, perm_compose(tau, sigma), alpha, xis)

    def mor_eq(self, f: FreeMor, g: FreeMor) -> bool:
        return (f.source == g.source and f.target == g.target and f.sigma == g.sigma
                and self.operad.mor_equal(f.alpha, g.alpha)
                and all(self.base.mor_eq(a, b) for a, b in zip(f.xis, g.xis)))

    def random_morphism(self, rng, x: FreeObj) -> FreeMor:
        op = self.operad
        alpha = op.random_morphism(rng, x.A)
        xis = tuple(self.base.random_morphism(rng, v) for v in x.xs)
        ys = tuple(self.base.target(m) for m in xis)
        return self.raw_mor(x.A, x.xs, op.target(alpha), ys, alpha, xis)

    # action ---------------------------------------------------------------
    def act(self, b, objs: Sequence[FreeObj]) -> FreeObj:
        op = self.operad
        a = op.substitute(b, [o.A for o in objs])
        return self.obj(a, tuple(itertools.chain.from_iterable(o.xs for o in objs)))

    def act_mor(self, beta, fs: Sequence[FreeMor]) -> FreeMor:
        op = self.operad
        alpha = op.mor_substitute(beta, [f.alpha for f in fs])
        xs, ys, xis = [], [], []
        for f in fs:
            n = len(f.xis)
            xs.extend(f.source.xs)
            ys.extend(f.target.xs[f.sigma[k] - 1] for k in range(n))
            xis.extend(f.xis)
        return self.raw_mor(op.source(alpha), xs, op.target(alpha), ys, alpha, xis)

    def eta(self, x) -> FreeObj:
        return FreeObj(self.operad.unit(), (x,))

    def eta_mor(self, f) -> FreeMor:
        u = self.operad.unit()
        return FreeMor(self.eta(self.base.source(f)), self.eta(self.base.target(f)), (1,),
                       self.operad.identity(u), (f,))


def free_algebra(X, operad: Operad, cap: int) -> FreeAlgebra:
    return FreeAlgebra(X, operad, cap)


# ---------------------------------------------------------------------------
# algebra laws


def _tuples(rng, pool: list, n: int, limit: int):
    total = len(pool) ** n
    if total <= limit:
        yield from itertools.product(pool, repeat=n)
    else:
        for _ in range(limit):
            yield tuple(rng.choice(pool) for _ in range(n))


def _fmt(xs) -> str:
    return "(" + ", ".join(map(str, xs)) + ")"


def _morphisms_from(rng, op: Operad, a, limit: int) -> list:
    if op.finite_homs:
        outs = [f for b in op.objects(op.arity(a)) for f in op.hom(a, b)]
        if len(outs) <= limit:
            return outs
        return rng.sample(outs, limit)
    return [op.identity(a)] + [op.random_morphism(rng, a) for _ in range(limit - 1)]


def _random_split(rng, k: int, total: int) -> list[int]:
    """k arities with sum at most ``total``."""
    rs = []
    for _ in range(k):
        rs.append(rng.randint(0, total - sum(rs)))
    rng.shuffle(rs)
    return rs


def check_algebra(alg: Algebra, max_arity: int = 3, sample: int = 40, seed: int = 0,
                  limit: int = 400) -> Report:
    """Unit, associativity, equivariance and functoriality of the action.

    Inputs are exhaustive when the instance count is below ``limit`` and
    sampled otherwise; actions leaving a free algebra's cap are skipped and counted.
    """
    rng = random.Random(seed)
    op, c = alg.operad, alg.carrier
    rep = Report(f"algebra {alg.name}")
    objs = c.objects()
    skipped = 0

    def run(law, fn, witness):
        nonlocal skipped
        try:
            rep.expect(fn(), law, witness)
        except CapOverflowError:
            skipped += 1

    if not objs:
        rep.notes.append("empty carrier")
        return rep
    u = op.unit()
    for k in objs:
        run("unit", lambda: c.ob_eq(alg.act(u, (k,)), k), f"K={k}")
        f = c.random_morphism(rng, k)
        run("unit (morphisms)", lambda: c.mor_eq(alg.act_mor(op.identity(u), (f,)), f), f"f={f}")
    for n in range(max_arity + 1):
        elts = op.objects(n)
        if not elts:
            continue
        perms = br.all_perms(n)
        for a in elts:
            for ks in _tuples(rng, objs, n, max(1, limit // max(1, len(elts)))):
                sigma = rng.choice(perms)
                inv = perm_inverse(sigma)
                permuted = tuple(ks[inv[j] - 1] for j in range(n))
                run("equivariance", lambda: c.ob_eq(alg.act(op.act(a, sigma), ks), alg.act(a, permuted)),
                    f"A={op.format(a)} σ={sigma} K={_fmt(ks)}")
                try:
                    image = alg.act(a, ks)
                except CapOverflowError:
                    skipped += 1
                    continue
                ident = alg.act_mor(op.identity(a), tuple(c.identity(k) for k in ks))
                rep.expect(c.mor_eq(ident, c.identity(image)), "functoriality (identities)",
                           f"A={op.format(a)} K={_fmt(ks)}")
        # morphisms: typing, equivariance and composition
        for _ in range(sample):
            a = rng.choice(elts)
            ks = tuple(rng.choice(objs) for _ in range(n))
            alpha = rng.choice(_morphisms_from(rng, op, a, 8))
            fs = tuple(c.random_morphism(rng, k) for k in ks)
            try:
                m = alg.act_mor(alpha, fs)
            except CapOverflowError:
                skipped += 1
                continue
            w = f"α={alpha} f={_fmt(fs)}"
            src = alg.act(op.source(alpha), tuple(c.source(f) for f in fs))
            dst = alg.act(op.target(alpha), tuple(c.target(f) for f in fs))
            rep.expect(c.ob_eq(c.source(m), src) and c.ob_eq(c.target(m), dst), "morphism typing", w)
            beta = rng.choice(_morphisms_from(rng, op, op.target(alpha), 8))
            gs = tuple(c.random_morphism(rng, c.target(f)) for f in fs)
            run("functoriality (composition)",
                lambda: c.mor_eq(alg.act_mor(op.compose(beta, alpha), tuple(c.compose(g, f) for g, f in zip(gs, fs))),
                                 c.compose(alg.act_mor(beta, gs), m)), w)
            sigma = rng.choice(perms)
            inv = perm_inverse(sigma)
            run("equivariance (morphisms)",
                lambda: c.mor_eq(alg.act_mor(op.mor_act(alpha, sigma), fs),
                                 alg.act_mor(alpha, tuple(fs[inv[j] - 1] for j in range(n)))), f"{w} σ={sigma}")
    # associativity on objects and morphisms
    for _ in range(sample * 3):
        kk = rng.randint(0, min(max_arity, 3))
        a = op.random_object(rng, kk)
        if a is None:
            continue
        rs = _random_split(rng, kk, max_arity)
        bs = [op.random_object(rng, r) for r in rs]
        if any(b is None for b in bs):
            continue
        groups = [tuple(rng.choice(objs) for _ in range(r)) for r in rs]
        w = f"A={op.format(a)} B={[op.format(b) for b in bs]} K={groups}"
        run("associativity",
            lambda: c.ob_eq(alg.act(op.substitute(a, bs), tuple(itertools.chain.from_iterable(groups))),
                            alg.act(a, [alg.act(b, g) for b, g in zip(bs, groups)])), w)
        alpha = rng.choice(_morphisms_from(rng, op, a, 6))
        betas = [rng.choice(_morphisms_from(rng, op, b, 6)) for b in bs]
        fgroups = [tuple(c.random_morphism(rng, k) for k in g) for g in groups]
        run("associativity (morphisms)",
            lambda: c.mor_eq(alg.act_mor(op.mor_substitute(alpha, betas), tuple(itertools.chain.from_iterable(fgroups))),
                             alg.act_mor(alpha, [alg.act_mor(b, g) for b, g in zip(betas, fgroups)])), w)
    if skipped:
        rep.notes.append(f"{skipped} instances left the cap and were skipped")
    return rep


# ---------------------------------------------------------------------------
# monad presentation


def structure_map(alg: Algebra, free: FreeAlgebra):
    """ε: F(carrier) → carrier, ε[A; x] = A(x), on objects and morphisms."""

    def ob(z: FreeObj):
        return alg.act(z.A, z.xs)

    def mor(m: FreeMor):
        return alg.act_mor(m.alpha, m.xis)

    return ob, mor


def check_monad_presentation(alg: Algebra, cap: int = 2, sample: int = 60, seed: int = 0) -> Report:
    """The operad action and the monad-style structure map agree.

    Checks that ε is well defined on raw pairs (any representative of an orbit),
    that ε∘η = id, that ε∘μ = ε∘F(ε) and that ε is a strict homomorphism.
    """
    rng = random.Random(seed)
    op, c = alg.operad, alg.carrier
    F = FreeAlgebra(c, op, cap)
    FF = FreeAlgebra(F.carrier, op, cap)
    ev, ev_mor = structure_map(alg, F)
    rep = Report(f"monad presentation of {alg.name}")
    objs = c.objects()
    for n in range(cap + 1):
        for a in op.objects(n):
            for xs in _tuples(rng, objs, n, 50):
                rep.expect(c.ob_eq(ev(F.obj(a, xs)), alg.act(a, xs)), "orbit independence",
                           f"A={op.format(a)} x={_fmt(xs)}")
    for x in objs:
        rep.expect(c.ob_eq(ev(F.eta(x)), x), "unit", f"x={x}")
        f = c.random_morphism(rng, x)
        rep.expect(c.mor_eq(ev_mor(F.eta_mor(f)), f), "unit (morphisms)", f"f={f}")
    skipped = 0
    f_objs = F.objects()
    for _ in range(sample):
        z = rng.choice(FF.objects()) if len(f_objs) < 200 else FreeObj(
            FF._orbit_reps(1)[0], (rng.choice(f_objs),))
        try:
            lhs = ev(F.act(z.A, z.xs))
        except CapOverflowError:
            skipped += 1
            continue
        rhs = alg.act(z.A, [ev(y) for y in z.xs])
        rep.expect(c.ob_eq(lhs, rhs), "multiplication", f"z={z}")
        m = FF.random_morphism(rng, z)
        try:
            lhs_m = ev_mor(F.act_mor(m.alpha, m.xis))
        except CapOverflowError:
            skipped += 1
            continue
        rhs_m = alg.act_mor(m.alpha, [ev_mor(x) for x in m.xis])
        rep.expect(c.mor_eq(lhs_m, rhs_m), "multiplication (morphisms)", f"m={m}")
    for _ in range(sample):
        b = op.random_object(rng, rng.randint(0, cap))
        if b is None:
            continue
        ys = [rng.choice(f_objs) for _ in range(op.arity(b))]
        try:
            rep.expect(c.ob_eq(ev(F.act(b, ys)), alg.act(b, [ev(y) for y in ys])), "strict homomorphism",
                       f"B={op.format(b)} y={_fmt(ys)}")
        except CapOverflowError:
            skipped += 1
    if skipped:
        rep.notes.append(f"{skipped} instances left the cap and were skipped")
    return rep


# ---------------------------------------------------------------------------
# lax morphisms and 2-cells


class LaxMorphism:
    """A functor f between carriers with cells f̄(A; K): A(fK) → f(A(K))."""

    def __init__(self, source: Algebra, target: Algebra, ob: Callable, mor: Callable, cell: Callable,
                 name: str = "f"):
        self.source, self.target = source, target
        self.ob, self.mor, self.cell = ob, mor, cell
        self.name = name

    def __repr__(self) -> str:
        return f"LaxMorphism({self.name}: {self.source.name} → {self.target.name})"


def strict_morphism(source: Algebra, target: Algebra, ob, mor, name="f") -> LaxMorphism:
    tc = target.carrier

    def cell(a, ks):
        return tc.identity(ob(source.act(a, ks)))

    return LaxMorphism(source, target, ob, mor, cell, name)


def identity_lax(alg: Algebra) -> LaxMorphism:
    return strict_morphism(alg, alg, lambda x: x, lambda f: f, name=f"id_{alg.name}")


def functor_lax(source: Algebra, target: Algebra, functor: Functor, cell, name="f") -> LaxMorphism:
    return LaxMorphism(source, target, functor.ob, functor.mor, cell, name)


def compose_lax(g: LaxMorphism, f: LaxMorphism) -> LaxMorphism:
    """g∘f with cells g(f̄(A; K)) ∘ ḡ(A; fK)."""
    if f.target is not g.source:
        raise AlgebraError(f"cannot compose {g.name} after {f.name}: carrier mismatch")
    tc = g.target.carrier

    def cell(a, ks):
        return tc.compose(g.mor(f.cell(a, ks)), g.cell(a, tuple(f.ob(k) for k in ks)))

    return LaxMorphism(f.source, g.target, lambda x: g.ob(f.ob(x)), lambda m: g.mor(f.mor(m)), cell,
                       name=f"{g.name}∘{f.name}")


class TwoCell:
    """A natural transformation s: f ⇒ g between lax morphisms with the same ends."""

    def __init__(self, source: LaxMorphism, target: LaxMorphism, component: Callable, name: str = "s"):
        self.source, self.target, self.component = source, target, component
        self.name = name


def _sample_objects(rng, c: Carrier, limit: int) -> list:
    objs = c.objects()
    return objs if len(objs) <= limit else rng.sample(objs, limit)


def _operad_instances(rng, op: Operad, objs: list, max_arity: int, limit: int):
    """(A, K) pairs: exhaustive over small products, sampled beyond ``limit``."""
    for n in range(max_arity + 1):
        elts = op.objects(n)
        if not elts:
            continue
        total = len(elts) * len(objs) ** n
        if total <= limit:
            for a in elts:
                for ks in itertools.product(objs, repeat=n):
                    yield a, ks
        else:
            for _ in range(limit):
                yield rng.choice(elts), tuple(rng.choice(objs) for _ in range(n))


def check_lax(m: LaxMorphism, max_arity: int = 3, sample: int = 30, seed: int = 0, limit: int = 300,
              objects: list | None = None) -> Report:
    """Functoriality, cell typing, naturality, multiplicativity and the unit cell.

    ``objects`` restricts the source objects used (needed for lazy carriers).
    """
    rng = random.Random(seed)
    S, T = m.source, m.target
    op, sc, tc = S.operad, S.carrier, T.carrier
    rep = Report(f"lax morphism {m.name}")
    objs = objects if objects is not None else _sample_objects(rng, sc, 12)
    skipped = 0
    for x in objs:
        rep.expect(tc.mor_eq(m.mor(sc.identity(x)), tc.identity(m.ob(x))), "functor (identities)", f"K={x}")
        f = sc.random_morphism(rng, x)
        g = sc.random_morphism(rng, sc.target(f))
        rep.expect(tc.mor_eq(m.mor(sc.compose(g, f)), tc.compose(m.mor(g), m.mor(f))), "functor (composition)",
                   f"f={f} g={g}")
        rep.expect(tc.mor_eq(m.cell(op.unit(), (x,)), tc.identity(m.ob(x))), "unit cell", f"K={x}")
    for a, ks in _operad_instances(rng, op, objs, max_arity, limit):
        w = f"A={op.format(a)} K={_fmt(ks)}"
        try:
            cell = m.cell(a, ks)
            fk = tuple(m.ob(k) for k in ks)
            typed = (tc.ob_eq(tc.source(cell), T.act(a, fk)) and tc.ob_eq(tc.target(cell), m.ob(S.act(a, ks))))
        except CapOverflowError:
            skipped += 1
            continue
        if not rep.expect(typed, "cell typing", w):
            continue
        for _ in range(2):
            alpha = rng.choice(_morphisms_from(rng, op, a, 6))
            fs = tuple(sc.random_morphism(rng, k) for k in ks)
            ks2 = tuple(sc.target(f) for f in fs)
            a2 = op.target(alpha)
            try:
                lhs = tc.compose(m.mor(S.act_mor(alpha, fs)), cell)
                rhs = tc.compose(m.cell(a2, ks2), T.act_mor(alpha, tuple(m.mor(f) for f in fs)))
            except CapOverflowError:
                skipped += 1
                continue
            rep.expect(tc.mor_eq(lhs, rhs), "naturality", f"{w} α={alpha} f={_fmt(fs)}")
    # multiplicativity along random splittings A ∗ (B_1 ⊕ … ⊕ B_k)
    for _ in range(sample * 2):
        k = rng.randint(0, min(2, max_arity))
        a = op.random_object(rng, k)
        if a is None:
            continue
        rs = _random_split(rng, k, max_arity)
        bs = [op.random_object(rng, r) for r in rs]
        if any(b is None for b in bs):
            continue
        groups = [tuple(rng.choice(objs) for _ in range(r)) for r in rs]
        flat = tuple(itertools.chain.from_iterable(groups))
        try:
            lhs = m.cell(op.substitute(a, bs), flat)
            inner = [S.act(b, g) for b, g in zip(bs, groups)]
            rhs = tc.compose(m.cell(a, inner), T.act_mor(op.identity(a), [m.cell(b, g) for b, g in zip(bs, groups)]))
        except CapOverflowError:
            skipped += 1
            continue
        rep.expect(tc.mor_eq(lhs, rhs), "multiplicativity",
                   f"A={op.format(a)} B={[op.format(b) for b in bs]} K={groups}")
    if skipped:
        rep.notes.append(f"{skipped} instances left the cap and were skipped")
    return rep


def check_two_cell(s: TwoCell, max_arity: int = 3, seed: int = 0, limit: int = 200,
                   objects: list | None = None) -> Report:
    """Naturality of s and ḡ(A;K) ∘ A(s_K) = s_{A(K)} ∘ f̄(A;K)."""
    rng = random.Random(seed)
    f, g = s.source, s.target
    S, T = f.source, f.target
    op, sc, tc = S.operad, S.carrier, T.carrier
    rep = Report(f"2-cell {s.name}")
    objs = objects if objects is not None else _sample_objects(rng, sc, 12)
    for x in objs:
        comp = s.component(x)
        rep.expect(tc.ob_eq(tc.source(comp), f.ob(x)) and tc.ob_eq(tc.target(comp), g.ob(x)), "component typing",
                   f"K={x}")
        h = sc.random_morphism(rng, x)
        y = sc.target(h)
        rep.expect(tc.mor_eq(tc.compose(g.mor(h), comp), tc.compose(s.component(y), f.mor(h))),
                   "naturality of 2-cell", f"k={h}")
    for a, ks in _operad_instances(rng, op, objs, max_arity, limit):
        try:
            lhs = tc.compose(g.cell(a, ks), T.act_mor(op.identity(a), [s.component(k) for k in ks]))
            rhs = tc.compose(s.component(S.act(a, ks)), f.cell(a, ks))
        except CapOverflowError:
            continue
        rep.expect(tc.mor_eq(lhs, rhs), "2-cell coherence", f"A={op.format(a)} K={_fmt(ks)}")
    return rep


def lax_agree(f: LaxMorphism, g: LaxMorphism, max_arity: int = 2, seed: int = 0, limit: int = 150,
              objects: list | None = None) -> list[str]:
    """Witnesses where two lax morphisms with the same ends differ (empty if they agree)."""
    rng = random.Random(seed)
    S, T = f.source, f.target
    op, sc, tc = S.operad, S.carrier, T.carrier
    objs = objects if objects is not None else _sample_objects(rng, sc, 12)
    out = []
    for x in objs:
        if not tc.ob_eq(f.ob(x), g.ob(x)):
            out.append(f"object {x}")
        h = sc.random_morphism(rng, x)
        if not tc.mor_eq(f.mor(h), g.mor(h)):
            out.append(f"morphism {h}")
    for a, ks in _operad_instances(rng, op, objs, max_arity, limit):
        try:
            if not tc.mor_eq(f.cell(a, ks), g.cell(a, ks)):
                out.append(f"cell A={op.format(a)} K={_fmt(ks)}")
        except CapOverflowError:
            continue
    return out


# ---------------------------------------------------------------------------
# diagrams and cones


class AlgDiagram:
    """A strict functor from a finite index category into algebras and lax morphisms."""

    def __init__(self, index: FinCat, algebras: Mapping[str, Algebra], morphisms: Mapping[str, LaxMorphism],
                 operad: Operad | None = None):
        self.index = index
        self.algebras = dict(algebras)
        self.morphisms = dict(morphisms)
        self.operad = operad or next(iter(self.algebras.values())).operad

    def at(self, l: str) -> Algebra:
        return self.algebras[l]

    def on(self, u: str) -> LaxMorphism:
        return self.morphisms[u]


def constant_alg_diagram(L: FinCat, alg: Algebra) -> AlgDiagram:
    return AlgDiagram(L, {o: alg for o in L.objects}, {m: identity_lax(alg) for m in L.src})


def check_diagram(X: AlgDiagram, max_arity: int = 3, seed: int = 0, check_algebras: bool = True) -> Report:
    """Every X(λ) is lax, X(id) is the identity and X(μ∘λ) is the composite lax morphism."""
    L = X.index
    rep = Report("diagram")
    for o in L.objects:
        if o not in X.algebras:
            rep.fail("diagram data", f"no algebra at {o}")
            return rep
        if check_algebras:
            sub = check_algebra(X.algebras[o], max_arity=max_arity, sample=10, seed=seed)
            for fd in sub.findings:
                rep.fail(fd.law, f"at {o}: {fd.witness}")
            rep.checked.update(sub.checked)
    for u in L.src:
        if u not in X.morphisms:
            rep.fail("diagram data", f"no lax morphism at {u}")
            return rep
        m = X.morphisms[u]
        if m.source is not X.algebras[L.src[u]] or m.target is not X.algebras[L.dst[u]]:
            rep.fail("diagram data", f"lax morphism at {u} has the wrong ends")
            continue
        sub = check_lax(m, max_arity=max_arity, sample=10, seed=seed)
        for fd in sub.findings:
            rep.fail(fd.law, f"at arrow {u}: {fd.witness}")
        rep.checked.update(sub.checked)
    for o in L.objects:
        bad = lax_agree(X.morphisms[L.identity[o]], identity_lax(X.algebras[o]), max_arity, seed)
        rep.expect(not bad, "identities are preserved", f"at {o}: {bad[:3]}")
    for (v, u), w in L.table.items():
        if L.is_identity(u) or L.is_identity(v):
            continue
        bad = lax_agree(X.morphisms[w], compose_lax(X.morphisms[v], X.morphisms[u]), max_arity, seed)
        rep.expect(not bad, "composites are preserved", f"{v}∘{u}: {bad[:3]}")
    return rep


class DiagramCone:
    """A homotopy morphism from X to the constant diagram at S.

    ``legs[L]`` is a lax morphism X(L) → S; ``cells[λ]`` is a 2-cell
    k_{L0} ⇒ k_{L1}∘X(λ), given by its components.
    """

    def __init__(self, diagram: AlgDiagram, target: Algebra, legs: Mapping[str, LaxMorphism],
                 cells: Mapping[str, Callable]):
        self.diagram, self.target = diagram, target
        self.legs, self.cells = dict(legs), dict(cells)

    def two_cell(self, u: str) -> TwoCell:
        X, L = self.diagram, self.diagram.index
        return TwoCell(self.legs[L.src[u]], compose_lax(self.legs[L.dst[u]], X.on(u)), self.cells[u], name=u)


def check_cone(k: DiagramCone, max_arity: int = 3, seed: int = 0, objects: Mapping[str, list] | None = None) -> Report:
    """Legs are lax, each k_λ is a 2-cell, k_id = id and k_{μλ} = k_μ X(λ) ∘ k_λ."""
    X, L, S = k.diagram, k.diagram.index, k.target
    sc = S.carrier
    rep = Report("cone")
    rng = random.Random(seed)
    objs = {o: (objects or {}).get(o) or _sample_objects(rng, X.at(o).carrier, 12) for o in L.objects}
    for o in L.objects:
        sub = check_lax(k.legs[o], max_arity=max_arity, sample=10, seed=seed, objects=objs[o])
        for fd in sub.findings:
            rep.fail(fd.law, f"leg at {o}: {fd.witness}")
        rep.checked.update(sub.checked)
    for u in L.src:
        sub = check_two_cell(k.two_cell(u), max_arity=max_arity, seed=seed, objects=objs[L.src[u]])
        for fd in sub.findings:
            rep.fail(fd.law, f"cell at {u}: {fd.witness}")
        rep.checked.update(sub.checked)
        if L.is_identity(u):
            for x in objs[L.src[u]]:
                rep.expect(sc.mor_eq(k.cells[u](x), sc.identity(k.legs[L.src[u]].ob(x))), "identity cells",
                           f"{u} at {x}")
    for (v, u), w in L.table.items():
        if L.is_identity(u) or L.is_identity(v):
            continue
        xu = X.on(u)
        for x in objs[L.src[u]]:
            lhs = k.cells[w](x)
            rhs = sc.compose(k.cells[v](xu.ob(x)), k.cells[u](x))
            rep.expect(sc.mor_eq(lhs, rhs), "cocycle", f"{v}∘{u} at {x}")
    return rep


# ---------------------------------------------------------------------------
# chain-group diagrams (finite test instances)


def chain_lax(source: ChainGroupAlgebra, target: ChainGroupAlgebra, h: Sequence[int], t: int,
              name: str = "f") -> LaxMorphism:
    """Monotone h on the chains, identity on the group, cells of group part t·(n-1)."""
    if source.order != target.order:
        raise AlgebraError("chain-group lax morphisms need equal group orders")
    order = target.order

    def ob(x):
        return str(h[int(x)])

    def mor(f):
        a, b, k = source.parts[f]
        return target.mor(h[a], h[b], k)

    def cell(a, ks):
        n = len(ks)
        lo = int(target.act(a, [ob(k) for k in ks]))
        hi = h[int(source.act(a, ks))]
        if lo > hi:
            raise AlgebraError(f"{name} is not lax at {ks}")
        return target.mor(lo, hi, t * (n - 1) % order)

    m = LaxMorphism(source, target, ob, mor, cell, name)
    m.h, m.t = tuple(h), t % order
    return m


def chain_lax_candidates(source: ChainGroupAlgebra, target: ChainGroupAlgebra) -> list[tuple[int, ...]]:
    """All monotone maps h with h(x)⊗h(y) ≤ h(x⊗y)."""
    out = []
    for h in itertools.product(range(target.size), repeat=source.size):
        if any(h[i] > h[i + 1] for i in range(source.size - 1)):
            continue
        if all(target.prod(h[x], h[y]) <= h[source.prod(x, y)] for x in range(source.size)
               for y in range(source.size)):
            out.append(h)
    return out


def compose_chain_lax(g: LaxMorphism, f: LaxMorphism) -> LaxMorphism:
    h = tuple(g.h[i] for i in f.h)
    return chain_lax(f.source, g.target, h, f.t + g.t, name=f"{g.name}∘{f.name}")


def random_chain_diagram(rng: random.Random, operad: Operad, shape: str = "arrow", order: int = 3,
                         max_size: int = 3) -> AlgDiagram:
    """A diagram of chain-group algebras over one of the sample index shapes."""
    from .samples import index_category

    L = index_category(shape)
    algs = {}
    for o in L.objects:
        algs[o] = ChainGroupAlgebra(operad, rng.randint(1, max_size), order, rng.choice(["max", "capped-sum"]),
                                    name=f"X({o})")
    if shape == "z2":
        a = algs["*"]
        half = order // 2 if order % 2 == 0 else 0
        flip = chain_lax(a, a, tuple(range(a.size)), rng.choice([0, half]), name="g1")
        return AlgDiagram(L, algs, {"g0": _named(chain_lax(a, a, tuple(range(a.size)), 0), "g0"), "g1": flip},
                          operad)
    mors = {}
    for o in L.objects:
        a = algs[o]
        mors[L.identity[o]] = chain_lax(a, a, tuple(range(a.size)), 0, name=L.identity[o])
    gens = [m for m in L.src if not L.is_identity(m)]
    if shape == "chain3":
        gens = ["0<1", "1<2"]
    for u in gens:
        s, d = algs[L.src[u]], algs[L.dst[u]]
        mors[u] = chain_lax(s, d, rng.choice(chain_lax_candidates(s, d)), rng.randrange(order), name=u)
    if shape == "chain3":
        mors["0<2"] = _named(compose_chain_lax(mors["1<2"], mors["0<1"]), "0<2")
    return AlgDiagram(L, algs, mors, operad)


def _named(m: LaxMorphism, name: str) -> LaxMorphism:
    m.name = name
    return m


def chain_cone(X: AlgDiagram, target: ChainGroupAlgebra, legs: Mapping[str, tuple[tuple[int, ...], int]]) -> DiagramCone:
    """The cone with legs (h_L, t_L); its 2-cells are forced by the group parts."""
    L = X.index
    lax = {o: chain_lax(X.at(o), target, h, t, name=f"k_{o}") for o, (h, t) in legs.items()}

    def make(u):
        s, d = L.src[u], L.dst[u]
        xu = X.on(u)
        g = (lax[s].t - lax[d].t - xu.t) % target.order

        def comp(x):
            return target.mor(lax[s].h[int(x)], lax[d].h[xu.h[int(x)]], g)

        return comp

    return DiagramCone(X, target, lax, {u: make(u) for u in L.src})


def random_chain_cone(rng: random.Random, X: AlgDiagram, target: ChainGroupAlgebra,
                      tries: int = 2000) -> DiagramCone | None:
    """Rejection-sample legs until every forced 2-cell exists (h_{L0} ≤ h_{L1}∘X(λ))."""
    L = X.index
    cands = {o: chain_lax_candidates(X.at(o), target) for o in L.objects}
    for _ in range(tries):
        legs = {o: (rng.choice(cands[o]), rng.randrange(target.order)) for o in L.objects}
        if all(legs[L.src[u]][0][x] <= legs[L.dst[u]][0][X.on(u).h[x]]
               for u in L.src for x in range(X.at(L.src[u]).size)):
            return chain_cone(X, target, legs)
    return None


# ---------------------------------------------------------------------------
# bar construction


@dataclass
class BarLevels:
    """B_n = M^{n+1}X for n = 0..top, with B_{-1} = X, truncated per layer and in total."""

    alg: Algebra
    levels: list  # levels[n] is the free algebra B_n
    cap: int

    def carrier(self, n: int) -> Carrier:
        return self.alg.carrier if n < 0 else self.levels[n].carrier

    def objects(self, n: int) -> list:
        return self.carrier(n).objects()


def bar_levels(alg: Algebra, top: int, cap: int) -> BarLevels:
    if top > 3:
        raise AlgebraError("bar construction is limited to degree 3")
    levels = []
    base = alg.carrier
    for _ in range(top + 4):
        f = FreeAlgebra(base, alg.operad, cap, leaf_cap=cap)
        levels.append(f)
        base = f.carrier
    return BarLevels(alg, levels, cap)


def _map_ob(depth: int, fn, z):
    if depth == 0:
        return fn(z)
    return FreeObj(z.A, tuple(_map_ob(depth - 1, fn, x) for x in z.xs))


def _map_mor(depth: int, fn_ob, fn_mor, m):
    if depth == 0:
        return fn_mor(m)
    return FreeMor(_map_ob(depth, fn_ob, m.source), _map_ob(depth, fn_ob, m.target), m.sigma, m.alpha,
                   tuple(_map_mor(depth - 1, fn_ob, fn_mor, x) for x in m.xis))


def bar_face(B: BarLevels, n: int, i: int):
    """d_i: B_n → B_{n-1} on objects and morphisms (as a pair of functions)."""
    if not 0 <= i <= n:
        raise AlgebraError(f"no face d_{i} in degree {n}")
    if i == n:
        alg = B.alg
        ob = lambda z: alg.act(z.A, z.xs)
        mor = lambda m: alg.act_mor(m.alpha, m.xis)
    else:
        inner = B.levels[n - i - 1]
        ob = lambda z: inner.act(z.A, z.xs)
        mor = lambda m: inner.act_mor(m.alpha, m.xis)
    return (lambda z: _map_ob(i, ob, z)), (lambda m: _map_mor(i, ob, mor, m))


def bar_degeneracy(B: BarLevels, n: int, i: int):
    """s_i: B_n → B_{n+1} for -1 ≤ i ≤ n (s_{-1} is the extra degeneracy)."""
    if not -1 <= i <= n:
        raise AlgebraError(f"no degeneracy s_{i} in degree {n}")
    lev = B.levels[n - i]
    return (lambda z: _map_ob(i + 1, lev.eta, z)), (lambda m: _map_mor(i + 1, lev.eta, lev.eta_mor, m))


def bar_degree(alg: Algebra, n: int, cap: int):
    """The degree-n algebra M^{n+1}X with its faces and degeneracies."""
    B = bar_levels(alg, n, cap)
    faces = [bar_face(B, n, i) for i in range(n + 1)]
    degens = [bar_degeneracy(B, n, i) for i in range(-1, n + 1)]
    return B.levels[n], faces, degens


def check_bar(alg: Algebra, top: int = 2, cap: int = 2, samples: int = 30, seed: int = 0) -> Report:
    """Simplicial identities of the augmented bar construction, including s_{-1}."""
    rng = random.Random(seed)
    B = bar_levels(alg, top, cap)
    rep = Report(f"bar construction of {alg.name}")
    skipped = 0

    def eq(n, x, y, morph=False):
        c = B.carrier(n)
        return c.mor_eq(x, y) if morph else c.ob_eq(x, y)

    def compose_maps(*maps):
        def run(z):
            for f in reversed(maps):
                z = f(z)
            return z
        return run

    d = lambda n, i: bar_face(B, n, i)
    s = lambda n, i: bar_degeneracy(B, n, i)
    for n in range(-1, top + 1):
        objs = B.objects(n)
        pool = objs if len(objs) <= 400 else rng.sample(objs, 400)
        mor_pool = [B.carrier(n).random_morphism(rng, rng.choice(objs)) for _ in range(samples)] if objs else []
        identities = []
        # d_i d_j = d_{j-1} d_i  (i < j) on B_n
        for j in range(n + 1):
            for i in range(j):
                identities.append((f"d{i}d{j}=d{j - 1}d{i}", n - 2, (d(n - 1, i), d(n, j)), (d(n - 1, j - 1), d(n, i))))
        # faces after degeneracies
        for j in range(-1, n + 1):
            sj = s(n, j)
            for i in range(n + 2):
                if i < j:
                    identities.append((f"d{i}s{j}=s{j - 1}d{i}", n, (d(n + 1, i), sj), (s(n - 1, j - 1), d(n, i))))
                elif i in (j, j + 1) and i >= 0:
                    identities.append((f"d{i}s{j}=id", n, (d(n + 1, i), sj), None))
                elif i > j + 1:
                    identities.append((f"d{i}s{j}=s{j}d{i - 1}", n, (d(n + 1, i), sj), (s(n - 1, j), d(n, i - 1))))
        # s_i s_j = s_{j+1} s_i  (i ≤ j)
        for j in range(-1, n + 1):
            for i in range(-1, j + 1):
                identities.append((f"s{i}s{j}=s{j + 1}s{i}", n + 2, (s(n + 1, i), s(n, j)), (s(n + 1, j + 1), s(n, i))))
        for law, lands, lhs, rhs in identities:
            lo = compose_maps(*(f[0] for f in lhs))
            lm = compose_maps(*(f[1] for f in lhs))
            ro = compose_maps(*(f[0] for f in rhs)) if rhs else (lambda z: z)
            rm = compose_maps(*(f[1] for f in rhs)) if rhs else (lambda m: m)
            for z in pool:
                try:
                    rep.expect(eq(lands, lo(z), ro(z)), law, f"degree {n}: {z}")
                except CapOverflowError:
                    skipped += 1
            for m in mor_pool:
                try:
                    rep.expect(eq(lands, lm(m), rm(m), morph=True), law + " (morphisms)", f"degree {n}: {m}")
                except CapOverflowError:
                    skipped += 1
    if skipped:
        rep.notes.append(f"{skipped} instances left the cap and were skipped")
    return rep


# ---------------------------------------------------------------------------
# weak braided monoidal profile


def braided_profile(alg: Algebra, objects: Sequence | None = None, seed: int = 0, samples: int = 30) -> Report:
    """For an algebra over Br⁺ (or Br): strict unit and associativity of □ = e₂,
    c_{A,0} = c_{0,A} = id, the two triangle identities and naturality of c."""
    op = alg.operad
    if not isinstance(op, BraidOperad):
        raise AlgebraError("the braided profile needs an algebra over Br or Br⁺")
    c = alg.carrier
    rng = random.Random(seed)
    objs = list(objects) if objects is not None else c.objects()
    e2 = PermElt((1, 2))
    e0 = PermElt(())
    twist = BraidMor(e2, BraidWord.of(2, 1))
    zero = alg.act(e0, ())
    box = lambda a, b: alg.act(e2, (a, b))
    box_m = lambda f, g: alg.act_mor(op.identity(e2), (f, g))
    cb = lambda a, b: alg.act_mor(twist, (c.identity(a), c.identity(b)))
    rep = Report(f"braided profile of {alg.name}")
    for a in objs:
        rep.expect(c.ob_eq(box(a, zero), a) and c.ob_eq(box(zero, a), a), "unit", f"A={a}")
        rep.expect(c.mor_eq(cb(a, zero), c.identity(a)), "c(A,0) = id", f"A={a}")
        rep.expect(c.mor_eq(cb(zero, a), c.identity(a)), "c(0,A) = id", f"A={a}")
    for a, b, d in itertools.product(objs, repeat=3):
        w = f"A={a} B={b} C={d}"
        rep.expect(c.ob_eq(box(box(a, b), d), box(a, box(b, d))), "associativity", w)
        t1 = c.compose(box_m(c.identity(b), cb(a, d)), box_m(cb(a, b), c.identity(d)))
        rep.expect(c.mor_eq(t1, cb(a, box(b, d))), "first triangle", w)
        t2 = c.compose(box_m(cb(a, d), c.identity(b)), box_m(c.identity(a), cb(b, d)))
        rep.expect(c.mor_eq(t2, cb(box(a, b), d)), "second triangle", w)
    for _ in range(samples):
        a, b = rng.choice(objs), rng.choice(objs)
        f, g = c.random_morphism(rng, a), c.random_morphism(rng, b)
        lhs = c.compose(cb(c.target(f), c.target(g)), box_m(f, g))
        rhs = c.compose(box_m(g, f), cb(a, b))
        rep.expect(c.mor_eq(lhs, rhs), "naturality of c", f"f={f} g={g}")
    return rep


# ---------------------------------------------------------------------------
# JSON


def algebra_from_json(doc: Mapping, base_dir: str | None = None) -> Algebra:
    op = parse_operad(doc["operad"], base_dir)
    rule = doc.get("rule")
    name = doc.get("name", rule or "algebra")
    if rule == "chain-group":
        return ChainGroupAlgebra(op, int(doc["size"]), int(doc["order"]), doc.get("kind", "max"), name=name)
    if rule == "permutative":
        if "carrier" not in doc:
            return finite_sets_algebra(op, int(doc.get("max_object", 3)))
        cat = FinCat.from_json(doc["carrier"])
        t_ob, t_mor, sym = doc["tensor_objects"], doc["tensor_morphisms"], doc["braiding"]
        inv = doc.get("braiding_inverse")
        return PermutativeAlgebra(
            op, CatCarrier(cat), lambda x, y: t_ob[_key(x, y)], lambda f, g: t_mor[_key(f, g)], doc["unit"],
            lambda x, y: sym[_key(x, y)], (lambda x, y: inv[_key(x, y)]) if inv else None, name=name)
    if rule == "monoidal-word-eval":
        cat = FinCat.from_json(doc["carrier"])
        t_ob, t_mor = doc["tensor_objects"], doc["tensor_morphisms"]
        return TensorAlgebra(op, CatCarrier(cat), lambda x, y: t_ob[_key(x, y)], lambda f, g: t_mor[_key(f, g)],
                             doc["unit"], name=name)
    if rule == "table":
        return TableAlgebra(op, FinCat.from_json(doc["carrier"]), doc["objects"], doc["morphisms"],
                            int(doc["max_arity"]), name=name)
    raise AlgebraError(f"unknown algebra rule {rule!r}")


def tensor_tables(alg: TensorAlgebra | PermutativeAlgebra) -> dict:
    """Tensor tables of a finite tensor or permutative algebra (for JSON)."""
    c = alg.carrier
    if not isinstance(c, CatCarrier):
        raise AlgebraError("only finite carriers have tables")
    cat = c.cat
    doc = {"carrier": cat.to_json(), "unit": alg.unit,
           "tensor_objects": {_key(x, y): alg.tensor_ob(x, y) for x in cat.objects for y in cat.objects},
           "tensor_morphisms": {_key(f, g): alg.tensor_mor(f, g) for f in cat.src for g in cat.src}}
    if isinstance(alg, PermutativeAlgebra):
        doc["braiding"] = {_key(x, y): alg.braiding(x, y) for x in cat.objects for y in cat.objects}
        if alg.braiding_inv is not None:
            doc["braiding_inverse"] = {_key(x, y): alg.braiding_inv(x, y) for x in cat.objects for y in cat.objects}
    return doc


def algebra_to_json(alg: Algebra) -> dict:
    if isinstance(alg, ChainGroupAlgebra):
        return alg.to_json()
    if isinstance(alg, TableAlgebra):
        return alg.to_json()
    if isinstance(alg, (TensorAlgebra, PermutativeAlgebra)):
        if isinstance(alg.carrier, FinSetCarrier):
            return {"rule": "permutative", "operad": alg.operad.name, "max_object": alg.carrier.max_object,
                    "name": alg.name}
        return {"rule": alg.rule, "operad": alg.operad.name, "name": alg.name, **tensor_tables(alg)}
    raise AlgebraError(f"no JSON form for {alg.name}")


def lax_from_json(doc: Mapping, source: Algebra, target: Algebra, name: str = "f") -> LaxMorphism:
    """Lax morphism with a functor table and cells given by a rule or a table."""
    cells = doc.get("cells", {"rule": "identity"})
    if cells.get("rule") == "scaled-arity":
        if not isinstance(source, ChainGroupAlgebra) or not isinstance(target, ChainGroupAlgebra):
            raise AlgebraError("scaled-arity cells need chain-group algebras")
        h = tuple(int(doc["objects"][str(i)]) for i in range(source.size))
        return chain_lax(source, target, h, int(cells["t"]), name)
    obmap, mormap = doc["objects"], doc["morphisms"]
    ob, mor = (lambda x: obmap[x]), (lambda f: mormap[f])
    if cells.get("rule") == "identity":
        return strict_morphism(source, target, ob, mor, name)
    table = cells["table"]
    op = source.operad

    def cell(a, ks):
        k = _key(op.format(a), *ks)
        if k not in table:
            raise AlgebraError(f"cell table of {name} has no entry {k!r}")
        return table[k]

    return LaxMorphism(source, target, ob, mor, cell, name)


def lax_to_json(m: LaxMorphism, max_arity: int = 2) -> dict:
    S = m.source
    c = S.carrier
    if not isinstance(c, CatCarrier):
        raise AlgebraError("only finite carriers have tables")
    doc = {"objects": {x: m.ob(x) for x in c.cat.objects}, "morphisms": {f: m.mor(f) for f in c.cat.src}}
    if hasattr(m, "t"):
        doc["cells"] = {"rule": "scaled-arity", "t": m.t}
        doc["objects"] = {str(i): str(v) for i, v in enumerate(m.h)}
        return doc
    op = S.operad
    table = {}
    for n in range(max_arity + 1):
        for a in op.objects(n):
            for ks in itertools.product(c.cat.objects, repeat=n):
                table[_key(op.format(a), *ks)] = m.cell(a, ks)
    doc["cells"] = {"table": table}
    return doc


def diagram_from_json(doc: Mapping, base_dir: str | None = None) -> AlgDiagram:
    L = FinCat.from_json(doc["index"])
    algs = {}
    for o in L.objects:
        a = dict(doc["algebras"][o])
        a.setdefault("operad", doc["operad"])
        algs[o] = algebra_from_json(a, base_dir)
    mors = {}
    for u in L.src:
        entry = doc.get("morphisms", {}).get(u)
        if entry is None:
            if not L.is_identity(u):
                raise AlgebraError(f"diagram has no lax morphism for {u}")
            mors[u] = identity_lax(algs[L.src[u]])
            mors[u].name = u
            if isinstance(algs[L.src[u]], ChainGroupAlgebra):
                a = algs[L.src[u]]
                mors[u] = chain_lax(a, a, tuple(range(a.size)), 0, name=u)
            continue
        mors[u] = lax_from_json(entry, algs[L.src[u]], algs[L.dst[u]], name=u)
    return AlgDiagram(L, algs, mors, parse_operad(doc["operad"], base_dir))


def diagram_to_json(X: AlgDiagram, max_arity: int = 2) -> dict:
    L = X.index
    return {
        "operad": X.operad.name,
        "index": L.to_json(),
        "algebras": {o: algebra_to_json(X.at(o)) for o in L.objects},
        "morphisms": {u: lax_to_json(X.on(u), max_arity) for u in L.src if not L.is_identity(u)},
    }
