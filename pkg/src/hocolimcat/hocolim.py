"""Homotopy colimits of diagrams of algebras over a Σ-free Cat-operad.

An object is a normalized tuple ``[A; (K_1,L_1)..(K_n,L_n)]`` and a morphism
is normalized five-part data ``(φ, C, γ, λ, f)``:

* ``φ`` maps source inputs to target inputs, each fiber in natural order;
* ``C_k`` is an operad element whose inputs are the fiber of ``k``;
* ``γ: A_1 → (A_2∗(C_1⊕…⊕C_n))·σ`` where ``σ⁻¹`` lists the fibers one
  after the other;
* ``λ_i: L_i → L'_{φ(i)}`` in the index category;
* ``f_k: C_k(λK(φ⁻¹(k))) → K'_k`` in ``X(L'_k)``.

Everything is built on demand.  Raw data is brought to normal form by
reindexing source and target along their orbit representatives, sorting the
fibers and, for operads with the factorization condition, replacing ``(C, γ)``
by the initial object of its factorization component.  Braid operads compare
morphisms by solving for the connecting block braid instead.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from typing import Any, Callable, Mapping, Sequence

from .algebras import (
    AlgDiagram,
    Algebra,
    AlgebraError,
    Carrier,
    ChainGroupAlgebra,
    DiagramCone,
    LaxMorphism,
    TwoCell,
    check_two_cell,
    compose_lax,
    identity_lax,
    lax_agree,
    strict_morphism,
)
from .braid import perm_identity, perm_inverse
from .cat_core import (
    CatDiagram,
    FinCat,
    Functor,
    IsoWitness,
    NatTransformation,
    cat_coend,
    compose_functors,
    grothendieck,
    is_isomorphism,
    iso_categories,
    point,
    tid,
    under_diagram,
)
from .operads import InitialOperad, Operad, PermElt, TranslationOperad, TranslationPair
from .reports import Report


class HocolimError(ValueError):
    pass


# ---------------------------------------------------------------------------
# data


@dataclass(frozen=True)
class HCObject:
    A: Any
    pairs: tuple  # ((K, L), ...)

    @property
    def arity(self) -> int:
        return len(self.pairs)

    def __str__(self) -> str:
        return f"[{self.A}; " + ", ".join(f"({k},{l})" for k, l in self.pairs) + "]"


def _fibers_of(phi: Sequence[int], n: int) -> list[tuple[int, ...]]:
    out: list[list[int]] = [[] for _ in range(n)]
    for i, k in enumerate(phi, start=1):
        out[k - 1].append(i)
    return [tuple(f) for f in out]


@dataclass(frozen=True, eq=False)
class HCMorphism:
    source: HCObject
    target: HCObject
    phi: tuple
    cs: tuple
    gamma: Any
    lams: tuple
    fs: tuple

    def fibers(self) -> list[tuple[int, ...]]:
        return _fibers_of(self.phi, self.target.arity)

    def sigma_inverse(self) -> tuple[int, ...]:
        return tuple(itertools.chain.from_iterable(self.fibers()))

    def __str__(self) -> str:
        fib = "|".join(",".join(map(str, f)) for f in self.fibers())
        return (f"{self.source} -> {self.target} fibers {fib}; C=({', '.join(map(str, self.cs))}); "
                f"γ={self.gamma}; λ=({', '.join(self.lams)}); f=({', '.join(map(str, self.fs))})")


@dataclass
class RawMorphism:
    """Five-part data in arbitrary position: any source/target presentation and fiber orders."""

    source_A: Any
    source_pairs: tuple
    target_A: Any
    target_pairs: tuple
    fibers: list
    cs: list
    gamma: Any
    lams: list
    fs: list

    def sigma_inverse(self) -> tuple[int, ...]:
        return tuple(itertools.chain.from_iterable(self.fibers))


@dataclass(frozen=True)
class Atom:
    kind: str  # "operad", "index", "evaluation" or "carrier"
    morphism: HCMorphism


# ---------------------------------------------------------------------------
# the homotopy colimit


class Hocolim:
    """hocolim X for a diagram X of algebras; objects and morphisms in normal form."""

    def __init__(self, X: AlgDiagram, strategy: str | None = None, enum_arity: int = 1, name: str | None = None,
                 check: bool = True):
        self.X = X
        self.L = X.index
        self.op: Operad = X.operad
        self.strategy = strategy or getattr(self.op, "strategy", "normalize")
        if self.strategy not in ("normalize", "solve"):
            raise HocolimError(f"no normalization strategy {self.strategy!r} for {self.op.name}")
        self.enum_arity = enum_arity
        self.check = check
        self._obsets: dict[str, set | None] = {}
        self.algebra = HocolimAlgebra(self, name or f"hocolim({self.op.name})")

    # helpers --------------------------------------------------------------
    def alg(self, l: str) -> Algebra:
        return self.X.at(l)

    def push(self, u: str, K):
        """X(u)(K)."""
        return self.X.on(u).ob(K)

    def _known_objects(self, l: str):
        if l not in self._obsets:
            c = self.alg(l).carrier
            self._obsets[l] = set(c.objects()) if getattr(c, "finite", False) else None
        return self._obsets[l]

    def _check_pair(self, K, l) -> None:
        if l not in self.L.identity:
            raise HocolimError(f"{l!r} is not an index object")
        known = self._known_objects(l)
        if known is not None and K not in known:
            raise HocolimError(f"{K!r} is not an object of X({l})")

    # objects --------------------------------------------------------------
    def obj(self, A, pairs: Sequence) -> HCObject:
        """Normal form of (A; pairs): A becomes its orbit representative and the pairs follow."""
        pairs = tuple((K, l) for K, l in pairs)
        if self.op.arity(A) != len(pairs):
            raise HocolimError(f"arity mismatch: {self.op.format(A)} with {len(pairs)} pairs")
        for K, l in pairs:
            self._check_pair(K, l)
        rep, rho = self.op.orbit_split(A)
        pi = perm_inverse(rho)
        return HCObject(rep, tuple(pairs[pi[j] - 1] for j in range(len(pairs))))

    def objects(self, max_arity: int | None = None) -> list[HCObject]:
        top = self.enum_arity if max_arity is None else max_arity
        pairs = [(K, l) for l in self.L.objects for K in self.alg(l).carrier.objects()]
        out = []
        for n in range(top + 1):
            seen = set()
            for a in self.op.objects(n):
                rep = self.op.orbit_rep(a)
                key = self.op.key(rep)
                if key in seen:
                    continue
                seen.add(key)
                for ps in itertools.product(pairs, repeat=n):
                    out.append(HCObject(rep, tuple(ps)))
        return out

    # normalization --------------------------------------------------------
    def _initial(self, b, cs, gamma_c):
        op = self.op
        if isinstance(op, TranslationOperad):
            # every object of a component is initial; take the identity permutations
            es = tuple(PermElt(perm_identity(op.arity(c))) for c in cs)
            return es, TranslationPair(op.source(gamma_c), op.substitute(b, es)), tuple(
                TranslationPair(e, c) for e, c in zip(es, cs))
        init = op.factorization_initial(b, cs, gamma_c)
        return tuple(init.objects), init.rho, tuple(init.comparisons)

    def _validate(self, raw: RawMorphism) -> None:
        op, L = self.op, self.L
        m, n = len(raw.source_pairs), len(raw.target_pairs)
        if op.arity(raw.source_A) != m or op.arity(raw.target_A) != n:
            raise HocolimError("arity of an end does not match its pairs")
        if len(raw.fibers) != n or sorted(raw.sigma_inverse()) != list(range(1, m + 1)):
            raise HocolimError("fibers do not partition the source inputs")
        if len(raw.cs) != n or any(op.arity(c) != len(f) for c, f in zip(raw.cs, raw.fibers)):
            raise HocolimError("factor arities do not match the fibers")
        if len(raw.lams) != m or len(raw.fs) != n:
            raise HocolimError("wrong number of index or carrier morphisms")
        phi = {i: k for k, f in enumerate(raw.fibers) for i in f}
        for i, lam in enumerate(raw.lams, start=1):
            if L.src.get(lam) != raw.source_pairs[i - 1][1] or L.dst[lam] != raw.target_pairs[phi[i]][1]:
                raise HocolimError(f"index morphism {lam!r} at input {i} is mistyped")
        sigma = perm_inverse(raw.sigma_inverse())
        expect = op.act(op.substitute(raw.target_A, list(raw.cs)), sigma)
        if op.source(raw.gamma) != raw.source_A or op.target(raw.gamma) != expect:
            raise HocolimError(f"γ = {raw.gamma} is not a morphism {raw.source_A} → {expect}")
        for k, (f, (Kt, lt)) in enumerate(zip(raw.fs, raw.target_pairs)):
            S = self.alg(lt)
            lk = tuple(self.push(raw.lams[i - 1], raw.source_pairs[i - 1][0]) for i in raw.fibers[k])
            src = S.act(raw.cs[k], lk)
            if not (S.carrier.ob_eq(S.carrier.source(f), src) and S.carrier.ob_eq(S.carrier.target(f), Kt)):
                raise HocolimError(f"carrier morphism {f} at target {k + 1} is mistyped")

    def normalize(self, raw: RawMorphism) -> HCMorphism:
        """The normal form of raw five-part data."""
        if self.check:
            self._validate(raw)
        op = self.op
        P = tuple(raw.source_pairs)
        Q = tuple(raw.target_pairs)
        fibers = [list(f) for f in raw.fibers]
        cs, gamma, lams, fs = list(raw.cs), raw.gamma, list(raw.lams), list(raw.fs)
        m, n = len(P), len(Q)
        # source: A1 = R·ρ, new input j is old input π(j)
        A1, rho1 = op.orbit_split(raw.source_A)
        if tuple(rho1) != perm_identity(m):
            pi = perm_inverse(rho1)
            P = tuple(P[pi[j] - 1] for j in range(m))
            lams = [lams[pi[j] - 1] for j in range(m)]
            fibers = [[rho1[i - 1] for i in f] for f in fibers]
            gamma = op.mor_act(gamma, pi)
        # target: A2 = R·ρ, new position k is old position τ(k)
        A2, rho2 = op.orbit_split(raw.target_A)
        if tuple(rho2) != perm_identity(n):
            tau = perm_inverse(rho2)
            Q = tuple(Q[tau[k] - 1] for k in range(n))
            fibers = [fibers[tau[k] - 1] for k in range(n)]
            cs = [cs[tau[k] - 1] for k in range(n)]
            fs = [fs[tau[k] - 1] for k in range(n)]
        # fibers in natural order; the factor absorbs the reordering
        for k, f in enumerate(fibers):
            order = tuple(sorted(range(1, len(f) + 1), key=lambda s: f[s - 1]))
            if order != perm_identity(len(f)):
                cs[k] = op.act(cs[k], order)
                fibers[k] = sorted(f)
        sigma_inv = tuple(itertools.chain.from_iterable(fibers))
        if self.strategy == "normalize":
            gamma_c = op.mor_act(gamma, sigma_inv)
            es, rho0, eps = self._initial(A2, cs, gamma_c)
            gamma = op.mor_act(rho0, perm_inverse(sigma_inv))
            for k in range(n):
                S = self.alg(Q[k][1])
                lk = tuple(self.push(lams[i - 1], P[i - 1][0]) for i in fibers[k])
                ids = tuple(S.carrier.identity(x) for x in lk)
                fs[k] = S.carrier.compose(fs[k], S.act_mor(eps[k], ids))
            cs = list(es)
        phi = [0] * m
        for k, f in enumerate(fibers, start=1):
            for i in f:
                phi[i - 1] = k
        return HCMorphism(HCObject(A1, P), HCObject(A2, Q), tuple(phi), tuple(cs), gamma, tuple(lams), tuple(fs))

    def morphism(self, source_A, source_pairs, target_A, target_pairs, fibers, cs, gamma, lams, fs) -> HCMorphism:
        return self.normalize(RawMorphism(source_A, tuple(source_pairs), target_A, tuple(target_pairs),
                                          [list(f) for f in fibers], list(cs), gamma, list(lams), list(fs)))

    # category structure ---------------------------------------------------
    def identity(self, x: HCObject) -> HCMorphism:
        op, L = self.op, self.L
        n = x.arity
        u = op.unit()
        return HCMorphism(x, x, tuple(range(1, n + 1)), tuple(u for _ in range(n)), op.identity(x.A),
                          tuple(L.identity[l] for _, l in x.pairs),
                          tuple(self.alg(l).carrier.identity(K) for K, l in x.pairs))

    def compose(self, v: HCMorphism, u: HCMorphism) -> HCMorphism:
        """v∘u: substitute the factors, compose γ and λ, and build h from the lax cells."""
        if u.target != v.source:
            raise HocolimError(f"not composable: {u.target} vs {v.source}")
        op, L = self.op, self.L
        fib_u, fib_v = u.fibers(), v.fibers()
        P, R = u.source.pairs, v.target.pairs
        raw_fibers, es, hs = [], [], []
        for l, fv in enumerate(fib_v):
            raw_fibers.append([i for j in fv for i in fib_u[j - 1]])
            es.append(op.substitute(v.cs[l], [u.cs[j - 1] for j in fv]))
            S = self.alg(R[l][1])
            cells, mors = [], []
            for j in fv:
                rho = self.X.on(v.lams[j - 1])
                lk = tuple(self.push(u.lams[i - 1], P[i - 1][0]) for i in fib_u[j - 1])
                cells.append(rho.cell(u.cs[j - 1], lk))
                mors.append(rho.mor(u.fs[j - 1]))
            idD = op.identity(v.cs[l])
            c = S.carrier
            hs.append(c.compose(v.fs[l], c.compose(S.act_mor(idD, mors), S.act_mor(idD, cells))))
        sigma1 = perm_inverse(u.sigma_inverse())
        lifted = op.mor_substitute(v.gamma, [op.identity(c) for c in u.cs])
        gamma = op.compose(op.mor_act(lifted, sigma1), u.gamma)
        lams = [L.compose(v.lams[u.phi[i] - 1], u.lams[i]) for i in range(len(P))]
        return self.normalize(RawMorphism(u.source.A, P, v.target.A, R, raw_fibers, es, gamma, lams, hs))

    def equal(self, u: HCMorphism, v: HCMorphism) -> bool:
        if u.source != v.source or u.target != v.target or u.phi != v.phi or u.lams != v.lams:
            return False
        op = self.op
        Q = u.target.pairs
        if self.strategy == "normalize":
            if any(op.key(a) != op.key(b) for a, b in zip(u.cs, v.cs)) or not op.mor_equal(u.gamma, v.gamma):
                return False
            return all(self.alg(l).carrier.mor_eq(f, g) for f, g, (_, l) in zip(u.fs, v.fs, Q))
        # solve for δ with (id∗δ)∘γ_v = γ_u and compare f_u with f_v transported along δ
        siginv = u.sigma_inverse()
        gu, gv = op.mor_act(u.gamma, siginv), op.mor_act(v.gamma, siginv)
        deltas = op.factorization_morphisms(u.target.A, (tuple(v.cs), gv), (tuple(u.cs), gu))
        if not deltas:
            return False
        delta = deltas[0]
        for k, f in enumerate(u.fibers()):
            S = self.alg(Q[k][1])
            lk = tuple(self.push(u.lams[i - 1], u.source.pairs[i - 1][0]) for i in f)
            moved = S.carrier.compose(u.fs[k], S.act_mor(delta[k], tuple(S.carrier.identity(x) for x in lk)))
            if not S.carrier.mor_eq(moved, v.fs[k]):
                return False
        return True

    def is_identity(self, m: HCMorphism) -> bool:
        return m.source == m.target and self.equal(m, self.identity(m.source))

    # the operad action ----------------------------------------------------
    def act(self, b, ys: Sequence[HCObject]) -> HCObject:
        if self.op.arity(b) != len(ys):
            raise HocolimError(f"arity mismatch: {self.op.format(b)} applied to {len(ys)} objects")
        a = self.op.substitute(b, [y.A for y in ys])
        return self.obj(a, tuple(itertools.chain.from_iterable(y.pairs for y in ys)))

    def act_mor(self, beta, us: Sequence[HCMorphism]) -> HCMorphism:
        op = self.op
        if op.arity(op.source(beta)) != len(us):
            raise HocolimError("arity mismatch in the action on morphisms")
        fibers, cs, lams, fs = [], [], [], []
        off = 0
        for u in us:
            fibers.extend([i + off for i in f] for f in u.fibers())
            cs.extend(u.cs)
            lams.extend(u.lams)
            fs.extend(u.fs)
            off += u.source.arity
        src = op.substitute(op.source(beta), [u.source.A for u in us])
        dst = op.substitute(op.target(beta), [u.target.A for u in us])
        gamma = op.mor_substitute(beta, [u.gamma for u in us])
        return self.normalize(RawMorphism(
            src, tuple(itertools.chain.from_iterable(u.source.pairs for u in us)),
            dst, tuple(itertools.chain.from_iterable(u.target.pairs for u in us)),
            fibers, cs, gamma, lams, fs))

    # atoms ----------------------------------------------------------------
    def permutation_free(self, m: HCMorphism) -> dict:
        """γ' = γ·σ⁻¹ out of A_1·σ⁻¹, with the source pairs and λ listed in fiber order."""
        op = self.op
        siginv = m.sigma_inverse()
        pairs = tuple(m.source.pairs[i - 1] for i in siginv)
        lams = tuple(m.lams[i - 1] for i in siginv)
        sizes = [len(f) for f in m.fibers()]
        blocks, off = [], 0
        for r in sizes:
            blocks.append(range(off, off + r))
            off += r
        pushed = tuple((self.push(lam, K), self.L.dst[lam]) for (K, _), lam in zip(pairs, lams))
        return {"gamma": op.mor_act(m.gamma, siginv), "pairs": pairs, "lams": lams, "blocks": blocks,
                "pushed": pushed, "B": op.substitute(m.target.A, list(m.cs))}

    def _singletons(self, A, pairs, B, new_pairs, gamma, lams, fs) -> RawMorphism:
        u = self.op.unit()
        n = len(pairs)
        return RawMorphism(A, tuple(pairs), B, tuple(new_pairs), [[i] for i in range(1, n + 1)],
                           [u] * n, gamma, list(lams), list(fs))

    def _id_pairs(self, pairs):
        return [self.alg(l).carrier.identity(K) for K, l in pairs]

    def decompose(self, m: HCMorphism, prune: bool = True) -> list[Atom]:
        """m = carrier ∘ evaluation ∘ index ∘ operad, each stage built from atoms."""
        op, L = self.op, self.L
        d = self.permutation_free(m)
        A2, pairs, pushed, B = m.target.A, d["pairs"], d["pushed"], d["B"]
        g = d["gamma"]
        stage1 = self._singletons(op.source(g), pairs, B, pairs, g, [L.identity[l] for _, l in pairs],
                                  self._id_pairs(pairs))
        stage2 = self._singletons(B, pairs, B, pushed, op.identity(B), d["lams"], self._id_pairs(pushed))
        evald = []
        for k, blk in enumerate(d["blocks"]):
            lt = m.target.pairs[k][1]
            evald.append((self.alg(lt).act(m.cs[k], tuple(pushed[i][0] for i in blk)), lt))
        stage3 = RawMorphism(B, pushed, A2, tuple(evald), [[i + 1 for i in blk] for blk in d["blocks"]],
                             list(m.cs), op.identity(B), [L.identity[l] for _, l in pushed],
                             self._id_pairs(evald))
        stage4 = self._singletons(A2, evald, A2, m.target.pairs, op.identity(A2),
                                  [L.identity[l] for _, l in evald], list(m.fs))
        out = []
        for kind, raw in (("operad", stage1), ("index", stage2), ("evaluation", stage3), ("carrier", stage4)):
            mm = self.normalize(raw)
            if prune and self.is_identity(mm):
                continue
            out.append(Atom(kind, mm))
        return out

    def recompose(self, atoms: Sequence[Atom], source: HCObject) -> HCMorphism:
        out = self.identity(source)
        for a in atoms:
            out = self.compose(a.morphism, out)
        return out

    # single atoms ---------------------------------------------------------
    def carrier_atom(self, l: str, f) -> HCMorphism:
        c = self.alg(l).carrier
        u = self.op.unit()
        return self.morphism(u, [(c.source(f), l)], u, [(c.target(f), l)], [[1]], [u], self.op.identity(u),
                             [self.L.identity[l]], [f])

    def index_atom(self, lam: str, K) -> HCMorphism:
        u = self.op.unit()
        l0, l1 = self.L.src[lam], self.L.dst[lam]
        K1 = self.push(lam, K)
        return self.morphism(u, [(K, l0)], u, [(K1, l1)], [[1]], [u], self.op.identity(u), [lam],
                             [self.alg(l1).carrier.identity(K1)])

    def evaluation_atom(self, a, Ks: Sequence, l: str) -> HCMorphism:
        op = self.op
        u = op.unit()
        S = self.alg(l)
        n = len(Ks)
        image = S.act(a, tuple(Ks))
        return self.morphism(a, [(K, l) for K in Ks], u, [(image, l)], [list(range(1, n + 1))], [a],
                             op.identity(a), [self.L.identity[l]] * n, [S.carrier.identity(image)])

    def operad_atom(self, alpha, y: HCObject) -> HCMorphism:
        """The atom of an operad morphism α: A → B acting on the pairs of y = [A; …]."""
        op = self.op
        if op.source(alpha) != y.A:
            raise HocolimError("operad atom source differs from the object")
        return self.normalize(self._singletons(y.A, y.pairs, op.target(alpha), y.pairs, alpha,
                                               [self.L.identity[l] for _, l in y.pairs], self._id_pairs(y.pairs)))

    # sampling -------------------------------------------------------------
    def random_morphism(self, rng: random.Random, x: HCObject, tries: int = 30) -> HCMorphism:
        """Sample raw data out of x and normalize it.

        Tree operads cut the target of a random α out of A; otherwise (and for
        half the small cases, which also reaches nullary factors) raw data is
        rejection-sampled.  One-to-one data is the last resort.
        """
        op, L = self.op, self.L
        m = x.arity
        splits = type(op).random_split is not Operad.random_split
        for _ in range(tries):
            if splits and (m > 4 or rng.random() < 0.5):
                alpha = op.random_morphism(rng, x.A)
                a2, cs, fibers = op.random_split(rng, op.target(alpha))
                raw = self._random_rest(rng, x, fibers, cs, a2, alpha)
                if raw is not None:
                    return self.normalize(raw)
                continue
            n = rng.randint(0 if op.has_nullary else min(1, m), m + (1 if op.has_nullary else 0))
            if m and n == 0:
                continue
            if isinstance(op, InitialOperad):
                n = m
            phi = [rng.randint(1, n) for _ in range(m)]
            fibers = _fibers_of(phi, n)
            if not op.has_nullary and any(not f for f in fibers):
                continue
            cs = [op.random_object(rng, len(f)) for f in fibers]
            if any(c is None for c in cs):
                continue
            sigma = perm_inverse(tuple(itertools.chain.from_iterable(fibers)))
            found = None
            for a2 in (op.random_object(rng, n) for _ in range(40)):
                if a2 is None:
                    break
                t = op.act(op.substitute(a2, cs), sigma)
                if op.finite_homs:
                    hs = op.hom(x.A, t)
                    if hs:
                        found = (a2, rng.choice(hs))
                        break
                    continue
                # infinite hom-sets: a random morphism out of A_1 followed by a fixed witness
                first = op.random_morphism(rng, x.A)
                w = op.hom_witness(op.target(first), t)
                if w is not None:
                    found = (a2, op.compose(w, first))
                    break
            if found is None:
                continue
            raw = self._random_rest(rng, x, fibers, cs, *found)
            if raw is not None:
                return self.normalize(raw)
        # one-to-one data: α: A → T and A_2 = T·σ⁻¹
        alpha = op.random_morphism(rng, x.A)
        sigma = list(range(1, m + 1))
        rng.shuffle(sigma)
        sigma = tuple(sigma)
        a2 = op.act(op.target(alpha), perm_inverse(sigma))
        fibers = _fibers_of(sigma, m)
        raw = self._random_rest(rng, x, fibers, [op.unit()] * m, a2, alpha)
        return self.normalize(raw) if raw is not None else self.identity(x)

    def _random_rest(self, rng, x, fibers, cs, a2, gamma) -> RawMorphism | None:
        L = self.L
        lams = [None] * x.arity
        targets, fs = [], []
        for k, f in enumerate(fibers):
            common = [t for t in L.objects if all(L.hom(x.pairs[i - 1][1], t) for i in f)]
            if not common:
                return None
            t = rng.choice(common)
            for i in f:
                lams[i - 1] = rng.choice(L.hom(x.pairs[i - 1][1], t))
            S = self.alg(t)
            src = S.act(cs[k], tuple(self.push(lams[i - 1], x.pairs[i - 1][0]) for i in f))
            fk = S.carrier.random_morphism(rng, src)
            fs.append(fk)
            targets.append((S.carrier.target(fk), t))
        return RawMorphism(x.A, x.pairs, a2, tuple(targets), [list(f) for f in fibers], list(cs), gamma, lams, fs)

    # finite enumeration (initial operad only) -----------------------------
    def hom(self, x: HCObject, y: HCObject) -> list[HCMorphism]:
        if not isinstance(self.op, InitialOperad):
            raise HocolimError("hom-sets are enumerated only over the initial operad")
        (K, l), (K2, l2) = x.pairs[0], y.pairs[0]
        out = []
        for lam in self.L.hom(l, l2):
            for f in self.alg(l2).carrier.hom(self.push(lam, K), K2):
                out.append(self.morphism(x.A, x.pairs, y.A, y.pairs, [[1]], [self.op.unit()],
                                         self.op.identity(x.A), [lam], [f]))
        return out

    # formatting -----------------------------------------------------------
    def fmt(self, x: HCObject) -> str:
        return "[" + self.op.format(x.A) + "; " + ", ".join(f"({K},{l})" for K, l in x.pairs) + "]"


# ---------------------------------------------------------------------------
# hocolim X as an algebra


class HocolimCarrier(Carrier):
    def __init__(self, H: Hocolim):
        self.H = H

    @property
    def finite(self):
        return isinstance(self.H.op, InitialOperad)

    def objects(self):
        return self.H.objects()

    def hom(self, x, y):
        return self.H.hom(x, y)

    def compose(self, g, f):
        return self.H.compose(g, f)

    def identity(self, x):
        return self.H.identity(x)

    def source(self, f):
        return f.source

    def target(self, f):
        return f.target

    def mor_eq(self, f, g):
        return self.H.equal(f, g)

    def random_morphism(self, rng, x):
        return self.H.random_morphism(rng, x)

    def fmt(self, x):
        return self.H.fmt(x)


class HocolimAlgebra(Algebra):
    rule = "hocolim"

    def __init__(self, H: Hocolim, name: str):
        super().__init__(H.op, HocolimCarrier(H), name)
        self.H = H

    def act(self, a, ks):
        return self.H.act(a, ks)

    def act_mor(self, alpha, fs):
        return self.H.act_mor(alpha, fs)


# module-level spellings of the main operations

def hc_object(H: Hocolim, A, pairs) -> HCObject:
    return H.obj(A, pairs)


def hc_morphism(H: Hocolim, raw: RawMorphism) -> HCMorphism:
    return H.normalize(raw)


def hc_compose(H: Hocolim, v: HCMorphism, u: HCMorphism) -> HCMorphism:
    return H.compose(v, u)


def hc_act(H: Hocolim, b, ys):
    if ys and isinstance(ys[0], HCMorphism):
        return H.act_mor(b, ys)
    return H.act(b, ys)


def decompose_atoms(H: Hocolim, m: HCMorphism) -> list[Atom]:
    return H.decompose(m)


# ---------------------------------------------------------------------------
# the universal cone and induced homomorphisms


def universal_j(H: Hocolim, l: str) -> LaxMorphism:
    """j_L: X(L) → hocolim X, K ↦ [id;(K,L)], with evaluation atoms as cells."""
    op = H.op
    u = op.unit()

    def ob(K):
        return HCObject(u, ((K, l),))

    def mor(f):
        return H.carrier_atom(l, f)

    def cell(a, ks):
        return H.evaluation_atom(a, ks, l)

    return LaxMorphism(H.alg(l), H.algebra, ob, mor, cell, name=f"j_{l}")


def universal_cone(H: Hocolim) -> DiagramCone:
    L = H.L
    legs = {o: universal_j(H, o) for o in L.objects}
    cells = {u: (lambda K, u=u: H.index_atom(u, K)) for u in L.src}
    return DiagramCone(H.X, H.algebra, legs, cells)


def _key(*parts) -> str:
    return "|".join(str(p) for p in parts)


class InducedR:
    """The strict homomorphism r: hocolim X → S determined by a cone k.

    r is evaluated on the permutation-free decomposition of a normal form;
    ``overrides`` replaces the value of individual generating pieces (used to
    check that the defining equations pin r down).
    """

    def __init__(self, H: Hocolim, cone: DiagramCone, overrides: Mapping[str, Any] | None = None):
        if cone.diagram is not H.X and cone.diagram.index is not H.L:
            raise HocolimError("cone and hocolim are over different diagrams")
        self.H, self.k, self.S = H, cone, cone.target
        self.overrides = dict(overrides or {})

    def _piece(self, key: str, fn: Callable):
        if key in self.overrides:
            return self.overrides[key]
        return fn()

    def leg(self, K, l):
        return self._piece(_key("ob", l, K), lambda: self.k.legs[l].ob(K))

    def ob(self, y: HCObject):
        return self.S.act(y.A, [self.leg(K, l) for K, l in y.pairs])

    def pieces(self, m: HCMorphism) -> dict[str, Any]:
        """The generating values used for r(m), keyed as ``overrides`` expects."""
        H, S, op = self.H, self.S, self.H.op
        d = H.permutation_free(m)
        sc = S.carrier
        out = {}
        g = d["gamma"]
        kk = tuple(self.leg(K, l) for K, l in d["pairs"])
        out[_key("gamma", op.format(op.source(g)), g, *kk)] = (
            lambda: S.act_mor(g, tuple(sc.identity(x) for x in kk)))
        for (K, l), lam in zip(d["pairs"], d["lams"]):
            out[_key("index", lam, K)] = (lambda lam=lam, K=K: self.k.cells[lam](K))
        for k, blk in enumerate(d["blocks"]):
            lt = m.target.pairs[k][1]
            ks = tuple(d["pushed"][i][0] for i in blk)
            c = m.cs[k]
            out[_key("cell", lt, op.format(c), *ks)] = (lambda lt=lt, c=c, ks=ks: self.k.legs[lt].cell(c, ks))
            out[_key("mor", lt, m.fs[k])] = (lambda lt=lt, f=m.fs[k]: self.k.legs[lt].mor(f))
        return out

    def mor(self, m: HCMorphism):
        H, S, op = self.H, self.S, self.H.op
        sc = S.carrier
        vals = {key: self._piece(key, fn) for key, fn in self.pieces(m).items()}
        d = H.permutation_free(m)
        kk = tuple(self.leg(K, l) for K, l in d["pairs"])
        g = d["gamma"]
        s1 = vals[_key("gamma", op.format(op.source(g)), g, *kk)]
        s2 = S.act_mor(op.identity(d["B"]), [vals[_key("index", lam, K)] for (K, _), lam in zip(d["pairs"], d["lams"])])
        cells, mors = [], []
        for k, blk in enumerate(d["blocks"]):
            lt = m.target.pairs[k][1]
            ks = tuple(d["pushed"][i][0] for i in blk)
            cells.append(vals[_key("cell", lt, op.format(m.cs[k]), *ks)])
            mors.append(vals[_key("mor", lt, m.fs[k])])
        idA = op.identity(m.target.A)
        s3 = S.act_mor(idA, cells)
        s4 = S.act_mor(idA, mors)
        return sc.compose(s4, sc.compose(s3, sc.compose(s2, s1)))

    def as_lax(self, name: str = "r") -> LaxMorphism:
        return strict_morphism(self.H.algebra, self.S, self.ob, self.mor, name=name)


def induced_r(H: Hocolim, cone: DiagramCone, validate: bool = False, max_arity: int = 2) -> InducedR:
    if validate:
        from .algebras import check_cone

        rep = check_cone(cone, max_arity=max_arity)
        if not rep.passed:
            raise HocolimError(f"cone is invalid: {rep.findings[0].law}: {rep.findings[0].witness}")
    return InducedR(H, cone)


def universal_samples(H: Hocolim, seed: int = 0, count: int = 20, max_arity: int = 2) -> list[HCMorphism]:
    """Random morphisms plus single operad atoms on objects over one index object."""
    rng = random.Random(seed)
    op = H.op
    objs = H.objects(max_arity)
    out = [H.random_morphism(rng, rng.choice(objs)) for _ in range(count)] if objs else []
    for n in range(2, max_arity + 1):
        for a in op.objects(n):
            if op.orbit_rep(a) != a:
                continue
            for _ in range(2):
                l = rng.choice(H.L.objects)
                ks = tuple(rng.choice(H.alg(l).carrier.objects()) for _ in range(n))
                y = HCObject(a, tuple((K, l) for K in ks))
                for b in op.objects(n) if op.finite_homs else []:
                    for alpha in op.hom(a, b)[:1]:
                        if alpha != op.identity(a):
                            out.append(H.operad_atom(alpha, y))
    return out


def check_universal(H: Hocolim, cone: DiagramCone, r: InducedR, max_arity: int = 2, seed: int = 0,
                    samples: Sequence[HCMorphism] | None = None) -> Report:
    """The defining equations of r: r∘j_L = k_L, r∘j_λ = k_λ, functoriality and strictness.

    A value that cannot even be formed (mistyped composite) counts as a violation.
    """
    S, op, L = cone.target, H.op, H.L
    sc = S.carrier
    rng = random.Random(seed)
    rep = Report("induced homomorphism")

    def run(law, witness, fn):
        try:
            rep.expect(bool(fn()), law, witness)
        except (ValueError, KeyError) as e:
            rep.fail(law, f"{witness}: {e}")
            rep.tick(law)

    rl = r.as_lax()
    for l in L.objects:
        objs = H.alg(l).carrier.objects()
        try:
            bad = lax_agree(compose_lax(rl, universal_j(H, l)), cone.legs[l], max_arity=max_arity, seed=seed,
                            objects=objs)
        except (ValueError, KeyError) as e:
            bad = [str(e)]
        rep.tick("r∘j_L = k_L")
        for b in bad:
            rep.fail("r∘j_L = k_L", f"at {l}: {b}")
        c = H.alg(l).carrier
        for x in objs:
            for y in objs:
                for f in c.hom(x, y) if getattr(c, "finite", False) else []:
                    run("r∘j_L = k_L", f"at {l}: morphism {f}",
                        lambda: sc.mor_eq(r.mor(H.carrier_atom(l, f)), cone.legs[l].mor(f)))
    for u in L.src:
        for K in H.alg(L.src[u]).carrier.objects():
            run("r∘j_λ = k_λ", f"{u} at {K}", lambda: sc.mor_eq(r.mor(H.index_atom(u, K)), cone.cells[u](K)))
    pool = list(samples) if samples is not None else universal_samples(H, seed, max_arity=max_arity)
    for m in pool:
        nxt = H.random_morphism(rng, m.target)
        run("r is typed", str(m), lambda: sc.ob_eq(sc.source(r.mor(m)), r.ob(m.source))
            and sc.ob_eq(sc.target(r.mor(m)), r.ob(m.target)))
        run("r is a functor", str(m),
            lambda: sc.mor_eq(r.mor(H.compose(nxt, m)), sc.compose(r.mor(nxt), r.mor(m))))
        ls = {l for _, l in m.target.pairs}
        if len(ls) == 1 and m.target.arity:
            ev = H.evaluation_atom(m.target.A, [K for K, _ in m.target.pairs], ls.pop())
            run("r is a functor", f"evaluation after {m}",
                lambda: sc.mor_eq(r.mor(H.compose(ev, m)), sc.compose(r.mor(ev), r.mor(m))))
    objs = H.objects(1)
    for _ in range(10):
        n = rng.randint(0, 2)
        b = op.random_object(rng, n)
        if b is None or not objs:
            continue
        ys = [rng.choice(objs) for _ in range(n)]
        us = [H.random_morphism(rng, y) for y in ys]
        run("r is strict", str(b), lambda: sc.ob_eq(r.ob(H.act(b, ys)), S.act(b, [r.ob(y) for y in ys])))
        run("r is strict", f"{b} on morphisms", lambda: sc.mor_eq(
            r.mor(H.act_mor(op.identity(b), us)), S.act_mor(op.identity(b), [r.mor(v) for v in us])))
    return rep


def perturbations(H: Hocolim, cone: DiagramCone, count: int, seed: int = 0,
                  samples: Sequence[HCMorphism] | None = None) -> list[InducedR]:
    """Copies of r with one generating piece moved to a different parallel value (or object)."""
    rng = random.Random(seed)
    r = InducedR(H, cone)
    S = cone.target
    sc = S.carrier
    pool = list(samples) if samples is not None else universal_samples(H, seed)
    for l in H.L.objects:
        for K in H.alg(l).carrier.objects():
            pool.append(H.index_atom(H.L.identity[l], K))
            pool.extend(H.carrier_atom(l, f) for f in H.alg(l).carrier.out_of(K)[:2])
    for u in H.L.src:
        if not H.L.is_identity(u):
            pool.extend(H.index_atom(u, K) for K in H.alg(H.L.src[u]).carrier.objects())
    choices = {}
    for m in pool:
        for key, fn in r.pieces(m).items():
            choices.setdefault(key, fn)
    for l in H.L.objects:
        for K in H.alg(l).carrier.objects():
            choices[_key("ob", l, K)] = None
    choices = list(choices.items())
    rng.shuffle(choices)
    out = []
    attempts = 0
    while len(out) < count and attempts < 50 * count:
        # distinct pieces first, repeats only once every piece has been used
        key, fn = choices[attempts % len(choices)] if attempts < len(choices) else rng.choice(choices)
        attempts += 1
        if fn is None:
            _, l, K = key.split("|", 2)
            old = cone.legs[l].ob(K)
            others = [x for x in sc.objects() if not sc.ob_eq(x, old)]
            if not others:
                continue
            out.append(InducedR(H, cone, {key: rng.choice(others)}))
            continue
        old = fn()
        alts = [g for g in sc.hom(sc.source(old), sc.target(old)) if not sc.mor_eq(g, old)]
        if not alts:
            continue
        out.append(InducedR(H, cone, {key: rng.choice(alts)}))
    return out


# ---------------------------------------------------------------------------
# 2-cells between cones


def check_modification(k: DiagramCone, k2: DiagramCone, s: Mapping[str, Callable], max_arity: int = 2,
                       seed: int = 0) -> Report:
    """Each s_L is a 2-cell k_L ⇒ k'_L and k'_λ ∘ s_{L0} = s_{L1}X(λ) ∘ k_λ."""
    X, L, S = k.diagram, k.diagram.index, k.target
    sc = S.carrier
    rep = Report("2-cell between cones")
    for o in L.objects:
        sub = check_two_cell(TwoCell(k.legs[o], k2.legs[o], s[o], name=f"s_{o}"), max_arity=max_arity, seed=seed,
                             objects=X.at(o).carrier.objects())
        for fd in sub.findings:
            rep.fail(fd.law, f"at {o}: {fd.witness}")
        rep.checked.update(sub.checked)
    for u in L.src:
        l0, l1 = L.src[u], L.dst[u]
        for K in X.at(l0).carrier.objects():
            lhs = sc.compose(k2.cells[u](K), s[l0](K))
            rhs = sc.compose(s[l1](X.on(u).ob(K)), k.cells[u](K))
            rep.expect(sc.mor_eq(lhs, rhs), "compatibility with the cone cells", f"{u} at {K}")
    return rep


def two_cell_t(H: Hocolim, r: InducedR, r2: InducedR, s: Mapping[str, Callable]) -> TwoCell:
    """t: r ⇒ r', t([A;(K_i,L_i)]) = A(s_{L_1}(K_1), …, s_{L_n}(K_n))."""
    S, op = r.S, H.op

    def comp(y: HCObject):
        return S.act_mor(op.identity(y.A), [s[l](K) for K, l in y.pairs])

    return TwoCell(r.as_lax("r"), r2.as_lax("r'"), comp, name="t")


def check_natural(t: TwoCell, morphisms: Sequence) -> Report:
    """Naturality squares of a transformation between strict homomorphisms on given morphisms."""
    f, g = t.source, t.target
    tc = f.target.carrier
    sc = f.source.carrier
    rep = Report(f"naturality of {t.name}")
    for m in morphisms:
        x, y = sc.source(m), sc.target(m)
        rep.expect(tc.mor_eq(tc.compose(g.mor(m), t.component(x)), tc.compose(t.component(y), f.mor(m))),
                   "naturality", str(m))
    return rep


# ---------------------------------------------------------------------------
# evaluation counit


def _is_constant(X: AlgDiagram) -> bool:
    algs = list(X.algebras.values())
    if any(a is not algs[0] for a in algs):
        return False
    return all(not lax_agree(X.on(u), identity_lax(algs[0]), max_arity=1) for u in X.index.src)


class EvalCounit:
    """hocolim cS → S: [A;(K_i,L_i)] ↦ A(K), operad and carrier atoms evaluated, the rest identities."""

    def __init__(self, H: Hocolim):
        if not _is_constant(H.X):
            raise HocolimError("the evaluation counit needs a constant diagram")
        self.H = H
        self.S = next(iter(H.X.algebras.values()))

    def ob(self, y: HCObject):
        return self.S.act(y.A, [K for K, _ in y.pairs])

    def mor(self, m: HCMorphism):
        S, op = self.S, self.H.op
        sc = S.carrier
        siginv = m.sigma_inverse()
        ks = [m.source.pairs[i - 1][0] for i in siginv]
        g = op.mor_act(m.gamma, siginv)
        first = S.act_mor(g, [sc.identity(K) for K in ks])
        return sc.compose(S.act_mor(op.identity(m.target.A), list(m.fs)), first)

    def as_lax(self) -> LaxMorphism:
        return strict_morphism(self.H.algebra, self.S, self.ob, self.mor, name="ε")


def identity_cone(X: AlgDiagram) -> DiagramCone:
    S = next(iter(X.algebras.values()))
    legs = {o: identity_lax(S) for o in X.index.objects}
    return DiagramCone(X, S, legs, {u: (lambda K: S.carrier.identity(K)) for u in X.index.src})


def eval_counit(H: Hocolim) -> EvalCounit:
    return EvalCounit(H)


# ---------------------------------------------------------------------------
# change of index


def precompose(X: AlgDiagram, F: Functor) -> AlgDiagram:
    """X∘F for F: N → L."""
    N = F.source
    return AlgDiagram(N, {n: X.at(F.ob(n)) for n in N.objects}, {u: X.on(F.mor(u)) for u in N.src}, X.operad)


class ChangeOfIndex:
    """F_*: hocolim(X∘F) → hocolim X relabels index objects and morphisms by F."""

    def __init__(self, F: Functor, H_target: Hocolim, H_source: Hocolim | None = None):
        self.F = F
        self.target = H_target
        self.source = H_source or Hocolim(precompose(H_target.X, F), strategy=H_target.strategy,
                                          enum_arity=H_target.enum_arity, check=H_target.check)

    def ob(self, y: HCObject) -> HCObject:
        return HCObject(y.A, tuple((K, self.F.ob(n)) for K, n in y.pairs))

    def mor(self, m: HCMorphism) -> HCMorphism:
        return HCMorphism(self.ob(m.source), self.ob(m.target), m.phi, m.cs, m.gamma,
                          tuple(self.F.mor(u) for u in m.lams), m.fs)

    def as_lax(self) -> LaxMorphism:
        return strict_morphism(self.source.algebra, self.target.algebra, self.ob, self.mor, name="F_*")


def change_index(F: Functor, H: Hocolim, H_source: Hocolim | None = None) -> ChangeOfIndex:
    return ChangeOfIndex(F, H, H_source)


class TauStar:
    """τ_*: F_* ⇒ H_*∘τ♯ for τ: F ⇒ G, where τ♯: hocolim(X∘F) → hocolim(X∘G) is induced by X(τ).

    The component at [A;(K_i,N_i)] is A applied to the index atoms τ_{N_i}.
    """

    def __init__(self, tau: NatTransformation, H: Hocolim):
        self.tau = tau
        self.H = H
        self.F_star = ChangeOfIndex(tau.source, H)
        self.G_star = ChangeOfIndex(tau.target, H)
        HF, HG = self.F_star.source, self.G_star.source
        X = H.X
        jG = universal_cone(HG)
        legs = {n: compose_lax(jG.legs[n], X.on(tau.components[n])) for n in HF.L.objects}
        cells = {u: (lambda K, u=u: jG.cells[u](X.on(tau.components[HF.L.src[u]]).ob(K))) for u in HF.L.src}
        self.sharp = InducedR(HF, DiagramCone(HF.X, HG.algebra, legs, cells))

    def component(self, y: HCObject) -> HCMorphism:
        H = self.H
        op = H.op
        src = self.F_star.ob(y)
        dst = self.G_star.ob(self.sharp.ob(y))
        lams = [self.tau.components[n] for _, n in y.pairs]
        fs = [H.alg(l).carrier.identity(K) for K, l in dst.pairs]
        return H.normalize(H._singletons(y.A, src.pairs, y.A, dst.pairs, op.identity(y.A), lams, fs))

    def check(self, morphisms: Sequence[HCMorphism]) -> Report:
        H = self.H
        rep = Report("τ_*")
        for m in morphisms:
            lhs = H.compose(self.G_star.mor(self.sharp.mor(m)), self.component(m.source))
            rhs = H.compose(self.component(m.target), self.F_star.mor(m))
            rep.expect(H.equal(lhs, rhs), "naturality", str(m))
        return rep


def tau_star(tau: NatTransformation, H: Hocolim) -> TauStar:
    return TauStar(tau, H)


# ---------------------------------------------------------------------------
# strictification


class Strictification:
    """str A = hocolim of A over the one-object index, with j, r, s (and k for free algebras)."""

    def __init__(self, alg: Algebra, enum_arity: int = 1):
        L = point()
        X = AlgDiagram(L, {"*": alg}, {"id*": identity_lax(alg)}, alg.operad)
        self.alg = alg
        self.H = Hocolim(X, enum_arity=enum_arity, name=f"str {alg.name}")
        self.j = universal_j(self.H, "*")
        self.counit = EvalCounit(self.H)
        self.r = self.counit.as_lax()

    def s(self, y: HCObject) -> HCMorphism:
        """s: id ⇒ j∘r, the evaluation atom ev(A)."""
        return self.H.evaluation_atom(y.A, [K for K, _ in y.pairs], "*")

    def check_rj(self, max_arity: int = 2, seed: int = 0) -> list[str]:
        objs = self.alg.carrier.objects()
        return lax_agree(compose_lax(self.r, self.j), identity_lax(self.alg), max_arity=max_arity, seed=seed,
                         objects=objs)

    def check_s(self, morphisms: Sequence[HCMorphism]) -> Report:
        H = self.H
        rep = Report("s: id ⇒ j∘r")
        for m in morphisms:
            jr = self.j.mor(self.r.mor(m))
            rep.expect(H.equal(H.compose(jr, self.s(m.source)), H.compose(self.s(m.target), m)), "naturality",
                       str(m))
        return rep

    # free algebras ----------------------------------------------------------
    def k_ob(self, z):
        F = self.alg
        return self.H.obj(z.A, [(F.eta(x), "*") for x in z.xs])

    def k_mor(self, m):
        F, H = self.alg, self.H
        n = len(m.xis)
        sinv = perm_inverse(m.sigma)
        fibers = [[sinv[k]] for k in range(n)]
        fs = [F.eta_mor(m.xis[sinv[k] - 1]) for k in range(n)]
        u = H.op.unit()
        return H.morphism(m.source.A, [(F.eta(x), "*") for x in m.source.xs], m.target.A,
                          [(F.eta(x), "*") for x in m.target.xs], fibers, [u] * n, m.alpha, ["id*"] * n, fs)

    def kr_to_id(self, y: HCObject) -> HCMorphism:
        """τ: k∘r ⇒ id at y = [A;(Z_i,*)], built from evaluation data with factors Z_i.A."""
        F, H, op = self.alg, self.H, self.H.op
        zs = [K for K, _ in y.pairs]
        src_A = op.substitute(y.A, [z.A for z in zs])
        src_pairs = [(F.eta(x), "*") for z in zs for x in z.xs]
        fibers, off = [], 0
        for z in zs:
            fibers.append(list(range(off + 1, off + len(z.xs) + 1)))
            off += len(z.xs)
        return H.morphism(src_A, src_pairs, y.A, y.pairs, fibers, [z.A for z in zs], op.identity(src_A),
                          ["id*"] * off, [F.carrier.identity(z) for z in zs])


def strictify(alg: Algebra, enum_arity: int = 1) -> Strictification:
    return Strictification(alg, enum_arity)


# ---------------------------------------------------------------------------
# the initial operad: Grothendieck construction


class CategoryAlgebra(Algebra):
    """A category as an algebra over the initial operad (only the unit acts)."""

    rule = "category"

    def act(self, a, ks):
        if len(ks) != 1:
            raise AlgebraError("the initial operad only has the unit")
        return ks[0]

    def act_mor(self, alpha, fs):
        if len(fs) != 1:
            raise AlgebraError("the initial operad only has the unit")
        return fs[0]


def initial_diagram(X: CatDiagram) -> AlgDiagram:
    op = InitialOperad()
    algs = {o: CategoryAlgebra(op, X.cats[o], name=f"X({o})") for o in X.index.objects}
    mors = {u: strict_morphism(algs[X.index.src[u]], algs[X.index.dst[u]], X.functors[u].ob, X.functors[u].mor,
                               name=u) for u in X.index.src}
    return AlgDiagram(X.index, algs, mors, op)


@dataclass
class GrothendieckCase:
    category: FinCat
    to_grothendieck: IsoWitness
    grothendieck: FinCat
    coend_witness: IsoWitness | None


def grothendieck_case(X: CatDiagram, H: Hocolim | None = None, with_coend: bool = True) -> GrothendieckCase:
    """hocolim over the initial operad as a finite category, with explicit witnesses."""
    if H is None:
        H = Hocolim(initial_diagram(X))
    elif not isinstance(H.op, InitialOperad):
        raise HocolimError("the Grothendieck case needs the initial operad")
    L = X.index
    u = H.op.unit()
    objs = [HCObject(u, ((K, l),)) for l in L.objects for K in X.cats[l].objects]
    oid = {x: tid(x.pairs[0][1], x.pairs[0][0]) for x in objs}

    def mid(m: HCMorphism) -> str:
        return tid(m.lams[0], m.source.pairs[0][0], m.fs[0])

    mors: dict[str, HCMorphism] = {}
    for x in objs:
        for y in objs:
            for m in H.hom(x, y):
                mors[mid(m)] = m
    table = {}
    by_src: dict[HCObject, list[str]] = {}
    for i, m in mors.items():
        by_src.setdefault(m.source, []).append(i)
    for i, m in mors.items():
        for j in by_src.get(m.target, []):
            table[(j, i)] = mid(H.compose(mors[j], m))
    ident = {oid[x]: mid(H.identity(x)) for x in objs}
    cat = FinCat([oid[x] for x in objs], [(i, oid[m.source], oid[m.target]) for i, m in mors.items()], ident, table)
    g = grothendieck(L, X)
    # the hocolim ids were chosen as the Grothendieck ids; the witness is the identity relabelling
    fwd = Functor(cat, g, {o: o for o in cat.objects}, {m: m for m in cat.src})
    bwd = Functor(g, cat, {o: o for o in g.objects}, {m: m for m in g.src})
    w = IsoWitness(fwd, bwd)
    if set(cat.src) != set(g.src) or not is_isomorphism(w):
        raise HocolimError("hocolim over the initial operad is not the Grothendieck construction")
    co = iso_categories(cat, cat_coend(under_diagram(L), X)) if with_coend else None
    return GrothendieckCase(cat, w, g, co)


# ---------------------------------------------------------------------------
# JSON


def object_to_json(H: Hocolim, y: HCObject) -> dict:
    return {"A": H.op.elt_to_json(y.A), "pairs": [[K, l] for K, l in y.pairs]}


def raw_from_json(H: Hocolim, doc: Mapping) -> RawMorphism:
    op = H.op
    s, t = doc["source"], doc["target"]
    return RawMorphism(op.elt_from_json(s["A"]), tuple((K, l) for K, l in s["pairs"]), op.elt_from_json(t["A"]),
                       tuple((K, l) for K, l in t["pairs"]), [list(f) for f in doc["fibers"]],
                       [op.elt_from_json(c) for c in doc["C"]], op.mor_from_json(doc["gamma"]), list(doc["lambda"]),
                       list(doc["f"]))


def raw_to_json(H: Hocolim, raw: RawMorphism) -> dict:
    op = H.op
    return {
        "source": {"A": op.elt_to_json(raw.source_A), "pairs": [list(p) for p in raw.source_pairs]},
        "target": {"A": op.elt_to_json(raw.target_A), "pairs": [list(p) for p in raw.target_pairs]},
        "fibers": [list(f) for f in raw.fibers],
        "C": [op.elt_to_json(c) for c in raw.cs],
        "gamma": op.mor_to_json(raw.gamma),
        "lambda": list(raw.lams),
        "f": list(raw.fs),
    }


def morphism_to_json(H: Hocolim, m: HCMorphism) -> dict:
    return raw_to_json(H, RawMorphism(m.source.A, m.source.pairs, m.target.A, m.target.pairs,
                                      [list(f) for f in m.fibers()], list(m.cs), m.gamma, list(m.lams), list(m.fs)))


def dumps_morphism(H: Hocolim, m: HCMorphism) -> str:
    return json.dumps(morphism_to_json(H, m), sort_keys=True, ensure_ascii=False)
