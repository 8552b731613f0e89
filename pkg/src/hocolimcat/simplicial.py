"""Truncated simplicial sets, nerves, Bousfield–Kan homotopy colimits and integral homology.

Homology is computed from the normalized chain complex.  Only degrees strictly
below the truncation cap are reported, since the top boundary is missing.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Sequence

from .cat_core import CatDiagram, FinCat, validate_category

Simplex = Hashable
NECESSARY_ONLY = "NECESSARY-ONLY"


class SimplicialError(ValueError):
    pass


@dataclass
class TruncSSet:
    """Simplices in dimensions 0..cap with face and degeneracy tables.

    ``faces[n][x]`` lists (d_0 x, …, d_n x) for n ≥ 1 and ``degens[n][x]`` lists
    (s_0 x, …, s_n x) for n < cap.
    """

    cap: int
    simplices: list[list[Simplex]]
    faces: list[dict]
    degens: list[dict]
    _nondeg: list | None = field(default=None, repr=False)

    def face(self, n: int, i: int, x: Simplex) -> Simplex:
        return self.faces[n][x][i]

    def degen(self, n: int, i: int, x: Simplex) -> Simplex:
        return self.degens[n][x][i]

    def counts(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.simplices)

    def nondegenerate(self, n: int) -> list[Simplex]:
        if self._nondeg is None:
            out = []
            for k in range(self.cap + 1):
                if k == 0:
                    out.append(list(self.simplices[0]))
                    continue
                image = {y for x in self.simplices[k - 1] for y in self.degens[k - 1][x]}
                out.append([x for x in self.simplices[k] if x not in image])
            self._nondeg = out
        return self._nondeg[n]

    def nondegenerate_counts(self) -> tuple[int, ...]:
        return tuple(len(self.nondegenerate(n)) for n in range(self.cap + 1))

    def to_json(self) -> dict:
        index = [{x: i for i, x in enumerate(level)} for level in self.simplices]
        return {
            "cap": self.cap,
            "simplices": [[repr(x) for x in level] for level in self.simplices],
            "faces": {
                str(n): [[index[n - 1][y] for y in self.faces[n][x]] for x in self.simplices[n]]
                for n in range(1, self.cap + 1)
            },
            "degeneracies": {
                str(n): [[index[n + 1][y] for y in self.degens[n][x]] for x in self.simplices[n]]
                for n in range(self.cap)
            },
        }

    @classmethod
    def from_json(cls, doc: dict) -> "TruncSSet":
        cap = doc["cap"]
        sims = [list(level) for level in doc["simplices"]]
        faces: list[dict] = [{}]
        for n in range(1, cap + 1):
            faces.append({x: tuple(sims[n - 1][j] for j in row) for x, row in zip(sims[n], doc["faces"][str(n)])})
        degens = []
        for n in range(cap):
            degens.append({x: tuple(sims[n + 1][j] for j in row)
                           for x, row in zip(sims[n], doc["degeneracies"][str(n)])})
        degens.append({})
        return cls(cap, sims, faces, degens)


def check_simplicial_identities(x: TruncSSet) -> list[str]:
    """Every simplicial identity on the stored range; each violation names the identity."""
    problems: list[str] = []
    d, s = x.face, x.degen
    for n in range(2, x.cap + 1):
        for y in x.simplices[n]:
            for j in range(n + 1):
                for i in range(j):
                    if d(n - 1, i, d(n, j, y)) != d(n - 1, j - 1, d(n, i, y)):
                        problems.append(f"d{i}d{j} = d{j - 1}d{i} fails on {y!r}")
    for n in range(0, x.cap):
        for y in x.simplices[n]:
            for j in range(n + 1):
                z = s(n, j, y)
                for i in range(n + 2):
                    got = d(n + 1, i, z)
                    if i < j:
                        want = s(n - 1, j - 1, d(n, i, y))
                    elif i in (j, j + 1):
                        want = y
                    else:
                        want = s(n - 1, j, d(n, i - 1, y))
                    if got != want:
                        problems.append(f"d{i}s{j} identity fails on {y!r}")
                if n + 1 < x.cap:
                    for i in range(j + 1):
                        if s(n + 1, i, z) != s(n + 1, j + 1, s(n, i, y)):
                            problems.append(f"s{i}s{j} = s{j + 1}s{i} fails on {y!r}")
    return problems


# ---------------------------------------------------------------------------
# nerves


def nerve(c: FinCat, d: int) -> TruncSSet:
    """Chains of composable morphisms (f_1, …, f_n) read left to right, up to length d."""
    if d < 1:
        raise SimplicialError("dimension cap must be at least 1")
    problems = validate_category(c)
    if problems:
        raise SimplicialError("invalid category: " + problems[0])
    sims: list[list] = [list(c.objects), [(m,) for m in c.src]]
    for n in range(2, d + 1):
        sims.append([ch + (g,) for ch in sims[-1] for g in c.out_of(c.dst[ch[-1]])])
    faces: list[dict] = [{}]
    faces.append({(m,): (c.dst[m], c.src[m]) for m in c.src})
    for n in range(2, d + 1):
        level = {}
        for ch in sims[n]:
            fs = [ch[1:]]
            for i in range(1, n):
                fs.append(ch[: i - 1] + (c.compose(ch[i], ch[i - 1]),) + ch[i + 1:])
            fs.append(ch[:-1])
            level[ch] = tuple(fs)
        faces.append(level)
    degens: list[dict] = [{o: ((c.identity[o],),) for o in c.objects}]
    for n in range(1, d):
        level = {}
        for ch in sims[n]:
            objs = [c.src[ch[0]]] + [c.dst[m] for m in ch]
            level[ch] = tuple(ch[:i] + (c.identity[objs[i]],) + ch[i:] for i in range(n + 1))
        degens.append(level)
    degens.append({})
    return TruncSSet(d, sims, faces, degens)


# ---------------------------------------------------------------------------
# Smith normal form


def _identity_matrix(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[list[int], list[list[int]], list[list[int]]]:
    """Diagonal d_1 | d_2 | … and unimodular U, V with U·m·V = diag.

    Exact integer arithmetic; each step pivots on an entry of least absolute value.
    """
    a = [list(map(int, row)) for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    U = _identity_matrix(rows)
    V = _identity_matrix(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row_dst += k·row_src
        if k:
            a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
            U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        if k:
            for row in a:
                row[dst] += k * row[src]
            for row in V:
                row[dst] += k * row[src]

    diag = []
    t = 0
    while t < min(rows, cols):
        entries = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = a[t][t]
            for i in range(t + 1, rows):
                add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, cols):
                add_col(j, t, -(a[t][j] // p))
            rest = [(abs(a[i][t]), i, "r") for i in range(t + 1, rows) if a[i][t]]
            rest += [(abs(a[t][j]), j, "c") for j in range(t + 1, cols) if a[t][j]]
            if rest:
                _, k, kind = min(rest)
                if kind == "r":
                    swap_rows(t, k)
                else:
                    swap_cols(t, k)
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
        diag.append(a[t][t])
        t += 1
    diag += [0] * (min(rows, cols) - len(diag))
    return diag, U, V


def mat_mul(x: Sequence[Sequence[int]], y: Sequence[Sequence[int]]) -> list[list[int]]:
    cols = list(zip(*y)) if y else []
    return [[sum(p * q for p, q in zip(row, col)) for col in cols] for row in x]


def elementary_divisors(columns: dict[int, dict[int, int]]) -> list[int]:
    """Nonzero invariant factors of a sparse integer matrix given column-wise.

    Unit pivots are eliminated sparsely (cheapest first); whatever is left is
    handed to the dense Smith normal form.
    """
    cols = {c: dict(v) for c, v in columns.items() if v}
    rows: dict[int, set[int]] = {}
    for c, v in cols.items():
        for r in v:
            rows.setdefault(r, set()).add(c)
    units = 0
    while True:
        best = None
        for c, v in cols.items():
            for r, x in v.items():
                if x in (1, -1):
                    cost = (len(v) - 1) * (len(rows[r]) - 1)
                    if best is None or cost < best[0]:
                        best = (cost, r, c)
                        if cost == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, r, c = best
        pivot_col = cols.pop(c)
        p = pivot_col[r]
        for c2 in list(rows[r]):
            if c2 == c:
                continue
            col2 = cols[c2]
            k = col2[r] * p  # p = ±1 so this clears the entry
            for r2, x in pivot_col.items():
                val = col2.get(r2, 0) - k * x
                if val:
                    if r2 not in col2:
                        rows.setdefault(r2, set()).add(c2)
                    col2[r2] = val
                else:
                    if r2 in col2:
                        del col2[r2]
                        rows[r2].discard(c2)
            if not col2:
                del cols[c2]
        for r2 in pivot_col:
            rows[r2].discard(c)
        del rows[r]
        units += 1
    rest_rows = sorted({r for v in cols.values() for r in v})
    rest_cols = sorted(cols)
    divisors = [1] * units
    if rest_cols:
        ri = {r: i for i, r in enumerate(rest_rows)}
        dense = [[0] * len(rest_cols) for _ in rest_rows]
        for j, c in enumerate(rest_cols):
            for r, x in cols[c].items():
                dense[ri[r]][j] = x
        diag, _, _ = smith_normal_form(dense)
        divisors += [x for x in diag if x]
    return divisors


# ---------------------------------------------------------------------------
# homology


@dataclass
class ChainComplex:
    """Normalized chains: ``boundaries[n]`` maps n-simplex index → {(n−1)-simplex index: coefficient}."""

    ranks: list[int]
    boundaries: list[dict[int, dict[int, int]]]

    def check(self) -> list[str]:
        problems = []
        for n in range(2, len(self.ranks)):
            for c, col in self.boundaries[n].items():
                acc: dict[int, int] = {}
                for r, x in col.items():
                    for r2, y in self.boundaries[n - 1].get(r, {}).items():
                        acc[r2] = acc.get(r2, 0) + x * y
                if any(acc.values()):
                    problems.append(f"∂∂ ≠ 0 on generator {c} in degree {n}")
        return problems

    def dense(self, n: int) -> list[list[int]]:
        m = [[0] * self.ranks[n] for _ in range(self.ranks[n - 1])]
        for c, col in self.boundaries[n].items():
            for r, x in col.items():
                m[r][c] = x
        return m


def chain_complex(x: TruncSSet) -> ChainComplex:
    index = [{s: i for i, s in enumerate(x.nondegenerate(n))} for n in range(x.cap + 1)]
    boundaries: list[dict] = [{}]
    for n in range(1, x.cap + 1):
        level = {}
        for s, c in index[n].items():
            col: dict[int, int] = {}
            for i, f in enumerate(x.faces[n][s]):
                r = index[n - 1].get(f)
                if r is not None:
                    col[r] = col.get(r, 0) + (-1) ** i
            level[c] = {r: v for r, v in col.items() if v}
        boundaries.append(level)
    return ChainComplex([len(i) for i in index], boundaries)


@dataclass
class HomologyResult:
    betti: list[int]
    torsion: list[list[int]]
    trusted_top: int

    def groups(self) -> list[str]:
        out = []
        for b, t in zip(self.betti, self.torsion):
            parts = ["Z"] * b + [f"Z/{k}" for k in t]
            out.append(" ⊕ ".join(parts) if parts else "0")
        return out

    def to_json(self) -> dict:
        return {"betti": self.betti, "torsion": self.torsion, "trusted_top": self.trusted_top,
                "groups": self.groups()}

    def to_text(self) -> str:
        lines = ["degree  group"]
        for n, g in enumerate(self.groups()):
            lines.append(f"H{n:<6} {g}")
        lines.append(f"(degrees above {self.trusted_top} are not computed)")
        return "\n".join(lines)

    def __eq__(self, other):
        if not isinstance(other, HomologyResult):
            return NotImplemented
        top = min(self.trusted_top, other.trusted_top)
        return self.betti[: top + 1] == other.betti[: top + 1] and self.torsion[: top + 1] == other.torsion[: top + 1]


def homology(x: TruncSSet) -> HomologyResult:
    """Integral homology in degrees 0..cap−1."""
    cx = chain_complex(x)
    problems = cx.check()
    if problems:
        raise SimplicialError(problems[0])
    divs = [[]] + [elementary_divisors(cx.boundaries[n]) for n in range(1, x.cap + 1)]
    betti, torsion = [], []
    for n in range(x.cap):
        rank_out = len(divs[n]) if n > 0 else 0
        rank_in = len(divs[n + 1])
        betti.append(cx.ranks[n] - rank_out - rank_in)
        torsion.append(sorted(d for d in divs[n + 1] if d > 1))
    return HomologyResult(betti, torsion, x.cap - 1)


def weak_equivalence_check(x: TruncSSet, y: TruncSSet) -> dict:
    """Equal homology in the trusted range and equal component counts; a necessary condition only."""
    hx, hy = homology(x), homology(y)
    return {"label": NECESSARY_ONLY, "agree": hx == hy, "left": hx.to_json(), "right": hy.to_json()}


# ---------------------------------------------------------------------------
# bisimplicial sets


@dataclass
class BiSSet:
    """Bisimplices at (p, q) for p, q ≤ cap; horizontal operators change p, vertical ones q."""

    cap: int
    simplices: dict[tuple[int, int], list]
    hfaces: dict[tuple[int, int], dict]
    vfaces: dict[tuple[int, int], dict]
    hdegens: dict[tuple[int, int], dict]
    vdegens: dict[tuple[int, int], dict]

    @classmethod
    def external_product(cls, x: TruncSSet, y: TruncSSet) -> "BiSSet":
        cap = min(x.cap, y.cap)
        sims, hf, vf, hd, vd = {}, {}, {}, {}, {}
        for p in range(cap + 1):
            for q in range(cap + 1):
                sims[(p, q)] = [(a, b) for a in x.simplices[p] for b in y.simplices[q]]
                if p >= 1:
                    hf[(p, q)] = {(a, b): tuple((f, b) for f in x.faces[p][a]) for (a, b) in sims[(p, q)]}
                if q >= 1:
                    vf[(p, q)] = {(a, b): tuple((a, f) for f in y.faces[q][b]) for (a, b) in sims[(p, q)]}
                if p < cap:
                    hd[(p, q)] = {(a, b): tuple((s, b) for s in x.degens[p][a]) for (a, b) in sims[(p, q)]}
                if q < cap:
                    vd[(p, q)] = {(a, b): tuple((a, s) for s in y.degens[q][b]) for (a, b) in sims[(p, q)]}
        return cls(cap, sims, hf, vf, hd, vd)

    @classmethod
    def constant_vertically(cls, x: TruncSSet) -> "BiSSet":
        """(p, q) ↦ X_p with identity vertical operators."""
        sims, hf, vf, hd, vd = {}, {}, {}, {}, {}
        cap = x.cap
        for p in range(cap + 1):
            for q in range(cap + 1):
                sims[(p, q)] = list(x.simplices[p])
                if p >= 1:
                    hf[(p, q)] = x.faces[p]
                if q >= 1:
                    vf[(p, q)] = {a: (a,) * (q + 1) for a in x.simplices[p]}
                if p < cap:
                    hd[(p, q)] = x.degens[p]
                if q < cap:
                    vd[(p, q)] = {a: (a,) * (q + 1) for a in x.simplices[p]}
        return cls(cap, sims, hf, vf, hd, vd)

    @classmethod
    def from_levels(cls, levels: Sequence[TruncSSet], faces: Sequence[Sequence[dict]],
                    degens: Sequence[Sequence[dict]]) -> "BiSSet":
        """Simplicial object in simplicial sets: ``levels[p]`` is the p-th simplicial set,
        ``faces[p][i]`` and ``degens[p][i]`` are simplicial maps given as {simplex: simplex}."""
        cap = min(len(levels) - 1, min(l.cap for l in levels))
        sims, hf, vf, hd, vd = {}, {}, {}, {}, {}
        for p in range(cap + 1):
            lv = levels[p]
            for q in range(cap + 1):
                sims[(p, q)] = list(lv.simplices[q])
                if q >= 1:
                    vf[(p, q)] = lv.faces[q]
                if q < cap:
                    vd[(p, q)] = lv.degens[q]
                if p >= 1:
                    hf[(p, q)] = {a: tuple(faces[p][i][a] for i in range(p + 1)) for a in lv.simplices[q]}
                if p < cap:
                    hd[(p, q)] = {a: tuple(degens[p][i][a] for i in range(p + 1)) for a in lv.simplices[q]}
        return cls(cap, sims, hf, vf, hd, vd)


def diag(b: BiSSet, cap: int | None = None) -> TruncSSet:
    d = b.cap if cap is None else cap
    if d > b.cap:
        raise SimplicialError("diagonal cap exceeds the bisimplicial caps")
    sims = [list(b.simplices[(n, n)]) for n in range(d + 1)]
    faces: list[dict] = [{}]
    for n in range(1, d + 1):
        faces.append({
            x: tuple(b.vfaces[(n - 1, n)][b.hfaces[(n, n)][x][i]][i] for i in range(n + 1)) for x in sims[n]
        })
    degens: list[dict] = []
    for n in range(d):
        degens.append({
            x: tuple(b.vdegens[(n + 1, n)][b.hdegens[(n, n)][x][i]][i] for i in range(n + 1)) for x in sims[n]
        })
    degens.append({})
    return TruncSSet(d, sims, faces, degens)


# ---------------------------------------------------------------------------
# diagrams of simplicial sets and their homotopy colimit


@dataclass
class SSetDiagram:
    """A functor from a finite category to truncated simplicial sets.

    ``maps[u][n]`` is the dimension-n component {simplex: simplex} of the map for u.
    """

    index: FinCat
    sets: dict[str, TruncSSet]
    maps: dict[str, list[dict]]

    @classmethod
    def nerve_of(cls, X: CatDiagram, d: int) -> "SSetDiagram":
        sets = {l: nerve(c, d) for l, c in X.cats.items()}
        maps = {}
        for u, f in X.functors.items():
            comp = [{o: f.ob(o) for o in sets[X.index.src[u]].simplices[0]}]
            for n in range(1, d + 1):
                comp.append({ch: tuple(f.mor(m) for m in ch) for ch in sets[X.index.src[u]].simplices[n]})
            maps[u] = comp
        return cls(X.index, sets, maps)

    def validate(self) -> list[str]:
        L = self.index
        problems = []
        for u, comp in self.maps.items():
            s, t = self.sets[L.src[u]], self.sets[L.dst[u]]
            for n in range(1, s.cap + 1):
                for x in s.simplices[n]:
                    if tuple(comp[n - 1][f] for f in s.faces[n][x]) != t.faces[n][comp[n][x]]:
                        problems.append(f"map for {u} does not commute with faces at {x!r}")
        for (g, f), h in L.table.items():
            for n in range(self.sets[L.src[f]].cap + 1):
                for x in self.sets[L.src[f]].simplices[n]:
                    if self.maps[g][n][self.maps[f][n][x]] != self.maps[h][n][x]:
                        problems.append(f"non-functorial at {g}∘{f}")
                        break
        return problems


def _under_chains(L: FinCat, l: str, n: int) -> list[tuple]:
    """n-simplices of N(l/L): (leg l→c_0, f_1, …, f_n)."""
    out = [(leg,) for c in L.objects for leg in L.hom(l, c)]
    for _ in range(n):
        out = [ch + (g,) for ch in out for g in L.out_of(L.dst[ch[-1]])]
    return out


def ss_hocolim(L: FinCat, Z: SSetDiagram) -> TruncSSet:
    """N(−/L) ⊗_L Z as a levelwise coend, with no cofibrant replacement.

    Level n is the disjoint union over l of N(l/L)_n × Z(l)_n modulo
    (σ·u, z) ~ (σ, Z(u) z) for u: l0 → l1, where σ·u precomposes the leg.
    """
    problems = Z.validate()
    if problems:
        raise SimplicialError(problems[0])
    cap = min(s.cap for s in Z.sets.values())
    parent: dict = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            if repr(rb) < repr(ra):
                ra, rb = rb, ra
            parent[rb] = ra

    elems: list[list] = []
    for n in range(cap + 1):
        level = []
        for l in L.objects:
            for ch in _under_chains(L, l, n):
                for z in Z.sets[l].simplices[n]:
                    level.append((n, l, ch, z))
        elems.append(level)
        for u in L.src:
            l0, l1 = L.src[u], L.dst[u]
            for ch in _under_chains(L, l1, n):
                pre = (L.compose(ch[0], u),) + ch[1:]
                for z in Z.sets[l0].simplices[n]:
                    union((n, l0, pre, z), (n, l1, ch, Z.maps[u][n][z]))

    def face(n, i, e):
        _, l, ch, z = e
        legs = [(L.compose(ch[1], ch[0]),) + ch[2:]]
        legs += [ch[:k] + (L.compose(ch[k + 1], ch[k]),) + ch[k + 2:] for k in range(1, n)]
        legs.append(ch[:-1])
        return find((n - 1, l, legs[i], Z.sets[l].faces[n][z][i]))

    def degen(n, i, e):
        _, l, ch, z = e
        c = [L.dst[ch[0]]] + [L.dst[m] for m in ch[1:]]
        new = ch[: i + 1] + (L.identity[c[i]],) + ch[i + 1:]
        return find((n + 1, l, new, Z.sets[l].degens[n][z][i]))

    sims = [sorted({find(e) for e in level}, key=repr) for level in elems]
    faces: list[dict] = [{}]
    for n in range(1, cap + 1):
        faces.append({e: tuple(face(n, i, e) for i in range(n + 1)) for e in sims[n]})
    degens = [{e: tuple(degen(n, i, e) for i in range(n + 1)) for e in sims[n]} for n in range(cap)]
    degens.append({})
    return TruncSSet(cap, sims, faces, degens)


def ss_hocolim_normal_form_counts(L: FinCat, Z: SSetDiagram) -> tuple[int, ...]:
    """Simplex counts of the homotopy colimit by reduction to legs equal to identities.

    Every class has exactly one representative whose leg is an identity, so
    level n has Σ over chains c_0 → … → c_n of |Z(c_0)_n| simplices.
    """
    cap = min(s.cap for s in Z.sets.values())
    out = []
    for n in range(cap + 1):
        total = 0
        for c0 in L.objects:
            chains = [(L.identity[c0],)]
            for _ in range(n):
                chains = [ch + (g,) for ch in chains for g in L.out_of(L.dst[ch[-1]])]
            total += len(chains) * len(Z.sets[c0].simplices[n])
        out.append(total)
    return tuple(out)


def constant_ssdiagram(L: FinCat, x: TruncSSet) -> SSetDiagram:
    ident = [{s: s for s in level} for level in x.simplices]
    return SSetDiagram(L, {l: x for l in L.objects}, {u: ident for u in L.src})
