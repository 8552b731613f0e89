"""Braid words, permutations, and the braid word problem.

Conventions: a permutation is a tuple ``p`` of images, ``p[i-1] = p(i)``, and
``compose(p, q) = p∘q``.  For a braid word ``w = w_1 … w_L`` the underlying
permutation is ``t_{w_1}∘…∘t_{w_L}``, so ``p(uv) = p(u)∘p(v)``.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

DEFAULT_WORD_CAP = 64


class BraidError(ValueError):
    pass


# ---------------------------------------------------------------------------
# permutations

Perm = tuple[int, ...]


def perm_identity(n: int) -> Perm:
    return tuple(range(1, n + 1))


def perm_compose(p: Perm, q: Perm) -> Perm:
    """p∘q."""
    if len(p) != len(q):
        raise BraidError("degree mismatch")
    return tuple(p[q[i] - 1] for i in range(len(q)))


def perm_inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, v in enumerate(p, 1):
        out[v - 1] = i
    return tuple(out)


def perm_is_valid(p: Sequence[int]) -> bool:
    return sorted(p) == list(range(1, len(p) + 1))


def transposition(n: int, i: int) -> Perm:
    """The adjacent transposition (i, i+1) in Σ_n."""
    p = list(range(1, n + 1))
    p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


def perm_block_sum(ps: Sequence[Perm]) -> Perm:
    out: list[int] = []
    off = 0
    for p in ps:
        out.extend(v + off for v in p)
        off += len(p)
    return tuple(out)


def perm_block(p: Perm, sizes: Sequence[int]) -> Perm:
    """Block permutation p⟨r_1..r_n⟩: moves block j (of size r_j) to block slot p(j)."""
    n = len(p)
    if len(sizes) != n:
        raise BraidError("block size list does not match degree")
    pinv = perm_inverse(p)
    # start offset of the slot that block j lands in
    slot_sizes = [sizes[pinv[s] - 1] for s in range(n)]
    slot_start = list(itertools.accumulate([0] + slot_sizes[:-1]))
    out: list[int] = []
    for j in range(n):
        start = slot_start[p[j] - 1]
        out.extend(start + t + 1 for t in range(sizes[j]))
    return tuple(out)


def inversions(p: Perm) -> int:
    n = len(p)
    return sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])


def all_perms(n: int) -> list[Perm]:
    return [tuple(x) for x in itertools.permutations(range(1, n + 1))]


# ---------------------------------------------------------------------------
# braid words


@dataclass(frozen=True)
class BraidWord:
    n: int
    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        for i, e in self.letters:
            if not 1 <= i < self.n or e not in (1, -1):
                raise BraidError(f"letter {(i, e)} out of range for {self.n} strands")

    @property
    def positive(self) -> bool:
        return all(e == 1 for _, e in self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if self.n != other.n:
            raise BraidError("strand-count mismatch")
        return BraidWord(self.n, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.n, tuple((i, -e) for i, e in reversed(self.letters)))

    def __str__(self) -> str:
        if not self.letters:
            return "e"
        return " ".join(f"s{i}" if e == 1 else f"s{i}^-1" for i, e in self.letters)

    @classmethod
    def parse(cls, n: int, text: str) -> "BraidWord":
        """Parse 's1 s2 s1^-1'; 'e' or the empty string is the trivial word."""
        letters = []
        for tok in text.split():
            if tok == "e":
                continue
            if not tok.startswith("s"):
                raise BraidError(f"bad braid letter {tok!r}")
            body, _, exp = tok[1:].partition("^")
            e = int(exp) if exp else 1
            if e not in (1, -1):
                raise BraidError(f"exponent must be ±1 in {tok!r}")
            letters.append((int(body), e))
        return cls(n, tuple(letters))

    @classmethod
    def of(cls, n: int, *gens: int) -> "BraidWord":
        """Word from signed generator indices, e.g. of(3, 1, 2, -1)."""
        return cls(n, tuple((abs(g), 1 if g > 0 else -1) for g in gens))

    def to_json(self) -> list[int]:
        return [i * e for i, e in self.letters]


def identity_braid(n: int) -> BraidWord:
    return BraidWord(n, ())


def underlying_permutation(w: BraidWord) -> Perm:
    p = perm_identity(w.n)
    for i, _ in w.letters:
        p = perm_compose(p, transposition(w.n, i))
    return p


def block_sum(ws: Sequence[BraidWord]) -> BraidWord:
    letters = []
    off = 0
    for w in ws:
        letters.extend((i + off, e) for i, e in w.letters)
        off += w.n
    return BraidWord(off, tuple(letters))


# ---------------------------------------------------------------------------
# simple elements (permutation braids)


def permutation_braid(p: Perm) -> BraidWord:
    """The positive braid in which every pair of strands crosses at most once and
    whose underlying permutation is ``p``."""
    n = len(p)
    letters = []
    cur = list(p)
    # peel σ_i from the left while it shortens: p = t_i ∘ p'
    while True:
        for i in range(1, n):
            q = perm_compose(transposition(n, i), tuple(cur))
            if inversions(q) < inversions(tuple(cur)):
                letters.append((i, 1))
                cur = list(q)
                break
        else:
            break
    return BraidWord(n, tuple(letters))


def half_twist(n: int) -> Perm:
    return tuple(range(n, 0, -1))


def _left_divisors(p: Perm) -> frozenset[int]:
    n = len(p)
    base = inversions(p)
    return frozenset(i for i in range(1, n) if inversions(perm_compose(transposition(n, i), p)) < base)


def _right_divisors(p: Perm) -> frozenset[int]:
    n = len(p)
    base = inversions(p)
    return frozenset(i for i in range(1, n) if inversions(perm_compose(p, transposition(n, i))) < base)


def _tau(p: Perm) -> Perm:
    """Conjugation by the half twist: Δ x Δ⁻¹ on simples."""
    d = half_twist(len(p))
    return perm_compose(perm_compose(d, p), d)


@dataclass(frozen=True)
class GarsideNF:
    """Δ^power · s_1 ⋯ s_r with left-weighted simples, none equal to e or Δ."""

    n: int
    power: int
    factors: tuple[Perm, ...]

    def to_word(self) -> BraidWord:
        d = permutation_braid(half_twist(self.n))
        letters: list[tuple[int, int]] = []
        if self.power >= 0:
            for _ in range(self.power):
                letters.extend(d.letters)
        else:
            for _ in range(-self.power):
                letters.extend(d.inverse().letters)
        for s in self.factors:
            letters.extend(permutation_braid(s).letters)
        return BraidWord(self.n, tuple(letters))


def garside_normal_form(w: BraidWord, cap: int | None = DEFAULT_WORD_CAP) -> GarsideNF:
    """Left-greedy normal form of ``w`` in B_n; ``cap=None`` lifts the length limit."""
    if cap is not None and len(w) > cap:
        raise BraidError(f"braid word of length {len(w)} exceeds cap {cap}")
    n = w.n
    if n <= 1:
        return GarsideNF(n, 0, ())
    delta = half_twist(n)
    e = perm_identity(n)
    # rewrite w as Δ^{-k} · P with P a list of simples.  σ_i^{-1} = Δ^{-1}·(Δσ_i^{-1}),
    # and Δ^{-1} is pushed left through earlier simples with τ.
    power = 0
    simples: list[Perm] = []
    for i, sgn in w.letters:
        t = transposition(n, i)
        if sgn == 1:
            simples.append(t)
        else:
            # x Δ^{-1} = Δ^{-1} τ(x) since Δ x = τ(x) Δ and τ is an involution
            simples = [_tau(s) for s in simples]
            power -= 1
            simples.append(perm_compose(delta, t))
    return _normalize_positive(n, power, simples)


def _normalize_positive(n: int, power: int, simples: list[Perm]) -> GarsideNF:
    delta = half_twist(n)
    e = perm_identity(n)
    factors = [s for s in simples if s != e]
    changed = True
    while changed:
        changed = False
        # pull Δ factors to the front
        for idx, s in enumerate(factors):
            if s == delta:
                before = [_tau(x) for x in factors[:idx]]
                factors = before + factors[idx + 1 :]
                power += 1
                changed = True
                break
        if changed:
            continue
        for idx in range(len(factors) - 1):
            a, b = factors[idx], factors[idx + 1]
            fin = _right_divisors(a)
            start = _left_divisors(b)
            movable = [j for j in sorted(start) if j not in fin]
            if movable:
                j = movable[0]
                t = transposition(n, j)
                factors[idx] = perm_compose(a, t)
                factors[idx + 1] = perm_compose(t, b)
                factors = [s for s in factors if s != e]
                changed = True
                break
    return GarsideNF(n, power, tuple(factors))


def normal_word(w: BraidWord, cap: int | None = None) -> BraidWord:
    """Canonical word for the braid ``w`` (positive whenever ``w`` is positive)."""
    return garside_normal_form(w, cap).to_word()


def braid_equal_garside(u: BraidWord, v: BraidWord, cap: int | None = DEFAULT_WORD_CAP) -> bool:
    if u.n != v.n:
        raise BraidError("strand-count mismatch")
    return garside_normal_form(u, cap) == garside_normal_form(v, cap)


def positive_class(w: BraidWord) -> frozenset[tuple[int, ...]]:
    """All positive words equal to ``w`` in B_n⁺, by closure under the relations."""
    if not w.positive:
        raise BraidError("positive_class needs a positive word")
    start = tuple(i for i, _ in w.letters)
    return _positive_class(w.n, start)


@lru_cache(maxsize=4096)
def _positive_class(n: int, start: tuple[int, ...]) -> frozenset[tuple[int, ...]]:
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for k in range(len(x) - 1):
            a, b = x[k], x[k + 1]
            if abs(a - b) > 1:
                y = x[:k] + (b, a) + x[k + 2 :]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
            if k + 2 < len(x):
                c = x[k + 2]
                if a == c and abs(a - b) == 1:
                    y = x[:k] + (b, a, b) + x[k + 3 :]
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
    return frozenset(seen)


def braid_equal_bfs(u: BraidWord, v: BraidWord) -> bool:
    if u.n != v.n:
        raise BraidError("strand-count mismatch")
    if len(u) != len(v):
        return False
    return tuple(i for i, _ in v.letters) in positive_class(u)


def braid_equal(u: BraidWord, v: BraidWord, cap: int = DEFAULT_WORD_CAP) -> bool:
    """Equality in B_n, read in B_n⁺ when both words are positive.

    B_n⁺ embeds in B_n, so both readings agree on positive words; small positive
    words go through the rewriting closure and everything else through Garside.
    """
    if u.n != v.n:
        raise BraidError("strand-count mismatch")
    if u.positive and v.positive:
        if len(u) != len(v):
            return False
        if u.n <= 5 and len(u) <= 12:
            return braid_equal_bfs(u, v)
    return braid_equal_garside(u, v, cap)


# ---------------------------------------------------------------------------
# strand deletion and block subgroups


def delete_strands(w: BraidWord, keep: Iterable[int]) -> BraidWord:
    """Braid on the strands starting at the positions in ``keep``; the others are erased.

    Well defined on braids whose permutation maps ``keep`` onto itself.
    """
    keep_set = set(keep)
    n = w.n
    # strand occupying each position; strands named by start position.  letters act
    # right-to-left in time (p(uv) = p(u)∘p(v)), so scan the word from the right.
    at = list(range(1, n + 1))
    out: list[tuple[int, int]] = []
    kept_sorted = sorted(keep_set)
    for i, e in reversed(w.letters):
        a, b = at[i - 1], at[i]
        if a in keep_set and b in keep_set:
            rank = sum(1 for s in at[: i - 1] if s in keep_set) + 1
            out.append((rank, e))
        at[i - 1], at[i] = b, a
    if sorted(pos for pos, s in enumerate(at, 1) if s in keep_set) != kept_sorted:
        raise BraidError("strand set is not preserved by the braid")
    return BraidWord(len(keep_set), tuple(reversed(out)))


def block_decompose(w: BraidWord, sizes: Sequence[int]) -> list[BraidWord] | None:
    """If ``w`` lies in B_{r_1}×…×B_{r_n} (blocks of the given sizes), return its factors."""
    if sum(sizes) != w.n:
        raise BraidError("block sizes do not sum to strand count")
    p = underlying_permutation(w)
    starts = list(itertools.accumulate([0] + list(sizes[:-1])))
    for s, r in zip(starts, sizes):
        block = set(range(s + 1, s + r + 1))
        if {p[i - 1] for i in block} != block:
            return None
    parts = [delete_strands(w, range(s + 1, s + r + 1)) for s, r in zip(starts, sizes)]
    if braid_equal_garside(block_sum(parts), w, cap=None):
        return parts
    return None
