"""Longest common anchored substring, via two-families LCP or direct extension."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .docstore import DocPair, VirtualConcat, charged
from .families import FamilyPairs, build_trimmed_trie, max_pair_lcp, sort_suffixes
from .kernel import extend_match


@dataclass(frozen=True, order=True)
class Witness:
    """A common substring ``S1[start1 .. start1+length-1] = S2[start2 ..]``."""

    length: int = 0
    start1: int = 1
    start2: int = 1

    def validate(self, pair: DocPair) -> bool:
        if self.length == 0:
            return True
        a, b = pair.a, pair.b
        if self.start1 < 1 or self.start2 < 1:
            return False
        if self.start1 + self.length - 1 > len(a) or self.start2 + self.length - 1 > len(b):
            return False
        i = a.lo + self.start1 - 1
        j = b.lo + self.start2 - 1
        return a.base[i:i + self.length] == b.base[j:j + self.length]

    def shifted(self, d1: int, d2: int) -> "Witness":
        if self.length == 0:
            return self
        return Witness(self.length, self.start1 + d1, self.start2 + d2)

    def text(self, pair: DocPair):
        i = pair.a.lo + self.start1 - 1
        return pair.a.base[i:i + self.length]


EMPTY = Witness()


def better(w: Witness, best: Witness) -> bool:
    """Longer wins; among equal lengths the smaller (start1, start2)."""
    if w.length != best.length:
        return w.length > best.length
    return w.length > 0 and (w.start1, w.start2) < (best.start1, best.start2)


@dataclass
class AnchorSets:
    a1: list[int] = field(default_factory=list)
    a2: list[int] = field(default_factory=list)
    tags1: dict[int, str] = field(default_factory=dict, repr=False)
    tags2: dict[int, str] = field(default_factory=dict, repr=False)

    @classmethod
    def from_tags(cls, t1: Mapping[int, str], t2: Mapping[int, str]) -> "AnchorSets":
        return cls(sorted(t1), sorted(t2), dict(t1), dict(t2))

    @classmethod
    def of(cls, a1: Iterable[int], a2: Iterable[int], tag: str = "grid") -> "AnchorSets":
        return cls.from_tags({p: tag for p in a1}, {p: tag for p in a2})

    def union(self, other: "AnchorSets") -> "AnchorSets":
        t1 = dict(other.tags1)
        t1.update(self.tags1)
        t2 = dict(other.tags2)
        t2.update(self.tags2)
        return AnchorSets.from_tags(t1, t2)

    def __len__(self) -> int:
        return len(self.a1) + len(self.a2)

    def words(self) -> int:
        return 2 * len(self)


def _naive(pair: DocPair, anchors: AnchorSets) -> Witness:
    best_v, best_p = -1, (0, 0, 0)
    for p1 in anchors.a1:
        for p2 in anchors.a2:
            left, right = extend_match(pair, p1, p2)
            if left + right > best_v:
                best_v, best_p = left + right, (p1, p2, left)
    if best_v <= 0:
        return EMPTY
    p1, p2, left = best_p
    return Witness(best_v, p1 - left, p2 - left)


def lcas_families(pair: DocPair, anchors: AnchorSets):
    """The trie and families P, Q of the reduction (start positions in S1$S1^r$S2$S2^r)."""
    v = VirtualConcat(pair)
    n1 = pair.n1
    total = len(v)
    P = []
    for p in anchors.a1:
        P.append((p, 2 * n1 + 3 - p, p))
    Q = []
    for p in anchors.a2:
        Q.append((2 * n1 + 2 + p, total + 2 - p, p))
    starts = set()
    for f, s, _ in P + Q:
        starts.add(f)
        starts.add(s)
    return v, starts, FamilyPairs(tuple(P), "P"), FamilyPairs(tuple(Q), "Q")


def _covers(a: list[int], n: int) -> bool:
    return len(a) == n and a[0] == 1 and a[-1] == n


def _all_positions(pair: DocPair) -> Witness:
    """Every position anchored: plain LCS from adjacent suffixes of S1 and S2."""
    v = VirtualConcat(pair)
    n1 = pair.n1
    off2 = 2 * n1 + 2
    starts = list(range(1, n1 + 1)) + list(range(off2 + 1, off2 + pair.n2 + 1))
    with charged(3 * len(starts)):
        order, lcp = sort_suffixes(v, starts)
    best = EMPTY
    for k in range(1, len(order)):
        a, b = order[k - 1], order[k]
        if (a <= n1) == (b <= n1) or not lcp[k]:
            continue
        g1, g2 = (a, b) if a <= n1 else (b, a)
        w = Witness(lcp[k], g1, g2 - off2)
        if better(w, best):
            best = w
    return best


def _trie(pair: DocPair, anchors: AnchorSets) -> Witness:
    if _covers(anchors.a1, pair.n1) and _covers(anchors.a2, pair.n2):
        return _all_positions(pair)
    v, starts, P, Q = lcas_families(pair, anchors)
    with charged(3 * len(starts)):
        t = build_trimmed_trie(v, starts)
        res = max_pair_lcp(t, P, Q)
    if res.value <= 0:
        return EMPTY
    left = res.second_lcp
    return Witness(res.value, res.p_witness - left, res.q_witness - left)


def solve_lcas(pair: DocPair, anchors: AnchorSets, engine: str = "trie") -> Witness:
    """Longest substring with a synchronized anchor pair from ``anchors``."""
    if not anchors.a1 or not anchors.a2 or pair.n1 == 0 or pair.n2 == 0:
        return EMPTY
    with charged(anchors.words()):
        if engine == "naive":
            return _naive(pair, anchors)
        if engine == "trie":
            return _trie(pair, anchors)
    raise ValueError(f"unknown engine {engine!r}")
