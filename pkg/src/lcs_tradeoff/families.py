"""Sparse suffix tries over the virtual string and the two-families LCP problem."""

from __future__ import annotations

import functools
from bisect import bisect_left, insort
from array import array
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from sortedcontainers import SortedList

from .docstore import Span, VirtualConcat, charged, segment_slice
from .kernel import lcp_bwd, lcp_fwd

_KEY = 12        # symbols per sort key before falling back to full comparison
_NODE_WORDS = 4  # depth, parent, representative start, child-list slot
_SMALL_SET = 512  # plain sorted lists below this size, SortedList above


# ---------------------------------------------------------------------------
# suffix comparison on the virtual string


def _seg_lcp(x, y, limit: int) -> int:
    """LCP of two segment reads ``(span, rev, off, rem, term)`` up to ``limit``."""
    if limit <= 0:
        return 0
    sx, rx, ox = x[0], x[1], x[2]
    sy, ry, oy = y[0], y[1], y[2]
    if not rx and not ry:
        return lcp_fwd(sx.base, sx.lo + ox, sy.base, sy.lo + oy, limit)
    if rx and ry:
        return lcp_bwd(sx.base, sx.hi - ox, sy.base, sy.hi - oy, limit)
    n = 0
    step = 16
    while n < limit:
        s = min(step, limit - n)
        a = segment_slice(sx, rx, ox + n, s)
        b = segment_slice(sy, ry, oy + n, s)
        if a == b:
            n += s
            step = min(step * 2, 256)
            continue
        k = 0
        while a[k] == b[k]:
            k += 1
        return n + k
    return n


def _seg_symbol(x, k: int) -> int:
    span, rev, off = x[0], x[1], x[2]
    if rev:
        return span.base[span.hi - 1 - off - k]
    return span.base[span.lo + off + k]


def suffix_lcp(x, y) -> int:
    """LCP of two distinct suffixes (never crosses a sentinel)."""
    return _seg_lcp(x, y, min(x[3], y[3]))


def suffix_cmp(x, y) -> int:
    """Three-way lexicographic comparison; the end of the string sorts lowest."""
    lim = min(x[3], y[3])
    l = _seg_lcp(x, y, lim)
    if l < lim:
        return -1 if _seg_symbol(x, l) < _seg_symbol(y, l) else 1
    tx = -1 if x[4] is None else x[4]
    ty = -1 if y[4] is None else y[4]
    if x[3] == y[3]:
        return (tx > ty) - (tx < ty)
    if x[3] < y[3]:  # x hits its terminator against a letter of y
        return -1 if tx < 0 else 1
    return 1 if ty < 0 else -1


def sort_suffixes(v: VirtualConcat, starts: Sequence[int]) -> tuple[list[int], list[int]]:
    """Sort suffixes of ``v`` by start; return ``(order, lcp)`` with lcp[0] = 0."""
    infos = {g: v.locate(g) for g in starts}

    def key(g: int):
        span, rev, off, rem, term = infos[g]
        if rem == 0:
            return () if term is None else (term,)
        if rem <= _KEY:
            k = tuple(segment_slice(span, rev, off, rem))
            return k if term is None else k + (term,)
        return tuple(segment_slice(span, rev, off, _KEY))

    keyed = sorted((key(g), g) for g in starts)
    order: list[int] = []
    i = 0
    cmp = functools.cmp_to_key(lambda a, b: suffix_cmp(infos[a], infos[b]))
    while i < len(keyed):
        j = i + 1
        while j < len(keyed) and keyed[j][0] == keyed[i][0]:
            j += 1
        group = [g for _, g in keyed[i:j]]
        if len(group) > 1:
            group.sort(key=cmp)
        order.extend(group)
        i = j
    lcp = [0] * len(order)
    for k in range(1, len(order)):
        lcp[k] = suffix_lcp(infos[order[k - 1]], infos[order[k]])
    return order, lcp


# ---------------------------------------------------------------------------
# compact tries


@dataclass
class CompactTrie:
    """Compact trie stored as parallel arrays; node 0 is the root.

    ``members[u]`` lists the start positions (into the virtual string) whose
    string ends exactly at node u.  The edge into u is labelled by the
    fragment ``rep[u] + depth[parent[u]] .. rep[u] + depth[u] - 1``.
    """

    v: VirtualConcat
    depth: list[int]
    parent: list[int]
    children: list[list[int]]
    rep: list[int]
    members: dict[int, list[int]]
    trimmed: bool = False
    node_of: dict[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.node_of:
            for u, gs in self.members.items():
                for g in gs:
                    self.node_of[g] = u

    @property
    def size(self) -> int:
        return len(self.depth)

    def words(self) -> int:
        return _NODE_WORDS * len(self.depth) + 2 * len(self.node_of)

    def label(self, u: int) -> tuple[int, int]:
        """Global inclusive range of the edge label into node u."""
        p = self.parent[u]
        d0 = self.depth[p] if p >= 0 else 0
        return self.rep[u] + d0, self.rep[u] + self.depth[u] - 1

    def preorder(self) -> list[int]:
        out = []
        stack = [0]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(reversed(self.children[u]))
        return out

    def spell(self, u: int) -> list[int]:
        """Symbols on the root-to-u path (debug and tests)."""
        g = self.rep[u]
        return [self.v.char_at(g + k) for k in range(self.depth[u])]

    def lca(self, u: int, w: int) -> int:
        seen = set()
        while u >= 0:
            seen.add(u)
            u = self.parent[u]
        while w not in seen:
            w = self.parent[w]
        return w

    def dump(self) -> str:
        """Deterministic text rendering: preorder, depths, labels, members."""
        lines = []
        level = {0: 0}
        for u in self.preorder():
            for c in self.children[u]:
                level[c] = level[u] + 1
            lab = "-" if u == 0 else "%d..%d" % self.label(u)
            mem = ",".join(str(g) for g in sorted(self.members.get(u, ())))
            lines.append(f"{'  ' * level[u]}node depth={self.depth[u]} label={lab} members=[{mem}]")
        return "\n".join(lines)


def _build(v: VirtualConcat, order: list[int], lcp: list[int], leaf_depth) -> CompactTrie:
    depth = [0]
    parent = [-1]
    children: list[list[int]] = [[]]
    rep = [order[0] if order else 0]
    members: dict[int, list[int]] = {}
    stack = [0]
    for idx, g in enumerate(order):
        h = lcp[idx]
        last = -1
        while depth[stack[-1]] > h:
            last = stack.pop()
        top = stack[-1]
        if depth[top] < h:
            u = len(depth)
            depth.append(h)
            parent.append(top)
            rep.append(g)
            children.append([last])
            children[top][-1] = u
            parent[last] = u
            stack.append(u)
            top = u
        L = leaf_depth(g)
        if L == depth[top]:
            members.setdefault(top, []).append(g)
            continue
        w = len(depth)
        depth.append(L)
        parent.append(top)
        rep.append(g)
        children.append([])
        children[top].append(w)
        members[w] = [g]
        stack.append(w)
    return CompactTrie(v, depth, parent, children, rep, members)


def build_sparse_suffix_trie(v: VirtualConcat, starts: Iterable[int]) -> CompactTrie:
    """Compact trie of the suffixes ``v[g..]`` for ``g`` in ``starts``.

    Positions up to ``2n+4`` are accepted; ``2n+4`` is the empty suffix.
    """
    starts = sorted(set(starts))
    if not starts:
        raise ValueError("no starts")
    if starts[0] < 1 or starts[-1] > len(v) + 1:
        raise IndexError("start outside the virtual string")
    order, lcp = sort_suffixes(v, starts)
    full = len(v) + 1
    return _build(v, order, lcp, lambda g: full - g)


def trim_at_sentinels(t: CompactTrie) -> CompactTrie:
    """Cut every leaf just above its first sentinel, merging equal strings."""
    v = t.v
    depth = list(t.depth)
    dead = [False] * t.size
    members = {u: list(gs) for u, gs in t.members.items()}
    children = [list(c) for c in t.children]
    for u in sorted(t.members, key=lambda w: -t.depth[w]):
        if t.children[u]:
            continue
        (g,) = t.members[u]
        cut = v.trimmed_length(g)
        p = t.parent[u]
        if p >= 0 and cut == depth[p]:
            members.setdefault(p, []).append(g)
            del members[u]
            children[p].remove(u)
            dead[u] = True
        else:
            depth[u] = cut
    # renumber live nodes in preorder
    new_id: dict[int, int] = {}
    order = []
    stack = [0]
    while stack:
        u = stack.pop()
        new_id[u] = len(order)
        order.append(u)
        stack.extend(reversed(children[u]))
    nd = [depth[u] for u in order]
    npar = [new_id[t.parent[u]] if t.parent[u] >= 0 else -1 for u in order]
    nch = [[new_id[c] for c in children[u]] for u in order]
    nmem = {new_id[u]: sorted(gs) for u, gs in members.items() if not dead[u]}
    nrep = []
    for u in order:
        nrep.append(t.rep[u])
    return CompactTrie(v, nd, npar, nch, nrep, nmem, trimmed=True)


def build_trimmed_trie(v: VirtualConcat, starts: Iterable[int]) -> CompactTrie:
    """Same trie as ``trim_at_sentinels(build_sparse_suffix_trie(v, starts))``.

    Adjacent LCPs never cross a sentinel, so the stack construction can use
    the trimmed lengths as leaf depths and skip the separate cutting pass.
    """
    starts = sorted(set(starts))
    if not starts:
        raise ValueError("no starts")
    if starts[0] < 1 or starts[-1] > len(v) + 1:
        raise IndexError("start outside the virtual string")
    order, lcp = sort_suffixes(v, starts)
    t = _build(v, order, lcp, v.trimmed_length)
    t.trimmed = True
    return t


# ---------------------------------------------------------------------------
# range minimum in O(N) words


class BlockRMQ:
    """Range minimum over a fixed array: block minima plus a sparse table on them."""

    B = 32

    def __init__(self, values: Sequence[int]) -> None:
        self.values = values
        B = self.B
        mins = [min(values[i:i + B]) for i in range(0, len(values), B)]
        table = [mins]
        k = 1
        while 2 * k <= len(mins):
            prev = table[-1]
            table.append([min(prev[i], prev[i + k]) for i in range(len(prev) - k)])
            k *= 2
        self.table = table

    def words(self) -> int:
        return len(self.values) + sum(len(r) for r in self.table)

    def query(self, lo: int, hi: int) -> int:
        """min(values[lo..hi]) inclusive."""
        B = self.B
        bl, bh = lo // B, hi // B
        vals = self.values
        if bl == bh:
            return min(vals[lo:hi + 1])
        best = min(min(vals[lo:(bl + 1) * B]), min(vals[bh * B:hi + 1]))
        if bh - bl > 1:
            a, b = bl + 1, bh - 1
            k = (b - a + 1).bit_length() - 1
            row = self.table[k]
            best = min(best, row[a], row[b - (1 << k) + 1])
        return best


# ---------------------------------------------------------------------------
# two string families LCP


@dataclass(frozen=True)
class FamilyPairs:
    """Pairs ``(first, second)`` of trie members tagged with their origin anchor."""

    pairs: tuple[tuple[int, int, int], ...]  # (first start, second start, origin)
    side: str = "P"


@dataclass(frozen=True)
class MaxPairResult:
    value: int
    p_witness: Optional[int]
    q_witness: Optional[int]
    first_lcp: int = 0
    second_lcp: int = 0


def _member_ranks(t: CompactTrie):
    """Preorder ranks of member nodes and adjacent LCPs (LCA depths)."""
    rank: dict[int, int] = {}
    h: list[int] = []
    low = 0
    stack = [0]
    while stack:
        u = stack.pop()
        p = t.parent[u]
        if p >= 0 and t.depth[p] < low:
            low = t.depth[p]
        if u in t.members:
            h.append(low if rank else 0)
            rank[u] = len(rank)
            low = t.depth[u]
        stack.extend(reversed(t.children[u]))
    return rank, h


def max_pair_lcp(t: CompactTrie, P: FamilyPairs, Q: FamilyPairs) -> MaxPairResult:
    """max over p in P, q in Q of |LCP(p1, q1)| + |LCP(p2, q2)|.

    Bottom-up over the trie of first components, merging smaller ordered sets
    into larger ones; each inserted element probes its neighbours in the other
    family's set, ordered by the rank of the second component.
    """
    if not P.pairs or not Q.pairs:
        return MaxPairResult(0, None, None)
    rank, h = _member_ranks(t)
    node_of = t.node_of
    rank_node = [0] * len(rank)
    for u, r in rank.items():
        rank_node[r] = u
    rmq = BlockRMQ(h)
    depth = t.depth

    query = rmq.query

    def lcp2(ra: int, rb: int) -> int:
        if ra == rb:
            return depth[rank_node[ra]]
        if ra > rb:
            ra, rb = rb, ra
        if rb - ra <= 16:
            return min(h[ra + 1:rb + 1])
        return query(ra + 1, rb)

    # elements: (second rank, origin); grouped by the node of the first component
    own: dict[int, tuple[list, list]] = {}
    for fam, src in ((0, P.pairs), (1, Q.pairs)):
        for first, second, origin in src:
            own.setdefault(node_of[first], ([], []))[fam].append((rank[node_of[second]], origin))

    best = [-1, 0, 0, 0, 0]  # value, p1, p2, first lcp, second lcp
    n_elems = len(P.pairs) + len(Q.pairs)

    def consider(d: int, fam: int, key, other) -> None:
        m = len(other)
        if not m:
            return
        k0 = key[0]
        probe = (k0, -1)
        i = bisect_left(other, probe) if type(other) is list else other.bisect_left(probe)
        for j in (i - 1, i):
            if 0 <= j < m:
                o = other[j]
                val = d + lcp2(k0, o[0])
                if val < best[0]:
                    continue
                p1, p2 = (key[1], o[1]) if fam == 0 else (o[1], key[1])
                if val > best[0] or (p1, p2) < (best[1], best[2]):
                    best[:] = [val, p1, p2, d, val - d]

    def grow(base, fam: int, keys) -> None:
        cur = base[fam]
        if type(cur) is list:
            if len(cur) + len(keys) <= _SMALL_SET:
                for key in keys:
                    insort(cur, key)
                return
            cur = base[fam] = SortedList(cur)
        cur.update(keys)

    with charged(t.words() + rmq.words() + len(rank_node) + 2 * n_elems):
        sets: dict[int, list] = {}
        order = t.preorder()
        for u in reversed(order):
            groups = [sets.pop(c) for c in t.children[u] if c in sets]
            mine = own.pop(u, None)
            if not groups and mine is None:
                continue
            if groups:
                groups.sort(key=lambda g: len(g[0]) + len(g[1]), reverse=True)
                base = groups[0]
            else:
                base = [[], []]
            d = depth[u]
            for g in groups[1:]:
                for fam in (0, 1):
                    for key in g[fam]:
                        consider(d, fam, key, base[1 - fam])
                for fam in (0, 1):
                    if g[fam]:
                        grow(base, fam, list(g[fam]))
            if mine is not None:
                for fam in (0, 1):
                    for key in mine[fam]:
                        consider(d, fam, key, base[1 - fam])
                        grow(base, fam, (key,))
            sets[u] = base
    if best[0] < 0:
        return MaxPairResult(0, None, None)
    return MaxPairResult(best[0], best[1], best[2], best[3], best[4])


# ---------------------------------------------------------------------------
# arbitrary string families (tests and baselines)


class TextList:
    """Virtual string ``t1 #1 t2 #2 ... tk #k`` with pairwise distinct terminators.

    Offers the subset of the :class:`VirtualConcat` interface used by the
    trie builders, so families of arbitrary strings can be fed to
    :func:`max_pair_lcp`.  Text i (0-based) starts at ``self.first[i]``.
    """

    def __init__(self, texts: Sequence[Sequence[int]]) -> None:
        flat = array("I")
        self.first: list[int] = []
        self.segments = []
        bound = 1 + max((max(t, default=0) for t in texts), default=0)
        g = 1
        for i, t in enumerate(texts):
            lo = len(flat)
            flat.extend(t)
            self.first.append(g)
            self.segments.append((g, len(t), Span(flat, lo, lo + len(t)), False, bound + i))
            g += len(t) + 1
        self.length = g - 1
        self.flat = flat

    def __len__(self) -> int:
        return self.length

    def locate(self, g: int):
        if g == self.length + 1:
            return None, False, 0, 0, None
        for first, ln, span, rev, term in self.segments:
            if first <= g <= first + ln:
                off = g - first
                if off == ln:
                    return None, False, 0, 0, term
                return span, rev, off, ln - off, term
        raise IndexError(g)

    def char_at(self, g: int) -> int:
        span, _, off, rem, term = self.locate(g)
        return term if rem == 0 else span.base[span.lo + off]

    def trimmed_length(self, g: int) -> int:
        return self.locate(g)[3]


def families_from_strings(P: Sequence[tuple], Q: Sequence[tuple]):
    """Trimmed trie and families for explicit pairs of strings.

    Origins are the 1-based indices of the pairs within ``P`` and ``Q``.
    """
    texts = [x for pair in P for x in pair] + [x for pair in Q for x in pair]
    v = TextList([list(t) for t in texts])
    f = v.first
    pp = tuple((f[2 * i], f[2 * i + 1], i + 1) for i in range(len(P)))
    k = 2 * len(P)
    qq = tuple((f[k + 2 * i], f[k + 2 * i + 1], i + 1) for i in range(len(Q)))
    t = build_trimmed_trie(v, [g for g in f])
    return t, FamilyPairs(pp, "P"), FamilyPairs(qq, "Q")


def brute_max_pair_lcp(P: Sequence[tuple], Q: Sequence[tuple]) -> int:
    """O(|P||Q|) reference by direct comparison."""

    def lcp(a, b) -> int:
        k = 0
        while k < len(a) and k < len(b) and a[k] == b[k]:
            k += 1
        return k

    best = 0
    for p1, p2 in P:
        for q1, q2 in Q:
            best = max(best, lcp(p1, q1) + lcp(p2, q2))
    return best
