from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, strategies as st

from lcs_tradeoff.docstore import VirtualConcat, accounting, make_pair
from lcs_tradeoff.families import (
    BlockRMQ, TextList, brute_max_pair_lcp, build_sparse_suffix_trie, build_trimmed_trie,
    families_from_strings, max_pair_lcp, sort_suffixes, trim_at_sentinels,
)


def lcp(a, b) -> int:
    k = 0
    while k < len(a) and k < len(b) and a[k] == b[k]:
        k += 1
    return k


def literal(v):
    return [v.char_at(i) for i in range(1, len(v) + 1)]


def leaf_strings(t):
    return {g: t.spell(t.node_of[g]) for g in t.node_of}


def check_trie(t, strings):
    """Structure invariants plus: LCA depth equals LCP of member strings."""
    for u in range(1, t.size):
        p = t.parent[u]
        assert t.depth[p] < t.depth[u]
        if u not in t.members:
            assert len(t.children[u]) >= 2
    spelled = leaf_strings(t)
    for g, s in strings.items():
        assert spelled[g] == list(s)
    gs = sorted(strings)
    for a, b in itertools.combinations(gs[:40], 2):
        u = t.lca(t.node_of[a], t.node_of[b])
        assert t.depth[u] == lcp(strings[a], strings[b])


def test_abab_example():
    # a virtual string spelling "abab$..." is S1 = "abab"
    v = VirtualConcat(make_pair(b"abab", b"c"))
    t = build_sparse_suffix_trie(v, [1, 3])
    root = t.children[0]
    assert len(root) == 1
    mid = root[0]
    assert t.depth[mid] == 2 and t.spell(mid) == list(b"ab")
    assert len(t.children[mid]) == 2
    assert t.depth[t.lca(t.node_of[1], t.node_of[3])] == 2


def test_single_start():
    v = VirtualConcat(make_pair(b"abc", b"d"))
    t = build_sparse_suffix_trie(v, [2, 2])
    assert t.size == 2 and t.children[0] == [1]


def naive_suffix_tree(strings):
    """Node set of the compact trie: all branching prefixes plus leaves."""
    prefixes = set()
    for s in strings:
        for k in range(len(s) + 1):
            prefixes.add(tuple(s[:k]))
    nodes = {()}
    for p in prefixes:
        ext = {q[len(p)] for q in prefixes if len(q) == len(p) + 1 and q[:len(p)] == p}
        if len(ext) >= 2 or p in {tuple(s) for s in strings}:
            nodes.add(p)
    return nodes


def test_full_suffix_tree_length9():
    rng = random.Random(2)
    for _ in range(30):
        x = bytes(rng.choice(b"ab") for _ in range(9))
        v = VirtualConcat(make_pair(x, b"c"))
        lit = literal(v)
        t = build_sparse_suffix_trie(v, range(1, 10))
        got = {tuple(t.spell(u)) for u in range(t.size)}
        assert got == naive_suffix_tree([lit[g - 1:] for g in range(1, 10)])


@given(st.binary(max_size=12), st.binary(min_size=1, max_size=12), st.data())
def test_sparse_trie_invariants(x, y, data):
    x, y = bytes(c % 3 for c in x), bytes(c % 3 for c in y)
    v = VirtualConcat(make_pair(x, y))
    lit = literal(v)
    starts = data.draw(st.sets(st.integers(1, len(v) + 1), min_size=1))
    t = build_sparse_suffix_trie(v, starts)
    check_trie(t, {g: lit[g - 1:] for g in starts})
    assert t.size <= 2 * len(starts)


def trimmed(lit, g, sentinels):
    s = lit[g - 1:]
    for k, c in enumerate(s):
        if c in sentinels:
            return s[:k]
    return s


@given(st.binary(max_size=12), st.binary(min_size=1, max_size=12), st.data())
def test_trim_invariants(x, y, data):
    x, y = bytes(c % 3 for c in x), bytes(c % 3 for c in y)
    v = VirtualConcat(make_pair(x, y))
    lit = literal(v)
    starts = data.draw(st.sets(st.integers(1, len(v) + 1), min_size=1))
    for t in (trim_at_sentinels(build_sparse_suffix_trie(v, starts)), build_trimmed_trie(v, starts)):
        want = {g: trimmed(lit, g, set(v.sentinels)) for g in starts}
        spelled = leaf_strings(t)
        assert all(spelled[g] == want[g] for g in starts)
        distinct = len({tuple(s) for s in want.values()})
        assert t.size <= 2 * distinct
        for a, b in itertools.combinations(sorted(starts)[:30], 2):
            u = t.lca(t.node_of[a], t.node_of[b])
            assert t.depth[u] == lcp(want[a], want[b])


def test_trim_examples():
    # "ab$..." becomes "ab"; two "a$" members collapse; a sentinel start is empty
    v = VirtualConcat(make_pair(b"ab", b"a"))
    n1 = 2
    t = build_trimmed_trie(v, [1, 2 * n1 + 3, n1 + 1])
    assert t.spell(t.node_of[1]) == list(b"ab")
    assert t.depth[t.node_of[n1 + 1]] == 0 and t.node_of[n1 + 1] == 0
    v = VirtualConcat(make_pair(b"a", b"a"))
    t = build_trimmed_trie(v, [1, 5])  # S1 = "a$..", S2 = "a$.."
    assert t.node_of[1] == t.node_of[5]
    assert sorted(t.members[t.node_of[1]]) == [1, 5]


def test_dump_is_deterministic():
    v = VirtualConcat(make_pair(b"banana", b"ananas"))
    a = build_trimmed_trie(v, range(1, 20)).dump()
    b = build_trimmed_trie(v, reversed(range(1, 20))).dump()
    assert a == b and a.splitlines()[0].startswith("node depth=0")


def test_sort_suffixes_matches_literal():
    rng = random.Random(8)
    for _ in range(200):
        x = bytes(rng.choice(b"ab") for _ in range(rng.randint(0, 30)))
        y = bytes(rng.choice(b"ab") for _ in range(rng.randint(1, 30)))
        v = VirtualConcat(make_pair(x, y))
        lit = literal(v) + [-1]  # end of string sorts lowest
        starts = list(range(1, len(v) + 2))
        order, lcps = sort_suffixes(v, starts)
        assert order == sorted(starts, key=lambda g: lit[g - 1:])


def test_block_rmq():
    rng = random.Random(1)
    vals = [rng.randrange(100) for _ in range(500)]
    r = BlockRMQ(vals)
    for _ in range(2000):
        a = rng.randrange(500)
        b = rng.randrange(a, 500)
        assert r.query(a, b) == min(vals[a:b + 1])


@pytest.mark.parametrize("P,Q,exp", [
    ([(b"ab", b"cd")], [(b"abc", b"c")], 3),
    ([(b"a", b"a")], [(b"a", b"a")], 2),
    ([(b"a", b"b")], [(b"b", b"a")], 0),
])
def test_max_pair_examples(P, Q, exp):
    t, pp, qq = families_from_strings(P, Q)
    r = max_pair_lcp(t, pp, qq)
    assert r.value == exp
    assert r.first_lcp + r.second_lcp == r.value


def witness_value(P, Q, r):
    p, q = P[r.p_witness - 1], Q[r.q_witness - 1]
    return lcp(p[0], q[0]) + lcp(p[1], q[1])


pair_strings = st.tuples(st.binary(max_size=8), st.binary(max_size=8)).map(
    lambda t: (bytes(c % 2 for c in t[0]), bytes(c % 2 for c in t[1])))


@given(st.lists(pair_strings, min_size=1, max_size=32), st.lists(pair_strings, min_size=1, max_size=32))
def test_max_pair_vs_brute(P, Q):
    t, pp, qq = families_from_strings(P, Q)
    r = max_pair_lcp(t, pp, qq)
    assert r.value == brute_max_pair_lcp(P, Q)
    assert witness_value(P, Q, r) == r.value


def test_max_pair_exhaustive_tiny():
    words = [bytes(w) for n in range(0, 5) for w in itertools.product(b"ab", repeat=n)]
    rng = random.Random(0)
    pairs = [(a, b) for a in words for b in words]
    for p in pairs[::7]:
        for q in pairs[::11]:
            t, pp, qq = families_from_strings([p], [q])
            assert max_pair_lcp(t, pp, qq).value == brute_max_pair_lcp([p], [q])
    for _ in range(300):
        P = rng.sample(pairs, rng.randint(1, 6))
        Q = rng.sample(pairs, rng.randint(1, 6))
        t, pp, qq = families_from_strings(P, Q)
        assert max_pair_lcp(t, pp, qq).value == brute_max_pair_lcp(P, Q)


def test_max_pair_large_sets_and_space():
    rng = random.Random(4)
    s = lambda: bytes(rng.choice(b"ab") for _ in range(rng.randint(0, 14)))
    P = [(s(), s()) for _ in range(900)]
    Q = [(s(), s()) for _ in range(900)]
    t, pp, qq = families_from_strings(P, Q)
    with accounting() as acc:
        r = max_pair_lcp(t, pp, qq)
    assert r.value == brute_max_pair_lcp(P, Q)
    assert acc.live_words == 0 and acc.peak_words <= 4 * t.words() + 16 * 1800


def test_text_list_layout():
    v = TextList([b"ab", b"", b"c"])
    assert len(v) == 6 and v.first == [1, 4, 5]
    assert v.trimmed_length(1) == 2 and v.trimmed_length(4) == 0
