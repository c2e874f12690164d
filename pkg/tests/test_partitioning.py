from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, strategies as st

from lcs_tradeoff.docstore import accounting, load_documents, make_pair
from lcs_tradeoff.oracle import de_bruijn, fibonacci_word, thue_morse
from lcs_tradeoff.partitioning import (
    PartitioningSet, build_partitioning_deterministic, build_partitioning_randomized,
    choose_tau, delta_deterministic, delta_randomized, nonperiodic_anchors, partitioning_for_pair,
    verify_properties,
)

BUILDERS = {
    "rand": lambda s, tau: build_partitioning_randomized(s, tau, seed=7),
    "det": lambda s, tau: build_partitioning_deterministic(s, tau),
}


def check(s, P):
    rep = verify_properties(s, P)
    assert rep.ok, rep.violations[:3]
    assert len(P) <= 8 * len(s) / P.tau + 1e-9
    assert P.positions == sorted(set(P.positions))
    assert all(1 <= q <= len(s) for q in P.positions)


@pytest.mark.parametrize("mode", ["rand", "det"])
def test_example_shapes(mode):
    b = BUILDERS[mode]
    P = b(b"abcabc", 2)
    check(b"abcabc", P)
    P = b(b"a" * 100, 5)
    check(b"a" * 100, P)
    s = de_bruijn(2, 8)
    P = b(s, 16)
    check(s, P)


def test_verify_examples():
    s = b"abcabc"
    rep = verify_properties(s, PartitioningSet([2], 6, 1, "rand"))
    assert not rep.consistent
    rep = verify_properties(s, PartitioningSet([2, 5], 3, 1, "rand"))
    assert rep.consistent and rep.compact
    rep = verify_properties(b"abcabd", PartitioningSet([], 2, 1, "rand"))
    assert not rep.compact


@pytest.mark.parametrize("mode", ["rand", "det"])
def test_exhaustive_binary(mode):
    for n in range(1, 11):
        for t in itertools.product(b"ab", repeat=n):
            s = bytes(t)
            for tau in (1, 2, 3, 4):
                if tau <= n:
                    check(s, BUILDERS[mode](s, tau))


@pytest.mark.parametrize("mode", ["rand", "det"])
@given(st.integers(2, 40), st.data())
def test_random_inputs(mode, tau, data):
    n = data.draw(st.integers(tau, 1500))
    seed = data.draw(st.integers(0, 2**32))
    rng = random.Random(seed)
    kind = data.draw(st.sampled_from(["uniform", "blocks", "binary"]))
    if kind == "uniform":
        s = bytes(rng.randrange(26) + 97 for _ in range(n))
    elif kind == "binary":
        s = bytes(rng.choice(b"ab") for _ in range(n))
    else:
        out = bytearray()
        while len(out) < n:
            root = bytes(rng.choice(b"abc") for _ in range(rng.randint(1, tau + 2)))
            out += root * rng.randint(1, 20)
        s = bytes(out[:n])
    check(s, BUILDERS[mode](s, tau))


@pytest.mark.parametrize("s", [fibonacci_word(3000), thue_morse(3000), b"ab" * 1500],
                         ids=["fibonacci", "thue-morse", "ab-power"])
@pytest.mark.parametrize("mode", ["rand", "det"])
def test_adversarial(s, mode):
    for tau in (4, 16, 64):
        check(s, BUILDERS[mode](s, tau))


def test_sampled_verification_large():
    rng = random.Random(3)
    s = bytes(rng.choice(b"abcd") for _ in range(20000))
    P = build_partitioning_randomized(s, 32, seed=1)
    rep = verify_properties(s, P)
    assert rep.ok
    pos = P.positions
    k = next(k for k in range(1, len(pos) - 1) if pos[k + 1] - pos[k - 1] > P.tau)
    bad = PartitioningSet(pos[:k] + pos[k + 1:], P.tau, P.delta, P.mode)
    assert not verify_properties(s, bad).compact


def test_determinism_and_seeds():
    rng = random.Random(9)
    s = bytes(rng.choice(b"ab") for _ in range(3000))
    a = build_partitioning_deterministic(s, 8)
    b = build_partitioning_deterministic(s, 8)
    assert a.positions == b.positions
    r1 = build_partitioning_randomized(s, 8, seed=5)
    r2 = build_partitioning_randomized(s, 8, seed=5)
    assert r1.positions == r2.positions


def test_delta_recorded():
    s = thue_morse(500)
    assert build_partitioning_randomized(s, 10, seed=0).delta == delta_randomized(10)
    assert build_partitioning_deterministic(s, 10).delta == delta_deterministic(10, 256)


def test_choose_tau_respects_radius():
    for rho in range(1, 400):
        for mode in ("rand", "det"):
            tau = choose_tau(rho, mode)
            if tau > 1:
                d = delta_randomized(tau) if mode == "rand" else delta_deterministic(tau)
                assert d <= rho


def test_nonperiodic_split_matches_set():
    p = load_documents(bytes(random.Random(2).choice(b"abc") for _ in range(700)),
                       bytes(random.Random(3).choice(b"abc") for _ in range(500)))
    for mode in ("rand", "det"):
        ell = 400 if mode == "det" else 60
        P = partitioning_for_pair(p, ell, mode, seed=1)
        A = nonperiodic_anchors(p, ell, mode, seed=1)
        assert sorted(A.a1 + [q + p.n1 for q in A.a2]) == P.positions
        assert P.delta <= ell // 5
    with pytest.raises(ValueError):
        nonperiodic_anchors(p, 4)


def _anchored(x, y, T, A1, A2) -> bool:
    L = len(T)
    for i in range(len(x) - L + 1):
        if x[i:i + L] != T:
            continue
        for j in range(len(y) - L + 1):
            if y[j:j + L] != T:
                continue
            for a in A1:
                off = a - 1 - i
                if 0 <= off <= L and (j + off + 1) in A2:
                    return True
    return False


def test_example_square_free():
    x, y = b"uuuabcdefgh", b"zzabcdefghq"
    for mode in ("rand", "det"):
        A = nonperiodic_anchors(make_pair(x, y), 5, mode)
        assert _anchored(x, y, b"abcdefgh", set(A.a1), set(A.a2))


@pytest.mark.parametrize("mode", ["rand", "det"])
def test_guarantee_equal_random_500(mode):
    from lcs_tradeoff.runs import RunParams, runs_list
    rng = random.Random(11)
    s = bytes(rng.choice(b"ab") for _ in range(500))
    ell = 20
    A = nonperiodic_anchors(make_pair(s, s), ell, mode)
    A1, A2 = set(A.a1), set(A.a2)
    params = RunParams(3 * (ell // 5), ell // 5)
    seen = set()
    for L in range(ell, 2 * ell + 1):
        for i in range(len(s) - L + 1):
            T = s[i:i + L]
            if T in seen:
                continue
            seen.add(T)
            if runs_list(T, params):
                continue
            assert _anchored(s, s, T, A1, A2)


def test_builder_space_is_bounded():
    rng = random.Random(1)
    s = bytes(rng.choice(b"abcd") for _ in range(1 << 15))
    with accounting() as acc:
        P = build_partitioning_randomized(s, 64, seed=3)
    assert acc.live_words == 0
    assert acc.peak_words <= 2 * len(P) + 64 * 4
