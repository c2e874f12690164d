from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, strategies as st

from lcs_tradeoff.docstore import load_documents, make_pair
from lcs_tradeoff.driver import DriverConfig, lcs, lcs_const_space
from lcs_tradeoff.oracle import PlantSpec, adversarial_pairs, generate, oracle_lcs


def test_examples():
    r = lcs(load_documents("banana", "ananas"), DriverConfig(s=6))
    assert (r.length, r.start1, r.start2) == (5, 2, 1)
    assert r.witness.text(load_documents("banana", "ananas")) == b"anana"
    assert lcs(load_documents("abc", "xyz")).length == 0
    r = lcs(load_documents("abc", "abc"))
    assert (r.length, r.start1, r.start2) == (3, 1, 1)


def test_const_space_examples():
    p = generate(PlantSpec(512, 512, 128, 4, 2))
    assert lcs_const_space(p).length == oracle_lcs(p).length == 128
    assert lcs_const_space(load_documents("abq", "zzb")).length == 1
    assert lcs_const_space(load_documents("abc", "xyz")).length == 0


def test_empty_documents():
    r = lcs(load_documents("", "abc"))
    assert r.length == 0 and r.route == "empty"


def configs(n):
    out = [DriverConfig(s=s, mode=m, seed=3) for s in sorted({1, math.isqrt(n - 1) + 1, n})
           for m in ("rand", "det")]
    return out + [DriverConfig(force_const_space=True)]


@given(st.binary(min_size=1, max_size=64), st.binary(min_size=1, max_size=64), st.integers(1, 26))
def test_oracle_equivalence(x, y, k):
    p = make_pair(bytes(97 + c % k for c in x), bytes(97 + c % k for c in y))
    want = oracle_lcs(p).length
    for cfg in configs(p.n):
        r = lcs(p, cfg)
        assert r.length == want and r.witness.validate(p)


@pytest.mark.parametrize("name,pair", adversarial_pairs(160), ids=lambda v: v if isinstance(v, str) else "")
def test_adversarial(name, pair):
    want = oracle_lcs(pair).length
    for cfg in configs(pair.n):
        assert lcs(pair, cfg).length == want


def test_iteration_bound_and_logging():
    rng = random.Random(1)
    for _ in range(50):
        n1, n2 = rng.randint(20, 300), rng.randint(20, 300)
        p = generate(PlantSpec(n1, n2, rng.randint(0, min(n1, n2) // 3), 2, rng.randrange(99)))
        for s in (1, 8, p.n):
            r = lcs(p, DriverConfig(s=s))
            assert len(r.iterations) <= math.ceil(math.log2(p.n)) + 1
            assert r.peak_words == max(it.peak_words for it in r.iterations)
            ells = [it.ell for it in r.iterations]
            assert all(b < a for a, b in zip(ells[1:], ells[2:]))


def test_first_iteration_threshold():
    p = generate(PlantSpec(1000, 1000, 300, 4, 0))
    r = lcs(p, DriverConfig(s=100))
    # n = n1 + n2 = 2000, so the first threshold is ceil(2000 / 100)
    assert r.iterations[0].ell == 20 and r.iterations[0].solver == "base"
    assert len(r.iterations) == 1 and r.length == 300


def test_invalid_config():
    p = load_documents("abc", "abd")
    with pytest.raises(ValueError):
        lcs(p, DriverConfig(s=0))
    with pytest.raises(ValueError):
        lcs(p, DriverConfig(s=7))
    with pytest.raises(ValueError):
        lcs(p, DriverConfig(mode="quantum"))


def test_tie_breaking_smallest_starts():
    p = load_documents("abxab", "zab")
    r = lcs(p)
    assert (r.length, r.start1, r.start2) == (2, 1, 2)
    assert lcs_const_space(p).start1 == 1


def test_reproducible_per_seed():
    p = generate(PlantSpec(2000, 2000, 50, 4, 4))
    a = lcs(p, DriverConfig(s=40, seed=9))
    b = lcs(p, DriverConfig(s=40, seed=9))
    assert a.witness == b.witness and [i.ell for i in a.iterations] == [i.ell for i in b.iterations]
