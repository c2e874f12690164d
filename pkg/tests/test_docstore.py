from __future__ import annotations

import os
from array import array

import pytest
from hypothesis import given, strategies as st

from lcs_tradeoff.docstore import (
    DecodeError, FragmentRef, SpaceAccountant, Span, VirtualConcat, accounting, active,
    charged, load_documents, make_pair, peak_working_space,
)


def test_load_basic_and_empty():
    p = load_documents("abc", "xyz")
    assert (p.n1, p.n2, p.n) == (3, 3, 6)
    q = load_documents("", "a")
    assert (q.n1, q.n2, q.n) == (0, 1, 1)
    with pytest.raises(ValueError):
        load_documents("", "")


def test_load_files(tmp_path):
    a, b = tmp_path / "a.bin", tmp_path / "b.bin"
    a.write_bytes(os.urandom(65536))
    b.write_bytes(os.urandom(65536))
    p = load_documents(a, b)
    assert p.n == 131072
    assert p.s1 == a.read_bytes()


def test_load_width32(tmp_path):
    a = tmp_path / "a.txt"
    a.write_text("1 70000 3\n")
    b = tmp_path / "b.txt"
    b.write_text("70000 3")
    p = load_documents(a, b, width=32)
    assert list(p.s1) == [1, 70000, 3] and p.alphabet_bound == 70001
    a.write_text("1 x2 3")
    with pytest.raises(DecodeError) as e:
        load_documents(a, b, width=32)
    assert e.value.position == 3


def test_documents_are_read_only():
    p = load_documents(b"abc", b"abd")
    assert isinstance(p.s1, bytes)
    with pytest.raises(Exception):
        p.a.base[0] = 1  # bytes are immutable


def test_mixed_storage_is_unified():
    p = make_pair(b"ab", array("I", [97, 300]))
    assert type(p.a.base) is type(p.b.base)
    assert p.alphabet_bound == 301


def test_span_addressing():
    s = Span(b"xabcdx", 1, 5)
    assert len(s) == 4 and s.at(1) == ord("a") and s.at(4) == ord("d")
    assert s.sub(2, 3).materialize() == b"bc"
    assert s.sub(3, 2).materialize() == b""
    with pytest.raises(IndexError):
        s.at(5)


def test_fragment_refs():
    p = load_documents("hello", "world")
    assert p.fragment(FragmentRef(1, 2, 4)).materialize() == b"ell"
    assert p.fragment(FragmentRef(2, 1, 3, reversed=True)).materialize() == b"row"
    assert p.fragment(FragmentRef("concat", 5, 6)).materialize() == b"ow"
    assert len(FragmentRef(1, 3, 2)) == 0
    with pytest.raises(ValueError):
        FragmentRef(1, 3, 1)


def test_char_at_examples():
    v = VirtualConcat(load_documents("ab", "c"))
    assert v.char_at(1) == ord("a")
    assert v.char_at(4) == ord("b")
    assert v.char_at(3) == v.sentinels[0]
    with pytest.raises(IndexError):
        v.char_at(len(v) + 1)


def _literal(p):
    s1, s2 = list(p.s1), list(p.s2)
    a, b, c = (p.alphabet_bound + k for k in range(3))
    return s1 + [a] + s1[::-1] + [b] + s2 + [c] + s2[::-1]


@given(st.binary(max_size=40), st.binary(min_size=1, max_size=40))
def test_char_at_matches_literal(x, y):
    p = make_pair(x, y)
    v = VirtualConcat(p)
    lit = _literal(p)
    assert len(v) == len(lit) == 2 * p.n + 3
    assert [v.char_at(i) for i in range(1, len(v) + 1)] == lit
    assert len(set(v.sentinels)) == 3 and min(v.sentinels) >= p.alphabet_bound


def test_char_at_exhaustive_n1000():
    import random
    rng = random.Random(4)
    x = bytes(rng.randrange(256) for _ in range(600))
    y = bytes(rng.randrange(256) for _ in range(400))
    p = make_pair(x, y)
    v = VirtualConcat(p)
    assert [v.char_at(i) for i in range(1, len(v) + 1)] == _literal(p)


def test_accountant_examples():
    acc = SpaceAccountant()
    acc.alloc(100)
    acc.free(100)
    assert peak_working_space(acc) == 100 and acc.live_words == 0
    acc = SpaceAccountant()
    with accounting(acc):
        with charged(50):
            with charged(70):
                assert active().live_words == 120
        assert acc.live_words == 0
    assert acc.peak_words == 120
    acc.reset()
    assert acc.peak_words == 0
    with pytest.raises(ValueError):
        acc.free(1)


def test_charged_without_accountant_is_noop():
    with charged(10):
        pass
    assert active().live_words == 0
