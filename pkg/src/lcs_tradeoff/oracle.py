"""Ground-truth oracles, instance generators and the corpus file format.

Nothing here is space-efficient; these exist to check the real solvers.
"""

from __future__ import annotations

import io
import json
import math
import random
import struct
from array import array
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .docstore import DocPair, make_pair
from .lcas import EMPTY, AnchorSets, Witness, solve_lcas

ORACLE_CAP = 1 << 16
ENUM_CAP = 500


class OracleCapExceeded(ValueError):
    """The instance is too large for the quadratic oracles."""


def _docs(pair: DocPair):
    return pair.a.materialize(), pair.b.materialize()


# ---------------------------------------------------------------------------
# exact LCS, two independent ways


def _sam_lcs(x: Sequence[int], y: Sequence[int]) -> Witness:
    """Suffix automaton of x, then stream y through it."""
    nxt: list[dict] = [{}]
    link = [-1]
    length = [0]
    endpos = [-1]  # end index (0-based, inclusive) of the first occurrence
    last = 0
    for i, c in enumerate(x):
        cur = len(nxt)
        nxt.append({})
        link.append(0)
        length.append(length[last] + 1)
        endpos.append(i)
        p = last
        while p != -1 and c not in nxt[p]:
            nxt[p][c] = cur
            p = link[p]
        if p != -1:
            q = nxt[p][c]
            if length[p] + 1 == length[q]:
                link[cur] = q
            else:
                clone = len(nxt)
                nxt.append(dict(nxt[q]))
                link.append(link[q])
                length.append(length[p] + 1)
                endpos.append(endpos[q])
                while p != -1 and nxt[p].get(c) == q:
                    nxt[p][c] = clone
                    p = link[p]
                link[q] = clone
                link[cur] = clone
        last = cur
    state, cur_len = 0, 0
    best, b1, b2 = 0, 0, 0
    for j, c in enumerate(y):
        while state and c not in nxt[state]:
            state = link[state]
            cur_len = length[state]
        if c in nxt[state]:
            state = nxt[state][c]
            cur_len += 1
        else:
            state, cur_len = 0, 0
        if cur_len > best:
            best = cur_len
            b1 = endpos[state] - cur_len + 2
            b2 = j - cur_len + 2
    return Witness(best, b1, b2) if best else EMPTY


def _dp_lcs(x: Sequence[int], y: Sequence[int]) -> Witness:
    """Row-by-row longest-common-suffix table; canonical (smallest start1, start2)."""
    n1, n2 = len(x), len(y)
    if n1 == 0 or n2 == 0:
        return EMPTY
    yv = np.frombuffer(bytes(y), dtype=np.uint8) if isinstance(y, bytes) else np.asarray(y, dtype=np.int64)
    prev = np.zeros(n2 + 1, dtype=np.int32)
    best, b1, b2 = 0, 1, 1
    for i in range(n1):
        cur = np.zeros(n2 + 1, dtype=np.int32)
        eq = yv == x[i]
        cur[1:] = np.where(eq, prev[:-1] + 1, 0)
        j = int(cur.argmax())
        v = int(cur[j])
        if v > best:
            best, b1, b2 = v, i + 2 - v, j + 1 - v
        prev = cur
    return Witness(best, b1, b2) if best else EMPTY


def oracle_lcs(pair: DocPair, cap: int = ORACLE_CAP) -> Witness:
    """Exact LCS; the smallest start1, then start2, among longest witnesses.

    Runs the suffix automaton and the quadratic table scan and insists they agree.
    """
    if pair.n > cap:
        raise OracleCapExceeded(f"n={pair.n} exceeds the oracle cap {cap}")
    x, y = _docs(pair)
    a = _sam_lcs(x, y)
    b = _dp_lcs(x, y)
    if a.length != b.length or not a.validate(pair) or not b.validate(pair):
        raise AssertionError(f"oracles disagree: automaton {a}, table {b}")
    return b


def oracle_common_substrings(pair: DocPair, lo: int, hi: int,
                             cap: int = ENUM_CAP) -> dict[tuple, tuple[int, int]]:
    """Distinct common substrings with length in [lo, hi].

    Keys are symbol tuples; values give the first start in each document.
    """
    if pair.n > cap:
        raise OracleCapExceeded(f"n={pair.n} exceeds the enumeration cap {cap}")
    x, y = _docs(pair)
    lo = max(lo, 1)
    out: dict[tuple, tuple[int, int]] = {}
    for k in range(lo, min(hi, len(x), len(y)) + 1):
        first2: dict[tuple, int] = {}
        for j in range(len(y) - k, -1, -1):
            first2[tuple(y[j:j + k])] = j + 1
        for i in range(len(x) - k + 1):
            t = tuple(x[i:i + k])
            if t in first2 and t not in out:
                out[t] = (i + 1, first2[t])
    return out


# ---------------------------------------------------------------------------
# difference-cover anchors (non-adaptive comparison baseline)


def difference_cover(m: int) -> list[int]:
    """D in Z_m, |D| <= 2*ceil(sqrt m)+1, whose differences cover all of Z_m."""
    r = max(1, math.isqrt(m - 1) + 1) if m > 1 else 1
    return sorted({i % m for i in range(r)} | {(k * r) % m for k in range(r + 1)})


def difference_cover_anchors(pair: DocPair, ell: int) -> AnchorSets:
    """Positions p with (p-1) mod ell in a difference cover, in both documents.

    Any common substring of length >= ell has a synchronized pair among them.
    """
    d = set(difference_cover(ell))
    a1 = [p for p in range(1, pair.n1 + 1) if (p - 1) % ell in d]
    a2 = [p for p in range(1, pair.n2 + 1) if (p - 1) % ell in d]
    return AnchorSets.of(a1, a2, "cover")


def lcs_ell_difference_cover(pair: DocPair, ell: int) -> Witness:
    if pair.n1 == 0 or pair.n2 == 0:
        return EMPTY
    return solve_lcas(pair, difference_cover_anchors(pair, ell), "trie")


# ---------------------------------------------------------------------------
# generators


@dataclass(frozen=True)
class PlantSpec:
    n1: int
    n2: int
    L: int = 0
    alphabet: int = 4
    seed: int = 0
    periodic_plant: Optional[int] = None

    def check(self) -> None:
        if self.n1 < 0 or self.n2 < 0 or self.n1 + self.n2 == 0:
            raise ValueError("document lengths must be non-negative and not both zero")
        if not 0 <= self.L <= min(self.n1, self.n2):
            raise ValueError(f"planted length {self.L} exceeds min(n1, n2)")
        if not 1 <= self.alphabet <= 1 << 32:
            raise ValueError("alphabet size must be in [1, 2^32]")
        if self.periodic_plant is not None:
            if not 1 <= self.periodic_plant or 2 * self.periodic_plant > self.L:
                raise ValueError("periodic plant needs 1 <= p <= L/2")


@dataclass(frozen=True)
class Planted:
    pair: DocPair
    spec: PlantSpec
    pos1: int  # 1-based start of the plant in each document (0 when L == 0)
    pos2: int


def _letters(alphabet: int) -> list[int]:
    if alphabet <= 26:
        return [ord("a") + i for i in range(alphabet)]
    return list(range(alphabet))


def generate_planted(spec: PlantSpec) -> Planted:
    spec.check()
    rng = random.Random(spec.seed)
    sym = _letters(spec.alphabet)
    pick = (lambda: sym[rng.randrange(len(sym))])
    d1 = [pick() for _ in range(spec.n1)]
    d2 = [pick() for _ in range(spec.n2)]
    pos1 = pos2 = 0
    if spec.L:
        if spec.periodic_plant:
            root = [pick() for _ in range(spec.periodic_plant)]
            if len(sym) > 1:
                while spec.periodic_plant > 1 and len(set(root)) == 1:
                    root = [pick() for _ in range(spec.periodic_plant)]
            plant = [root[i % len(root)] for i in range(spec.L)]
        else:
            plant = [pick() for _ in range(spec.L)]
        pos1 = rng.randrange(spec.n1 - spec.L + 1) + 1
        pos2 = rng.randrange(spec.n2 - spec.L + 1) + 1
        d1[pos1 - 1:pos1 - 1 + spec.L] = plant
        d2[pos2 - 1:pos2 - 1 + spec.L] = plant
    if max(sym) < 256:
        pair = make_pair(bytes(d1), bytes(d2))
    else:
        pair = make_pair(array("I", d1), array("I", d2))
    return Planted(pair, spec, pos1, pos2)


def generate(spec: PlantSpec) -> DocPair:
    """Reproducible pair with a common substring of length >= L planted."""
    return generate_planted(spec).pair


def fibonacci_word(n: int) -> bytes:
    a, b = b"a", b"ab"
    while len(b) < n:
        a, b = b, b + a
    return b[:n]


def thue_morse(n: int) -> bytes:
    return bytes(ord("a") + bin(i).count("1") % 2 for i in range(n))


def de_bruijn(k: int, order: int) -> bytes:
    """Cyclic de Bruijn sequence B(k, order) over 'a'.., as a linear string."""
    a = [0] * (k * order)
    seq: list[int] = []

    def db(t: int, p: int) -> None:
        if t > order:
            if order % p == 0:
                seq.extend(a[1:p + 1])
        else:
            a[t] = a[t - p]
            db(t + 1, p)
            for j in range(a[t - p] + 1, k):
                a[t] = j
                db(t + 1, t)

    db(1, 1)
    return bytes(ord("a") + c for c in seq) if k <= 26 else bytes(seq)


def adversarial_pairs(n: int) -> list[tuple[str, DocPair]]:
    """Highly periodic and low-complexity inputs of total length about n."""
    h = max(1, n // 2)
    fib = fibonacci_word(h + 7)
    tm = thue_morse(h + 5)
    return [
        ("a^n/a^n", make_pair(b"a" * h, b"a" * h)),
        ("a^n/a^(n-3)", make_pair(b"a" * h, b"a" * max(1, h - 3))),
        ("fibonacci", make_pair(fib[:h], fib[7:h + 7])),
        ("thue-morse", make_pair(tm[:h], tm[5:h + 5])),
        ("fib/thue-morse", make_pair(fib[:h], tm[:h])),
    ]


# ---------------------------------------------------------------------------
# corpus files: magic, version, JSON header, raw documents

MAGIC = b"LCSCORP\x00"
VERSION = 1


def _encode_doc(doc) -> tuple[int, bytes]:
    if isinstance(doc, bytes):
        return 8, doc
    arr = array("I", doc)
    if arr.itemsize != 4:
        raise ValueError("platform array('I') is not 32-bit")
    return 32, arr.tobytes() if _LITTLE else _swapped(arr)


def _swapped(arr: array) -> bytes:
    b = array("I", arr)
    b.byteswap()
    return b.tobytes()


_LITTLE = struct.pack("=I", 1) == struct.pack("<I", 1)


def write_corpus(path, instances: Iterable[Planted]) -> int:
    """Write instances to ``path``; returns the count written."""
    buf = io.BytesIO()
    count = 0
    for inst in instances:
        w1, b1 = _encode_doc(inst.pair.a.materialize())
        w2, b2 = _encode_doc(inst.pair.b.materialize())
        width = max(w1, w2)
        if w1 != w2:
            w1, b1 = _encode_doc(array("I", inst.pair.a.materialize()))
            w2, b2 = _encode_doc(array("I", inst.pair.b.materialize()))
        header = json.dumps({
            "spec": asdict(inst.spec), "pos1": inst.pos1, "pos2": inst.pos2,
            "width": width, "len1": len(b1), "len2": len(b2),
        }, sort_keys=True).encode()
        buf.write(struct.pack("<I", len(header)))
        buf.write(header)
        buf.write(b1)
        buf.write(b2)
        count += 1
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<HI", VERSION, count))
        fh.write(buf.getvalue())
    return count


def _decode_doc(raw: bytes, width: int):
    if width == 8:
        return raw
    arr = array("I")
    arr.frombytes(raw)
    if not _LITTLE:
        arr.byteswap()
    return arr


def read_corpus(path) -> list[Planted]:
    data = Path(path).read_bytes()
    if data[:len(MAGIC)] != MAGIC:
        raise ValueError("not a corpus file (bad magic)")
    off = len(MAGIC)
    version, count = struct.unpack_from("<HI", data, off)
    if version != VERSION:
        raise ValueError(f"unsupported corpus version {version}")
    off += 6
    out = []
    for _ in range(count):
        (hl,) = struct.unpack_from("<I", data, off)
        off += 4
        head = json.loads(data[off:off + hl])
        off += hl
        d1 = data[off:off + head["len1"]]
        off += head["len1"]
        d2 = data[off:off + head["len2"]]
        off += head["len2"]
        pair = make_pair(_decode_doc(d1, head["width"]), _decode_doc(d2, head["width"]))
        out.append(Planted(pair, PlantSpec(**head["spec"]), head["pos1"], head["pos2"]))
    if off != len(data):
        raise ValueError("trailing bytes in corpus file")
    return out
