"""Constant-space string primitives.

The ``*_raw`` helpers work on 0-based half-open ranges of any sequence that
supports integer indexing and step-1 slicing (``bytes``, ``array`` or
:class:`~lcs_tradeoff.docstore.Joined`).  Slice comparisons are done in
bounded chunks, so the extra memory never grows with the input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .docstore import DocPair, Joined, Span

_MAX_CHUNK = 256  # symbols; keeps temporary slice copies at a few words
_SHORT = 32  # windows up to this length are tested for periods by direct comparison


# ---------------------------------------------------------------------------
# longest common prefix / suffix by chunked comparison


def lcp_fwd(A, i: int, B, j: int, limit: int) -> int:
    """Largest r <= limit with A[i:i+r] == B[j:j+r]."""
    if limit <= 0 or A[i] != B[j]:
        return 0
    n = 1
    step = 8
    while n < limit:
        s = limit - n if limit - n < step else step
        if A[i + n:i + n + s] == B[j + n:j + n + s]:
            n += s
            if step < _MAX_CHUNK:
                step <<= 1
            continue
        while s > 1:
            h = s >> 1
            if A[i + n:i + n + h] == B[j + n:j + n + h]:
                n += h
                s -= h
            else:
                s = h
        return n
    return n


def lcp_bwd(A, i: int, B, j: int, limit: int) -> int:
    """Largest r <= limit with A[i-r:i] == B[j-r:j]."""
    if limit <= 0 or A[i - 1] != B[j - 1]:
        return 0
    n = 1
    step = 8
    while n < limit:
        s = limit - n if limit - n < step else step
        if A[i - n - s:i - n] == B[j - n - s:j - n]:
            n += s
            if step < _MAX_CHUNK:
                step <<= 1
            continue
        while s > 1:
            h = s >> 1
            if A[i - n - h:i - n] == B[j - n - h:j - n]:
                n += h
                s -= h
            else:
                s = h
        return n
    return n


# ---------------------------------------------------------------------------
# two-way matching


def _max_suffix(x, xo: int, m: int, tilde: bool) -> tuple[int, int]:
    ms, j, k, p = -1, 0, 1, 1
    while j + k < m:
        a = x[xo + j + k]
        b = x[xo + ms + k]
        if (a > b) if tilde else (a < b):
            j += k
            k = 1
            p = j - ms
        elif a == b:
            if k != p:
                k += 1
            else:
                j += p
                k = 1
        else:
            ms = j
            j = ms + 1
            k = p = 1
    return ms, p


def two_way_raw(x, xa: int, xb: int, y, ya: int, yb: int) -> Iterator[int]:
    """Crochemore-Perrin matching; yields absolute 0-based starts in ``y``."""
    m = xb - xa
    n = yb - ya
    if m <= 0:
        raise ValueError("empty pattern")
    if m > n:
        return
    i1, p1 = _max_suffix(x, xa, m, False)
    i2, p2 = _max_suffix(x, xa, m, True)
    if i1 > i2:
        ell, per = i1, p1
    else:
        ell, per = i2, p2
    if per + ell + 1 <= m and lcp_fwd(x, xa, x, xa + per, ell + 1) == ell + 1:
        j = 0
        memory = -1
        while j <= n - m:
            i = max(ell, memory) + 1
            while i < m and x[xa + i] == y[ya + i + j]:
                i += 1
            if i >= m:
                i = ell
                while i > memory and x[xa + i] == y[ya + i + j]:
                    i -= 1
                if i <= memory:
                    yield ya + j
                j += per
                memory = m - per - 1
            else:
                j += i - ell
                memory = -1
    else:
        per = max(ell + 1, m - ell - 1) + 1
        j = 0
        while j <= n - m:
            i = ell + 1
            while i < m and x[xa + i] == y[ya + i + j]:
                i += 1
            if i >= m:
                i = ell
                while i >= 0 and x[xa + i] == y[ya + i + j]:
                    i -= 1
                if i < 0:
                    yield ya + j
                j += per
            else:
                j += i - ell


def _direct(seq, a: int, b: int):
    """Resolve a range to a plain ``(base, lo, hi)`` triple when possible."""
    if isinstance(seq, Joined):
        return seq.locate(a, b) if b > a else None
    return seq, a, b


def find_raw(x, xa: int, xb: int, y, ya: int, yb: int) -> Iterator[int]:
    """Occurrences of ``x[xa:xb]`` in ``y[ya:yb]`` as absolute starts in ``y``.

    Uses ``bytes.find`` on a zero-copy memoryview needle when both sides are
    byte strings, and the pure two-way matcher otherwise.
    """
    if xb - xa > yb - ya:
        return
    if type(x) is bytes and type(y) is bytes:
        needle = memoryview(x)[xa:xb]
        pos = y.find(needle, ya, yb)
        while pos != -1:
            yield pos
            pos = y.find(needle, pos + 1, yb)
        return
    px = _direct(x, xa, xb)
    py = _direct(y, ya, yb)
    if px is not None and py is not None and isinstance(px[0], bytes) and isinstance(py[0], bytes):
        base_y, lo_y, hi_y = py
        needle = memoryview(px[0])[px[1]:px[2]]
        shift = ya - lo_y
        pos = base_y.find(needle, lo_y, hi_y)
        while pos != -1:
            yield pos + shift
            pos = base_y.find(needle, pos + 1, hi_y)
        return
    yield from two_way_raw(x, xa, xb, y, ya, yb)


def first_occurrence_raw(x, xa: int, xb: int, y, ya: int, yb: int) -> int:
    """Absolute start of the first occurrence, or -1."""
    for pos in find_raw(x, xa, xb, y, ya, yb):
        return pos
    return -1


def naive_find(pattern: Sequence[int], text: Sequence[int]) -> list[int]:
    """Reference O(|P||T|) matcher (0-based starts)."""
    m = len(pattern)
    return [i for i in range(len(text) - m + 1) if text[i:i + m] == pattern]


# ---------------------------------------------------------------------------
# periods and rotations


def periodic_period_raw(x, a: int, b: int) -> int:
    """per(x[a:b]) if x[a:b] is periodic (per <= length/2), else 0.

    The first occurrence of the first half inside ``x[a+1:]`` at a shift of at
    most length/2 is the only candidate for the shortest period.
    """
    n = b - a
    if n < 2:
        return 0
    half = n // 2
    if n <= _SHORT:
        for q in range(1, half + 1):
            if x[a:b - q] == x[a + q:b]:
                return q
        return 0
    h = n - half
    pos = first_occurrence_raw(x, a, a + h, x, a + 1, a + half + h)
    if pos < 0:
        return 0
    q = pos - a
    if lcp_fwd(x, a + q, x, a, n - q) == n - q:
        return q
    return 0


def has_period_at_most_raw(x, a: int, b: int, t: int) -> bool:
    """Whether ``x[a:b]`` has some period p <= t."""
    n = b - a
    if t >= n:
        return True
    if t <= 0:
        return False
    k = n - t
    for pos in find_raw(x, a, a + k, x, a + 1, a + t + k):
        q = pos - a
        if lcp_fwd(x, a + q, x, a, n - q) == n - q:
            return True
    return False


def min_rotation_raw(x, a: int, b: int) -> int:
    """0-based start of the lexicographically least rotation (smallest offset)."""
    n = b - a
    i = 0
    ans = 0
    while i < n:
        ans = i
        j = i + 1
        k = i
        while j < 2 * n:
            ck = x[a + (k if k < n else k - n)]
            cj = x[a + (j if j < n else j - n)]
            if ck > cj:
                break
            if ck < cj:
                k = i
            else:
                k += 1
            j += 1
        while i <= k:
            i += j - k
    return ans


# ---------------------------------------------------------------------------
# public, 1-based API


@dataclass(frozen=True)
class PeriodInfo:
    is_periodic: bool
    period: Optional[int] = None


def _resolve(frag):
    """Accept a Span, bytes, str or array and return ``(seq, lo, hi)``."""
    if isinstance(frag, Span):
        return frag.base, frag.lo, frag.hi
    if isinstance(frag, str):
        frag = frag.encode("latin-1")
    return frag, 0, len(frag)


def find_occurrences(pattern, text, limit: Optional[int] = None) -> list[int]:
    """1-based starts of ``pattern`` in ``text`` (relative to ``text``), ascending."""
    x, xa, xb = _resolve(pattern)
    y, ya, yb = _resolve(text)
    if xb <= xa:
        raise ValueError("empty pattern")
    out: list[int] = []
    for pos in find_raw(x, xa, xb, y, ya, yb):
        if limit is not None and len(out) >= limit:
            break
        out.append(pos - ya + 1)
    return out


def shortest_period_if_periodic(frag) -> PeriodInfo:
    x, a, b = _resolve(frag)
    if b <= a:
        raise ValueError("empty fragment")
    p = periodic_period_raw(x, a, b)
    return PeriodInfo(True, p) if p else PeriodInfo(False)


def minimal_rotation_start(frag) -> int:
    x, a, b = _resolve(frag)
    if b <= a:
        raise ValueError("empty fragment")
    return min_rotation_raw(x, a, b) + 1


def extend_match(pair: DocPair, p1: int, p2: int) -> tuple[int, int]:
    """(left, right) extension lengths of the synchronized pair (p1, p2)."""
    A, B = pair.a, pair.b
    if not (1 <= p1 <= len(A) + 1 and 1 <= p2 <= len(B) + 1):
        raise IndexError((p1, p2))
    i = A.lo + p1 - 1
    j = B.lo + p2 - 1
    right = lcp_fwd(A.base, i, B.base, j, min(A.hi - i, B.hi - j))
    left = lcp_bwd(A.base, i, B.base, j, min(p1 - 1, p2 - 1))
    return left, right
