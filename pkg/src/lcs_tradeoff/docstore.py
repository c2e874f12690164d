"""Read-only document storage, fragment addressing and working-space accounting.

Documents are held as ``bytes`` (8-bit symbols) or ``array('I')`` (32-bit
integer alphabets).  Solvers never copy a document; sub-instances are
described by :class:`Span` views (base sequence plus a half-open range).
Public positions are 1-based; the ``lo``/``hi`` fields of a span are 0-based
offsets into its base sequence.
"""

from __future__ import annotations

import contextlib
import contextvars
import os
from array import array
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence, Union

Symbols = Union[bytes, array]


class DecodeError(ValueError):
    """Raised when an input cannot be read as a symbol sequence."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} at position {position}")
        self.position = position


# ---------------------------------------------------------------------------
# views


@dataclass(frozen=True)
class Span:
    """A read-only window ``base[lo:hi]`` (0-based, half-open)."""

    base: Symbols
    lo: int
    hi: int

    def __len__(self) -> int:
        return self.hi - self.lo

    def at(self, i: int) -> int:
        """Symbol at 1-based position ``i`` of the window."""
        if not 1 <= i <= self.hi - self.lo:
            raise IndexError(i)
        return self.base[self.lo + i - 1]

    def sub(self, start: int, end: int) -> "Span":
        """Sub-window for the 1-based inclusive range ``start..end``."""
        if not (1 <= start <= end + 1 <= len(self) + 1):
            raise IndexError((start, end))
        return Span(self.base, self.lo + start - 1, self.lo + end)

    def materialize(self) -> Symbols:
        return self.base[self.lo:self.hi]


class Joined:
    """Concatenation of spans addressed 0-based, without copying.

    Supports integer indexing and step-1 slicing (slices return a fresh
    sequence built from the parts, so callers keep slices short).
    """

    __slots__ = ("parts", "starts", "length")

    def __init__(self, parts: Sequence[Span]) -> None:
        self.parts = tuple(p for p in parts if len(p) > 0) or tuple(parts[:1])
        starts = []
        total = 0
        for p in self.parts:
            starts.append(total)
            total += len(p)
        self.starts = tuple(starts)
        self.length = total

    def __len__(self) -> int:
        return self.length

    def _part(self, i: int) -> int:
        k = len(self.starts) - 1
        while self.starts[k] > i:
            k -= 1
        return k

    def __getitem__(self, key):
        if isinstance(key, slice):
            a, b, _ = key.indices(self.length)
            if a >= b:
                return self.parts[0].base[0:0]
            k = self._part(a)
            p = self.parts[k]
            out = p.base[p.lo + a - self.starts[k]:p.lo + min(b - self.starts[k], len(p))]
            while self.starts[k] + len(p) < b:
                k += 1
                p = self.parts[k]
                out = out + p.base[p.lo:p.lo + min(b - self.starts[k], len(p))]
            return out
        if key < 0:
            key += self.length
        if not 0 <= key < self.length:
            raise IndexError(key)
        k = self._part(key)
        p = self.parts[k]
        return p.base[p.lo + key - self.starts[k]]

    def locate(self, a: int, b: int):
        """Return ``(base, lo, hi)`` if ``[a, b)`` lies inside one part, else None."""
        k = self._part(a)
        p = self.parts[k]
        off = a - self.starts[k]
        if b - self.starts[k] <= len(p):
            return p.base, p.lo + off, p.lo + b - self.starts[k]
        return None


# ---------------------------------------------------------------------------
# documents


@dataclass(frozen=True)
class DocPair:
    """Two read-only documents; ``a`` holds S1 and ``b`` holds S2."""

    a: Span
    b: Span
    alphabet_bound: int

    @property
    def n1(self) -> int:
        return len(self.a)

    @property
    def n2(self) -> int:
        return len(self.b)

    @property
    def n(self) -> int:
        return len(self.a) + len(self.b)

    @property
    def s1(self) -> Symbols:
        return self.a.materialize()

    @property
    def s2(self) -> Symbols:
        return self.b.materialize()

    def piece(self, q1: int, e1: int, q2: int, e2: int) -> "DocPair":
        """Sub-instance ``S1[q1..e1]``, ``S2[q2..e2]`` (1-based, inclusive), no copy."""
        return DocPair(self.a.sub(q1, e1), self.b.sub(q2, e2), self.alphabet_bound)

    def joined(self) -> Joined:
        """The string S1S2 as a zero-copy view."""
        return Joined((self.a, self.b))

    def fragment(self, ref: "FragmentRef") -> Span:
        """Resolve a fragment reference to a window (reversed ones are copied)."""
        if ref.doc in (1, "1", "s1"):
            span = self.a
        elif ref.doc in (2, "2", "s2"):
            span = self.b
        elif ref.doc == "concat":
            both = self.a.materialize() + self.b.materialize()
            span = Span(both, 0, len(both))
        else:
            raise ValueError(f"unknown document {ref.doc!r}")
        out = span.sub(ref.start, ref.end)
        if ref.reversed:
            rev = out.materialize()[::-1]
            return Span(rev, 0, len(rev))
        return out


@dataclass(frozen=True)
class FragmentRef:
    """A fragment ``doc[start..end]`` (1-based inclusive; start=end+1 is empty)."""

    doc: Union[int, str]
    start: int
    end: int
    reversed: bool = False

    def __post_init__(self) -> None:
        if self.start < 1 or self.end + 1 < self.start:
            raise ValueError(f"bad fragment bounds {self.start}..{self.end}")

    def __len__(self) -> int:
        return self.end - self.start + 1


def _as_symbols(data) -> Symbols:
    if isinstance(data, bytes):
        return data
    if isinstance(data, (bytearray, memoryview)):
        return bytes(data)
    if isinstance(data, array):
        return array("I", data)
    if isinstance(data, str):
        codes = [ord(c) for c in data]
        if all(c < 256 for c in codes):
            return bytes(codes)
        return array("I", codes)
    codes = list(data)
    for i, c in enumerate(codes):
        if not isinstance(c, int) or c < 0 or c >= 2**32:
            raise DecodeError(f"symbol {c!r} outside the integer alphabet", i + 1)
    if all(c < 256 for c in codes):
        return bytes(codes)
    return array("I", codes)


def parse_int_vector(text: bytes) -> array:
    """Decode whitespace-separated decimal integers (32-bit test vectors)."""
    out = array("I")
    pos = 0
    for tok in text.split():
        pos = text.index(tok, pos)
        try:
            value = int(tok)
        except ValueError:
            raise DecodeError(f"not an integer: {tok[:16]!r}", pos + 1) from None
        if not 0 <= value < 2**32:
            raise DecodeError(f"symbol {value} out of 32-bit range", pos + 1)
        out.append(value)
        pos += len(tok)
    return out


def _read_source(src, width: int) -> Symbols:
    if isinstance(src, (os.PathLike,)):
        raw = Path(src).read_bytes()
        if width == 32:
            return parse_int_vector(raw)
        return raw
    if width == 32 and isinstance(src, (bytes, bytearray)):
        return parse_int_vector(bytes(src))
    return _as_symbols(src)


def make_pair(s1: Symbols, s2: Symbols) -> DocPair:
    """Build a DocPair from two symbol sequences, unifying their storage type."""
    if type(s1) is not type(s2):
        s1, s2 = array("I", list(s1)), array("I", list(s2))
    if len(s1) + len(s2) == 0:
        raise ValueError("both documents are empty")
    bound = 1 + max(max(s1, default=0), max(s2, default=0))
    return DocPair(Span(s1, 0, len(s1)), Span(s2, 0, len(s2)), bound)


def load_documents(source1, source2, width: int = 8) -> DocPair:
    """Load two documents from bytes, text, integer lists or file paths.

    ``pathlib.Path`` (or any ``os.PathLike``) arguments are read from disk;
    ``width=32`` decodes whitespace-separated decimal integers.
    """
    if width not in (8, 32):
        raise ValueError("width must be 8 or 32")
    return make_pair(_read_source(source1, width), _read_source(source2, width))


# ---------------------------------------------------------------------------
# the virtual string S1 $1 S1^r $2 S2 $3 S2^r


class VirtualConcat:
    """Random access into ``S1 $1 S1^r $2 S2 $3 S2^r`` without materializing it.

    Sentinels take the values ``alphabet_bound``, ``+1`` and ``+2``.  Global
    positions are 1-based and range over ``1..2n+3``; position ``2n+4`` is
    accepted by the segment helpers as the empty suffix.
    """

    def __init__(self, pair: DocPair) -> None:
        self.pair = pair
        n1, n2 = pair.n1, pair.n2
        self.n1, self.n2 = n1, n2
        self.length = 2 * (n1 + n2) + 3
        sig = pair.alphabet_bound
        self.sentinels = (sig, sig + 1, sig + 2)
        # (first global position, length, span, reversed, terminator)
        # terminator: value of the symbol right after the segment, None = end.
        self.segments = (
            (1, n1, pair.a, False, sig),
            (n1 + 2, n1, pair.a, True, sig + 1),
            (2 * n1 + 3, n2, pair.b, False, sig + 2),
            (2 * n1 + n2 + 4, n2, pair.b, True, None),
        )
        self.sentinel_pos = (n1 + 1, 2 * n1 + 2, 2 * n1 + n2 + 3)

    def __len__(self) -> int:
        return self.length

    def layout(self) -> dict[str, tuple[int, int]]:
        """Inclusive global index ranges of the seven components."""
        n1, n2 = self.n1, self.n2
        return {
            "S1": (1, n1),
            "$1": (n1 + 1, n1 + 1),
            "S1r": (n1 + 2, 2 * n1 + 1),
            "$2": (2 * n1 + 2, 2 * n1 + 2),
            "S2": (2 * n1 + 3, 2 * n1 + 2 + n2),
            "$3": (2 * n1 + n2 + 3, 2 * n1 + n2 + 3),
            "S2r": (2 * n1 + n2 + 4, self.length),
        }

    def char_at(self, i: int) -> int:
        if not 1 <= i <= self.length:
            raise IndexError(i)
        for k, sp in enumerate(self.sentinel_pos):
            if i == sp:
                return self.sentinels[k]
        for first, ln, span, rev, _ in self.segments:
            if first <= i < first + ln:
                off = i - first
                if rev:
                    return span.base[span.hi - 1 - off]
                return span.base[span.lo + off]
        raise AssertionError("unreachable")

    def locate(self, g: int):
        """Describe the suffix starting at global ``g``.

        Returns ``(span, reversed, offset, remaining, terminator)`` where the
        suffix reads ``remaining`` symbols of its segment (from ``offset``)
        before hitting ``terminator``.  A suffix starting on a sentinel has
        ``remaining == 0`` and that sentinel as terminator.
        """
        for k, sp in enumerate(self.sentinel_pos):
            if g == sp:
                return None, False, 0, 0, self.sentinels[k]
        if g == self.length + 1:
            return None, False, 0, 0, None
        for first, ln, span, rev, term in self.segments:
            if first <= g < first + ln:
                off = g - first
                return span, rev, off, ln - off, term
        raise IndexError(g)

    def trimmed_length(self, g: int) -> int:
        """Length of the suffix at ``g`` cut just before its first sentinel."""
        return self.locate(g)[3]


def segment_slice(span: Span, rev: bool, off: int, length: int) -> Symbols:
    """The ``length`` symbols read forward from segment offset ``off``."""
    if not rev:
        a = span.lo + off
        return span.base[a:a + length]
    b = span.hi - off
    return span.base[b - length:b][::-1]


# ---------------------------------------------------------------------------
# working-space accounting


@dataclass
class SpaceAccountant:
    """Live and peak working-space counters, in machine words."""

    live_words: int = 0
    peak_words: int = 0
    log: list = field(default_factory=list, repr=False)

    def alloc(self, words: int) -> None:
        if words < 0:
            raise ValueError("negative allocation")
        self.live_words += words
        if self.live_words > self.peak_words:
            self.peak_words = self.live_words

    def free(self, words: int) -> None:
        if words < 0 or words > self.live_words:
            raise ValueError(f"free of {words} words with {self.live_words} live")
        self.live_words -= words

    def reset(self) -> None:
        self.peak_words = self.live_words

    @contextlib.contextmanager
    def hold(self, words: int) -> Iterator[None]:
        self.alloc(words)
        try:
            yield
        finally:
            self.free(words)


_ACTIVE: contextvars.ContextVar[SpaceAccountant | None] = contextvars.ContextVar(
    "lcs_tradeoff_accountant", default=None
)
_NULL = SpaceAccountant()


def active() -> SpaceAccountant:
    """The accountant installed for the current region (a scratch one if none)."""
    acc = _ACTIVE.get()
    if acc is None:
        _NULL.live_words = _NULL.peak_words = 0
        return _NULL
    return acc


@contextlib.contextmanager
def accounting(acc: SpaceAccountant | None = None) -> Iterator[SpaceAccountant]:
    """Install ``acc`` (or a fresh accountant) for the enclosed solver calls."""
    acc = acc if acc is not None else SpaceAccountant()
    token = _ACTIVE.set(acc)
    try:
        yield acc
    finally:
        _ACTIVE.reset(token)


@contextlib.contextmanager
def charged(words: int) -> Iterator[None]:
    """Charge ``words`` to the active accountant for the enclosed block."""
    acc = _ACTIVE.get()
    if acc is None:
        yield
        return
    acc.alloc(words)
    try:
        yield
    finally:
        acc.free(words)


def peak_working_space(acc: SpaceAccountant) -> int:
    return acc.peak_words
