"""(d, rho)-run enumeration and periodic-case anchors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from .docstore import DocPair, Span
from .kernel import lcp_bwd, lcp_fwd, min_rotation_raw, periodic_period_raw


@dataclass(frozen=True)
class RunParams:
    d: int
    rho: int

    def __post_init__(self) -> None:
        if self.rho < 1 or self.d < 1 or self.d < 3 * self.rho - 1:
            raise ValueError(f"invalid run parameters d={self.d} rho={self.rho}")

    @classmethod
    def for_ell(cls, ell: int) -> "RunParams":
        rho = max(1, ell // 5)
        return cls(3 * rho, rho)


@dataclass(frozen=True)
class Run:
    doc: int
    start: int  # 1-based, inclusive
    end: int
    period: int

    def __len__(self) -> int:
        return self.end - self.start + 1


def iter_runs_raw(x, a: int, b: int, d: int, rho: int) -> Iterator[tuple[int, int, int]]:
    """Yield ``(i, j, p)``: each (d, rho)-run of ``x[a:b]`` as ``x[i:j]`` with period p.

    Probes of length 2*rho start every rho positions; a periodic probe is
    extended maximally and every later probe inside the extension is skipped.
    Runs come out in increasing order of their start.
    """
    if d < 3 * rho - 1 or rho < 1:
        raise ValueError("need d >= 3*rho - 1 and rho >= 1")
    length = b - a
    k = 1
    two = 2 * rho
    while (k + 2) * rho - 1 <= length:
        s = a + k * rho - 1
        e = s + two
        p = periodic_period_raw(x, s, e)
        if not p:
            k += 1
            continue
        i = s - lcp_bwd(x, s, x, s + p, s - a)
        j = e + lcp_fwd(x, e, x, e - p, b - e)
        if j - i >= d:
            yield i, j, p
        nk = (j - a + 1) // rho - 1
        k = nk if nk > k else k + 1


def enumerate_runs(doc, params: RunParams, emit: Optional[Callable[[Run], None]] = None,
                   doc_id: int = 1) -> int:
    """Report every (d, rho)-run of ``doc`` to ``emit``; return the count.

    ``doc`` is a Span, bytes, str or array.  Positions are 1-based relative to
    ``doc``.
    """
    if isinstance(doc, Span):
        x, a, b = doc.base, doc.lo, doc.hi
    else:
        if isinstance(doc, str):
            doc = doc.encode("latin-1")
        x, a, b = doc, 0, len(doc)
    count = 0
    for i, j, p in iter_runs_raw(x, a, b, params.d, params.rho):
        count += 1
        if emit is not None:
            emit(Run(doc_id, i - a + 1, j - a, p))
    return count


def runs_list(doc, params: RunParams, doc_id: int = 1) -> list[Run]:
    out: list[Run] = []
    enumerate_runs(doc, params, out.append, doc_id)
    return out


def run_anchor_offsets(x, i: int, j: int, p: int) -> tuple[int, int, int, int]:
    """0-based anchors of the run ``x[i:j]``: both ends and two Lyndon-root starts.

    The right boundary anchor is the last position of the run.
    """
    delta = min_rotation_raw(x, i, i + p)
    return i, i + delta, i + delta + p, j - 1


def _doc_anchors(span: Span, params: RunParams, out: dict[int, str]) -> None:
    x, a, b = span.base, span.lo, span.hi
    for i, j, p in iter_runs_raw(x, a, b, params.d, params.rho):
        b0, l1, l2, b1 = run_anchor_offsets(x, i, j, p)
        out.setdefault(b0 - a + 1, "run-boundary")
        out.setdefault(b1 - a + 1, "run-boundary")
        out.setdefault(l1 - a + 1, "lyndon")
        out.setdefault(l2 - a + 1, "lyndon")


def periodic_anchors(pair: DocPair, params: RunParams):
    """Anchors from the boundaries and Lyndon roots of every (d, rho)-run."""
    from .lcas import AnchorSets

    t1: dict[int, str] = {}
    t2: dict[int, str] = {}
    _doc_anchors(pair.a, params, t1)
    _doc_anchors(pair.b, params, t2)
    return AnchorSets.from_tags(t1, t2)


def brute_force_runs(s, d: int, rho: int) -> set[tuple[int, int, int]]:
    """Reference (d, rho)-runs as 1-based ``(start, end, period)`` triples.

    For each p <= rho, maximal stretches with ``s[t] == s[t+p]`` give the
    maximal fragments with period p; a fragment is kept with its smallest p.
    """
    n = len(s)
    found: dict[tuple[int, int], int] = {}
    for p in range(1, rho + 1):
        t = 0
        while t < n - p:
            if s[t] != s[t + p]:
                t += 1
                continue
            t0 = t
            while t < n - p and s[t] == s[t + p]:
                t += 1
            i, j = t0, t + p
            if j - i >= max(d, 2 * p) and (i, j) not in found:
                found[(i, j)] = p
    return {(i + 1, j, p) for (i, j), p in found.items()}


def definitional_runs(s, d: int, rho: int) -> set[tuple[int, int, int]]:
    """(d, rho)-runs straight from the definition (cubic; tiny inputs only)."""

    def per(u) -> int:
        for q in range(1, len(u) + 1):
            if all(u[k] == u[k + q] for k in range(len(u) - q)):
                return q
        return len(u)

    n = len(s)
    out = set()
    for i in range(n):
        for j in range(i + d, n + 1):
            p = per(s[i:j])
            if p > rho or 2 * p > j - i:
                continue
            if i > 0 and per(s[i - 1:j]) == p:
                continue
            if j < n and per(s[i:j + 1]) == p:
                continue
            out.add((i + 1, j, p))
    return out
