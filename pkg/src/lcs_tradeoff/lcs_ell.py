"""LCS_ell solvers: anchor-based base solver, constant-space grid solver, tradeoff.

Every solver returns a common substring G such that |G| >= |T| for every
common substring T with ell <= |T| <= 2*ell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .docstore import DocPair, charged
from .kernel import find_raw, lcp_bwd, lcp_fwd
from .lcas import EMPTY, AnchorSets, Witness, better, solve_lcas
from .partitioning import nonperiodic_anchors
from .runs import RunParams, iter_runs_raw, periodic_anchors, run_anchor_offsets

Inner = Callable[[DocPair, int], Witness]

_CONST_FRAME = 32  # words held by one constant-space inner call
_REDUCE_FRAME = 8
_RECENT = 4  # cached maximal matches (3 words each, inside the frame)


def log_star(x: float) -> int:
    c = 0
    while x > 1:
        x = math.log2(x)
        c += 1
    return c


@dataclass(frozen=True)
class EllParams:
    ell: int
    mode: str = "rand"
    seed: int = 0
    s: Optional[int] = None

    def __post_init__(self) -> None:
        if self.ell < 1:
            raise ValueError("ell must be >= 1")
        if self.mode not in ("rand", "det"):
            raise ValueError("mode must be 'rand' or 'det'")
        if self.s is not None and self.s < 1:
            raise ValueError("space budget s must be >= 1")


# ---------------------------------------------------------------------------
# small ell


def small_ell(pair: DocPair, ell: int) -> Witness:
    """Exact answer below 2*ell, any length-2*ell match otherwise; O(1) space."""
    A, B = pair.a, pair.b
    x, y = A.base, B.base
    top = min(2 * ell, len(A), len(B))
    for k in range(top, 0, -1):
        for i in range(A.lo, A.hi - k + 1):
            for pos in find_raw(x, i, i + k, y, B.lo, B.hi):
                return Witness(k, i - A.lo + 1, pos - B.lo + 1)
    return EMPTY


# ---------------------------------------------------------------------------
# constant space


def _const_inner(pair: DocPair, ell: int) -> Witness:
    """Grid anchors plus run anchors of the two pieces, evaluated one pair at a time."""
    if ell < 5:
        return small_ell(pair, ell)
    A, B = pair.a, pair.b
    x, y = A.base, B.base
    alo, ahi, blo, bhi = A.lo, A.hi, B.lo, B.hi
    rho = ell // 5
    d = 3 * rho
    best_v, b1, b2 = 0, 0, 0  # b1, b2: absolute 0-based starts

    # the last few maximal matches (diagonal, start, end in x): an anchor inside
    # one of them extends to exactly that match
    recent = [(0, 0, 0)] * _RECENT
    slot = 0

    def extend(i: int, j: int) -> None:
        nonlocal best_v, b1, b2, slot
        diag = i - j
        for dg, lo, hi in recent:
            if dg == diag and lo <= i < hi:
                return
        right = lcp_fwd(x, i, y, j, min(ahi - i, bhi - j))
        left = lcp_bwd(x, i, y, j, min(i - alo, j - blo))
        recent[slot] = (diag, i - left, i + right)
        slot = (slot + 1) % _RECENT
        if left + right > best_v:
            best_v, b1, b2 = left + right, i - left, j - left

    with charged(_CONST_FRAME):
        for i1, j1, p1 in iter_runs_raw(x, alo, ahi, d, rho):
            anchors1 = run_anchor_offsets(x, i1, j1, p1)
            for i2, j2, p2 in iter_runs_raw(y, blo, bhi, d, rho):
                anchors2 = run_anchor_offsets(y, i2, j2, p2)
                # only runs sharing period and Lyndon root can carry a common periodic window
                if p1 != p2 or lcp_fwd(x, anchors1[1], y, anchors2[1], p1) < p1:
                    continue
                for u in anchors1:
                    for w in anchors2:
                        if u < ahi and w < bhi:
                            extend(u, w)
        cap = (bhi - blo) // (rho + 1) + 1
        width = 3 * rho
        s = alo + rho - 1
        while s + width <= ahi:
            count = 0
            for pos in find_raw(x, s, s + width, y, blo, bhi):
                count += 1
                if count > cap:
                    break  # the window has period <= rho; the run anchors cover it
                extend(s, pos)
            s += rho
    if not best_v:
        return EMPTY
    return Witness(best_v, b1 - alo + 1, b2 - blo + 1)


def self_reduce(pair: DocPair, ell: int, m: int, inner: Inner,
                trace: Optional[list] = None) -> Witness:
    """Run ``inner`` on every pair of length-3m pieces starting at 1 (mod m).

    Pieces shorter than ``ell`` and pieces fully covered by their predecessor
    are skipped; neither can hold an occurrence of length in [ell, 2*ell] that
    no other piece holds.
    """
    if m < ell:
        raise ValueError("piece length m must be >= ell")
    n1, n2 = pair.n1, pair.n2
    best = EMPTY
    with charged(_REDUCE_FRAME):
        for q1 in range(1, n1 + 1, m):
            if q1 > 1 and q1 + 2 * m - 1 >= n1:
                break
            e1 = min(q1 + 3 * m - 1, n1)
            if e1 - q1 + 1 < ell:
                break
            for q2 in range(1, n2 + 1, m):
                if q2 > 1 and q2 + 2 * m - 1 >= n2:
                    break
                e2 = min(q2 + 3 * m - 1, n2)
                if e2 - q2 + 1 < ell:
                    break
                w = inner(pair.piece(q1, e1, q2, e2), ell).shifted(q1 - 1, q2 - 1)
                if better(w, best):
                    best = w
                    if trace is not None:
                        trace.append((q1, q2, w))
    return best


def lcs_ell_const_space(pair: DocPair, ell: int) -> Witness:
    """LCS_ell in O(1) words: grid self-reduction with m = ell."""
    if pair.n1 == 0 or pair.n2 == 0:
        return EMPTY
    if ell < 1:
        raise ValueError("ell must be >= 1")
    if ell < 5:
        return small_ell(pair, ell)
    return self_reduce(pair, ell, ell, _const_inner)


# ---------------------------------------------------------------------------
# anchor-based


def base_anchors(pair: DocPair, params: EllParams) -> AnchorSets:
    ell = params.ell
    rho = ell // 5
    non = nonperiodic_anchors(pair, ell, params.mode, params.seed)
    if len(non.a1) == pair.n1 and len(non.a2) == pair.n2:
        return non  # every position already; run anchors add nothing
    with charged(non.words()):
        per = periodic_anchors(pair, RunParams(3 * rho, rho))
        with charged(per.words()):
            return non.union(per)


def lcs_ell_base(pair: DocPair, params: EllParams, switch: bool = True) -> Witness:
    """Anchor-based LCS_ell; exact whenever lcs >= ell.

    With ``switch`` set, ell >= n/log2(n) and ell < 5 go to the constant-space
    path (which only honours the LCS_ell contract).
    """
    if pair.n1 == 0 or pair.n2 == 0:
        return EMPTY
    ell = params.ell
    n = pair.n
    if ell < 5:
        return lcs_ell_const_space(pair, ell)
    if switch and n >= 2 and ell * math.log2(n) >= n:
        return lcs_ell_const_space(pair, ell)
    anchors = base_anchors(pair, params)
    return solve_lcas(pair, anchors, "trie")


def piece_length(ell: int, s: int, mode: str, n: int) -> int:
    if mode == "rand":
        return ell * s
    return ell * s // max(1, log_star(n))


def lcs_ell_tradeoff(pair: DocPair, params: EllParams) -> Witness:
    """LCS_ell in O(s) words via pieces of length about ell*s."""
    if pair.n1 == 0 or pair.n2 == 0:
        return EMPTY
    n = pair.n
    s = params.s if params.s is not None else n
    if s < max(2, log_star(n)):
        return lcs_ell_const_space(pair, params.ell)
    m = max(params.ell, piece_length(params.ell, s, params.mode, n))
    if m >= max(pair.n1, pair.n2):
        return lcs_ell_base(pair, params)
    return self_reduce(pair, params.ell, m, lambda piece, ell: lcs_ell_base(piece, params))
