"""Top-level LCS with a working-space budget of about s machine words."""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from .docstore import DocPair, SpaceAccountant, accounting, charged
from .lcas import EMPTY, Witness
from .lcs_ell import EllParams, lcs_ell_base, lcs_ell_const_space, lcs_ell_tradeoff, log_star

log = logging.getLogger(__name__)

_DRIVER_FRAME = 8


class InvariantError(RuntimeError):
    """A guarantee the driver relies on was observed to fail."""


@dataclass(frozen=True)
class DriverConfig:
    s: Optional[int] = None  # None means s = n
    mode: str = "rand"
    seed: int = 0
    force_const_space: bool = False


@dataclass
class Iteration:
    ell: int
    solver: str
    length: int
    seconds: float
    peak_words: int


@dataclass
class LCSResult:
    witness: Witness
    route: str
    iterations: list[Iteration] = field(default_factory=list)
    peak_words: int = 0

    @property
    def length(self) -> int:
        return self.witness.length

    @property
    def start1(self) -> int:
        return self.witness.start1

    @property
    def start2(self) -> int:
        return self.witness.start2


def _run(acc: SpaceAccountant, res: LCSResult, ell: int, name: str,
         fn: Callable[[], Witness]) -> Witness:
    acc.reset()
    t0 = time.perf_counter()
    w = fn()
    dt = time.perf_counter() - t0
    res.iterations.append(Iteration(ell, name, w.length, dt, acc.peak_words))
    res.peak_words = max(res.peak_words, acc.peak_words)
    log.debug("ell=%d solver=%s length=%d time=%.4fs peak=%d", ell, name, w.length, dt, acc.peak_words)
    return w


def _halving(pair: DocPair, acc: SpaceAccountant, res: LCSResult, ell: int, upper: int,
             solve: Callable[[int], Witness], name: str) -> Witness:
    """Thresholds ell, ceil(ell/2), ... until the answer reaches the threshold.

    ``upper`` is a strict upper bound on lcs with upper <= 2*ell, so the first
    threshold with a long enough answer lies in the exactness window.
    """
    limit = math.ceil(math.log2(max(2, pair.n))) + 1
    while True:
        if 2 * ell < upper:
            raise InvariantError(f"threshold {ell} too small for bound {upper}")
        w = _run(acc, res, ell, name, lambda e=ell: solve(e))
        if not w.validate(pair):
            raise InvariantError(f"invalid witness {w}")
        if w.length >= ell:
            if w.length >= upper:
                raise InvariantError(f"length {w.length} exceeds known bound {upper}")
            return w
        if ell == 1:
            if w.length != 0:
                raise InvariantError("ell=1 returned a non-empty answer below the threshold")
            return w
        upper = ell
        ell = (ell + 1) // 2
        if len(res.iterations) > limit:
            raise InvariantError("threshold loop ran too long")


def lcs_const_space(pair: DocPair) -> LCSResult:
    """Exact LCS using O(1) words of working space."""
    res = LCSResult(EMPTY, "const")
    if pair.n1 == 0 or pair.n2 == 0:
        return res
    with accounting() as acc, charged(_DRIVER_FRAME):
        M = min(pair.n1, pair.n2)
        res.witness = _halving(pair, acc, res, M // 2 + 1, M + 1,
                               lambda e: lcs_ell_const_space(pair, e), "const")
    return res


def lcs(pair: DocPair, cfg: DriverConfig = DriverConfig()) -> LCSResult:
    """Exact LCS using about ``cfg.s`` words of working space."""
    n = pair.n
    s = cfg.s if cfg.s is not None else n
    if not 1 <= s <= max(1, n):
        raise ValueError(f"space budget s={s} outside [1, {n}]")
    if cfg.mode not in ("rand", "det"):
        raise ValueError("mode must be 'rand' or 'det'")
    if pair.n1 == 0 or pair.n2 == 0:
        return LCSResult(EMPTY, "empty")
    if cfg.force_const_space or s <= math.log2(max(2, n)):
        return lcs_const_space(pair)
    res = LCSResult(EMPTY, "tradeoff")
    M = min(pair.n1, pair.n2)
    if cfg.mode == "rand":
        ell0 = max(5, -(-n // s))
    else:
        ell0 = max(5, -(-n * max(1, log_star(n)) // s))
    with accounting() as acc, charged(_DRIVER_FRAME):
        upper = M + 1
        if ell0 <= M:
            params = EllParams(ell0, cfg.mode, cfg.seed, s)
            w = _run(acc, res, ell0, "base", lambda: lcs_ell_base(pair, params, switch=False))
            if not w.validate(pair):
                raise InvariantError(f"invalid witness {w}")
            if w.length >= ell0:
                res.witness = w  # exact: every common substring of length >= ell0 is anchored
                return res
            upper = ell0
        ell = (upper + 1) // 2 if upper > 1 else 1

        def solve(e: int) -> Witness:
            return lcs_ell_tradeoff(pair, EllParams(e, cfg.mode, cfg.seed, s))

        res.witness = _halving(pair, acc, res, ell, upper, solve, "tradeoff")
    return res
