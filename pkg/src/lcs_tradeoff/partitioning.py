"""(tau, delta)-partitioning sets of S1S2 and the non-periodic anchors.

Randomized builder
    Every position j whose window ``S[j-a .. j+b]`` (length w) fits in the
    string gets a key: a Karp-Rabin fingerprint of the window, or infinity if
    the window has a period <= tau//2 ("bad").  A position is selected when it
    is the leftmost minimum of some range of ``tau`` consecutive keys, or when
    the window status flips between good and bad.  A few positions near both
    ends are selected at stride tau.  Gaps longer than tau then consist of bad
    windows only and are periodic, whatever the fingerprints are; the seed only
    affects the size, which is checked (Las Vegas retry).

Deterministic builder
    Starting from all positions, levels double a gap bound T up to tau.  At a
    level an element is removable when its two adjacent gaps together are at
    most T.  Stretches of elements separating equal short gaps are removed
    whole (the merged gap is periodic).  Among the other removable elements
    (which form chains with pairwise distinct adjacent gap contents) a maximal
    independent set is removed, found with Cole-Vishkin colour reduction.
    Each level streams through fixed-size chunks, so the working space is the
    output plus O(log tau) chunk buffers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .docstore import DocPair, Joined, Span, charged
from .kernel import find_raw, lcp_fwd, periodic_period_raw
from .runs import iter_runs_raw

_MERSENNE = (1 << 61) - 1
SIZE_FACTOR = 8  # |P| <= SIZE_FACTOR * n / tau is enforced for the randomized path


@dataclass
class PartitioningSet:
    positions: list[int]  # 1-based, sorted
    tau: int
    delta: int
    mode: str
    seed: Optional[int] = None
    attempts: int = 1

    def __len__(self) -> int:
        return len(self.positions)


def _as_text(S):
    if isinstance(S, Span):
        return Joined((S,)), len(S)
    if isinstance(S, Joined):
        return S, len(S)
    if isinstance(S, str):
        S = S.encode("latin-1")
    return S, len(S)


def _sigma(X, n: int) -> int:
    if isinstance(X, Joined):
        return 1 + max(max(p.base[p.lo:p.hi], default=0) for p in X.parts)
    return 1 + max(X, default=0)


# ---------------------------------------------------------------------------
# randomized


def _rand_geometry(tau: int) -> tuple[int, int, int, int]:
    """(t, w, a, b): bad-period threshold, window length and window extents."""
    t = tau // 2
    w = 3 * t - 1 if t >= 2 else 3
    a = (w - 1) // 2
    return t, w, a, w - 1 - a


def delta_randomized(tau: int) -> int:
    if tau <= 1:
        return 0
    t, w, a, b = _rand_geometry(tau)
    return max(tau - 1 + max(a, b), a + 1)


def _rand_select(X, n: int, tau: int, base: int) -> list[int]:
    """0-based selected positions for one fingerprint base."""
    t, w, a, b = _rand_geometry(tau)
    lo_mid, hi_mid = a, n - 1 - b
    out: list[int] = []
    if hi_mid < lo_mid:
        return list(range(0, n, tau))
    out.extend(range(0, a, tau))
    out.append(a)
    out.extend(range(n - b, n, tau))

    runs = iter_runs_raw(X, 0, n, w, t)
    nxt = next(runs, None)
    cover = -1  # max end (exclusive) over runs started at or before the window start
    top = pow(base, w - 1, _MERSENNE)
    h = 0
    for k in range(w):
        h = (h * base + X[k] + 1) % _MERSENNE
    dq_idx: list[int] = []  # monotone queue as a list with a moving head
    dq_key: list[int] = []
    head = 0
    prev_bad = None
    peak = 0
    r = tau
    for j in range(lo_mid, hi_mid + 1):
        s = j - a
        if j > lo_mid:
            h = ((h - (X[s - 1] + 1) * top) * base + X[s + w - 1] + 1) % _MERSENNE
        while nxt is not None and nxt[0] <= s:
            if nxt[1] > cover:
                cover = nxt[1]
            nxt = next(runs, None)
        bad = cover >= s + w
        if prev_bad is not None and bad != prev_bad:
            out.append(j)
        prev_bad = bad
        if not bad:
            while len(dq_key) > head and dq_key[-1] > h:
                dq_key.pop()
                dq_idx.pop()
            dq_key.append(h)
            dq_idx.append(j)
            if len(dq_key) - head > peak:
                peak = len(dq_key) - head
        if len(dq_idx) > head and dq_idx[head] <= j - r:
            head += 1
        if head > 64 and head * 2 > len(dq_idx):
            del dq_idx[:head], dq_key[:head]
            head = 0
        if j - lo_mid + 1 >= r and len(dq_idx) > head:
            if not out or out[-1] != dq_idx[head]:
                out.append(dq_idx[head])
    with charged(2 * peak):
        pass
    out.sort()
    dedup = [out[0]]
    for p in out[1:]:
        if p != dedup[-1]:
            dedup.append(p)
    return dedup


def _compact_ok(X, n: int, pos: list[int], tau: int) -> bool:
    prev = 0
    for p in pos[1:] + [n]:
        if p - prev > tau:
            per = periodic_period_raw(X, prev, p)
            if not per or per > tau:
                return False
        prev = p
    return True


def build_partitioning_randomized(S, tau: int, seed: int = 0, max_attempts: int = 32) -> PartitioningSet:
    """Las Vegas (tau, delta)-partitioning set with delta = delta_randomized(tau)."""
    X, n = _as_text(S)
    if not 1 <= tau <= max(1, n):
        raise ValueError("need 1 <= tau <= |S|")
    if tau == 1:
        return PartitioningSet(list(range(1, n + 1)), 1, 0, "randomized", seed)
    delta = delta_randomized(tau)
    limit = max(SIZE_FACTOR * n // tau, 1)
    for attempt in range(max_attempts):
        rng = random.Random((seed << 8) ^ attempt)
        base = rng.randrange(256, _MERSENNE - 1)
        pos = _rand_select(X, n, tau, base)
        if len(pos) <= limit and _compact_ok(X, n, pos, tau):
            return PartitioningSet([p + 1 for p in pos], tau, delta, "randomized", seed, attempt + 1)
    raise RuntimeError("partitioning set size check failed on every attempt")


# ---------------------------------------------------------------------------
# deterministic


def _cv_rounds(T: int, sigma: int) -> int:
    m = (T + 1) * (sigma + 1)
    rounds = 1
    while m > 6:
        m = 2 * (m - 1).bit_length()
        rounds += 1
    return rounds


def _levels(tau: int) -> list[tuple[int, int]]:
    out = []
    t = 1
    while t < tau:
        T = min(2 * t, tau)
        out.append((t, T))
        t = T
    return out


_LEFT = 10


def _right_margin(R: int) -> int:
    return R + 12


def delta_deterministic(tau: int, sigma: int = 256) -> int:
    """Consistency radius guaranteed by the deterministic builder."""
    d = 0
    for _, T in _levels(tau):
        R = _cv_rounds(T, sigma)
        d += (_right_margin(R) + 1) * T
    return d


def _decide(X, n: int, buf: list[int], true_start: bool, true_end: bool,
            T: int, R: int, sigma: int) -> list[bool]:
    """Removal flags for every buffered element (reliable away from cut ends)."""
    m = len(buf)
    big = n + 1 + 2 * T
    ln = [0] * m
    for i in range(m - 1):
        ln[i] = buf[i + 1] - buf[i]
    ln[m - 1] = (n - buf[m - 1]) if true_end else big
    first = 0 if true_start else 1  # element 0 of a cut buffer has no known left gap
    rep = [False] * m
    rem = [False] * m
    for i in range(max(1, first), m):
        s = ln[i - 1] + ln[i]
        if s <= T:
            rem[i] = True
            if ln[i - 1] == ln[i]:
                p, q = buf[i - 1], buf[i]
                rep[i] = lcp_fwd(X, p, X, q, ln[i]) == ln[i]
    cand = [False] * m
    for i in range(m):
        if rem[i] and not rep[i] and not (i > 0 and rep[i - 1]) and not (i + 1 < m and rep[i + 1]):
            cand[i] = True
    # Cole-Vishkin colouring of candidate chains
    partner = [-1] * m
    col = [0] * m
    for i in range(m):
        if cand[i]:
            if i + 1 < m and cand[i + 1]:
                partner[i] = i + 1
            elif i > 0 and cand[i - 1]:
                partner[i] = i - 1
    sig1 = sigma + 1
    for i in range(m):
        q = partner[i]
        if q < 0:
            continue
        p0, p1, l0, l1 = buf[i], buf[q], ln[i], ln[q]
        k = lcp_fwd(X, p0, X, p1, min(l0, l1))
        sym = X[p0 + k] + 1 if k < l0 else 0
        col[i] = k * sig1 + sym
    for _ in range(R - 1):
        new = col[:]
        for i in range(m):
            q = partner[i]
            if q >= 0:
                x = col[i]
                z = x ^ col[q]
                k = (z & -z).bit_length() - 1
                new[i] = 2 * k + ((x >> k) & 1)
        col = new
    for c in (5, 4, 3):
        for i in range(m):
            if cand[i] and col[i] == c:
                used = set()
                if i > 0 and cand[i - 1]:
                    used.add(col[i - 1])
                if i + 1 < m and cand[i + 1]:
                    used.add(col[i + 1])
                col[i] = min({0, 1, 2} - used)
    mis = [False] * m
    for c in (0, 1, 2):
        for i in range(m):
            if cand[i] and col[i] == c:
                if not ((i > 0 and mis[i - 1]) or (i + 1 < m and mis[i + 1])):
                    mis[i] = True
    return [rep[i] or mis[i] for i in range(m)]


def _det_level(X, n: int, src: Iterator[int], T: int, sigma: int, chunk: int) -> Iterator[int]:
    R = _cv_rounds(T, sigma)
    right = _right_margin(R)
    acc_words = chunk + _LEFT + right
    with charged(acc_words):
        buf: list[int] = []
        core = 0
        true_start = True
        done = False
        while True:
            while not done and len(buf) < core + chunk + right:
                p = next(src, None)
                if p is None:
                    done = True
                else:
                    buf.append(p)
            if not buf:
                return
            end = len(buf) if done else core + chunk
            flags = _decide(X, n, buf, true_start, done, T, R, sigma)
            for i in range(core, end):
                if not flags[i]:
                    yield buf[i]
            if done:
                return
            cut = end - _LEFT
            buf = buf[cut:]
            core = _LEFT
            true_start = False


def build_partitioning_deterministic(S, tau: int, sigma: Optional[int] = None,
                                     chunk: int = 256) -> PartitioningSet:
    """Deterministic (tau, delta)-partitioning set, delta = delta_deterministic(tau, sigma)."""
    X, n = _as_text(S)
    if not 1 <= tau <= max(1, n):
        raise ValueError("need 1 <= tau <= |S|")
    if sigma is None:
        sigma = _sigma(X, n)
    stream: Iterator[int] = iter(range(n))
    for _, T in _levels(tau):
        stream = _det_level(X, n, stream, T, sigma, chunk)
    pos = [p + 1 for p in stream]
    return PartitioningSet(pos, tau, delta_deterministic(tau, sigma), "deterministic")


# ---------------------------------------------------------------------------
# verification


@dataclass
class VerifyReport:
    consistent: bool
    compact: bool
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.consistent and self.compact


def verify_properties(S, P: PartitioningSet, exhaustive_limit: int = 2000,
                      samples: int = 400, seed: int = 0) -> VerifyReport:
    """Check local consistency and compactness of ``P`` on ``S`` by definition."""
    X, n = _as_text(S)
    if isinstance(X, Joined):
        X = X[0:n]
    tau, delta = P.tau, P.delta
    members = set(P.positions)
    violations: list[str] = []
    compact = True
    bounds = sorted(members | {1, n + 1})
    for p, q in zip(bounds, bounds[1:]):
        if q - p > tau:
            per = periodic_period_raw(X, p - 1, q - 1)
            if not per or per > tau:
                compact = False
                violations.append(f"gap {p}..{q - 1} of length {q - p} is not periodic with period <= {tau}")
    consistent = True
    lo, hi = 1 + delta, n - delta
    if lo <= hi:
        if n <= exhaustive_limit:
            seen: dict = {}
            for i in range(lo, hi + 1):
                key = bytes(X[i - 1 - delta:i + delta]) if isinstance(X[0:1], bytes) else tuple(X[i - 1 - delta:i + delta])
                inside = i in members
                if key in seen and seen[key][0] != inside:
                    consistent = False
                    violations.append(f"positions {seen[key][1]} and {i} share a window but differ")
                seen.setdefault(key, (inside, i))
        else:
            rng = random.Random(seed)
            for _ in range(samples):
                i = rng.randint(lo, hi)
                inside = i in members
                a = i - 1 - delta
                for occ in find_raw(X, a, a + 2 * delta + 1, X, 0, n):
                    j = occ + delta + 1
                    if lo <= j <= hi and (j in members) != inside:
                        consistent = False
                        violations.append(f"positions {i} and {j} share a window but differ")
                        break
                if not consistent:
                    break
    return VerifyReport(consistent, compact, violations)


# ---------------------------------------------------------------------------
# anchors


def choose_tau(rho: int, mode: str, sigma: int = 256) -> int:
    """Largest tau whose consistency radius fits in rho (1 means all positions)."""
    delta_of = delta_randomized if mode.startswith("rand") else (lambda t: delta_deterministic(t, sigma))
    tau = 1
    while delta_of(tau + 1) <= rho:
        tau += 1
    return tau


def partitioning_for_pair(pair: DocPair, ell: int, mode: str = "rand", seed: int = 0) -> PartitioningSet:
    rho = ell // 5
    X = pair.joined()
    n = pair.n
    tau = min(choose_tau(rho, mode, pair.alphabet_bound), max(1, n))
    if tau <= 1:
        return PartitioningSet(list(range(1, n + 1)), 1, 0, mode)
    if mode.startswith("rand"):
        return build_partitioning_randomized(X, tau, seed)
    return build_partitioning_deterministic(X, tau, pair.alphabet_bound)


def nonperiodic_anchors(pair: DocPair, ell: int, mode: str = "rand", seed: int = 0):
    """Split a partitioning set of S1S2 (with delta <= ell//5) into anchors."""
    from .lcas import AnchorSets

    if ell < 5:
        raise ValueError("non-periodic anchors need ell >= 5")
    P = partitioning_for_pair(pair, ell, mode, seed)
    n1 = pair.n1
    with charged(len(P)):
        a1 = [p for p in P.positions if p <= n1]
        a2 = [p - n1 for p in P.positions if p > n1]
        return AnchorSets.of(a1, a2, "partitioning")
