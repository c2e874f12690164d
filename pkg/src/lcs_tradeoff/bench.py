"""Benchmark harness: planted instances swept over (n, s, L, seed)."""

from __future__ import annotations

import csv
import itertools
import json
import re
import statistics
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

from .driver import DriverConfig, lcs, lcs_const_space
from .oracle import PlantSpec, generate_planted


@dataclass(frozen=True)
class BenchRow:
    n: int
    s: int
    L_planted: int
    L_found: int
    wall_time: float
    peak_words: int
    iterations: int
    mode: str
    seed: int


COLUMNS = [f.name for f in fields(BenchRow)]


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps({"columns": COLUMNS, "rows": [asdict(r) for r in self.rows],
                           "notes": self.notes}, indent=2)

    def write(self, path) -> None:
        path = Path(path)
        if path.suffix == ".json":
            path.write_text(self.to_json() + "\n")
            return
        with open(path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=COLUMNS)
            w.writeheader()
            for r in self.rows:
                w.writerow(asdict(r))


@dataclass(frozen=True)
class Grid:
    n: tuple[int, ...]
    s: tuple[int, ...]
    L: tuple[int, ...]
    seeds: tuple[int, ...] = (0,)
    mode: str = "rand"
    algo: str = "auto"  # auto or const
    alphabet: int = 4
    repeats: int = 3


def _values(text: str) -> list[int]:
    """``64``, ``16,64,256``, ``2^6..2^10`` (doubling) or ``1..5`` (unit step)."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        m = re.fullmatch(r"(\S+?)\.\.(\S+)", part)
        if m:
            lo, hi = _num(m.group(1)), _num(m.group(2))
            doubling = "^" in part
            v = lo
            while v <= hi:
                out.append(v)
                v = v * 2 if doubling else v + 1
        else:
            out.append(_num(part))
    return out


def _num(tok: str) -> int:
    if "^" in tok:
        b, e = tok.split("^")
        return int(b) ** int(e)
    return int(tok)


def parse_grid(spec: str) -> Grid:
    """Parse ``n=2^14..2^17;s=64;L=2^6..2^12;seeds=0..2;mode=rand``.

    A path to a JSON file with the same keys (lists of integers) also works.
    """
    p = Path(spec)
    if p.suffix == ".json" and p.exists():
        raw = json.loads(p.read_text())
        kw = {k: (tuple(v) if isinstance(v, list) else v) for k, v in raw.items()}
        return Grid(**kw)
    kw: dict = {}
    for item in filter(None, (x.strip() for x in spec.split(";"))):
        if "=" not in item:
            raise ValueError(f"grid item {item!r} is not key=value")
        k, v = (t.strip() for t in item.split("=", 1))
        if k in ("n", "s", "L", "seeds"):
            kw[k] = tuple(_values(v))
        elif k in ("alphabet", "repeats"):
            kw[k] = int(v)
        elif k in ("mode", "algo"):
            kw[k] = v
        else:
            raise ValueError(f"unknown grid key {k!r}")
    missing = {"n", "s", "L"} - kw.keys()
    if missing:
        raise ValueError(f"grid needs {sorted(missing)}")
    g = Grid(**kw)
    if g.mode not in ("rand", "det") or g.algo not in ("auto", "const"):
        raise ValueError("mode must be rand|det and algo auto|const")
    return g


def run_cell(n: int, s: int, L: int, seed: int, grid: Grid) -> Optional[BenchRow]:
    half = n // 2
    spec = PlantSpec(half, n - half, L, grid.alphabet, seed)
    inst = generate_planted(spec)
    cfg = DriverConfig(s=s, mode=grid.mode, seed=seed)
    times = []
    res = None
    for _ in range(max(1, grid.repeats)):
        t0 = time.perf_counter()
        res = lcs_const_space(inst.pair) if grid.algo == "const" else lcs(inst.pair, cfg)
        times.append(time.perf_counter() - t0)
    assert res is not None
    return BenchRow(n, s, L, res.length, statistics.median(times), res.peak_words,
                    len(res.iterations), grid.mode, seed)


def run_grid(grid: Grid, progress=None) -> BenchReport:
    rep = BenchReport()
    for n, s, L, seed in itertools.product(grid.n, grid.s, grid.L, grid.seeds):
        if not 1 <= s <= n:
            rep.notes.append(f"skipped n={n} s={s}: budget outside [1, n]")
            continue
        if L > n // 2:
            rep.notes.append(f"skipped n={n} L={L}: planted length exceeds a document")
            continue
        row = run_cell(n, s, L, seed, grid)
        if row.L_found < L:
            raise AssertionError(f"found {row.L_found} < planted {L} at n={n} s={s} seed={seed}")
        rep.rows.append(row)
        if progress:
            progress(row)
    return rep
