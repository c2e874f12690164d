"""Command-line front end: solve, oracle, gen and bench."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from .docstore import DecodeError, DocPair, load_documents
from .driver import DriverConfig, InvariantError, LCSResult, lcs, lcs_const_space
from .lcas import Witness
from .lcs_ell import EllParams, lcs_ell_base, lcs_ell_const_space, lcs_ell_tradeoff
from .oracle import ORACLE_CAP, OracleCapExceeded, PlantSpec, generate_planted, oracle_lcs

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_ORACLE_CAP = 3
EXIT_INVARIANT = 4

# JSON written by ``solve --json``
SOLVE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["length", "start1", "start2", "n1", "n2", "algo", "mode", "seed", "s",
                 "ell", "route", "peak_words", "iterations", "verified", "oracle_length"],
    "additionalProperties": False,
    "properties": {
        "length": {"type": "integer", "minimum": 0},
        "start1": {"type": "integer", "minimum": 1},
        "start2": {"type": "integer", "minimum": 1},
        "n1": {"type": "integer", "minimum": 0},
        "n2": {"type": "integer", "minimum": 0},
        "algo": {"enum": ["auto", "const", "tradeoff", "base"]},
        "mode": {"enum": ["rand", "det"]},
        "seed": {"type": "integer"},
        "s": {"type": "integer", "minimum": 1},
        "ell": {"type": ["integer", "null"], "minimum": 1},
        "route": {"type": "string"},
        "peak_words": {"type": "integer", "minimum": 0},
        "iterations": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["ell", "solver", "length", "seconds", "peak_words"],
                "additionalProperties": False,
                "properties": {
                    "ell": {"type": "integer", "minimum": 1},
                    "solver": {"type": "string"},
                    "length": {"type": "integer", "minimum": 0},
                    "seconds": {"type": "number", "minimum": 0},
                    "peak_words": {"type": "integer", "minimum": 0},
                },
            },
        },
        "verified": {"type": ["boolean", "null"]},
        "oracle_length": {"type": ["integer", "null"], "minimum": 0},
    },
}


class CliError(Exception):
    def __init__(self, message: str, code: int) -> None:
        super().__init__(message)
        self.code = code


def _load(args) -> DocPair:
    for f in (args.file1, args.file2):
        if not Path(f).is_file():
            raise CliError(f"no such file: {f}", EXIT_USAGE)
    try:
        return load_documents(Path(args.file1), Path(args.file2), width=args.width)
    except (DecodeError, ValueError) as e:
        raise CliError(f"cannot decode input: {e}", EXIT_USAGE) from None


def _solve(pair: DocPair, args, s: int) -> tuple[Witness, Optional[LCSResult]]:
    if args.ell is not None:
        if not 1 <= args.ell <= max(1, pair.n):
            raise CliError(f"--ell {args.ell} outside [1, {pair.n}]", EXIT_USAGE)
        params = EllParams(args.ell, args.mode, args.seed, s)
        if args.algo == "const":
            return lcs_ell_const_space(pair, args.ell), None
        if args.algo == "base":
            return lcs_ell_base(pair, params), None
        return lcs_ell_tradeoff(pair, params), None
    if args.algo == "base":
        raise CliError("--algo base solves the threshold problem and needs --ell", EXIT_USAGE)
    if args.algo == "const":
        res = lcs_const_space(pair)
    else:
        res = lcs(pair, DriverConfig(s=s, mode=args.mode, seed=args.seed))
    return res.witness, res


def cmd_solve(args) -> int:
    pair = _load(args)
    n = pair.n
    s = args.s if args.s is not None else max(1, n)
    if not 1 <= s <= max(1, n):
        raise CliError(f"--s {s} outside [1, {n}]", EXIT_USAGE)
    if args.verify and n > ORACLE_CAP:
        raise CliError(f"--verify: n={n} exceeds the oracle cap {ORACLE_CAP}", EXIT_ORACLE_CAP)
    try:
        w, res = _solve(pair, args, s)
    except InvariantError as e:
        raise CliError(f"internal invariant failed: {e}", EXIT_INVARIANT) from None
    if not w.validate(pair):
        raise CliError(f"witness {w} does not validate", EXIT_INVARIANT)
    verified = None
    oracle_len = None
    if args.verify:
        try:
            o = oracle_lcs(pair)
        except OracleCapExceeded as e:
            raise CliError(f"--verify: {e}", EXIT_ORACLE_CAP) from None
        oracle_len = o.length
        if args.ell is None:
            verified = w.length == o.length
        else:
            ell = args.ell
            verified = (w.length == o.length) if ell <= o.length < 2 * ell else \
                (w.length >= 2 * ell if o.length >= 2 * ell else True)
        if not verified:
            raise CliError(f"oracle disagrees: got {w.length}, oracle {o.length}", EXIT_INVARIANT)
    if args.json:
        out = {
            "length": w.length, "start1": w.start1, "start2": w.start2,
            "n1": pair.n1, "n2": pair.n2, "algo": args.algo, "mode": args.mode,
            "seed": args.seed, "s": s, "ell": args.ell,
            "route": res.route if res else f"ell-{args.algo}",
            "peak_words": res.peak_words if res else 0,
            "iterations": [vars(it) for it in res.iterations] if res else [],
            "verified": verified, "oracle_length": oracle_len,
        }
        print(json.dumps(out))
    else:
        print(f"length={w.length} s1@{w.start1} s2@{w.start2}")
        if verified:
            print(f"verified against oracle (length={oracle_len})")
    return EXIT_OK


def cmd_oracle(args) -> int:
    pair = _load(args)
    try:
        w = oracle_lcs(pair)
    except OracleCapExceeded as e:
        raise CliError(str(e), EXIT_ORACLE_CAP) from None
    print(f"length={w.length} s1@{w.start1} s2@{w.start2}")
    return EXIT_OK


def cmd_gen(args) -> int:
    spec = PlantSpec(args.n1, args.n2, args.L, args.alphabet, args.seed, args.period)
    try:
        inst = generate_planted(spec)
    except ValueError as e:
        raise CliError(str(e), EXIT_USAGE) from None
    docs = (inst.pair.a.materialize(), inst.pair.b.materialize())
    for suffix, doc in zip(("1", "2"), docs):
        path = Path(f"{args.prefix}{suffix}.txt")
        if isinstance(doc, bytes):
            path.write_bytes(doc)
        else:
            path.write_text(" ".join(map(str, doc)) + "\n")
    print(f"planted L={args.L} at s1@{inst.pos1} s2@{inst.pos2}")
    return EXIT_OK


def cmd_bench(args) -> int:
    from .bench import parse_grid, run_grid

    try:
        grid = parse_grid(args.grid)
    except (ValueError, TypeError) as e:
        raise CliError(f"bad --grid: {e}", EXIT_USAGE) from None
    out = Path(args.out)
    if out.suffix not in (".csv", ".json"):
        raise CliError("--out must end in .csv or .json", EXIT_USAGE)

    def progress(row) -> None:
        logging.info("n=%d s=%d L=%d seed=%d found=%d time=%.3fs peak=%d",
                     row.n, row.s, row.L_planted, row.seed, row.L_found, row.wall_time, row.peak_words)

    try:
        rep = run_grid(grid, progress)
    except InvariantError as e:
        raise CliError(f"internal invariant failed: {e}", EXIT_INVARIANT) from None
    rep.write(out)
    for note in rep.notes:
        print(f"note: {note}", file=sys.stderr)
    print(f"wrote {len(rep.rows)} rows to {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lcs-tradeoff",
                                 description="Longest common substring in small working space.")
    ap.add_argument("-v", "--verbose", action="store_true", help="log per-iteration diagnostics")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def files(p) -> None:
        p.add_argument("file1")
        p.add_argument("file2")
        p.add_argument("--width", type=int, choices=(8, 32), default=8,
                       help="8: raw bytes; 32: whitespace-separated integers")

    p = sub.add_parser("solve", help="compute a longest common substring")
    files(p)
    p.add_argument("--s", type=int, default=None, help="working-space budget in words (default n)")
    p.add_argument("--algo", choices=("auto", "const", "tradeoff", "base"), default="auto")
    p.add_argument("--mode", choices=("rand", "det"), default="rand")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ell", type=int, default=None, help="solve the threshold problem at this ell")
    p.add_argument("--json", action="store_true")
    p.add_argument("--verify", action="store_true", help="cross-check with the quadratic oracle")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="exact LCS by the reference oracles")
    files(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="write a planted instance as PREFIX1.txt and PREFIX2.txt")
    p.add_argument("prefix")
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--n2", type=int, required=True)
    p.add_argument("--L", type=int, default=0)
    p.add_argument("--alphabet", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--period", type=int, default=None, help="make the plant periodic")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="time and space sweep over planted instances")
    p.add_argument("--grid", required=True,
                   help="e.g. 'n=2^14..2^16;s=64;L=2^6..2^10;seeds=0..2;mode=rand;algo=auto'")
    p.add_argument("--out", required=True, help="report path (.csv or .json)")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
