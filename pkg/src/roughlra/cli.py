"""Command-line entry point: ``roughlra {reduce,bench,verify,synth}``.

Exit codes: 0 success, 1 failed verification or bench assertion,
2 usage error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import asdict
from pathlib import Path

from .data import load_csv, synth, write_csv
from .granulation import NeighborhoodConfig
from .harness import BenchSpec, _parse_duplicates, run_bench
from .oracle import OracleBudget, audit_reducts, random_system, verify_slr, verify_sr
from .reduction import reduce
from .state import CLASSIC, NEIGHBORHOOD, VARIANTS

EXIT_FAIL = 1


def _cfg(args):
    return NeighborhoodConfig(args.delta) if args.mode == NEIGHBORHOOD else None


def cmd_reduce(args, parser) -> int:
    if not Path(args.data).is_file():
        parser.error(f"data file not found: {args.data}")
    if not Path(args.schema).is_file():
        parser.error(f"schema file not found: {args.schema}")
    system = load_csv(args.data, args.schema)
    report = reduce(system, args.mode, args.variant, _cfg(args), workers=args.workers,
                    meta={"dataset": args.data})
    print(report.to_json(indent=2))
    return 0


def cmd_bench(args, parser) -> int:
    if not Path(args.spec).is_file():
        parser.error(f"bench spec not found: {args.spec}")
    spec = BenchSpec.read(args.spec)
    report = run_bench(spec, data_dir=args.data_dir, workers=args.workers)
    paths = report.write(args.out)
    for line in report.wide():
        cells = [f"{line['dataset']}", f"delta={line['delta']}", f"|POS|={line['final_pos_size']}"]
        cells += [f"{v}={line[f'{v}_time']:.3f}s/{line[f'{v}_samples_touched']}"
                  for v in spec.variants if f"{v}_time" in line]
        print("  ".join(cells))
    for err in report.errors:
        print(f"error: {err['dataset']}: {err['error']}", file=sys.stderr)
    for v in report.violations:
        print(f"VIOLATION: {v}", file=sys.stderr)
    print(f"wrote {paths[0]} and {paths[1]}")
    return 0 if report.ok else EXIT_FAIL


def cmd_verify(args, parser) -> int:
    modes = [CLASSIC, NEIGHBORHOOD] if args.mode == "both" else [args.mode]
    suites = ["sr", "slr", "audit"] if args.suite == "all" else [args.suite]
    budget = OracleBudget()
    results, failed = [], 0
    for suite in suites:
        for mode in modes:
            cfg = NeighborhoodConfig(args.delta) if mode == NEIGHBORHOOD else None
            start = time.perf_counter()
            stats: dict = {}
            if suite == "sr":
                found = [asdict(c) for c in verify_sr(args.seed, args.trials, budget, mode, cfg, stats)]
            elif suite == "slr":
                found = [asdict(c) for c in verify_slr(args.seed, args.trials, budget, mode, cfg, stats)]
            else:
                import numpy as np
                rng = np.random.default_rng(args.seed)
                found = []
                for t in range(args.trials):
                    rec = audit_reducts(random_system(rng, budget), cfg, mode, budget)
                    if not rec.ok or rec.pos_full != rec.final_pos["plain"]:
                        found.append({"trial": t, "kind": "audit", "detail": rec.to_dict()})
                stats = {"trials": args.trials}
            elapsed = time.perf_counter() - start
            failed += len(found)
            results.append({"suite": suite, "mode": mode, "seed": args.seed, "trials": args.trials,
                            "counterexamples": found, "stats": stats, "seconds": elapsed})
            print(f"{suite} [{mode}] seed={args.seed} trials={args.trials}: "
                  f"{len(found)} counterexamples ({elapsed:.1f}s)", file=sys.stderr if args.json else sys.stdout)
    if args.json:
        print(json.dumps(results, indent=2))
    return 0 if failed == 0 else EXIT_FAIL


def cmd_synth(args, parser) -> int:
    try:
        dup = _parse_duplicates(args.duplicate or "")
    except ValueError:
        parser.error("--duplicate expects b:a pairs, e.g. 3:0,4:1")
    system = synth(args.seed, args.n, args.numeric, args.categorical, dup, args.classes)
    schema_out = args.schema_out or str(Path(args.out).with_suffix(".schema"))
    write_csv(system, args.out, schema_out)
    print(f"wrote {args.out} ({system.n_samples} x {system.n_attributes}) and {schema_out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="roughlra", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def mode_flags(p, default=CLASSIC, choices=(CLASSIC, NEIGHBORHOOD)):
        p.add_argument("--mode", choices=choices, default=default)
        p.add_argument("--delta", type=float, default=0.16, help="neighborhood radius")

    p = sub.add_parser("reduce", help="reduce one dataset with one variant, print the JSON report")
    p.add_argument("--data", required=True)
    p.add_argument("--schema", required=True)
    p.add_argument("--variant", choices=VARIANTS, default="lra")
    p.add_argument("--workers", type=int, default=None)
    mode_flags(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("bench", help="run a bench spec file")
    p.add_argument("spec")
    p.add_argument("--out", default="bench_out")
    p.add_argument("--data-dir", default=None, help="directory holding <dataset>.csv files")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="run the oracle suites")
    p.add_argument("--suite", choices=["sr", "slr", "audit", "all"], default="all")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--json", action="store_true", help="print results as JSON on stdout")
    mode_flags(p, default="both", choices=(CLASSIC, NEIGHBORHOOD, "both"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("synth", help="write a synthetic dataset and its schema")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--numeric", type=int, default=10)
    p.add_argument("--categorical", type=int, default=0)
    p.add_argument("--duplicate", default="", help="b:a pairs making column b a copy of a")
    p.add_argument("--classes", type=int, default=2)
    p.add_argument("--out", required=True)
    p.add_argument("--schema-out", default=None)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args, parser)


if __name__ == "__main__":
    sys.exit(main())
