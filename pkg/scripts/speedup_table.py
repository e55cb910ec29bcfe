"""Run a bench spec and print per-dataset speedups over the plain search.

    python3 scripts/speedup_table.py scripts/table1_bench.ini --data-dir data/ --out bench_out
"""
import argparse
import logging

from roughlra.harness import BenchSpec, run_bench


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("spec")
    ap.add_argument("--data-dir", default=None)
    ap.add_argument("--out", default="bench_out")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    spec = BenchSpec.read(args.spec)
    report = run_bench(spec, data_dir=args.data_dir)
    report.write(args.out)
    others = [v for v in spec.variants if v != "plain"]
    print(f"{'dataset':<12}{'delta':>6}{'n':>7}{'|C|':>5}{'plain s':>10}"
          + "".join(f"{v + ' x':>12}" for v in others) + f"{'touched x':>11}")
    for line in report.wide():
        base = line["plain_time"]
        cells = "".join(f"{base / max(line[f'{v}_time'], 1e-9):>12.2f}" for v in others)
        touched = line["plain_samples_touched"] / max(line.get("lra_samples_touched", 1), 1)
        print(f"{line['dataset']:<12}{line['delta']:>6}{line['n_samples']:>7}{line['n_attributes']:>5}"
              f"{base:>10.3f}{cells}{touched:>11.2f}")
    for e in report.errors:
        print("error:", e["dataset"], e["error"])
    for v in report.violations:
        print("VIOLATION:", v)


if __name__ == "__main__":
    main()
