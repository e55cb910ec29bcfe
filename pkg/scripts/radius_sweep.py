"""Reduct size, positive region and lra work across neighborhood radii."""
import argparse

from roughlra.data import synth
from roughlra.granulation import NeighborhoodConfig
from roughlra.reduction import reduce


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--deltas", type=float, nargs="+", default=[0.04, 0.08, 0.16, 0.32, 0.5, 0.8])
    args = ap.parse_args()
    s = synth(7, args.n, 30, 0, {26: 0, 27: 1, 28: 2, 29: 3})

    print(f"{'delta':>6}{'|red|':>7}{'|POS|':>7}{'redundant':>11}{'plain touched':>15}{'lra touched':>13}")
    for d in args.deltas:
        cfg = NeighborhoodConfig(d)
        p = reduce(s, "neighborhood", "plain", cfg)
        f = reduce(s, "neighborhood", "lra", cfg)
        assert f.final_pos_size == p.final_pos_size
        print(f"{d:>6}{len(f.reduct):>7}{f.final_pos_size:>7}{len(f.redundant):>11}"
              f"{p.counters.samples_touched:>15}{f.counters.samples_touched:>13}")


if __name__ == "__main__":
    main()
