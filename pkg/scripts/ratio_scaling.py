"""How the plain/lra work ratio grows with the number of samples.

    python3 scripts/ratio_scaling.py --sizes 500 1000 2000 4000 8000
"""
import argparse

from roughlra.data import synth
from roughlra.granulation import NeighborhoodConfig
from roughlra.reduction import reduce


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[500, 1000, 2000, 4000])
    ap.add_argument("--delta", type=float, default=0.16)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    cfg = NeighborhoodConfig(args.delta)

    print(f"{'n':>7}{'plain touched':>15}{'lra touched':>13}{'ratio':>8}{'plain s':>9}{'lra s':>8}{'speedup':>9}")
    for n in args.sizes:
        s = synth(args.seed, n, 30, 0, {26: 0, 27: 1, 28: 2, 29: 3})
        p = reduce(s, "neighborhood", "plain", cfg)
        f = reduce(s, "neighborhood", "lra", cfg)
        assert p.reduct == f.reduct
        pt, ft = p.counters.samples_touched, f.counters.samples_touched
        print(f"{n:>7}{pt:>15}{ft:>13}{pt / ft:>8.3f}{p.counters.wall_time:>9.2f}"
              f"{f.counters.wall_time:>8.2f}{p.counters.wall_time / f.counters.wall_time:>9.2f}")


if __name__ == "__main__":
    main()
