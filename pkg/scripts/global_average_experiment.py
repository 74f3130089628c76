#!/usr/bin/env python3
"""Rotation-averaging experiments: oscillation ratio vs N, and the 2n-petal count.

First sweep: a fixed symmetric petal flower in R^n averaged over N random
rotations with a common seed stream; the max/min ratio of the average decays
toward 1.  Second sweep: averages of m randomly rotated unit petals for
m = n, 2n, 4n (the 2n count already gives an isomorphic ball).  Output: CSV
rows (experiment, n, parameter, seed, ratio).
"""
import argparse

import numpy as np

from flowerlab.bodies import flower_from_petals
from flowerlab.localtheory import ExperimentReport, global_average, kashin_petals
from flowerlab.spherecore import child_seed, sampled_sphere_grid


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--dim", type=int, default=4)
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--out", default="global_average.csv")
    args = ap.parse_args()

    n = args.dim
    grid = sampled_sphere_grid(n, 2048, seed=child_seed(0, 10), symmetric=True)
    x = np.zeros((2, n))
    x[0, 0] = 1.0
    x[1, :] = 0.5
    f = flower_from_petals(np.vstack([x, -x]), grid)

    report = ExperimentReport(("experiment", "n", "parameter", "seed", "ratio"))
    for nrot in (16, 64, 256):
        ratios = []
        for seed in range(args.seeds):
            r = global_average(f, nrot, seed)
            report.add("rotation-average", n, nrot, seed, repr(r))
            ratios.append(r)
        print(f"N={nrot:4d}: median oscillation ratio {np.median(ratios):.4f}")

    for m in (n, 2 * n, 4 * n):
        ratios = []
        for seed in range(args.seeds):
            r = kashin_petals(n, seed, num_petals=m, grid=grid)
            report.add("petal-average", n, m, seed, repr(r))
            ratios.append(r)
        print(f"petals={m:3d}: median ratio {np.median(ratios):.4f}")

    report.write_csv(args.out)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
