"""Fraction of denominator-uniqueness tuples that fail to vanish as the band width grows."""
import argparse

import numpy as np

from superorth import iw


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--Z", type=int, nargs="+", default=[3, 5])
    ap.add_argument("--r", type=int, default=2)
    ap.add_argument("--N", type=int, default=2025)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    signal = rng.normal(size=args.N) + 1j * rng.normal(size=args.N)
    thr = iw.threshold(args.Z, args.r)
    print(f"threshold 1/(r max(Z)^(2r)) = {thr}")
    for factor in (0.5, 1, 4, 16, 64, 256, 625, 1000):
        eps = thr * factor
        spec = iw.ProjectionSpec(args.N, eps, signal)
        rep = iw.denom_vanishing_test(spec, args.Z, args.r, enforce_threshold=False)
        worst = max((v for _, v in rep.violations), default=0.0)
        print(f"eps = {factor:>6} x threshold  band half-width {float(spec.half_width):7.2f}  "
              f"non-vanishing {len(rep.violations):4d}/{rep.tuples_checked}  worst relative {worst:.3e}")


if __name__ == "__main__":
    main()
