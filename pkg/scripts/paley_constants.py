"""Empirical direct and converse constants for Walsh-Paley square functions."""
import argparse
import random

from superorth import dyadic, norms


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--level", type=int, default=7)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    for p in (2, 4, 6):
        direct = converse = 0
        for _ in range(args.count):
            rep = norms.paley_ratio(dyadic.random_step(args.level, rng), p)
            if rep.extra["ratio_direct"] is not None:
                direct = max(direct, rep.extra["ratio_direct"])
                converse = max(converse, rep.extra["ratio_converse"])
        print(f"p={p}: max ||f||^p/||Sf||^p = {float(direct):.4f}   max ||Sf||^p/||f||^p = {float(converse):.4f}")


if __name__ == "__main__":
    main()
