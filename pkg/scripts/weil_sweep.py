"""Worst normalized correlation sums |sum| / sqrt(q) for characters of order 2, 3, 4."""
import argparse
import math

from superorth import zmodn
from superorth.burgess import primes_between


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--qmax", type=int, default=200)
    ap.add_argument("--width", type=int, default=4)
    ap.add_argument("--r", type=int, default=2)
    args = ap.parse_args()

    tuples = list(zmodn.uniqueness_shift_tuples(args.width, args.r))
    print(f"{len(tuples)} uniqueness tuples per modulus; bound (2r-1) = {2 * args.r - 1}")
    for order in (2, 3, 4):
        worst, where = 0.0, None
        for q in primes_between(5, args.qmax):
            if (q - 1) % order:
                continue
            chi = zmodn.DirichletChar.of_order(q, order)
            for t in tuples:
                val = abs(zmodn.quasi_super_check(chi, t)["sum"]) / math.sqrt(q)
                if val > worst:
                    worst, where = val, (q, t)
        print(f"order {order}: max |sum|/sqrt(q) = {worst:.4f} at q={where[0]}, shifts={where[1]}")


if __name__ == "__main__":
    main()
