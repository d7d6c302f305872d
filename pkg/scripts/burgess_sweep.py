"""Short character sums against the unit-constant Burgess bounds over a prime sweep."""
import argparse

from superorth import burgess
from superorth.errors import PreconditionError
from superorth.zmodn import DirichletChar


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--qmin", type=int, default=1000)
    ap.add_argument("--qmax", type=int, default=100000)
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--r", type=int, nargs="+", default=[2, 3])
    args = ap.parse_args()

    print(f"{'q':>7} {'r':>2} {'H':>4} {'|L|':>4} {'actual':>7} {'strong':>9} {'ratio':>7} {'m2/L^2':>7}")
    for r in args.r:
        below = rows = 0
        for q in burgess.sweep_primes(args.qmin, args.qmax, args.count):
            chi = DirichletChar.quadratic(q)
            H = burgess.auto_H(q)
            try:
                rep = burgess.burgess_bound(burgess.BurgessParams(q, H, r, burgess.worst_start(chi, H)), chi)
            except PreconditionError as exc:
                print(f"{q:>7} {r:>2} skipped {exc}")
                continue
            rows += 1
            below += rep.ratio_strong < 1
            print(f"{q:>7} {r:>2} {H:>4} {rep.num_primes:>4} {rep.actual:>7.0f} {rep.strong_bound:>9.1f} "
                  f"{rep.ratio_strong:>7.4f} {rep.constants['m2_over_L2']:>7.3f}")
        print(f"r={r}: ratio < 1 in {below}/{rows} rows\n")


if __name__ == "__main__":
    main()
