"""Off-diagonal solution counts of the Vinogradov system and their log-log growth."""
from superorth import vino

CASES = [(1, 2, [4, 8, 16, 32]), (2, 3, [7, 10, 14, 20, 28]), (3, 4, [12, 14, 16, 18])]


def main():
    for n, r, xs in CASES:
        res = vino.offdiag_growth(n, r, xs)
        counts = ", ".join(f"X={row['X']}: {row['offdiagonal']}" for row in res["rows"])
        print(f"n={n} r={r}  {counts}  slope {res['slope']:.3f}")
    for n in (1, 2, 3):
        print(f"first solution with distinct entries, degree {n}: {vino.find_pte(n, 12)}")


if __name__ == "__main__":
    main()
