"""Integer solutions of x_1^d + x_3^d + ... = x_2^d + x_4^d + ..., 1 <= d <= n."""
from __future__ import annotations

import itertools
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, asdict

from .errors import PreconditionError

DEFAULT_BUDGET = 5 * 10 ** 7


@dataclass(frozen=True)
class SolutionCount:
    n: int
    r: int
    X: int
    total: int
    diagonal: int
    offdiagonal: int

    def to_dict(self) -> dict:
        return asdict(self)


def power_vector(xs, n: int) -> tuple:
    return tuple(sum(x ** d for x in xs) for d in range(1, n + 1))


def _check(n, r, X, budget):
    if n < 1 or r < 1 or X < 1:
        raise ValueError("need n, r, X >= 1")
    cost = r * X ** r
    if cost > budget:
        raise PreconditionError(f"estimated cost r*X^r = {cost} exceeds budget {budget}", "budget")


def diagonal_count(r: int, X: int) -> int:
    """Ordered pairs of r-tuples over [1, X] with equal multisets.

    A multiset with multiplicities m_1, m_2, ... is hit by r!/prod m_i! ordered
    tuples on each side, so the count is the sum of squares of multinomials.
    """
    total = 0
    for ms in itertools.combinations_with_replacement(range(1, X + 1), r):
        mult = math.factorial(r)
        for m in Counter(ms).values():
            mult //= math.factorial(m)
        total += mult * mult
    return total


def count_solutions(n: int, r: int, X: int, budget: int = DEFAULT_BUDGET) -> SolutionCount:
    """Meet in the middle: group ordered r-tuples by their power-sum vector."""
    _check(n, r, X, budget)
    buckets: Counter = Counter()
    for xs in itertools.product(range(1, X + 1), repeat=r):
        buckets[power_vector(xs, n)] += 1
    total = sum(v * v for v in buckets.values())
    diag = diagonal_count(r, X)
    return SolutionCount(n, r, X, total, diag, total - diag)


def count_naive(n: int, r: int, X: int) -> SolutionCount:
    """Direct O(X^{2r}) enumeration; the oracle for tiny instances."""
    total = diag = 0
    for xs in itertools.product(range(1, X + 1), repeat=2 * r):
        odd, even = xs[0::2], xs[1::2]
        if power_vector(odd, n) == power_vector(even, n):
            total += 1
            if sorted(odd) == sorted(even):
                diag += 1
    return SolutionCount(n, r, X, total, diag, total - diag)


def find_pte(n: int, X: int, r: int | None = None, distinct: bool = True,
             budget: int = DEFAULT_BUDGET):
    """Lexicographically first off-diagonal solution as (sorted left, sorted right).

    Each side is a sorted r-tuple, the smaller one on the left.  With
    ``distinct`` (the default) entries within a side are pairwise distinct;
    without it, repeated entries such as (1,4,4 ; 2,2,5) qualify.  Returns
    None when no solution exists up to X.
    """
    r = n + 1 if r is None else r
    _check(n, r, X, budget)
    groups = defaultdict(list)
    pick = itertools.combinations if distinct else itertools.combinations_with_replacement
    for ms in pick(range(1, X + 1), r):
        groups[power_vector(ms, n)].append(ms)
    best = None
    for members in groups.values():
        if len(members) > 1:
            cand = tuple(sorted(members)[:2])
            if best is None or cand < best:
                best = cand
    return best


def offdiag_growth(n: int, r: int, xs, budget: int = DEFAULT_BUDGET) -> dict:
    """Off-diagonal counts per X and the log-log slope over rows with a solution."""
    if r <= n:
        raise PreconditionError("r must exceed n; otherwise only diagonal solutions exist", "growth")
    rows = [count_solutions(n, r, X, budget) for X in xs]
    pts = [(math.log(c.X), math.log(c.offdiagonal)) for c in rows if c.offdiagonal > 0]
    slope = None
    if len(pts) >= 2:
        mx = sum(p[0] for p in pts) / len(pts)
        my = sum(p[1] for p in pts) / len(pts)
        slope = sum((x - mx) * (y - my) for x, y in pts) / sum((x - mx) ** 2 for x, _ in pts)
    counts = [c.offdiagonal for c in rows]
    return {
        "rows": [c.to_dict() for c in rows],
        "slope": slope,
        "monotone": all(a <= b for a, b in zip(counts, counts[1:])),
        "pass": slope is None or slope >= 1.7,
    }
