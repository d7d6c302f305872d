"""Short character sums and the averaging pipeline that bounds them.

Irrational parameters such as L = H q^{-1/(2r)} / 2 are never compared in
floating point: every range test is reduced to an integer inequality between
powers, and the float value of L is kept only for reporting.
"""
from __future__ import annotations

import bisect
import json
import math
import warnings
from collections import Counter
from dataclasses import dataclass, asdict, field
from fractions import Fraction

import numpy as np
from sympy import integer_nthroot, isprime, nextprime, prevprime, primerange

from .errors import PreconditionError
from .zmodn import DirichletChar, matching_partitions


def _floor_root(n: int, k: int) -> int:
    return int(integer_nthroot(n, k)[0])


def _ceil_root(n: int, k: int) -> int:
    root, exact = integer_nthroot(n, k)
    return int(root) if exact else int(root) + 1


@dataclass(frozen=True)
class BurgessParams:
    q: int
    H: int
    r: int
    N: int = 0

    def __post_init__(self):
        q, H, r = self.q, self.H, self.r
        if not isprime(q) or q < 3:
            raise PreconditionError(f"q = {q} is not an odd prime", "params")
        if r < 1:
            raise PreconditionError("r must be positive", "params")
        # 2 q^{1/(2r)} <= H  and  H <= q^{1/2 + 1/(4r)}, as integer power comparisons
        if H ** (2 * r) < 4 ** r * q:
            raise PreconditionError(f"H = {H} below 2 q^(1/2r)", "H-range")
        if H ** (4 * r) > q ** (2 * r + 1):
            raise PreconditionError(f"H = {H} above q^(1/2 + 1/4r)", "H-range")
        if not 0 <= self.N < q:
            raise PreconditionError("N must lie in [0, q)", "params")

    @property
    def L(self) -> float:
        return self.H * self.q ** (-1 / (2 * self.r)) / 2

    @property
    def window(self) -> int:
        """ceil(H / L) = ceil(2 q^{1/(2r)})."""
        return _ceil_root(4 ** self.r * self.q, 2 * self.r)

    @property
    def K(self) -> int:
        """floor(2H / L) = floor(4 q^{1/(2r)})."""
        return _floor_root(16 ** self.r * self.q, 2 * self.r)


def auto_H(q: int) -> int:
    """The sweep default 2 * ceil(q^0.3)."""
    return 2 * math.ceil(q ** 0.3)


def short_sum(chi: DirichletChar, N: int, H: int):
    """sum of chi(x) over N < x <= N + H."""
    return sum(chi(x) for x in range(N + 1, N + H + 1))


def worst_start(chi: DirichletChar, H: int) -> int:
    """Least N in [0, q) maximizing |short_sum(chi, N, H)|, by a sliding window."""
    q = chi.q
    tab = chi.table()
    ext = np.concatenate([tab, tab, tab])[: q + H + 1]
    csum = np.concatenate([[0], np.cumsum(ext)])
    sums = csum[np.arange(q) + H + 1] - csum[np.arange(q) + 1]
    return int(np.argmax(np.abs(sums)))


def build_L(params: BurgessParams) -> list[int]:
    """Primes l not dividing q with L <= l <= 2L."""
    q, H, r = params.q, params.H, params.r
    lo = max(2, int(params.L) - 1)
    hi = int(2 * params.L) + 2
    out = []
    for ell in primerange(lo, hi + 1):
        # L <= ell  <=>  H^{2r} <= (2 ell)^{2r} q ;  ell <= 2L  <=>  ell^{2r} q <= H^{2r}
        if H ** (2 * r) <= (2 * ell) ** (2 * r) * q and ell ** (2 * r) * q <= H ** (2 * r) and q % ell:
            out.append(int(ell))
    if not out:
        warnings.warn(f"no primes in [L, 2L] for q={q}, H={H}, r={r}")
    return out


def primes_between(lo: float, hi: float, q: int = 0) -> list[int]:
    return [int(p) for p in primerange(math.ceil(lo), math.floor(hi) + 1) if not q or q % p]


def redundancy(params: BurgessParams, ells, sharp: bool = False) -> Counter:
    """a(m) counts (l, a) with floor((N - aq)/l) = m; the sharp version counts
    (l, a) whose window (floor((N-aq)/l) - ceil(H/L), floor((N-aq)/l)] contains m."""
    if not ells:
        raise PreconditionError("prime set is empty", "L-empty")
    counts: Counter = Counter()
    w = params.window
    for ell in ells:
        for a in range(ell):
            m = (params.N - a * params.q) // ell
            if sharp:
                for j in range(m - w + 1, m + 1):
                    counts[j] += 1
            else:
                counts[m] += 1
    return counts


def second_moment(counts: Counter) -> int:
    return sum(v * v for v in counts.values())


def overlap_count(ells, B, N: int, q: int, H: int | None = None, r: int | None = None) -> int:
    """Ordered pairs ((l, a), (l', a')) with |(N - aq)/l - (N - a'q)/l'| <= B.

    The hypothesis B L^2 < q is checked exactly when H and r are given
    (B^r H^{2r} < 4^r q^{r+1}); otherwise against the largest prime as a
    proxy for 2L, i.e. B (max l / 2)^2 < q.
    """
    B = Fraction(B)
    if B < 1:
        raise PreconditionError("B must be at least 1", "overlap")
    if H is not None and r is not None:
        if B ** r * H ** (2 * r) >= 4 ** r * q ** (r + 1):
            raise PreconditionError("B L^2 >= q", "overlap")
    elif ells and B * Fraction(max(ells), 2) ** 2 >= q:
        raise PreconditionError("B L^2 >= q", "overlap")
    starts = sorted(Fraction(N - a * q, ell) for ell in ells for a in range(ell))
    total = 0
    for s in starts:
        total += bisect.bisect_right(starts, s + B) - bisect.bisect_left(starts, s - B)
    return total


def _max_partial(chi: DirichletChar, K: int) -> np.ndarray:
    """max_{0 <= k <= K} |sum_{x in (0, k]} chi(m + x)| for every residue m."""
    q = chi.q
    tab = chi.table()
    idx = (np.arange(q)[:, None] + np.arange(1, K + 1)[None, :]) % q
    partial = np.cumsum(tab[idx], axis=1)
    return np.max(np.abs(partial), axis=1) if K else np.zeros(q, dtype=tab.dtype)


def _block_moment(chi: DirichletChar, length: int, r: int):
    tab = chi.table()
    idx = (np.arange(chi.q)[:, None] + np.arange(1, length + 1)[None, :]) % chi.q
    inner = tab[idx].sum(axis=1)
    if chi.exact:
        return sum(int(v) ** (2 * r) for v in inner)
    return float(np.sum(np.abs(inner) ** (2 * r)))


def maximal_sum_norm(chi: DirichletChar, K: int, r: int) -> dict:
    """sum over m mod q of max_{k <= K} |partial sum from m|^{2r}, with two upper bounds.

    ``mr_exact_pow`` feeds the exact block moments into the bisection
    inequality with t chosen so that 2^{t-1} <= K < 2^t; ``mr_bound_pow``
    replaces each block moment by the rigorous shifted-moment bound.
    """
    if K < 1:
        raise ValueError("K must be positive")
    q = chi.q
    mx = _max_partial(chi, K)
    exact = sum(int(v) ** (2 * r) for v in mx) if chi.exact else float(np.sum(mx ** (2 * r)))
    t = K.bit_length()
    if (1 << t) >= q:
        raise PreconditionError("2^t must stay below q", "maximal")
    c_r = max(2 * r - 1, matching_partitions(2 * r))
    mr_exact = Fraction(0)
    mr_bound = 0.0
    for i in range(t + 1):
        length = 1 << (t - i)
        mr_exact += (1 << i) * _block_moment(chi, length, r)
        mr_bound += (1 << i) * c_r * (length ** (2 * r) * math.sqrt(q) + length ** r * q)
    mr_exact *= (t + 1) ** (2 * r - 1)
    mr_bound *= (t + 1) ** (2 * r - 1)
    shape = ((K * q ** (1 / (4 * r)) + K ** 0.5 * q ** (1 / (2 * r))) * math.log(K)) ** (2 * r) if K >= 2 else None
    return {
        "exact_norm_pow": exact,
        "mr_exact_pow": float(mr_exact) if not chi.exact else int(mr_exact),
        "mr_bound_pow": mr_bound,
        "t": t,
        "empirical_constant": exact / shape if shape else None,
        "pass": exact <= mr_exact and exact <= mr_bound,
    }


@dataclass
class ExperimentReport:
    q: int
    H: int
    r: int
    N: int
    L: float
    num_primes: int
    actual: float
    weak_bound: float
    strong_bound: float
    strong_bound_single_log: float
    ratio_weak: float
    ratio_strong: float
    second_moment: int
    second_moment_sharp: int
    overlap: int
    max_norm_pow: float
    chain_rhs: float
    chain_rhs_unit: float
    constants: dict = field(default_factory=dict)
    passed: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def bounds(q: int, H: int, r: int) -> tuple[float, float, float]:
    lq = math.log(q)
    weak = H ** (1 - 1 / r) * q ** ((r + 2) / (4 * r * r)) * lq ** 2
    strong = H ** (1 - 1 / r) * q ** ((r + 1) / (4 * r * r)) * lq ** 2
    return weak, strong, strong / lq


def burgess_bound(params: BurgessParams, chi: DirichletChar | None = None) -> ExperimentReport:
    """Run the whole averaging pipeline and compare with the unit-constant bounds.

    The chain bound is
        2 |P|^{-1} c^{-1} (sum a#^2)^{1 - 1/2r} W^{1/2r} ||max partial||_{2r},
    with c = floor(q^{1/2r}) the least number of integer starts per window and
    W the largest number of support points of a# in a residue class mod q.
    ``chain_rhs_unit`` drops the explicit factors 2, c vs q^{1/2r} and W.
    """
    q, H, r, N = params.q, params.H, params.r, params.N
    chi = chi or DirichletChar.quadratic(q)
    if chi.q != q:
        raise ValueError("modulus mismatch")
    ells = build_L(params)
    if not ells:
        raise PreconditionError(f"no primes in [L, 2L] (L = {params.L:.3f})", "L-empty")
    if params.H ** (2 * r) * 1 >= 4 ** r * q ** (r + 1):
        raise PreconditionError("B L^2 >= q for B = 1", "overlap")
    actual = abs(short_sum(chi, N, H))
    a = redundancy(params, ells)
    a_sharp = redundancy(params, ells, sharp=True)
    m2, m2s = second_moment(a), second_moment(a_sharp)
    overlap = overlap_count(ells, 1, N, q, H, r)
    K = params.K
    mx = _max_partial(chi, K)
    max_pow = float(np.sum(mx.astype(float) ** (2 * r)))
    norm = max_pow ** (1 / (2 * r))
    c_min = _floor_root(q, 2 * r)
    residues = Counter(m % q for m in a_sharp)
    w_fold = max(residues.values())
    chain = 2 / len(ells) / c_min * m2s ** (1 - 1 / (2 * r)) * w_fold ** (1 / (2 * r)) * norm
    chain_unit = 1 / len(ells) * q ** (-1 / (2 * r)) * m2s ** (1 - 1 / (2 * r)) * norm
    weak, strong, strong1 = bounds(q, H, r)
    L = params.L
    constants = {
        "m2_over_L2": m2 / L ** 2,
        "m2_sharp_over_HL": m2s / (H * L),
        "overlap_over_L2": overlap / L ** 2,
        "K": K,
        "window": params.window,
        "fold": w_fold,
    }
    passed = {
        "second_moment": m2 <= 10 * L ** 2,
        "second_moment_sharp": m2s <= 10 * H * L,
        "overlap": overlap <= 50 * L ** 2,
        "chain": actual <= chain * (1 + 1e-12),
        "strong": actual <= strong,
        "mass": sum(a.values()) == sum(ells) and sum(a_sharp.values()) == sum(ells) * params.window,
        "moment_vs_overlap": m2 <= overlap,
    }
    return ExperimentReport(q, H, r, N, L, len(ells), float(actual), weak, strong, strong1,
                            actual / weak, actual / strong, m2, m2s, overlap, max_pow,
                            chain, chain_unit, constants, passed)


def least_nonresidue(q: int) -> int:
    if not isprime(q) or q < 3:
        raise PreconditionError(f"q = {q} is not an odd prime", "params")
    n = 2
    while pow(n, (q - 1) // 2, q) != q - 1:
        n += 1
    return n


def sweep_primes(qmin: int, qmax: int, count: int) -> list[int]:
    """Distinct primes spread geometrically over [qmin, qmax]."""
    if count <= 0 or qmin > qmax:
        return []
    out: list[int] = []
    for i in range(count):
        target = qmin * (qmax / qmin) ** (i / max(count - 1, 1))
        p = int(nextprime(max(int(target) - 1, 2)))
        while p in out:
            p = int(nextprime(p))
        if p > qmax:
            p = int(prevprime(qmax + 1))
            while p in out and p > qmin:
                p = int(prevprime(p))
        if qmin <= p <= qmax and p not in out:
            out.append(p)
    return sorted(out)
