"""Characters and exponential sums over Z/qZ and Z/NZ."""
from __future__ import annotations

import cmath
import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import product as cartesian

import numpy as np
from sympy import isprime, primitive_root

from .errors import PreconditionError
from .tuplecheck import has_unique_value


def _e(x: float) -> complex:
    return cmath.exp(2j * math.pi * x)


@dataclass(frozen=True)
class DirichletChar:
    """chi(g^j) = exp(2 pi i k j / (q-1)) for the least primitive root g."""
    q: int
    k: int
    g: int = field(init=False)
    dlog: tuple = field(init=False, repr=False)

    def __post_init__(self):
        if not isprime(self.q) or self.q < 3:
            raise ValueError(f"modulus must be an odd prime, got {self.q}")
        object.__setattr__(self, "k", self.k % (self.q - 1))
        g = int(primitive_root(self.q))
        table = [-1] * self.q
        x = 1
        for j in range(self.q - 1):
            table[x] = j
            x = x * g % self.q
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "dlog", tuple(table))

    @classmethod
    def quadratic(cls, q: int) -> "DirichletChar":
        return cls(q, (q - 1) // 2)

    @classmethod
    def of_order(cls, q: int, order: int) -> "DirichletChar":
        if (q - 1) % order:
            raise ValueError(f"order {order} does not divide q - 1 = {q - 1}")
        return cls(q, (q - 1) // order)

    @property
    def order(self) -> int:
        return (self.q - 1) // math.gcd(self.k, self.q - 1)

    @property
    def principal(self) -> bool:
        return self.k == 0

    @property
    def exact(self) -> bool:
        return self.order <= 2

    def phase(self, x: int) -> int | None:
        """j mod order with chi(x) = zeta_order^j, or None when q | x."""
        x %= self.q
        if x == 0:
            return None
        return (self.k * self.dlog[x] // ((self.q - 1) // self.order)) % self.order

    def __call__(self, x: int):
        ph = self.phase(x)
        if ph is None:
            return 0
        if self.exact:
            return 1 if ph == 0 else -1
        return _e(ph / self.order)

    def conj(self, x: int):
        v = self(x)
        return v if self.exact else v.conjugate()

    def table(self) -> np.ndarray:
        return np.array([self(x) for x in range(self.q)], dtype=int if self.exact else complex)


def _from_phases(counts: Counter, order: int):
    if order == 1:
        return counts.get(0, 0)
    if order == 2:
        return counts.get(0, 0) - counts.get(1, 0)
    return sum(n * _e(j / order) for j, n in sorted(counts.items()))


@dataclass(frozen=True)
class LinearFactorPoly:
    """prod (x + n_i)^{e_i} over F_q, stored as {n_i mod q: e_i}."""
    q: int
    shifts: tuple

    @classmethod
    def from_exponents(cls, q: int, exps: dict) -> "LinearFactorPoly":
        merged: Counter = Counter()
        for n, e in exps.items():
            merged[n % q] += e
        return cls(q, tuple(sorted((n, e) for n, e in merged.items() if e)))

    @property
    def m(self) -> int:
        return len(self.shifts)

    def is_power(self, delta: int) -> bool:
        return all(e % delta == 0 for _, e in self.shifts)


def char_sum(chi: DirichletChar, f: LinearFactorPoly):
    """sum over x in F_q of chi(f(x)); an int for real chi, complex otherwise."""
    if f.q != chi.q:
        raise ValueError("modulus mismatch")
    counts: Counter = Counter()
    for x in range(chi.q):
        total = 0
        for n, e in f.shifts:
            ph = chi.phase(x + n)
            if ph is None:
                break
            total += e * ph
        else:
            counts[total % chi.order] += 1
    return _from_phases(counts, chi.order)


def _within(value, bound_sq_factor: int, q: int, exact: bool) -> bool:
    # |value| <= factor * sqrt(q), decided on squares when exact
    if exact:
        return value * value <= bound_sq_factor * bound_sq_factor * q
    return abs(value) <= bound_sq_factor * math.sqrt(q) + 1e-9 * q


def weil_certificate(chi: DirichletChar, f: LinearFactorPoly) -> dict:
    if chi.principal:
        raise PreconditionError("principal character", "weil")
    if f.is_power(chi.order):
        raise PreconditionError(f"polynomial is a {chi.order}-th power", "weil")
    s = char_sum(chi, f)
    return {"sum": s, "bound": (f.m - 1) * math.sqrt(chi.q), "pass": _within(s, f.m - 1, chi.q, chi.exact)}


def correlation_poly(chi: DirichletChar, shifts) -> LinearFactorPoly:
    """chi(x+n1) conj chi(x+n2) ... as chi of prod (x+n_odd)(x+n_even)^{order-1}."""
    exps: Counter = Counter()
    for pos, n in enumerate(shifts):
        exps[n] += chi.order - 1 if pos % 2 else 1
    return LinearFactorPoly.from_exponents(chi.q, exps)


def quasi_super_check(chi: DirichletChar, shifts) -> dict:
    shifts = tuple(shifts)
    if len(shifts) % 2 or not shifts:
        raise ValueError("need 2r shifts")
    if not has_unique_value([n % chi.q for n in shifts]):
        raise PreconditionError("shift tuple lacks the uniqueness property", "quasi_super")
    r = len(shifts) // 2
    s = char_sum(chi, correlation_poly(chi, shifts))
    return {"sum": s, "bound": (2 * r - 1) * math.sqrt(chi.q), "pass": _within(s, 2 * r - 1, chi.q, chi.exact)}


def correlation_direct(chi: DirichletChar, shifts):
    """Brute-force sum of chi(x+n1) conj chi(x+n2) ..., used as an oracle."""
    total = 0
    for x in range(chi.q):
        term = 1
        for pos, n in enumerate(shifts):
            term = term * (chi.conj(x + n) if pos % 2 else chi(x + n))
        total += term
    return total


def matching_partitions(n: int) -> int:
    """Number of set partitions of n points into blocks of size >= 2."""
    # a(n) = sum_{j>=1} C(n-1, j) a(n-1-j): the block containing point 1 has j others
    a = [1, 0]
    for m in range(2, n + 1):
        a.append(sum(math.comb(m - 1, j) * a[m - 1 - j] for j in range(1, m)))
    return a[n]


def shifted_moment(chi: DirichletChar, k1: int, k2: int, r: int, constant: float | None = None) -> dict:
    """sum over m mod q of |sum_{n in (k1, k2]} chi(m + n)|^{2r}.

    The default constant max(2r - 1, P_r) is rigorous: uniqueness tuples
    contribute at most (2r-1) sqrt(q) each, and the remaining tuples number at
    most P_r * len^r with P_r the count of partitions of 2r points into blocks
    of size >= 2.  The empirical constant moment / base is also returned.
    """
    if k1 >= k2 or r < 1:
        raise ValueError("need k1 < k2 and r >= 1")
    length = k2 - k1
    if length >= chi.q:
        raise ValueError("window must be shorter than q")
    tab = chi.table()
    idx = (np.arange(chi.q)[:, None] + np.arange(k1 + 1, k2 + 1)[None, :]) % chi.q
    inner = tab[idx].sum(axis=1)
    if chi.exact:
        moment = sum(int(v) ** (2 * r) for v in inner)
    else:
        moment = float(np.sum(np.abs(inner) ** (2 * r)))
    base = length ** (2 * r) * math.sqrt(chi.q) + length ** r * chi.q
    if constant is None:
        constant = max(2 * r - 1, matching_partitions(2 * r))
    return {"moment": moment, "bound": constant * base, "constant": constant,
            "empirical_constant": moment / base, "pass": moment <= constant * base}


def gauss_sum(q: int, a: int) -> complex:
    """Normalized quadratic Gauss sum q^{-1/2} sum_x e(a x^2 / q)."""
    return sum(_e(a * x * x % q / q) for x in range(q)) / math.sqrt(q)


def kloosterman(q: int, a: int) -> float:
    if a % q == 0:
        raise PreconditionError("a must be nonzero mod q", "kloosterman")
    s = sum(_e((x + a * pow(x, -1, q)) % q / q) for x in range(1, q))
    if abs(s.imag) > 1e-9 * q:
        raise AssertionError(f"Kloosterman sum not real: {s}")
    return s.real


def normalized_kloosterman(q: int):
    """x -> q^{-1/2} Kl(x; q), with the value 0 at x = 0."""
    cache = {}

    def F(x):
        x %= q
        if x not in cache:
            cache[x] = 0.0 if x == 0 else kloosterman(q, x) / math.sqrt(q)
        return cache[x]

    return F


def pgl2_normalize(m, q: int) -> tuple:
    a, b, c, d = (v % q for v in m)
    if (a * d - b * c) % q == 0:
        raise ValueError(f"matrix {m} is singular mod {q}")
    lead = next(v for v in (a, b, c, d) if v)
    inv = pow(lead, -1, q)
    return tuple(v * inv % q for v in (a, b, c, d))


def mobius(m, x: int, q: int):
    a, b, c, d = m
    den = (c * x + d) % q
    if den == 0:
        return None
    return (a * x + b) * pow(den, -1, q) % q


def multicorrelation(F, gammas, h: int, q: int) -> dict:
    """sum_x prod_i F(gamma_i x)^(conj on even i) e(hx/q), skipping poles."""
    mats = [pgl2_normalize(g, q) for g in gammas]
    if len(mats) % 2:
        raise ValueError("need an even number of maps")
    if not any(m % 2 for m in Counter(mats).values()):
        raise PreconditionError("no map of odd multiplicity", "multicorrelation")
    total = 0j
    poles = 0
    for x in range(q):
        term = _e(h * x % q / q) if h % q else 1
        for pos, m in enumerate(mats):
            y = mobius(m, x, q)
            if y is None:
                poles += 1
                break
            v = complex(F(y))
            term *= v.conjugate() if pos % 2 else v
        else:
            total += term
    return {"sum": total, "ratio": abs(total) / math.sqrt(q), "poles_skipped": poles}


def dft(v) -> np.ndarray:
    """Unnormalized transform sum_x v(x) exp(-2 pi i x xi / N)."""
    return np.fft.fft(np.asarray(v, dtype=complex))


def dft_direct(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    n = len(v)
    x = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(x, x) / n) @ v


def polya_vinogradov(chi: DirichletChar) -> dict:
    if chi.principal:
        raise PreconditionError("principal character", "polya_vinogradov")
    s, best = 0, 0.0
    for x in range(1, chi.q + 1):
        s = s + chi(x)
        best = max(best, abs(s))
    bound = math.sqrt(chi.q) * math.log(chi.q)
    return {"max_partial": best, "bound": bound, "constant": best / bound, "pass": best <= bound}


def interval_fourier(q: int, a: int, b: int, y: int) -> complex:
    """q^{-1/2} sum_{a <= x <= b} e(xy/q), direct summation."""
    return sum(_e(x * y % q / q) for x in range(a, b + 1)) / math.sqrt(q)


def interval_fourier_bound(q: int, interval, y: int | None = None) -> bool:
    """|1_I^(y)| <= q^{-1/2} min(|I|, (1/2) ||y/q||^{-1}) for one y or all residues."""
    a, b = interval
    length = b - a + 1
    ys = range(q) if y is None else [y]
    for yy in ys:
        val = abs(interval_fourier(q, a, b, yy))
        frac = (yy % q) / q
        dist = min(frac, 1 - frac)
        cap = length if dist == 0 else min(length, 0.5 / dist)
        if val > cap / math.sqrt(q) + 1e-12:
            return False
    return True


def uniqueness_shift_tuples(width: int, r: int):
    """All 2r-tuples over range(width) with a value of multiplicity one."""
    for t in cartesian(range(width), repeat=2 * r):
        if has_unique_value(t):
            yield t
