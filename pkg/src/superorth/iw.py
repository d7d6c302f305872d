"""Reduced-fraction frequency sets and band projections on Z/NZ."""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np
from sympy import factorint

from .errors import PreconditionError
from .tuplecheck import VerificationReport, has_unique_value

REL_TOL = 1e-8


@dataclass(frozen=True)
class FreqSet:
    """Fractions a/q mod 1 kept as (a, q) pairs; ``points`` gives reduced values in [0, 1)."""
    members: tuple
    source: str
    q_max: int

    @property
    def points(self) -> list[Fraction]:
        return sorted({Fraction(a, q) % 1 for a, q in self.members})

    def __len__(self):
        return len(self.members)


def _check_q(q: int):
    if q <= 1:
        raise PreconditionError(f"denominators must exceed 1, got {q}", "freqset")


def reduced(q: int) -> list[tuple[int, int]]:
    return [(a, q) for a in range(1, q + 1) if math.gcd(a, q) == 1]


def build_freqset(arg, kind: str = "R") -> FreqSet:
    """kind R takes an iterable Z of denominators; F and D take a single q."""
    if kind == "R":
        zs = sorted(set(arg))
        if not zs:
            raise PreconditionError("Z must be nonempty", "freqset")
        for q in zs:
            _check_q(q)
        return FreqSet(tuple(m for q in zs for m in reduced(q)), "R", max(zs))
    q = int(arg)
    _check_q(q)
    if kind == "F":
        return FreqSet(tuple((a, q) for a in range(1, q + 1)), "F", q)
    if kind == "D":
        return FreqSet(tuple((a, q) for a in range(1, q + 1) if math.gcd(a, q) > 1), "D", q)
    raise ValueError(f"unknown kind {kind!r}")


def full_fractions(q: int) -> list[Fraction]:
    """F(q) as points mod 1, including q = 1."""
    return [Fraction(a, q) % 1 for a in range(1, q + 1)]


def separation(s: FreqSet) -> Fraction:
    pts = s.points
    if len(pts) < 2:
        return Fraction(1)
    gaps = [b - a for a, b in zip(pts, pts[1:])] + [pts[0] + 1 - pts[-1]]
    gap = min(gaps)
    if s.source == "R" and gap < Fraction(1, s.q_max ** 2):
        raise AssertionError(f"R-set separation {gap} below 1/q^2")
    return gap


def omega(q: int) -> int:
    """Number of distinct prime factors."""
    return len(factorint(q))


def big_omega(zs: Iterable[int]) -> int:
    """max over q in Z of the number of prime factors of q with multiplicity."""
    return max(sum(factorint(q).values()) for q in zs)


def _h(h, w):
    return h(w) if callable(h) else h.get(w, 0)


def split_sides(q: int, h) -> tuple:
    _check_q(q)
    fac = sorted(factorint(q).items())
    lhs = sum((_h(h, Fraction(a, q) % 1) for a, _ in reduced(q)), Fraction(0))
    rhs = Fraction(0)
    for eps in itertools.product((0, 1), repeat=len(fac)):
        qq = math.prod(p ** (e - d) for (p, e), d in zip(fac, eps))
        sign = -1 if sum(eps) % 2 else 1
        rhs += sign * sum((_h(h, w) for w in full_fractions(qq)), Fraction(0))
    return lhs, rhs


def split_identity_check(q: int, h) -> bool:
    """Sum of h over R(q) against inclusion-exclusion over F(q / prod of chosen primes)."""
    lhs, rhs = split_sides(q, h)
    return lhs == rhs


def _centered(d, n):
    return (d + n // 2) % n - n // 2 if n % 2 == 0 else (d + (n - 1) // 2) % n - (n - 1) // 2


def _grid(fn: dict, n: int, half_width, dtype=object) -> np.ndarray:
    g = np.zeros(n, dtype=dtype)
    for d, v in fn.items():
        if abs(d) > half_width:
            raise PreconditionError(f"offset {d} outside the band |offset| <= {half_width}", "factor_identity")
        g[d % n] += v
    return g


def factor_identity_sides(q: int, delta, mu: dict, phi: dict, N: int) -> tuple:
    delta = Fraction(delta)
    if delta > Fraction(1, q * q):
        raise PreconditionError(f"delta = {delta} exceeds q^-2", "factor_identity")
    if N % q:
        raise PreconditionError(f"q = {q} must divide N = {N}", "factor_identity")
    half = delta * N / 2
    m, f = _grid(mu, N, half), _grid(phi, N, half)
    step = N // q
    red = [a * step for a, _ in reduced(q)]
    lhs = sum(np.roll(m * f, s) for s in red)
    full_mu = sum(np.roll(m, a * step) for a in range(1, q + 1))
    red_phi = sum(np.roll(f, s) for s in red)
    return lhs, full_mu * red_phi


def factor_identity_check(q: int, delta, mu: dict, phi: dict, N: int, tol: float = 0.0) -> bool:
    """Pointwise product identity on every grid frequency of Z/NZ.

    ``mu`` and ``phi`` map integer offsets (in units of 1/N) to values and must
    live in |offset| <= delta N / 2.  Exact for int or Fraction values.
    """
    lhs, rhs = factor_identity_sides(q, delta, mu, phi, N)
    if tol == 0:
        return all(a == b for a, b in zip(lhs, rhs))
    lhs, rhs = np.asarray(lhs, complex), np.asarray(rhs, complex)
    scale = max(float(np.max(np.abs(rhs))), 1e-300)
    return bool(np.max(np.abs(lhs - rhs)) <= tol * scale)


@dataclass
class ProjectionSpec:
    N: int
    eps: Fraction
    signal: np.ndarray
    multiplier: Callable | None = None
    _hat: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.eps = Fraction(self.eps)
        self.signal = np.asarray(self.signal, dtype=complex)
        if self.signal.shape != (self.N,):
            raise ValueError("signal length must equal N")

    @property
    def half_width(self) -> Fraction:
        return self.eps * self.N / 2

    def band(self, center: int) -> np.ndarray:
        offsets = _centered(np.arange(self.N) - center, self.N)
        inside = np.abs(offsets) <= math.floor(self.half_width)
        if self.multiplier is None:
            return inside.astype(float)
        vals = np.array([self.multiplier(int(d)) for d in offsets], dtype=complex)
        vals[~inside] = 0
        return vals

    def hat(self) -> np.ndarray:
        if self._hat is None:
            self._hat = np.fft.fft(self.signal)
        return self._hat


def project(spec: ProjectionSpec, a: int, q: int) -> np.ndarray:
    """Inverse DFT of (band centered at a N / q) times the DFT of the signal."""
    if spec.N % q:
        raise PreconditionError(f"denominator {q} does not divide N = {spec.N}", "project")
    return np.fft.ifft(spec.band(a * spec.N // q) * spec.hat())


def threshold(zs: Sequence[int], r: int) -> Fraction:
    return Fraction(1, r * max(zs) ** (2 * r))


def _tuple_sum(arrays, conj_arrays, idx):
    prod = arrays[idx[0]]
    for pos, i in enumerate(idx[1:], start=1):
        prod = prod * (conj_arrays[i] if pos % 2 else arrays[i])
    return complex(prod.sum())


def _hoelder_scale(norms, idx):
    return math.prod(norms[i] for i in idx)


def _vanishing_report(name, r, fracs, projections, tuples, tol):
    conj = [np.conj(f) for f in projections]
    norms = [float(np.sum(np.abs(f) ** (2 * r)) ** (1 / (2 * r))) for f in projections]
    report = VerificationReport(name, r, len(fracs), tol=tol)
    for idx in tuples:
        value = _tuple_sum(projections, conj, idx)
        scale = _hoelder_scale(norms, idx)
        rel = abs(value) / scale if scale else 0.0
        report.tuples_checked += 1
        if rel >= tol:
            report.violations.append((tuple(f"{fracs[i][0]}/{fracs[i][1]}" for i in idx), rel))
    return report


def denom_vanishing_test(spec: ProjectionSpec, zs: Sequence[int], r: int, tol: float = REL_TOL,
                         enforce_threshold: bool = True, sample: int | None = None,
                         seed: int = 0) -> VerificationReport:
    """Every 2r-tuple from R(Z) whose denominators have a unique value must vanish.

    Violations carry the relative size |sum| / prod ||f_u||_{2r}, which Hoelder
    bounds by 1.
    """
    zs = sorted(zs)
    _check_coprime(zs)
    if enforce_threshold and spec.eps >= threshold(zs, r):
        raise PreconditionError(f"eps = {spec.eps} not below {threshold(zs, r)}", "denom_vanishing")
    fracs = list(build_freqset(zs).members)
    projections = [project(spec, a, q) for a, q in fracs]
    qs = [q for _, q in fracs]
    tuples = [t for t in itertools.product(range(len(fracs)), repeat=2 * r)
              if has_unique_value([qs[i] for i in t])]
    if sample is not None and sample < len(tuples):
        tuples = sorted(random.Random(seed).sample(tuples, sample))
    return _vanishing_report("denominator-uniqueness", r, fracs, projections, tuples, tol)


def numer_vanishing_test(spec: ProjectionSpec, qs: Sequence[int], tol: float = REL_TOL,
                         enforce_threshold: bool = True, sample: int | None = None,
                         seed: int = 0) -> VerificationReport:
    """r-linear tuples (u_1(0), u_1(1), ..., u_r(0), u_r(1)), u_i(.) in R(q_i), with a unique fraction."""
    qs = list(qs)
    r = len(qs)
    _check_coprime(qs)
    if enforce_threshold and spec.eps >= threshold(qs, r):
        raise PreconditionError(f"eps = {spec.eps} not below {threshold(qs, r)}", "numer_vanishing")
    fracs = sorted({m for q in qs for m in reduced(q)}, key=lambda m: (m[1], m[0]))
    pos = {m: i for i, m in enumerate(fracs)}
    projections = [project(spec, a, q) for a, q in fracs]
    per_slot = []
    for q in qs:
        per_slot += [[pos[m] for m in reduced(q)]] * 2
    tuples = [t for t in itertools.product(*per_slot) if has_unique_value(t)]
    if sample is not None and sample < len(tuples):
        tuples = sorted(random.Random(seed).sample(tuples, sample))
    return _vanishing_report("numerator-uniqueness", r, fracs, projections, tuples, tol)


def _check_coprime(zs):
    for a, b in itertools.combinations(zs, 2):
        if math.gcd(a, b) != 1:
            raise PreconditionError(f"denominators {a} and {b} are not coprime", "coprime")
    for q in zs:
        _check_q(q)


def square_function_ratio(spec: ProjectionSpec, zs: Sequence[int], r: int) -> dict:
    """||sum f_u||_{2r}^{2r} against ||(sum |f_u|^2)^{1/2}||_{2r}^{2r} over R(Z)."""
    fs = [project(spec, a, q) for a, q in build_freqset(zs).members]
    total = np.sum(fs, axis=0)
    sq = np.sum(np.abs(fs) ** 2, axis=0)
    lhs = float(np.sum(np.abs(total) ** (2 * r)))
    rhs = float(np.sum(sq ** r))
    return {"lhs_pow": lhs, "rhs_pow": rhs, "ratio": lhs / rhs if rhs else 0.0}


def _circular_gap(x, y):
    d = abs(x - y) % 1
    return min(d, 1 - d)


def expsum_bound(a: Sequence[complex], xi: Sequence[float], delta: float, J: Sequence[int],
                 c: float | None = None) -> dict:
    """sum_{n in J} |sum_j a_j e(xi_j n)|^2 against (c / delta) sum |a_j|^2.

    When c is None the large sieve constant (|J| + 1/delta - 1) delta is used,
    which is at most 2 for |J| = 1/delta.
    """
    xi = [float(x) for x in xi]
    for i, j in itertools.combinations(range(len(xi)), 2):
        if _circular_gap(xi[i], xi[j]) < delta - 1e-15:
            raise PreconditionError(f"points {xi[i]} and {xi[j]} closer than {delta}", "expsum")
    a = np.asarray(a, dtype=complex)
    n = np.asarray(list(J), dtype=float)
    sums = np.exp(2j * np.pi * np.outer(n, xi)) @ a
    lhs = float(np.sum(np.abs(sums) ** 2))
    mass = float(np.sum(np.abs(a) ** 2))
    if c is None:
        c = (len(n) + 1 / delta - 1) * delta
    rhs = c / delta * mass
    return {"lhs": lhs, "rhs": rhs, "c": c, "empirical_c": lhs * delta / mass if mass else 0.0,
            "pass": lhs <= rhs * (1 + 1e-12)}


def parseval_case(N: int, seed: int = 0, tol: float = 1e-9) -> bool:
    rng = np.random.default_rng(seed)
    a = rng.normal(size=N) + 1j * rng.normal(size=N)
    xi = np.arange(N) / N
    n = np.arange(1, N + 1)
    sums = np.exp(2j * np.pi * np.outer(n, xi)) @ a
    lhs = float(np.sum(np.abs(sums) ** 2))
    rhs = N * float(np.sum(np.abs(a) ** 2))
    return abs(lhs - rhs) <= tol * rhs


def gaussian_inverse_profile(width: float = 4.0) -> Callable:
    """Inverse transform of Psi(xi) = exp(-pi (width xi)^2), negligible beyond |xi| = 1/2."""
    return lambda x: np.exp(-np.pi * (np.asarray(x, float) / width) ** 2) / width


def sampling_kernel_l1(Q: int, delta: float, N: int, inverse_profile: Callable | None = None,
                       bound: float = 10.0) -> dict:
    """l1 norm of K(n) = Q 1_{Q | n} delta psi(delta n) over the centered grid of Z/NZ."""
    if delta * Q > 1:
        raise PreconditionError("need delta * Q <= 1", "sampling_kernel")
    if N % Q:
        raise PreconditionError("Q must divide N", "sampling_kernel")
    psi = inverse_profile or gaussian_inverse_profile()
    n = _centered(np.arange(0, N, Q), N)
    kernel = Q * delta * np.asarray(psi(delta * n), dtype=complex)
    l1 = float(np.sum(np.abs(kernel)))
    return {"l1": l1, "bound": bound, "pass": l1 <= bound}
