"""Exact L^{2r} norms and the square-function inequality suite.

All comparisons are made between p-th powers, so dyadic and Gaussian-rational
inputs are decided without rounding.
"""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, asdict
from fractions import Fraction
from itertools import product as cartesian
from typing import Sequence

import numpy as np

from .dyadic import DyadicStep, dyadic_diffs, integrate, partial_sum, rademacher, square_function, total
from .tuplecheck import TYPE_I_STAR, verify_family


@dataclass
class NormReport:
    p: int
    lhs_pow: object
    rhs_pow: object
    ratio_bound: object
    passed: bool
    skipped: bool = False
    extra: dict | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return {k: _plain(v) for k, v in d.items()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _plain(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, dict):
        return {k: _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, np.generic):
        return v.item()
    return v


def khintchine_constant(r: int) -> int:
    """(2r)! / (r! 2^r), the number of perfect matchings of 2r points."""
    return math.factorial(2 * r) // (math.factorial(r) * 2 ** r)


def _even(p: int) -> int:
    if p < 2 or p % 2:
        raise ValueError(f"p must be a positive even integer, got {p}")
    return p // 2


def lp_pow(f: DyadicStep, p: int) -> Fraction:
    """Exact integral of |f|^p for even p."""
    _even(p)
    return sum((v ** p for v in f.values), Fraction(0)) / len(f.values)


def direct_check(family: Sequence[DyadicStep], r: int) -> NormReport:
    """lp_pow(sum f, 2r) <= C_r * integral of (sum f^2)^r."""
    c = khintchine_constant(r)
    lhs = lp_pow(total(family), 2 * r)
    rhs = integrate(square_function(family).map(lambda v: v ** r))
    return NormReport(2 * r, lhs, rhs, c, lhs <= c * rhs)


def khintchine_check(coeffs: Sequence, r: int) -> NormReport:
    coeffs = [Fraction(a) for a in coeffs]
    f = total([rademacher(n).scale(a) for n, a in enumerate(coeffs)])
    l2 = sum((a * a for a in coeffs), Fraction(0))
    identity = lp_pow(f, 2) == l2
    c = khintchine_constant(r)
    lhs = lp_pow(f, 2 * r)
    rhs = l2 ** r
    return NormReport(2 * r, lhs, rhs, c, identity and lhs <= c * rhs, extra={"l2_identity": identity})


def elementary_symmetric(a: Sequence, r: int):
    e = [Fraction(1)] + [Fraction(0)] * r
    for x in a:
        for j in range(r, 0, -1):
            e[j] += e[j - 1] * x
    return e[r]


def distinct_tuple_sum(a: Sequence, r: int):
    """Sum over ordered r-tuples of pairwise distinct indices of the product a_{n1}...a_{nr}."""
    return math.factorial(r) * elementary_symmetric(a, r)


def nonconcentration_sides(a: Sequence, r: int) -> tuple:
    a = [Fraction(x) for x in a]
    if any(x < 0 for x in a):
        raise ValueError("nonconcentration needs non-negative entries")
    lhs = sum(a, Fraction(0)) ** r
    rhs = (r * (r - 1)) ** (r - 1) * sum((x ** r for x in a), Fraction(0)) + 2 * distinct_tuple_sum(a, r)
    return lhs, rhs


def nonconcentration_check(a: Sequence, r: int) -> bool:
    lhs, rhs = nonconcentration_sides(a, r)
    return lhs <= rhs


def menchov_rademacher_sides(b: Sequence, t: int, p: int) -> tuple:
    if t < 0 or p < 1:
        raise ValueError("need t >= 0 and integer p >= 1")
    if len(b) < (1 << t) + 1:
        raise ValueError(f"need at least 2^t + 1 = {(1 << t) + 1} values")
    b = [Fraction(x) for x in b]
    lhs = max(abs(b[n] - b[0]) ** p for n in range((1 << t) + 1))
    blocks = Fraction(0)
    for i in range(t + 1):
        step = 1 << (t - i)
        for v in range(1 << i):
            blocks += abs(b[(v + 1) * step] - b[v * step]) ** p
    return lhs, (t + 1) ** (p - 1) * blocks


def menchov_rademacher_check(b: Sequence, t: int, p: int) -> bool:
    lhs, rhs = menchov_rademacher_sides(b, t, p)
    return lhs <= rhs


def maximal_norm_bound(increments, K: int, p: float, alpha: float, c: float | None = None,
                       weights=None) -> NormReport:
    """Maximal partial-sum bound from increment norms.

    ``increments`` has shape (K, M): row m is the increment a_{m+1} as a
    function on M sample points with probability ``weights`` (uniform by
    default).  The hypothesis ||S_{k2} - S_{k1}||_p <= c (k2 - k1)^alpha is
    checked first for all 0 <= k1 < k2 <= K; when c is None the least valid c
    is used.  The conclusion tested is
    ||max_{k<=K} |S_k| ||_p <= c (t+1) 2^{t alpha} with 2^{t-1} <= K < 2^t.
    """
    inc = np.asarray(increments)
    if inc.ndim != 2 or inc.shape[0] != K:
        raise ValueError("increments must have shape (K, M)")
    if K < 1 or p * alpha < 1:
        raise ValueError("need K >= 1 and p * alpha >= 1")
    w = np.full(inc.shape[1], 1.0 / inc.shape[1]) if weights is None else np.asarray(weights, float)
    partial = np.vstack([np.zeros(inc.shape[1], dtype=inc.dtype), np.cumsum(inc, axis=0)])
    least_c = 0.0
    for k1 in range(K):
        diffs = np.abs(partial[k1 + 1:] - partial[k1]) ** p
        norms = (diffs @ w) ** (1 / p)
        lengths = np.arange(1, K - k1 + 1, dtype=float)
        least_c = max(least_c, float(np.max(norms / lengths ** alpha)))
    if c is None:
        c = least_c
    hypothesis = least_c <= c * (1 + 1e-12)
    t = K.bit_length()
    lhs = float(np.max(np.abs(partial), axis=0) ** p @ w)
    rhs = float((c * (t + 1) * 2 ** (t * alpha)) ** p)
    ok = hypothesis and lhs <= rhs * (1 + 1e-12)
    return NormReport(int(p) if float(p).is_integer() else p, lhs, rhs, c, ok,
                      extra={"t": t, "hypothesis_ok": hypothesis, "least_c": least_c})


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex number with rational parts."""
    re: Fraction
    im: Fraction = Fraction(0)

    def __add__(self, o):
        return GaussianRational(self.re + o.re, self.im + o.im)

    def __mul__(self, o):
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im


_I_POWERS = [GaussianRational(Fraction(1)), GaussianRational(Fraction(0), Fraction(1)),
             GaussianRational(Fraction(-1)), GaussianRational(Fraction(0), Fraction(-1))]


def steinhaus_family(coeffs: Sequence[GaussianRational]) -> list[list[GaussianRational]]:
    """f_n(x) = a_n * i^{x_n} on the uniform space (Z/4Z)^m, m = len(coeffs).

    Odd and even position multisets of indices match exactly when the
    character sums cancel mod 4, which for r <= 3 forces a permutation, so the
    family is of the conjugate-permutation type for r <= 3.
    """
    m = len(coeffs)
    pts = list(cartesian(range(4), repeat=m))
    return [[a * _I_POWERS[x[n]] for x in pts] for n, a in enumerate(coeffs)]


def _sandwich_values(family, r):
    """(integral |sum f|^{2r}, integral (sum |f|^2)^r) for the supported inputs."""
    f0 = family[0]
    if isinstance(f0, DyadicStep):
        lhs = lp_pow(total(family), 2 * r)
        rhs = integrate(square_function(family).map(lambda v: v ** r))
        return lhs, rhs, True
    if isinstance(f0, (list, tuple)) and f0 and isinstance(f0[0], GaussianRational):
        npts = len(f0)
        lhs = rhs = Fraction(0)
        for x in range(npts):
            s = GaussianRational(Fraction(0))
            sq = Fraction(0)
            for f in family:
                s = s + f[x]
                sq += f[x].abs2()
            lhs += s.abs2() ** r
            rhs += sq ** r
        return lhs / npts, rhs / npts, True
    arr = np.asarray(family, dtype=complex)
    npts = arr.shape[1]
    lhs = float(np.sum(np.abs(arr.sum(axis=0)) ** (2 * r))) / npts
    rhs = float(np.sum((np.abs(arr) ** 2).sum(axis=0) ** r)) / npts
    return lhs, rhs, False


def typeIstar_sandwich(family, r: int, verify: bool = True, tol: float = 1e-9) -> NormReport:
    """rhs <= lhs <= r! rhs for a family with the conjugate-permutation vanishing property.

    With ``verify`` the family is first checked with ``verify_family`` (exact
    dyadic or numeric input); failing families are reported as skipped.
    """
    if not family:
        raise ValueError("empty family")
    fact = math.factorial(r)
    if verify:
        if isinstance(family[0], (list, tuple)) and isinstance(family[0][0], GaussianRational):
            ok = _gaussian_typeIstar(family, r)
        else:
            numeric = not isinstance(family[0], DyadicStep)
            scale = max(float(np.max(np.abs(np.asarray(f, dtype=complex)))) for f in family) if numeric else 1.0
            rep = verify_family(family, r, TYPE_I_STAR, tol=tol * len(family[0]) * scale ** (2 * r) if numeric else 0)
            ok = rep.passed
        if not ok:
            return NormReport(2 * r, None, None, fact, True, skipped=True,
                              extra={"reason": "family is not of conjugate-permutation type"})
    lhs, rhs, exact = _sandwich_values(family, r)
    if exact:
        ok = rhs <= lhs <= fact * rhs
    else:
        slack = tol * max(abs(lhs), abs(rhs), 1e-300)
        ok = rhs <= lhs + slack and lhs <= fact * rhs + slack
    return NormReport(2 * r, lhs, rhs, fact, ok)


def _gaussian_typeIstar(family, r) -> bool:
    npts = len(family[0])
    n = len(family)
    for tup in cartesian(range(n), repeat=2 * r):
        if Counter(tup[0::2]) == Counter(tup[1::2]):
            continue
        acc = GaussianRational(Fraction(0))
        for x in range(npts):
            prod = GaussianRational(Fraction(1))
            for pos, i in enumerate(tup):
                v = family[i][x]
                prod = prod * (v.conjugate() if pos % 2 else v)
            acc = acc + prod
        if acc.re or acc.im:
            return False
    return True


def paley_ratio(f: DyadicStep, p: int) -> NormReport:
    """Exact p-th powers of ||f||_p and of the dyadic square function of f.

    ratio_direct = ||f||^p / ||Sf||^p and ratio_converse = ||Sf||^p / ||f||^p;
    they are recorded, not asserted.
    """
    r = _even(p)
    diffs = dyadic_diffs(f)
    sq_pow = integrate(square_function(diffs).map(lambda v: v ** r))
    f_pow = lp_pow(f, p)
    extra = {
        "ratio_direct": f_pow / sq_pow if sq_pow else None,
        "ratio_converse": sq_pow / f_pow if f_pow else None,
        "nonzero_diffs": sum(1 for d in diffs if any(d.values)),
    }
    return NormReport(p, f_pow, sq_pow, None, True, extra=extra)


def conditional_square_ratio(family: Sequence[DyadicStep], n: int, r: int) -> Fraction:
    """Vector-valued ratio for the conditional expectation S_{2^n}.

    integral (sum |S_{2^n} f_j|^2)^r over integral (sum |f_j|^2)^r; pointwise
    Cauchy-Schwarz plus conditional Jensen make this at most 1.
    """
    proj = [partial_sum(f, 1 << n) for f in family]
    num = integrate(square_function(proj).map(lambda v: v ** r))
    den = integrate(square_function(family).map(lambda v: v ** r))
    return num / den if den else Fraction(0)
