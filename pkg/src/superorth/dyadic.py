"""Exact dyadic step functions on [0, 1).

A ``DyadicStep`` at level ``k`` stores ``2**k`` rational values, one per cell
``[i/2**k, (i+1)/2**k)``.  Constructors always return the canonical form, in
which no pair of sibling cells carries equal values, so structural equality is
functional equality.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

MAX_INDEX = 63


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        raise TypeError("floats are not accepted; pass int, Fraction or 'p/q' strings")
    return Fraction(v)


def _canonical(values: list[Fraction]) -> list[Fraction]:
    while len(values) > 1 and all(values[i] == values[i + 1] for i in range(0, len(values), 2)):
        values = values[::2]
    return values


@dataclass(frozen=True)
class DyadicStep:
    level: int
    values: tuple

    def __post_init__(self):
        vals = [_as_fraction(v) for v in self.values]
        if self.level < 0 or len(vals) != 1 << self.level:
            raise ValueError(f"level {self.level} needs {1 << max(self.level, 0)} values, got {len(vals)}")
        vals = _canonical(vals)
        object.__setattr__(self, "values", tuple(vals))
        object.__setattr__(self, "level", len(vals).bit_length() - 1)

    @classmethod
    def constant(cls, c) -> "DyadicStep":
        return cls(0, (c,))

    @classmethod
    def indicator(cls, start, stop, level: int) -> "DyadicStep":
        """Indicator of [start/2**level, stop/2**level)."""
        return cls(level, tuple(1 if start <= i < stop else 0 for i in range(1 << level)))

    def refine(self, level: int) -> list[Fraction]:
        """Values at a finer level (not canonicalized)."""
        if level < self.level:
            raise ValueError("cannot refine to a coarser level")
        rep = 1 << (level - self.level)
        return [v for v in self.values for _ in range(rep)]

    def _binary(self, other, op) -> "DyadicStep":
        if not isinstance(other, DyadicStep):
            other = DyadicStep.constant(other)
        k = max(self.level, other.level)
        return DyadicStep(k, tuple(op(a, b) for a, b in zip(self.refine(k), other.refine(k))))

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __mul__(self, other):
        if isinstance(other, DyadicStep):
            return self._binary(other, lambda a, b: a * b)
        return self.scale(other)

    __rmul__ = __mul__

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "DyadicStep":
        c = _as_fraction(c)
        return DyadicStep(self.level, tuple(v * c for v in self.values))

    def map(self, fn) -> "DyadicStep":
        return DyadicStep(self.level, tuple(fn(v) for v in self.values))

    def __abs__(self):
        return self.map(abs)

    def __call__(self, t) -> Fraction:
        t = _as_fraction(t)
        if not 0 <= t < 1:
            raise ValueError("t must lie in [0, 1)")
        return self.values[int(t * len(self.values))]

    def serialize(self) -> str:
        return f"{self.level};" + ",".join(f"{v.numerator}/{v.denominator}" for v in self.values)

    @classmethod
    def parse(cls, text: str) -> "DyadicStep":
        level, _, body = text.strip().partition(";")
        return cls(int(level), tuple(Fraction(s) for s in body.split(",")))


def common_level(fs: Iterable[DyadicStep]) -> int:
    return max((f.level for f in fs), default=0)


def add(f: DyadicStep, g: DyadicStep) -> DyadicStep:
    return f + g


def multiply(f: DyadicStep, g: DyadicStep) -> DyadicStep:
    return f * g


def scale(f: DyadicStep, c) -> DyadicStep:
    return f.scale(c)


def product(fs: Sequence[DyadicStep]) -> DyadicStep:
    out = DyadicStep.constant(1)
    for f in fs:
        out = out * f
    return out


def total(fs: Sequence[DyadicStep]) -> DyadicStep:
    out = DyadicStep.constant(0)
    for f in fs:
        out = out + f
    return out


def integrate(f: DyadicStep) -> Fraction:
    return sum(f.values, Fraction(0)) / len(f.values)


def _check_index(n: int):
    if n < 0 or n > MAX_INDEX:
        raise ValueError(f"index must lie in [0, {MAX_INDEX}], got {n}")


def rademacher(n: int) -> DyadicStep:
    _check_index(n)
    return DyadicStep(n + 1, (1, -1) * (1 << n))


def walsh(n: int) -> DyadicStep:
    _check_index(n)
    out = DyadicStep.constant(1)
    j = 0
    while n >> j:
        if (n >> j) & 1:
            out = out * rademacher(j)
        j += 1
    return out


def _bitrev(i: int, k: int) -> int:
    return int(format(i, f"0{k}b")[::-1], 2) if k else 0


def _hadamard(vals: list) -> list:
    # in-place natural-order fast Walsh-Hadamard butterfly, exact
    vals = list(vals)
    h = 1
    while h < len(vals):
        for i in range(0, len(vals), 2 * h):
            for j in range(i, i + h):
                a, b = vals[j], vals[j + h]
                vals[j], vals[j + h] = a + b, a - b
        h *= 2
    return vals


def walsh_coefficients(f: DyadicStep) -> list[Fraction]:
    """All Walsh-Paley coefficients c_0 .. c_{2^k - 1} of f, by fast transform.

    Cell i of level k sees r_j through binary digit k-1-j of i, so the Paley
    ordering is the natural Hadamard ordering after bit-reversing the cells.
    """
    k, n = f.level, len(f.values)
    perm = [f.values[_bitrev(i, k)] for i in range(n)]
    return [c / n for c in _hadamard(perm)]


def from_walsh_coefficients(coeffs: Sequence[Fraction]) -> DyadicStep:
    n = len(coeffs)
    k = n.bit_length() - 1
    if n != 1 << k:
        raise ValueError("coefficient count must be a power of two")
    spread = _hadamard([_as_fraction(c) for c in coeffs])
    return DyadicStep(k, tuple(spread[_bitrev(i, k)] for i in range(n)))


def walsh_coeff(f: DyadicStep, m: int) -> Fraction:
    """c_m(f) = integral of f * w_m, computed through the product directly."""
    return integrate(f * walsh(m))


def partial_sum(f: DyadicStep, n: int) -> DyadicStep:
    """S_n f = sum_{m<n} c_m(f) w_m."""
    if n < 0:
        raise ValueError("n must be non-negative")
    coeffs = walsh_coefficients(f)
    if n >= len(coeffs):
        return f
    return from_walsh_coefficients([c if m < n else 0 for m, c in enumerate(coeffs)])


def dyadic_diff(f: DyadicStep, n: int) -> DyadicStep:
    """f_0 = S_1 f and f_n = S_{2^n} f - S_{2^(n-1)} f for n >= 1."""
    if n == 0:
        return partial_sum(f, 1)
    return partial_sum(f, 1 << n) - partial_sum(f, 1 << (n - 1))


def dyadic_diffs(f: DyadicStep) -> list[DyadicStep]:
    """f_0, ..., f_k for f at level k; they sum to f."""
    return [dyadic_diff(f, n) for n in range(f.level + 1)]


def square_function(fs: Sequence[DyadicStep]) -> DyadicStep:
    return total([g * g for g in fs])


def hl_maximal(f: DyadicStep) -> DyadicStep:
    """Uncentered maximal function over grid-aligned windows.

    For each cell, the largest average of |f| over a window [a, b) of the
    level-k grid that contains the cell.  Windows are processed in decreasing
    order of their average, so each cell is assigned by the first window that
    covers it.
    """
    vals = [abs(v) for v in f.values]
    n = len(vals)
    prefix = [Fraction(0)]
    for v in vals:
        prefix.append(prefix[-1] + v)
    windows = [((prefix[b] - prefix[a]) / (b - a), a, b) for a in range(n) for b in range(a + 1, n + 1)]
    windows.sort(key=lambda w: (-w[0], w[1], w[2]))
    out: list = [None] * n
    left = n
    for avg, a, b in windows:
        for i in range(a, b):
            if out[i] is None:
                out[i] = avg
                left -= 1
        if not left:
            break
    return DyadicStep(f.level, tuple(out))


def random_step(level: int, rng: random.Random, num_range: int = 10, den_max: int = 5) -> DyadicStep:
    """Seeded random step function with small rational values."""
    vals = [Fraction(rng.randint(-num_range, num_range), rng.randint(1, den_max)) for _ in range(1 << level)]
    return DyadicStep(level, tuple(vals))
