"""Superorthogonality predicates, the exhaustive verification engine and Hall sorting."""
from __future__ import annotations

import itertools
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .dyadic import DyadicStep, common_level

KINDS = ("type1", "type2", "type3", "type3prime", "type1star", "multdiag")


@dataclass(frozen=True)
class OrthoClass:
    kind: str
    c: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown class {self.kind!r}")
        if self.kind == "type3prime":
            if self.c is None or self.c < 1:
                raise ValueError("type3prime needs c >= 1")
        elif self.c is not None:
            raise ValueError(f"{self.kind} takes no parameter")

    @property
    def name(self) -> str:
        return f"type3prime({self.c})" if self.kind == "type3prime" else self.kind

    @classmethod
    def parse(cls, text: str) -> "OrthoClass":
        text = text.strip().lower()
        if text.startswith("type3prime"):
            inner = text[len("type3prime"):].strip("()") or "1"
            return cls("type3prime", int(inner))
        return cls(text)


TYPE_I = OrthoClass("type1")
TYPE_II = OrthoClass("type2")
TYPE_III = OrthoClass("type3")
TYPE_I_STAR = OrthoClass("type1star")
MULT_DIAGONAL = OrthoClass("multdiag")


def type3prime(c: int) -> OrthoClass:
    return OrthoClass("type3prime", c)


@dataclass(frozen=True)
class IndexTuple:
    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if not self.entries or len(self.entries) % 2:
            raise ValueError("an index tuple has even positive length 2r")

    @property
    def r(self) -> int:
        return len(self.entries) // 2

    def pairs(self) -> list[tuple]:
        e = self.entries
        return [(e[2 * i], e[2 * i + 1]) for i in range(self.r)]


def _entries(t) -> tuple:
    return t.entries if isinstance(t, IndexTuple) else tuple(t)


def has_unique_value(entries) -> bool:
    return 1 in Counter(entries).values()


def satisfies(t, cls: OrthoClass) -> bool:
    e = _entries(t)
    counts = Counter(e)
    if cls.kind == "type1":
        return any(m % 2 for m in counts.values())
    if cls.kind == "type2":
        return 1 in counts.values()
    if cls.kind == "type3":
        top = max(e)
        return counts[top] == 1
    if cls.kind == "type3prime":
        srt = sorted(e)
        return len(srt) == 1 or srt[-1] >= srt[-2] + cls.c
    if cls.kind == "type1star":
        return Counter(e[0::2]) != Counter(e[1::2])
    if cls.kind == "multdiag":
        return math.prod(e[0::2]) != math.prod(e[1::2])
    raise AssertionError(cls)


@dataclass
class VerificationReport:
    cls: str
    r: int
    family_size: int
    tuples_checked: int = 0
    violations: list = field(default_factory=list)
    complement_checked: int = 0
    complement_values: list = field(default_factory=list)
    tol: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "class": self.cls,
            "r": self.r,
            "family_size": self.family_size,
            "tuples_checked": self.tuples_checked,
            "violations": [{"tuple": list(t), "value": _jsonable(v)} for t, v in self.violations],
            "complement_checked": self.complement_checked,
            "complement_values": [_jsonable(v) for v in self.complement_values],
            "tol": self.tol,
            "pass": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (np.floating, np.complexfloating)):
        return _jsonable(complex(v) if np.iscomplexobj(v) else float(v))
    return v


def _prepare(family):
    """Labels, integer-valued arrays, and the normalizer of the integral.

    Dyadic families are refined to a common level and scaled by the lcm of
    their denominators, so products stay exact Python integers.  Numpy vectors
    are integrated against counting measure.
    """
    if isinstance(family, Mapping):
        labels, funcs = list(family.keys()), list(family.values())
    else:
        funcs = list(family)
        labels = list(range(len(funcs)))
    if not funcs:
        return labels, [], None, True
    if all(isinstance(f, DyadicStep) for f in funcs):
        k = common_level(funcs)
        arrays, dens = [], []
        for f in funcs:
            vals = f.refine(k)
            d = math.lcm(*(v.denominator for v in vals))
            arrays.append(np.array([int(v * d) for v in vals], dtype=object))
            dens.append(d)
        return labels, arrays, (dens, 1 << k), True
    arrays = [np.asarray(f, dtype=complex) for f in funcs]
    return labels, arrays, None, False


def verify_family(family, r: int, cls: OrthoClass, *, conjugate: bool = True,
                  tol: float = 0.0, record_complement: bool = False) -> VerificationReport:
    """Check that every 2r-tuple satisfying ``cls`` has vanishing product integral.

    ``family`` is a sequence (labels 0, 1, ...) or a mapping from integer labels
    to functions.  Tuples are enumerated lexicographically over the sorted
    labels; even positions (2nd, 4th, ...) are conjugated when ``conjugate``.
    Exact families report a violation for any nonzero value; numeric families
    for |value| > tol.
    """
    labels, arrays, norm, exact = _prepare(family)
    report = VerificationReport(cls.name, r, len(arrays), tol=tol)
    if not arrays:
        return report
    order = sorted(range(len(labels)), key=lambda i: labels[i])
    if exact:
        conj_arrays = arrays
    else:
        conj_arrays = [np.conj(a) if conjugate else a for a in arrays]
    seen = set()

    def finish(prefix_idx, prod):
        tup = tuple(labels[i] for i in prefix_idx)
        in_class = satisfies(tup, cls)
        if not in_class and not record_complement:
            return
        if exact:
            dens, cells = norm
            den = math.prod(dens[i] for i in prefix_idx) * cells
            value = Fraction(int(prod.sum()), den)
        else:
            value = complex(prod.sum())
        if in_class:
            report.tuples_checked += 1
            bad = value != 0 if exact else abs(value) > tol
            if bad:
                report.violations.append((tup, value))
        else:
            report.complement_checked += 1
            key = value if exact else round(value.real, 9) + 1j * round(value.imag, 9)
            if key not in seen:
                seen.add(key)
                report.complement_values.append(value)

    def walk(prefix_idx, prod):
        pos = len(prefix_idx)
        if pos == 2 * r:
            finish(prefix_idx, prod)
            return
        src = conj_arrays if pos % 2 else arrays
        for i in order:
            walk(prefix_idx + (i,), src[i] if prod is None else prod * src[i])

    walk((), None)
    if exact:
        report.complement_values.sort()
    return report


def hall_sort(t) -> tuple:
    """kappa with both selections {u_i(kappa_i)} and {u_i(1 - kappa_i)} equal to the value set.

    Input is a 2r-tuple read as pairs (u_i(0), u_i(1)) in which no value has
    multiplicity one.
    """
    e = list(_entries(t))
    if not e or len(e) % 2:
        raise ValueError("hall_sort needs a tuple of even length")
    if has_unique_value(e):
        raise ValueError("tuple has a value of multiplicity one; no sorting is claimed")
    r = len(e) // 2
    work = list(e)
    fresh = itertools.count()
    while len(set(work)) < r:
        counts = Counter(work)
        four = [v for v, m in counts.items() if m >= 4]
        if four:
            v = four[0]
            new = ("new", next(fresh))
            hits = [i for i, x in enumerate(work) if x == v][:2]
            for i in hits:
                work[i] = new
        else:
            threes = [v for v, m in counts.items() if m == 3]
            if len(threes) < 2:
                raise AssertionError("multiplicity reduction expected two values of multiplicity three")
            new = ("new", next(fresh))
            for v in threes[:2]:
                work[work.index(v)] = new
    kappa = _sort_two_regular(work, r)
    _check_sorted(e, kappa)
    return kappa


def _sort_two_regular(work, r):
    # every value occurs exactly twice: the index/value incidence graph is a
    # union of even cycles, coloured alternately
    occ: dict = {}
    for pos, v in enumerate(work):
        occ.setdefault(v, []).append((pos // 2, pos % 2))
    kappa = [None] * r
    for start in range(r):
        if kappa[start] is not None:
            continue
        kappa[start] = 0
        i, side = start, 1
        while True:
            v = work[2 * i + side]
            a, b = occ[v]
            j, s = b if a == (i, side) else a
            if j == start:
                if s != 0:
                    raise AssertionError("cycle colouring is inconsistent")
                break
            kappa[j] = s
            i, side = j, 1 - s
    return tuple(kappa)


def _check_sorted(e, kappa):
    values = set(e)
    pick = {e[2 * i + k] for i, k in enumerate(kappa)}
    other = {e[2 * i + 1 - k] for i, k in enumerate(kappa)}
    if pick != values or other != values:
        raise AssertionError(f"hall_sort produced an invalid kappa {kappa} for {e}")


def predicate_implications(r: int, index_bound: int) -> bool:
    """Per-tuple chain type3 => type2 => type1 => type1star.

    The last link holds because a value of odd multiplicity cannot be split
    evenly between odd and even positions.  The reverse fails, e.g. (0,1,0,1).
    """
    for t in itertools.product(range(index_bound), repeat=2 * r):
        t1 = satisfies(t, TYPE_I)
        if satisfies(t, TYPE_III) and not satisfies(t, TYPE_II):
            return False
        if satisfies(t, TYPE_II) and not t1:
            return False
        if t1 and not satisfies(t, TYPE_I_STAR):
            return False
    return True
