import itertools
import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st

from superorth import dyadic
from superorth.tuplecheck import (MULT_DIAGONAL, TYPE_I, TYPE_I_STAR, TYPE_II, TYPE_III, IndexTuple,
                                  OrthoClass, hall_sort, predicate_implications, satisfies,
                                  type3prime, verify_family)


def all_even_count(n_symbols, length):
    # sequences in which every symbol has even multiplicity, by the +-1 character sum
    return sum(math.comb(n_symbols, j) * (n_symbols - 2 * j) ** length
               for j in range(n_symbols + 1)) // 2 ** n_symbols


def test_rademacher_type1_r3():
    fam = {n: dyadic.rademacher(n) for n in range(6)}
    rep = verify_family(fam, 3, TYPE_I, record_complement=True)
    assert rep.passed
    assert rep.tuples_checked == 6 ** 6 - all_even_count(6, 6) == 44400
    assert rep.complement_checked == 2256
    assert rep.complement_values == [1]


def test_walsh_type2_violation():
    fam = {n: dyadic.walsh(n) for n in (1, 2, 4, 7)}
    rep = verify_family(fam, 2, TYPE_II)
    assert not rep.passed
    assert rep.violations[0] == ((1, 2, 4, 7), 1)
    assert rep.to_dict()["violations"][0] == {"tuple": [1, 2, 4, 7], "value": "1"}


def test_report_json_keys():
    rep = verify_family([dyadic.rademacher(0)], 1, TYPE_I)
    d = rep.to_dict()
    assert {"class", "r", "family_size", "tuples_checked", "violations"} <= set(d)


def test_predicates():
    assert satisfies((1, 1, 2, 3), TYPE_II)
    assert not satisfies((1, 1, 2, 2), TYPE_I)
    assert satisfies((1, 2, 2, 3), TYPE_III)
    assert not satisfies((3, 3, 1, 2), TYPE_III)
    assert satisfies((1, 5, 2, 2), type3prime(3))
    assert not satisfies((1, 3, 2, 2), type3prime(2))
    assert satisfies((2, 3, 6, 1), MULT_DIAGONAL)
    assert not satisfies((2, 3, 3, 2), MULT_DIAGONAL)
    assert OrthoClass.parse("type3prime(2)") == type3prime(2)


def test_type1star_does_not_imply_type1_per_tuple():
    t = (0, 1, 0, 1)
    assert satisfies(t, TYPE_I_STAR) and not satisfies(t, TYPE_I)


@pytest.mark.parametrize("r,bound", [(2, 4), (3, 4), (1, 3)])
def test_predicate_implications(r, bound):
    assert predicate_implications(r, bound)


def test_type1_implies_type1star_exhaustive():
    for r in (1, 2, 3):
        for t in itertools.product(range(6 if r < 3 else 5), repeat=2 * r):
            if satisfies(t, TYPE_I):
                assert satisfies(t, TYPE_I_STAR)


def test_family_containment():
    fam = [dyadic.rademacher(n) for n in range(4)]
    assert verify_family(fam, 2, TYPE_I).passed
    assert verify_family(fam, 2, TYPE_II).passed
    assert verify_family(fam, 2, TYPE_III).passed


def test_rademacher_not_type1star():
    rep = verify_family([dyadic.rademacher(0), dyadic.rademacher(1)], 2, TYPE_I_STAR)
    assert not rep.passed


def test_numeric_family_with_conjugation():
    # {1, 2, 5} has distinct pairwise sums mod 16; without conjugation
    # (1, 5, 5, 5) has frequency sum 16 = 0 mod 16
    n = 16
    x = np.arange(n)
    fam = {k: np.exp(2j * np.pi * k * x / n) for k in (1, 2, 5)}
    assert verify_family(fam, 2, TYPE_I_STAR, tol=1e-9).passed
    assert not verify_family(fam, 2, TYPE_I_STAR, conjugate=False, tol=1e-9).passed


def test_index_tuple():
    t = IndexTuple((1, 2, 3, 4))
    assert t.r == 2 and t.pairs() == [(1, 2), (3, 4)]
    with pytest.raises(ValueError):
        IndexTuple((1, 2, 3))


def _valid(t, kappa):
    vals = set(t)
    first = {t[2 * i + k] for i, k in enumerate(kappa)}
    second = {t[2 * i + 1 - k] for i, k in enumerate(kappa)}
    return first == vals and second == vals


@pytest.mark.parametrize("t", [(1, 1, 2, 2), (1, 2, 2, 1), (1, 1, 1, 1, 2, 3, 3, 2)])
def test_hall_sort_examples(t):
    assert _valid(t, hall_sort(t))


def test_hall_sort_rejects_unique():
    with pytest.raises(ValueError):
        hall_sort((1, 1, 2, 3))


@st.composite
def no_unique_tuples(draw):
    r = draw(st.integers(1, 6))
    vals = draw(st.lists(st.integers(0, 5), min_size=r, max_size=r))
    pool = vals + vals  # every value at least twice
    pool = draw(st.permutations(pool))
    return tuple(pool)


@given(no_unique_tuples())
def test_hall_sort_property(t):
    assert 1 not in Counter(t).values()
    assert _valid(t, hall_sort(t))
