import itertools

import pytest
from hypothesis import given, strategies as st

from superorth import vino
from superorth.errors import PreconditionError


@pytest.mark.parametrize("n,r,X", [(2, 2, 20), (3, 2, 12), (3, 3, 12), (1, 1, 9), (4, 3, 8)])
def test_diagonal_only_when_r_at_most_n(n, r, X):
    c = vino.count_solutions(n, r, X)
    assert c.offdiagonal == 0 and c.total == c.diagonal


@pytest.mark.parametrize("n,r,X", [(1, 1, 5), (1, 2, 4), (2, 2, 6), (2, 1, 6), (1, 2, 6)])
def test_meet_in_middle_equals_naive(n, r, X):
    assert vino.count_solutions(n, r, X) == vino.count_naive(n, r, X)


def test_linear_closed_forms():
    # x1 + x3 = x2 + x4 over [1, X]: total (2X^3 + X)/3, diagonal 2X^2 - X
    for X in range(1, 12):
        c = vino.count_solutions(1, 2, X)
        assert c.total == (2 * X ** 3 + X) // 3
        assert c.diagonal == 2 * X * X - X


def test_frozen_counts():
    assert vino.count_solutions(2, 2, 6).total == 66
    assert vino.count_solutions(2, 3, 7).offdiagonal == 126
    assert vino.count_solutions(1, 2, 4).offdiagonal == 16


def test_diagonal_brute():
    for r, X in [(1, 4), (2, 5), (3, 4)]:
        brute = sum(1 for a in itertools.product(range(1, X + 1), repeat=r)
                    for b in itertools.product(range(1, X + 1), repeat=r) if sorted(a) == sorted(b))
        assert vino.diagonal_count(r, X) == brute


def test_pte_examples():
    assert vino.find_pte(2, 7) == ((1, 5, 6), (2, 3, 7))
    assert vino.find_pte(2, 6) is None
    assert vino.find_pte(1, 4, r=2) == ((1, 4), (2, 3))
    assert vino.find_pte(3, 12) == ((1, 5, 8, 12), (2, 3, 10, 11))


def test_pte_with_repeated_entries():
    # with repeats allowed the degree-2 system already has a solution at X = 6
    sol = vino.find_pte(2, 6, distinct=False)
    assert sol == ((1, 4, 4), (2, 2, 5))
    assert vino.power_vector(sol[0], 2) == vino.power_vector(sol[1], 2)


def test_budget_refusal():
    with pytest.raises(PreconditionError) as e:
        vino.count_solutions(2, 6, 100)
    assert e.value.stage == "budget"


def test_growth_example():
    res = vino.offdiag_growth(2, 3, [7, 10, 14, 20])
    assert res["monotone"] and res["slope"] >= 1.7 and res["pass"]
    assert [row["offdiagonal"] for row in res["rows"]] == [126, 648, 2844, 12024]


def test_growth_linear_case():
    res = vino.offdiag_growth(1, 2, [4, 8, 16])
    assert res["pass"] and res["slope"] >= 1.7


def test_growth_precondition():
    with pytest.raises(PreconditionError):
        vino.offdiag_growth(2, 2, [5])


@given(st.integers(1, 3), st.integers(1, 2), st.integers(1, 7))
def test_symmetry(n, r, X):
    # swapping the two sides maps solutions bijectively
    base = vino.count_naive(n, r, X) if r == 1 or X <= 5 else vino.count_solutions(n, r, X)
    swapped = 0
    for xs in itertools.product(range(1, X + 1), repeat=2 * r) if X ** (2 * r) <= 20000 else []:
        odd, even = xs[0::2], xs[1::2]
        if vino.power_vector(even, n) == vino.power_vector(odd, n):
            swapped += 1
    if X ** (2 * r) <= 20000:
        assert swapped == base.total


@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 9))
def test_monotone_in_box(n, r, X):
    a, b = vino.count_solutions(n, r, X), vino.count_solutions(n, r, X + 1)
    assert a.total <= b.total and a.diagonal <= b.diagonal and a.offdiagonal <= b.offdiagonal
    assert a.total == a.diagonal + a.offdiagonal
