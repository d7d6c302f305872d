import math
import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from superorth import iw
from superorth.errors import PreconditionError


def test_separation_example():
    assert iw.separation(iw.build_freqset([2, 3])) == F(1, 6)


def test_rejects_trivial_denominators():
    for arg, kind in (([1, 3], "R"), (1, "F"), (0, "D")):
        with pytest.raises(PreconditionError):
            iw.build_freqset(arg, kind)


@given(st.integers(2, 200))
def test_full_is_reduced_plus_degenerate(q):
    full = iw.build_freqset(q, "F").points
    red = set(iw.build_freqset([q]).points)
    deg = set(iw.build_freqset(q, "D").points)
    assert not red & deg
    assert set(full) == red | deg and len(full) == q
    # F(q) is the disjoint union of R(d) over d | q, with R(1) = {0}
    by_divisor = {F(0)} | {p for d in range(2, q + 1) if q % d == 0 for p in iw.build_freqset([d]).points}
    assert by_divisor == set(full)


@given(st.lists(st.integers(2, 40), min_size=1, max_size=4, unique=True))
def test_r_set_separation(zs):
    qmax = max(zs)
    assert iw.separation(iw.build_freqset(zs)) >= F(1, qmax * qmax)


def test_omega():
    assert iw.omega(60) == 3
    assert iw.big_omega([12, 35]) == 3


@given(st.integers(2, 200), st.integers(0, 10 ** 6))
def test_split_identity(q, seed):
    rng = random.Random(seed)
    table = {}

    def h(w):
        if w not in table:
            table[w] = F(rng.randint(-9, 9), rng.randint(1, 9))
        return table[w]

    assert iw.split_identity_check(q, h)


def test_split_identity_counts_reduced_residues():
    for q in range(2, 61):
        lhs, rhs = iw.split_sides(q, lambda w: 1)
        assert lhs == rhs == sum(1 for a in range(1, q + 1) if math.gcd(a, q) == 1)


@given(st.integers(2, 30), st.integers(0, 10 ** 6))
def test_factor_identity(q, seed):
    rng = random.Random(seed)
    N = 2 * q * q
    mu = {d: rng.randint(-5, 5) for d in (-1, 0, 1)}
    phi = {d: F(rng.randint(-5, 5), rng.randint(1, 3)) for d in (-1, 0, 1)}
    assert iw.factor_identity_check(q, F(1, q * q), mu, phi, N)


def test_factor_identity_preconditions():
    with pytest.raises(PreconditionError):
        iw.factor_identity_check(3, F(1, 4), {0: 1}, {0: 1}, 18)
    with pytest.raises(PreconditionError):
        iw.factor_identity_check(3, F(1, 9), {5: 1}, {0: 1}, 18)


def _spec(N, eps, seed=0):
    rng = np.random.default_rng(seed)
    return iw.ProjectionSpec(N, eps, rng.normal(size=N) + 1j * rng.normal(size=N))


@given(st.sampled_from([(3, 45), (5, 100), (7, 98)]), st.integers(0, 100))
def test_projection_idempotent(qN, seed):
    q, N = qN
    spec = _spec(N, F(1, 10), seed)
    once = iw.project(spec, 1, q)
    twice = iw.project(iw.ProjectionSpec(N, spec.eps, once), 1, q)
    assert np.allclose(once, twice, atol=1e-10)


def test_projections_of_disjoint_bands_orthogonal():
    spec = _spec(90, F(1, 20))
    a, b = iw.project(spec, 1, 3), iw.project(spec, 1, 2)
    assert abs(np.vdot(a, b)) < 1e-9


def test_threshold():
    assert iw.threshold([3, 5], 2) == F(1, 1250)


def test_denominator_vanishing():
    spec = _spec(2025, F(1, 2500))
    rep = iw.denom_vanishing_test(spec, [3, 5], 2)
    assert rep.tuples_checked == 640 and rep.passed


def test_denominator_sharpness_probe():
    spec = _spec(2025, F(625, 2500))
    rep = iw.denom_vanishing_test(spec, [3, 5], 2, enforce_threshold=False)
    assert len(rep.violations) >= 1
    assert all(v <= 1 + 1e-9 for _, v in rep.violations)


def test_denominator_threshold_enforced():
    with pytest.raises(PreconditionError):
        iw.denom_vanishing_test(_spec(2025, F(1, 1250)), [3, 5], 2)


def test_coprimality_enforced():
    with pytest.raises(PreconditionError):
        iw.denom_vanishing_test(_spec(36, F(1, 10 ** 6)), [2, 6], 2)


def test_numerator_vanishing():
    spec = _spec(2025, F(1, 2500))
    rep = iw.numer_vanishing_test(spec, [3, 5])
    assert rep.tuples_checked == 56 and rep.passed


def test_sampled_run_is_seeded():
    spec = _spec(2025, F(1, 2500))
    a = iw.denom_vanishing_test(spec, [3, 5], 2, sample=50, seed=4)
    b = iw.denom_vanishing_test(spec, [3, 5], 2, sample=50, seed=4)
    assert a.tuples_checked == 50 and a.to_dict() == b.to_dict()


def test_square_function_ratio_positive():
    res = iw.square_function_ratio(_spec(2025, F(1, 2500)), [3, 5], 2)
    assert res["lhs_pow"] > 0 and res["rhs_pow"] > 0


@pytest.mark.parametrize("N", [16, 64])
def test_parseval_case(N):
    assert iw.parseval_case(N, seed=0)


@given(st.integers(2, 12), st.integers(0, 1000))
def test_large_sieve(k, seed):
    rng = np.random.default_rng(seed)
    xi = sorted(rng.choice(64, size=k, replace=False) / 64)
    a = rng.normal(size=k) + 1j * rng.normal(size=k)
    res = iw.expsum_bound(a, xi, 1 / 64, range(1, 65))
    assert res["pass"]


def test_expsum_rejects_close_points():
    with pytest.raises(PreconditionError):
        iw.expsum_bound([1, 1], [0.1, 0.105], 0.01, range(10))


@pytest.mark.parametrize("Q,delta", [(4, 1 / 64), (8, 1 / 32)])
def test_sampling_kernel(Q, delta):
    res = iw.sampling_kernel_l1(Q, delta, 4096)
    assert res["pass"]
    assert res["l1"] == pytest.approx(1.0, abs=1e-6)
