import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bpb.counterexample import (
    LIMIT_NORM,
    RenormVector,
    attainment_gap,
    attainment_gap_bruteforce,
    basis_vector,
    convexity_trials,
    identity_norm,
    identity_norm_bruteforce,
    strict_convexity_check,
    tnorm,
)
from bpb.errors import InputsEqual, NotUnitVectors

coords = st.lists(st.floats(-10, 10, allow_nan=False), min_size=1, max_size=12)


def direct_tnorm(values):
    x = np.asarray(values, dtype=float)
    sup = np.abs(x).max()
    if sup == 0:
        return 0.0
    # scale first so tiny coordinates do not underflow when squared
    y = x / sup
    n = np.arange(1, x.size + 1)
    return sup * (1 + np.sqrt(np.sum(y**2 / 4.0**n)))


class TestTnorm:
    def test_first_basis_vector(self):
        assert tnorm(basis_vector(1)) == 1.5
        assert tnorm(basis_vector(1, N=5)) == 1.5

    def test_zero(self):
        assert tnorm(RenormVector((0.0, 0.0))) == 0.0

    def test_ones(self):
        assert tnorm((1.0, 1.0)) == pytest.approx(1 + math.sqrt(5) / 4, abs=1e-15)
        assert tnorm((1.0, 1.0)) == pytest.approx(1.559017, abs=1e-6)

    @given(coords)
    def test_matches_direct_formula(self, values):
        assert tnorm(values) == pytest.approx(direct_tnorm(values), rel=1e-12, abs=1e-300)

    @given(coords, st.data())
    def test_lattice_norm(self, values, data):
        shrink = [data.draw(st.floats(0, 1)) for _ in values]
        smaller = [s * v for s, v in zip(shrink, values)]
        assert tnorm(smaller) <= tnorm(values) * (1 + 1e-12)

    @given(coords)
    def test_equivalent_to_sup_norm(self, values):
        sup = max(abs(v) for v in values)
        assert sup <= tnorm(values) <= LIMIT_NORM * sup * (1 + 1e-12)


class TestIdentityNorm:
    def test_first_values(self):
        assert identity_norm(1) == 1.5
        assert identity_norm(2) == pytest.approx(1 + math.sqrt(5) / 4, abs=1e-15)

    @pytest.mark.parametrize("N", range(1, 13))
    def test_brute_force(self, N):
        assert identity_norm(N) == pytest.approx(identity_norm_bruteforce(N), abs=1e-9)

    def test_limit(self):
        assert LIMIT_NORM == pytest.approx(1.5773503, abs=1e-7)
        assert identity_norm(30) == pytest.approx(LIMIT_NORM, abs=1e-9)

    def test_increasing_and_bounded(self):
        values = [identity_norm(N) for N in range(1, 26)]
        assert all(a < b for a, b in zip(values, values[1:]))
        assert all(v < LIMIT_NORM for v in values)

    def test_all_sign_vectors_give_the_same_value(self):
        N = 6
        values = {round(tnorm(s), 14) for s in itertools.product((-1.0, 1.0), repeat=N)}
        assert len(values) == 1


class TestAttainmentGap:
    def test_k1(self):
        assert attainment_gap(1) == pytest.approx(1 / math.sqrt(3) - 0.5, abs=1e-12)
        assert attainment_gap(1) == pytest.approx(0.0773503, abs=1e-7)

    @pytest.mark.parametrize("k", range(1, 11))
    def test_brute_force(self, k):
        assert attainment_gap(k) == pytest.approx(attainment_gap_bruteforce(k), abs=1e-12)

    def test_positive_decreasing_to_zero(self):
        gaps = [attainment_gap(k) for k in range(1, 61)]
        assert all(g > 0 for g in gaps)
        assert all(a > b for a, b in zip(gaps, gaps[1:]))
        assert gaps[-1] < 1e-30


class TestStrictConvexity:
    def test_basis_pair(self):
        x = basis_vector(1, 2) / tnorm(basis_vector(1, 2))
        y = basis_vector(2, 2) / tnorm(basis_vector(2, 2))
        assert strict_convexity_check(x, y)
        assert tnorm((x + y) / 2) < 1

    def test_equal_inputs(self):
        x = basis_vector(1) / 1.5
        with pytest.raises(InputsEqual):
            strict_convexity_check(x, x)

    def test_not_unit(self):
        with pytest.raises(NotUnitVectors):
            strict_convexity_check(basis_vector(1), basis_vector(2) / 1.25)

    def test_sup_norm_alone_is_not_strictly_convex(self):
        # (1, 1) and (1, -1) have a midpoint of sup norm 1; the l2 term breaks the tie
        x, y = RenormVector((1.0, 1.0)), RenormVector((1.0, -1.0))
        assert tnorm(x) == tnorm(y)
        assert strict_convexity_check(x / tnorm(x), y / tnorm(y))

    def test_random_trials(self):
        passed, failed = convexity_trials(1000, seed=11)
        assert passed == 1000 and not failed
