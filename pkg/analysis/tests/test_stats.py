import math
import random

import pytest

from negoreport.stats import (
    betainc_regularized,
    mean,
    sample_variance,
    student_t_sf,
    welch_t_test,
)


class TestBetaInc:
    def test_bounds(self):
        assert betainc_regularized(2.0, 3.0, 0.0) == 0.0
        assert betainc_regularized(2.0, 3.0, 1.0) == 1.0

    def test_symmetry(self):
        # I_x(a, b) = 1 - I_{1-x}(b, a)
        for a, b, x in [(0.5, 0.5, 0.3), (2, 5, 0.7), (10, 0.5, 0.2)]:
            left = betainc_regularized(a, b, x)
            right = 1.0 - betainc_regularized(b, a, 1.0 - x)
            assert left == pytest.approx(right, abs=1e-13)

    def test_uniform_case(self):
        # I_x(1, 1) = x
        for x in [0.1, 0.42, 0.9]:
            assert betainc_regularized(1.0, 1.0, x) == pytest.approx(x, abs=1e-13)


class TestStudentT:
    def test_median(self):
        for df in [1, 2.5, 30]:
            assert student_t_sf(0.0, df) == pytest.approx(0.5, abs=1e-13)

    def test_cauchy_df1(self):
        # t(1) is Cauchy: P(T > t) = 1/2 - arctan(t)/pi
        for t in [0.5, 1.0, 3.0]:
            expected = 0.5 - math.atan(t) / math.pi
            assert student_t_sf(t, 1.0) == pytest.approx(expected, abs=1e-12)

    def test_negative_argument(self):
        assert student_t_sf(-1.3, 7) == pytest.approx(
            1.0 - student_t_sf(1.3, 7), abs=1e-13
        )

    def test_large_df_approaches_normal(self):
        # standard normal upper tail at 1.96 is about 0.025
        assert student_t_sf(1.96, 100000) == pytest.approx(0.025, abs=1e-4)


class TestWelch:
    def test_identical_samples(self):
        a = [0.1, 0.2, 0.3, 0.4]
        result = welch_t_test(a, list(a))
        assert not result.significant
        assert result.p == pytest.approx(1.0)

    def test_clearly_separated(self):
        rng = random.Random(5)
        a = [rng.gauss(0.0, 1.0) for _ in range(400)]
        b = [rng.gauss(1.0, 1.0) for _ in range(400)]
        assert welch_t_test(a, b).significant

    def test_degenerate_constants(self):
        same = welch_t_test([0.5, 0.5], [0.5, 0.5, 0.5])
        assert same.p == 1.0 and not same.significant
        different = welch_t_test([0.5, 0.5], [0.7, 0.7])
        assert different.p == 0.0 and different.significant

    def test_small_samples_rejected(self):
        with pytest.raises(ValueError):
            welch_t_test([1.0], [1.0, 2.0])

    def test_mean_and_variance(self):
        assert mean([1.0, 2.0, 3.0]) == pytest.approx(2.0)
        assert sample_variance([1.0, 2.0, 3.0]) == pytest.approx(1.0)
        with pytest.raises(ValueError):
            mean([])
