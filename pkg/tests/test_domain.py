import numpy as np
import pytest

from negoteam.domain import (
    AttributeSpec,
    Domain,
    Orientation,
    UtilityProfile,
    denormalize,
    evaluate,
    group_booking_domain,
    ideal_offer,
    load_scenario,
    normalize,
    opponent_best_values,
    reverse_profile,
    save_scenario,
    scenario_from_text,
    team_profile,
)


def profile(weights, increasing, reservation=0.0):
    return UtilityProfile(
        weights=np.array(weights, dtype=float),
        increasing=np.array(increasing, dtype=bool),
        reservation=reservation,
    )


def random_profile(rng, n):
    e = rng.exponential(size=n)
    return profile(e / e.sum(), rng.random(n) < 0.5)


class TestEvaluate:
    def test_maximum_point(self):
        p = profile([0.5, 0.5], [True, True])
        assert evaluate(p, np.array([1.0, 1.0])) == pytest.approx(1.0)

    def test_linear_arithmetic(self):
        p = profile([0.5, 0.5], [True, True])
        assert evaluate(p, np.array([0.2, 0.8])) == pytest.approx(0.5)

    def test_midpoint_with_mixed_kinds(self):
        p = profile([0.6, 0.4], [True, False])
        assert evaluate(p, np.array([0.5, 0.5])) == pytest.approx(0.5)

    def test_dimension_mismatch(self):
        p = profile([0.5, 0.5], [True, True])
        with pytest.raises(ValueError):
            evaluate(p, np.array([0.1, 0.2, 0.3]))

    def test_range_on_random_pairs(self):
        rng = np.random.default_rng(1)
        for _ in range(10_000):
            n = int(rng.integers(1, 7))
            p = random_profile(rng, n)
            u = evaluate(p, rng.random(n))
            assert 0.0 <= u <= 1.0

    def test_monotone_in_each_coordinate(self):
        rng = np.random.default_rng(2)
        for _ in range(2_000):
            n = int(rng.integers(1, 6))
            p = random_profile(rng, n)
            x = rng.random(n)
            j = int(rng.integers(n))
            y = x.copy()
            y[j] = min(1.0, x[j] + rng.random() * (1.0 - x[j]))
            lo, hi = evaluate(p, x), evaluate(p, y)
            if p.increasing[j]:
                assert hi >= lo - 1e-12
            else:
                assert hi <= lo + 1e-12


class TestNormalization:
    def test_paper_price_extremes(self):
        d = group_booking_domain()
        lo = normalize(d, [210.0, 0.0, 0.0, 0.0])
        hi = normalize(d, [700.0, 0.0, 0.0, 0.0])
        assert lo[0] == pytest.approx(0.0)
        assert hi[0] == pytest.approx(1.0)

    def test_discount_midpoint(self):
        d = group_booking_domain()
        x = normalize(d, [210.0, 0.0, 0.0, 10.0])
        assert x[3] == pytest.approx(0.5)

    def test_round_trips(self):
        d = group_booking_domain()
        rng = np.random.default_rng(3)
        for _ in range(200):
            x = rng.random(4)
            assert np.allclose(normalize(d, denormalize(d, x)), x, atol=1e-12)
            nat = denormalize(d, rng.random(4))
            assert np.allclose(denormalize(d, normalize(d, nat)), nat, atol=1e-9)

    def test_out_of_range_rejected(self):
        d = group_booking_domain()
        with pytest.raises(ValueError):
            normalize(d, [209.0, 0.0, 0.0, 0.0])


class TestIdealAndReverse:
    def test_ideal_all_increasing(self):
        p = profile([0.5, 0.5], [True, True])
        assert np.array_equal(ideal_offer(p), [1.0, 1.0])

    def test_ideal_all_decreasing(self):
        p = profile([0.5, 0.5], [False, False])
        assert np.array_equal(ideal_offer(p), [0.0, 0.0])

    def test_ideal_mixed(self):
        p = profile([0.5, 0.5], [True, False])
        assert np.array_equal(ideal_offer(p), [1.0, 0.0])

    def test_reverse_flips_kinds(self):
        p = profile([0.5, 0.5], [True, True])
        assert not reverse_profile(p).increasing.any()

    def test_double_reversal_is_identity(self):
        rng = np.random.default_rng(4)
        p = random_profile(rng, 5)
        back = reverse_profile(reverse_profile(p))
        assert np.array_equal(back.increasing, p.increasing)
        assert np.array_equal(back.weights, p.weights)

    def test_complement_identity(self):
        # V(x) + (1 - V(x)) = 1 per attribute, so utilities of a profile
        # and its reversal always sum to one when weights coincide.
        rng = np.random.default_rng(5)
        for _ in range(500):
            p = random_profile(rng, 4)
            x = rng.random(4)
            total = evaluate(p, x) + evaluate(reverse_profile(p), x)
            assert total == pytest.approx(1.0, abs=1e-12)

    def test_ideal_utilities(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            p = random_profile(rng, 4)
            assert evaluate(p, ideal_offer(p)) == pytest.approx(1.0, abs=1e-12)
            worst = ideal_offer(reverse_profile(p))
            assert evaluate(p, worst) == pytest.approx(0.0, abs=1e-12)


class TestValidation:
    def test_weights_must_sum_to_one(self):
        with pytest.raises(ValueError):
            profile([0.5, 0.6], [True, True])

    def test_negative_weight_rejected(self):
        with pytest.raises(ValueError):
            profile([1.5, -0.5], [True, True])

    def test_attribute_needs_min_below_max(self):
        with pytest.raises(ValueError):
            AttributeSpec("x", 5.0, 5.0, Orientation.INCREASING)

    def test_duplicate_names_rejected(self):
        a = AttributeSpec("x", 0.0, 1.0, Orientation.INCREASING)
        with pytest.raises(ValueError):
            Domain(attributes=(a, a))

    def test_opponent_best_values(self):
        d = group_booking_domain()
        assert np.array_equal(opponent_best_values(d), [1.0, 1.0, 0.0, 0.0])


class TestScenarioFiles:
    def test_round_trip(self, tmp_path):
        d = group_booking_domain()
        path = tmp_path / "scenario.txt"
        save_scenario(d, path)
        back = load_scenario(path)
        assert back == d

    def test_unknown_orientation_rejected(self):
        text = "[attribute]\nname = x\nmin = 0\nmax = 1\nteam_orientation = sideways\n"
        with pytest.raises(ValueError, match="sideways"):
            scenario_from_text(text)

    def test_team_profile_uses_domain_orientation(self):
        d = group_booking_domain()
        p = team_profile(d, [0.25, 0.25, 0.25, 0.25])
        assert np.array_equal(p.increasing, [False, False, True, True])
