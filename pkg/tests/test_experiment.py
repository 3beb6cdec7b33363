import math
from pathlib import Path

import numpy as np
import pytest
from scipy import stats as scipy_stats

from negoteam.concession import BetaClass, DeadlineClass
from negoteam.domain import group_booking_domain
from negoteam.experiment import (
    CSV_COLUMNS,
    ExperimentCell,
    grid_from_text,
    metric_avg,
    metric_min,
    opponent_half,
    rows_from_csv_text,
    rows_to_csv_text,
    run_cell,
    run_grid,
    sample_grid_teams,
    summaries_to_csv_text,
    summaries_to_tables,
    summarize,
    welch_t_test,
)
from negoteam.population import TeamClass, generate_pool
from negoteam.strategies import Strategy


@pytest.fixture(scope="module")
def domain():
    return group_booking_domain()


@pytest.fixture(scope="module")
def pool(domain):
    return generate_pool(domain, np.random.default_rng(60))


def small_cell(strategy=Strategy.RE, seed=11, reps=2, **overrides):
    kwargs = dict(
        similarity=TeamClass.VERY_SIMILAR,
        team_deadline=DeadlineClass.S,
        opp_deadline=DeadlineClass.S,
        team_size=4,
        strategy=strategy,
        team_beta=BetaClass.B,
        opp_beta=BetaClass.C,
        repetitions=reps,
        seed=seed,
    )
    kwargs.update(overrides)
    return ExperimentCell(**kwargs)


class TestMetrics:
    def test_min_and_avg(self):
        assert metric_min([0.2, 0.8]) == 0.2
        assert metric_avg([0.2, 0.8]) == pytest.approx(0.5)

    def test_all_equal(self):
        assert metric_min([0.4, 0.4, 0.4]) == 0.4
        assert metric_avg([0.4, 0.4, 0.4]) == pytest.approx(0.4)

    def test_failure_row(self):
        assert metric_min([0.0] * 4) == 0.0
        assert metric_avg([0.0] * 4) == 0.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            metric_min([])
        with pytest.raises(ValueError):
            metric_avg([])


def welch_textbook(a, b):
    """Straight transcription of the Welch formulas."""
    a, b = np.asarray(a, float), np.asarray(b, float)
    na, nb = a.size, b.size
    va, vb = a.var(ddof=1), b.var(ddof=1)
    se2 = va / na + vb / nb
    t = (a.mean() - b.mean()) / math.sqrt(se2)
    df = se2**2 / ((va / na) ** 2 / (na - 1) + (vb / nb) ** 2 / (nb - 1))
    p = 2.0 * scipy_stats.t.sf(abs(t), df)
    return t, p


class TestWelch:
    def test_identical_samples_not_significant(self):
        a = [0.1, 0.4, 0.3, 0.9]
        result = welch_t_test(a, list(a))
        assert not result.significant

    def test_separated_normals_significant(self):
        rng = np.random.default_rng(61)
        a = rng.normal(0.0, 1.0, 1000)
        b = rng.normal(1.0, 1.0, 1000)
        result = welch_t_test(a, b)
        assert result.significant
        _, p_ref = welch_textbook(a, b)
        assert result.p == pytest.approx(p_ref, rel=1e-9)

    def test_alpha_zero_never_significant(self):
        rng = np.random.default_rng(62)
        a = rng.normal(0.0, 1.0, 100)
        b = rng.normal(5.0, 1.0, 100)
        assert not welch_t_test(a, b, alpha=0.0).significant

    def test_matches_textbook_on_random_draws(self):
        rng = np.random.default_rng(63)
        for _ in range(50):
            a = rng.normal(rng.uniform(-1, 1), rng.uniform(0.5, 2), 40)
            b = rng.normal(rng.uniform(-1, 1), rng.uniform(0.5, 2), 55)
            ours = welch_t_test(a, b)
            _, p_ref = welch_textbook(a, b)
            assert ours.p == pytest.approx(p_ref, rel=1e-9)

    def test_degenerate_equal_constants(self):
        result = welch_t_test([0.5, 0.5, 0.5], [0.5, 0.5])
        assert result.p == 1.0 and not result.significant

    def test_too_small_samples_rejected(self):
        with pytest.raises(ValueError):
            welch_t_test([1.0], [1.0, 2.0])


class TestRunCell:
    def test_row_count_and_identity(self, domain, pool):
        cell = small_cell(reps=2)
        teams = [(0, 1, 2, 3), (4, 5, 6, 7), (8, 9, 10, 11)]
        rows = run_cell(cell, domain, pool, teams, run_id="t")
        assert len(rows) == 3 * 12 * 2  # teams x half pool x repetitions
        for row in rows:
            assert row.similarity_class == "very_similar"
            assert row.strategy == "RE"
            assert row.team_size == 4
            assert row.min_utility <= row.avg_utility + 1e-12
            assert 5 <= row.team_deadline <= 10
            assert row.rounds <= min(row.team_deadline, row.opp_deadline) + 1
            assert (row.success == 1) == row.status.startswith("agreement")

    def test_opponent_half_is_half_rounded_down(self):
        cell = small_cell()
        half = opponent_half(cell, 25)
        assert len(half) == 12
        assert len(set(half)) == 12

    def test_deterministic(self, domain, pool):
        cell = small_cell(strategy=Strategy.SSV, reps=1)
        teams = [(0, 1, 2, 3)]
        first = run_cell(cell, domain, pool, teams)
        second = run_cell(cell, domain, pool, teams)
        assert first == second


class TestRunGrid:
    def grid_cells(self):
        return [
            small_cell(strategy=Strategy.RE, reps=1),
            small_cell(strategy=Strategy.SSV, reps=1),
        ]

    def test_parallel_matches_sequential(self, domain, pool):
        cells = self.grid_cells()
        seq = run_grid(cells, domain, pool, master_seed=5, teams_per_class=4, jobs=1)
        par = run_grid(cells, domain, pool, master_seed=5, teams_per_class=4, jobs=4)
        assert rows_to_csv_text(seq) == rows_to_csv_text(par)

    def test_rerun_is_byte_identical(self, domain, pool):
        cells = self.grid_cells()
        a = run_grid(cells, domain, pool, master_seed=6, teams_per_class=3)
        b = run_grid(cells, domain, pool, master_seed=6, teams_per_class=3)
        assert rows_to_csv_text(a) == rows_to_csv_text(b)

    def test_shared_rosters_across_cells(self, domain, pool):
        cells = self.grid_cells()
        rosters = sample_grid_teams(cells, pool, master_seed=7, count=5)
        assert list(rosters) == [(TeamClass.VERY_SIMILAR, 4)]
        assert len(rosters[(TeamClass.VERY_SIMILAR, 4)]) == 5


class TestCsv:
    def test_round_trip(self, domain, pool):
        cell = small_cell(reps=1)
        rows = run_cell(cell, domain, pool, [(0, 1, 2, 3)], run_id="rt")
        text = rows_to_csv_text(rows)
        assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
        back = rows_from_csv_text(text)
        assert back == rows

    def test_missing_column_rejected(self):
        with pytest.raises(ValueError, match="missing columns"):
            rows_from_csv_text("run_id,seed\nx,1\n")


class TestSummarize:
    def test_single_cell_means(self, domain, pool):
        cell = small_cell(reps=1)
        rows = run_cell(cell, domain, pool, [(0, 1, 2, 3), (4, 5, 6, 7)])
        summaries = summarize(rows)
        assert len(summaries) == 1
        s = summaries[0]
        assert s.sample_count == len(rows)
        assert s.mean_min == pytest.approx(np.mean([r.min_utility for r in rows]))
        assert s.mean_avg == pytest.approx(np.mean([r.avg_utility for r in rows]))
        assert s.mean_min <= s.mean_avg + 1e-12
        assert s.best_equiv_min and s.best_equiv_avg

    def test_identical_distributions_both_flagged(self, domain, pool):
        # same strategy under two labels: build rows by renaming strategy
        cell_a = small_cell(strategy=Strategy.SSV, reps=1)
        rows_a = run_cell(cell_a, domain, pool, [(0, 1, 2, 3), (4, 5, 6, 7)])
        from dataclasses import replace

        rows_b = [replace(r, strategy="SBV") for r in rows_a]
        summaries = summarize(list(rows_a) + rows_b)
        assert all(s.best_equiv_min and s.best_equiv_avg for s in summaries)

    def test_grouping_modes(self, domain, pool):
        cell_a = small_cell(strategy=Strategy.RE, team_beta=BetaClass.B, reps=1)
        cell_b = small_cell(strategy=Strategy.RE, team_beta=BetaClass.VC, reps=1)
        rows = run_cell(cell_a, domain, pool, [(0, 1, 2, 3)]) + run_cell(
            cell_b, domain, pool, [(0, 1, 2, 3)]
        )
        by_strategy = summarize(rows, grouping="strategy")
        assert all(s.best_equiv_min for s in by_strategy)  # groups of one
        joint = summarize(rows, grouping="strategy_beta")
        assert len(joint) == 2

    def test_tables_render(self, domain, pool):
        cell = small_cell(reps=1)
        rows = run_cell(cell, domain, pool, [(0, 1, 2, 3)])
        text = summaries_to_tables(summarize(rows))
        assert "environment:" in text and "RE b=B" in text
        csv_text = summaries_to_csv_text(summarize(rows))
        assert csv_text.startswith("similarity_class")


class TestGridFiles:
    def test_product_expansion(self):
        text = """
[defaults]
teams = 10
repetitions = 2

[cells]
similarity = very_similar, very_dissimilar
team_deadline = S
opp_deadline = S
team_size = 4
strategy = RE, FUM
team_beta = B
opp_beta = VC, B
"""
        spec = grid_from_text(text)
        assert spec.teams_per_class == 10
        assert len(spec.cells) == 2 * 2 * 2
        assert all(c.repetitions == 2 for c in spec.cells)

    def test_missing_key_rejected(self):
        with pytest.raises(ValueError, match="missing keys"):
            grid_from_text("[cells]\nsimilarity = very_similar\n")

    def test_no_cells_rejected(self):
        with pytest.raises(ValueError, match="no cells"):
            grid_from_text("[defaults]\nteams = 5\n")

    def test_bad_enum_value_rejected(self):
        text = """
[cells]
similarity = kind_of_similar
team_deadline = S
opp_deadline = S
team_size = 4
strategy = RE
team_beta = B
opp_beta = B
"""
        with pytest.raises(ValueError):
            grid_from_text(text)


class TestJobsEnvVar:
    def test_default_and_override(self, monkeypatch):
        from negoteam.experiment import JOBS_ENV_VAR, default_jobs

        monkeypatch.delenv(JOBS_ENV_VAR, raising=False)
        assert default_jobs() == 1
        monkeypatch.setenv(JOBS_ENV_VAR, "6")
        assert default_jobs() == 6
        monkeypatch.setenv(JOBS_ENV_VAR, "not-a-number")
        assert default_jobs() == 1


class TestGridPresets:
    PRESETS = Path(__file__).resolve().parent.parent / "grids"

    def test_all_presets_parse(self):
        from negoteam.experiment import load_grid

        presets = sorted(self.PRESETS.glob("*.grid"))
        assert len(presets) == 5
        for preset in presets:
            spec = load_grid(preset)
            assert spec.cells and spec.teams_per_class == 100

    def test_table2_has_16_configs_per_environment(self):
        from collections import Counter

        from negoteam.experiment import load_grid

        spec = load_grid(self.PRESETS / "table2_rounds.grid")
        assert len(spec.cells) == 128
        per_env = Counter(
            (c.similarity, c.opp_beta) for c in spec.cells
        )
        assert all(n == 16 for n in per_env.values())  # strategy x team beta
