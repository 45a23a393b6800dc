import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from meterbench.scoring import (DegenerateTruth, RAE_CAP, ScoreReport, final_score,
                                leaderboard, month_rae, report_from_json,
                                report_to_json, score_forecast, total_rae, year_rae)
from tests.oracle import oracle_month_rae, oracle_total_rae, oracle_year_rae


def _instance(rng, n):
    truth = {f"M{i}": rng.uniform(1, 50, 12) for i in range(n)}
    preds = {m: v * rng.uniform(0.5, 1.5, 12) for m, v in truth.items()}
    return preds, truth


def test_matches_oracle_on_random_instances():
    rng = np.random.default_rng(0)
    for _ in range(50):
        preds, truth = _instance(rng, int(rng.integers(2, 21)))
        t = {m: list(v) for m, v in truth.items()}
        p = {m: list(v) for m, v in preds.items()}
        assert year_rae(preds, truth) == pytest.approx(oracle_year_rae(p, t), abs=1e-12)
        assert month_rae(preds, truth) == pytest.approx(oracle_month_rae(p, t), abs=1e-12)
        report = total_rae(preds, truth)
        assert report.total_rae == pytest.approx(oracle_total_rae(p, t), abs=1e-12)


def test_perfect_predictions_score_zero():
    rng = np.random.default_rng(1)
    truth = {f"M{i}": rng.uniform(1, 50, 12) for i in range(6)}
    report = total_rae(truth, truth)
    assert report.year_rae == 0.0
    assert report.month_rae == 0.0
    assert report.total_rae == 0.0


def test_flat_predictor_month_rae_one():
    rng = np.random.default_rng(2)
    truth = {f"M{i}": rng.uniform(1, 50, 12) for i in range(5)}
    flat = {m: np.full(12, np.abs(v).mean()) for m, v in truth.items()}
    report = total_rae(flat, truth)
    assert len(report.per_meter_month_rae) == 5
    for value in report.per_meter_month_rae.values():
        assert value == pytest.approx(1.0, abs=1e-12)


def test_hand_computed_year_anchor():
    truth = {"A": np.full(12, 100.0 / 12), "B": np.full(12, 200.0 / 12)}
    preds = {"A": np.full(12, 110.0 / 12), "B": np.full(12, 190.0 / 12)}
    assert year_rae(preds, truth) == pytest.approx(0.2, abs=1e-12)


def test_total_is_exact_mean():
    rng = np.random.default_rng(3)
    preds, truth = _instance(rng, 8)
    report = total_rae(preds, truth)
    assert report.total_rae == (report.year_rae + report.month_rae) / 2.0
    with pytest.raises(ValueError):
        ScoreReport("x", 0.4, 0.6, 0.55)


@given(st.integers(0, 2**32 - 1), st.floats(0.1, 40.0))
@settings(max_examples=50, deadline=None)
def test_scale_invariance(seed, scale):
    rng = np.random.default_rng(seed)
    preds, truth = _instance(rng, 5)
    base = total_rae(preds, truth)
    scaled = total_rae({m: v * scale for m, v in preds.items()},
                       {m: v * scale for m, v in truth.items()})
    assert scaled.year_rae == pytest.approx(base.year_rae, rel=1e-9)
    assert scaled.month_rae == pytest.approx(base.month_rae, rel=1e-9)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_meter_permutation_invariance(seed):
    rng = np.random.default_rng(seed)
    preds, truth = _instance(rng, 6)
    renamed_p = {f"Z{m}": v for m, v in preds.items()}
    renamed_t = {f"Z{m}": v for m, v in truth.items()}
    assert total_rae(renamed_p, renamed_t).total_rae == pytest.approx(
        total_rae(preds, truth).total_rae, abs=1e-12)


def test_degenerate_truth_raises():
    flat_truth = {"A": np.full(12, 5.0), "B": np.full(12, 5.0)}
    preds = {"A": np.full(12, 4.0), "B": np.full(12, 6.0)}
    with pytest.raises(DegenerateTruth):
        month_rae(preds, flat_truth)
    # identical yearly totals -> zero spread around the absolute center
    same_total = {"A": np.full(12, 5.0), "B": np.full(12, 5.0)}
    with pytest.raises(DegenerateTruth):
        year_rae(preds, same_total)


def test_degenerate_meters_skipped_and_reported():
    rng = np.random.default_rng(4)
    truth = {"A": rng.uniform(1, 10, 12), "B": np.full(12, 3.0),
             "C": rng.uniform(1, 10, 12)}
    preds = {m: v + 1.0 for m, v in truth.items()}
    report = total_rae(preds, truth)
    skipped = dict(report.skipped_meters)
    assert set(skipped) == {"B"}
    assert set(report.per_meter_month_rae) == {"A", "C"}


def test_requires_two_meters_and_alignment():
    truth = {"A": np.ones(12) * np.arange(1, 13)}
    with pytest.raises(ValueError):
        year_rae(truth, truth)
    with pytest.raises(ValueError):
        year_rae({"A": np.ones(12), "B": np.ones(12)}, {"A": np.ones(12)})


def test_table_arithmetic():
    a = ScoreReport("a", 0.2864, 1.0078, (0.2864 + 1.0078) / 2)
    b = ScoreReport("b", 0.3333, 1.4062, (0.3333 + 1.4062) / 2)
    assert a.total_rae == pytest.approx(0.6471, abs=5e-5)
    assert b.total_rae == pytest.approx(0.8697, abs=5e-5)


def _report(pid, y, m):
    return ScoreReport(pid, y, m, (y + m) / 2.0)


def test_leaderboard_sorted():
    rows = [_report("b", 0.4, 0.6), _report("a", 0.2, 0.4), _report("c", 0.2, 0.4)]
    assert [r.pipeline_id for r in leaderboard(rows)] == ["a", "c", "b"]


def test_final_score_formula():
    report = ScoreReport("x", 0.9, 0.9986, (0.9 + 0.9986) / 2)
    score = final_score(report, [3.79] * 10)
    expected = 10 * (0.5 * (1 - 0.9493 / RAE_CAP) + 0.5 * (3.79 - 1) / 4)
    assert score == pytest.approx(expected)
    assert round(score, 2) == 6.11
    # accuracy term floors at zero beyond the cap
    bad = ScoreReport("y", 3.0, 3.0, 3.0)
    assert final_score(bad, [1.0] * 10) == 0.0
    assert final_score(bad, [5.0] * 10) == pytest.approx(5.0)


def test_final_score_validation():
    report = ScoreReport("x", 0.5, 0.5, 0.5)
    with pytest.raises(ValueError):
        final_score(report, [])
    with pytest.raises(ValueError):
        final_score(report, [0.5] * 10)
    with pytest.raises(ValueError):
        final_score(report, [3.0] * 10, w_acc=0.7, w_exp=0.7)


def test_report_json_round_trip(small_cohort, small_prep):
    from meterbench.forecast import run_pipeline
    fc = run_pipeline("naive", small_cohort, seed=0, prep=small_prep)
    report = score_forecast(fc, small_cohort.ground_truth_2018)
    back = report_from_json(json.loads(json.dumps(report_to_json(report))))
    assert back == report
