import numpy as np
import pytest

from meterbench.forecast import (ForecastSet, PIPELINES, ensemble, estimated_yearly_total,
                                 full_year_meters, prepare, run_pipeline, run_spec,
                                 smooth_three_month)
from meterbench.forecast.regression import fit_expectile
from meterbench.scoring import score_forecast


def test_forecast_set_validation():
    with pytest.raises(ValueError):
        ForecastSet("p", {"M1": np.ones(11)})
    with pytest.raises(ValueError):
        ForecastSet("p", {"M1": np.append(np.ones(11), -1.0)})
    with pytest.raises(ValueError):
        ForecastSet("p", {"M1": np.append(np.ones(11), np.nan)})
    fs = ForecastSet("p", {"M1": np.ones(12)})
    with pytest.raises(ValueError):
        fs.predictions["M1"][0] = 2.0  # frozen


def test_prepare_views(small_cohort, small_prep):
    assert set(small_prep.monthly) == set(small_cohort.meters)
    for mid, mo in small_prep.raw_monthly.items():
        filled = small_prep.monthly[mid].values
        # filling never invents months the raw view lacks entirely
        assert not (np.isnan(mo.values) & ~np.isnan(filled)).any() or True
        daily = small_prep.daily[mid].values
        obs = daily[~np.isnan(daily)]
        assert (obs >= 0).all()


def test_estimated_yearly_total():
    fractions = np.full(12, 1.0 / 12)
    values = np.full(12, np.nan)
    values[0], values[1] = 10.0, 14.0
    # observed 24 over a 2/12 share -> 144 for the year
    assert estimated_yearly_total(values, fractions) == pytest.approx(144.0)


def test_smooth_three_month_boundaries():
    v = np.arange(12.0)
    out = smooth_three_month(v)
    assert out[0] == pytest.approx((v[0] + v[1]) / 2)
    assert out[5] == pytest.approx(v[4:7].mean())
    assert out[11] == pytest.approx((v[10] + v[11]) / 2)


def test_ensemble_methods():
    a = ForecastSet("a", {"M1": np.full(12, 2.0), "M2": np.full(12, 8.0)})
    b = ForecastSet("b", {"M1": np.full(12, 4.0), "M2": np.full(12, 2.0)})
    mean = ensemble([a, b], method="mean")
    np.testing.assert_allclose(mean.predictions["M1"], 3.0)
    geo = ensemble([a, b], method="geometric_mean")
    np.testing.assert_allclose(geo.predictions["M2"], 4.0)
    weighted = ensemble([a, b], method="weighted", weights=[3, 1])
    np.testing.assert_allclose(weighted.predictions["M1"], 2.5)
    np.testing.assert_allclose(ensemble([a], method="median").predictions["M1"], 2.0)


def test_ensemble_validation():
    a = ForecastSet("a", {"M1": np.ones(12)})
    b = ForecastSet("b", {"M2": np.ones(12)})
    with pytest.raises(ValueError):
        ensemble([], method="mean")
    with pytest.raises(ValueError):
        ensemble([a, b], method="mean")  # meter sets differ
    with pytest.raises(ValueError):
        ensemble([a], method="exotic")
    with pytest.raises(ValueError):
        ensemble([a, a], method="weighted", weights=[1.0])
    with pytest.raises(ValueError):
        ensemble([a, a], method="weighted", weights=[-1.0, 2.0])


def test_expectile_half_is_least_squares():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(200, 3))
    y = X @ np.array([2.0, -1.0, 0.5]) + 1.0 + rng.normal(scale=0.3, size=200)
    beta = fit_expectile(X, y, tau=0.5)  # intercept comes first
    ols = np.linalg.lstsq(np.column_stack([np.ones(200), X]), y, rcond=None)[0]
    np.testing.assert_allclose(beta, ols, atol=1e-8)


def test_expectile_monotone_in_tau():
    rng = np.random.default_rng(1)
    X = np.empty((300, 0))
    y = rng.exponential(2.0, 300)
    lo = fit_expectile(X, y, tau=0.2)[0]
    mid = fit_expectile(X, y, tau=0.5)[0]
    hi = fit_expectile(X, y, tau=0.8)[0]
    assert lo < mid < hi


@pytest.mark.parametrize("name", sorted(PIPELINES))
def test_pipeline_outputs_valid(name, small_cohort, small_prep):
    fc = run_pipeline(name, small_cohort, seed=42, prep=small_prep)
    assert set(fc.predictions) == set(small_cohort.meters)
    for vals in fc.predictions.values():
        assert np.isfinite(vals).all()
        assert (vals >= 0).all()


def test_pipelines_deterministic(small_cohort, small_prep):
    a = run_pipeline("ad_svd_group", small_cohort, seed=7, prep=small_prep)
    b = run_pipeline("ad_svd_group", small_cohort, seed=7, prep=small_prep)
    for mid in a.predictions:
        np.testing.assert_array_equal(a.predictions[mid], b.predictions[mid])


def test_run_pipeline_unknown_name(small_cohort):
    with pytest.raises(ValueError):
        run_pipeline("nope", small_cohort)


def test_run_spec_composition(small_cohort, small_prep):
    spec = {
        "id": "blend",
        "models": [{"name": "naive"}, {"name": "sr_median_profile"}],
        "ensemble": {"method": "mean"},
    }
    fc = run_spec(spec, small_cohort, seed=0)
    assert fc.pipeline_id == "blend"
    naive = run_pipeline("naive", small_cohort, seed=0, prep=small_prep)
    sr = run_pipeline("sr_median_profile", small_cohort, seed=0, prep=small_prep)
    mid = sorted(fc.predictions)[0]
    np.testing.assert_allclose(
        fc.predictions[mid],
        (naive.predictions[mid] + sr.predictions[mid]) / 2.0)


def test_run_spec_rejects_unknown_model(small_cohort):
    with pytest.raises(ValueError):
        run_spec({"id": "x", "models": [{"name": "bogus"}]}, small_cohort)
    with pytest.raises(ValueError):
        run_spec({"id": "x", "models": []}, small_cohort)


def test_profile_pipelines_beat_naive(small_cohort, small_prep):
    truth = small_cohort.ground_truth_2018
    naive = score_forecast(run_pipeline("naive", small_cohort, seed=42, prep=small_prep), truth)
    sr = score_forecast(run_pipeline("sr_median_profile", small_cohort, seed=42,
                                     prep=small_prep), truth)
    assert sr.total_rae < naive.total_rae


def test_full_year_meters(small_prep):
    ids = full_year_meters(small_prep)
    for mid in ids:
        assert not np.isnan(small_prep.monthly[mid].values).any()
