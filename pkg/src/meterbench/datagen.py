"""Deterministic synthetic cohort generator.

Each meter is an independent latent household: a monthly consumption scale,
a heating sensitivity coupling it to daily temperature, and an intraday
usage profile. 2017 half-hourly readings are masked by a sign-up month plus
random dead blocks sized to hit an exact unavailability target; 2018 ground
truth comes from the same latent household driven by 2018 weather.

All randomness is derived from numpy SeedSequence substreams keyed by
(seed, namespace, meter index), so generation is reproducible and per-meter
work could run in parallel without changing the output.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .core import calendar as cal
from .core.types import (
    Cohort,
    MeterSeries,
    MonthlySeries,
    SURVEY_FIELDS,
    SurveyRecord,
    WeatherSeries,
    WeatherYear,
)

T_REF_C = 15.0

# Per-question answered counts at the canonical 3,248-meter size.
CANONICAL_N = 3248
CANONICAL_RESPONDENTS = 2144
CANONICAL_ANSWER_COUNTS = {
    "dwelling_type": 1702,
    "num_occupants": 74,
    "num_bedrooms": 1859,
    "heating_fuel": 78,
    "hot_water_fuel": 76,
    "boiler_age": 70,
    "loft_insulation": 70,
    "wall_insulation": 73,
    "heating_temperature": 76,
    "efficient_lighting": 70,
    "dishwasher": 70,
    "freezer": 73,
    "fridge_freezer": 76,
    "refrigerator": 76,
    "tumble_dryer": 72,
    "washing_machine": 70,
    "game_console": 70,
    "laptop": 69,
    "pc": 70,
    "router": 70,
    "set_top_box": 75,
    "tablet": 69,
    "tv": 70,
}

DEFAULT_RESPONSE_RATES = {
    q: count / CANONICAL_N for q, count in CANONICAL_ANSWER_COUNTS.items()
}

# Substream namespaces; never reuse across purposes.
_NS_WEATHER = 0
_NS_COHORT = 1
_NS_METER = 2
_NS_SURVEY = 3
_NS_MASK = 4


@dataclass(frozen=True)
class CohortConfig:
    n_meters: int = CANONICAL_N
    seed: int = 42
    signup_distribution: tuple = (
        0.40, 0.04, 0.04, 0.04, 0.05, 0.05, 0.05, 0.06, 0.06, 0.06, 0.07, 0.08,
    )
    unavailability_profile: tuple = ((0.30, 400), (0.50, 300), (0.70, 534), (0.90, 200))
    survey_response_rates: dict = field(default_factory=lambda: dict(DEFAULT_RESPONSE_RATES))
    respondent_rate: float = CANONICAL_RESPONDENTS / CANONICAL_N
    household_scale_range: tuple = (60.0, 500.0)
    temperature_coupling: tuple = (0.1, 1.5)
    noise_level: float = 0.1

    def __post_init__(self):
        if self.n_meters < 1:
            raise ValueError("n_meters must be > 0")
        dist = tuple(float(p) for p in self.signup_distribution)
        if len(dist) != 12 or any(p < 0 for p in dist):
            raise ValueError("signup_distribution needs 12 non-negative probabilities")
        if abs(sum(dist) - 1.0) > 1e-9:
            raise ValueError("signup_distribution must sum to 1")
        object.__setattr__(self, "signup_distribution", dist)
        profile = tuple((float(f), int(c)) for f, c in self.unavailability_profile)
        for frac, count in profile:
            if not 0.0 < frac < 1.0 or count < 0:
                raise ValueError("unavailability fractions must lie in (0,1), counts >= 0")
        if sum(c for _, c in profile) > self.n_meters:
            raise ValueError("unavailability counts exceed n_meters")
        object.__setattr__(self, "unavailability_profile", profile)
        unknown = set(self.survey_response_rates) - set(SURVEY_FIELDS)
        if unknown:
            raise ValueError(f"unknown survey questions: {sorted(unknown)}")
        for q, rate in self.survey_response_rates.items():
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"response rate for {q} outside [0,1]")
        if not 0.0 <= self.respondent_rate <= 1.0:
            raise ValueError("respondent_rate outside [0,1]")
        lo, hi = self.household_scale_range
        if not 0 < lo <= hi:
            raise ValueError("household_scale_range must be positive and ordered")
        lo, hi = self.temperature_coupling
        if not 0 <= lo <= hi:
            raise ValueError("temperature_coupling must be non-negative and ordered")
        if self.noise_level < 0:
            raise ValueError("noise_level must be >= 0")

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "CohortConfig":
        raw = json.loads(text)
        for key in ("signup_distribution", "household_scale_range", "temperature_coupling"):
            if key in raw:
                raw[key] = tuple(raw[key])
        if "unavailability_profile" in raw:
            raw["unavailability_profile"] = tuple(tuple(p) for p in raw["unavailability_profile"])
        return cls(**raw)


def _rng(seed: int, *spawn_key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=spawn_key))


def generate_weather(seed: int) -> WeatherSeries:
    """Sinusoidal annual temperature with daily noise for 2017 and 2018."""

    def one_year(year: int, rng: np.random.Generator) -> WeatherYear:
        days = np.arange(cal.DAYS_PER_YEAR)
        base = 10.0 - 7.5 * np.cos(2.0 * np.pi * (days + 10) / cal.DAYS_PER_YEAR)
        avg = base + rng.normal(0.0, 1.8, cal.DAYS_PER_YEAR)
        below = rng.uniform(1.0, 4.0, cal.DAYS_PER_YEAR)
        above = rng.uniform(1.0, 4.0, cal.DAYS_PER_YEAR)
        return WeatherYear(year, avg, avg - below, avg + above)

    r17 = _rng(seed, _NS_WEATHER, 2017)
    r18 = _rng(seed, _NS_WEATHER, 2018)
    return WeatherSeries(one_year(2017, r17), one_year(2018, r18))


def _ordered_category(z: float, labels: tuple) -> str:
    idx = min(int(np.clip(z, 0.0, 0.999999) * len(labels)), len(labels) - 1)
    return labels[idx]


def _survey_answers(scale_z: float, sens_z: float, rng: np.random.Generator) -> dict:
    """Full answer sheet for one household; answers track the latent scale."""
    zn = float(np.clip(scale_z + rng.normal(0.0, 0.15), 0.0, 1.0))
    if rng.random() < 0.08:
        dwelling = "bungalow"
    else:
        dwelling = _ordered_category(zn, ("flat", "terraced", "semi-detached", "detached"))
    fuels = ("gas", "electric", "oil", "other")
    heating_p = (0.70 - 0.35 * sens_z, 0.15 + 0.35 * sens_z, 0.10, 0.05)
    water_p = (0.60 - 0.20 * sens_z, 0.25 + 0.20 * sens_z, 0.10, 0.05)
    return {
        "dwelling_type": dwelling,
        "num_occupants": 1 + int(rng.binomial(5, 0.15 + 0.5 * scale_z)),
        "num_bedrooms": 1 + int(rng.binomial(4, 0.10 + 0.6 * scale_z)),
        "heating_fuel": str(rng.choice(fuels, p=heating_p)),
        "hot_water_fuel": str(rng.choice(fuels, p=water_p)),
        "boiler_age": str(rng.choice(
            ("under 5 years", "5-10 years", "10-15 years", "over 15 years"),
            p=(0.30, 0.30, 0.25, 0.15))),
        "loft_insulation": str(rng.choice(("none", "partial", "full"), p=(0.2, 0.3, 0.5))),
        "wall_insulation": str(rng.choice(("none", "cavity", "solid"), p=(0.3, 0.5, 0.2))),
        "heating_temperature": round(float(np.clip(rng.normal(18.5 + 2.5 * sens_z, 1.2), 14.0, 25.0)), 1),
        "efficient_lighting": round(float(np.clip(rng.normal(60.0 - 20.0 * scale_z, 20.0), 0.0, 100.0)), 1),
        "dishwasher": int(rng.random() < 0.20 + 0.5 * scale_z),
        "freezer": int(rng.poisson(0.3 + 0.5 * scale_z)),
        "fridge_freezer": 1 + int(rng.poisson(0.1)),
        "refrigerator": int(rng.poisson(0.5 + 0.4 * scale_z)),
        "tumble_dryer": int(rng.random() < 0.25 + 0.4 * scale_z),
        "washing_machine": int(rng.random() < 0.95),
        "game_console": int(rng.poisson(0.2 + 0.8 * scale_z)),
        "laptop": int(rng.poisson(0.5 + 1.2 * scale_z)),
        "pc": int(rng.poisson(0.3 + 0.9 * scale_z)),
        "router": 1 + int(rng.poisson(0.15)),
        "set_top_box": int(rng.poisson(0.4 + 0.8 * scale_z)),
        "tablet": int(rng.poisson(0.4 + 1.1 * scale_z)),
        "tv": 1 + int(rng.poisson(0.8 + 1.7 * scale_z)),
    }


def _latent_daily(scale_daily, sens, weekend_lift, noise_level, weather_year, rng):
    days = np.arange(cal.DAYS_PER_YEAR)
    seasonal = 1.0 + 0.2 * np.cos(2.0 * np.pi * (days + 10) / cal.DAYS_PER_YEAR)
    weekend = (cal.weekdays_of_year(weather_year.year) >= 5) * weekend_lift
    heating = (sens / scale_daily) * np.maximum(0.0, T_REF_C - weather_year.temp_avg)
    noise = rng.normal(0.0, noise_level, cal.DAYS_PER_YEAR)
    return np.maximum(scale_daily * (seasonal + weekend + heating + noise), 0.0)


def _intraday_matrix(morning_w, evening_w, rng):
    slots = np.arange(cal.SLOTS_PER_DAY, dtype=float)
    base = (
        0.6
        + morning_w * np.exp(-0.5 * ((slots - 16.0) / 3.0) ** 2)
        + evening_w * np.exp(-0.5 * ((slots - 38.0) / 4.0) ** 2)
    )
    jitter = np.exp(rng.normal(0.0, 0.25, (cal.DAYS_PER_YEAR, cal.SLOTS_PER_DAY)))
    mat = base[None, :] * jitter
    return mat / mat.sum(axis=1, keepdims=True)


def _mask_to_target(values: np.ndarray, target_missing: int, rng: np.random.Generator) -> None:
    """Mask slots until exactly target_missing are NaN.

    Most of the budget extends the leading dead run (cold-start shape);
    the rest lands as whole-day blocks kept out of December, so every
    meter retains at least one recoverable trailing month.
    """
    presignup = int(np.isnan(values).sum())
    need = target_missing - presignup
    if need <= 0:
        return
    dec_start = int(cal.MONTH_START_DAY[11])
    presignup_days = presignup // cal.SLOTS_PER_DAY
    share = rng.uniform(0.55, 0.9)
    lead_days = min(int(share * need) // cal.SLOTS_PER_DAY,
                    max(dec_start - presignup_days, 0))
    values[presignup: presignup + lead_days * cal.SLOTS_PER_DAY] = np.nan
    left = need - lead_days * cal.SLOTS_PER_DAY
    days = values.reshape(cal.DAYS_PER_YEAR, cal.SLOTS_PER_DAY)
    while left > 0:
        eligible = np.flatnonzero(~np.all(np.isnan(days[:dec_start]), axis=1))
        if not len(eligible):
            eligible = np.flatnonzero(~np.all(np.isnan(days), axis=1))
        pos = int(rng.integers(len(eligible)))
        for d in eligible[pos: pos + int(rng.integers(1, 8))]:
            block = days[d]
            present_idx = np.flatnonzero(~np.isnan(block))[:left]
            block[present_idx] = np.nan
            left -= len(present_idx)
            if left == 0:
                break


def generate_cohort(config: Optional[CohortConfig] = None) -> Cohort:
    config = config or CohortConfig()
    n = config.n_meters
    weather = generate_weather(config.seed)
    width = max(4, len(str(n)))
    meter_ids = [f"M{i + 1:0{width}d}" for i in range(n)]

    crng = _rng(config.seed, _NS_COHORT)
    signup = crng.choice(12, size=n, p=config.signup_distribution)
    presignup_slots = cal.MONTH_START_DAY[signup] * cal.SLOTS_PER_DAY

    # Exact-count bucket assignment, smallest fraction first so tight budgets
    # are filled while eligible meters remain.
    target_of = np.array(presignup_slots)
    order = np.argsort([f for f, _ in config.unavailability_profile], kind="stable")
    assigned = np.zeros(n, dtype=bool)
    for b in order:
        frac, count = config.unavailability_profile[b]
        target = int(round(frac * cal.SLOTS_PER_YEAR))
        eligible = np.flatnonzero(~assigned & (presignup_slots <= target))
        if len(eligible) < count:
            raise ValueError(
                f"unavailability bucket {frac:.2f} needs {count} meters but only "
                f"{len(eligible)} have pre-signup missingness <= the target"
            )
        chosen = crng.choice(eligible, size=count, replace=False)
        assigned[chosen] = True
        target_of[chosen] = target

    n_respondents = int(round(config.respondent_rate * n))
    respondents = crng.choice(n, size=n_respondents, replace=False)
    answered_by: dict = {q: set() for q in SURVEY_FIELDS}
    for q in SURVEY_FIELDS:
        rate = config.survey_response_rates.get(q, 0.0)
        count = int(round(rate * n))
        if count > n_respondents:
            raise ValueError(f"question {q}: answer count {count} exceeds respondent pool")
        if count:
            answered_by[q] = set(crng.choice(respondents, size=count, replace=False).tolist())

    scale_lo, scale_hi = config.household_scale_range
    sens_lo, sens_hi = config.temperature_coupling
    meters = {}
    truth = {}
    survey = {}
    for i, mid in enumerate(meter_ids):
        rng = _rng(config.seed, _NS_METER, i)
        scale_month = rng.uniform(scale_lo, scale_hi)
        sens = rng.uniform(sens_lo, sens_hi)
        weekend_lift = rng.uniform(0.05, 0.30)
        morning_w = rng.uniform(0.5, 2.0)
        evening_w = rng.uniform(0.5, 2.0)
        scale_daily = scale_month * 12.0 / cal.DAYS_PER_YEAR

        daily17 = _latent_daily(scale_daily, sens, weekend_lift, config.noise_level,
                                weather.y2017, rng)
        values = (daily17[:, None] * _intraday_matrix(morning_w, evening_w, rng)).reshape(-1)
        daily18 = _latent_daily(scale_daily, sens, weekend_lift, config.noise_level,
                                weather.y2018, rng)
        truth[mid] = MonthlySeries(mid, np.add.reduceat(daily18, cal.MONTH_START_DAY))

        values[: presignup_slots[i]] = np.nan
        if target_of[i] > presignup_slots[i]:
            _mask_to_target(values, int(target_of[i]), _rng(config.seed, _NS_MASK, i))
        meters[mid] = MeterSeries(mid, values)

        questions = [q for q in SURVEY_FIELDS if i in answered_by[q]]
        if questions:
            scale_z = (scale_month - scale_lo) / max(scale_hi - scale_lo, 1e-12)
            sens_z = (sens - sens_lo) / max(sens_hi - sens_lo, 1e-12)
            sheet = _survey_answers(scale_z, sens_z, _rng(config.seed, _NS_SURVEY, i))
            survey[mid] = SurveyRecord(mid, **{q: sheet[q] for q in questions})

    return Cohort(meters=meters, weather=weather, survey=survey, ground_truth_2018=truth)
