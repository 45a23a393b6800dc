"""Canonical data model shared by every pipeline.

Arrays use NaN for missing values. All containers freeze their arrays after
validation, so instances can be shared across parallel workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Iterator, Optional

import numpy as np

from . import calendar as cal


class MeterBenchError(Exception):
    """Base class for domain errors."""


class MalformedTimestamp(MeterBenchError):
    pass


class NegativeConsumption(MeterBenchError):
    pass


class DuplicateRow(MeterBenchError):
    pass


class UnknownSurveyMeter(MeterBenchError):
    pass


class EmptyMeter(MeterBenchError):
    pass


class DegenerateTruth(MeterBenchError):
    pass


class NoRuleCoverage(MeterBenchError):
    pass


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Reading:
    """One half-hourly observation; ``value`` is None when the slot is missing."""

    timestamp: str
    value: Optional[float]


@dataclass(frozen=True)
class MeterSeries:
    """One meter's 2017 half-hourly consumption, all 17,520 slots materialized."""

    meter_id: str
    values: np.ndarray  # (17520,), NaN = missing, else finite kWh >= 0
    signup_month: int = field(default=0)  # 1..12, derived when 0

    def __post_init__(self):
        v = _freeze(self.values)
        object.__setattr__(self, "values", v)
        if v.shape != (cal.SLOTS_PER_YEAR,):
            raise ValueError(f"meter {self.meter_id}: expected {cal.SLOTS_PER_YEAR} slots, got {v.shape}")
        present = ~np.isnan(v)
        if not present.any():
            raise EmptyMeter(f"meter {self.meter_id} has no readings")
        pv = v[present]
        if not np.isfinite(pv).all():
            raise ValueError(f"meter {self.meter_id}: non-finite reading")
        if (pv < 0).any():
            raise NegativeConsumption(f"meter {self.meter_id}: negative reading")
        first = int(np.argmax(present))
        derived = cal.month_of_slot(first) + 1
        if self.signup_month == 0:
            object.__setattr__(self, "signup_month", derived)
        elif self.signup_month != derived:
            raise ValueError(
                f"meter {self.meter_id}: signup_month {self.signup_month} "
                f"inconsistent with first reading in month {derived}"
            )

    def readings(self) -> Iterator[Reading]:
        for slot, v in enumerate(self.values):
            yield Reading(cal.format_slot(slot), None if np.isnan(v) else float(v))

    @property
    def missing_fraction(self) -> float:
        return float(np.isnan(self.values).mean())


@dataclass(frozen=True)
class DailySeries:
    """Daily kWh totals for one meter over one year; NaN = missing day."""

    meter_id: str
    values: np.ndarray  # (365,)

    def __post_init__(self):
        v = _freeze(self.values)
        object.__setattr__(self, "values", v)
        if v.shape != (cal.DAYS_PER_YEAR,):
            raise ValueError(f"expected {cal.DAYS_PER_YEAR} days, got {v.shape}")


@dataclass(frozen=True)
class MonthlySeries:
    """Monthly kWh totals for one meter over one year; NaN = unknown month."""

    meter_id: str
    values: np.ndarray  # (12,)

    def __post_init__(self):
        v = _freeze(self.values)
        object.__setattr__(self, "values", v)
        if v.shape != (12,):
            raise ValueError(f"expected 12 months, got {v.shape}")
        pv = v[~np.isnan(v)]
        if pv.size and (pv < 0).any():
            raise NegativeConsumption(f"meter {self.meter_id}: negative monthly total")

    @property
    def present(self) -> np.ndarray:
        return ~np.isnan(self.values)


@dataclass(frozen=True)
class WeatherYear:
    year: int
    temp_avg: np.ndarray  # (365,) degrees C
    temp_min: np.ndarray
    temp_max: np.ndarray

    def __post_init__(self):
        for name in ("temp_avg", "temp_min", "temp_max"):
            a = _freeze(getattr(self, name))
            object.__setattr__(self, name, a)
            if a.shape != (cal.DAYS_PER_YEAR,):
                raise ValueError(f"{name}: expected {cal.DAYS_PER_YEAR} days")
        if ((self.temp_min > self.temp_avg) | (self.temp_avg > self.temp_max)).any():
            raise ValueError(f"weather {self.year}: min <= avg <= max violated")


@dataclass(frozen=True)
class WeatherSeries:
    """Daily temperatures for 2017 and, when simulated, 2018."""

    y2017: WeatherYear
    y2018: Optional[WeatherYear] = None


# The 23 voluntary survey attributes, in canonical CSV column order.
SURVEY_CATEGORICAL = (
    "dwelling_type", "heating_fuel", "hot_water_fuel", "boiler_age",
    "loft_insulation", "wall_insulation",
)
SURVEY_COUNTS = (
    "num_occupants", "num_bedrooms", "dishwasher", "freezer", "fridge_freezer",
    "refrigerator", "tumble_dryer", "washing_machine", "game_console", "laptop",
    "pc", "router", "set_top_box", "tablet", "tv",
)
SURVEY_REAL = ("heating_temperature", "efficient_lighting")

SURVEY_FIELDS = (
    "dwelling_type", "num_occupants", "num_bedrooms", "heating_fuel",
    "hot_water_fuel", "boiler_age", "loft_insulation", "wall_insulation",
    "heating_temperature", "efficient_lighting", "dishwasher", "freezer",
    "fridge_freezer", "refrigerator", "tumble_dryer", "washing_machine",
    "game_console", "laptop", "pc", "router", "set_top_box", "tablet", "tv",
)


@dataclass(frozen=True)
class SurveyRecord:
    """One household's voluntary survey answers; every field may be None."""

    meter_id: str
    dwelling_type: Optional[str] = None
    num_occupants: Optional[int] = None
    num_bedrooms: Optional[int] = None
    heating_fuel: Optional[str] = None
    hot_water_fuel: Optional[str] = None
    boiler_age: Optional[str] = None
    loft_insulation: Optional[str] = None
    wall_insulation: Optional[str] = None
    heating_temperature: Optional[float] = None
    efficient_lighting: Optional[float] = None
    dishwasher: Optional[int] = None
    freezer: Optional[int] = None
    fridge_freezer: Optional[int] = None
    refrigerator: Optional[int] = None
    tumble_dryer: Optional[int] = None
    washing_machine: Optional[int] = None
    game_console: Optional[int] = None
    laptop: Optional[int] = None
    pc: Optional[int] = None
    router: Optional[int] = None
    set_top_box: Optional[int] = None
    tablet: Optional[int] = None
    tv: Optional[int] = None

    def __post_init__(self):
        for name in SURVEY_COUNTS:
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ValueError(f"survey {self.meter_id}: {name} must be >= 0")
        if self.efficient_lighting is not None and not 0 <= self.efficient_lighting <= 100:
            raise ValueError(f"survey {self.meter_id}: efficient_lighting outside [0,100]")

    def answered(self) -> dict:
        out = {}
        for f in fields(self):
            if f.name == "meter_id":
                continue
            v = getattr(self, f.name)
            if v is not None:
                out[f.name] = v
        return out


@dataclass(frozen=True)
class Cohort:
    """A full dataset: meter series, weather, sparse survey, optional truth."""

    meters: dict  # meter_id -> MeterSeries, insertion order = canonical order
    weather: WeatherSeries
    survey: dict  # meter_id -> SurveyRecord
    ground_truth_2018: Optional[dict] = None  # meter_id -> MonthlySeries

    def __post_init__(self):
        unknown = set(self.survey) - set(self.meters)
        if unknown:
            raise UnknownSurveyMeter(f"survey rows for unknown meters: {sorted(unknown)[:5]}")
        if self.ground_truth_2018 is not None:
            missing = set(self.meters) - set(self.ground_truth_2018)
            if missing:
                raise ValueError(f"ground truth missing for meters: {sorted(missing)[:5]}")

    @property
    def meter_ids(self) -> list:
        return list(self.meters)

    def __len__(self) -> int:
        return len(self.meters)
