"""Core data model: calendar arithmetic, typed series, CSV I/O, rollups."""

from . import calendar
from .aggregate import (
    ANY_MISSING,
    aggregate_daily,
    aggregate_monthly,
    availability_group,
    monthly_consumption,
)
from .io import (
    dumps_readings,
    load_cohort,
    parse_cohort,
    parse_predictions,
    parse_readings,
    parse_survey,
    parse_weather,
    write_cohort,
    write_predictions,
    write_readings,
    write_survey,
    write_weather,
)
from .types import (
    Cohort,
    DailySeries,
    DegenerateTruth,
    DuplicateRow,
    EmptyMeter,
    MalformedTimestamp,
    MeterBenchError,
    MeterSeries,
    MonthlySeries,
    NegativeConsumption,
    NoRuleCoverage,
    Reading,
    SURVEY_CATEGORICAL,
    SURVEY_COUNTS,
    SURVEY_FIELDS,
    SURVEY_REAL,
    SurveyRecord,
    UnknownSurveyMeter,
    WeatherSeries,
    WeatherYear,
)

__all__ = [
    "ANY_MISSING",
    "Cohort",
    "DailySeries",
    "DegenerateTruth",
    "DuplicateRow",
    "EmptyMeter",
    "MalformedTimestamp",
    "MeterBenchError",
    "MeterSeries",
    "MonthlySeries",
    "NegativeConsumption",
    "NoRuleCoverage",
    "Reading",
    "SURVEY_CATEGORICAL",
    "SURVEY_COUNTS",
    "SURVEY_FIELDS",
    "SURVEY_REAL",
    "SurveyRecord",
    "UnknownSurveyMeter",
    "WeatherSeries",
    "WeatherYear",
    "aggregate_daily",
    "aggregate_monthly",
    "availability_group",
    "calendar",
    "dumps_readings",
    "load_cohort",
    "monthly_consumption",
    "parse_cohort",
    "parse_predictions",
    "parse_readings",
    "parse_survey",
    "parse_weather",
    "write_cohort",
    "write_predictions",
    "write_readings",
    "write_survey",
    "write_weather",
]
