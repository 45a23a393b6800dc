"""CSV schemas and canonical serialization.

Formats (headers are fixed):
  readings:     meter_id,timestamp,consumption_kwh   (empty cell = missing)
  weather:      date,temp_avg_c,temp_min_c,temp_max_c
  survey:       meter_id,<23 attribute columns>      (empty = unanswered)
  predictions:  meter_id,month,predicted_kwh         (month 2018-01..2018-12)

Writers emit rows sorted by meter id and time with fixed decimal formatting,
so parse -> serialize is byte-identical on canonical input.
"""

from __future__ import annotations

import csv
import io as _io
import os
from typing import Optional

import numpy as np

from . import calendar as cal
from .types import (
    Cohort,
    DuplicateRow,
    MalformedTimestamp,
    MeterSeries,
    MonthlySeries,
    NegativeConsumption,
    SURVEY_CATEGORICAL,
    SURVEY_COUNTS,
    SURVEY_FIELDS,
    SurveyRecord,
    WeatherSeries,
    WeatherYear,
)

READINGS_HEADER = ["meter_id", "timestamp", "consumption_kwh"]
WEATHER_HEADER = ["date", "temp_avg_c", "temp_min_c", "temp_max_c"]
SURVEY_HEADER = ["meter_id", *SURVEY_FIELDS]
PREDICTIONS_HEADER = ["meter_id", "month", "predicted_kwh"]

_KWH_FMT = "{:.6f}"
_TEMP_FMT = "{:.2f}"


def _open(path_or_buf, mode="r"):
    if hasattr(path_or_buf, "read") or hasattr(path_or_buf, "write"):
        return path_or_buf, False
    return open(path_or_buf, mode, newline=""), True


def parse_readings(path) -> dict:
    """Read the readings CSV into {meter_id: MeterSeries}."""
    f, close = _open(path)
    try:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != READINGS_HEADER:
            raise ValueError(f"bad readings header: {header}")
        values: dict[str, np.ndarray] = {}
        seen: dict[str, np.ndarray] = {}
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ValueError(f"readings line {lineno}: expected 3 columns")
            meter_id, ts, cell = row
            try:
                slot = cal.parse_slot(ts)
            except ValueError as exc:
                raise MalformedTimestamp(f"line {lineno}: {exc}") from exc
            if meter_id not in values:
                values[meter_id] = np.full(cal.SLOTS_PER_YEAR, np.nan)
                seen[meter_id] = np.zeros(cal.SLOTS_PER_YEAR, dtype=bool)
            if seen[meter_id][slot]:
                raise DuplicateRow(f"line {lineno}: duplicate ({meter_id}, {ts})")
            seen[meter_id][slot] = True
            cell = cell.strip()
            if cell:
                try:
                    v = float(cell)
                except ValueError:
                    v = float("nan")  # unparseable cell becomes missing
                else:
                    if v < 0:
                        raise NegativeConsumption(f"line {lineno}: {meter_id} reads {cell}")
                values[meter_id][slot] = v
        return {mid: MeterSeries(mid, vals) for mid, vals in values.items()}
    finally:
        if close:
            f.close()


def parse_weather(path) -> WeatherSeries:
    f, close = _open(path)
    try:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != WEATHER_HEADER:
            raise ValueError(f"bad weather header: {header}")
        years: dict[int, dict[str, np.ndarray]] = {}
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            year, day = cal.parse_date(row[0])
            y = years.setdefault(year, {
                k: np.full(cal.DAYS_PER_YEAR, np.nan) for k in ("avg", "min", "max")
            })
            y["avg"][day], y["min"][day], y["max"][day] = map(float, row[1:4])
        def build(year):
            d = years.get(year)
            if d is None:
                return None
            return WeatherYear(year, d["avg"], d["min"], d["max"])
        y17 = build(2017)
        if y17 is None:
            raise ValueError("weather file has no 2017 rows")
        return WeatherSeries(y17, build(2018))
    finally:
        if close:
            f.close()


def parse_survey(path) -> dict:
    f, close = _open(path)
    try:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != SURVEY_HEADER:
            raise ValueError(f"bad survey header: {header}")
        records = {}
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            meter_id = row[0]
            if meter_id in records:
                raise DuplicateRow(f"line {lineno}: duplicate survey row for {meter_id}")
            kwargs = {}
            for name, cell in zip(SURVEY_FIELDS, row[1:]):
                cell = cell.strip()
                if not cell:
                    continue
                if name in SURVEY_CATEGORICAL:
                    kwargs[name] = cell
                elif name in SURVEY_COUNTS:
                    kwargs[name] = int(cell)
                else:
                    kwargs[name] = float(cell)
            records[meter_id] = SurveyRecord(meter_id, **kwargs)
        return records
    finally:
        if close:
            f.close()


def parse_cohort(readings_csv, weather_csv, survey_csv, ground_truth_csv=None) -> Cohort:
    meters = parse_readings(readings_csv)
    meters = {mid: meters[mid] for mid in sorted(meters)}
    weather = parse_weather(weather_csv)
    survey = parse_survey(survey_csv)
    truth = parse_predictions(ground_truth_csv) if ground_truth_csv else None
    return Cohort(meters=meters, weather=weather, survey=survey, ground_truth_2018=truth)


def parse_predictions(path) -> dict:
    """Read a predictions/ground-truth CSV into {meter_id: MonthlySeries}."""
    f, close = _open(path)
    try:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != PREDICTIONS_HEADER:
            raise ValueError(f"bad predictions header: {header}")
        acc: dict[str, np.ndarray] = {}
        seen: dict[str, set] = {}
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            meter_id, month_txt, cell = row
            m = cal.parse_month(month_txt)
            if meter_id not in acc:
                acc[meter_id] = np.full(12, np.nan)
                seen[meter_id] = set()
            if m in seen[meter_id]:
                raise DuplicateRow(f"line {lineno}: duplicate ({meter_id}, {month_txt})")
            seen[meter_id].add(m)
            if cell.strip():
                acc[meter_id][m] = float(cell)
        return {mid: MonthlySeries(mid, vals) for mid, vals in sorted(acc.items())}
    finally:
        if close:
            f.close()


def write_readings(meters: dict, path) -> None:
    f, close = _open(path, "w")
    try:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(READINGS_HEADER)
        for mid in sorted(meters):
            vals = meters[mid].values
            for slot in range(cal.SLOTS_PER_YEAR):
                v = vals[slot]
                cell = "" if np.isnan(v) else _KWH_FMT.format(v)
                w.writerow([mid, cal.format_slot(slot), cell])
    finally:
        if close:
            f.close()


def write_weather(weather: WeatherSeries, path) -> None:
    f, close = _open(path, "w")
    try:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(WEATHER_HEADER)
        for year in (weather.y2017, weather.y2018):
            if year is None:
                continue
            for day in range(cal.DAYS_PER_YEAR):
                w.writerow([
                    cal.format_date(day, year.year),
                    _TEMP_FMT.format(year.temp_avg[day]),
                    _TEMP_FMT.format(year.temp_min[day]),
                    _TEMP_FMT.format(year.temp_max[day]),
                ])
    finally:
        if close:
            f.close()


def write_survey(survey: dict, path) -> None:
    f, close = _open(path, "w")
    try:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(SURVEY_HEADER)
        for mid in sorted(survey):
            rec = survey[mid]
            row = [mid]
            for name in SURVEY_FIELDS:
                v = getattr(rec, name)
                if v is None:
                    row.append("")
                elif name in SURVEY_CATEGORICAL:
                    row.append(v)
                elif name in SURVEY_COUNTS:
                    row.append(str(int(v)))
                else:
                    row.append("{:.1f}".format(v))
            w.writerow(row)
    finally:
        if close:
            f.close()


def write_predictions(predictions: dict, path) -> None:
    """Write {meter_id: MonthlySeries or (12,) array} as a predictions CSV."""
    f, close = _open(path, "w")
    try:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(PREDICTIONS_HEADER)
        for mid in sorted(predictions):
            vals = predictions[mid]
            vals = vals.values if isinstance(vals, MonthlySeries) else np.asarray(vals)
            for m in range(12):
                cell = "" if np.isnan(vals[m]) else _KWH_FMT.format(vals[m])
                w.writerow([mid, cal.format_month(m), cell])
    finally:
        if close:
            f.close()


def write_cohort(cohort: Cohort, out_dir: str) -> dict:
    """Write the cohort's CSV set into a directory; returns the path map."""
    os.makedirs(out_dir, exist_ok=True)
    paths = {
        "readings": os.path.join(out_dir, "readings.csv"),
        "weather": os.path.join(out_dir, "weather.csv"),
        "survey": os.path.join(out_dir, "survey.csv"),
    }
    write_readings(cohort.meters, paths["readings"])
    write_weather(cohort.weather, paths["weather"])
    write_survey(cohort.survey, paths["survey"])
    if cohort.ground_truth_2018 is not None:
        paths["ground_truth"] = os.path.join(out_dir, "ground_truth.csv")
        write_predictions(cohort.ground_truth_2018, paths["ground_truth"])
    return paths


def load_cohort(data_dir: str) -> Cohort:
    """Read a cohort from a directory produced by :func:`write_cohort`."""
    gt = os.path.join(data_dir, "ground_truth.csv")
    return parse_cohort(
        os.path.join(data_dir, "readings.csv"),
        os.path.join(data_dir, "weather.csv"),
        os.path.join(data_dir, "survey.csv"),
        gt if os.path.exists(gt) else None,
    )


def dumps_readings(meters: dict) -> str:
    buf = _io.StringIO()
    write_readings(meters, buf)
    return buf.getvalue()
