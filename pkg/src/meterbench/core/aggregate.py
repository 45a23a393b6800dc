"""Half-hourly -> daily -> monthly rollups and availability grouping."""

from __future__ import annotations

from typing import Union

import numpy as np

from . import calendar as cal
from .types import DailySeries, EmptyMeter, MeterSeries, MonthlySeries

ANY_MISSING = "any-missing"


def aggregate_daily(series: MeterSeries, day_missing_rule: Union[str, int] = ANY_MISSING) -> DailySeries:
    """Sum each day's 48 slots into a daily kWh total.

    ``day_missing_rule`` is either ``"any-missing"`` (one missing slot makes
    the day missing) or an integer m: days with at most m missing slots are
    summed over the present slots and rescaled by 48/present.
    """
    v = series.values.reshape(cal.DAYS_PER_YEAR, cal.SLOTS_PER_DAY)
    missing = np.isnan(v)
    n_missing = missing.sum(axis=1)
    totals = np.where(missing, 0.0, v).sum(axis=1)
    if day_missing_rule == ANY_MISSING:
        out = np.where(n_missing == 0, totals, np.nan)
    else:
        m = int(day_missing_rule)
        if m < 0:
            raise ValueError("threshold must be >= 0")
        present = cal.SLOTS_PER_DAY - n_missing
        with np.errstate(divide="ignore", invalid="ignore"):
            scaled = totals * (cal.SLOTS_PER_DAY / present)
        out = np.where((n_missing <= m) & (present > 0), scaled, np.nan)
    return DailySeries(series.meter_id, out)


def aggregate_monthly(daily: DailySeries, month_missing_days_max: int = 0) -> MonthlySeries:
    """Sum daily totals per calendar month.

    A month with more than ``month_missing_days_max`` missing days is
    unknown; otherwise the sum over present days is rescaled by
    days_in_month/present_days.
    """
    if month_missing_days_max < 0:
        raise ValueError("month_missing_days_max must be >= 0")
    out = np.full(12, np.nan)
    for m in range(12):
        chunk = daily.values[cal.days_of_month(m)]
        present = ~np.isnan(chunk)
        n_missing = chunk.size - present.sum()
        if n_missing > month_missing_days_max or not present.any():
            continue
        total = chunk[present].sum()
        if n_missing:
            total *= chunk.size / present.sum()
        out[m] = total
    return MonthlySeries(daily.meter_id, out)


def monthly_consumption(series: MeterSeries, day_missing_rule: Union[str, int] = ANY_MISSING,
                        month_missing_days_max: int = 0) -> MonthlySeries:
    return aggregate_monthly(aggregate_daily(series, day_missing_rule), month_missing_days_max)


def availability_group(series: MonthlySeries) -> int:
    """Number of leading missing months (G0 = complete year, G11 = December only).

    Interior gaps after the first present month do not change the group.
    """
    present = series.present
    if not present.any():
        raise EmptyMeter(f"meter {series.meter_id}: all 12 months missing")
    return int(np.argmax(present))
