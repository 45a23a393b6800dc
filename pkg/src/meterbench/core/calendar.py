"""Calendar arithmetic for half-hourly 2017 data and monthly 2018 horizons.

All clock math is naive local time: no time zones, no DST. 2017 and 2018
are both non-leap years, which the rest of the package relies on.
"""

from __future__ import annotations

import datetime as _dt

import numpy as np

SLOTS_PER_DAY = 48
DAYS_PER_YEAR = 365
SLOTS_PER_YEAR = SLOTS_PER_DAY * DAYS_PER_YEAR  # 17,520

MONTH_LENGTHS = np.array([31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31])
MONTH_NAMES = [
    "January", "February", "March", "April", "May", "June",
    "July", "August", "September", "October", "November", "December",
]

# day index (0-based within the year) at which each month starts
MONTH_START_DAY = np.concatenate([[0], np.cumsum(MONTH_LENGTHS)[:-1]])

# month index (0-based) for each day of the year
MONTH_OF_DAY = np.repeat(np.arange(12), MONTH_LENGTHS)

BASE_YEAR = 2017
TARGET_YEAR = 2018


def day_of_slot(slot: int) -> int:
    return slot // SLOTS_PER_DAY


def month_of_slot(slot: int) -> int:
    """0-based month index for a slot index."""
    return int(MONTH_OF_DAY[slot // SLOTS_PER_DAY])


def slots_of_month(month: int) -> slice:
    """Slot range of a 0-based month index."""
    start = int(MONTH_START_DAY[month]) * SLOTS_PER_DAY
    return slice(start, start + int(MONTH_LENGTHS[month]) * SLOTS_PER_DAY)


def days_of_month(month: int) -> slice:
    start = int(MONTH_START_DAY[month])
    return slice(start, start + int(MONTH_LENGTHS[month]))


def slot_datetime(slot: int, year: int = BASE_YEAR) -> _dt.datetime:
    return _dt.datetime(year, 1, 1) + _dt.timedelta(minutes=30 * slot)


def format_slot(slot: int, year: int = BASE_YEAR) -> str:
    """ISO-8601 minute-precision timestamp for a slot index."""
    return slot_datetime(slot, year).strftime("%Y-%m-%dT%H:%M")


def parse_slot(text: str, year: int = BASE_YEAR) -> int:
    """Inverse of :func:`format_slot`; raises ValueError off-grid or off-year."""
    try:
        ts = _dt.datetime.strptime(text, "%Y-%m-%dT%H:%M")
    except ValueError as exc:
        raise ValueError(f"malformed timestamp {text!r}") from exc
    if ts.year != year:
        raise ValueError(f"timestamp {text!r} outside year {year}")
    if ts.minute not in (0, 30):
        raise ValueError(f"timestamp {text!r} not on the half-hour grid")
    delta = ts - _dt.datetime(year, 1, 1)
    return int(delta.total_seconds() // 1800)


def weekday_of_day(day: int, year: int = BASE_YEAR) -> int:
    """0 = Monday ... 6 = Sunday, matching ``datetime.weekday``."""
    return (_dt.date(year, 1, 1).weekday() + day) % 7


def weekdays_of_year(year: int) -> np.ndarray:
    first = _dt.date(year, 1, 1).weekday()
    return (first + np.arange(DAYS_PER_YEAR)) % 7


def month_of_days() -> np.ndarray:
    return MONTH_OF_DAY.copy()


def format_month(month: int, year: int = TARGET_YEAR) -> str:
    """``2018-01`` style month key for a 0-based month index."""
    return f"{year}-{month + 1:02d}"


def parse_month(text: str, year: int = TARGET_YEAR) -> int:
    parts = text.split("-")
    if len(parts) != 2:
        raise ValueError(f"malformed month {text!r}")
    y, m = int(parts[0]), int(parts[1])
    if y != year or not 1 <= m <= 12:
        raise ValueError(f"month {text!r} outside {year}-01..{year}-12")
    return m - 1


def format_date(day: int, year: int) -> str:
    return (_dt.date(year, 1, 1) + _dt.timedelta(days=day)).isoformat()


def parse_date(text: str) -> tuple[int, int]:
    """Return (year, day-of-year index) for an ISO date string."""
    d = _dt.date.fromisoformat(text)
    return d.year, (d - _dt.date(d.year, 1, 1)).days
