"""Assemble blinded review packets for the expert panel.

A packet covers 10 meters at four horizons (the full year plus February,
May and December) for every finalist. Finalist identities are hidden
behind shuffled letter labels; the unblinding map is returned separately
and must never travel with the packet.
"""

from __future__ import annotations

import hashlib
import json
import string
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core import calendar as cal
from ..core.aggregate import aggregate_daily, aggregate_monthly
from ..core.types import Cohort
from .criteria import AGREEMENT_ANCHORS, CRITERIA, SATISFACTION_ANCHORS

PACKET_SCHEMA = "meterbench.packet/1"
REVIEW_MONTHS = (1, 4, 11)  # February, May, December
PACKET_METERS = 10


class MissingExplanation(ValueError):
    """A selected meter/horizon/finalist cell has no explanation text."""


@dataclass(frozen=True)
class ReviewEntry:
    entry_id: str
    meter_id: str
    horizon: str  # "yearly" or "2018-MM"
    finalist: str  # blinded label
    prediction: Tuple[float, ...]  # 12 monthly values
    explanation: str
    actual_2017: Tuple[Optional[float], ...]
    actual_2018: Tuple[Optional[float], ...]


@dataclass(frozen=True)
class ReviewPacket:
    packet_id: str
    finalists: Tuple[str, ...]
    meter_ids: Tuple[str, ...]
    horizons: Tuple[str, ...]
    entries: Tuple[ReviewEntry, ...]

    def entry_ids(self) -> List[str]:
        return [e.entry_id for e in self.entries]


def _chart_series(values: np.ndarray, present=None) -> Tuple[Optional[float], ...]:
    out = []
    for i, v in enumerate(values):
        missing = np.isnan(v) or (present is not None and not present[i])
        out.append(None if missing else float(v))
    return tuple(out)


def _observed_monthly_2017(cohort: Cohort, meter_ids: Sequence[str]) -> Dict[str, np.ndarray]:
    out = {}
    for mid in meter_ids:
        daily = aggregate_daily(cohort.meters[mid], 12)
        out[mid] = aggregate_monthly(daily, 5).values
    return out


def _bundle_text(bundle, horizon: str) -> str:
    if horizon == "yearly":
        return bundle.yearly["text"]
    for entry in bundle.monthly:
        if entry["month"] == horizon:
            return entry["text"]
    raise MissingExplanation(f"{bundle.meter_id}: no entry for {horizon}")


def pack_review(forecasts: Dict[str, "ForecastSet"], bundles: Dict[str, Sequence],
                cohort: Cohort, meter_ids: Sequence[str], seed: int
                ) -> Tuple[ReviewPacket, Dict[str, str]]:
    """Build a blinded packet plus the label -> pipeline unblinding map."""
    meter_ids = list(meter_ids)
    if len(meter_ids) != PACKET_METERS or len(set(meter_ids)) != PACKET_METERS:
        raise ValueError(f"review packets cover exactly {PACKET_METERS} distinct meters")
    missing = [m for m in meter_ids if m not in cohort.meters]
    if missing:
        raise ValueError(f"unknown meters: {missing}")
    if not forecasts:
        raise ValueError("no finalists given")
    if set(forecasts) != set(bundles):
        raise ValueError("forecast and bundle finalist ids differ")

    pipeline_ids = sorted(forecasts)
    labels = list(string.ascii_uppercase[:len(pipeline_ids)])
    rng = np.random.default_rng(seed)
    unblinding = {label: pipeline_ids[j]
                  for label, j in zip(labels, rng.permutation(len(pipeline_ids)))}

    by_meter = {}
    for pid, bundle_list in bundles.items():
        index = {b.meter_id: b for b in bundle_list}
        for mid in meter_ids:
            if mid not in index:
                raise MissingExplanation(f"{pid}: no explanation bundle for {mid}")
        by_meter[pid] = index

    horizons = ["yearly"] + [cal.format_month(m) for m in REVIEW_MONTHS]
    obs_2017 = _observed_monthly_2017(cohort, meter_ids)

    entries = []
    for mid in meter_ids:
        truth = cohort.ground_truth_2018.get(mid) if cohort.ground_truth_2018 else None
        a2017 = _chart_series(obs_2017[mid])
        a2018 = (_chart_series(truth.values, truth.present)
                 if truth is not None else (None,) * 12)
        for horizon in horizons:
            for label in labels:
                pid = unblinding[label]
                fset = forecasts[pid]
                if mid not in fset.predictions:
                    raise MissingExplanation(f"{pid}: no forecast for {mid}")
                text = _bundle_text(by_meter[pid][mid], horizon)
                if not text:
                    raise MissingExplanation(f"{pid}: empty text for {mid}/{horizon}")
                entries.append(ReviewEntry(
                    entry_id=f"{mid}|{horizon}|{label}",
                    meter_id=mid,
                    horizon=horizon,
                    finalist=label,
                    prediction=tuple(float(v) for v in fset.predictions[mid]),
                    explanation=text,
                    actual_2017=a2017,
                    actual_2018=a2018,
                ))

    digest = hashlib.sha256(json.dumps(
        [pipeline_ids, meter_ids, seed]).encode()).hexdigest()[:12]
    packet = ReviewPacket(
        packet_id=f"pkt-{digest}",
        finalists=tuple(labels),
        meter_ids=tuple(meter_ids),
        horizons=tuple(horizons),
        entries=tuple(entries),
    )
    return packet, unblinding


def packet_to_json(packet: ReviewPacket) -> dict:
    return {
        "schema": PACKET_SCHEMA,
        "packet_id": packet.packet_id,
        "finalists": list(packet.finalists),
        "meter_ids": list(packet.meter_ids),
        "horizons": list(packet.horizons),
        "criteria": [{"id": cid, "text": text} for cid, text in CRITERIA],
        "anchors": {"agreement": list(AGREEMENT_ANCHORS),
                    "satisfaction": list(SATISFACTION_ANCHORS)},
        "entries": [{
            "entry_id": e.entry_id,
            "meter_id": e.meter_id,
            "horizon": e.horizon,
            "finalist": e.finalist,
            "prediction": list(e.prediction),
            "explanation": e.explanation,
            "actual_2017": list(e.actual_2017),
            "actual_2018": list(e.actual_2018),
        } for e in packet.entries],
    }


def packet_from_json(data: dict) -> ReviewPacket:
    if data.get("schema") != PACKET_SCHEMA:
        raise ValueError(f"not a review packet (schema={data.get('schema')!r})")
    entries = tuple(ReviewEntry(
        entry_id=e["entry_id"],
        meter_id=e["meter_id"],
        horizon=e["horizon"],
        finalist=e["finalist"],
        prediction=tuple(e["prediction"]),
        explanation=e["explanation"],
        actual_2017=tuple(e["actual_2017"]),
        actual_2018=tuple(e["actual_2018"]),
    ) for e in data["entries"])
    return ReviewPacket(
        packet_id=data["packet_id"],
        finalists=tuple(data["finalists"]),
        meter_ids=tuple(data["meter_ids"]),
        horizons=tuple(data["horizons"]),
        entries=entries,
    )


def write_packet(path, packet: ReviewPacket) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(packet_to_json(packet), fh, indent=2, sort_keys=True, ensure_ascii=False)
        fh.write("\n")


def read_packet(path) -> ReviewPacket:
    with open(path, "r", encoding="utf-8") as fh:
        return packet_from_json(json.load(fh))
