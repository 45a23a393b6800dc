"""Append-only response log with latest-wins aggregation."""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .criteria import CRITERION_IDS
from .packet import ReviewPacket


class InvalidResponse(ValueError):
    pass


class NoResponses(ValueError):
    pass


def validate_response(data: dict, packet: ReviewPacket) -> dict:
    """Normalize a submitted rating; raises InvalidResponse on any violation."""
    token = data.get("reviewer_token")
    if not isinstance(token, str) or not token.strip():
        raise InvalidResponse("reviewer_token must be a non-empty string")
    if data.get("packet_id") != packet.packet_id:
        raise InvalidResponse(f"unknown packet {data.get('packet_id')!r}")
    entry_id = data.get("entry_id")
    valid_ids = {e.entry_id for e in packet.entries}
    if entry_id not in valid_ids:
        raise InvalidResponse(f"unknown entry {entry_id!r}")
    scores = {}
    for cid in CRITERION_IDS:
        key = cid.lower()
        value = data.get(key)
        if not isinstance(value, int) or isinstance(value, bool) or not 1 <= value <= 5:
            raise InvalidResponse(f"{key} must be an integer in [1, 5]")
        scores[key] = value
    return {"reviewer_token": token.strip(), "packet_id": packet.packet_id,
            "entry_id": entry_id, **scores}


class ResponseStore:
    """JSONL log; one line per submission, appended atomically."""

    def __init__(self, path):
        self.path = Path(path)
        self._lock = threading.Lock()

    def append(self, response: dict) -> None:
        line = json.dumps(response, sort_keys=True, ensure_ascii=False) + "\n"
        with self._lock:
            with open(self.path, "a", encoding="utf-8", newline="\n") as fh:
                fh.write(line)
                fh.flush()
                os.fsync(fh.fileno())

    def load(self) -> List[dict]:
        if not self.path.exists():
            return []
        out = []
        with open(self.path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    out.append(json.loads(line))
        return out

    def latest(self, packet_id: Optional[str] = None) -> Dict[Tuple[str, str], dict]:
        """Deduplicated view: the last line per (reviewer_token, entry_id) wins."""
        current = {}
        for row in self.load():
            if packet_id is not None and row.get("packet_id") != packet_id:
                continue
            current[(row["reviewer_token"], row["entry_id"])] = row
        return current


def aggregate(packet: ReviewPacket, store: ResponseStore) -> dict:
    """Per-finalist criterion means (2 decimals) with per-cell response counts."""
    rows = list(store.latest(packet.packet_id).values())
    if not rows:
        raise NoResponses(f"no responses recorded for {packet.packet_id}")
    finalist_of = {e.entry_id: e.finalist for e in packet.entries}
    table = []
    for label in packet.finalists:
        sums = {cid: 0 for cid in CRITERION_IDS}
        counts = {cid: 0 for cid in CRITERION_IDS}
        for row in rows:
            if finalist_of[row["entry_id"]] != label:
                continue
            for cid in CRITERION_IDS:
                sums[cid] += row[cid.lower()]
                counts[cid] += 1
        cells = {cid: {"mean": (round(sums[cid] / counts[cid], 2) if counts[cid] else None),
                       "count": counts[cid]} for cid in CRITERION_IDS}
        rated = [cells[cid]["mean"] for cid in CRITERION_IDS if cells[cid]["count"]]
        table.append({
            "finalist": label,
            "criteria": cells,
            "mean_of_means": round(sum(rated) / len(rated), 2) if rated else None,
            "responses": sum(counts.values()) // len(CRITERION_IDS),
        })
    return {
        "packet_id": packet.packet_id,
        "criterion_ids": list(CRITERION_IDS),
        "finalists": table,
    }


def criterion_means(aggregate_table: dict, finalist: str) -> List[float]:
    """C1..C10 means for one finalist, for the final-score formula."""
    for row in aggregate_table["finalists"]:
        if row["finalist"] == finalist:
            means = [row["criteria"][cid]["mean"] for cid in aggregate_table["criterion_ids"]]
            if any(m is None for m in means):
                raise NoResponses(f"finalist {finalist} lacks ratings on some criteria")
            return means
    raise KeyError(f"unknown finalist {finalist!r}")
