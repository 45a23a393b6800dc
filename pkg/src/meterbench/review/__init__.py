"""Expert review workflow: packets, response log, aggregation, HTTP API."""

from .criteria import AGREEMENT_ANCHORS, CRITERIA, CRITERION_IDS, SATISFACTION_ANCHORS
from .packet import (
    MissingExplanation,
    PACKET_METERS,
    REVIEW_MONTHS,
    ReviewEntry,
    ReviewPacket,
    pack_review,
    packet_from_json,
    packet_to_json,
    read_packet,
    write_packet,
)
from .server import create_app, default_ui_dir
from .store import (
    InvalidResponse,
    NoResponses,
    ResponseStore,
    aggregate,
    criterion_means,
    validate_response,
)

__all__ = [
    "AGREEMENT_ANCHORS",
    "CRITERIA",
    "CRITERION_IDS",
    "SATISFACTION_ANCHORS",
    "MissingExplanation",
    "PACKET_METERS",
    "REVIEW_MONTHS",
    "ReviewEntry",
    "ReviewPacket",
    "pack_review",
    "packet_from_json",
    "packet_to_json",
    "read_packet",
    "write_packet",
    "create_app",
    "default_ui_dir",
    "InvalidResponse",
    "NoResponses",
    "ResponseStore",
    "aggregate",
    "criterion_means",
    "validate_response",
]
