"""Domain types and validation helpers.

Feed and stream identifiers are plain strings validated against their
alphabets; timestamps are timezone-aware UTC datetimes throughout.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .errors import InvalidDatapoint, InvalidId

FEED_ID_RE = re.compile(r"^[a-z0-9-]{1,64}$")
STREAM_ID_RE = re.compile(r"^[a-zA-Z0-9_-]{1,64}$")


def validate_feed_id(value: str) -> str:
    if not isinstance(value, str) or not FEED_ID_RE.match(value):
        raise InvalidId(f"feed id must match [a-z0-9-]{{1,64}}: {value!r}")
    return value


def validate_stream_id(value: str) -> str:
    if not isinstance(value, str) or not STREAM_ID_RE.match(value):
        raise InvalidId(f"stream id must match [a-zA-Z0-9_-]{{1,64}}: {value!r}")
    return value


def parse_timestamp(text: str) -> datetime:
    """ISO-8601 UTC with trailing Z (offset forms accepted, normalized to UTC)."""
    if not isinstance(text, str):
        raise ValueError("timestamp must be a string")
    raw = text.strip()
    if raw.endswith("Z"):
        raw = raw[:-1] + "+00:00"
    dt = datetime.fromisoformat(raw)
    if dt.tzinfo is None:
        raise ValueError(f"timestamp lacks timezone: {text!r}")
    return dt.astimezone(timezone.utc)


def format_timestamp(dt: datetime) -> str:
    dt = dt.astimezone(timezone.utc)
    if dt.microsecond:
        return dt.strftime("%Y-%m-%dT%H:%M:%S.%f") + "Z"
    return dt.strftime("%Y-%m-%dT%H:%M:%SZ")


def parse_decimal(text: str) -> float:
    """Lexical decimal value; rejects NaN/inf and non-numeric text."""
    if not isinstance(text, str) or not text.strip():
        raise ValueError("empty value")
    try:
        value = float(text)
    except ValueError:
        raise ValueError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise ValueError(f"not finite: {text!r}")
    return value


@dataclass(frozen=True)
class GeoPoint:
    lat: float
    lon: float

    def __post_init__(self):
        if not (math.isfinite(self.lat) and math.isfinite(self.lon)):
            raise InvalidId("coordinates must be finite")
        if not (-90.0 <= self.lat <= 90.0):
            raise InvalidId(f"latitude out of range: {self.lat}")
        if not (-180.0 <= self.lon <= 180.0):
            raise InvalidId(f"longitude out of range: {self.lon}")


@dataclass
class Datastream:
    id: str
    unit_label: str = ""
    unit_symbol: str = ""
    tags: frozenset = frozenset()

    def __post_init__(self):
        validate_stream_id(self.id)
        if len(self.unit_symbol) > 8:
            raise InvalidId("unit symbol limited to 8 chars")
        if self.unit_symbol and not self.unit_label:
            raise InvalidId("unit symbol requires a unit label")
        self.tags = frozenset(self.tags)


@dataclass
class Feed:
    id: str
    title: str
    location: GeoPoint
    tags: frozenset
    provider: str  # KeyId of the creating provider/operator
    created_at: datetime
    streams: dict = field(default_factory=dict)  # StreamId -> Datastream

    def __post_init__(self):
        validate_feed_id(self.id)
        if not 1 <= len(self.title) <= 200:
            raise InvalidId("title must be 1..200 chars")
        self.tags = frozenset(self.tags)
        for tag in self.tags:
            if not 1 <= len(tag) <= 64:
                raise InvalidId(f"tag length out of range: {tag!r}")


@dataclass(frozen=True)
class EventRecord:
    feed: str
    at: datetime
    kind: str
    description: str = ""

    def __post_init__(self):
        if not 1 <= len(self.kind) <= 64:
            raise InvalidId("event kind must be 1..64 chars")


@dataclass(frozen=True)
class ContextRecord:
    feed: str
    at: datetime
    key: str
    value: str = ""

    def __post_init__(self):
        if not 1 <= len(self.key) <= 64:
            raise InvalidId("context key must be 1..64 chars")


@dataclass(frozen=True)
class Subscription:
    subscriber: str  # KeyId
    feed: str
    created_at: datetime


@dataclass(frozen=True)
class Datapoint:
    at: datetime
    value: str  # lexical decimal, finite when parsed

    def __post_init__(self):
        try:
            parse_decimal(self.value)
        except ValueError as exc:
            raise InvalidDatapoint(str(exc)) from None


@dataclass(frozen=True)
class StreamRef:
    feed: str
    stream: str

    def __post_init__(self):
        validate_feed_id(self.feed)
        validate_stream_id(self.stream)
