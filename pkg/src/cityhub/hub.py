"""The hub itself: registry, ingress, egress, keys, and durability.

Every mutation is validated, appended to the JSON-lines event log, and
then applied to in-memory state; startup replays the log, so a restarted
hub answers every read exactly as before the restart.
"""
from __future__ import annotations

import os
import secrets as _secrets
import threading
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from typing import List, Optional, Tuple

from . import eeml
from .auth import (
    ApiKey,
    Decision,
    KeyStore,
    ROLE_DEVELOPER,
    ROLE_OPERATOR,
    ROLE_PROVIDER,
    generate_secret,
)
from .errors import (
    DuplicateFeed,
    DuplicateStream,
    EmptyFeed,
    Forbidden,
    HubError,
    InvalidFilter,
    InvalidRange,
    InvalidScope,
    InvalidWindow,
    MalformedDocument,
    Unauthorized,
    UnknownFeed,
    UnknownProvider,
    UnknownStream,
)
from .log import EventLog
from .model import (
    ContextRecord,
    Datapoint,
    Datastream,
    EventRecord,
    Feed,
    GeoPoint,
    StreamRef,
    Subscription,
    format_timestamp,
    parse_decimal,
    parse_timestamp,
    validate_feed_id,
)
from .store import TimeseriesStore, feeds_near

AGGREGATE_FNS = ("min", "max", "avg", "sum", "count")


@dataclass
class IngestReport:
    feed: str
    accepted: int
    rejected: list = field(default_factory=list)  # of (data_element_id, reason)


@dataclass(frozen=True)
class AggregateBucket:
    window_start: datetime
    fn: str
    value: float


def _utcnow() -> datetime:
    return datetime.now(timezone.utc).replace(microsecond=0)


class Hub:
    """One hub instance over one data directory (or fully in memory)."""

    def __init__(self, data_dir: Optional[str] = None, clock=None):
        self.clock = clock or _utcnow
        self._lock = threading.RLock()

        self.feeds = {}  # FeedId -> Feed
        self.event_journal = {}  # FeedId -> [EventRecord]
        self.context_journal = {}  # FeedId -> [ContextRecord]
        self.subscriptions = {}  # (KeyId, FeedId) -> Subscription
        self.keys = KeyStore()
        self.store = TimeseriesStore()

        path = os.path.join(data_dir, "hub.log") if data_dir else None
        self.log = EventLog(path)
        for record in self.log.read_all():
            self._apply(record["kind"], record["payload"])

        self.bootstrap_secret: Optional[str] = None
        if self.log.seq == 0:
            key = self._issue(ROLE_OPERATOR, None, "bootstrap operator")
            self.bootstrap_secret = key.secret

    def close(self):
        self.log.close()

    # -- event application --------------------------------------------------

    def _commit(self, kind: str, payload: dict):
        self.log.append(kind, payload, ts=format_timestamp(self.clock()))
        self._apply(kind, payload)

    def _apply(self, kind: str, p: dict):
        if kind == "feed-created":
            feed = Feed(
                id=p["id"], title=p["title"],
                location=GeoPoint(p["lat"], p["lon"]),
                tags=frozenset(p["tags"]), provider=p["provider"],
                created_at=parse_timestamp(p["created_at"]))
            self.feeds[feed.id] = feed
            self.event_journal[feed.id] = []
            self.context_journal[feed.id] = []
        elif kind == "stream-created":
            stream = Datastream(
                id=p["id"], unit_label=p["unit_label"],
                unit_symbol=p["unit_symbol"], tags=frozenset(p["tags"]))
            self.feeds[p["feed"]].streams[stream.id] = stream
            self.store.register(StreamRef(p["feed"], stream.id))
        elif kind == "datapoint-appended":
            self.store.append(
                StreamRef(p["feed"], p["stream"]),
                Datapoint(at=parse_timestamp(p["at"]), value=p["value"]))
        elif kind == "event-recorded":
            self.event_journal[p["feed"]].append(EventRecord(
                feed=p["feed"], at=parse_timestamp(p["at"]),
                kind=p["kind"], description=p["description"]))
        elif kind == "context-recorded":
            self.context_journal[p["feed"]].append(ContextRecord(
                feed=p["feed"], at=parse_timestamp(p["at"]),
                key=p["key"], value=p["value"]))
        elif kind == "key-issued":
            self.keys.add(ApiKey(
                id=p["id"], secret=p["secret"], role=p["role"],
                scope=p["scope"], label=p["label"],
                created_at=parse_timestamp(p["created_at"])))
        elif kind == "key-revoked":
            self.keys.revoke(p["id"])
        elif kind == "subscription-created":
            sub = Subscription(
                subscriber=p["subscriber"], feed=p["feed"],
                created_at=parse_timestamp(p["created_at"]))
            self.subscriptions[(sub.subscriber, sub.feed)] = sub
        else:  # pragma: no cover - kinds validated by EventLog
            raise HubError(f"unknown event kind {kind!r}")

    # -- auth ----------------------------------------------------------------

    def is_subscribed(self, key_id: str, feed_id: str) -> bool:
        return (key_id, feed_id) in self.subscriptions

    def authorize(self, secret: Optional[str], action: str,
                  resource: Optional[str] = None) -> Decision:
        return self.keys.authorize(secret, action, resource, self.is_subscribed)

    def _require(self, secret: Optional[str], action: str,
                 resource: Optional[str] = None) -> ApiKey:
        key = self.keys.by_secret(secret)
        if key is None:
            raise Unauthorized("missing, unknown, or revoked API key")
        decision = self.authorize(secret, action, resource)
        if not decision.allow:
            raise Forbidden(decision.reason)
        return key

    def _issue(self, role: str, scope: Optional[str], label: str) -> ApiKey:
        key_id = "key-" + _secrets.token_hex(6)
        key = ApiKey(
            id=key_id, secret=generate_secret(), role=role, scope=scope,
            label=label, created_at=self.clock())
        self._commit("key-issued", {
            "id": key.id, "secret": key.secret, "role": key.role,
            "scope": key.scope, "label": key.label,
            "created_at": format_timestamp(key.created_at)})
        return self.keys.by_id(key.id)

    def issue_key(self, role: str, scope: Optional[str], label: str,
                  caller: Optional[str]) -> ApiKey:
        with self._lock:
            self._require(caller, "issue_key")
            if role == ROLE_PROVIDER and scope is None:
                raise InvalidScope("DataProvider keys must be feed-scoped")
            if role == ROLE_OPERATOR and scope is not None:
                raise InvalidScope("PlatformOperator keys cover all feeds")
            if scope is not None and scope not in self.feeds:
                raise UnknownFeed(scope)
            return self._issue(role, scope, label)

    def revoke_key(self, key_id: str, caller: Optional[str]):
        with self._lock:
            self._require(caller, "revoke_key")
            self.keys.by_id(key_id)  # UnknownKey before logging
            self._commit("key-revoked", {"id": key_id})

    # -- registry ------------------------------------------------------------

    def create_feed(self, feed_id: str, title: str, location: GeoPoint,
                    tags, provider: str) -> Tuple[Feed, ApiKey]:
        """Register a feed; auto-issues its feed-scoped provider key."""
        with self._lock:
            validate_feed_id(feed_id)
            if feed_id in self.feeds:
                raise DuplicateFeed(feed_id)
            if not self.keys.has(provider):
                raise UnknownProvider(provider)
            provider_key = self.keys.by_id(provider)
            if provider_key.role not in (ROLE_PROVIDER, ROLE_OPERATOR):
                raise UnknownProvider(
                    f"{provider} is not a provider or operator key")
            self._commit("feed-created", {
                "id": feed_id, "title": title,
                "lat": location.lat, "lon": location.lon,
                "tags": sorted(tags), "provider": provider,
                "created_at": format_timestamp(self.clock())})
            auto_key = self._issue(ROLE_PROVIDER, feed_id, f"feed key for {feed_id}")
            return self.feeds[feed_id], auto_key

    def create_datastream(self, feed_id: str, stream: Datastream,
                          caller: str) -> Datastream:
        with self._lock:
            feed = self.get_feed(feed_id)
            key = self.keys.by_id(caller)
            decision = self.keys.authorize(
                key.secret, "create_stream", feed_id, self.is_subscribed)
            if not decision.allow:
                raise Forbidden(decision.reason)
            if stream.id in feed.streams:
                raise DuplicateStream(f"{feed_id}/{stream.id}")
            self._commit("stream-created", {
                "feed": feed_id, "id": stream.id,
                "unit_label": stream.unit_label,
                "unit_symbol": stream.unit_symbol,
                "tags": sorted(stream.tags)})
            return feed.streams[stream.id]

    def get_feed(self, feed_id: str) -> Feed:
        try:
            return self.feeds[feed_id]
        except KeyError:
            raise UnknownFeed(feed_id) from None

    def list_feeds(self, tag: Optional[str] = None,
                   near: Optional[Tuple[GeoPoint, float]] = None) -> List[Feed]:
        feeds = sorted(self.feeds.values(), key=lambda f: f.id)
        if tag is not None:
            feeds = [f for f in feeds if tag in f.tags]
        if near is not None:
            center, radius_km = near
            if not (radius_km >= 0):
                raise InvalidFilter(f"radius must be non-negative: {radius_km}")
            inside = set(feeds_near(feeds, center, radius_km))
            feeds = [f for f in feeds if f.id in inside]
        return feeds

    def record_event(self, event: EventRecord, caller: str):
        with self._lock:
            self.get_feed(event.feed)
            key = self.keys.by_id(caller)
            decision = self.keys.authorize(
                key.secret, "ingest", event.feed, self.is_subscribed)
            if not decision.allow:
                raise Forbidden(decision.reason)
            self._commit("event-recorded", {
                "feed": event.feed, "at": format_timestamp(event.at),
                "kind": event.kind, "description": event.description})

    def record_context(self, context: ContextRecord, caller: str):
        with self._lock:
            self.get_feed(context.feed)
            key = self.keys.by_id(caller)
            decision = self.keys.authorize(
                key.secret, "ingest", context.feed, self.is_subscribed)
            if not decision.allow:
                raise Forbidden(decision.reason)
            self._commit("context-recorded", {
                "feed": context.feed, "at": format_timestamp(context.at),
                "key": context.key, "value": context.value})

    def subscribe(self, developer: str, feed_id: str) -> Subscription:
        with self._lock:
            self.get_feed(feed_id)
            key = self.keys.by_id(developer)
            if key.role != ROLE_DEVELOPER or key.revoked:
                raise Forbidden("wrong-role")
            existing = self.subscriptions.get((developer, feed_id))
            if existing is not None:
                return existing
            self._commit("subscription-created", {
                "subscriber": developer, "feed": feed_id,
                "created_at": format_timestamp(self.clock())})
            return self.subscriptions[(developer, feed_id)]

    # -- ingress -------------------------------------------------------------

    def ingest_eeml(self, feed_id: str, secret: Optional[str], body: bytes,
                    strict: bool = True) -> IngestReport:
        with self._lock:
            if self.keys.by_secret(secret) is None:
                raise Unauthorized("missing, unknown, or revoked API key")
            feed = self.get_feed(feed_id)
            self._require(secret, "ingest", feed_id)
            try:
                doc = eeml.parse_eeml(body)
            except HubError as exc:
                raise MalformedDocument(f"{exc.code}: {exc.message}") from None

            report = IngestReport(feed=feed_id, accepted=0)
            for element in doc.data_elements:
                if element.id not in feed.streams:
                    if strict:
                        report.rejected.append((element.id, "unknown-stream"))
                        continue
                    label = element.unit_label or ""
                    symbol = element.unit_symbol or ""
                    if symbol and not label:
                        label = symbol
                    self._commit("stream-created", {
                        "feed": feed_id, "id": element.id,
                        "unit_label": label, "unit_symbol": symbol,
                        "tags": sorted(element.tags)})
                self._commit("datapoint-appended", {
                    "feed": feed_id, "stream": element.id,
                    "at": format_timestamp(element.at),
                    "value": element.current_value})
                report.accepted += 1
            return report

    def ingest_event(self, feed_id: str, secret: Optional[str],
                     event: EventRecord):
        with self._lock:
            if self.keys.by_secret(secret) is None:
                raise Unauthorized("missing, unknown, or revoked API key")
            self.get_feed(feed_id)
            key = self._require(secret, "ingest", feed_id)
            self.record_event(event, key.id)

    def ingest_context(self, feed_id: str, secret: Optional[str],
                       context: ContextRecord):
        with self._lock:
            if self.keys.by_secret(secret) is None:
                raise Unauthorized("missing, unknown, or revoked API key")
            self.get_feed(feed_id)
            key = self._require(secret, "ingest", feed_id)
            self.record_context(context, key.id)

    def append(self, ref: StreamRef, point: Datapoint):
        """Unauthenticated low-level append (tests and internal callers)."""
        with self._lock:
            if not self.store.known(ref):
                raise UnknownStream(f"{ref.feed}/{ref.stream}")
            self._commit("datapoint-appended", {
                "feed": ref.feed, "stream": ref.stream,
                "at": format_timestamp(point.at), "value": point.value})

    # -- egress --------------------------------------------------------------

    def _require_stream(self, ref: StreamRef):
        self.get_feed(ref.feed)
        if not self.store.known(ref):
            raise UnknownStream(f"{ref.feed}/{ref.stream}")

    def read_datapoints(self, ref: StreamRef, start: datetime, end: datetime,
                        limit: int, secret: Optional[str]) -> List[Datapoint]:
        if self.keys.by_secret(secret) is None:
            raise Unauthorized("missing, unknown, or revoked API key")
        self._require_stream(ref)
        self._require(secret, "read_data", ref.feed)
        return self.store.query_range(ref, start, end, limit)

    def aggregate(self, ref: StreamRef, fn: str, window_s: int,
                  start: datetime, end: datetime,
                  secret: Optional[str]) -> List[AggregateBucket]:
        if self.keys.by_secret(secret) is None:
            raise Unauthorized("missing, unknown, or revoked API key")
        self._require_stream(ref)
        self._require(secret, "read_data", ref.feed)
        if fn not in AGGREGATE_FNS:
            raise InvalidWindow(f"unknown aggregate fn {fn!r}")
        if not (isinstance(window_s, int) and window_s >= 1):
            raise InvalidWindow(f"window must be a positive integer: {window_s}")
        if start > end:
            raise InvalidRange(f"start {start} after end {end}")

        points = self.store.query_range(ref, start, end, limit=1 << 62)
        buckets = {}  # k -> [values]
        for p in points:
            k = int((p.at - start).total_seconds() // window_s)
            buckets.setdefault(k, []).append(parse_decimal(p.value))
        out = []
        for k in sorted(buckets):
            values = buckets[k]
            if fn == "min":
                value = min(values)
            elif fn == "max":
                value = max(values)
            elif fn == "sum":
                value = sum(values)
            elif fn == "count":
                value = float(len(values))
            else:
                value = sum(values) / len(values)
            out.append(AggregateBucket(
                window_start=start + timedelta(seconds=k * window_s),
                fn=fn, value=value))
        return out

    def feed_snapshot(self, feed_id: str) -> eeml.EnvironmentDocument:
        feed = self.get_feed(feed_id)
        elements = []
        for stream_id in sorted(feed.streams):
            stream = feed.streams[stream_id]
            point = self.store.latest(StreamRef(feed_id, stream_id))
            if point is None:
                continue
            elements.append(eeml.DataElement(
                id=stream_id,
                current_value=point.value,
                at=point.at,
                tags=sorted(stream.tags),
                unit_label=stream.unit_label if stream.unit_label else None,
                unit_symbol=stream.unit_symbol if stream.unit_symbol else None))
        if not elements:
            raise EmptyFeed(f"feed {feed_id} has no datapoints")
        return eeml.EnvironmentDocument(
            updated=max(el.at for el in elements),
            title=feed.title,
            data_elements=elements,
            environment_id=feed_id,
            location=feed.location)
