"""Edge adapter: CSV in, EEML out, pushed to the hub on a schedule.

The adapter reads provider-native CSV (RFC-4180, header row, ISO-8601
timestamps) and emits one environment document per data row. Sources are
files or directories; re-running over the same rows is harmless because
the store is last-write-wins on equal timestamps.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import os
import time
from dataclasses import dataclass, field
from typing import List, Optional

import requests

from .eeml import DataElement, EnvironmentDocument, serialize_eeml
from .errors import (
    DuplicateStreamRule,
    EmptyInput,
    HubUnreachable,
    MalformedMapping,
    MissingColumn,
    MissingHeader,
    SourceUnreadable,
    UnsupportedTimestampFormat,
)
from .model import (
    parse_decimal,
    parse_timestamp,
    validate_feed_id,
    validate_stream_id,
)

log = logging.getLogger(__name__)


@dataclass
class ColumnRule:
    column: str
    stream: str
    unit_label: Optional[str] = None
    unit_symbol: Optional[str] = None


@dataclass
class AdapterMapping:
    feed_id: str
    timestamp_column: str
    timestamp_format: str
    columns: List[ColumnRule]


@dataclass
class RunSummary:
    submitted: int = 0
    accepted: int = 0
    rejected: int = 0
    skipped_rows: int = 0
    errors: list = field(default_factory=list)


def load_mapping(document: bytes) -> AdapterMapping:
    try:
        payload = json.loads(document)
        feed_id = payload["feed_id"]
        ts_column = payload["timestamp_column"]
        ts_format = payload["timestamp_format"]
        rules = [
            ColumnRule(
                column=entry["column"],
                stream=entry["stream"],
                unit_label=entry.get("unit_label"),
                unit_symbol=entry.get("unit_symbol"),
            )
            for entry in payload["columns"]
        ]
    except (ValueError, KeyError, TypeError) as exc:
        raise MalformedMapping(str(exc)) from None

    validate_feed_id(feed_id)
    if ts_format != "ISO8601":
        raise UnsupportedTimestampFormat(ts_format)
    if not rules:
        raise MalformedMapping("columns must be non-empty")
    seen = set()
    for rule in rules:
        if not rule.column or not rule.stream:
            raise MalformedMapping("column and stream must be non-empty")
        validate_stream_id(rule.stream)
        if rule.stream in seen:
            raise DuplicateStreamRule(rule.stream)
        seen.add(rule.stream)
        if rule.column == ts_column:
            raise MalformedMapping(
                f"timestamp column {ts_column!r} cannot be mapped to a stream")
    return AdapterMapping(
        feed_id=feed_id, timestamp_column=ts_column,
        timestamp_format=ts_format, columns=rules)


def convert_csv(mapping: AdapterMapping, data: bytes) -> List[EnvironmentDocument]:
    """One document per valid data row; cell text carried over verbatim."""
    text = data.decode("utf-8-sig")
    if not text.strip():
        raise EmptyInput("CSV source is empty")
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise MissingHeader("CSV has no header row") from None
    index = {name: i for i, name in enumerate(header)}
    if mapping.timestamp_column not in index:
        raise MissingColumn(mapping.timestamp_column)
    for rule in mapping.columns:
        if rule.column not in index:
            raise MissingColumn(rule.column)

    documents = []
    for rownum, row in enumerate(reader, 2):
        if not any(cell.strip() for cell in row):
            continue
        try:
            at = parse_timestamp(row[index[mapping.timestamp_column]])
        except (ValueError, IndexError) as exc:
            log.warning("row %d skipped: bad timestamp (%s)", rownum, exc)
            continue
        elements = []
        for rule in mapping.columns:
            try:
                cell = row[index[rule.column]]
            except IndexError:
                continue
            if not cell.strip():
                continue
            try:
                parse_decimal(cell)
            except ValueError:
                log.warning("row %d column %s skipped: non-numeric %r",
                            rownum, rule.column, cell)
                continue
            elements.append(DataElement(
                id=rule.stream, current_value=cell, at=at,
                unit_label=rule.unit_label, unit_symbol=rule.unit_symbol))
        if not elements:
            log.warning("row %d produced no data elements", rownum)
            continue
        documents.append(EnvironmentDocument(
            updated=at, title=mapping.feed_id, data_elements=elements,
            environment_id=mapping.feed_id))
    return documents


def submit(mapping: AdapterMapping, documents, hub_url: str, key: str,
           summary: RunSummary, session=None):
    http = session or requests
    url = f"{hub_url.rstrip('/')}/v1/feeds/{mapping.feed_id}"
    for doc in documents:
        try:
            response = http.put(
                url, data=serialize_eeml(doc),
                headers={"X-Api-Key": key, "Content-Type": "application/xml"},
                timeout=30)
        except requests.RequestException as exc:
            raise HubUnreachable(str(exc)) from None
        summary.submitted += 1
        if response.status_code == 200:
            body = response.json()
            summary.accepted += body.get("accepted", 0)
            summary.rejected += len(body.get("rejected", []))
        else:
            summary.errors.append(
                (doc.data_elements[0].at.isoformat(), response.status_code))


class _FileCursor:
    """Tracks what has already been converted across cycles."""

    def __init__(self, source: str):
        self.source = source
        self.processed_files = set()
        self.rows_seen = 0

    def pending(self) -> List[bytes]:
        if not os.path.exists(self.source):
            raise SourceUnreadable(self.source)
        if os.path.isdir(self.source):
            batches = []
            for name in sorted(os.listdir(self.source)):
                path = os.path.join(self.source, name)
                if name in self.processed_files or not os.path.isfile(path):
                    continue
                with open(path, "rb") as fh:
                    batches.append(fh.read())
                self.processed_files.add(name)
            return batches
        with open(self.source, "rb") as fh:
            text = fh.read().decode("utf-8-sig")
        lines = text.splitlines(keepends=True)
        if not lines:
            return []
        header, rows = lines[0], lines[1:]
        fresh = rows[self.rows_seen:]
        self.rows_seen = len(rows)
        if not fresh:
            return []
        return [(header + "".join(fresh)).encode("utf-8")]


def run_adapter(mapping: AdapterMapping, source: str, hub_url: str, key: str,
                interval_s: float = 3600, once: bool = False,
                session=None) -> RunSummary:
    """Poll the source, convert fresh rows, and push them to the hub."""
    summary = RunSummary()
    cursor = _FileCursor(source)
    while True:
        try:
            batches = cursor.pending()
            for batch in batches:
                try:
                    documents = convert_csv(mapping, batch)
                except EmptyInput:
                    continue
                submit(mapping, documents, hub_url, key, summary,
                       session=session)
        except HubUnreachable:
            if once:
                raise
            log.warning("hub unreachable; retrying next cycle")
        if once:
            return summary
        time.sleep(interval_s)
