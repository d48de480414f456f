"""Append-only JSON-lines event log ("hub.log").

One object per line: {"seq": n, "ts": iso, "kind": ..., "payload": {...}}.
Seq numbers start at 1 and are contiguous; replay rejects gaps and
malformed lines so a corrupted file never half-loads.
"""
from __future__ import annotations

import json
import os
from typing import Iterator, Optional

from .errors import CorruptLog

KINDS = {
    "feed-created",
    "stream-created",
    "datapoint-appended",
    "event-recorded",
    "context-recorded",
    "key-issued",
    "key-revoked",
    "subscription-created",
}


class EventLog:
    def __init__(self, path: Optional[str]):
        """path=None keeps the log purely in memory (tests, ephemeral hubs)."""
        self.path = path
        self.seq = 0
        self._fh = None
        if path is not None:
            os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)

    def read_all(self) -> Iterator[dict]:
        """Yield records in order, validating seq continuity."""
        if self.path is None or not os.path.exists(self.path):
            return
        expected = 1
        with open(self.path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                except ValueError:
                    raise CorruptLog(f"line {lineno}: not JSON") from None
                if not isinstance(record, dict):
                    raise CorruptLog(f"line {lineno}: not an object")
                if record.get("seq") != expected:
                    raise CorruptLog(
                        f"line {lineno}: seq {record.get('seq')!r},"
                        f" expected {expected}")
                if record.get("kind") not in KINDS:
                    raise CorruptLog(
                        f"line {lineno}: unknown kind {record.get('kind')!r}")
                if not isinstance(record.get("payload"), dict):
                    raise CorruptLog(f"line {lineno}: missing payload")
                expected += 1
                yield record
        self.seq = expected - 1

    def append(self, kind: str, payload: dict, ts: str) -> dict:
        self.seq += 1
        record = {"seq": self.seq, "ts": ts, "kind": kind, "payload": payload}
        if self.path is not None:
            if self._fh is None:
                self._fh = open(self.path, "a", encoding="utf-8")
            self._fh.write(json.dumps(record, separators=(",", ":")) + "\n")
            self._fh.flush()
            os.fsync(self._fh.fileno())
        return record

    def close(self):
        if self._fh is not None:
            self._fh.close()
            self._fh = None
