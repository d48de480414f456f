"""Time-series storage and the geodesic filter.

Points per stream are kept sorted by timestamp with last-write-wins on
equal timestamps; ranges are inclusive at both ends. The GIS role is met
by a haversine predicate over feed locations.
"""
from __future__ import annotations

import bisect
import math
from datetime import datetime
from typing import List, Optional

from .errors import InvalidFilter, InvalidRange, UnknownStream
from .model import Datapoint, GeoPoint, StreamRef

EARTH_RADIUS_KM = 6371.0088


def haversine_km(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance over the mean Earth radius."""
    phi1, phi2 = math.radians(a.lat), math.radians(b.lat)
    dphi = math.radians(b.lat - a.lat)
    dlam = math.radians(b.lon - a.lon)
    h = (math.sin(dphi / 2) ** 2
         + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2) ** 2)
    return 2 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(h)))


def feeds_near(feeds, center: GeoPoint, radius_km: float) -> List[str]:
    """Ids of feeds within radius_km of center (inclusive), id-sorted."""
    if not (radius_km >= 0):
        raise InvalidFilter(f"radius must be non-negative: {radius_km}")
    hits = [f.id for f in feeds
            if haversine_km(f.location, center) <= radius_km]
    return sorted(hits)


class TimeseriesStore:
    """In-memory per-stream sorted series; durability lives in the hub log."""

    def __init__(self):
        self._series = {}  # StreamRef -> (timestamps: [datetime], points: [Datapoint])

    def register(self, ref: StreamRef):
        self._series.setdefault(ref, ([], []))

    def known(self, ref: StreamRef) -> bool:
        return ref in self._series

    def _get(self, ref: StreamRef):
        try:
            return self._series[ref]
        except KeyError:
            raise UnknownStream(f"{ref.feed}/{ref.stream}") from None

    def append(self, ref: StreamRef, point: Datapoint):
        times, points = self._get(ref)
        i = bisect.bisect_left(times, point.at)
        if i < len(times) and times[i] == point.at:
            points[i] = point  # last write wins
        else:
            times.insert(i, point.at)
            points.insert(i, point)

    def query_range(self, ref: StreamRef, start: datetime, end: datetime,
                    limit: int) -> List[Datapoint]:
        if start > end:
            raise InvalidRange(f"start {start} after end {end}")
        if limit < 1:
            raise InvalidRange(f"limit must be >= 1: {limit}")
        times, points = self._get(ref)
        lo = bisect.bisect_left(times, start)
        hi = bisect.bisect_right(times, end)
        return points[lo:min(hi, lo + limit)]

    def latest(self, ref: StreamRef) -> Optional[Datapoint]:
        _, points = self._get(ref)
        return points[-1] if points else None

    def count(self, ref: StreamRef) -> int:
        return len(self._get(ref)[1])
