"""cityhub: an IoT data hub with geolocated feeds, EEML ingestion,
Hypercat discovery, key-based access policy, and durable time series."""

from .hub import AggregateBucket, Hub, IngestReport
from .model import (
    ContextRecord,
    Datapoint,
    Datastream,
    EventRecord,
    Feed,
    GeoPoint,
    StreamRef,
    Subscription,
)

__all__ = [
    "AggregateBucket",
    "ContextRecord",
    "Datapoint",
    "Datastream",
    "EventRecord",
    "Feed",
    "GeoPoint",
    "Hub",
    "IngestReport",
    "StreamRef",
    "Subscription",
]

__version__ = "0.1.0"
