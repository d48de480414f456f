import json
from datetime import datetime, timedelta, timezone

import pytest

from cityhub import Datastream, GeoPoint, Hub

# one weather feed per UAE emirate
EMIRATES = [
    ("abu-dhabi-weather", "Abu Dhabi weather", 24.45, 54.38),
    ("ajman-weather", "Ajman weather", 25.40, 55.44),
    ("dubai-weather", "Dubai weather", 25.20, 55.27),
    ("fujairah-weather", "Fujairah weather", 25.13, 56.33),
    ("ras-al-khaimah-weather", "Ras al-Khaimah weather", 25.79, 55.94),
    ("sharjah-weather", "Sharjah weather", 25.35, 55.42),
    ("umm-al-quwain-weather", "Umm al-Quwain weather", 25.56, 55.55),
]

WEATHER_STREAMS = [
    ("temperature", "Celsius", "C"),
    ("humidity", "Percent", "%"),
    ("precipitation", "Millimetres", "mm"),
    ("wind_speed", "KilometresPerHour", "km/h"),
    ("pressure", "Hectopascal", "hPa"),
]

CSV_HEADER = "TimeUTC,TemperatureC,HumidityPct,PrecipitationMM,WindSpeedKPH,PressureHPa"

MAPPING = {
    "feed_id": "abu-dhabi-weather",
    "timestamp_column": "TimeUTC",
    "timestamp_format": "ISO8601",
    "columns": [
        {"column": "TemperatureC", "stream": "temperature",
         "unit_label": "Celsius", "unit_symbol": "C"},
        {"column": "HumidityPct", "stream": "humidity",
         "unit_label": "Percent", "unit_symbol": "%"},
        {"column": "PrecipitationMM", "stream": "precipitation",
         "unit_label": "Millimetres", "unit_symbol": "mm"},
        {"column": "WindSpeedKPH", "stream": "wind_speed",
         "unit_label": "KilometresPerHour", "unit_symbol": "km/h"},
        {"column": "PressureHPa", "stream": "pressure",
         "unit_label": "Hectopascal", "unit_symbol": "hPa"},
    ],
}

CANONICAL_EEML = b"""<eeml xmlns="http://www.eeml.org/xsd/0.5.1" version="0.5.1">
  <environment updated="2016-07-20T12:00:00Z" id="abu-dhabi-weather">
    <title>Abu Dhabi weather</title>
    <location><lat>24.45</lat><lon>54.38</lon></location>
    <data id="temperature">
      <tag>weather</tag>
      <current_value at="2016-07-20T12:00:00Z">41.5</current_value>
      <unit symbol="C">Celsius</unit>
    </data>
  </environment>
</eeml>
"""

DAY_START = datetime(2016, 7, 20, 0, 0, tzinfo=timezone.utc)


def hourly_csv(seed: int = 0, rows: int = 24) -> bytes:
    """A fixture day: deterministic hourly weather readings."""
    lines = [CSV_HEADER]
    for hour in range(rows):
        at = DAY_START + timedelta(hours=hour)
        lines.append(",".join([
            at.strftime("%Y-%m-%dT%H:%M:%SZ"),
            f"{35 + ((hour + seed) % 10) * 0.5}",
            f"{50 + (hour * 7 + seed) % 40}",
            f"{0.0 if hour % 6 else 0.2}",
            f"{10 + (hour * 3 + seed) % 25}",
            f"{1000 + (hour + seed) % 8}",
        ]))
    return ("\n".join(lines) + "\n").encode()


class TickingClock:
    """Deterministic clock; one second per call."""

    def __init__(self, start=DAY_START):
        self.now = start

    def __call__(self):
        self.now += timedelta(seconds=1)
        return self.now


@pytest.fixture
def hub():
    h = Hub(clock=TickingClock())
    yield h
    h.close()


@pytest.fixture
def operator(hub):
    return hub.keys.by_secret(hub.bootstrap_secret)


def seed_emirates(hub, operator, with_streams=True):
    """Create the 7 emirate feeds (and optionally the 5 weather streams)."""
    feed_keys = {}
    for fid, title, lat, lon in EMIRATES:
        _, key = hub.create_feed(fid, title, GeoPoint(lat, lon), {"weather"},
                                 operator.id)
        feed_keys[fid] = key
        if with_streams:
            for sid, label, symbol in WEATHER_STREAMS:
                hub.create_datastream(fid, Datastream(sid, label, symbol),
                                      caller=key.id)
    return feed_keys


@pytest.fixture
def seeded(hub, operator):
    return seed_emirates(hub, operator)


@pytest.fixture
def mapping_bytes():
    return json.dumps(MAPPING).encode()
