import json
from datetime import datetime, timedelta, timezone

import pytest

from cityhub.adapter import (
    AdapterMapping,
    _FileCursor,
    convert_csv,
    load_mapping,
)
from cityhub.errors import (
    DuplicateStreamRule,
    EmptyInput,
    MalformedMapping,
    MissingColumn,
    SourceUnreadable,
    UnsupportedTimestampFormat,
)

from conftest import CSV_HEADER, MAPPING, hourly_csv

T0 = datetime(2016, 7, 20, 0, 0, tzinfo=timezone.utc)


def test_load_canonical_mapping(mapping_bytes):
    mapping = load_mapping(mapping_bytes)
    assert mapping.feed_id == "abu-dhabi-weather"
    assert mapping.timestamp_column == "TimeUTC"
    assert len(mapping.columns) == 5
    assert mapping.columns[0].stream == "temperature"


def test_duplicate_stream_rule():
    bad = dict(MAPPING, columns=MAPPING["columns"] + [
        {"column": "Other", "stream": "temperature"}])
    with pytest.raises(DuplicateStreamRule):
        load_mapping(json.dumps(bad).encode())


def test_unsupported_timestamp_format():
    bad = dict(MAPPING, timestamp_format="epoch")
    with pytest.raises(UnsupportedTimestampFormat):
        load_mapping(json.dumps(bad).encode())


@pytest.mark.parametrize("mutate", [
    lambda m: m.pop("feed_id"),
    lambda m: m.update(columns=[]),
    lambda m: m.update(columns=[{"column": "TimeUTC", "stream": "x"}]),
    lambda m: m.update(columns=[{"column": "", "stream": "x"}]),
])
def test_malformed_mappings(mutate):
    bad = json.loads(json.dumps(MAPPING))
    mutate(bad)
    with pytest.raises(MalformedMapping):
        load_mapping(json.dumps(bad).encode())


def test_not_json():
    with pytest.raises(MalformedMapping):
        load_mapping(b"{nope")


@pytest.fixture
def mapping(mapping_bytes):
    return load_mapping(mapping_bytes)


def test_convert_single_row(mapping):
    csv_data = (CSV_HEADER + "\n"
                "2016-07-20T12:00:00Z,41.5,62,0.0,18,1003\n").encode()
    documents = convert_csv(mapping, csv_data)
    assert len(documents) == 1
    doc = documents[0]
    assert len(doc.data_elements) == 5
    by_id = {el.id: el for el in doc.data_elements}
    assert by_id["temperature"].current_value == "41.5"  # verbatim cell text
    assert by_id["humidity"].current_value == "62"
    assert by_id["temperature"].at == T0 + timedelta(hours=12)
    assert by_id["temperature"].unit_symbol == "C"


def test_convert_empty_cell_skipped(mapping):
    csv_data = (CSV_HEADER + "\n"
                "2016-07-20T12:00:00Z,41.5,,0.0,18,1003\n").encode()
    [doc] = convert_csv(mapping, csv_data)
    assert len(doc.data_elements) == 4
    assert "humidity" not in {el.id for el in doc.data_elements}


def test_convert_non_numeric_cell_skipped(mapping):
    csv_data = (CSV_HEADER + "\n"
                "2016-07-20T12:00:00Z,41.5,N/A,0.0,18,1003\n").encode()
    [doc] = convert_csv(mapping, csv_data)
    assert "humidity" not in {el.id for el in doc.data_elements}


def test_convert_bad_timestamp_row_skipped(mapping):
    csv_data = (CSV_HEADER + "\n"
                "yesterday,41.5,62,0.0,18,1003\n"
                "2016-07-20T12:00:00Z,41.5,62,0.0,18,1003\n").encode()
    documents = convert_csv(mapping, csv_data)
    assert len(documents) == 1


def test_convert_unmapped_column_ignored(mapping):
    csv_data = (CSV_HEADER + ",Comment\n"
                "2016-07-20T12:00:00Z,41.5,62,0.0,18,1003,sunny\n").encode()
    [doc] = convert_csv(mapping, csv_data)
    assert len(doc.data_elements) == 5


def test_convert_24_rows(mapping):
    documents = convert_csv(mapping, hourly_csv())
    assert len(documents) == 24
    assert all(len(doc.data_elements) == 5 for doc in documents)


def test_convert_missing_mapped_column(mapping):
    csv_data = b"TimeUTC,TemperatureC\n2016-07-20T12:00:00Z,41.5\n"
    with pytest.raises(MissingColumn):
        convert_csv(mapping, csv_data)


def test_convert_empty_input(mapping):
    with pytest.raises(EmptyInput):
        convert_csv(mapping, b"")


def test_losslessness(mapping):
    """Converted values reproduce CSV cell text exactly, odd formats included."""
    csv_data = (CSV_HEADER + "\n"
                "2016-07-20T12:00:00Z,041.50,6.2e1,0.0,+18,1003.000\n").encode()
    [doc] = convert_csv(mapping, csv_data)
    by_id = {el.id: el.current_value for el in doc.data_elements}
    assert by_id == {"temperature": "041.50", "humidity": "6.2e1",
                     "precipitation": "0.0", "wind_speed": "+18",
                     "pressure": "1003.000"}


def test_cursor_directory_mode(tmp_path):
    (tmp_path / "b.csv").write_bytes(hourly_csv(seed=1))
    (tmp_path / "a.csv").write_bytes(hourly_csv(seed=0))
    cursor = _FileCursor(str(tmp_path))
    batches = cursor.pending()
    assert batches == [hourly_csv(seed=0), hourly_csv(seed=1)]  # lexicographic
    assert cursor.pending() == []  # already processed
    (tmp_path / "c.csv").write_bytes(hourly_csv(seed=2))
    assert cursor.pending() == [hourly_csv(seed=2)]


def test_cursor_file_mode_appends(tmp_path):
    path = tmp_path / "day.csv"
    data = hourly_csv().decode().splitlines(keepends=True)
    path.write_text("".join(data[:13]))  # header + 12 rows
    cursor = _FileCursor(str(path))
    [batch] = cursor.pending()
    assert batch.decode().count("\n") == 13
    assert cursor.pending() == []
    path.write_text("".join(data))  # 12 more rows appended
    [batch] = cursor.pending()
    assert batch.decode().splitlines()[0] == data[0].strip()
    assert batch.decode().count("2016-07-20T") == 12


def test_cursor_unreadable_source(tmp_path):
    cursor = _FileCursor(str(tmp_path / "missing"))
    with pytest.raises(SourceUnreadable):
        cursor.pending()
