"""Parsing, validation, and summary statistics for network-flow threat CSVs.

The expected layout is comma-delimited UTF-8 with a mandatory header row of
14 named columns. Binding is by header name rather than position, so
reordered exports parse identically, and a leading unnamed index column (as
produced by dataframe dumps) is tolerated and discarded.
"""

from __future__ import annotations

import csv
import enum
import io
import sys
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

CANONICAL_COLUMNS = [
    "Time",
    "Protocol",
    "Flag",
    "Family",
    "Clusters",
    "SeedAddress",
    "ExpAddress",
    "BTC",
    "USD",
    "Netflow_Bytes",
    "IPaddress",
    "Threats",
    "Port",
    "Prediction",
]

PROTOCOL_VOCABULARY = ("ICMP", "TCP", "UDP")

COLUMN_FIELDS = {
    "Time": "time",
    "Protocol": "protocol",
    "Flag": "flag",
    "Family": "family",
    "Clusters": "clusters",
    "SeedAddress": "seed_address",
    "ExpAddress": "exp_address",
    "BTC": "btc",
    "USD": "usd",
    "Netflow_Bytes": "netflow_bytes",
    "IPaddress": "ip_class",
    "Threats": "threat",
    "Port": "port",
    "Prediction": "prediction",
}

_INT_COLUMNS = ("Time", "Clusters", "BTC", "USD", "Netflow_Bytes", "Port")
_NONNEGATIVE_COLUMNS = ("Time", "BTC", "USD", "Netflow_Bytes")
_STRING_COLUMNS = ("Flag", "Family", "SeedAddress", "ExpAddress", "IPaddress", "Threats")


class SchemaError(ValueError):
    """The header row does not provide the expected columns."""


class RowError(ValueError):
    """A data row failed validation; `row` is the 1-based data row number."""

    def __init__(self, row: int, message: str):
        super().__init__(f"row {row}: {message}")
        self.row = row


class ThreatClass(enum.IntEnum):
    """Label classes, coded by lexicographic rank of the tokens A < S < SS."""

    ANOMALY = 0
    SIGNATURE = 1
    SYNTHETIC_SIGNATURE = 2

    @property
    def token(self) -> str:
        return _CLASS_TO_TOKEN[self]

    @classmethod
    def from_token(cls, token: str) -> "ThreatClass":
        try:
            return _TOKEN_TO_CLASS[token]
        except KeyError:
            raise ValueError(f"unknown prediction label {token!r}") from None


_TOKEN_TO_CLASS = {
    "A": ThreatClass.ANOMALY,
    "S": ThreatClass.SIGNATURE,
    "SS": ThreatClass.SYNTHETIC_SIGNATURE,
}
_CLASS_TO_TOKEN = {cls: token for token, cls in _TOKEN_TO_CLASS.items()}


@dataclass(frozen=True, slots=True)
class FlowRecord:
    """One parsed 14-field flow row."""

    time: int
    protocol: str
    flag: str
    family: str
    clusters: int
    seed_address: str
    exp_address: str
    btc: int
    usd: int
    netflow_bytes: int
    ip_class: str
    threat: str
    port: int
    prediction: ThreatClass


@dataclass
class DatasetSummary:
    """Exact counts over a record list: rows, distinct values, histograms."""

    row_count: int
    distinct_counts: dict[str, int]
    family_counts: dict[str, int]
    class_counts: dict[ThreatClass, int]

    @property
    def family_count(self) -> int:
        return len(self.family_counts)

    def to_json_dict(self) -> dict:
        return {
            "row_count": self.row_count,
            "column_count": len(CANONICAL_COLUMNS),
            "family_count": self.family_count,
            "distinct_counts": dict(self.distinct_counts),
            "family_counts": dict(self.family_counts),
            "class_counts": {cls.token: n for cls, n in self.class_counts.items()},
        }


def parse_dataset(source, schema: Sequence[str] | None = None) -> list[FlowRecord]:
    """Parse a CSV path, bytes, or stream into a list of FlowRecords.

    `source` may be a filesystem path (str or Path), raw CSV bytes, or a
    file-like object. Raises SchemaError when the header is wrong and
    RowError, carrying the 1-based data row number, for the first bad row.
    """
    expected = list(schema) if schema is not None else list(CANONICAL_COLUMNS)
    reader = csv.reader(_as_text_stream(source))
    header = next(reader, None)
    if header is None:
        raise SchemaError("empty input: a header row is required")

    drop_index = len(header) > 0 and header[0].strip() == ""
    names = [cell.strip() for cell in (header[1:] if drop_index else header)]
    duplicates = sorted(name for name, count in Counter(names).items() if count > 1)
    if duplicates:
        raise SchemaError(f"duplicate column(s): {', '.join(duplicates)}")
    missing = [c for c in expected if c not in names]
    extra = [c for c in names if c not in expected]
    if missing or extra:
        parts = []
        if missing:
            parts.append("missing column(s): " + ", ".join(missing))
        if extra:
            parts.append("unexpected column(s): " + ", ".join(extra))
        raise SchemaError("; ".join(parts))

    offset = 1 if drop_index else 0
    positions = {name: i + offset for i, name in enumerate(names)}
    width = len(names) + offset

    records = []
    for row_no, raw in enumerate(reader, start=1):
        if not raw:
            continue
        if len(raw) != width:
            raise RowError(row_no, f"expected {width} fields, found {len(raw)}")
        records.append(_parse_row(raw, positions, row_no))
    return records


def _parse_row(raw: list[str], positions: dict[str, int], row_no: int) -> FlowRecord:
    def cell(column: str) -> str:
        return raw[positions[column]].strip()

    values: dict[str, object] = {}
    for column in _INT_COLUMNS:
        text = cell(column)
        try:
            values[COLUMN_FIELDS[column]] = int(text)
        except ValueError:
            raise RowError(row_no, f"{column}: non-integer value {text!r}") from None

    for column in _NONNEGATIVE_COLUMNS:
        field = COLUMN_FIELDS[column]
        if values[field] < 0:
            raise RowError(row_no, f"{column}: negative value {values[field]}")
    port = values["port"]
    if not 0 <= port <= 65535:
        raise RowError(row_no, f"Port: value {port} outside 0..65535")

    protocol = sys.intern(cell("Protocol"))
    if protocol not in PROTOCOL_VOCABULARY:
        raise RowError(row_no, f"Protocol: unknown value {protocol!r}")
    values["protocol"] = protocol

    for column in _STRING_COLUMNS:
        values[COLUMN_FIELDS[column]] = sys.intern(cell(column))

    token = cell("Prediction")
    try:
        values["prediction"] = ThreatClass.from_token(token)
    except ValueError:
        raise RowError(row_no, f"Prediction: unknown label {token!r}") from None

    return FlowRecord(**values)  # type: ignore[arg-type]


def records_to_csv(records: Iterable[FlowRecord]) -> str:
    """Serialize records to canonical-header CSV text; round-trips parse_dataset."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CANONICAL_COLUMNS)
    for r in records:
        writer.writerow(
            [
                r.time,
                r.protocol,
                r.flag,
                r.family,
                r.clusters,
                r.seed_address,
                r.exp_address,
                r.btc,
                r.usd,
                r.netflow_bytes,
                r.ip_class,
                r.threat,
                r.port,
                r.prediction.token,
            ]
        )
    return buffer.getvalue()


def summarize(records: Sequence[FlowRecord]) -> DatasetSummary:
    """Row count, per-column distinct-value counts, family and class histograms."""
    families = Counter(r.family for r in records)
    classes = Counter(r.prediction for r in records)
    distinct = {
        column: len({getattr(r, COLUMN_FIELDS[column]) for r in records})
        for column in CANONICAL_COLUMNS
    }
    return DatasetSummary(
        row_count=len(records),
        distinct_counts=distinct,
        family_counts=dict(sorted(families.items(), key=lambda kv: (-kv[1], kv[0]))),
        class_counts={cls: classes.get(cls, 0) for cls in ThreatClass},
    )


def _as_text_stream(source) -> io.StringIO:
    if isinstance(source, (str, Path)):
        return io.StringIO(Path(source).read_text(encoding="utf-8"))
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(source.decode("utf-8"))
    data = source.read()
    if isinstance(data, (bytes, bytearray)):
        data = data.decode("utf-8")
    return io.StringIO(data)
