"""Streaming reader for Redfin-format county market-tracker TSV files."""

from __future__ import annotations

import bz2
import gzip
import io
import lzma
from dataclasses import dataclass, field
from datetime import date
from itertools import islice
from typing import Iterator, NamedTuple

from . import _kernels
from ._purepy import unquote
from .errors import FormatError, InputIOError

REQUIRED_COLUMNS = (
    "period_begin",
    "period_end",
    "region",
    "property_type",
    "homes_sold_mom",
    "homes_sold_yoy",
    "median_sale_price_mom",
    "median_sale_price_yoy",
)
OPTIONAL_COLUMNS = ("region_type",)
DEFAULT_PROPERTY_TYPE = "All Residential"
BATCH_LINES = 4096

_MAGIC = (
    (b"\x1f\x8b", lambda f: gzip.GzipFile(fileobj=f)),
    (b"BZh", bz2.BZ2File),
    (b"\xfd7zXZ\x00", lzma.LZMAFile),
)


class MarketRecord(NamedTuple):
    period_begin: date
    period_end: date
    region: str
    property_type: str
    homes_sold_mom: float
    homes_sold_yoy: float
    median_sale_price_mom: float
    median_sale_price_yoy: float


@dataclass(frozen=True)
class IngestFilter:
    # None accepts every property type
    property_type: str | None = DEFAULT_PROPERTY_TYPE


@dataclass
class IngestReport:
    source: str = "<stream>"
    reasons: tuple = _kernels.DROP_REASONS
    rows_read: int = 0
    rows_kept: int = 0
    dropped: dict = field(default_factory=dict)

    def __post_init__(self):
        for reason in self.reasons:
            self.dropped.setdefault(reason, 0)

    @property
    def rows_dropped(self):
        return sum(self.dropped.values())

    def is_balanced(self):
        return self.rows_read == self.rows_kept + self.rows_dropped

    def merge(self, other: "IngestReport") -> "IngestReport":
        merged = IngestReport(self.source, self.reasons, self.rows_read + other.rows_read,
                              self.rows_kept + other.rows_kept)
        for reason in set(self.dropped) | set(other.dropped):
            merged.dropped[reason] = self.dropped.get(reason, 0) + other.dropped.get(reason, 0)
        return merged

    def to_dict(self):
        return {
            "source": self.source,
            "rows_read": self.rows_read,
            "rows_kept": self.rows_kept,
            "rows_dropped": self.rows_dropped,
            "dropped": dict(sorted(self.dropped.items())),
        }


def open_binary(path) -> io.BufferedIOBase:
    try:
        return open(path, "rb")
    except OSError as exc:
        raise InputIOError(f"cannot open {path}: {exc.strerror or exc}") from exc


def decompressing(byte_stream):
    """Wrap ``byte_stream`` in a decompressor when its magic bytes say so."""
    buffered = byte_stream if hasattr(byte_stream, "peek") else io.BufferedReader(byte_stream)
    head = buffered.peek(6)[:6]
    for magic, opener in _MAGIC:
        if head.startswith(magic):
            return opener(buffered)
    return buffered


def text_lines(byte_stream):
    return io.TextIOWrapper(decompressing(byte_stream), encoding="utf-8-sig", newline="")


def column_map(header_row: list[str]) -> dict[str, int]:
    """Map each required (and present optional) column name to its index."""
    names = [unquote(cell.strip()) for cell in header_row]
    seen = {}
    duplicates = []
    for i, name in enumerate(names):
        if name in seen:
            duplicates.append(name)
        seen.setdefault(name, i)
    if duplicates:
        raise FormatError(f"duplicate column(s) in header: {', '.join(sorted(set(duplicates)))}")
    missing = [name for name in REQUIRED_COLUMNS if name not in seen]
    if missing:
        raise FormatError(f"missing required column(s): {', '.join(missing)}")
    return {name: seen[name] for name in REQUIRED_COLUMNS + OPTIONAL_COLUMNS if name in seen}


def _read_header(text) -> list[str]:
    try:
        first = text.readline()
    except UnicodeDecodeError as exc:
        raise FormatError(f"input is not UTF-8: {exc}") from exc
    except (OSError, EOFError) as exc:
        raise InputIOError(f"cannot read stream: {exc}") from exc
    if not first.strip():
        raise FormatError("input is empty or has a blank header row")
    return first.rstrip("\r\n").split("\t")


def parse_market_stream(
    byte_stream, filter: IngestFilter | None = None, source: str = "<stream>"
) -> tuple[Iterator[MarketRecord], IngestReport]:
    """Validate the header now and return a lazy record iterator plus its report.

    The report's counters fill in as the iterator is consumed; only one
    batch of lines is held in memory at a time.
    """
    filter = filter or IngestFilter()
    text = text_lines(byte_stream)
    header = _read_header(text)
    cols = column_map(header)
    layout = (
        len(header),
        cols.get("region_type", -1),
        filter.property_type,
        *(cols[name] for name in REQUIRED_COLUMNS),
    )
    report = IngestReport(source=source)
    return _records(text, layout, report), report


def _records(text, layout, report):
    drops = [0] * len(report.reasons)
    scan = _kernels.scan_lines
    make = MarketRecord
    while True:
        try:
            batch = list(islice(text, BATCH_LINES))
        except UnicodeDecodeError as exc:
            raise FormatError(f"input is not UTF-8 near row {report.rows_read + 2}: {exc}") from exc
        except (OSError, EOFError) as exc:
            raise InputIOError(f"cannot read stream: {exc}") from exc
        if not batch:
            break
        records = scan(batch, layout, drops, make)
        report.rows_read += len(batch)
        report.rows_kept += len(records)
        for reason, n in zip(report.reasons, drops):
            report.dropped[reason] = n
        yield from records


def read_market_file(path, filter: IngestFilter | None = None):
    stream = open_binary(path)
    try:
        records, report = parse_market_stream(stream, filter, source=str(path))
    except BaseException:
        stream.close()
        raise
    return _closing(records, stream), report


def _closing(records, stream):
    try:
        yield from records
    finally:
        stream.close()
