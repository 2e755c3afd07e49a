"""Reader for the CDC/ATSDR county Social Vulnerability Index table."""

from __future__ import annotations

import csv
import math
from typing import NamedTuple

from .errors import FormatError, GeoError, InputIOError, IntegrityError
from .geo_names import CountyKey, StateCrosswalk, canonicalize_county_name, state_code_to_fips
from .ingest_market import IngestReport, open_binary, text_lines

REQUIRED_COLUMNS = ("FIPS", "ST_ABBR", "COUNTY", "RPL_THEMES")
MISSING_SENTINEL = -999.0
DROP_REASONS = (
    "malformed_row",
    "invalid_fips",
    "invalid_key",
    "fips_state_mismatch",
    "invalid_value",
    "svi_missing_sentinel",
    "svi_out_of_range",
)


class SviRecord(NamedTuple):
    county_fips: str
    key: CountyKey
    svi_overall: float


def _county_fips(cell: str) -> str | None:
    cell = cell.strip()
    # numeric exports lose the leading zero of states 01-09
    if not cell.isdigit() or not 4 <= len(cell) <= 5:
        return None
    return cell.zfill(5)


def parse_svi(byte_stream, source: str = "<stream>", xwalk: StateCrosswalk | None = None):
    """Return ``(records, report)`` for every county row with a usable overall percentile."""
    report = IngestReport(source=source, reasons=DROP_REASONS)
    text = text_lines(byte_stream)
    reader = csv.reader(text)
    try:
        header = next(reader)
    except StopIteration:
        raise FormatError(f"{source}: SVI file is empty") from None
    except (UnicodeDecodeError, csv.Error) as exc:
        raise FormatError(f"{source}: unreadable SVI header: {exc}") from exc
    header = [h.strip() for h in header]
    missing = [c for c in REQUIRED_COLUMNS if c not in header]
    if missing:
        raise FormatError(f"{source}: missing required column(s): {', '.join(missing)}")
    ncols = len(header)
    i_fips, i_state, i_county, i_svi = (header.index(c) for c in REQUIRED_COLUMNS)

    records = []
    seen = {}
    dropped = report.dropped
    try:
        for row in reader:
            lineno = reader.line_num
            report.rows_read += 1
            if len(row) != ncols:
                dropped["malformed_row"] += 1
                continue
            fips = _county_fips(row[i_fips])
            if fips is None:
                dropped["invalid_fips"] += 1
                continue
            try:
                key = CountyKey(state_code_to_fips(row[i_state], xwalk),
                                canonicalize_county_name(row[i_county]))
            except GeoError:
                dropped["invalid_key"] += 1
                continue
            if fips[:2] != key.state_fips:
                dropped["fips_state_mismatch"] += 1
                continue
            try:
                value = float(row[i_svi])
            except ValueError:
                dropped["invalid_value"] += 1
                continue
            if value == MISSING_SENTINEL:
                dropped["svi_missing_sentinel"] += 1
                continue
            if not (math.isfinite(value) and 0.0 <= value <= 1.0):
                dropped["svi_out_of_range"] += 1
                continue
            if fips in seen:
                raise IntegrityError(
                    f"{source}: duplicate county FIPS {fips} on lines {seen[fips]} and {lineno}")
            seen[fips] = lineno
            records.append(SviRecord(fips, key, value))
            report.rows_kept += 1
    except (UnicodeDecodeError, csv.Error) as exc:
        raise FormatError(f"{source}: unreadable SVI row: {exc}") from exc
    except OSError as exc:
        raise InputIOError(f"{source}: {exc}") from exc
    return records, report


def read_svi_file(path, xwalk: StateCrosswalk | None = None):
    with open_binary(path) as stream:
        return parse_svi(stream, source=str(path), xwalk=xwalk)
