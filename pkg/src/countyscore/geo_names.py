"""County identity: state crosswalk, name canonicalization and join keys."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import NamedTuple

from .errors import InvalidNameError, RegionParseError, UnknownStateError

_SUFFIXES = (" county", " parish")


class CountyKey(NamedTuple):
    state_fips: str
    county_name: str

    def __str__(self):
        return f"{self.state_fips}:{self.county_name}"


@dataclass(frozen=True)
class StateCrosswalk:
    by_postal: dict
    by_fips: dict
    names: dict

    @classmethod
    def from_rows(cls, rows):
        by_postal, by_fips, names = {}, {}, {}
        for row in rows:
            postal = row["postal"].strip().upper()
            fips = row["fips"].strip()
            if len(postal) != 2 or len(fips) != 2 or not fips.isdigit():
                raise ValueError(f"bad crosswalk row {row!r}")
            if postal in by_postal or fips in by_fips:
                raise ValueError(f"crosswalk is not a bijection at {postal}/{fips}")
            by_postal[postal] = fips
            by_fips[fips] = postal
            names[postal] = row["name"].strip()
        return cls(by_postal, by_fips, names)

    def __len__(self):
        return len(self.by_postal)


@lru_cache(maxsize=None)
def load_crosswalk() -> StateCrosswalk:
    """Load the bundled 51-row (50 states + DC) postal/FIPS table."""
    text = resources.files(__package__).joinpath("data/state_fips.csv").read_text("utf-8")
    return StateCrosswalk.from_rows(csv.DictReader(io.StringIO(text)))


def state_code_to_fips(code: str, xwalk: StateCrosswalk | None = None) -> str:
    xwalk = xwalk or load_crosswalk()
    folded = code.strip().upper() if isinstance(code, str) else ""
    try:
        return xwalk.by_postal[folded]
    except KeyError:
        raise UnknownStateError(code) from None


def fips_to_state_code(fips: str, xwalk: StateCrosswalk | None = None) -> str:
    xwalk = xwalk or load_crosswalk()
    try:
        return xwalk.by_fips[fips]
    except KeyError:
        raise UnknownStateError(fips) from None


def canonicalize_county_name(raw: str) -> str:
    """Trim, lowercase and drop a trailing "County"/"Parish" token.

    >>> canonicalize_county_name("  Orleans Parish ")
    'orleans'
    >>> canonicalize_county_name("St. Louis city")
    'st. louis city'
    """
    name = raw.strip().lower()
    # stripping until stable keeps the function idempotent on stacked suffixes
    while True:
        for suffix in _SUFFIXES:
            if name.endswith(suffix):
                name = name[: -len(suffix)].rstrip()
                break
        else:
            break
    if not name:
        raise InvalidNameError(f"county name {raw!r} is empty after canonicalization")
    return name


def parse_region(region: str, xwalk: StateCrosswalk | None = None) -> CountyKey:
    """Split ``"Adams County, CO"`` into a :class:`CountyKey`."""
    name_part, sep, state_part = region.rpartition(",")
    if not sep:
        raise RegionParseError(f"region {region!r} has no ', ST' suffix")
    state_part = state_part.strip()
    if len(state_part) != 2 or not state_part.isascii() or not state_part.isalpha():
        raise RegionParseError(f"region {region!r} has no 2-letter state code")
    try:
        fips = state_code_to_fips(state_part, xwalk)
        name = canonicalize_county_name(name_part)
    except (UnknownStateError, InvalidNameError) as exc:
        raise RegionParseError(f"region {region!r}: {exc}") from exc
    return CountyKey(fips, name)


def key_matches_feature(key: CountyKey, feature_state_fips, feature_name) -> bool:
    if not isinstance(feature_state_fips, str) or feature_state_fips != key.state_fips:
        return False
    if not isinstance(feature_name, str):
        return False
    try:
        return canonicalize_county_name(feature_name) == key.county_name
    except InvalidNameError:
        return False
