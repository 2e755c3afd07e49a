import csv

import pytest
from hypothesis import given
from hypothesis import strategies as st

from countyscore.errors import InvalidNameError, RegionParseError, UnknownStateError
from countyscore.geo_names import (CountyKey, canonicalize_county_name, fips_to_state_code,
                                   key_matches_feature, load_crosswalk, parse_region,
                                   state_code_to_fips)


def test_crosswalk_is_51_row_bijection():
    xwalk = load_crosswalk()
    assert len(xwalk) == 51
    assert len(set(xwalk.by_postal.values())) == 51
    assert all(len(f) == 2 and f.isdigit() for f in xwalk.by_fips)
    assert "DC" in xwalk.by_postal and "PR" not in xwalk.by_postal


def test_crosswalk_file_header():
    from importlib import resources
    text = resources.files("countyscore").joinpath("data/state_fips.csv").read_text("utf-8")
    rows = list(csv.reader(text.splitlines()))
    assert rows[0] == ["postal", "fips", "name"]
    assert len(rows) == 52


@pytest.mark.parametrize("code, fips", [("CO", "08"), ("co", "08"), ("LA", "22"), ("DC", "11"),
                                        ("WY", "56"), ("AK", "02")])
def test_state_code_to_fips(code, fips):
    assert state_code_to_fips(code) == fips


def test_unknown_state_carries_code():
    with pytest.raises(UnknownStateError) as info:
        state_code_to_fips("XX")
    assert info.value.code == "XX"


def test_fips_round_trip_over_crosswalk():
    xwalk = load_crosswalk()
    for postal in xwalk.by_postal:
        assert fips_to_state_code(state_code_to_fips(postal)) == postal


@pytest.mark.parametrize("raw, canonical", [
    ("Adams County", "adams"),
    ("Orleans Parish", "orleans"),
    ("Doña Ana County", "doña ana"),
    ("  St. Louis city ", "st. louis city"),
    ("Anchorage Municipality", "anchorage municipality"),
    ("DeKalb COUNTY", "dekalb"),
    ("County", "county"),
])
def test_canonicalize(raw, canonical):
    assert canonicalize_county_name(raw) == canonical


@pytest.mark.parametrize("raw", ["", "   "])
def test_canonicalize_empty_is_invalid(raw):
    with pytest.raises(InvalidNameError):
        canonicalize_county_name(raw)


@given(st.text(min_size=1))
def test_canonicalize_idempotent(raw):
    try:
        once = canonicalize_county_name(raw)
    except InvalidNameError:
        return
    assert canonicalize_county_name(once) == once
    assert once == once.strip()
    assert not once.endswith((" county", " parish"))


@given(st.text(alphabet="ab .-'ñCOUNTYPARISHcountyparish ", min_size=1, max_size=30))
def test_canonicalize_idempotent_suffix_heavy(raw):
    try:
        once = canonicalize_county_name(raw)
    except InvalidNameError:
        return
    assert canonicalize_county_name(once) == once


@pytest.mark.parametrize("region, key", [
    ("Adams County, CO", CountyKey("08", "adams")),
    ("Orleans Parish, LA", CountyKey("22", "orleans")),
    ("Lewis and Clark County, mt", CountyKey("30", "lewis and clark")),
    ("Weird, Name County, TX", CountyKey("48", "weird, name")),
])
def test_parse_region(region, key):
    assert parse_region(region) == key


@pytest.mark.parametrize("region", ["United States", "Adams County, XX", "Adams County, COL",
                                    " , CO", "Adams County, C0"])
def test_parse_region_errors(region):
    with pytest.raises(RegionParseError):
        parse_region(region)


def test_key_matches_feature():
    assert key_matches_feature(CountyKey("08", "adams"), "08", "Adams")
    assert not key_matches_feature(CountyKey("08", "adams"), "48", "Adams")
    assert key_matches_feature(CountyKey("22", "orleans"), "22", "Orleans Parish")
    assert not key_matches_feature(CountyKey("08", "adams"), "08", "")
    assert not key_matches_feature(CountyKey("08", "adams"), 8, "Adams")


@given(st.text(min_size=1), st.sampled_from(["08", "22"]))
def test_matching_unchanged_by_precanonicalized_feature_name(name, state):
    key = CountyKey("08", "adams")
    try:
        canonical = canonicalize_county_name(name)
    except InvalidNameError:
        assert not key_matches_feature(key, state, name)
        return
    assert key_matches_feature(key, state, name) == key_matches_feature(key, state, canonical)
