import json
import math
import random
from datetime import date

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from countyscore.aggregate import CountyAggregate, aggregate_by_county, filter_min_months
from countyscore.errors import DegenerateVarianceError, EmptyDomainError, ShapeError
from countyscore.geo_names import CountyKey
from countyscore.ingest_market import read_market_file
from countyscore.ingest_svi import SviRecord, read_svi_file
from countyscore.scoring import CountyScore, ScoreWeights, score_counties
from countyscore.stats import interpret, pearson, summarize, svi_growth_correlation


def naive_pearson(xs, ys):
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    num = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    den = math.sqrt(sum((x - mx) ** 2 for x in xs)) * math.sqrt(sum((y - my) ** 2 for y in ys))
    return num / den


def test_perfect_positive_and_negative():
    assert pearson([1, 2, 3], [1, 2, 3]).r == 1.0
    assert pearson([1, 2, 3], [3, 2, 1]).r == -1.0


def test_textbook_value():
    res = pearson([1, 2, 3, 4], [1, 3, 2, 4])
    assert res.r == pytest.approx(0.8, abs=1e-15)
    assert res.n == 4
    assert res.interpretation == "very strong positive"


@pytest.mark.parametrize("xs, ys", [([1, 2], [1, 2, 3]), ([1], [1]), ([], [])])
def test_shape_errors(xs, ys):
    with pytest.raises(ShapeError):
        pearson(xs, ys)


def test_zero_variance_is_degenerate():
    with pytest.raises(DegenerateVarianceError):
        pearson([1, 1, 1], [1, 2, 3])
    with pytest.raises(DegenerateVarianceError):
        pearson([1, 2, 3], [0.5, 0.5, 0.5])


def test_random_vectors_match_naive_oracle():
    rng = random.Random(42)
    for _ in range(200):
        xs = [rng.gauss(0, 1) for _ in range(100)]
        ys = [0.3 * x + rng.gauss(0, 1) for x in xs]
        assert abs(pearson(xs, ys).r - naive_pearson(xs, ys)) <= 1e-12


@pytest.mark.parametrize("r, label", [
    (0.0, "negligible"), (0.19, "negligible"), (-0.19, "negligible"),
    (0.2, "weak positive"), (-0.39, "weak negative"), (0.5, "moderate positive"),
    (-0.7, "strong negative"), (0.8, "very strong positive"), (-1.0, "very strong negative"),
])
def test_interpretation_bands(r, label):
    assert interpret(r) == label


vectors = st.lists(st.floats(min_value=-1e3, max_value=1e3), min_size=2, max_size=40)


def _spread(xs):
    return max(xs) - min(xs) > 1e-3


@given(vectors)
def test_self_correlation_is_one(xs):
    assume(_spread(xs))
    assert pearson(xs, xs).r == pytest.approx(1.0, abs=1e-12)


@given(st.lists(st.tuples(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3)), min_size=3, max_size=40))
def test_symmetry_and_bounds(pairs):
    xs, ys = [p[0] for p in pairs], [p[1] for p in pairs]
    assume(_spread(xs) and _spread(ys))
    r = pearson(xs, ys).r
    assert -1.0 <= r <= 1.0
    assert r == pytest.approx(pearson(ys, xs).r, abs=1e-12)


@given(st.lists(st.tuples(st.floats(-1, 1), st.floats(-1, 1)), min_size=3, max_size=40),
       st.floats(min_value=0.5, max_value=50), st.floats(min_value=-5, max_value=5),
       st.booleans())
def test_affine_invariance_with_sign(pairs, a, b, flip):
    xs, ys = [p[0] for p in pairs], [p[1] for p in pairs]
    assume(_spread(xs) and _spread(ys))
    base = pearson(xs, ys).r
    scale = -a if flip else a
    moved = pearson([scale * x + b for x in xs], ys).r
    assert moved == pytest.approx(-base if flip else base, abs=1e-9)


# -- svi_growth_correlation -----------------------------------------------------

def _agg(name, growth):
    return CountyAggregate(CountyKey("08", name), 12, growth, 0.0, 0.0, 0.0,
                           date(2020, 1, 31), date(2020, 12, 31))


def _svi(name, value, fips):
    return SviRecord(fips, CountyKey("08", name), value)


def test_collinear_counties():
    aggs = [_agg("a", 0.1), _agg("b", 0.2), _agg("c", 0.3), _agg("lonely", 9.0)]
    svis = [_svi("a", 0.2, "08001"), _svi("b", 0.4, "08003"), _svi("c", 0.6, "08005")]
    res = svi_growth_correlation(aggs, svis)
    assert res.r == pytest.approx(1.0, abs=1e-12)
    assert res.n == 3


def test_constant_svi_is_degenerate():
    aggs = [_agg("a", 0.1), _agg("b", 0.2)]
    svis = [_svi("a", 0.5, "08001"), _svi("b", 0.5, "08003")]
    with pytest.raises(DegenerateVarianceError):
        svi_growth_correlation(aggs, svis)


def test_single_joined_county_is_shape_error():
    with pytest.raises(ShapeError):
        svi_growth_correlation([_agg("a", 0.1)], [_svi("a", 0.5, "08001")])


def _fixture(fixtures_dir):
    pipe = fixtures_dir / "pipeline"
    records, _ = read_market_file(pipe / "market.tsv")
    aggs, _ = filter_min_months(aggregate_by_county(records)[0], 12)
    svis, _ = read_svi_file(pipe / "svi.csv")
    expected = json.loads((pipe / "expected_report.json").read_text(encoding="utf-8"))
    return aggs, svis, expected


def test_fixture_correlation_matches_oracle(fixtures_dir):
    aggs, svis, expected = _fixture(fixtures_dir)
    assert svi_growth_correlation(aggs, svis).to_dict() == expected["correlation"]


# -- summarize ------------------------------------------------------------------

def _score(value, growth=0.0):
    return CountyScore(CountyKey("08", "x"), growth, 0.0, 0.0, 1.0, value, 1.0 - value)


def test_summary_singleton():
    s = summarize([_score(0.4, 0.1)])
    assert s["count"] == 1
    assert s["score"] == {"min": 0.4, "max": 0.4, "mean": 0.4, "median": 0.4}


def test_summary_even_count_median():
    s = summarize([_score(v) for v in (0.2, 0.4, 0.6, 0.8)])
    assert s["score"]["median"] == pytest.approx(0.5, abs=1e-15)
    assert s["score"]["mean"] == pytest.approx(0.5, abs=1e-15)
    assert (s["score"]["min"], s["score"]["max"]) == (0.2, 0.8)


def test_summary_empty():
    with pytest.raises(EmptyDomainError):
        summarize([])


def test_fixture_summary_matches_oracle(fixtures_dir):
    aggs, svis, expected = _fixture(fixtures_dir)
    scores, _ = score_counties(aggs, svis, ScoreWeights())
    assert summarize(scores) == expected["summary"]
