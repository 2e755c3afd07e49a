"""County real-estate investment scoring from market growth and social vulnerability."""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .aggregate import CountyAggregate, aggregate_by_county, annual_growth
from .emit import augment_geojson, write_report_json, write_scores_csv
from .geo_names import (CountyKey, canonicalize_county_name, key_matches_feature, load_crosswalk,
                        parse_region, state_code_to_fips)
from .ingest_market import IngestFilter, MarketRecord, column_map, parse_market_stream
from .ingest_svi import SviRecord, parse_svi
from .scoring import (CountyScore, ScoreWeights, composite_score, min_max_normalize, resilience,
                      score_counties)
from .stats import CorrelationResult, pearson, summarize, svi_growth_correlation

__all__ = [
    "BACKEND", "CorrelationResult", "CountyAggregate", "CountyKey", "CountyScore", "IngestFilter",
    "MarketRecord", "ScoreWeights", "SviRecord", "aggregate_by_county", "annual_growth",
    "augment_geojson", "canonicalize_county_name", "column_map", "composite_score",
    "key_matches_feature", "load_crosswalk", "min_max_normalize", "parse_market_stream",
    "parse_region", "parse_svi", "pearson", "resilience", "score_counties", "state_code_to_fips",
    "summarize", "svi_growth_correlation", "write_report_json", "write_scores_csv",
]
