"""Growth normalization, SVI inversion and the weighted investment score."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .aggregate import CountyAggregate, growth_value
from .errors import ConfigError, DomainError, EmptyDomainError, EmptyJoinError, IntegrityError, NonFiniteError
from .geo_names import CountyKey

WEIGHT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ScoreWeights:
    w_growth: float = 0.5
    w_resilience: float = 0.5

    def __post_init__(self):
        for name in ("w_growth", "w_resilience"):
            w = getattr(self, name)
            if not (math.isfinite(w) and 0.0 <= w <= 1.0):
                raise ConfigError(f"{name} must lie in [0, 1], got {w}")
        if abs(self.w_growth + self.w_resilience - 1.0) > WEIGHT_TOLERANCE:
            raise ConfigError(
                f"weights must sum to 1, got {self.w_growth} + {self.w_resilience}")

    @classmethod
    def parse(cls, text: str) -> "ScoreWeights":
        """Parse ``"G,R"`` as growth and resilience weights."""
        parts = text.split(",")
        if len(parts) != 2:
            raise ConfigError(f"weights must look like G,R; got {text!r}")
        try:
            g, r = (float(p) for p in parts)
        except ValueError:
            raise ConfigError(f"weights must be numbers; got {text!r}") from None
        return cls(g, r)

    def __str__(self):
        return f"{self.w_growth:g},{self.w_resilience:g}"


@dataclass(frozen=True)
class CountyScore:
    key: CountyKey
    growth_raw: float
    growth_norm: float
    svi: float
    resilience: float
    score: float
    score_viz: float
    county_fips: str = ""


@dataclass
class JoinReport:
    joined: int = 0
    market_only: list = field(default_factory=list)
    svi_only: list = field(default_factory=list)

    def to_dict(self):
        return {
            "joined": self.joined,
            "market_only_count": len(self.market_only),
            "svi_only_count": len(self.svi_only),
            "market_only": [str(k) for k in self.market_only],
            "svi_only": [str(k) for k in self.svi_only],
        }


def min_max_normalize(values: list[float]) -> list[float]:
    """Map values affinely onto [0, 1]; an all-equal list maps to 0.5."""
    if not values:
        raise EmptyDomainError("cannot normalize an empty list")
    for i, v in enumerate(values):
        if not math.isfinite(v):
            raise NonFiniteError(i, v)
    lo, hi = min(values), max(values)
    if hi == lo:
        return [0.5] * len(values)
    span = hi - lo
    return [(v - lo) / span for v in values]


def _check_unit(name, x):
    if not (isinstance(x, (int, float)) and 0.0 <= x <= 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {x!r}")


def resilience(svi: float) -> float:
    _check_unit("svi", svi)
    return 1.0 - svi


def composite_score(growth_norm: float, resilience: float, weights: ScoreWeights) -> float:
    _check_unit("growth_norm", growth_norm)
    _check_unit("resilience", resilience)
    score = weights.w_growth * growth_norm + weights.w_resilience * resilience
    # keep the convex combination inside the hull of its inputs despite rounding
    lo, hi = min(growth_norm, resilience), max(growth_norm, resilience)
    return min(hi, max(lo, score))


def _ranked(score: CountyScore):
    return (-score.score, score.key)


def score_counties(aggregates: list[CountyAggregate], svi: list, weights: ScoreWeights,
                   metric: str = "price_yoy"):
    """Inner-join growth and SVI on county key and score the joined set.

    Growth is normalized over the joined counties only. Returns
    ``(scores, report)`` with scores in descending order, ties by key.
    """
    svi_by_key = {}
    for rec in svi:
        if rec.key in svi_by_key:
            raise IntegrityError(
                f"two SVI rows canonicalize to county {rec.key} "
                f"({svi_by_key[rec.key].county_fips}, {rec.county_fips})")
        svi_by_key[rec.key] = rec
    market_keys = set()
    joined = []
    for agg in aggregates:
        if agg.key in market_keys:
            raise IntegrityError(f"duplicate market aggregate for county {agg.key}")
        market_keys.add(agg.key)
        rec = svi_by_key.get(agg.key)
        if rec is not None:
            joined.append((agg, rec))
    report = JoinReport(
        joined=len(joined),
        market_only=sorted(market_keys - svi_by_key.keys()),
        svi_only=sorted(svi_by_key.keys() - market_keys),
    )
    if not joined:
        raise EmptyJoinError(
            f"no county appears in both inputs ({len(market_keys)} market, {len(svi_by_key)} SVI); "
            "check region and county name formats")
    raw = [growth_value(agg, metric) for agg, _ in joined]
    norm = min_max_normalize(raw)
    scores = []
    for (agg, rec), g_raw, g_norm in zip(joined, raw, norm):
        res = resilience(rec.svi_overall)
        s = composite_score(g_norm, res, weights)
        scores.append(CountyScore(agg.key, g_raw, g_norm, rec.svi_overall, res, s, 1.0 - s,
                                  rec.county_fips))
    scores.sort(key=_ranked)
    return scores, report
