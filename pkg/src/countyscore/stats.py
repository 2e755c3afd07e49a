"""Pearson correlation between SVI and growth, and score summaries."""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass

from .aggregate import growth_value
from .errors import DegenerateVarianceError, EmptyDomainError, ShapeError

NEGLIGIBLE_BELOW = 0.2
_GRADES = ((0.4, "weak"), (0.6, "moderate"), (0.8, "strong"))


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    n: int
    interpretation: str

    def to_dict(self):
        return {"r": self.r, "n": self.n, "interpretation": self.interpretation}


def interpret(r: float) -> str:
    size = abs(r)
    if size < NEGLIGIBLE_BELOW:
        return "negligible"
    for bound, label in _GRADES:
        if size < bound:
            break
    else:
        label = "very strong"
    return f"{label} {'positive' if r > 0 else 'negative'}"


def pearson(xs, ys) -> CorrelationResult:
    """Two-pass sample Pearson r, clamped to [-1, 1]."""
    xs, ys = list(xs), list(ys)
    if len(xs) != len(ys):
        raise ShapeError(f"length mismatch: {len(xs)} vs {len(ys)}")
    n = len(xs)
    if n < 2:
        raise ShapeError(f"need at least 2 pairs, got {n}")
    if len(set(xs)) < 2 or len(set(ys)) < 2:
        raise DegenerateVarianceError("a series has zero variance; r is undefined")
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    dx = [x - mx for x in xs]
    dy = [y - my for y in ys]
    sxy = math.fsum(a * b for a, b in zip(dx, dy))
    sxx = math.fsum(a * a for a in dx)
    syy = math.fsum(b * b for b in dy)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateVarianceError("a series has zero variance; r is undefined")
    r = sxy / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    return CorrelationResult(r, n, interpret(r))


def svi_growth_correlation(aggregates, svi_records, metric: str = "price_yoy") -> CorrelationResult:
    """Correlate SVI with average annual growth over counties present in both inputs."""
    svi_by_key = {rec.key: rec.svi_overall for rec in svi_records}
    pairs = [(svi_by_key[a.key], growth_value(a, metric)) for a in aggregates if a.key in svi_by_key]
    if len(pairs) < 2:
        raise ShapeError(f"need at least 2 joined counties, got {len(pairs)}")
    return pearson([p[0] for p in pairs], [p[1] for p in pairs])


def _describe(values):
    return {
        "min": min(values),
        "max": max(values),
        "mean": math.fsum(values) / len(values),
        "median": statistics.median(values),
    }


def summarize(scores) -> dict:
    if not scores:
        raise EmptyDomainError("cannot summarize an empty score list")
    return {
        "count": len(scores),
        "score": _describe([s.score for s in scores]),
        "growth_raw": _describe([s.growth_raw for s in scores]),
    }
