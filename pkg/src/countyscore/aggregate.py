"""Reduce monthly market records to one growth summary per county."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from typing import Iterable

from ._kernels import GrowthAccumulator
from .errors import ConfigError, RegionParseError
from .geo_names import CountyKey, StateCrosswalk, load_crosswalk, parse_region

GROWTH_METRICS = ("price_yoy", "price_mom", "homes_sold_yoy", "homes_sold_mom")
MAX_REGION_SAMPLES = 20


@dataclass(frozen=True)
class CountyAggregate:
    key: CountyKey
    n_months: int
    avg_price_yoy: float
    avg_price_mom: float
    avg_homes_sold_yoy: float
    avg_homes_sold_mom: float
    first_period_end: date
    last_period_end: date

    def metric(self, name: str) -> float:
        return getattr(self, "avg_" + name)


@dataclass
class AggregateReport:
    records_in: int = 0
    records_aggregated: int = 0
    unparsed_regions: int = 0
    unparsed_samples: set = field(default_factory=set)
    counties: int = 0

    def to_dict(self):
        return {
            "records_in": self.records_in,
            "records_aggregated": self.records_aggregated,
            "unparsed_regions": self.unparsed_regions,
            "unparsed_samples": sorted(self.unparsed_samples),
            "counties": self.counties,
        }


class CountyAccumulator:
    __slots__ = ("sums", "first", "last")

    def __init__(self):
        self.sums = GrowthAccumulator()
        self.first = None
        self.last = None

    def add(self, record):
        self.sums.add(record.homes_sold_mom, record.homes_sold_yoy,
                      record.median_sale_price_mom, record.median_sale_price_yoy)
        end = record.period_end
        if self.first is None or end < self.first:
            self.first = end
        if self.last is None or end > self.last:
            self.last = end

    def merge(self, other: "CountyAccumulator"):
        self.sums.merge(other.sums)
        for end in (other.first, other.last):
            if end is not None:
                self.first = end if self.first is None else min(self.first, end)
                self.last = end if self.last is None else max(self.last, end)

    def finish(self, key: CountyKey) -> CountyAggregate:
        n = self.sums.count
        hs_mom, hs_yoy, p_mom, p_yoy = self.sums.sums()
        return CountyAggregate(key, n, p_yoy / n, p_mom / n, hs_yoy / n, hs_mom / n,
                               self.first, self.last)


def accumulate(records: Iterable, xwalk: StateCrosswalk | None = None,
               report: AggregateReport | None = None) -> dict[CountyKey, CountyAccumulator]:
    """Stream ``records`` into per-county exact-sum accumulators.

    Sums are exactly rounded, so the result does not depend on record order
    and partial results from disjoint partitions merge without error.
    """
    xwalk = xwalk or load_crosswalk()
    report = report if report is not None else AggregateReport()
    accs: dict[CountyKey, CountyAccumulator] = {}
    keys: dict[str, CountyKey | None] = {}
    for record in records:
        report.records_in += 1
        region = record.region
        try:
            key = keys[region]
        except KeyError:
            try:
                key = parse_region(region, xwalk)
            except RegionParseError:
                key = None
            keys[region] = key
        if key is None:
            report.unparsed_regions += 1
            if len(report.unparsed_samples) < MAX_REGION_SAMPLES:
                report.unparsed_samples.add(region)
            continue
        acc = accs.get(key)
        if acc is None:
            acc = accs[key] = CountyAccumulator()
        acc.add(record)
        report.records_aggregated += 1
    return accs


def merge_accumulators(*parts: dict) -> dict[CountyKey, CountyAccumulator]:
    merged: dict[CountyKey, CountyAccumulator] = {}
    for part in parts:
        for key, acc in part.items():
            if key not in merged:
                merged[key] = CountyAccumulator()
            merged[key].merge(acc)
    return merged


def finalize(accs: dict) -> list[CountyAggregate]:
    return [accs[key].finish(key) for key in sorted(accs)]


def aggregate_by_county(records: Iterable, xwalk: StateCrosswalk | None = None):
    """Return ``(aggregates, report)`` with one aggregate per county, sorted by key."""
    report = AggregateReport()
    accs = accumulate(records, xwalk, report)
    aggregates = finalize(accs)
    report.counties = len(aggregates)
    return aggregates, report


def annual_growth(aggregate: CountyAggregate) -> float:
    """Average year-over-year change in median sale price."""
    return aggregate.avg_price_yoy


def growth_value(aggregate: CountyAggregate, metric: str = "price_yoy") -> float:
    if metric not in GROWTH_METRICS:
        raise ConfigError(f"unknown growth metric {metric!r}; choose from {', '.join(GROWTH_METRICS)}")
    return aggregate.metric(metric)


def filter_min_months(aggregates: list, min_months: int):
    kept = [a for a in aggregates if a.n_months >= min_months]
    return kept, len(aggregates) - len(kept)
