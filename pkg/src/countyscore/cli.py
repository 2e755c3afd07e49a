"""Command-line entry point: ``countyscore score|stats|validate``."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from ._kernels import BACKEND
from .aggregate import GROWTH_METRICS, aggregate_by_county, filter_min_months
from .emit import (DEFAULT_SCORE_PROPERTY, atomic_write_text, augment_geojson, build_report,
                   dumps_report, feature_problems, load_geojson, write_geojson, write_scores_csv)
from .errors import EXIT_IO, EXIT_USAGE, ConfigError, FormatError, InputIOError, PipelineError
from .geo_names import fips_to_state_code
from .ingest_market import DEFAULT_PROPERTY_TYPE, IngestFilter, read_market_file
from .ingest_svi import read_svi_file
from .scoring import ScoreWeights, score_counties
from .stats import summarize, svi_growth_correlation

CONFIG_ENV = "KOEDDS_CONFIG"
PATH_KEYS = ("market", "svi", "geojson", "out-csv", "out-geojson", "out-report")


def _bool(text):
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def _positive_int(text):
    try:
        value = int(str(text).strip())
    except ValueError:
        raise ConfigError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise ConfigError(f"min-months must be at least 1, got {value}")
    return value


def _metric(text):
    text = str(text).strip()
    if text not in GROWTH_METRICS:
        raise ConfigError(f"growth-metric must be one of {', '.join(GROWTH_METRICS)}; got {text!r}")
    return text


def _property_type(text):
    text = str(text).strip()
    return None if text in ("*", "any") else text


# key in config file / flag name -> (RunConfig field, converter)
OPTIONS = {
    "market": ("market_path", str),
    "svi": ("svi_path", str),
    "geojson": ("geojson_path", str),
    "out-csv": ("out_csv", str),
    "out-geojson": ("out_geojson", str),
    "out-report": ("out_report", str),
    "weights": ("weights", ScoreWeights.parse),
    "property-type": ("property_type_filter", _property_type),
    "min-months": ("min_months", _positive_int),
    "no-viz-invert": ("viz_invert", lambda v: not _bool(v)),
    "viz-invert": ("viz_invert", _bool),
    "score-property": ("score_property_name", str),
    "growth-metric": ("growth_metric", _metric),
}


@dataclass
class RunConfig:
    market_path: str | None = None
    svi_path: str | None = None
    geojson_path: str | None = None
    out_csv: str | None = None
    out_geojson: str | None = None
    out_report: str | None = None
    weights: ScoreWeights = field(default_factory=ScoreWeights)
    property_type_filter: str | None = DEFAULT_PROPERTY_TYPE
    min_months: int = 12
    viz_invert: bool = True
    score_property_name: str = DEFAULT_SCORE_PROPERTY
    growth_metric: str = "price_yoy"

    def to_report(self):
        def name(p):
            return None if p is None else os.path.basename(p)
        return {
            "inputs": {"market": name(self.market_path), "svi": name(self.svi_path),
                       "geojson": name(self.geojson_path)},
            "outputs": {"csv": name(self.out_csv), "geojson": name(self.out_geojson),
                        "report": name(self.out_report)},
            "weights": {"growth": self.weights.w_growth, "resilience": self.weights.w_resilience},
            "property_type": self.property_type_filter,
            "min_months": self.min_months,
            "viz_invert": self.viz_invert,
            "score_property": self.score_property_name,
            "growth_metric": self.growth_metric,
        }


def read_config_file(path) -> dict[str, str]:
    """Parse a flat ``key = value`` file whose keys mirror the long flag names."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputIOError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    base = Path(path).resolve().parent
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().lstrip("-")
        if not sep or key not in OPTIONS:
            raise ConfigError(f"{path}:{lineno}: unrecognised config line {line!r}")
        value = value.strip()
        if key in PATH_KEYS:
            value = str(base / value)
        values[key] = value
    return values


def resolve_config(flags: dict, config_path: str | None) -> RunConfig:
    """Merge settings with precedence flag > config file > built-in default."""
    merged: dict[str, str] = {}
    if config_path:
        merged.update(read_config_file(config_path))
    for key, value in flags.items():
        if value is None:
            continue
        # the two spellings of the inversion switch override each other
        if key in ("viz-invert", "no-viz-invert"):
            merged.pop("viz-invert", None)
            merged.pop("no-viz-invert", None)
        merged[key] = value
    if "viz-invert" in merged and "no-viz-invert" in merged:
        raise ConfigError("config sets both viz-invert and no-viz-invert")
    config = RunConfig()
    for key, value in merged.items():
        attr, convert = OPTIONS[key]
        setattr(config, attr, convert(value))
    return config


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p, *, scoring=True):
    p.add_argument("--market", metavar="PATH", help="Redfin county market tracker TSV (plain or compressed)")
    p.add_argument("--svi", metavar="PATH", help="CDC SVI county CSV")
    p.add_argument("--property-type", metavar="STR",
                   help=f'property type to keep (default "{DEFAULT_PROPERTY_TYPE}"; "*" keeps all)')
    p.add_argument("--min-months", metavar="N", help="drop counties observed in fewer months (default 12)")
    p.add_argument("--growth-metric", metavar="NAME",
                   help=f"growth average to score and correlate: {', '.join(GROWTH_METRICS)} (default price_yoy)")
    p.add_argument("--out-report", metavar="PATH", help="write the JSON run report here")
    p.add_argument("--config", metavar="PATH", help=f"key = value config file (default ${CONFIG_ENV})")
    if scoring:
        p.add_argument("--geojson", metavar="PATH", help="county FeatureCollection to augment")
        p.add_argument("--out-csv", metavar="PATH", help="write scored counties CSV here")
        p.add_argument("--out-geojson", metavar="PATH", help="write augmented GeoJSON here")
        p.add_argument("--weights", metavar="G,R", help="growth,resilience weights summing to 1 (default 0.5,0.5)")
        p.add_argument("--no-viz-invert", action="store_const", const="true", default=None,
                       help="inject the score itself instead of 1 - score into GeoJSON")
        p.add_argument("--score-property", metavar="NAME",
                       help=f'GeoJSON property to write (default "{DEFAULT_SCORE_PROPERTY}")')


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="countyscore",
                     description="Score U.S. counties by market growth and social resilience.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND} kernels)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _common(sub.add_parser("score", help="run the full pipeline and write outputs"))
    _common(sub.add_parser("stats", help="correlate SVI with average annual growth"), scoring=False)
    v = sub.add_parser("validate", help="check input files without producing outputs")
    v.add_argument("--market", metavar="PATH")
    v.add_argument("--svi", metavar="PATH")
    v.add_argument("--geojson", metavar="PATH")
    v.add_argument("--property-type", metavar="STR")
    v.add_argument("--config", metavar="PATH")
    return parser


def _flags(args) -> dict:
    return {key: getattr(args, key.replace("-", "_"), None) for key in OPTIONS}


def _label(key):
    try:
        return f"{key.county_name} ({fips_to_state_code(key.state_fips)})"
    except PipelineError:
        return str(key)


def _load_growth(config: RunConfig):
    records, market_report = read_market_file(config.market_path,
                                              IngestFilter(config.property_type_filter))
    market_report.source = os.path.basename(config.market_path)
    aggregates, agg_report = aggregate_by_county(records)
    svi, svi_report = read_svi_file(config.svi_path)
    svi_report.source = os.path.basename(config.svi_path)
    kept, thin = filter_min_months(aggregates, config.min_months)
    return kept, thin, agg_report, svi, {"market": market_report, "svi": svi_report}


def _require_inputs(config):
    missing = [flag for flag, value in (("--market", config.market_path), ("--svi", config.svi_path))
               if not value]
    if missing:
        raise ConfigError(f"missing required option(s): {', '.join(missing)}")


def cmd_score(config: RunConfig, out=None) -> int:
    out = out or sys.stdout
    _require_inputs(config)
    if config.out_geojson and not config.geojson_path:
        raise ConfigError("--out-geojson needs --geojson")
    for path in filter(None, (config.market_path, config.svi_path, config.geojson_path)):
        if not os.path.isfile(path):
            raise InputIOError(f"input file not found: {path}")

    aggregates, thin, agg_report, svi, ingest = _load_growth(config)
    scores, join_report = score_counties(aggregates, svi, config.weights, config.growth_metric)
    notes = [f"{thin} counties dropped below min_months={config.min_months}"]
    try:
        correlation = svi_growth_correlation(aggregates, svi, config.growth_metric)
    except PipelineError as exc:
        correlation = None
        notes.append(f"correlation unavailable: {exc}")
    summary = summarize(scores)

    augmented = match_report = None
    if config.geojson_path:
        doc = load_geojson(config.geojson_path)
        augmented, match_report = augment_geojson(doc, scores, config.score_property_name,
                                                  config.viz_invert)

    if config.out_csv:
        write_scores_csv(scores, config.out_csv)
    if config.out_geojson:
        write_geojson(augmented, config.out_geojson)
    if config.out_report:
        report = build_report(ingest_reports=ingest, join_report=join_report,
                              match_report=match_report, correlation=correlation,
                              summary=summary, run_config=config.to_report(),
                              aggregate_report=agg_report, notes=notes)
        atomic_write_text(config.out_report, dumps_report(report))

    print(f"scored {len(scores)} counties "
          f"(weights growth={config.weights.w_growth:g}, resilience={config.weights.w_resilience:g})",
          file=out)
    print("top 5:", file=out)
    for s in scores[:5]:
        print(f"  {_label(s.key):<32} score {s.score:.4f}  growth {s.growth_raw:+.4f}  svi {s.svi:.4f}", file=out)
    print("bottom 5:", file=out)
    for s in scores[-5:]:
        print(f"  {_label(s.key):<32} score {s.score:.4f}  growth {s.growth_raw:+.4f}  svi {s.svi:.4f}", file=out)
    if correlation is not None:
        print(f"svi vs growth: r = {correlation.r:.4f} (n = {correlation.n}, {correlation.interpretation})", file=out)
    else:
        print(f"svi vs growth: {notes[-1]}", file=out)
    print(f"unmatched: {len(join_report.market_only)} market-only, {len(join_report.svi_only)} svi-only"
          + (f", {len(match_report.unmatched_features)} features, {len(match_report.unmatched_scores)} scores"
             if match_report else ""), file=out)
    return 0


def cmd_stats(config: RunConfig, out=None) -> int:
    out = out or sys.stdout
    _require_inputs(config)
    aggregates, thin, agg_report, svi, ingest = _load_growth(config)
    correlation = svi_growth_correlation(aggregates, svi, config.growth_metric)
    print(f"r = {correlation.r:.6f}", file=out)
    print(f"n = {correlation.n}", file=out)
    print(f"interpretation = {correlation.interpretation}", file=out)
    if config.out_report:
        report = build_report(ingest_reports=ingest, correlation=correlation,
                              run_config=config.to_report(), aggregate_report=agg_report,
                              notes=[f"{thin} counties dropped below min_months={config.min_months}"])
        atomic_write_text(config.out_report, dumps_report(report))
    return 0


def cmd_validate(config: RunConfig, out=None) -> int:
    out = out or sys.stdout
    checks = [(name, path) for name, path in (("market", config.market_path), ("svi", config.svi_path),
                                              ("geojson", config.geojson_path)) if path]
    if not checks:
        raise ConfigError("validate needs at least one of --market, --svi, --geojson")
    status = 0
    for name, path in checks:
        try:
            line = _validate_one(name, path, config)
        except PipelineError as exc:
            print(f"{name} {path}: INVALID: {exc}", file=out)
            code = exc.exit_code
            status = code if status == 0 else min(status, code)
            continue
        print(f"{name} {path}: ok, {line}", file=out)
    return status


def _validate_one(name, path, config):
    if name == "market":
        records, report = read_market_file(path, IngestFilter(config.property_type_filter))
        for _ in records:
            pass
        drops = ", ".join(f"{k}={v}" for k, v in sorted(report.dropped.items()))
        return f"read={report.rows_read} kept={report.rows_kept} dropped={report.rows_dropped} ({drops})"
    if name == "svi":
        _, report = read_svi_file(path)
        drops = ", ".join(f"{k}={v}" for k, v in sorted(report.dropped.items()))
        return f"read={report.rows_read} kept={report.rows_kept} dropped={report.rows_dropped} ({drops})"
    doc = load_geojson(path)
    error, bad = feature_problems(doc)
    if error:
        raise FormatError(error)
    if bad:
        raise FormatError(f"features lacking STATE/NAME at indexes {', '.join(map(str, bad))}")
    return f"features={len(doc['features'])}"


COMMANDS = {"score": cmd_score, "stats": cmd_stats, "validate": cmd_validate}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        config = resolve_config(_flags(args), args.config or os.environ.get(CONFIG_ENV) or None)
        return COMMANDS[args.command](config)
    except PipelineError as exc:
        print(f"countyscore: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"countyscore: error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
