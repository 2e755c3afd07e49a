"""Output writers: scored CSV, augmented GeoJSON and the JSON run report."""

from __future__ import annotations

import copy
import csv
import io
import json
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .errors import AmbiguousMatchError, ConfigError, FormatError, InputIOError, InvalidNameError
from .geo_names import CountyKey, canonicalize_county_name

CSV_HEADER = ("state_fips", "county", "growth_raw", "growth_norm", "svi",
              "resilience", "score", "score_viz")
DEFAULT_SCORE_PROPERTY = "investment_score"
STATE_PROPERTY = "STATE"
NAME_PROPERTY = "NAME"
REPORT_SCHEMA = 1


@dataclass
class MatchReport:
    total_features: int = 0
    total_scores: int = 0
    matched: int = 0
    unmatched_features: list = field(default_factory=list)
    unmatched_scores: list = field(default_factory=list)

    def to_dict(self):
        return {
            "total_features": self.total_features,
            "total_scores": self.total_scores,
            "matched": self.matched,
            "unmatched_features_count": len(self.unmatched_features),
            "unmatched_scores_count": len(self.unmatched_scores),
            "unmatched_features": self.unmatched_features,
            "unmatched_scores": [str(k) for k in self.unmatched_scores],
        }


def atomic_write_text(path, text: str):
    """Write ``text`` to ``path`` so the file is either absent, old, or complete."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    except OSError as exc:
        raise InputIOError(f"cannot write {path}: {exc.strerror or exc}") from exc
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise InputIOError(f"cannot write {path}: {exc.strerror or exc}") from exc


def load_geojson(path) -> dict:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputIOError(f"cannot open {path}: {exc.strerror or exc}") from exc
    try:
        doc = json.loads(raw.decode("utf-8-sig"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: malformed GeoJSON: {exc}") from exc
    return doc


def feature_problems(doc, state_property=STATE_PROPERTY, name_property=NAME_PROPERTY):
    """Return ``(structural_error, bad_feature_indexes)`` for a FeatureCollection."""
    if not isinstance(doc, dict) or doc.get("type") != "FeatureCollection":
        return "document is not a GeoJSON FeatureCollection", []
    features = doc.get("features")
    if not isinstance(features, list):
        return "FeatureCollection has no features array", []
    bad = []
    for i, feature in enumerate(features):
        props = feature.get("properties") if isinstance(feature, dict) else None
        if (not isinstance(props, dict)
                or not isinstance(props.get(state_property), str)
                or not isinstance(props.get(name_property), str)):
            bad.append(i)
    return None, bad


def augment_geojson(doc: dict, scores, property_name: str = DEFAULT_SCORE_PROPERTY,
                    use_viz_inversion: bool = True, state_property: str = STATE_PROPERTY,
                    name_property: str = NAME_PROPERTY):
    """Copy ``doc`` and inject each matched county's score into its feature properties.

    Features are matched on state FIPS and canonical county name. With
    ``use_viz_inversion`` the injected value is ``1 - score`` so that high
    values mean poor investments on red-high colour ramps.
    """
    error, bad = feature_problems(doc, state_property, name_property)
    if error:
        raise FormatError(error)
    if bad:
        shown = ", ".join(map(str, bad[:20])) + (" ..." if len(bad) > 20 else "")
        raise FormatError(
            f"features missing string {state_property}/{name_property} properties at indexes: {shown}")
    by_key = {}
    for s in scores:
        by_key[s.key] = s
    out = copy.deepcopy(doc)
    report = MatchReport(total_features=len(out["features"]), total_scores=len(by_key))
    matched_at: dict[CountyKey, int] = {}
    for i, feature in enumerate(out["features"]):
        props = feature["properties"]
        state, name = props[state_property], props[name_property]
        try:
            key = CountyKey(state, canonicalize_county_name(name))
        except InvalidNameError:
            key = None
        score = by_key.get(key)
        if score is None:
            report.unmatched_features.append({"index": i, "state": state, "name": name})
            continue
        if key in matched_at:
            raise AmbiguousMatchError(
                f"county {key} matches features {matched_at[key]} and {i}")
        matched_at[key] = i
        props[property_name] = score.score_viz if use_viz_inversion else score.score
    report.matched = len(matched_at)
    report.unmatched_scores = sorted(k for k in by_key if k not in matched_at)
    return out, report


def dumps_geojson(doc) -> str:
    return json.dumps(doc, ensure_ascii=False, separators=(",", ":")) + "\n"


def canonical_json(doc) -> str:
    """Key-sorted compact serialization used to compare documents."""
    return json.dumps(doc, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def write_geojson(doc, destination):
    atomic_write_text(destination, dumps_geojson(doc))


def _fmt(x):
    return f"{x:.6f}"


def scores_csv_text(scores) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for s in scores:
        writer.writerow((s.key.state_fips, s.key.county_name, _fmt(s.growth_raw),
                         _fmt(s.growth_norm), _fmt(s.svi), _fmt(s.resilience),
                         _fmt(s.score), _fmt(s.score_viz)))
    return buf.getvalue()


def write_scores_csv(scores, destination) -> int:
    scores = list(scores)
    atomic_write_text(destination, scores_csv_text(scores))
    return len(scores)


def _as_dict(obj):
    if obj is None or isinstance(obj, dict):
        return obj
    return obj.to_dict()


def report_timestamp() -> str:
    """UTC now, or ``SOURCE_DATE_EPOCH`` when set so reruns are byte-identical."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch:
        try:
            when = datetime.fromtimestamp(int(epoch), timezone.utc)
        except (ValueError, OverflowError, OSError):
            raise ConfigError(f"SOURCE_DATE_EPOCH must be integer seconds, got {epoch!r}") from None
    else:
        when = datetime.now(timezone.utc)
    return when.replace(microsecond=0).isoformat()


def build_report(*, ingest_reports, join_report=None, match_report=None, correlation=None,
                 summary=None, run_config=None, aggregate_report=None, notes=(),
                 timestamp: str | None = None) -> dict:
    if timestamp is None:
        timestamp = report_timestamp()
    return {
        "schema": REPORT_SCHEMA,
        "generated_at": timestamp,
        "config": dict(run_config or {}),
        "ingest": {name: _as_dict(r) for name, r in ingest_reports.items()},
        "aggregate": _as_dict(aggregate_report),
        "join": _as_dict(join_report),
        "match": _as_dict(match_report),
        "correlation": _as_dict(correlation),
        "summary": summary,
        "notes": list(notes),
    }


def dumps_report(report: dict) -> str:
    return json.dumps(report, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def write_report_json(ingest_reports, join_report, match_report, correlation, summary,
                      run_config, destination, **extra):
    report = build_report(ingest_reports=ingest_reports, join_report=join_report,
                          match_report=match_report, correlation=correlation,
                          summary=summary, run_config=run_config, **extra)
    atomic_write_text(destination, dumps_report(report))
    return report
