"""Reading rating CSVs with a JSON metadata sidecar, and writing reports.

Ratings file::

    # comment lines start with '#'
    subject_id,condition_id,rating
    s1,c1,4
    s2,c1,2

Metadata sidecar (every key optional)::

    {
      "scale": {"kind": "discrete", "lower": 1, "upper": 5},
      "conditions": [{"id": "c1", "attributes": {"content": "w1", "plt": 2.0}}],
      "statistics": ["mos", "sos"],
      "observators": ["sum", "sum-of-squares"],
      "thresholds": {"gb": 4, "pw": 2, "te": 1},
      "repeated_measures": false
    }
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Dict, List, Optional

from .errors import DomainError, ParseError, ValidationError
from .types import (
    ACR_SCALE,
    DEFAULT_STATISTICS,
    ConditionDescriptor,
    Rating,
    RatingScale,
    StatDefinitionSet,
    StudyDataset,
    validate_dataset,
)

HEADER = ("subject_id", "condition_id", "rating")


def _read_text(path) -> str:
    with open(path, "r", encoding="utf-8-sig", newline="") as fh:
        return fh.read()


def parse_ratings(text: str, path=None) -> List[Rating]:
    ratings = []
    header_seen = False
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = [f.strip() for f in next(csv.reader([line]))]
        if not header_seen:
            if tuple(fields) != HEADER:
                raise ParseError(f"expected header {','.join(HEADER)!r}, got {stripped!r}", path, lineno)
            header_seen = True
            continue
        if len(fields) != 3:
            raise ParseError(f"expected 3 fields, got {len(fields)}", path, lineno)
        subject, condition, raw = fields
        if not subject:
            raise ParseError("empty subject_id", path, lineno, "subject_id")
        if not condition:
            raise ParseError("empty condition_id", path, lineno, "condition_id")
        try:
            value = float(raw)
        except ValueError:
            raise ParseError(f"rating {raw!r} is not a number", path, lineno, "rating") from None
        if not math.isfinite(value):
            raise ParseError(f"rating {raw!r} is not finite", path, lineno, "rating")
        ratings.append(Rating(subject, condition, value))
    if not header_seen:
        raise ParseError("missing header line", path)
    return ratings


def _parse_scale(obj, path) -> RatingScale:
    if isinstance(obj, str):
        try:
            return RatingScale.parse(obj)
        except DomainError as exc:
            raise ParseError(str(exc), path, column="scale") from None
    if not isinstance(obj, dict):
        raise ParseError("scale must be an object or a 'lo:hi[:discrete]' string", path, column="scale")
    try:
        return RatingScale(obj.get("kind", "discrete"), float(obj["lower"]), float(obj["upper"]))
    except KeyError as exc:
        raise ParseError(f"scale is missing {exc.args[0]!r}", path, column="scale") from None
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad scale: {exc}", path, column="scale") from None


def parse_metadata(text: str, path=None) -> Dict[str, Any]:
    """Parse a metadata document into keyword pieces for :class:`StudyDataset`."""
    try:
        doc = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, path, exc.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError("metadata must be a JSON object", path)

    scale = _parse_scale(doc["scale"], path) if "scale" in doc else ACR_SCALE

    conditions = []
    for i, c in enumerate(doc.get("conditions", [])):
        if isinstance(c, str):
            conditions.append(ConditionDescriptor(c))
            continue
        if not isinstance(c, dict) or "id" not in c:
            raise ParseError(f"condition #{i} needs an 'id'", path, column="conditions")
        attrs = c.get("attributes", {})
        if isinstance(attrs, dict):
            attrs = tuple(attrs.items())
        else:
            attrs = tuple((str(k), v) for k, v in attrs)
        conditions.append(ConditionDescriptor(str(c["id"]), attrs))

    statistics = frozenset(doc.get("statistics", DEFAULT_STATISTICS))
    observators = doc.get("observators")
    if observators is not None:
        observators = frozenset(observators)

    thresholds = doc.get("thresholds")
    if thresholds is not None:
        try:
            if isinstance(thresholds, dict):
                thresholds = (float(thresholds["gb"]), float(thresholds["pw"]), float(thresholds["te"]))
            else:
                thresholds = tuple(float(x) for x in thresholds)
                if len(thresholds) != 3:
                    raise ValueError("need three values")
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad thresholds: {exc}", path, column="thresholds") from None

    return {
        "definition": StatDefinitionSet(scale, tuple(conditions), statistics, observators),
        "repeated_measures": bool(doc.get("repeated_measures", False)),
        "thresholds": thresholds,
    }


def build_dataset(ratings: List[Rating], meta: Optional[Dict[str, Any]] = None,
                  scale: Optional[RatingScale] = None) -> StudyDataset:
    """Assemble a dataset, registering conditions that only appear in the data."""
    if meta is None:
        meta = {"definition": StatDefinitionSet(scale or ACR_SCALE),
                "repeated_measures": False, "thresholds": None}
    definition = meta["definition"]
    if scale is not None:
        definition = StatDefinitionSet(scale, definition.conditions,
                                       definition.statistics, definition.observators)
    known = set(definition.condition_ids)
    extra = []
    for r in ratings:
        if r.condition not in known:
            known.add(r.condition)
            extra.append(ConditionDescriptor(r.condition))
    if extra:
        definition = StatDefinitionSet(definition.scale, definition.conditions + tuple(extra),
                                       definition.statistics, definition.observators)
    return StudyDataset(definition, tuple(ratings), meta["repeated_measures"], meta["thresholds"])


def load_dataset(ratings_path, metadata_path=None, scale: Optional[RatingScale] = None) -> StudyDataset:
    """Load and validate a dataset; ``scale`` overrides the metadata scale."""
    ratings = parse_ratings(_read_text(ratings_path), ratings_path)
    meta = None
    if metadata_path is not None:
        meta = parse_metadata(_read_text(metadata_path), metadata_path)
    dataset = build_dataset(ratings, meta, scale)
    violations = validate_dataset(dataset)
    if violations:
        raise ValidationError(violations)
    return dataset


def format_rating(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def dump_ratings(dataset: StudyDataset) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for r in dataset.ratings:
        w.writerow((r.subject, r.condition, format_rating(r.value)))
    return buf.getvalue()


def _json_number(x):
    if isinstance(x, float) and x.is_integer() and abs(x) < 1e15:
        return int(x)
    return x


def metadata_document(dataset: StudyDataset) -> Dict[str, Any]:
    d = dataset.definition
    doc: Dict[str, Any] = {
        "scale": {"kind": d.scale.kind, "lower": _json_number(d.scale.lower),
                  "upper": _json_number(d.scale.upper)},
        "conditions": [
            {"id": c.id, "attributes": {k: v for k, v in c.attributes}} for c in d.conditions
        ],
        "statistics": sorted(d.statistics),
    }
    if d.observators is not None:
        doc["observators"] = sorted(d.observators)
    if dataset.thresholds is not None:
        gb, pw, te = dataset.thresholds
        doc["thresholds"] = {"gb": _json_number(gb), "pw": _json_number(pw), "te": _json_number(te)}
    doc["repeated_measures"] = dataset.repeated_measures
    return doc


def dump_metadata(dataset: StudyDataset) -> str:
    return json.dumps(metadata_document(dataset), indent=2) + "\n"


def write_dataset(dataset: StudyDataset, ratings_path, metadata_path=None) -> None:
    Path(ratings_path).write_text(dump_ratings(dataset), encoding="utf-8", newline="")
    if metadata_path is not None:
        Path(metadata_path).write_text(dump_metadata(dataset), encoding="utf-8", newline="")


# -- reports -----------------------------------------------------------------

def round_sig(x: Optional[float], digits: int = 6) -> Optional[float]:
    if x is None:
        return None
    if x == 0:
        return 0.0
    return float(f"{x:.{digits}g}")


def _rounded(obj):
    if isinstance(obj, float):
        return round_sig(obj)
    if isinstance(obj, dict):
        return {k: _rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(v) for v in obj]
    return obj


def report_to_json(report: Dict[str, Any]) -> str:
    return json.dumps(_rounded(report), indent=2, ensure_ascii=False) + "\n"


def _csv_cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{round_sig(x):.6g}"
    return str(x)


def report_columns(report: Dict[str, Any]) -> List[str]:
    cols = ["condition", "count", "mos", "sos", "standard_error"]
    conds = report["conditions"]
    if conds:
        first = conds[0]
        cols += [f"q_{k}" for k in first.get("quantiles", {})]
        cols += [f"acc_{k}" for k in first.get("acceptability", {})]
        for key in ("acceptance", "gob", "pow", "tme"):
            if key in first:
                cols.append(key)
    return cols


def report_to_csv(report: Dict[str, Any]) -> str:
    buf = io.StringIO()
    fit = report["study"].get("sos_fit")
    if fit is not None:
        buf.write(f"# sos_fit a={_csv_cell(fit['a'])} raw_a={_csv_cell(fit['raw_a'])} "
                  f"residual={_csv_cell(fit['residual'])} variance={fit['variance']}\n")
    cols = report_columns(report)
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for c in report["conditions"]:
        row = []
        for col in cols:
            if col.startswith("q_"):
                row.append(_csv_cell(c["quantiles"][col[2:]]))
            elif col.startswith("acc_"):
                row.append(_csv_cell(c["acceptability"][col[4:]]))
            else:
                row.append(_csv_cell(c.get(col)))
        w.writerow(row)
    return buf.getvalue()


def render_report(report: Dict[str, Any], fmt: str = "json") -> str:
    if fmt == "json":
        return report_to_json(report)
    if fmt == "csv":
        return report_to_csv(report)
    raise DomainError(f"unknown report format {fmt!r}")


def write_report(report: Dict[str, Any], path, fmt: str = "json") -> None:
    Path(path).write_text(render_report(report, fmt), encoding="utf-8", newline="")


def read_report(path) -> Dict[str, Any]:
    return json.loads(_read_text(path))
