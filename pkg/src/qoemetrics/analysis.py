"""Per-condition analysis of a study dataset into a report dictionary."""
from __future__ import annotations

import re
from typing import Any, Dict, List, Optional, Sequence, Tuple

from . import estimators as est
from .emodel import ThresholdSet, default_thresholds, discretize_thresholds, estimate_gob_pow_tme
from .errors import DomainError, NoInformationError
from .sos import fit_sos_parameter
from .types import StatDefinitionSet, StudyDataset, ensure_valid, group_by_condition

VARIANCE_MODES = {"population": 0, "sample": 1}


def parse_quantile(text: str) -> Tuple[int, int]:
    """``"1/2"`` -> ``(1, 2)``."""
    m = re.fullmatch(r"\s*(\d+)\s*/\s*(\d+)\s*", text)
    if not m:
        raise DomainError(f"quantile must be written n/q, got {text!r}")
    n, q = int(m.group(1)), int(m.group(2))
    if not 0 < n < q:
        raise DomainError(f"quantile needs 0 < n < q, got {text!r}")
    return n, q


def _natural_key(s: str):
    return [int(p) if p.isdigit() else p for p in re.split(r"(\d+)", s)]


def resolve_thresholds(dataset: StudyDataset, explicit: Optional[Sequence[float]] = None) -> ThresholdSet:
    scale = dataset.scale
    values = explicit if explicit is not None else dataset.thresholds
    if values is None:
        return default_thresholds(scale)
    t = ThresholdSet(*values, scale)
    if scale.is_discrete:
        t = discretize_thresholds(t, scale)
    return t


def _theta_key(theta: float) -> str:
    return f"{theta:g}"


def analyze_dataset(
    dataset: StudyDataset,
    quantiles: Sequence[str] = (),
    thetas: Sequence[float] = (),
    thresholds: Optional[Sequence[float]] = None,
    gob_pow_tme: bool = False,
    variance: str = "population",
) -> Dict[str, Any]:
    """Compute every per-condition statistic plus the study-level SOS fit.

    GoB/PoW/TME are included when ``gob_pow_tme`` is set, thresholds are
    given, or the dataset metadata declares them.
    """
    if variance not in VARIANCE_MODES:
        raise DomainError(f"variance mode must be one of {sorted(VARIANCE_MODES)}")
    ddof = VARIANCE_MODES[variance]
    parsed_q = [(s, parse_quantile(s)) for s in quantiles]

    requested = set(dataset.definition.statistics) | {"mos", "sos", "standard_error", "sos_fit"}
    if parsed_q:
        requested.add("quantiles")
    if thetas:
        requested.add("acceptability")
    want_gpt = gob_pow_tme or thresholds is not None or dataset.thresholds is not None \
        or "gob_pow_tme" in dataset.definition.statistics
    if want_gpt:
        requested.add("gob_pow_tme")
    if dataset.scale.is_binary:
        requested.add("acceptance")
    d = dataset.definition
    dataset = StudyDataset(
        StatDefinitionSet(d.scale, d.conditions, frozenset(requested), d.observators),
        dataset.ratings, dataset.repeated_measures, dataset.thresholds,
    )
    ensure_valid(dataset)
    t = resolve_thresholds(dataset, thresholds) if want_gpt else None

    groups = group_by_condition(dataset)
    blocks: List[Dict[str, Any]] = []
    moments = []
    fit_ids = []
    for cid in sorted(groups, key=_natural_key):
        stats = est.ConditionStats.from_sample(cid, groups[cid], dataset.scale)
        block: Dict[str, Any] = {"condition": cid, "count": stats.count, "mos": est.mos(stats)}
        warnings = []
        if stats.count >= 2:
            block["sos"] = est.sos(stats)
            block["standard_error"] = est.standard_error(stats)
        else:
            block["sos"] = None
            block["standard_error"] = None
            warnings.append("sos undefined for fewer than 2 ratings")
        if parsed_q:
            block["quantiles"] = {s: est.quantile(stats, n, q) for s, (n, q) in parsed_q}
        if thetas:
            block["acceptability"] = {_theta_key(th): est.theta_acceptability(stats, th) for th in thetas}
        if dataset.scale.is_binary:
            block["acceptance"] = est.acceptance_rate(stats)
        if t is not None:
            g, p, e = estimate_gob_pow_tme(stats, t)
            block.update(gob=g, pow=p, tme=e)
        block["warnings"] = warnings
        blocks.append(block)
        if ddof == 0 or stats.count >= 2:
            moments.append((est.mos(stats), est.variance(stats, ddof), stats.count))
            fit_ids.append(cid)

    study: Dict[str, Any] = {
        "scale": {"kind": dataset.scale.kind, "lower": dataset.scale.lower, "upper": dataset.scale.upper},
        "conditions": len(blocks),
        "ratings": len(dataset.ratings),
    }
    if t is not None:
        study["thresholds"] = {"gb": t.theta_gb, "pw": t.theta_pw, "te": t.theta_te}
    study_warnings = []
    fit = None
    if moments:
        try:
            fit = fit_sos_parameter(moments, dataset.scale)
        except NoInformationError as exc:
            study_warnings.append(str(exc))
    if fit is not None:
        study["sos_fit"] = {
            "a": fit.a,
            "raw_a": fit.raw_a,
            "residual": fit.residual,
            "variance": variance,
            "clamped": fit.clamped,
            "degenerate_conditions": [fit_ids[i] for i in fit.degenerate],
        }
    else:
        study["sos_fit"] = None
    study["warnings"] = study_warnings
    return {"study": study, "conditions": blocks}
