"""SOS as a function of MOS: bounds, the SOS hypothesis and its parameter fit.

On a scale ``[lo, hi]`` the largest possible standard deviation for a mean
``u`` is reached by putting all mass on the two endpoints; the smallest
(on unit-spaced integer scales) by splitting mass between ``floor(u)`` and
``floor(u) + 1``.  The SOS hypothesis scales the maximum by ``sqrt(a)``.

Fitting works on ratings normalized to ``[0, 1]``, where the hypothesis
reads ``var(z) = a * (z - z**2)`` and the least-squares ``a`` has a closed
form.  Linear rescaling of the ratings leaves ``a`` unchanged.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .errors import DomainError, NoInformationError
from .estimators import ConditionStats, variance
from .types import Rating, RatingScale, StatDefinitionSet, StudyDataset, group_by_condition


def _sqrt_clamped(x: float) -> float:
    return math.sqrt(x) if x > 0 else 0.0


def min_sos(u: float, scale: RatingScale) -> float:
    scale.check(u, "MOS")
    if not scale.is_discrete:
        return 0.0
    k = math.floor(u)
    return _sqrt_clamped(u * (2 * k + 1) - k * (k + 1) - u * u)


def max_sos(u: float, scale: RatingScale) -> float:
    scale.check(u, "MOS")
    lo, hi = scale.lower, scale.upper
    return _sqrt_clamped(-u * u + (lo + hi) * u - lo * hi)


def sos_hypothesis(u: float, a: float, scale: RatingScale) -> float:
    """SOS predicted for MOS ``u`` with SOS parameter ``a``."""
    if not 0.0 <= a <= 1.0:
        raise DomainError(f"SOS parameter must lie in [0, 1], got {a}")
    return math.sqrt(a) * max_sos(u, scale)


def normalize(u: float, scale: RatingScale) -> float:
    scale.check(u)
    return (u - scale.lower) / scale.span


@dataclass(frozen=True)
class LinearTransform:
    """Affine map of ``source`` onto ``target`` (endpoints to endpoints)."""

    source: RatingScale
    target: RatingScale

    @property
    def slope(self) -> float:
        return self.target.span / self.source.span

    def __call__(self, u: float) -> float:
        return transform_rating(u, self)

    def inverse(self) -> "LinearTransform":
        return LinearTransform(self.target, self.source)


def transform_rating(u: float, t: LinearTransform) -> float:
    src, dst = t.source, t.target
    src.check(u, "rating")
    if (src.lower, src.upper) == (dst.lower, dst.upper):
        return u
    if u == src.upper:
        return float(dst.upper)
    return (u - src.lower) / src.span * dst.span + dst.lower


@dataclass(frozen=True)
class SosPoint:
    z: float
    variance: float
    count: int
    degenerate: bool


@dataclass(frozen=True)
class SosFit:
    """Least-squares SOS parameter.

    ``a`` is clamped to [0, 1]; ``raw_a`` is the unclamped closed-form value.
    ``points`` are on the normalized scale.  ``residual`` is the squared
    error of the clamped ``a`` over all points.
    """

    a: float
    raw_a: float
    points: Tuple[SosPoint, ...]
    residual: float

    @property
    def clamped(self) -> bool:
        return self.a != self.raw_a

    @property
    def degenerate(self) -> Tuple[int, ...]:
        return tuple(i for i, p in enumerate(self.points) if p.degenerate)


def normalized_points(per_condition: Sequence[Sequence[float]], scale: RatingScale) -> List[SosPoint]:
    """Map ``(mos, variance[, count])`` tuples to the unit scale."""
    span2 = scale.span ** 2
    out = []
    for item in per_condition:
        if len(item) == 2:
            m, v = item
            n = 0
        else:
            m, v, n = item
        if v < 0:
            raise DomainError(f"variance must be non-negative, got {v}")
        z = normalize(m, scale)
        out.append(SosPoint(z, v / span2, int(n), z in (0.0, 1.0)))
    return out


def sos_loss(a: float, points: Sequence[SosPoint]) -> float:
    """Squared error between hypothesis variances and observed variances."""
    return math.fsum((a * (p.z - p.z * p.z) - p.variance) ** 2 for p in points)


def fit_sos_parameter(per_condition: Sequence[Sequence[float]], scale: RatingScale) -> SosFit:
    """Closed-form least-squares SOS parameter from per-condition (MOS, variance).

    Conditions whose MOS sits on a scale endpoint add nothing to either sum
    and are only flagged.
    """
    points = normalized_points(per_condition, scale)
    num = math.fsum((p.z * p.z - p.z) * p.variance for p in points if not p.degenerate)
    den = math.fsum((p.z * p.z - p.z) ** 2 for p in points if not p.degenerate)
    if den == 0.0:
        raise NoInformationError("every condition has MOS at a scale endpoint; SOS parameter undetermined")
    raw = -num / den
    a = min(1.0, max(0.0, raw))
    return SosFit(a=a, raw_a=raw, points=tuple(points), residual=sos_loss(a, points))


def condition_moments(dataset: StudyDataset, ddof: int = 0) -> List[Tuple[float, float, int]]:
    """``(mos, variance, count)`` for each condition of ``dataset``.

    With ``ddof=1`` conditions holding a single rating are skipped.
    """
    out = []
    for cid, sample in group_by_condition(dataset).items():
        if ddof == 1 and len(sample) < 2:
            continue
        stats = ConditionStats.from_sample(cid, sample, dataset.scale)
        out.append((stats.sum / stats.count, variance(stats, ddof), stats.count))
    return out


def fit_dataset(dataset: StudyDataset, ddof: int = 0) -> SosFit:
    return fit_sos_parameter(condition_moments(dataset, ddof), dataset.scale)


def transform_dataset(dataset: StudyDataset, t: LinearTransform) -> StudyDataset:
    """Apply ``t`` to every rating; the result lives on ``t.target``."""
    if (dataset.scale.lower, dataset.scale.upper) != (t.source.lower, t.source.upper):
        raise DomainError(f"dataset scale {dataset.scale} does not match transform source {t.source}")
    ratings = tuple(Rating(r.subject, r.condition, transform_rating(r.value, t)) for r in dataset.ratings)
    thresholds = None
    if dataset.thresholds is not None:
        thresholds = tuple(transform_rating(x, t) for x in dataset.thresholds)
    d = dataset.definition
    definition = StatDefinitionSet(t.target, d.conditions, d.statistics, d.observators)
    return StudyDataset(definition, ratings, dataset.repeated_measures, thresholds)


def verify_fit_invariance(dataset: StudyDataset, t: LinearTransform, ddof: int = 0) -> Tuple[float, float]:
    """Fitted ``a`` before and after transforming every rating with ``t``."""
    counts = dataset.counts
    if any(n < 2 for n in counts.values()):
        raise DomainError("invariance check needs at least 2 ratings per condition")
    before = fit_dataset(dataset, ddof).a
    after = fit_dataset(transform_dataset(dataset, t), ddof).a
    return before, after
