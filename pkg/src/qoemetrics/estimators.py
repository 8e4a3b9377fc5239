"""Per-condition estimators: pmf, MOS, SOS, quantiles, acceptability."""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Dict, Iterable, Tuple

from .errors import DomainError, UnsupportedOperation
from .types import RatingScale

# radicands this far below zero are treated as rounding noise
NEGATIVE_RADICAND_TOL = 1e-9


@dataclass(frozen=True)
class ConditionStats:
    """Sufficient observators for one test condition."""

    condition: str
    count: int
    sum: float
    sum_sq: float
    sorted_sample: Tuple[float, ...]
    scale: RatingScale

    @classmethod
    def from_sample(cls, condition: str, sample: Iterable[float], scale: RatingScale) -> "ConditionStats":
        xs = tuple(sorted(float(x) for x in sample))
        if not xs:
            raise DomainError(f"condition {condition!r} has no ratings")
        return cls(
            condition=condition,
            count=len(xs),
            sum=math.fsum(xs),
            sum_sq=math.fsum(x * x for x in xs),
            sorted_sample=xs,
            scale=scale,
        )


@dataclass(frozen=True)
class EmpiricalPmf:
    scale: RatingScale
    probabilities: Dict[int, float]


def _require_sample(stats: ConditionStats, minimum: int = 1) -> None:
    if stats.count < minimum:
        raise DomainError(
            f"condition {stats.condition!r} has {stats.count} rating(s), need at least {minimum}"
        )


def empirical_pmf(stats: ConditionStats) -> EmpiricalPmf:
    """Relative frequency of every category of a discrete scale."""
    if not stats.scale.is_discrete:
        raise UnsupportedOperation("empirical pmf needs a discrete scale")
    _require_sample(stats)
    counts = {u: 0 for u in stats.scale.categories}
    for x in stats.sorted_sample:
        if not x.is_integer() or int(x) not in counts:
            raise DomainError(f"rating {x:g} is not a category of {stats.scale}")
        counts[int(x)] += 1
    return EmpiricalPmf(stats.scale, {u: n / stats.count for u, n in counts.items()})


def mos(stats: ConditionStats) -> float:
    _require_sample(stats)
    return stats.sum / stats.count


def _sample_variance(stats: ConditionStats) -> float:
    _require_sample(stats, 2)
    n = stats.count
    # (1/(n-1)) sum_sq - (n/(n-1)) mean^2, arranged to be exact for integer ratings
    rad = (n * stats.sum_sq - stats.sum * stats.sum) / (n * (n - 1))
    if rad < 0:
        if rad < -NEGATIVE_RADICAND_TOL:
            raise DomainError(f"negative variance {rad} for condition {stats.condition!r}")
        rad = 0.0
    return rad


def variance(stats: ConditionStats, ddof: int = 0) -> float:
    """Population (``ddof=0``) or unbiased sample (``ddof=1``) variance."""
    if ddof == 1:
        return _sample_variance(stats)
    if ddof != 0:
        raise DomainError("ddof must be 0 or 1")
    _require_sample(stats)
    n = stats.count
    v = (n * stats.sum_sq - stats.sum * stats.sum) / (n * n)
    if v < 0:
        if v < -NEGATIVE_RADICAND_TOL:
            raise DomainError(f"negative variance {v} for condition {stats.condition!r}")
        v = 0.0
    return v


def sos(stats: ConditionStats) -> float:
    """Standard deviation of opinion scores (R-1 denominator)."""
    return math.sqrt(_sample_variance(stats))


def standard_error(stats: ConditionStats) -> float:
    return sos(stats) / math.sqrt(stats.count)


def quantile(stats: ConditionStats, n: int, q: int) -> float:
    """n-th q-quantile as the order statistic of rank ceil(R*n/q)."""
    if not (isinstance(n, int) and isinstance(q, int)) or not 0 < n < q:
        raise DomainError(f"quantile needs integers 0 < n < q, got n={n}, q={q}")
    _require_sample(stats)
    h = -(-stats.count * n // q)
    return stats.sorted_sample[h - 1]


def theta_acceptability(stats: ConditionStats, theta: float) -> float:
    """Fraction of ratings at or above ``theta``."""
    _require_sample(stats)
    below = bisect.bisect_left(stats.sorted_sample, theta)
    return (stats.count - below) / stats.count


def fraction_at_most(stats: ConditionStats, theta: float) -> float:
    """Fraction of ratings at or below ``theta``."""
    _require_sample(stats)
    return bisect.bisect_right(stats.sorted_sample, theta) / stats.count


def acceptance_rate(stats: ConditionStats) -> float:
    if not stats.scale.is_binary:
        raise UnsupportedOperation("acceptance needs the binary {0, 1} scale")
    _require_sample(stats)
    return sum(1 for x in stats.sorted_sample if x == 1) / stats.count
