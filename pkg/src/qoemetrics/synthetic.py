"""Synthetic study datasets with known properties."""
from __future__ import annotations

import random
from typing import Optional, Sequence

from .errors import DomainError
from .types import (
    ACR_SCALE,
    BINARY_SCALE,
    ConditionDescriptor,
    Rating,
    RatingScale,
    StatDefinitionSet,
    StudyDataset,
)


def _exact_count(weight: float, total: int, what: str) -> int:
    n = weight * total
    k = round(n)
    if abs(n - k) > 1e-9:
        raise DomainError(f"{what} weight {weight} does not give a whole number of {total} ratings")
    return int(k)


def hypothesis_dataset(a: float, z_values: Sequence[float], count: int,
                       scale: Optional[RatingScale] = None) -> StudyDataset:
    """Dataset whose population variances follow the SOS hypothesis exactly.

    Each condition mixes the two endpoints with weights ``a*(1-z)`` and
    ``a*z`` and the normalized mean ``z`` itself with weight ``1-a``; that
    mixture has mean ``z`` and variance ``a*z*(1-z)``.  Weights must turn
    into whole rating counts for ``count`` subjects.
    """
    scale = scale or RatingScale.continuous(0, 1)
    ratings = []
    conditions = []
    for j, z in enumerate(z_values, start=1):
        cid = f"c{j}"
        conditions.append(ConditionDescriptor(cid, (("z", z),)))
        n_lo = _exact_count(a * (1 - z), count, "lower endpoint")
        n_hi = _exact_count(a * z, count, "upper endpoint")
        n_mid = count - n_lo - n_hi
        mid = scale.lower + z * scale.span
        values = [scale.lower] * n_lo + [scale.upper] * n_hi + [mid] * n_mid
        ratings.extend(Rating(f"s{i}", cid, float(v)) for i, v in enumerate(values, start=1))
    return StudyDataset(StatDefinitionSet(scale, tuple(conditions)), tuple(ratings))


def binary_dataset(accepting: Sequence[int], count: int) -> StudyDataset:
    """Accept/reject dataset; condition j has ``accepting[j]`` ones out of ``count``."""
    ratings = []
    conditions = []
    for j, k in enumerate(accepting, start=1):
        cid = f"c{j}"
        conditions.append(ConditionDescriptor(cid))
        ratings.extend(Rating(f"s{i}", cid, 1.0 if i <= k else 0.0) for i in range(1, count + 1))
    return StudyDataset(StatDefinitionSet(BINARY_SCALE, tuple(conditions)), tuple(ratings))


def random_dataset(rng: random.Random, scale: RatingScale, conditions: int, subjects: int) -> StudyDataset:
    """Uniformly random ratings, integers on discrete scales."""
    ratings = []
    for j in range(1, conditions + 1):
        for i in range(1, subjects + 1):
            if scale.is_discrete:
                v = float(rng.randint(scale.lower, scale.upper))
            else:
                v = rng.uniform(scale.lower, scale.upper)
            ratings.append(Rating(f"s{i}", f"c{j}", v))
    conds = tuple(ConditionDescriptor(f"c{j}") for j in range(1, conditions + 1))
    return StudyDataset(StatDefinitionSet(scale, conds), tuple(ratings))


def web_qoe_dataset(subjects: int = 72, pages: int = 40, seed: int = 0) -> StudyDataset:
    """ACR ratings shaped like a web QoE study.

    Each condition is a (content, page load time) pair; ratings fall with
    load time plus per-subject noise.
    """
    rng = random.Random(seed)
    conditions = []
    ratings = []
    for j in range(1, pages + 1):
        plt = round(rng.uniform(0.5, 12.0), 2)
        cid = f"c{j}"
        conditions.append(ConditionDescriptor(cid, (("content", f"w{j}"), ("plt", plt))))
        centre = 5.0 - 3.5 * plt / 12.0
        for r in range(1, subjects + 1):
            v = min(5, max(1, round(rng.gauss(centre, 0.9))))
            ratings.append(Rating(f"s{r}", cid, float(v)))
    definition = StatDefinitionSet(ACR_SCALE, tuple(conditions))
    return StudyDataset(definition, tuple(ratings))
