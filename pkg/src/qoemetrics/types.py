"""Rating scales, datasets and the statistical definition set.

A study is described by the tuple (scale, conditions, statistics,
observators): the scale the ratings live on, the test conditions, the
statistics to be computed and the accumulated quantities those statistics
need.  Ratings themselves are kept at full float precision; whether they
respect the scale is checked by :func:`validate_dataset`.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

from .errors import DomainError, ValidationError

DISCRETE = "discrete"
CONTINUOUS = "continuous"

OBSERVATORS = ("count", "sum", "sum-of-squares", "sorted-sample")

# observators each statistic needs; "count" is always implied
REQUIRED_OBSERVATORS: Dict[str, FrozenSet[str]] = {
    "mos": frozenset({"sum"}),
    "sos": frozenset({"sum", "sum-of-squares"}),
    "standard_error": frozenset({"sum", "sum-of-squares"}),
    "sos_fit": frozenset({"sum", "sum-of-squares"}),
    "pmf": frozenset({"sorted-sample"}),
    "quantiles": frozenset({"sorted-sample"}),
    "acceptability": frozenset({"sorted-sample"}),
    "acceptance": frozenset({"sum"}),
    "gob_pow_tme": frozenset({"sorted-sample"}),
}
STATISTICS = tuple(REQUIRED_OBSERVATORS)
DEFAULT_STATISTICS = frozenset({"mos", "sos"})


@dataclass(frozen=True)
class RatingScale:
    """A rating scale ``[lower, upper]``, either integer-categorical or continuous."""

    kind: str
    lower: float
    upper: float

    def __post_init__(self):
        if self.kind not in (DISCRETE, CONTINUOUS):
            raise DomainError(f"unknown scale kind {self.kind!r}")
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise DomainError("scale bounds must be finite")
        if not self.lower < self.upper:
            raise DomainError(f"scale lower bound {self.lower} must be below upper bound {self.upper}")
        if self.kind == DISCRETE:
            if not (float(self.lower).is_integer() and float(self.upper).is_integer()):
                raise DomainError("discrete scales need integer bounds")
            object.__setattr__(self, "lower", int(self.lower))
            object.__setattr__(self, "upper", int(self.upper))

    @classmethod
    def discrete(cls, lower: int, upper: int) -> "RatingScale":
        return cls(DISCRETE, lower, upper)

    @classmethod
    def continuous(cls, lower: float, upper: float) -> "RatingScale":
        return cls(CONTINUOUS, lower, upper)

    @classmethod
    def parse(cls, text: str) -> "RatingScale":
        """Parse ``"lo:hi"`` (continuous) or ``"lo:hi:discrete"``."""
        parts = text.strip().split(":")
        if len(parts) not in (2, 3):
            raise DomainError(f"scale must look like lo:hi[:discrete], got {text!r}")
        kind = CONTINUOUS
        if len(parts) == 3:
            kind = parts[2].strip().lower()
        try:
            lo, hi = float(parts[0]), float(parts[1])
        except ValueError:
            raise DomainError(f"scale bounds are not numbers: {text!r}") from None
        return cls(kind, lo, hi)

    def __str__(self):
        if self.is_discrete:
            return f"{self.lower}:{self.upper}:discrete"
        return f"{self.lower:g}:{self.upper:g}"

    @property
    def is_discrete(self) -> bool:
        return self.kind == DISCRETE

    @property
    def is_binary(self) -> bool:
        return self.is_discrete and self.lower == 0 and self.upper == 1

    @property
    def span(self) -> float:
        return self.upper - self.lower

    @property
    def categories(self) -> Tuple[int, ...]:
        if not self.is_discrete:
            raise DomainError("a continuous scale has no categories")
        return tuple(range(self.lower, self.upper + 1))

    def contains(self, u: float) -> bool:
        return self.lower <= u <= self.upper

    def check(self, u: float, what: str = "value") -> float:
        if not (math.isfinite(u) and self.contains(u)):
            raise DomainError(f"{what} {u} outside scale [{self.lower}, {self.upper}]")
        return u


ACR_SCALE = RatingScale.discrete(1, 5)
BINARY_SCALE = RatingScale.discrete(0, 1)


@dataclass(frozen=True)
class Rating:
    subject: str
    condition: str
    value: float


@dataclass(frozen=True)
class ConditionDescriptor:
    """A test condition; ``attributes`` is opaque ordered key/value metadata."""

    id: str
    attributes: Tuple[Tuple[str, object], ...] = ()


@dataclass(frozen=True)
class StatDefinitionSet:
    scale: RatingScale
    conditions: Tuple[ConditionDescriptor, ...] = ()
    statistics: FrozenSet[str] = DEFAULT_STATISTICS
    # None means "whatever the statistics need"
    observators: Optional[FrozenSet[str]] = None

    def effective_observators(self) -> FrozenSet[str]:
        if self.observators is not None:
            return frozenset(self.observators) | {"count"}
        needed = {"count"}
        for name in self.statistics:
            needed |= REQUIRED_OBSERVATORS.get(name, frozenset())
        return frozenset(needed)

    @property
    def condition_ids(self) -> Tuple[str, ...]:
        return tuple(c.id for c in self.conditions)


@dataclass(frozen=True)
class StudyDataset:
    definition: StatDefinitionSet
    ratings: Tuple[Rating, ...]
    repeated_measures: bool = False
    # (gb, pw, te) thresholds declared in the study metadata, if any
    thresholds: Optional[Tuple[float, float, float]] = None

    def __post_init__(self):
        object.__setattr__(self, "ratings", tuple(self.ratings))

    @property
    def scale(self) -> RatingScale:
        return self.definition.scale

    @property
    def counts(self) -> Dict[str, int]:
        """Ratings per condition (R_j), in definition order."""
        c = Counter(r.condition for r in self.ratings)
        return {cid: c[cid] for cid in self.definition.condition_ids if c[cid]}


@dataclass(frozen=True)
class Violation:
    rule: str
    message: str
    subject: Optional[str] = None
    condition: Optional[str] = None
    index: Optional[int] = field(default=None, compare=False)

    def __str__(self):
        where = []
        if self.index is not None:
            where.append(f"rating #{self.index}")
        if self.subject is not None:
            where.append(f"subject {self.subject}")
        if self.condition is not None:
            where.append(f"condition {self.condition}")
        loc = f" ({', '.join(where)})" if where else ""
        return f"{self.rule}: {self.message}{loc}"


def validate_dataset(dataset: StudyDataset) -> List[Violation]:
    """Return every invariant violation in ``dataset``; empty means valid."""
    out: List[Violation] = []
    definition = dataset.definition
    scale = definition.scale

    seen_ids = set()
    for cond in definition.conditions:
        if cond.id in seen_ids:
            out.append(Violation("duplicate-condition", "condition id declared twice", condition=cond.id))
        seen_ids.add(cond.id)

    unknown_stats = sorted(set(definition.statistics) - set(REQUIRED_OBSERVATORS))
    for name in unknown_stats:
        out.append(Violation("unknown-statistic", f"statistic {name!r} is not supported"))

    available = definition.effective_observators()
    for name in sorted(set(definition.statistics) & set(REQUIRED_OBSERVATORS)):
        missing = REQUIRED_OBSERVATORS[name] - available
        if missing:
            out.append(Violation(
                "missing-observator",
                f"statistic {name!r} needs observators {sorted(missing)}",
            ))

    pairs = set()
    for i, r in enumerate(dataset.ratings):
        v = r.value
        if r.condition not in seen_ids:
            out.append(Violation("unknown-condition", "condition not declared",
                                 r.subject, r.condition, i))
        if not math.isfinite(v):
            out.append(Violation("non-finite", f"rating {v} is not finite", r.subject, r.condition, i))
            continue
        if not scale.contains(v):
            out.append(Violation("out-of-range",
                                 f"rating {v:g} outside [{scale.lower}, {scale.upper}]",
                                 r.subject, r.condition, i))
        elif scale.is_discrete and not float(v).is_integer():
            out.append(Violation("non-integer-category",
                                 f"rating {v:g} is not a category of {scale}",
                                 r.subject, r.condition, i))
        if not dataset.repeated_measures:
            key = (r.subject, r.condition)
            if key in pairs:
                out.append(Violation("duplicate-rating",
                                     "repeated rating for subject/condition pair",
                                     r.subject, r.condition, i))
            pairs.add(key)
    return out


def ensure_valid(dataset: StudyDataset) -> StudyDataset:
    violations = validate_dataset(dataset)
    if violations:
        raise ValidationError(violations)
    return dataset


def group_by_condition(dataset: StudyDataset) -> Dict[str, List[float]]:
    """Map each condition id to its ratings sorted ascending.

    Keys follow the order of ``dataset.definition.conditions``; conditions
    without ratings are left out.
    """
    ensure_valid(dataset)
    groups: Dict[str, List[float]] = {cid: [] for cid in dataset.definition.condition_ids}
    for r in dataset.ratings:
        groups[r.condition].append(r.value)
    return {cid: sorted(vals) for cid, vals in groups.items() if vals}
