"""E-model transformation laws between Transmission Rating, MOS and GoB/PoW/TME.

The Transmission Rating ``r`` in [0, 100] maps to MOS by a cubic law.  The
percentages of users rating good-or-better, poor-or-worse, or terminating
early are normal CDFs centred on r = 60, 45 and 36 with spread 16.

The cubic is *not* monotone on the whole of [0, 100]: it dips below 1 for
0 < r < 6.515 and turns upward at ``R_TURN`` (about 3.22).  The inverse
``mos_to_r`` therefore searches the increasing branch [R_TURN, 100], which
is the branch the published MOS/R table uses (MOS 1 -> R 6.52).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import DomainError, UnsupportedOperation
from .estimators import ConditionStats, fraction_at_most, theta_acceptability
from .types import ACR_SCALE, RatingScale

R_MIN, R_MAX = 0.0, 100.0
MOS_MIN, MOS_MAX = 1.0, 4.5
SPREAD = 16.0
R_GOB, R_POW, R_TME = 60.0, 45.0, 36.0

# stationary points of r_to_mos: roots of -2.1e-5 r^2 + 2.24e-3 r - 7e-3
_disc = math.sqrt(2.24e-3 ** 2 - 4 * 2.1e-5 * 7e-3)
R_TURN = (2.24e-3 - _disc) / (2 * 2.1e-5)

BISECT_TOL = 1e-9

DEFAULT_TABLE_MOS = (
    1.0, 1.5, 1.87293, 2.0, 2.31513, 2.5, 3.0, 3.1, 3.5, 4.0, 4.5, 5.0,
)


def std_normal_cdf(x: float) -> float:
    """Standard normal CDF via the complementary error function."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def _check_r(r: float) -> float:
    if not (math.isfinite(r) and R_MIN <= r <= R_MAX):
        raise DomainError(f"transmission rating {r} outside [0, 100]")
    return r


def good_or_better(r: float) -> float:
    """GoB in percent."""
    _check_r(r)
    return 100.0 * std_normal_cdf((r - R_GOB) / SPREAD)


def poor_or_worse(r: float) -> float:
    """PoW in percent."""
    _check_r(r)
    return 100.0 * std_normal_cdf((R_POW - r) / SPREAD)


def terminate_early(r: float) -> float:
    """TME in percent."""
    _check_r(r)
    return 100.0 * std_normal_cdf((R_TME - r) / SPREAD)


def r_to_mos(r: float) -> float:
    _check_r(r)
    return 7.0 * (r - 60.0) * (100.0 - r) * r * 1e-6 + 0.035 * r + 1.0


def _bisect(f, lo: float, hi: float, tol: float) -> float:
    flo = f(lo)
    if flo == 0.0:
        return lo
    if f(hi) == 0.0:
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def mos_to_r(mos: float) -> float:
    """Transmission Rating on the increasing branch with ``r_to_mos(r) == mos``."""
    if not math.isfinite(mos) or mos < MOS_MIN:
        raise DomainError(f"MOS {mos} below the E-model range [1, 4.5]")
    if mos > MOS_MAX:
        raise DomainError(f"transmission rating is undefined for MOS {mos} > 4.5")
    return _bisect(lambda r: r_to_mos(r) - mos, R_TURN, R_MAX, BISECT_TOL)


@dataclass(frozen=True)
class EModelPoint:
    r: Optional[float]
    mos: float
    gob_pct: float
    pow_pct: float
    tme_pct: float


def emodel_point(r: float) -> EModelPoint:
    return EModelPoint(r, r_to_mos(r), good_or_better(r), poor_or_worse(r), terminate_early(r))


def emodel_table(mos_values: Sequence[float] = DEFAULT_TABLE_MOS) -> List[EModelPoint]:
    """MOS -> (R, GoB, PoW, TME) rows; MOS above 4.5 has no R and saturates."""
    rows = []
    for m in mos_values:
        if not (math.isfinite(m) and 1.0 <= m <= 5.0):
            raise DomainError(f"MOS {m} outside the ACR range [1, 5]")
        if m > MOS_MAX:
            rows.append(EModelPoint(None, m, 100.0, 0.0, 0.0))
            continue
        r = mos_to_r(m)
        rows.append(EModelPoint(r, m, good_or_better(r), poor_or_worse(r), terminate_early(r)))
    return rows


@dataclass(frozen=True)
class ThresholdSet:
    theta_gb: float
    theta_pw: float
    theta_te: float
    scale: RatingScale

    def __post_init__(self):
        if not (self.theta_te <= self.theta_pw < self.theta_gb):
            raise DomainError(
                f"thresholds need te <= pw < gb, got gb={self.theta_gb}, "
                f"pw={self.theta_pw}, te={self.theta_te}"
            )

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.theta_gb, self.theta_pw, self.theta_te)


R_SCALE = RatingScale.continuous(0, 100)
EMODEL_R_THRESHOLDS = ThresholdSet(R_GOB, R_POW, R_TME, R_SCALE)
EMODEL_MOS_THRESHOLDS = ThresholdSet(r_to_mos(R_GOB), r_to_mos(R_POW), r_to_mos(R_TME),
                                     RatingScale.continuous(1, 5))


def discretize_thresholds(t: ThresholdSet, target: RatingScale) -> ThresholdSet:
    """Round GoB up and PoW/TME down onto an integer scale."""
    if not target.is_discrete:
        raise UnsupportedOperation("thresholds can only be discretized onto a discrete scale")
    return ThresholdSet(
        math.ceil(t.theta_gb), math.floor(t.theta_pw), math.floor(t.theta_te), target
    )


def default_thresholds(scale: RatingScale) -> ThresholdSet:
    """E-model thresholds for the 1..5 and 0..100 scales."""
    bounds = (scale.lower, scale.upper)
    if bounds == (0, 100):
        base = EMODEL_R_THRESHOLDS
    elif bounds == (1, 5):
        base = EMODEL_MOS_THRESHOLDS
    else:
        raise DomainError(f"no default GoB/PoW/TME thresholds for scale {scale}; pass them explicitly")
    if scale.is_discrete:
        return discretize_thresholds(base, scale)
    return ThresholdSet(*base.as_tuple(), scale)


def estimate_gob_pow_tme(stats: ConditionStats, t: ThresholdSet) -> Tuple[float, float, float]:
    """Empirical (GoB, PoW, TME) fractions from a rating sample."""
    if stats.scale.is_discrete and not all(float(x).is_integer() for x in t.as_tuple()):
        raise DomainError("discretize thresholds before applying them to a discrete scale")
    return (
        theta_acceptability(stats, t.theta_gb),
        fraction_at_most(stats, t.theta_pw),
        fraction_at_most(stats, t.theta_te),
    )


@dataclass(frozen=True)
class CurvePoint:
    mos: float
    gob_pct: float
    pow_pct: float
    neutral_pct: float


def curve_data(mos_min: float = MOS_MIN, mos_max: float = MOS_MAX, steps: int = 36) -> List[CurvePoint]:
    """GoB, PoW and 'neutral' (the rest) over an even MOS grid."""
    if not (MOS_MIN <= mos_min < mos_max <= MOS_MAX):
        raise DomainError(f"need 1 <= mos_min < mos_max <= 4.5, got {mos_min}, {mos_max}")
    if steps < 2:
        raise DomainError("need at least 2 steps")
    out = []
    width = mos_max - mos_min
    for i in range(steps):
        m = mos_max if i == steps - 1 else mos_min + width * i / (steps - 1)
        r = mos_to_r(m)
        g, p = good_or_better(r), poor_or_worse(r)
        out.append(CurvePoint(m, g, p, 100.0 - g - p))
    return out


__all__ = [
    "CurvePoint", "EModelPoint", "ThresholdSet", "DEFAULT_TABLE_MOS", "EMODEL_MOS_THRESHOLDS",
    "EMODEL_R_THRESHOLDS", "R_TURN", "curve_data", "default_thresholds", "discretize_thresholds",
    "emodel_point", "emodel_table", "estimate_gob_pow_tme", "good_or_better", "mos_to_r",
    "poor_or_worse", "r_to_mos", "std_normal_cdf", "terminate_early",
]
