"""QoE metrics for subjective rating studies.

MOS, SOS, quantiles, acceptability, the SOS hypothesis and its parameter,
and the E-model mapping between Transmission Rating, MOS and GoB/PoW/TME.
"""
from .emodel import (
    EModelPoint,
    ThresholdSet,
    curve_data,
    discretize_thresholds,
    emodel_table,
    estimate_gob_pow_tme,
    good_or_better,
    mos_to_r,
    poor_or_worse,
    r_to_mos,
    std_normal_cdf,
    terminate_early,
)
from .errors import (
    DomainError,
    NoInformationError,
    ParseError,
    QoEError,
    UnsupportedOperation,
    ValidationError,
)
from .estimators import (
    ConditionStats,
    EmpiricalPmf,
    acceptance_rate,
    empirical_pmf,
    mos,
    quantile,
    sos,
    standard_error,
    theta_acceptability,
)
from .sos import (
    LinearTransform,
    SosFit,
    fit_sos_parameter,
    max_sos,
    min_sos,
    normalize,
    sos_hypothesis,
    transform_rating,
    verify_fit_invariance,
)
from .types import (
    ACR_SCALE,
    BINARY_SCALE,
    ConditionDescriptor,
    Rating,
    RatingScale,
    StatDefinitionSet,
    StudyDataset,
    group_by_condition,
    validate_dataset,
)

__version__ = "0.1.0"
