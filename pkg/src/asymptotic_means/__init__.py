"""Asymptotic means and Pólya-type sublinear functionals of bounded functions and sequences."""

from . import fnspec, identities, means, sublinear
from .errors import (
    AsymptoticMeansError,
    DomainError,
    OverflowGuardError,
    ParseError,
    ScheduleError,
    SpecError,
    ToleranceError,
)
from .identities import IdentityReport, Settings, run_suite
from .means import Criterion, LimitEstimate, cesaro_mean, cesaro_mean_seq, exp_mean
from .sublinear import (
    SweepParams,
    SweepReport,
    functional_range,
    k_upper,
    lower,
    p_upper,
    p_upper_seq,
    q_upper,
    q_upper_seq,
)

__version__ = "0.1.0"

__all__ = [
    "AsymptoticMeansError",
    "Criterion",
    "DomainError",
    "IdentityReport",
    "LimitEstimate",
    "OverflowGuardError",
    "ParseError",
    "ScheduleError",
    "Settings",
    "SpecError",
    "SweepParams",
    "SweepReport",
    "ToleranceError",
    "cesaro_mean",
    "cesaro_mean_seq",
    "exp_mean",
    "fnspec",
    "functional_range",
    "identities",
    "k_upper",
    "lower",
    "means",
    "p_upper",
    "p_upper_seq",
    "q_upper",
    "q_upper_seq",
    "run_suite",
    "sublinear",
]
