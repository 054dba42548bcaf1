"""Bounded functions and sequences as serializable expression trees."""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError, SpecError, ToleranceError
from .functions import (
    ADDITIVE,
    MULTIPLICATIVE,
    AdditivePeriodic,
    Constant,
    Dilate,
    DomainTag,
    ExpComposed,
    FunctionSpec,
    LiftedSequence,
    LogPeriodicBlocks,
    LogSinusoid,
    Scale,
    Shift,
    Sinusoid,
    Sum,
)
from .sequences import (
    AffineCombo,
    ArithmeticIndicator,
    ExplicitThenPeriodic,
    ExponentBlocks,
    PeriodicWord,
    SequenceSpec,
    evaluate_seq,
)
from .serialize import dumps, from_json, load, loads, to_json
from .transforms import DiscretizedV1, discretize_V1, lift_V, transform_W

DEFAULT_TOL = 1e-12


def _check_spec(spec) -> FunctionSpec:
    if not isinstance(spec, FunctionSpec):
        raise SpecError(f"not a function spec: {spec!r}")
    return spec


def _check_points(spec: FunctionSpec, *arrays):
    lo = spec.domain.lower_end
    for arr in arrays:
        if not np.all(np.isfinite(arr)):
            raise DomainError("points must be finite")
        if np.any(arr < lo):
            raise DomainError(f"point below {lo} is outside the {spec.domain.value} domain")


def _check_tol(tol):
    if not (isinstance(tol, (int, float)) and math.isfinite(tol) and tol > 0):
        raise ToleranceError(f"tolerance must be a positive finite number, got {tol!r}")


def _scalar(out):
    return float(out) if np.ndim(out) == 0 else out


def evaluate(spec: FunctionSpec, x):
    """Pointwise value; ``x`` may be a scalar or an array."""
    _check_spec(spec)
    arr = np.asarray(x, dtype=float)
    _check_points(spec, arr)
    return _scalar(spec.evaluate(arr))


def _interval(spec, a, b, tol):
    _check_spec(spec)
    _check_tol(tol)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    _check_points(spec, a, b)
    if np.any(b < a):
        raise DomainError("integration bounds must satisfy a <= b")
    return a, b


def integrate(spec: FunctionSpec, a, b, tol: float = DEFAULT_TOL):
    """``int_a^b f``.  Every node integrates in closed form, so ``tol`` is met up to roundoff."""
    a, b = _interval(spec, a, b, tol)
    return _scalar(spec.integrate(a, b))


def integrate_log(spec: FunctionSpec, a, b, tol: float = DEFAULT_TOL):
    """``int_a^b f(t) dt / t`` on the multiplicative domain."""
    if isinstance(spec, FunctionSpec) and spec.domain is not MULTIPLICATIVE:
        raise DomainError("integrate_log needs a multiplicative-domain spec")
    a, b = _interval(spec, a, b, tol)
    return _scalar(spec.integrate_log(a, b))


def negate(spec):
    """``-f`` as a spec of the same family."""
    if isinstance(spec, FunctionSpec):
        return Scale(-1.0, spec)
    if isinstance(spec, SequenceSpec):
        return AffineCombo(-1.0, spec, 0.0)
    raise SpecError(f"cannot negate {spec!r}")


__all__ = [
    "ADDITIVE",
    "MULTIPLICATIVE",
    "AdditivePeriodic",
    "AffineCombo",
    "ArithmeticIndicator",
    "Constant",
    "Dilate",
    "DiscretizedV1",
    "DomainTag",
    "ExpComposed",
    "ExplicitThenPeriodic",
    "ExponentBlocks",
    "FunctionSpec",
    "LiftedSequence",
    "LogPeriodicBlocks",
    "LogSinusoid",
    "PeriodicWord",
    "Scale",
    "SequenceSpec",
    "Shift",
    "Sinusoid",
    "Sum",
    "discretize_V1",
    "dumps",
    "evaluate",
    "evaluate_seq",
    "from_json",
    "integrate",
    "integrate_log",
    "lift_V",
    "load",
    "loads",
    "negate",
    "to_json",
    "transform_W",
]
