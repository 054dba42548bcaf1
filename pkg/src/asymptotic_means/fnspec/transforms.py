"""The change-of-variable operators between the two pictures.

``W``   multiplicative -> additive,  (Wf)(x) = f(e^x)
``V``   sequence -> multiplicative,   (Vf)(x) = f(floor x)
``V1``  multiplicative -> sequence,   (V1 f)(n) = int_n^{n+1} f
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import SpecError
from .functions import (
    ADDITIVE,
    MULTIPLICATIVE,
    AdditivePeriodic,
    Constant,
    Dilate,
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
from .sequences import SequenceSpec, _as_int_array


def transform_W(spec: FunctionSpec) -> FunctionSpec:
    """Structural image of a multiplicative spec under ``x -> e^x``."""
    if not isinstance(spec, FunctionSpec):
        raise SpecError(f"not a function spec: {spec!r}")
    if spec.domain is not MULTIPLICATIVE:
        raise SpecError("transform_W expects a multiplicative-domain spec")
    return _w(spec)


def _w(spec: FunctionSpec) -> FunctionSpec:
    if isinstance(spec, Constant):
        return Constant(spec.c, ADDITIVE, spec.bound_)
    if isinstance(spec, LogPeriodicBlocks):
        lnb = math.log(spec.base)
        profile = tuple((i * lnb, 1.0 if on else 0.0) for i, on in enumerate(spec.pattern))
        return AdditivePeriodic(len(spec.pattern) * lnb, profile, spec.bound_)
    if isinstance(spec, LogSinusoid):
        return Sinusoid(spec.amplitude, math.log(spec.ratio), spec.phase, ADDITIVE, spec.bound_)
    if isinstance(spec, Dilate):
        return Shift(math.log(spec.r), _w(spec.inner))
    if isinstance(spec, Sum):
        return Sum(_w(spec.left), _w(spec.right))
    if isinstance(spec, Scale):
        return Scale(spec.k, _w(spec.inner))
    # nodes with no periodic additive counterpart keep their exact form
    return ExpComposed(spec)


def lift_V(seq: SequenceSpec) -> LiftedSequence:
    """Step function ``x -> seq(floor x)`` on ``[1, inf)``."""
    return LiftedSequence(seq)


class DiscretizedV1:
    """Sequence view ``n -> int_n^{n+1} f`` of a multiplicative spec, with value 0 at n = 0."""

    def __init__(self, spec: FunctionSpec):
        if not isinstance(spec, FunctionSpec) or spec.domain is not MULTIPLICATIVE:
            raise SpecError("discretize_V1 expects a multiplicative-domain spec")
        self.spec = spec

    @property
    def bound(self) -> float:
        return self.spec.bound

    def values(self, n):
        n = _as_int_array(n)
        if np.any(n < 0):
            raise SpecError("sequence index must be nonnegative")
        safe = np.maximum(n, 1).astype(float)
        return np.where(n >= 1, self.spec.integrate(safe, safe + 1.0), 0.0)

    def window_sum(self, lo, hi, weight: str = "count"):
        """``sum_{i=lo}^{hi-1}`` of the values; only the unit weight is supported."""
        if weight != "count":
            raise SpecError("discretized sequences only support unweighted window sums")
        lo = _as_int_array(lo).astype(float)
        hi = np.maximum(_as_int_array(hi).astype(float), lo)
        if np.any(lo < 1):
            raise SpecError("window sums start at index 1")
        return self.spec.integrate(lo, hi)

    def __call__(self, n):
        out = self.values(n)
        return float(out) if np.ndim(out) == 0 else out

    def __repr__(self):
        return f"DiscretizedV1({self.spec!r})"


def discretize_V1(spec: FunctionSpec) -> DiscretizedV1:
    return DiscretizedV1(spec)
