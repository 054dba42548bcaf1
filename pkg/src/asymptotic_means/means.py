"""Single-limit estimators: Cesàro mean M, exponential mean R, discrete mean M_d.

Each estimator samples the partial average on a fixed grid and reports the
band ``[lo, hi]`` it occupies over the tail of the grid.  Convergence is
declared from the band width alone; no extrapolation is attempted.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ScheduleError, SpecError
from .fnspec import ADDITIVE, MULTIPLICATIVE, FunctionSpec, SequenceSpec

DEFAULT_X_MIN = 16.0
DEFAULT_X_MAX = 4.0**12
DEFAULT_SAMPLES = 64
DEFAULT_BAND_TOL = 1e-2


@dataclass(frozen=True)
class Criterion:
    """Sample grid and band tolerance for one estimate."""

    x_min: float = DEFAULT_X_MIN
    x_max: float = DEFAULT_X_MAX
    n_samples: int = DEFAULT_SAMPLES
    band_tol: float = DEFAULT_BAND_TOL

    def __post_init__(self):
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max) and self.x_min < self.x_max):
            raise ScheduleError(f"need finite x_min < x_max, got {self.x_min}, {self.x_max}")
        if int(self.n_samples) != self.n_samples or self.n_samples < 2:
            raise ScheduleError("n_samples must be an integer >= 2")
        if not (math.isfinite(self.band_tol) and self.band_tol > 0):
            raise ScheduleError("band_tol must be positive")
        object.__setattr__(self, "x_min", float(self.x_min))
        object.__setattr__(self, "x_max", float(self.x_max))
        object.__setattr__(self, "n_samples", int(self.n_samples))
        object.__setattr__(self, "band_tol", float(self.band_tol))

    def additive(self) -> "Criterion":
        """The same grid seen through ``x -> ln x``, for the exponential mean."""
        return Criterion(math.log(self.x_min), math.log(self.x_max), self.n_samples, self.band_tol)


@dataclass(frozen=True)
class LimitEstimate:
    lo: float
    hi: float
    converged: bool
    tail_samples: list = field(default_factory=list)
    criterion: Criterion = field(default_factory=Criterion)

    @property
    def value(self) -> float:
        """Midpoint of the band; meaningful only when ``converged``."""
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def to_json(self) -> dict:
        return {
            "lo": self.lo,
            "hi": self.hi,
            "converged": self.converged,
            "samples": [[x, v] for x, v in self.tail_samples],
        }

    def describe(self) -> dict:
        out = self.to_json()
        out["criterion"] = asdict(self.criterion)
        return out


def _band(xs, vals, tail_start: float, crit: Criterion) -> LimitEstimate:
    vals = np.asarray(vals, dtype=float)
    tail = vals[xs >= tail_start]
    lo, hi = float(tail.min()), float(tail.max())
    samples = [(float(x), float(v)) for x, v in zip(xs, vals)]
    return LimitEstimate(lo, hi, hi - lo <= crit.band_tol, samples, crit)


def geometric_grid(crit: Criterion) -> np.ndarray:
    xs = np.geomspace(crit.x_min, crit.x_max, crit.n_samples)
    xs[0], xs[-1] = crit.x_min, crit.x_max
    return xs


def cesaro_mean(spec: FunctionSpec, criterion: Criterion | None = None) -> LimitEstimate:
    """Band of ``(1/x) int_1^x f`` over the geometric tail of the grid."""
    crit = criterion or Criterion()
    if not isinstance(spec, FunctionSpec) or spec.domain is not MULTIPLICATIVE:
        raise SpecError("cesaro_mean expects a multiplicative-domain function spec")
    if crit.x_min < 1:
        raise ScheduleError("cesaro_mean needs x_min >= 1")
    xs = geometric_grid(crit)
    vals = spec.integrate(np.ones_like(xs), xs) / xs
    return _band(xs, vals, math.sqrt(crit.x_min * crit.x_max), crit)


def exp_mean(spec: FunctionSpec, criterion: Criterion | None = None) -> LimitEstimate:
    """Band of ``(Sf)(x) = e^{-x} int_0^x f(t) e^t dt`` over the arithmetic tail of the grid.

    Without a criterion the grid is the image under ``ln`` of the default
    multiplicative grid.  ``S`` is advanced by the overflow-free recurrence
    ``S(x + h) = e^{-h} S(x) + int_0^h f(x + u) e^{u - h} du``.
    """
    crit = criterion or Criterion().additive()
    if not isinstance(spec, FunctionSpec) or spec.domain is not ADDITIVE:
        raise SpecError("exp_mean expects an additive-domain function spec")
    if crit.x_min < 0:
        raise ScheduleError("exp_mean needs x_min >= 0")
    xs = np.linspace(crit.x_min, crit.x_max, crit.n_samples)
    vals = np.empty_like(xs)
    s, prev = 0.0, 0.0
    for i, x in enumerate(xs):
        h = float(x - prev)
        if h > 0:
            s = math.exp(-h) * s + float(spec.integrate_exp(prev, h))
        vals[i] = s
        prev = float(x)
    return _band(xs, vals, 0.5 * (crit.x_min + crit.x_max), crit)


def cesaro_mean_seq(seq: SequenceSpec, N_max: int | None = None, criterion: Criterion | None = None) -> LimitEstimate:
    """Band of ``(1/n) sum_{i=1}^n f(i)`` along rounded geometric ``n`` up to ``N_max``."""
    crit = criterion or Criterion()
    if N_max is not None:
        crit = Criterion(crit.x_min, float(N_max), crit.n_samples, crit.band_tol)
    if not hasattr(seq, "window_sum"):
        raise SpecError("cesaro_mean_seq expects a sequence spec")
    if crit.x_max < 16:
        raise ScheduleError("cesaro_mean_seq needs N_max >= 16")
    ns = np.unique(np.rint(geometric_grid(crit)).astype(np.int64))
    ns = ns[ns >= 1]
    vals = seq.window_sum(np.ones_like(ns), ns + 1) / ns
    return _band(ns.astype(float), vals, math.sqrt(crit.x_min * crit.x_max), crit)
