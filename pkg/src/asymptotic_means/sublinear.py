"""Double-limit window estimators for the upper functionals K, P, Q, P_d, Q_d.

For each window parameter theta the inner ``limsup`` is approximated by the
maximum window average over a lattice of anchors covering the tail of the
sample range.  Anchors live in a working coordinate where windows have fixed
length: ``x`` itself for K and ``u = ln x`` for the multiplicative and discrete
variants.  Lattices for successive thetas are dyadic refinements of one
another, and anchors at spec breakpoints are added (and carried to later
thetas), which makes the max exact for step functions.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ScheduleError, SpecError
from .fnspec import ADDITIVE, MULTIPLICATIVE, FunctionSpec, SequenceSpec, negate

KINDS = ("K", "P", "Q", "Pd", "Qd")
DISCRETE_KINDS = ("Pd", "Qd")

DEFAULT_STEPS = 10
DEFAULT_X_MIN = 1e5
DEFAULT_X_MAX = 1e7
DEFAULT_ANCHORS = 48
DEFAULT_STRIDE_FRACTION = 0.25
CONTINUOUS_TOL = 2.5e-3
DISCRETE_TOL = 5e-3
MONOTONE_SLACK = 1e-9

_MAX_ANCHORS = 4_000_000
_MAX_EXTRAS = 50_000


def _check_kind(kind: str) -> str:
    if kind not in KINDS:
        raise SpecError(f"unknown functional {kind!r}; expected one of {', '.join(KINDS)}")
    return kind


def theta_schedule(kind: str, steps: int = DEFAULT_STEPS) -> tuple[float, ...]:
    """``2^-j`` (K) or ``1 + 2^-j`` (the rest) for ``j = 2..steps``."""
    _check_kind(kind)
    if steps < 5:
        raise ScheduleError("theta schedule needs steps >= 5 (at least four entries)")
    offset = 0.0 if kind == "K" else 1.0
    return tuple(offset + 2.0**-j for j in range(2, steps + 1))


@dataclass(frozen=True)
class SweepParams:
    """Window schedule and anchor grid for one sweep.

    ``x_min``/``x_max`` are in the native coordinate of the input: additive
    abscissas for K, points of ``[1, inf)`` for P/Q, integers for P_d/Q_d.
    The tail examined is the upper half of ``[x_min, x_max]`` (arithmetic for
    K, geometric otherwise).  ``window_tol`` is the accuracy claimed for the
    reported value and is what identity checks add up.
    """

    kind: str
    theta_schedule: tuple[float, ...]
    x_min: float
    x_max: float
    anchors_per_theta: int = DEFAULT_ANCHORS
    stride_fraction: float = DEFAULT_STRIDE_FRACTION
    window_tol: float = CONTINUOUS_TOL

    def __post_init__(self):
        _check_kind(self.kind)
        sched = tuple(float(t) for t in self.theta_schedule)
        object.__setattr__(self, "theta_schedule", sched)
        if len(sched) < 4:
            raise ScheduleError("theta_schedule needs at least four entries")
        if any(b >= a for a, b in zip(sched, sched[1:])):
            raise ScheduleError("theta_schedule must decrease strictly toward its limit")
        if self.kind == "K":
            if not all(0 < t <= 1 for t in sched):
                raise ScheduleError("K windows need theta in (0, 1]")
        elif not all(1 < t <= 2 for t in sched):
            raise ScheduleError(f"{self.kind} windows need theta in (1, 2]")
        lo = 0.0 if self.kind == "K" else (2.0 if self.kind in DISCRETE_KINDS else 1.0)
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max) and lo <= self.x_min < self.x_max):
            raise ScheduleError(f"need {lo} <= x_min < x_max, got {self.x_min}, {self.x_max}")
        if int(self.anchors_per_theta) != self.anchors_per_theta or self.anchors_per_theta < 2:
            raise ScheduleError("anchors_per_theta must be an integer >= 2")
        if not 0 < self.stride_fraction <= 0.5:
            raise ScheduleError("stride_fraction must lie in (0, 1/2]")
        if not (math.isfinite(self.window_tol) and self.window_tol > 0):
            raise ScheduleError("window_tol must be positive")
        object.__setattr__(self, "x_min", float(self.x_min))
        object.__setattr__(self, "x_max", float(self.x_max))
        object.__setattr__(self, "anchors_per_theta", int(self.anchors_per_theta))
        object.__setattr__(self, "stride_fraction", float(self.stride_fraction))
        object.__setattr__(self, "window_tol", float(self.window_tol))

    @classmethod
    def default(
        cls,
        kind: str,
        *,
        x_max: float | None = None,
        x_min: float | None = None,
        theta_steps: int = DEFAULT_STEPS,
        anchors: int = DEFAULT_ANCHORS,
        stride_fraction: float = DEFAULT_STRIDE_FRACTION,
        window_tol: float | None = None,
    ) -> "SweepParams":
        """Defaults for ``kind``; for K the range is the log image of ``[1e5, 1e7]``."""
        _check_kind(kind)
        if kind == "K":
            hi = math.log(DEFAULT_X_MAX) if x_max is None else x_max
            lo = hi - math.log(DEFAULT_X_MAX / DEFAULT_X_MIN) if x_min is None else x_min
        else:
            hi = DEFAULT_X_MAX if x_max is None else x_max
            lo = hi * DEFAULT_X_MIN / DEFAULT_X_MAX if x_min is None else x_min
        if window_tol is None:
            window_tol = DISCRETE_TOL if kind in DISCRETE_KINDS else CONTINUOUS_TOL
        return cls(kind, theta_schedule(kind, theta_steps), lo, hi, anchors, stride_fraction, window_tol)

    def with_kind(self, kind: str) -> "SweepParams":
        """Same grid for another variant; K is reached through the ``ln`` image of the range."""
        _check_kind(kind)
        if kind == self.kind:
            return self
        sched, lo, hi = self.theta_schedule, self.x_min, self.x_max
        if (kind == "K") != (self.kind == "K"):
            if kind == "K":
                sched = tuple(t - 1.0 for t in sched)
                lo, hi = math.log(lo), math.log(hi)
            else:
                sched = tuple(t + 1.0 for t in sched)
                lo, hi = math.exp(lo), math.exp(hi)
        if kind in DISCRETE_KINDS:
            lo = max(lo, 2.0)
        tol = self.window_tol
        if (kind in DISCRETE_KINDS) != (self.kind in DISCRETE_KINDS):
            tol = DISCRETE_TOL if kind in DISCRETE_KINDS else CONTINUOUS_TOL
        return SweepParams(kind, sched, lo, hi, self.anchors_per_theta, self.stride_fraction, tol)

    def to_json(self) -> dict:
        out = asdict(self)
        out["theta_schedule"] = list(self.theta_schedule)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "SweepParams":
        try:
            return cls(**{**obj, "theta_schedule": tuple(obj["theta_schedule"])})
        except (TypeError, KeyError) as exc:
            raise ScheduleError(f"malformed sweep parameters: {exc}") from None


@dataclass(frozen=True)
class SweepReport:
    kind: str
    per_theta: list
    value: float
    monotone_ok: bool
    params: SweepParams
    direction: str = "upper"

    @property
    def tolerance(self) -> float:
        return self.params.window_tol

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "direction": self.direction,
            "value": self.value,
            "monotone_ok": self.monotone_ok,
            "per_theta": [{"theta": t, "estimate": e, "anchor": a} for t, e, a in self.per_theta],
            "params": self.params.to_json(),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["theta", "estimate", "anchor"])
        for row in self.per_theta:
            writer.writerow([repr(v) for v in row])
        return buf.getvalue()


def _is_monotone(estimates, increasing: bool = True) -> bool:
    est = np.asarray(estimates)
    steps = np.diff(est) if increasing else -np.diff(est)
    return bool(np.all(steps >= -MONOTONE_SLACK))


class _Lattice:
    """Nested dyadic anchor lattices over ``[lo, hi]`` in the working coordinate."""

    def __init__(self, lo: float, hi: float, widths, params: SweepParams):
        self.lo, self.hi = lo, hi
        length = hi - lo - widths[0]
        if length <= 0:
            raise ScheduleError("sample range is shorter than the widest window")
        base = params.stride_fraction * widths[0]
        while base > length / (params.anchors_per_theta - 1):
            base /= 2.0
        self.base = base
        self.sf = params.stride_fraction

    def anchors(self, width: float) -> np.ndarray:
        stride = self.base
        while stride > self.sf * width:
            stride /= 2.0
        count = int(math.floor((self.hi - width - self.lo) / stride)) + 1
        if count > _MAX_ANCHORS:
            raise ScheduleError(f"theta too close to its limit: {count} anchors needed")
        return self.lo + np.arange(count) * stride


def _tail(params: SweepParams) -> tuple[float, float]:
    """Tail of the range in the working coordinate."""
    if params.kind == "K":
        return 0.5 * (params.x_min + params.x_max), params.x_max
    lo, hi = math.log(params.x_min), math.log(params.x_max)
    return 0.5 * (lo + hi), hi


def _width(kind: str, theta: float) -> float:
    return theta if kind == "K" else math.log(theta)


def _continuous_sweep(spec: FunctionSpec, params: SweepParams) -> list:
    kind = params.kind
    lo, hi = _tail(params)
    widths = [_width(kind, t) for t in params.theta_schedule]
    lattice = _Lattice(lo, hi, widths, params)
    if kind == "K":
        bps = spec.breakpoints(lo, hi, _MAX_EXTRAS)
    else:
        bps = np.log(spec.breakpoints(math.exp(lo), math.exp(hi), _MAX_EXTRAS))
    rows = []
    # anchors of the previous theta, and its best anchor, are re-used together
    # with the start of the second short window covering each long window
    carried = np.empty(0)
    w_prev = widths[0]
    for theta, w in zip(params.theta_schedule, widths):
        shift = w_prev - w
        extras = np.concatenate([bps, bps - w, carried, carried + shift])
        extras = np.unique(extras[(extras >= lo) & (extras <= hi - w)])
        if extras.size > _MAX_EXTRAS:
            extras = np.unique(np.concatenate([bps, bps - w]))
            extras = extras[(extras >= lo) & (extras <= hi - w)]
        u = np.concatenate([lattice.anchors(w), extras])
        if kind == "K":
            avg = spec.integrate(u, u + theta) / theta
            where = u
        else:
            x = np.exp(u)
            if kind == "P":
                avg = spec.integrate(x, theta * x) / ((theta - 1.0) * x)
            else:
                avg = spec.integrate_log(x, theta * x) / math.log(theta)
            where = x
        i = int(np.argmax(avg))
        est = float(np.clip(avg[i], -spec.bound, spec.bound))
        rows.append((theta, est, float(where[i])))
        carried = np.append(extras, u[i])
        w_prev = w
    return rows


def _discrete_sweep(seq, params: SweepParams) -> list:
    kind = params.kind
    lo, hi = _tail(params)
    widths = [_width(kind, t) for t in params.theta_schedule]
    lattice = _Lattice(lo, hi, widths, params)
    n_lo, n_hi = math.ceil(math.exp(lo)), math.floor(math.exp(hi))
    bps = np.asarray(seq.breakpoints(n_lo, n_hi + 1, _MAX_EXTRAS) if hasattr(seq, "breakpoints") else [])
    rows = []
    for theta, w in zip(params.theta_schedule, widths):
        grid = np.rint(np.exp(lattice.anchors(w)))
        extras = np.concatenate([bps, bps - 1, np.ceil(bps / theta) - 1, np.ceil(bps / theta)])
        n = np.unique(np.concatenate([grid, extras]))
        end = np.floor(theta * n)
        n = n[(n >= n_lo) & (end <= n_hi)]
        end = np.floor(theta * n)
        keep = end >= n + 1
        if not np.any(keep):
            raise ScheduleError(f"every window is empty at theta={theta}; raise n_max or coarsen the schedule")
        n, end = n[keep].astype(np.int64), end[keep].astype(np.int64)
        if kind == "Pd":
            avg = seq.window_sum(n, end + 1) / ((theta - 1.0) * n)
        else:
            avg = seq.window_sum(n, end + 1, "harmonic") / math.log(theta)
        i = int(np.argmax(avg))
        est = float(np.clip(avg[i], -seq.bound, seq.bound))
        rows.append((theta, est, float(n[i])))
    return rows


def _report(kind, rows, params, direction="upper") -> SweepReport:
    estimates = [e for _, e, _ in rows]
    return SweepReport(kind, rows, estimates[-1], _is_monotone(estimates), params, direction)


def _params(kind: str, params: SweepParams | None) -> SweepParams:
    if params is None:
        return SweepParams.default(kind)
    return params.with_kind(kind)


def _function(spec, domain, kind):
    if not isinstance(spec, FunctionSpec):
        raise SpecError(f"{kind} expects a function spec")
    if spec.domain is not domain:
        raise SpecError(f"{kind} expects a {domain.value}-domain spec")
    return spec


def _sequence(seq, kind):
    if not isinstance(seq, SequenceSpec) and not hasattr(seq, "window_sum"):
        raise SpecError(f"{kind} expects a sequence spec")
    return seq


def k_upper(spec: FunctionSpec, params: SweepParams | None = None) -> SweepReport:
    """``lim_{theta->0+} limsup_x (1/theta) int_x^{x+theta} f``."""
    p = _params("K", params)
    return _report("K", _continuous_sweep(_function(spec, ADDITIVE, "K"), p), p)


def p_upper(spec: FunctionSpec, params: SweepParams | None = None) -> SweepReport:
    """``lim_{theta->1+} limsup_x (1/((theta-1)x)) int_x^{theta x} f``."""
    p = _params("P", params)
    return _report("P", _continuous_sweep(_function(spec, MULTIPLICATIVE, "P"), p), p)


def q_upper(spec: FunctionSpec, params: SweepParams | None = None) -> SweepReport:
    """``lim_{theta->1+} limsup_x (1/ln theta) int_x^{theta x} f(t) dt/t``."""
    p = _params("Q", params)
    return _report("Q", _continuous_sweep(_function(spec, MULTIPLICATIVE, "Q"), p), p)


def p_upper_seq(seq: SequenceSpec, params: SweepParams | None = None) -> SweepReport:
    """Window averages ``sum_{i=n}^{floor(theta n)} f(i) / ((theta-1) n)``."""
    p = _params("Pd", params)
    return _report("Pd", _discrete_sweep(_sequence(seq, "Pd"), p), p)


def q_upper_seq(seq: SequenceSpec, params: SweepParams | None = None) -> SweepReport:
    """Window averages ``sum_{i=n}^{floor(theta n)} f(i)/i / ln theta``."""
    p = _params("Qd", params)
    return _report("Qd", _discrete_sweep(_sequence(seq, "Qd"), p), p)


UPPER = {"K": k_upper, "P": p_upper, "Q": q_upper, "Pd": p_upper_seq, "Qd": q_upper_seq}


def upper(kind: str, obj, params: SweepParams | None = None) -> SweepReport:
    return UPPER[_check_kind(kind)](obj, params)


def lower(kind: str, obj, params: SweepParams | None = None) -> SweepReport:
    """``inf`` counterpart: ``-upper(-f)``, with per-theta entries negated."""
    rep = upper(kind, negate(obj), params)
    # adding 0.0 turns -0.0 into 0.0
    rows = [(t, 0.0 - e, a) for t, e, a in rep.per_theta]
    estimates = [e for _, e, _ in rows]
    return SweepReport(kind, rows, 0.0 - rep.value, _is_monotone(estimates, increasing=False), rep.params, "lower")


def functional_range(obj, kind: str, params: SweepParams | None = None) -> tuple[float, float]:
    """``(lower, upper)`` values of the functional on ``obj``."""
    return lower(kind, obj, params).value, upper(kind, obj, params).value


def functional_range_reports(obj, kind: str, params: SweepParams | None = None) -> tuple[SweepReport, SweepReport]:
    return lower(kind, obj, params), upper(kind, obj, params)
