"""Numerical checks of the identities linking means, sweeps and transforms.

Every check returns an :class:`IdentityReport` whose ``passed`` flag can be
recomputed from the stored ``lhs``, ``rhs`` and ``tolerance``.  Tolerances are
sums of the tolerances the constituent estimators claim.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Callable

import numpy as np
from scipy.special import digamma

from . import means, sublinear
from .errors import AsymptoticMeansError, ParseError, ScheduleError
from .fnspec import (
    ADDITIVE,
    MULTIPLICATIVE,
    Constant,
    FunctionSpec,
    LiftedSequence,
    PeriodicWord,
    SequenceSpec,
    discretize_V1,
    from_json,
    lift_V,
    loads,
    transform_W,
)
from .means import Criterion
from .sublinear import SweepParams

BOUND_SLACK = 1e-9
EXACT_TOL = 1e-9
LOGSUM_CONSTANT = math.pi**2 / 12

PASS, FAIL, SKIP, ERROR = "pass", "fail", "skip", "error"
THREADS_ENV = "ASYMPTOTIC_MEANS_THREADS"


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of one check.

    ``kind`` is ``"equality"`` (pass iff ``|lhs - rhs| <= tolerance``) or
    ``"bound"`` (pass iff ``lhs <= rhs`` up to a ``1e-9`` slack).
    """

    name: str
    lhs: float | None
    rhs: float | None
    tolerance: float
    passed: bool
    status: str = PASS
    kind: str = "equality"
    inputs: Any = None
    diagnostics: dict = field(default_factory=dict)
    index: int = 0

    def recompute(self) -> bool:
        if self.lhs is None or self.rhs is None:
            return False
        if self.kind == "bound":
            return self.lhs - self.rhs <= BOUND_SLACK
        return abs(self.lhs - self.rhs) <= self.tolerance

    @property
    def failed(self) -> bool:
        return self.status in (FAIL, ERROR)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "index": self.index,
            "status": self.status,
            "kind": self.kind,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "inputs": self.inputs,
            "diagnostics": self.diagnostics,
        }


def _report(name, lhs, rhs, tolerance, inputs, diagnostics=None, kind="equality") -> IdentityReport:
    lhs, rhs = float(lhs), float(rhs)
    probe = IdentityReport(name, lhs, rhs, float(tolerance), False, kind=kind)
    ok = probe.recompute()
    return replace(probe, passed=ok, status=PASS if ok else FAIL, inputs=inputs, diagnostics=diagnostics or {})


def SkipReport(name: str, inputs, reason: str, diagnostics=None) -> IdentityReport:
    """A vacuous check: the premise (an existing mean) does not hold."""
    diag = {"reason": reason, **(diagnostics or {})}
    return IdentityReport(name, None, None, 0.0, False, SKIP, "equality", inputs, diag)


def ErrorReport(name: str, inputs, exc: BaseException) -> IdentityReport:
    diag = {"error": type(exc).__name__, "message": str(exc)}
    return IdentityReport(name, None, None, 0.0, False, ERROR, "equality", inputs, diag)


@dataclass(frozen=True)
class Settings:
    """Estimator grids shared by all checks."""

    sweep: SweepParams = field(default_factory=lambda: SweepParams.default("P"))
    criterion: Criterion = field(default_factory=Criterion)
    exact_ns: tuple[int, ...] = tuple(range(1, 51))
    exact_thetas: tuple[float, ...] = (1.1, 1.5, 2.0, 4.0)
    v1v_max: int = 1000

    def params(self, kind: str) -> SweepParams:
        return self.sweep.with_kind(kind)

    @classmethod
    def from_json(cls, obj: dict) -> "Settings":
        """Settings from a flat dict of CLI-style keys; unknown keys are rejected."""
        known = {
            "x_min", "x_max", "theta_steps", "anchors", "stride_fraction",
            "mean_x_min", "mean_x_max", "n_samples", "band_tol", "v1v_max",
        }
        if not isinstance(obj, dict):
            raise ScheduleError("parameter file must hold a JSON object")
        extra = set(obj) - known
        if extra:
            raise ScheduleError(f"unknown parameter(s): {', '.join(sorted(extra))}")
        sweep = SweepParams.default(
            "P",
            x_max=obj.get("x_max"),
            x_min=obj.get("x_min"),
            theta_steps=obj.get("theta_steps", sublinear.DEFAULT_STEPS),
            anchors=obj.get("anchors", sublinear.DEFAULT_ANCHORS),
            stride_fraction=obj.get("stride_fraction", sublinear.DEFAULT_STRIDE_FRACTION),
        )
        crit = Criterion(
            obj.get("mean_x_min", means.DEFAULT_X_MIN),
            obj.get("mean_x_max", means.DEFAULT_X_MAX),
            obj.get("n_samples", means.DEFAULT_SAMPLES),
            obj.get("band_tol", means.DEFAULT_BAND_TOL),
        )
        return cls(sweep, crit, v1v_max=int(obj.get("v1v_max", 1000)))


DEFAULT_SETTINGS = Settings()


def _inputs(obj):
    return obj.to_json() if hasattr(obj, "to_json") else repr(obj)


def _multiplicative(spec) -> FunctionSpec:
    if not isinstance(spec, FunctionSpec) or spec.domain is not MULTIPLICATIVE:
        raise ScheduleError("check needs a multiplicative-domain function spec")
    return spec


def _equal_upper(name, lhs_rep, rhs_rep, spec) -> IdentityReport:
    diag = {"lhs_sweep": lhs_rep.to_json(), "rhs_sweep": rhs_rep.to_json()}
    return _report(name, lhs_rep.value, rhs_rep.value, lhs_rep.tolerance + rhs_rep.tolerance, _inputs(spec), diag)


def check_P_equals_KW(spec: FunctionSpec, settings: Settings = DEFAULT_SETTINGS) -> IdentityReport:
    """Upper Pólya functional of f against the additive functional of ``W f``."""
    spec = _multiplicative(spec)
    lhs = sublinear.p_upper(spec, settings.params("P"))
    rhs = sublinear.k_upper(transform_W(spec), settings.params("K"))
    return _equal_upper("P_equals_KW", lhs, rhs, spec)


def check_Q_equals_KW(spec: FunctionSpec, settings: Settings = DEFAULT_SETTINGS) -> IdentityReport:
    spec = _multiplicative(spec)
    lhs = sublinear.q_upper(spec, settings.params("Q"))
    rhs = sublinear.k_upper(transform_W(spec), settings.params("K"))
    return _equal_upper("Q_equals_KW", lhs, rhs, spec)


def check_P_equals_Q(spec: FunctionSpec, settings: Settings = DEFAULT_SETTINGS) -> IdentityReport:
    spec = _multiplicative(spec)
    lhs = sublinear.p_upper(spec, settings.params("P"))
    rhs = sublinear.q_upper(spec, settings.params("Q"))
    return _equal_upper("P_equals_Q", lhs, rhs, spec)


def check_Q_d_equals_P_d(seq: SequenceSpec, settings: Settings = DEFAULT_SETTINGS) -> IdentityReport:
    lhs = sublinear.p_upper_seq(seq, settings.params("Pd"))
    rhs = sublinear.q_upper_seq(seq, settings.params("Qd"))
    return _equal_upper("Qd_equals_Pd", lhs, rhs, seq)


def analogues(obj) -> dict:
    """Inputs for each variant that describe the same object.

    A sequence ``f`` is paired with ``V f`` (P, Q) and ``W V f`` (K).  A
    multiplicative spec is paired with ``W f`` and, when it is a lifted
    sequence or a constant, with the matching sequence.  An additive spec only
    has K.
    """
    if isinstance(obj, SequenceSpec):
        lifted = lift_V(obj)
        return {"K": transform_W(lifted), "P": lifted, "Q": lifted, "Pd": obj, "Qd": obj}
    if isinstance(obj, FunctionSpec) and obj.domain is ADDITIVE:
        return {"K": obj}
    out = {"K": transform_W(obj), "P": obj, "Q": obj}
    if isinstance(obj, LiftedSequence):
        out["Pd"] = out["Qd"] = obj.seq
    elif isinstance(obj, Constant):
        out["Pd"] = out["Qd"] = PeriodicWord((obj.c,), obj.bound_)
    return out


def _mean_for(variant: str, obj, crit: Criterion) -> means.LimitEstimate:
    if variant == "K":
        return means.exp_mean(obj, crit.additive())
    if variant in ("P", "Q"):
        return means.cesaro_mean(obj, crit)
    return means.cesaro_mean_seq(obj, criterion=crit)


def check_mean_collapse(obj, variant: str, settings: Settings = DEFAULT_SETTINGS) -> IdentityReport:
    """When the matching mean converges to ``alpha``, both range endpoints lie near ``alpha``.

    ``lhs`` is the endpoint farther from ``alpha`` and ``rhs`` is ``alpha``.
    """
    name = f"mean_collapse_{variant}"
    est = _mean_for(variant, obj, settings.criterion)
    diag = {"mean": est.to_json()}
    if not est.converged:
        return SkipReport(name, _inputs(obj), "mean does not converge", diag)
    alpha = est.value
    lo_rep, hi_rep = sublinear.functional_range_reports(obj, variant, settings.params(variant))
    far = max((lo_rep.value, hi_rep.value), key=lambda v: abs(v - alpha))
    diag.update(lower=lo_rep.value, upper=hi_rep.value, alpha=alpha)
    tol = settings.criterion.band_tol + hi_rep.tolerance
    return _report(name, far, alpha, tol, _inputs(obj), diag)


def _window_ends(ns, thetas):
    n = np.repeat(np.asarray(ns, dtype=np.int64), len(thetas))
    th = np.tile(np.asarray(thetas, dtype=float), len(ns))
    return n, th, np.floor(th * n).astype(np.int64)


def check_discrete_continuous(seq: SequenceSpec, settings: Settings = DEFAULT_SETTINGS) -> list[IdentityReport]:
    """Exact window identity for ``V f`` on a finite grid, then P_d against P of ``V f``."""
    lifted = lift_V(seq)
    n, th, end = _window_ends(settings.exact_ns, settings.exact_thetas)
    cont = lifted.integrate(n.astype(float), end + 1.0)
    disc = np.array([math.fsum(seq.values(np.arange(a, b + 1))) for a, b in zip(n, end)])
    err = np.abs(cont - disc)
    worst = int(np.argmax(err))
    exact = _report(
        "discrete_continuous_exact",
        float(err[worst]),
        0.0,
        EXACT_TOL,
        _inputs(seq),
        {"worst": {"n": int(n[worst]), "theta": float(th[worst]), "integral": float(cont[worst]), "sum": float(disc[worst])},
         "pairs": int(n.size)},
    )
    lhs = sublinear.p_upper_seq(seq, settings.params("Pd"))
    rhs = sublinear.p_upper(lifted, settings.params("P"))
    return [exact, _equal_upper("discrete_continuous_asymptotic", lhs, rhs, seq)]


def _logsum_terms(seq: SequenceSpec, n, theta):
    n = np.atleast_1d(np.asarray(n, dtype=np.int64))
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    end = np.floor(theta * n).astype(np.int64)
    integral = lift_V(seq).integrate_log(n.astype(float), end + 1.0)
    sums = np.array([math.fsum(seq.values(np.arange(a, b + 1)) / np.arange(a, b + 1)) for a, b in zip(n, end)])
    return np.abs(integral - sums), integral, sums


def _sharper(seq, n):
    # sum_{i >= n} (1/i - log(1 + 1/i)) = log n - digamma(n)
    return seq.bound * (np.log(np.asarray(n, dtype=float)) - digamma(np.asarray(n, dtype=float)))


def check_logsum_bound(seq: SequenceSpec, n: int, theta: float) -> IdentityReport:
    """``|int_n^{floor(theta n)+1} (V f)(t) dt/t - sum f(i)/i| <= |f|_inf pi^2/12``."""
    if n < 1 or not theta > 1:
        raise ScheduleError("logsum bound needs n >= 1 and theta > 1")
    gap, integral, sums = _logsum_terms(seq, n, theta)
    sharp = float(_sharper(seq, n))
    diag = {"integral": float(integral[0]), "sum": float(sums[0]), "sharper_rhs": sharp,
            "sharper_ok": bool(gap[0] <= sharp + BOUND_SLACK)}
    return _report("logsum_bound", gap[0], seq.bound * LOGSUM_CONSTANT, 0.0, _inputs(seq), diag, kind="bound")


def check_logsum_bound_grid(seq: SequenceSpec, settings: Settings = DEFAULT_SETTINGS) -> IdentityReport:
    """The log-sum bound over every ``(n, theta)`` in the settings grid; ``lhs`` is the worst gap."""
    n, th, _ = _window_ends(settings.exact_ns, settings.exact_thetas)
    gap, _, _ = _logsum_terms(seq, n, th)
    sharp = _sharper(seq, n)
    worst = int(np.argmax(gap))
    diag = {"worst": {"n": int(n[worst]), "theta": float(th[worst])}, "pairs": int(n.size),
            "sharper_ok": bool(np.all(gap <= sharp + BOUND_SLACK))}
    return _report("logsum_bound_grid", gap[worst], seq.bound * LOGSUM_CONSTANT, 0.0, _inputs(seq), diag, kind="bound")


def check_V1V_identity(seq: SequenceSpec, settings: Settings = DEFAULT_SETTINGS) -> IdentityReport:
    """``(V1 V f)(n) = f(n)`` for ``1 <= n <= v1v_max``; exact, so the tolerance is zero."""
    n = np.arange(1, settings.v1v_max + 1)
    err = np.abs(discretize_V1(lift_V(seq)).values(n) - seq.values(n))
    return _report("V1V_identity", float(err.max()), 0.0, 0.0, _inputs(seq), {"n_max": int(n[-1])})


def _collapse_checks(obj):
    return [(f"mean_collapse_{v}", lambda s, o=o, v=v: check_mean_collapse(o, v, s)) for v, o in analogues(obj).items()]


def checks_for(obj) -> list[tuple[str, Callable[[Settings], Any]]]:
    """``(name, thunk)`` pairs for every check applicable to ``obj``."""
    if isinstance(obj, SequenceSpec):
        return [
            ("V1V_identity", lambda s: check_V1V_identity(obj, s)),
            ("discrete_continuous", lambda s: check_discrete_continuous(obj, s)),
            ("logsum_bound_grid", lambda s: check_logsum_bound_grid(obj, s)),
            ("Qd_equals_Pd", lambda s: check_Q_d_equals_P_d(obj, s)),
        ] + _collapse_checks(obj)
    if isinstance(obj, FunctionSpec) and obj.domain is MULTIPLICATIVE:
        return [
            ("P_equals_KW", lambda s: check_P_equals_KW(obj, s)),
            ("Q_equals_KW", lambda s: check_Q_equals_KW(obj, s)),
            ("P_equals_Q", lambda s: check_P_equals_Q(obj, s)),
        ] + _collapse_checks(obj)
    return _collapse_checks(obj)


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "0")
    try:
        n = int(raw)
    except ValueError:
        raise ScheduleError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if n < 0:
        raise ScheduleError(f"{THREADS_ENV} must be >= 0")
    return n or (os.cpu_count() or 1)


def _parse_item(item):
    if isinstance(item, (FunctionSpec, SequenceSpec)):
        return item
    if isinstance(item, str):
        return loads(item)
    if isinstance(item, dict):
        return from_json(item)
    raise ParseError(f"corpus item of type {type(item).__name__} is not a spec")


def run_suite(corpus, settings: Settings = DEFAULT_SETTINGS, threads: int | None = None) -> list[IdentityReport]:
    """Run every applicable check on every corpus item.

    Items may be spec objects, decoded JSON objects or JSON text.  Failures to
    parse or to evaluate are captured as ``error`` reports.  Output is sorted
    by (check name, item index) and does not depend on the thread count.
    """
    tasks = []
    reports: list[IdentityReport] = []
    for idx, item in enumerate(corpus):
        try:
            obj = _parse_item(item)
        except AsymptoticMeansError as exc:
            reports.append(replace(ErrorReport("parse", item if isinstance(item, str) else repr(item), exc), index=idx))
            continue
        for name, thunk in checks_for(obj):
            tasks.append((name, idx, obj, thunk))

    def run(task):
        name, idx, obj, thunk = task
        try:
            out = thunk(settings)
        except (AsymptoticMeansError, ValueError, OverflowError, ArithmeticError) as exc:
            out = ErrorReport(name, _inputs(obj), exc)
        out = out if isinstance(out, list) else [out]
        return [replace(r, index=idx) for r in out]

    workers = threads if threads is not None else thread_count()
    if workers <= 1:
        results = [run(t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, tasks))
    for group in results:
        reports.extend(group)
    reports.sort(key=lambda r: (r.name, r.index))
    return reports


def summarize(reports) -> dict:
    counts = {PASS: 0, FAIL: 0, SKIP: 0, ERROR: 0}
    for r in reports:
        counts[r.status] += 1
    counts["total"] = len(reports)
    return counts


def suite_json(reports) -> str:
    return json.dumps({"summary": summarize(reports), "reports": [r.to_json() for r in reports]}, indent=2)
