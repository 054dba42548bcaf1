"""Closed expression-tree DSL for bounded functions on [0, inf) and [1, inf).

Each node knows how to evaluate itself and how to integrate itself in closed
form, so window integrals are exact up to roundoff for step-type nodes and use
antiderivatives for the sinusoidal ones.  All methods are vectorized over
numpy arrays; argument validation lives in the public wrappers of
:mod:`asymptotic_means.fnspec`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import ClassVar

import numpy as np
from scipy.special import sici

from ..errors import OverflowGuardError, SpecError, ToleranceError
from .sequences import SequenceSpec, _check_pattern, _leaf_bound

# exp() of anything above this overflows double precision
EXP_LIMIT = 700.0
# weights e^{t-E} below e^{-40} are dropped from exponentially weighted integrals
_EXP_HORIZON = 40.0
_MAX_PIECES = 2_000_000


class DomainTag(str, enum.Enum):
    ADDITIVE = "additive"
    MULTIPLICATIVE = "multiplicative"

    @property
    def lower_end(self) -> float:
        return 0.0 if self is DomainTag.ADDITIVE else 1.0


ADDITIVE = DomainTag.ADDITIVE
MULTIPLICATIVE = DomainTag.MULTIPLICATIVE


def _domain(value) -> DomainTag:
    try:
        return DomainTag(value)
    except ValueError:
        raise SpecError(f"unknown domain {value!r}") from None


def _finite(*vals) -> bool:
    return all(isinstance(v, (int, float, np.integer, np.floating)) and math.isfinite(v) for v in vals)


class FunctionSpec:
    """Base class of all function nodes."""

    kind: ClassVar[str] = ""

    @property
    def domain(self) -> DomainTag:
        raise NotImplementedError

    @property
    def bound(self) -> float:
        raise NotImplementedError

    def evaluate(self, x):
        raise NotImplementedError

    def integrate(self, a, b):
        """``int_a^b f(t) dt``."""
        raise NotImplementedError

    def integrate_log(self, a, b):
        """``int_a^b f(t) dt / t`` (multiplicative domain)."""
        raise SpecError(f"{self.kind} has no log-weighted integral on the {self.domain.value} domain")

    def integrate_exp(self, x, h: float):
        """``int_0^h f(x + u) e^{u - h} du`` (additive domain)."""
        raise SpecError(f"{self.kind} has no exponentially weighted integral on the {self.domain.value} domain")

    def breakpoints(self, a: float, b: float, limit: int = 4096):
        """Jump locations strictly inside ``(a, b)``.

        Returns an empty array for smooth nodes and for nodes whose jumps are
        denser than ``limit`` on the interval.
        """
        return np.empty(0)

    def to_json(self) -> dict:
        raise NotImplementedError


def _union(parts, limit):
    parts = [p for p in parts if p.size]
    if not parts:
        return np.empty(0)
    pts = np.unique(np.concatenate(parts))
    return pts if pts.size <= limit else np.empty(0)


@dataclass(frozen=True)
class Constant(FunctionSpec):
    c: float
    domain_: DomainTag = MULTIPLICATIVE
    bound_: float | None = None
    kind: ClassVar[str] = "Constant"

    def __post_init__(self):
        if not _finite(self.c):
            raise SpecError("Constant value must be finite")
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "domain_", _domain(self.domain_))
        object.__setattr__(self, "bound_", _leaf_bound(self.bound_, abs(self.c)))

    @property
    def domain(self):
        return self.domain_

    @property
    def bound(self):
        return self.bound_

    def evaluate(self, x):
        return np.full(np.shape(x), self.c)

    def integrate(self, a, b):
        return self.c * (np.asarray(b, dtype=float) - a)

    def integrate_log(self, a, b):
        if self.domain is not MULTIPLICATIVE:
            return super().integrate_log(a, b)
        return self.c * np.log(np.asarray(b, dtype=float) / a)

    def integrate_exp(self, x, h):
        if self.domain is not ADDITIVE:
            return super().integrate_exp(x, h)
        return np.full(np.shape(x), -self.c * math.expm1(-h))

    def to_json(self):
        return {"kind": self.kind, "c": self.c, "domain": self.domain.value, "bound": self.bound_}


@dataclass(frozen=True)
class AdditivePeriodic(FunctionSpec):
    """``f(x) = profile(x mod period)`` for a right-continuous step profile."""

    period: float
    profile: tuple[tuple[float, float], ...]
    bound_: float | None = None
    kind: ClassVar[str] = "AdditivePeriodic"

    def __post_init__(self):
        if not _finite(self.period) or self.period <= 0:
            raise SpecError(f"AdditivePeriodic period must be positive, got {self.period!r}")
        try:
            prof = tuple((float(bp), float(v)) for bp, v in self.profile)
        except (TypeError, ValueError):
            raise SpecError("profile must be a list of (breakpoint, value) pairs") from None
        bps = [bp for bp, _ in prof]
        if not prof or bps[0] != 0.0:
            raise SpecError("profile must start at breakpoint 0")
        if any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])) or bps[-1] >= self.period:
            raise SpecError("profile breakpoints must increase strictly inside [0, period)")
        if not all(math.isfinite(v) for _, v in prof):
            raise SpecError("profile values must be finite")
        object.__setattr__(self, "period", float(self.period))
        object.__setattr__(self, "profile", prof)
        object.__setattr__(self, "bound_", _leaf_bound(self.bound_, max(abs(v) for _, v in prof)))
        bp_arr = np.array(bps)
        vals = np.array([v for _, v in prof])
        lengths = np.diff(np.append(bp_arr, self.period))
        object.__setattr__(self, "_bps", bp_arr)
        object.__setattr__(self, "_vals", vals)
        object.__setattr__(self, "_cum", np.concatenate([[0.0], np.cumsum(vals * lengths)]))

    @property
    def domain(self):
        return ADDITIVE

    @property
    def bound(self):
        return self.bound_

    def _split(self, x):
        x = np.asarray(x, dtype=float)
        k = np.floor(x / self.period)
        r = x - k * self.period
        k = np.where(r >= self.period, k + 1, k)
        k = np.where(r < 0, k - 1, k)
        r = np.clip(x - k * self.period, 0.0, np.nextafter(self.period, 0))
        return k, r

    def _partial(self, r):
        idx = np.searchsorted(self._bps, r, side="right") - 1
        return self._cum[idx] + self._vals[idx] * (r - self._bps[idx])

    def evaluate(self, x):
        _, r = self._split(x)
        return self._vals[np.searchsorted(self._bps, r, side="right") - 1]

    def integrate(self, a, b):
        ka, ra = self._split(a)
        kb, rb = self._split(b)
        return (kb - ka) * self._cum[-1] + self._partial(rb) - self._partial(ra)

    def integrate_exp(self, x, h):
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty(xs.shape)
        for i, xi in enumerate(xs.flat):
            end = xi + h
            start = max(xi, end - _EXP_HORIZON)
            bps = self.breakpoints(start, end, limit=_MAX_PIECES)
            if bps.size == 0 and (end - start) / self.period * len(self.profile) > _MAX_PIECES:
                raise ToleranceError("too many pieces in exponentially weighted integral")
            nodes = np.concatenate([[start], bps, [end]])
            mids = 0.5 * (nodes[:-1] + nodes[1:])
            weights = np.exp(nodes[1:] - end) - np.exp(nodes[:-1] - end)
            out.flat[i] = math.fsum(self.evaluate(mids) * weights)
        return out.reshape(np.shape(x))

    def breakpoints(self, a, b, limit=4096):
        k0 = math.floor(a / self.period)
        k1 = math.floor(b / self.period)
        if (k1 - k0 + 1) * len(self.profile) > 4 * limit + 8:
            return np.empty(0)
        ks = np.arange(k0, k1 + 1)[:, None] * self.period
        pts = (ks + self._bps[None, :]).ravel()
        pts = np.unique(pts[(pts > a) & (pts < b)])
        return pts if pts.size <= limit else np.empty(0)

    def to_json(self):
        return {
            "kind": self.kind,
            "period": self.period,
            "profile": [list(p) for p in self.profile],
            "bound": self.bound_,
        }


@dataclass(frozen=True)
class LogPeriodicBlocks(FunctionSpec):
    """Indicator of the blocks ``[b^k, b^{k+1})`` with ``pattern[k mod p]`` set."""

    base: float
    pattern: tuple[bool, ...]
    bound_: float | None = None
    kind: ClassVar[str] = "LogPeriodicBlocks"

    def __post_init__(self):
        if not _finite(self.base) or self.base <= 1:
            raise SpecError(f"LogPeriodicBlocks base must exceed 1, got {self.base!r}")
        object.__setattr__(self, "base", float(self.base))
        object.__setattr__(self, "pattern", _check_pattern(self.pattern))
        object.__setattr__(self, "bound_", _leaf_bound(self.bound_, 1.0 if any(self.pattern) else 0.0))
        p = len(self.pattern)
        on = np.array(self.pattern, dtype=float)
        powers = self.base ** np.arange(p)
        object.__setattr__(self, "_on", on)
        object.__setattr__(self, "_lnb", math.log(self.base))
        object.__setattr__(self, "_mass_prefix", np.concatenate([[0.0], np.cumsum(on * powers)]))
        object.__setattr__(self, "_ones_prefix", np.concatenate([[0.0], np.cumsum(on)]))

    @property
    def domain(self):
        return MULTIPLICATIVE

    @property
    def bound(self):
        return self.bound_

    def block_index(self, x):
        """``floor(log_b x)`` with right-open blocks."""
        x = np.asarray(x, dtype=float)
        k = np.floor(np.log(x) / self._lnb)
        k = np.where(self.base**k > x, k - 1, k)
        k = np.where(self.base ** (k + 1) <= x, k + 1, k)
        return k.astype(np.int64)

    def _is_on(self, k):
        return self._on[np.mod(k, len(self.pattern))]

    def _mass_before(self, k):
        # sum_{j<k} on_j (b^{j+1} - b^j)
        p = len(self.pattern)
        q, s = np.divmod(k, p)
        bp = self.base**p
        growth = self.base ** (q * p)
        full = self._mass_prefix[-1] * (growth - 1.0) / (bp - 1.0)
        return (self.base - 1.0) * (full + growth * self._mass_prefix[s])

    def _ones_before(self, k):
        p = len(self.pattern)
        q, s = np.divmod(k, p)
        return q * self._ones_prefix[-1] + self._ones_prefix[s]

    def evaluate(self, x):
        return self._is_on(self.block_index(x))

    def integrate(self, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        ka, kb = self.block_index(a), self.block_index(b)
        on_a, on_b = self._is_on(ka), self._is_on(kb)
        same = on_a * (b - a)
        split = (
            on_a * (self.base ** (ka + 1) - a)
            + (self._mass_before(kb) - self._mass_before(ka + 1))
            + on_b * (b - self.base**kb)
        )
        return np.where(ka == kb, same, split)

    def integrate_log(self, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        ka, kb = self.block_index(a), self.block_index(b)
        on_a, on_b = self._is_on(ka), self._is_on(kb)
        same = on_a * np.log(b / a)
        split = (
            on_a * np.log(self.base ** (ka + 1) / a)
            + self._lnb * (self._ones_before(kb) - self._ones_before(ka + 1))
            + on_b * np.log(b / self.base**kb)
        )
        return np.where(ka == kb, same, split)

    def breakpoints(self, a, b, limit=4096):
        ka = int(self.block_index(a))
        kb = int(self.block_index(b))
        if kb - ka > limit:
            return np.empty(0)
        pts = self.base ** np.arange(ka + 1, kb + 1, dtype=float)
        return pts[(pts > a) & (pts < b)]

    def to_json(self):
        word = "".join("1" if v else "0" for v in self.pattern)
        return {"kind": self.kind, "base": self.base, "pattern": word, "bound": self.bound_}


@dataclass(frozen=True)
class Sinusoid(FunctionSpec):
    """``A sin(2 pi x / T + phase)``."""

    amplitude: float
    period: float
    phase: float = 0.0
    domain_: DomainTag = ADDITIVE
    bound_: float | None = None
    kind: ClassVar[str] = "Sinusoid"

    def __post_init__(self):
        if not _finite(self.amplitude, self.period, self.phase) or self.period <= 0:
            raise SpecError("Sinusoid needs finite amplitude/phase and a positive period")
        for name in ("amplitude", "period", "phase"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "domain_", _domain(self.domain_))
        object.__setattr__(self, "bound_", _leaf_bound(self.bound_, abs(self.amplitude)))

    @property
    def domain(self):
        return self.domain_

    @property
    def bound(self):
        return self.bound_

    @property
    def omega(self) -> float:
        return 2.0 * math.pi / self.period

    def evaluate(self, x):
        return self.amplitude * np.sin(self.omega * np.asarray(x, dtype=float) + self.phase)

    def integrate(self, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        w = self.omega
        # product form keeps short windows free of cancellation
        return (2.0 * self.amplitude / w) * np.sin(0.5 * w * (a + b) + self.phase) * np.sin(0.5 * w * (b - a))

    def integrate_log(self, a, b):
        if self.domain is not MULTIPLICATIVE:
            return super().integrate_log(a, b)
        w = self.omega
        si_a, ci_a = sici(w * np.asarray(a, dtype=float))
        si_b, ci_b = sici(w * np.asarray(b, dtype=float))
        return self.amplitude * (math.cos(self.phase) * (si_b - si_a) + math.sin(self.phase) * (ci_b - ci_a))

    def integrate_exp(self, x, h):
        if self.domain is not ADDITIVE:
            return super().integrate_exp(x, h)
        w = self.omega
        x = np.asarray(x, dtype=float)

        def g(t):
            arg = w * t + self.phase
            return np.sin(arg) - w * np.cos(arg)

        return self.amplitude / (1.0 + w * w) * (g(x + h) - math.exp(-h) * g(x))

    def to_json(self):
        return {
            "kind": self.kind,
            "amplitude": self.amplitude,
            "period": self.period,
            "phase": self.phase,
            "domain": self.domain.value,
            "bound": self.bound_,
        }


@dataclass(frozen=True)
class LogSinusoid(FunctionSpec):
    """``A sin(2 pi log x / log c + phase)`` on ``[1, inf)``."""

    amplitude: float
    ratio: float
    phase: float = 0.0
    bound_: float | None = None
    kind: ClassVar[str] = "LogSinusoid"

    def __post_init__(self):
        if not _finite(self.amplitude, self.ratio, self.phase) or self.ratio <= 1:
            raise SpecError("LogSinusoid needs finite amplitude/phase and a ratio above 1")
        for name in ("amplitude", "ratio", "phase"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "bound_", _leaf_bound(self.bound_, abs(self.amplitude)))

    @property
    def domain(self):
        return MULTIPLICATIVE

    @property
    def bound(self):
        return self.bound_

    @property
    def omega(self) -> float:
        return 2.0 * math.pi / math.log(self.ratio)

    def evaluate(self, x):
        return self.amplitude * np.sin(self.omega * np.log(np.asarray(x, dtype=float)) + self.phase)

    def integrate(self, a, b):
        w = self.omega

        def antider(t):
            arg = w * np.log(t) + self.phase
            return t * (np.sin(arg) - w * np.cos(arg))

        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        return self.amplitude / (1.0 + w * w) * (antider(b) - antider(a))

    def integrate_log(self, a, b):
        ua = np.log(np.asarray(a, dtype=float))
        ub = np.log(np.asarray(b, dtype=float))
        w = self.omega
        return (2.0 * self.amplitude / w) * np.sin(0.5 * w * (ua + ub) + self.phase) * np.sin(0.5 * w * (ub - ua))

    def to_json(self):
        return {
            "kind": self.kind,
            "amplitude": self.amplitude,
            "ratio": self.ratio,
            "phase": self.phase,
            "bound": self.bound_,
        }


@dataclass(frozen=True)
class Sum(FunctionSpec):
    left: FunctionSpec
    right: FunctionSpec
    kind: ClassVar[str] = "Sum"

    def __post_init__(self):
        if not isinstance(self.left, FunctionSpec) or not isinstance(self.right, FunctionSpec):
            raise SpecError("Sum children must be function specs")
        if self.left.domain is not self.right.domain:
            raise SpecError("Sum children must share a domain")

    @property
    def domain(self):
        return self.left.domain

    @property
    def bound(self):
        return self.left.bound + self.right.bound

    def evaluate(self, x):
        return self.left.evaluate(x) + self.right.evaluate(x)

    def integrate(self, a, b):
        return self.left.integrate(a, b) + self.right.integrate(a, b)

    def integrate_log(self, a, b):
        return self.left.integrate_log(a, b) + self.right.integrate_log(a, b)

    def integrate_exp(self, x, h):
        return self.left.integrate_exp(x, h) + self.right.integrate_exp(x, h)

    def breakpoints(self, a, b, limit=4096):
        return _union([self.left.breakpoints(a, b, limit), self.right.breakpoints(a, b, limit)], limit)

    def to_json(self):
        return {"kind": self.kind, "left": self.left.to_json(), "right": self.right.to_json()}


@dataclass(frozen=True)
class Scale(FunctionSpec):
    k: float
    inner: FunctionSpec
    kind: ClassVar[str] = "Scale"

    def __post_init__(self):
        if not _finite(self.k) or not isinstance(self.inner, FunctionSpec):
            raise SpecError("Scale needs a finite factor and a function spec")
        object.__setattr__(self, "k", float(self.k))

    @property
    def domain(self):
        return self.inner.domain

    @property
    def bound(self):
        return abs(self.k) * self.inner.bound

    def evaluate(self, x):
        return self.k * self.inner.evaluate(x)

    def integrate(self, a, b):
        return self.k * self.inner.integrate(a, b)

    def integrate_log(self, a, b):
        return self.k * self.inner.integrate_log(a, b)

    def integrate_exp(self, x, h):
        return self.k * self.inner.integrate_exp(x, h)

    def breakpoints(self, a, b, limit=4096):
        return self.inner.breakpoints(a, b, limit)

    def to_json(self):
        return {"kind": self.kind, "k": self.k, "inner": self.inner.to_json()}


@dataclass(frozen=True)
class Shift(FunctionSpec):
    """``f(x) = inner(x + s)``, additive only."""

    s: float
    inner: FunctionSpec
    kind: ClassVar[str] = "Shift"

    def __post_init__(self):
        if not _finite(self.s) or self.s < 0:
            raise SpecError(f"Shift amount must be >= 0, got {self.s!r}")
        if not isinstance(self.inner, FunctionSpec) or self.inner.domain is not ADDITIVE:
            raise SpecError("Shift applies to additive-domain specs only")
        object.__setattr__(self, "s", float(self.s))

    @property
    def domain(self):
        return ADDITIVE

    @property
    def bound(self):
        return self.inner.bound

    def evaluate(self, x):
        return self.inner.evaluate(np.asarray(x, dtype=float) + self.s)

    def integrate(self, a, b):
        return self.inner.integrate(np.asarray(a, dtype=float) + self.s, np.asarray(b, dtype=float) + self.s)

    def integrate_exp(self, x, h):
        return self.inner.integrate_exp(np.asarray(x, dtype=float) + self.s, h)

    def breakpoints(self, a, b, limit=4096):
        return self.inner.breakpoints(a + self.s, b + self.s, limit) - self.s

    def to_json(self):
        return {"kind": self.kind, "s": self.s, "inner": self.inner.to_json()}


@dataclass(frozen=True)
class Dilate(FunctionSpec):
    """``f(x) = inner(r x)``, multiplicative only."""

    r: float
    inner: FunctionSpec
    kind: ClassVar[str] = "Dilate"

    def __post_init__(self):
        if not _finite(self.r) or self.r < 1:
            raise SpecError(f"Dilate factor must be >= 1, got {self.r!r}")
        if not isinstance(self.inner, FunctionSpec) or self.inner.domain is not MULTIPLICATIVE:
            raise SpecError("Dilate applies to multiplicative-domain specs only")
        object.__setattr__(self, "r", float(self.r))

    @property
    def domain(self):
        return MULTIPLICATIVE

    @property
    def bound(self):
        return self.inner.bound

    def evaluate(self, x):
        return self.inner.evaluate(self.r * np.asarray(x, dtype=float))

    def integrate(self, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        return self.inner.integrate(self.r * a, self.r * b) / self.r

    def integrate_log(self, a, b):
        return self.inner.integrate_log(self.r * np.asarray(a, dtype=float), self.r * np.asarray(b, dtype=float))

    def breakpoints(self, a, b, limit=4096):
        return self.inner.breakpoints(self.r * a, self.r * b, limit) / self.r

    def to_json(self):
        return {"kind": self.kind, "r": self.r, "inner": self.inner.to_json()}


@dataclass(frozen=True)
class LiftedSequence(FunctionSpec):
    """``f(x) = seq(floor(x))`` on ``[1, inf)``."""

    seq: SequenceSpec
    kind: ClassVar[str] = "LiftedSequence"

    def __post_init__(self):
        if not isinstance(self.seq, SequenceSpec):
            raise SpecError("LiftedSequence wraps a sequence spec")

    @property
    def domain(self):
        return MULTIPLICATIVE

    @property
    def bound(self):
        return self.seq.bound

    def evaluate(self, x):
        return self.seq.values(np.floor(np.asarray(x, dtype=float)).astype(np.int64))

    def _cells(self, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        a, b = np.broadcast_arrays(a, b)
        ia = np.floor(a).astype(np.int64)
        ib = np.floor(b).astype(np.int64)
        return a, b, ia, ib

    def integrate(self, a, b):
        a, b, ia, ib = self._cells(a, b)
        fa = self.seq.values(ia)
        fb = self.seq.values(ib)
        same = fa * (b - a)
        inner = self.seq.window_sum(ia + 1, np.maximum(ib, ia + 1))
        split = fa * ((ia + 1) - a) + inner + fb * (b - ib)
        return np.where(ia == ib, same, split)

    def integrate_log(self, a, b):
        a, b, ia, ib = self._cells(a, b)
        fa = self.seq.values(ia)
        fb = self.seq.values(ib)
        same = fa * np.log1p((b - a) / a)
        inner = self.seq.window_sum(ia + 1, np.maximum(ib, ia + 1), "log")
        split = fa * np.log1p(((ia + 1) - a) / a) + inner + fb * np.log1p((b - ib) / ib)
        return np.where(ia == ib, same, split)

    def breakpoints(self, a, b, limit=4096):
        lo = math.floor(a) + 1
        hi = math.ceil(b) - 1
        if hi - lo + 1 > limit:
            return self.seq.breakpoints(int(a), int(b) + 1, limit).astype(float)
        pts = np.arange(lo, hi + 1, dtype=float)
        return pts[(pts > a) & (pts < b)]

    def to_json(self):
        return {"kind": self.kind, "seq": self.seq.to_json()}


@dataclass(frozen=True)
class ExpComposed(FunctionSpec):
    """``f(x) = inner(e^x)``: the additive image of a multiplicative spec."""

    inner: FunctionSpec
    kind: ClassVar[str] = "ExpComposed"

    def __post_init__(self):
        if not isinstance(self.inner, FunctionSpec) or self.inner.domain is not MULTIPLICATIVE:
            raise SpecError("ExpComposed wraps a multiplicative-domain spec")

    @property
    def domain(self):
        return ADDITIVE

    @property
    def bound(self):
        return self.inner.bound

    @staticmethod
    def _exp(x):
        x = np.asarray(x, dtype=float)
        if np.any(x > EXP_LIMIT):
            raise OverflowGuardError(f"exp({float(np.max(x))}) overflows double precision")
        return np.exp(x)

    def evaluate(self, x):
        return self.inner.evaluate(self._exp(x))

    def integrate(self, a, b):
        return self.inner.integrate_log(self._exp(a), self._exp(b))

    def integrate_exp(self, x, h):
        x = np.asarray(x, dtype=float)
        lo = self._exp(x)
        hi = self._exp(x + h)
        return self.inner.integrate(lo, hi) / hi

    def breakpoints(self, a, b, limit=4096):
        if b > EXP_LIMIT:
            return np.empty(0)
        return np.log(self.inner.breakpoints(math.exp(a), math.exp(b), limit))

    def to_json(self):
        return {"kind": self.kind, "inner": self.inner.to_json()}
