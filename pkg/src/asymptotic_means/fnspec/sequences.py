"""Generator descriptions of bounded real sequences on the nonnegative integers.

Every node evaluates pointwise and exposes closed-form weighted partial sums,
so window sums over millions of terms cost O(1) per query.  Three weights are
supported:

``count``     f(i)
``harmonic``  f(i) / i
``log``       f(i) * log(1 + 1/i)   (the exact mass of f(floor t)/t on [i, i+1))
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import ClassVar

import numpy as np
from scipy.special import digamma

from ..errors import SpecError
from . import _special

WEIGHTS = ("count", "harmonic", "log")

# windows at most this many terms long are summed term by term
_SHORT_WINDOW = 64


def _as_int_array(n):
    arr = np.asarray(n)
    if arr.dtype.kind == "f":
        if not np.all(np.isfinite(arr)) or np.any(arr != np.floor(arr)):
            raise SpecError("sequence indices must be integers")
    return arr.astype(np.int64)


def _weight(i, weight: str):
    if weight == "count":
        return np.ones(np.shape(i))
    if weight == "harmonic":
        return 1.0 / np.asarray(i, dtype=float)
    if weight == "log":
        return _special.log_weight(i)
    raise ValueError(f"unknown weight {weight!r}")


def _check_pattern(pattern) -> tuple[bool, ...]:
    if isinstance(pattern, str):
        if not pattern or set(pattern) - {"0", "1"}:
            raise SpecError(f"pattern must be a nonempty 0/1 word, got {pattern!r}")
        return tuple(ch == "1" for ch in pattern)
    items = tuple(pattern)
    if not items or any(not isinstance(v, (bool, int, np.bool_)) or v not in (0, 1) for v in items):
        raise SpecError(f"pattern must be a nonempty 0/1 word, got {pattern!r}")
    return tuple(bool(v) for v in items)


class SequenceSpec:
    """Base class of all sequence nodes."""

    kind: ClassVar[str] = ""

    @property
    def bound(self) -> float:
        raise NotImplementedError

    def values(self, n):
        raise NotImplementedError

    def _prefix(self, n, weight: str):
        raise NotImplementedError

    def breakpoints(self, lo: int, hi: int, limit: int = 4096):
        """Indices in ``(lo, hi)`` where the generator changes regime.

        Only sparse structure is reported; periodic fine structure is omitted.
        """
        return np.empty(0, dtype=np.int64)

    def prefix(self, n, weight: str = "count"):
        """``sum_{i=1}^{n-1} f(i) w(i)`` for integer ``n >= 1``."""
        n = _as_int_array(n)
        if np.any(n < 1):
            raise SpecError("prefix sums start at index 1")
        return np.asarray(self._prefix(n, weight), dtype=float)

    def window_sum(self, lo, hi, weight: str = "count"):
        """``sum_{i=lo}^{hi-1} f(i) w(i)``; zero when ``hi <= lo``.  Requires ``lo >= 1``."""
        lo, hi = np.broadcast_arrays(_as_int_array(lo), _as_int_array(hi))
        shape = lo.shape
        lo = lo.ravel()
        hi = hi.ravel()
        if np.any(lo < 1):
            raise SpecError("window sums start at index 1")
        hi = np.maximum(hi, lo)
        out = np.zeros(lo.shape, dtype=float)
        short = (hi - lo) <= _SHORT_WINDOW
        if np.any(short):
            base = lo[short][:, None]
            idx = base + np.arange(_SHORT_WINDOW)[None, :]
            live = idx < hi[short][:, None]
            safe = np.where(live, idx, base)
            terms = self.values(safe) * _weight(safe, weight)
            out[short] = np.where(live, terms, 0.0).sum(axis=1)
        if np.any(~short):
            out[~short] = self._prefix(hi[~short], weight) - self._prefix(lo[~short], weight)
        return out.reshape(shape)

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class PeriodicWord(SequenceSpec):
    """``f(n) = values[n mod p]``."""

    values_: tuple[float, ...]
    bound_: float | None = None
    kind: ClassVar[str] = "PeriodicWord"

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values_)
        if not vals or not all(np.isfinite(vals)):
            raise SpecError("PeriodicWord needs a nonempty list of finite values")
        object.__setattr__(self, "values_", vals)
        object.__setattr__(self, "bound_", _leaf_bound(self.bound_, max(abs(v) for v in vals)))

    @property
    def bound(self) -> float:
        return self.bound_

    @property
    def period(self) -> int:
        return len(self.values_)

    def values(self, n):
        n = _as_int_array(n)
        return np.asarray(self.values_)[n % self.period]

    def _prefix(self, n, weight):
        return _periodic_prefix(self.values_, n, weight)

    def to_json(self):
        return {"kind": self.kind, "values": list(self.values_), "bound": self.bound_}


def _periodic_prefix(vals, n, weight):
    p = len(vals)
    total = np.zeros(np.shape(n), dtype=float)
    for r, v in enumerate(vals):
        if v == 0.0:
            continue
        if weight == "count":
            part = _special.residue_count(n, r, p).astype(float)
        elif weight == "harmonic":
            part = _special.residue_harmonic(n, r, p)
        elif weight == "log":
            part = _special.residue_log(n, r, p)
        else:
            raise ValueError(f"unknown weight {weight!r}")
        total = total + v * part
    return total


@dataclass(frozen=True)
class ArithmeticIndicator(SequenceSpec):
    """``f(n) = 1`` if ``n = a (mod d)`` else 0."""

    a: int
    d: int
    bound_: float | None = None
    kind: ClassVar[str] = "ArithmeticIndicator"

    def __post_init__(self):
        if not _is_int(self.a) or not _is_int(self.d) or self.a < 0 or self.d < 1:
            raise SpecError(f"ArithmeticIndicator needs a >= 0, d >= 1 integers, got a={self.a}, d={self.d}")
        object.__setattr__(self, "a", int(self.a))
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "bound_", _leaf_bound(self.bound_, 1.0))

    @property
    def bound(self) -> float:
        return self.bound_

    def values(self, n):
        n = _as_int_array(n)
        return (n % self.d == self.a % self.d).astype(float)

    def _prefix(self, n, weight):
        vals = [0.0] * self.d
        vals[self.a % self.d] = 1.0
        return _periodic_prefix(vals, n, weight)

    def to_json(self):
        return {"kind": self.kind, "a": self.a, "d": self.d, "bound": self.bound_}


@dataclass(frozen=True)
class ExponentBlocks(SequenceSpec):
    """``f(n) = pattern[k mod p]`` with ``k = floor(log_b n)``; ``f(0) = 0``."""

    base: int
    pattern: tuple[bool, ...]
    bound_: float | None = None
    kind: ClassVar[str] = "ExponentBlocks"

    def __post_init__(self):
        if not _is_int(self.base) or self.base < 2:
            raise SpecError(f"ExponentBlocks base must be an integer >= 2, got {self.base!r}")
        object.__setattr__(self, "base", int(self.base))
        object.__setattr__(self, "pattern", _check_pattern(self.pattern))
        object.__setattr__(self, "bound_", _leaf_bound(self.bound_, 1.0 if any(self.pattern) else 0.0))
        kmax = 1
        while self.base ** (kmax + 2) < 2**62:
            kmax += 1
        object.__setattr__(self, "_kmax", kmax)
        on = np.array([self.pattern[k % len(self.pattern)] for k in range(kmax + 1)], dtype=float)
        starts = np.array([self.base**k for k in range(kmax + 2)], dtype=np.int64)
        sizes = (starts[1:] - starts[:-1]).astype(float)
        harm = digamma(starts[1:].astype(float)) - digamma(starts[:-1].astype(float))
        object.__setattr__(self, "_on", on)
        object.__setattr__(self, "_starts", starts)
        cum = {
            "count": np.concatenate([[0.0], np.cumsum(on * sizes)]),
            "harmonic": np.concatenate([[0.0], np.cumsum(on * harm)]),
            "log": np.concatenate([[0.0], np.cumsum(on * np.log(self.base))]),
        }
        object.__setattr__(self, "_cum", cum)

    @property
    def bound(self) -> float:
        return self.bound_

    def block_index(self, n):
        """``floor(log_b n)`` for integer ``n >= 1``, computed exactly."""
        n = _as_int_array(n)
        if np.any(n >= self._starts[self._kmax + 1]):
            raise SpecError("index beyond the supported range of ExponentBlocks")
        k = np.floor(np.log(np.maximum(n, 1)) / np.log(self.base)).astype(np.int64)
        k = np.clip(k, 0, self._kmax)
        k = np.where(self._starts[k] > n, k - 1, k)
        k = np.where(self._starts[k + 1] <= n, k + 1, k)
        return k

    def values(self, n):
        n = _as_int_array(n)
        k = self.block_index(np.maximum(n, 1))
        return np.where(n >= 1, self._on[k], 0.0)

    def _prefix(self, n, weight):
        k = self.block_index(n)
        start = self._starts[k]
        head = self._cum[weight][k]
        if weight == "count":
            part = (n - start).astype(float)
        elif weight == "harmonic":
            part = digamma(n.astype(float)) - digamma(start.astype(float))
        elif weight == "log":
            part = np.log(n.astype(float) / start.astype(float))
        else:
            raise ValueError(f"unknown weight {weight!r}")
        return head + self._on[k] * part

    def breakpoints(self, lo, hi, limit=4096):
        s = self._starts[: self._kmax + 1]
        return s[(s > lo) & (s < hi)][:limit]

    def to_json(self):
        word = "".join("1" if v else "0" for v in self.pattern)
        return {"kind": self.kind, "base": self.base, "pattern": word, "bound": self.bound_}


@dataclass(frozen=True)
class ExplicitThenPeriodic(SequenceSpec):
    """Finite explicit prefix ``f(0..m-1)``, then ``tail`` restarted at index ``m``."""

    prefix_: tuple[float, ...]
    tail: PeriodicWord
    bound_: float | None = None
    kind: ClassVar[str] = "ExplicitThenPeriodic"
    _rotated: tuple[float, ...] = field(init=False, repr=False, compare=False, default=())

    def __post_init__(self):
        vals = tuple(float(v) for v in self.prefix_)
        if not all(np.isfinite(vals)):
            raise SpecError("ExplicitThenPeriodic prefix values must be finite")
        if not isinstance(self.tail, PeriodicWord):
            raise SpecError("ExplicitThenPeriodic tail must be a PeriodicWord")
        object.__setattr__(self, "prefix_", vals)
        natural = max([abs(v) for v in vals] + [self.tail.bound])
        object.__setattr__(self, "bound_", _leaf_bound(self.bound_, natural))
        m, p = len(vals), self.tail.period
        rotated = tuple(self.tail.values_[(s - m) % p] for s in range(p))
        object.__setattr__(self, "_rotated", rotated)

    @property
    def bound(self) -> float:
        return self.bound_

    def values(self, n):
        n = _as_int_array(n)
        m = len(self.prefix_)
        tail = np.asarray(self._rotated)[n % self.tail.period]
        if m == 0:
            return tail
        head = np.asarray(self.prefix_)[np.minimum(n, m - 1)]
        return np.where(n < m, head, tail)

    def _prefix(self, n, weight):
        total = _periodic_prefix(self._rotated, n, weight)
        m = len(self.prefix_)
        if m > 1:
            idx = np.arange(1, m)
            corr = (np.asarray(self.prefix_[1:]) - np.asarray(self._rotated)[idx % self.tail.period]) * _weight(idx, weight)
            cum = np.concatenate([[0.0], np.cumsum(corr)])
            total = total + cum[np.clip(n - 1, 0, m - 1)]
        return total

    def breakpoints(self, lo, hi, limit=4096):
        m = len(self.prefix_)
        return np.array([m], dtype=np.int64) if lo < m < hi else np.empty(0, dtype=np.int64)

    def to_json(self):
        return {"kind": self.kind, "prefix": list(self.prefix_), "tail": self.tail.to_json(), "bound": self.bound_}


@dataclass(frozen=True)
class AffineCombo(SequenceSpec):
    """``f(n) = k * inner(n) + offset``."""

    k: float
    inner: SequenceSpec
    offset: float = 0.0
    kind: ClassVar[str] = "AffineCombo"

    def __post_init__(self):
        if not isinstance(self.inner, SequenceSpec):
            raise SpecError("AffineCombo inner must be a sequence spec")
        if not (np.isfinite(self.k) and np.isfinite(self.offset)):
            raise SpecError("AffineCombo coefficients must be finite")
        object.__setattr__(self, "k", float(self.k))
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def bound(self) -> float:
        return abs(self.k) * self.inner.bound + abs(self.offset)

    def values(self, n):
        return self.k * self.inner.values(n) + self.offset

    def _prefix(self, n, weight):
        if weight == "count":
            ones = (n - 1).astype(float)
        elif weight == "harmonic":
            ones = _special.harmonic(n)
        elif weight == "log":
            ones = np.log(n.astype(float))
        else:
            raise ValueError(f"unknown weight {weight!r}")
        return self.k * self.inner._prefix(n, weight) + self.offset * ones

    def breakpoints(self, lo, hi, limit=4096):
        return self.inner.breakpoints(lo, hi, limit)

    def to_json(self):
        return {"kind": self.kind, "k": self.k, "inner": self.inner.to_json(), "offset": self.offset}


def _is_int(v) -> bool:
    return isinstance(v, (int, np.integer)) and not isinstance(v, bool)


def _leaf_bound(declared, natural: float) -> float:
    if declared is None:
        return float(natural)
    declared = float(declared)
    if not np.isfinite(declared) or declared < natural:
        raise SpecError(f"declared bound {declared} is below the sup of the node ({natural})")
    return declared


def evaluate_seq(seq: SequenceSpec, n):
    """Value of ``seq`` at a nonnegative integer (or integer array)."""
    if not isinstance(seq, SequenceSpec):
        raise SpecError(f"not a sequence spec: {seq!r}")
    arr = _as_int_array(n)
    if np.any(arr < 0):
        raise SpecError("sequence index must be nonnegative")
    out = seq.values(arr)
    return float(out) if np.ndim(out) == 0 else out
