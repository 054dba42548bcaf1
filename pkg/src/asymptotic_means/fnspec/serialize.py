"""JSON encoding of spec trees.

One object per node with a ``kind`` field; children are nested objects.
Floats are written with ``repr`` precision, so ``loads(dumps(t)) == t``.
"""

from __future__ import annotations

import json
from typing import Any

from ..errors import ParseError, SpecError
from .functions import (
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
from .sequences import (
    AffineCombo,
    ArithmeticIndicator,
    ExplicitThenPeriodic,
    ExponentBlocks,
    PeriodicWord,
    SequenceSpec,
)

# kind -> (required fields, optional fields)
_FIELDS: dict[str, tuple[tuple[str, ...], tuple[str, ...]]] = {
    "Constant": (("c",), ("domain", "bound")),
    "AdditivePeriodic": (("period", "profile"), ("bound",)),
    "LogPeriodicBlocks": (("base", "pattern"), ("bound",)),
    "Sinusoid": (("amplitude", "period"), ("phase", "domain", "bound")),
    "LogSinusoid": (("amplitude", "ratio"), ("phase", "bound")),
    "Sum": (("left", "right"), ()),
    "Scale": (("k", "inner"), ()),
    "Shift": (("s", "inner"), ()),
    "Dilate": (("r", "inner"), ()),
    "LiftedSequence": (("seq",), ()),
    "ExpComposed": (("inner",), ()),
    "PeriodicWord": (("values",), ("bound",)),
    "ArithmeticIndicator": (("a", "d"), ("bound",)),
    "ExponentBlocks": (("base", "pattern"), ("bound",)),
    "ExplicitThenPeriodic": (("prefix", "tail"), ("bound",)),
    "AffineCombo": (("k", "inner"), ("offset",)),
}
SEQUENCE_KINDS = frozenset(
    {"PeriodicWord", "ArithmeticIndicator", "ExponentBlocks", "ExplicitThenPeriodic", "AffineCombo"}
)
FUNCTION_KINDS = frozenset(_FIELDS) - SEQUENCE_KINDS


class _Located(SpecError):
    """A constructor error already prefixed with its JSON path."""


def _number(v, where: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"{where}: expected a number, got {v!r}")
    return v


def _integer(v, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"{where}: expected an integer, got {v!r}")
    return v


def _list(v, where: str) -> list:
    if not isinstance(v, list):
        raise ParseError(f"{where}: expected a list, got {v!r}")
    return v


def _node(obj: Any, where: str):
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object, got {type(obj).__name__}")
    kind = obj.get("kind")
    if kind not in _FIELDS:
        raise ParseError(f"{where}: unknown kind {kind!r}")
    required, optional = _FIELDS[kind]
    missing = [k for k in required if k not in obj]
    if missing:
        raise ParseError(f"{where}: {kind} is missing field(s) {', '.join(missing)}")
    extra = set(obj) - set(required) - set(optional) - {"kind"}
    if extra:
        raise ParseError(f"{where}: {kind} has unknown field(s) {', '.join(sorted(extra))}")
    bound = obj.get("bound")
    if bound is not None:
        bound = _number(bound, f"{where}.bound")
    try:
        return _build(kind, obj, where, bound)
    except (ParseError, _Located):
        raise
    except SpecError as exc:
        raise _Located(f"{where}: {exc}") from None


def _fn(obj, where) -> FunctionSpec:
    node = _node(obj, where)
    if not isinstance(node, FunctionSpec):
        raise ParseError(f"{where}: expected a function spec, got {node.kind}")
    return node


def _seq(obj, where) -> SequenceSpec:
    node = _node(obj, where)
    if not isinstance(node, SequenceSpec):
        raise ParseError(f"{where}: expected a sequence spec, got {node.kind}")
    return node


def _pattern(v, where):
    if isinstance(v, str):
        return v
    return [_integer(x, where) for x in _list(v, where)]


def _build(kind, o, w, bound):
    if kind == "Constant":
        return Constant(_number(o["c"], f"{w}.c"), o.get("domain", "multiplicative"), bound)
    if kind == "AdditivePeriodic":
        prof = []
        for i, pair in enumerate(_list(o["profile"], f"{w}.profile")):
            pair = _list(pair, f"{w}.profile[{i}]")
            if len(pair) != 2:
                raise ParseError(f"{w}.profile[{i}]: expected [breakpoint, value]")
            prof.append((_number(pair[0], f"{w}.profile[{i}]"), _number(pair[1], f"{w}.profile[{i}]")))
        return AdditivePeriodic(_number(o["period"], f"{w}.period"), tuple(prof), bound)
    if kind == "LogPeriodicBlocks":
        return LogPeriodicBlocks(_number(o["base"], f"{w}.base"), _pattern(o["pattern"], f"{w}.pattern"), bound)
    if kind == "Sinusoid":
        return Sinusoid(
            _number(o["amplitude"], f"{w}.amplitude"),
            _number(o["period"], f"{w}.period"),
            _number(o.get("phase", 0.0), f"{w}.phase"),
            o.get("domain", "additive"),
            bound,
        )
    if kind == "LogSinusoid":
        return LogSinusoid(
            _number(o["amplitude"], f"{w}.amplitude"),
            _number(o["ratio"], f"{w}.ratio"),
            _number(o.get("phase", 0.0), f"{w}.phase"),
            bound,
        )
    if kind == "Sum":
        return Sum(_fn(o["left"], f"{w}.left"), _fn(o["right"], f"{w}.right"))
    if kind == "Scale":
        return Scale(_number(o["k"], f"{w}.k"), _fn(o["inner"], f"{w}.inner"))
    if kind == "Shift":
        return Shift(_number(o["s"], f"{w}.s"), _fn(o["inner"], f"{w}.inner"))
    if kind == "Dilate":
        return Dilate(_number(o["r"], f"{w}.r"), _fn(o["inner"], f"{w}.inner"))
    if kind == "LiftedSequence":
        return LiftedSequence(_seq(o["seq"], f"{w}.seq"))
    if kind == "ExpComposed":
        return ExpComposed(_fn(o["inner"], f"{w}.inner"))
    if kind == "PeriodicWord":
        vals = tuple(_number(v, f"{w}.values") for v in _list(o["values"], f"{w}.values"))
        return PeriodicWord(vals, bound)
    if kind == "ArithmeticIndicator":
        return ArithmeticIndicator(_integer(o["a"], f"{w}.a"), _integer(o["d"], f"{w}.d"), bound)
    if kind == "ExponentBlocks":
        return ExponentBlocks(_integer(o["base"], f"{w}.base"), _pattern(o["pattern"], f"{w}.pattern"), bound)
    if kind == "ExplicitThenPeriodic":
        pre = tuple(_number(v, f"{w}.prefix") for v in _list(o["prefix"], f"{w}.prefix"))
        tail = _seq(o["tail"], f"{w}.tail")
        if not isinstance(tail, PeriodicWord):
            raise ParseError(f"{w}.tail: expected a PeriodicWord")
        return ExplicitThenPeriodic(pre, tail, bound)
    # AffineCombo
    return AffineCombo(
        _number(o["k"], f"{w}.k"), _seq(o["inner"], f"{w}.inner"), _number(o.get("offset", 0.0), f"{w}.offset")
    )


def from_json(obj: Any):
    """Build a spec tree from a decoded JSON object."""
    return _node(obj, "$")


def to_json(spec) -> dict:
    if not isinstance(spec, (FunctionSpec, SequenceSpec)):
        raise SpecError(f"cannot serialize {spec!r}")
    return spec.to_json()


def loads(text: str):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return from_json(obj)


def dumps(spec, indent: int | None = None) -> str:
    return json.dumps(to_json(spec), indent=indent)


def load(path) -> Any:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return loads(text)
    except SpecError as exc:
        raise type(exc)(f"{path}: {exc}") from None
