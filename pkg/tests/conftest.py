import math
from pathlib import Path

import numpy as np
import pytest

from asymptotic_means.fnspec import (
    AdditivePeriodic,
    ArithmeticIndicator,
    Constant,
    ExponentBlocks,
    LogPeriodicBlocks,
    LogSinusoid,
    PeriodicWord,
    Sinusoid,
    lift_V,
)

ROOT = Path(__file__).resolve().parent.parent
CORPUS_DIR = ROOT / "corpus"
SPECS_DIR = ROOT / "specs"


def fixture_corpus():
    """The eight default fixtures, in corpus order."""
    return [
        Constant(0.7),
        AdditivePeriodic(2.0, ((0.0, 1.0), (1.0, 0.0))),
        Sinusoid(1.0, 1.0),
        LogPeriodicBlocks(4.0, "10"),
        LogSinusoid(1.0, 4.0),
        lift_V(ArithmeticIndicator(0, 2)),
        ExponentBlocks(4, "10"),
        PeriodicWord((1.0, 0.0, 1.0)),
    ]


def midpoint(fn, a, b, n=1_000_000, weight=None):
    """Midpoint rule with ``n`` cells; ``weight`` multiplies the integrand."""
    h = (b - a) / n
    t = a + h * (np.arange(n) + 0.5)
    vals = np.asarray(fn(t), dtype=float)
    if weight is not None:
        vals = vals * weight(t)
    return math.fsum(vals) * h


def cellwise(fn, nodes, weight="count"):
    """Exact integral of a function that is constant between consecutive ``nodes``."""
    nodes = np.asarray(nodes, dtype=float)
    vals = np.asarray(fn(0.5 * (nodes[1:] + nodes[:-1])), dtype=float)
    if weight == "count":
        return math.fsum(vals * np.diff(nodes))
    return math.fsum(vals * np.log(nodes[1:] / nodes[:-1]))


def direct_sum(seq, lo, hi, weight="count"):
    """``sum_{i=lo}^{hi-1} f(i) w(i)`` term by term."""
    i = np.arange(lo, hi)
    vals = seq.values(i).astype(float)
    if weight == "harmonic":
        vals = vals / i
    elif weight == "log":
        vals = vals * np.log1p(1.0 / i)
    return math.fsum(vals)


@pytest.fixture
def corpus():
    return fixture_corpus()
