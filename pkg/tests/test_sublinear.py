import csv
import io
import json
import math

import numpy as np
import pytest

from asymptotic_means.errors import ScheduleError, SpecError
from asymptotic_means.fnspec import (
    ADDITIVE,
    AdditivePeriodic,
    ArithmeticIndicator,
    Constant,
    Dilate,
    ExponentBlocks,
    LogPeriodicBlocks,
    LogSinusoid,
    PeriodicWord,
    Scale,
    Shift,
    Sinusoid,
    Sum,
    lift_V,
    transform_W,
)
from asymptotic_means.sublinear import (
    SweepParams,
    functional_range,
    k_upper,
    lower,
    p_upper,
    p_upper_seq,
    q_upper,
    q_upper_seq,
    theta_schedule,
    upper,
)

B4 = LogPeriodicBlocks(4.0, "10")
SQUARE = AdditivePeriodic(2.0, ((0.0, 1.0), (1.0, 0.0)))
EVENS = ArithmeticIndicator(0, 2)
EB = ExponentBlocks(4, "10")


def _values(rep):
    return np.array([e for _, e, _ in rep.per_theta])


# -- schedules and params ---------------------------------------------------


def test_default_schedules():
    assert theta_schedule("K") == tuple(2.0**-j for j in range(2, 11))
    assert theta_schedule("P") == tuple(1 + 2.0**-j for j in range(2, 11))
    p = SweepParams.default("P")
    assert (p.x_min, p.x_max, p.anchors_per_theta, p.stride_fraction) == (1e5, 1e7, 48, 0.25)
    k = p.with_kind("K")
    assert k.x_min == pytest.approx(math.log(1e5)) and k.x_max == pytest.approx(math.log(1e7))
    assert k.theta_schedule == pytest.approx(theta_schedule("K"))


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(kind="K", theta_schedule=(0.5, 0.25, 0.125), x_min=0, x_max=10),
        dict(kind="K", theta_schedule=(0.5, 0.25, 0.3, 0.1), x_min=0, x_max=10),
        dict(kind="K", theta_schedule=(2.0, 0.5, 0.25, 0.1), x_min=0, x_max=10),
        dict(kind="P", theta_schedule=(2.5, 1.5, 1.25, 1.1), x_min=10, x_max=1e5),
        dict(kind="P", theta_schedule=(1.5, 1.25, 1.1, 1.05), x_min=0.5, x_max=1e5),
        dict(kind="P", theta_schedule=(1.5, 1.25, 1.1, 1.05), x_min=10, x_max=1e5, stride_fraction=0.75),
        dict(kind="P", theta_schedule=(1.5, 1.25, 1.1, 1.05), x_min=10, x_max=1e5, anchors_per_theta=1),
        dict(kind="Z", theta_schedule=(1.5, 1.25, 1.1, 1.05), x_min=10, x_max=1e5),
    ],
)
def test_params_invariants(kwargs):
    with pytest.raises((ScheduleError, SpecError)):
        SweepParams(**kwargs)


def test_stride_never_exceeds_fraction_of_window():
    from asymptotic_means.sublinear import _Lattice, _tail, _width

    p = SweepParams.default("P")
    lo, hi = _tail(p)
    widths = [_width("P", t) for t in p.theta_schedule]
    lat = _Lattice(lo, hi, widths, p)
    for w in widths:
        a = lat.anchors(w)
        assert np.max(np.diff(a)) <= p.stride_fraction * w + 1e-15
        assert a.size >= p.anchors_per_theta
        assert a[-1] + w <= hi


def test_params_json_round_trip():
    p = SweepParams.default("Qd", theta_steps=8, anchors=32)
    assert SweepParams.from_json(json.loads(json.dumps(p.to_json()))) == p


# -- K ------------------------------------------------------------------------


def test_k_constant():
    rep = k_upper(Constant(0.3, ADDITIVE))
    assert rep.value == pytest.approx(0.3, abs=1e-12) and rep.monotone_ok


def test_k_square_wave_against_anchor_scan():
    rep = k_upper(SQUARE)
    assert rep.value == pytest.approx(1.0, abs=1e-6)
    for theta, est, _ in rep.per_theta:
        anchors = np.linspace(0.0, 2.0, 20001)
        scan = np.max(SQUARE.integrate(anchors, anchors + theta)) / theta
        assert est == pytest.approx(scan, abs=1e-9)


def test_k_sinusoid_against_sinc():
    rep = k_upper(Sinusoid(1.0, 1.0))
    # a window of width theta centred at c averages sin(2 pi x) to sinc(theta) sin(2 pi c);
    # anchors sit on a lattice of stride theta/4, so c misses the peak by at most theta/8
    for theta, est, _ in rep.per_theta:
        sinc = math.sin(math.pi * theta) / (math.pi * theta)
        assert sinc * math.cos(2 * math.pi * theta / 8) - 1e-12 <= est <= sinc + 1e-12
    assert rep.value == pytest.approx(1.0, abs=1e-3)
    assert rep.per_theta[-1][0] == 2.0**-10


# -- P and Q --------------------------------------------------------------------


@pytest.mark.parametrize("fn", [p_upper, q_upper])
def test_multiplicative_constant(fn):
    rep = fn(Constant(0.6))
    assert rep.value == pytest.approx(0.6, abs=1e-12)


@pytest.mark.parametrize("fn", [p_upper, q_upper])
def test_blocks_upper_is_one(fn):
    rep = fn(B4)
    assert rep.value == pytest.approx(1.0, abs=1e-3)
    # oracle: a window [x, theta x] placed at the start of an on-block lies inside it
    x = 4.0**10
    theta = rep.per_theta[-1][0]
    assert B4.integrate(x, theta * x) / ((theta - 1) * x) == 1.0


def test_p_lifted_evens_against_direct_window_sums():
    rep = p_upper(lift_V(EVENS))
    assert rep.value == pytest.approx(0.5, abs=1e-2)
    x, theta = 10**6, rep.per_theta[-1][0]
    n = np.arange(x, int(theta * x))
    assert EVENS.values(n).sum() / (theta * x - x) == pytest.approx(0.5, abs=1e-2)


def test_q_log_sinusoid_matches_k_of_W():
    spec = LogSinusoid(1.0, 4.0)
    q, k = q_upper(spec), k_upper(transform_W(spec))
    assert q.value == pytest.approx(1.0, abs=1e-3)
    assert q.value == pytest.approx(k.value, abs=1e-3)


# -- discrete ---------------------------------------------------------------------


@pytest.mark.parametrize("fn", [p_upper_seq, q_upper_seq])
def test_discrete_examples(fn):
    assert fn(PeriodicWord((0.4,))).value == pytest.approx(0.4, abs=1e-2)
    assert fn(EVENS).value == pytest.approx(0.5, abs=1e-2)
    assert fn(EB).value == pytest.approx(1.0, abs=1e-2)


def test_discrete_window_against_direct_summation():
    rep = p_upper_seq(EB)
    theta, est, anchor = rep.per_theta[-1]
    n = int(anchor)
    direct = EB.values(np.arange(n, math.floor(theta * n) + 1)).sum() / ((theta - 1) * n)
    assert est == pytest.approx(min(direct, EB.bound), abs=1e-12)
    rep = q_upper_seq(EVENS)
    theta, est, anchor = rep.per_theta[3]
    n = int(anchor)
    i = np.arange(n, math.floor(theta * n) + 1)
    assert est == pytest.approx(min(math.fsum(EVENS.values(i) / i) / math.log(theta), 1.0), abs=1e-12)


def test_empty_discrete_windows_raise():
    p = SweepParams.default("Pd", x_max=200.0)
    with pytest.raises(ScheduleError):
        p_upper_seq(EVENS, p)


# -- lower and range -----------------------------------------------------------------


@pytest.mark.parametrize("kind", ["K", "P", "Q", "Pd", "Qd"])
def test_lower_of_constant(kind):
    obj = {"K": Constant(0.7, ADDITIVE), "Pd": PeriodicWord((0.7,)), "Qd": PeriodicWord((0.7,))}.get(kind, Constant(0.7))
    rep = lower(kind, obj)
    assert rep.value == pytest.approx(0.7, abs=1e-9)
    assert rep.direction == "lower" and rep.monotone_ok


def test_lower_examples():
    assert lower("P", B4).value == pytest.approx(0.0, abs=1e-3)
    rep = lower("K", Sinusoid(1.0, 1.0))
    assert rep.value == pytest.approx(-1.0, abs=1e-3)
    assert np.all(np.diff(_values(rep)) <= 1e-9)


def test_functional_range_examples():
    assert functional_range(Constant(0.2), "Q") == pytest.approx((0.2, 0.2))
    lo, hi = functional_range(B4, "P")
    assert lo == pytest.approx(0.0, abs=1e-3) and hi == pytest.approx(1.0, abs=1e-3)
    lo, hi = functional_range(EVENS, "Pd")
    assert lo == pytest.approx(0.5, abs=2e-2) and hi == pytest.approx(0.5, abs=2e-2)
    assert lo <= hi + 1e-9


# -- properties ----------------------------------------------------------------------

ADD = [SQUARE, Sinusoid(1.0, 1.0), Sum(SQUARE, Sinusoid(0.5, 0.5, 1.0)), AdditivePeriodic(1.0, ((0.0, 0.2), (0.3, -1.0)))]
MULT = [B4, LogSinusoid(1.0, 4.0), lift_V(EVENS), Sum(Dilate(3.0, B4), Scale(0.5, LogSinusoid(1.0, 2.0)))]
SEQ = [EVENS, EB, PeriodicWord((1.0, 0.0, 1.0))]


def _cases():
    for f in ADD:
        yield "K", f
    for f in MULT:
        yield "P", f
        yield "Q", f
    for s in SEQ:
        yield "Pd", s
        yield "Qd", s


@pytest.mark.parametrize("kind,obj", list(_cases()))
def test_monotone_and_bounded(kind, obj):
    rep = upper(kind, obj)
    assert rep.monotone_ok
    assert abs(rep.value) <= obj.bound
    assert rep.value == rep.per_theta[-1][1]


@pytest.mark.parametrize("s", [0.3, 1.0, 7.0])
@pytest.mark.parametrize("f", ADD, ids=lambda f: f.kind)
def test_translation_invariance(f, s):
    a, b = k_upper(f), k_upper(Shift(s, f))
    assert b.value == pytest.approx(a.value, abs=a.tolerance)


@pytest.mark.parametrize("r", [2.0, math.e, 10.0])
@pytest.mark.parametrize("f", MULT, ids=lambda f: f.kind)
def test_dilation_invariance(f, r):
    for fn in (p_upper, q_upper):
        a, b = fn(f), fn(Dilate(r, f))
        assert b.value == pytest.approx(a.value, abs=a.tolerance)


@pytest.mark.parametrize("kind,pair", [("K", (ADD[0], ADD[1])), ("P", (MULT[0], MULT[1])), ("Q", (MULT[2], MULT[3]))])
def test_sublinearity(kind, pair):
    f, g = pair
    uf, ug = upper(kind, f), upper(kind, g)
    assert upper(kind, Sum(f, g)).value <= uf.value + ug.value + 3 * uf.tolerance
    assert upper(kind, Scale(2.5, f)).value == pytest.approx(2.5 * uf.value, abs=uf.tolerance)
    one = Constant(1.0, ADDITIVE) if kind == "K" else Constant(1.0)
    assert upper(kind, one).value == pytest.approx(1.0, abs=1e-12)


def test_monotone_in_the_input():
    # 0.5 * blocks <= blocks pointwise, and the sweep respects it
    assert p_upper(Scale(0.5, B4)).value <= p_upper(B4).value


# -- output formats ----------------------------------------------------------------------


def test_report_json_and_csv():
    rep = p_upper(B4)
    obj = json.loads(json.dumps(rep.to_json()))
    assert set(obj) == {"kind", "direction", "value", "monotone_ok", "per_theta", "params"}
    assert set(obj["per_theta"][0]) == {"theta", "estimate", "anchor"}
    rows = list(csv.reader(io.StringIO(rep.to_csv())))
    assert rows[0] == ["theta", "estimate", "anchor"]
    assert len(rows) == 1 + len(rep.per_theta)
    assert float(rows[-1][0]) == rep.per_theta[-1][0]


def test_reports_are_deterministic():
    a = json.dumps(q_upper(Sum(B4, LogSinusoid(0.3, 2.0))).to_json())
    b = json.dumps(q_upper(Sum(B4, LogSinusoid(0.3, 2.0))).to_json())
    assert a == b


def test_wrong_domain_rejected():
    with pytest.raises(SpecError):
        p_upper(SQUARE)
    with pytest.raises(SpecError):
        k_upper(B4)
    with pytest.raises(SpecError):
        p_upper_seq(B4)
