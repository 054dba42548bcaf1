import json
import math
from dataclasses import replace

import numpy as np
import pytest

from asymptotic_means import identities
from asymptotic_means.errors import ScheduleError
from asymptotic_means.fnspec import (
    ADDITIVE,
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
from asymptotic_means.identities import (
    DEFAULT_SETTINGS,
    IdentityReport,
    Settings,
    SkipReport,
    analogues,
    check_discrete_continuous,
    check_logsum_bound,
    check_logsum_bound_grid,
    check_mean_collapse,
    check_P_equals_KW,
    check_P_equals_Q,
    check_Q_d_equals_P_d,
    check_Q_equals_KW,
    check_V1V_identity,
    run_suite,
    summarize,
    thread_count,
)

B4 = LogPeriodicBlocks(4.0, "10")
EVENS = ArithmeticIndicator(0, 2)
EB = ExponentBlocks(4, "10")


def _logsum_gap_oracle(f, n, theta):
    # V f is constant f(i) on [i, i+1), so its log-integral over a cell is f(i) log1p(1/i)
    end = math.floor(theta * n)
    return abs(math.fsum(f(i) * (math.log1p(1 / i) - 1 / i) for i in range(n, end + 1)))


@pytest.mark.parametrize("check", [check_P_equals_KW, check_Q_equals_KW, check_P_equals_Q])
@pytest.mark.parametrize("spec", [Constant(0.4), B4, LogSinusoid(1.0, 4.0), lift_V(EVENS)], ids=lambda s: s.kind)
def test_multiplicative_identities_pass(check, spec):
    rep = check(spec)
    assert rep.status == "pass" and rep.passed and rep.recompute()
    assert rep.tolerance == pytest.approx(5e-3)


def test_blocks_identity_values():
    rep = check_P_equals_KW(B4)
    assert rep.lhs == pytest.approx(1.0, abs=1e-3) and rep.rhs == pytest.approx(1.0, abs=1e-3)


def test_identity_needs_multiplicative_input():
    with pytest.raises(ScheduleError):
        check_P_equals_KW(Sinusoid(1.0, 1.0))


@pytest.mark.parametrize("seq", [EVENS, EB, PeriodicWord((1.0, 0.0, 1.0))], ids=lambda s: s.kind)
def test_discrete_identities_pass(seq):
    rep = check_Q_d_equals_P_d(seq)
    assert rep.passed and rep.tolerance == pytest.approx(1e-2)
    exact, asym = check_discrete_continuous(seq)
    assert exact.passed and exact.lhs <= 1e-9
    assert asym.passed
    assert check_V1V_identity(seq).lhs == 0.0


def test_discrete_continuous_example():
    # n = 10, theta = 1.5: evens in 10..15 are 10, 12, 14
    rep = check_discrete_continuous(EVENS, replace(DEFAULT_SETTINGS, exact_ns=(10,), exact_thetas=(1.5,)))[0]
    assert rep.diagnostics["worst"]["sum"] == 3.0
    assert rep.diagnostics["worst"]["integral"] == pytest.approx(3.0, abs=1e-12)


@pytest.mark.parametrize(
    "seq,n,theta",
    [(PeriodicWord((1.0,)), 1, 2.0), (EVENS, 100, 1.1), (EB, 7, 4.0), (PeriodicWord((-1.0, 0.5)), 3, 1.5)],
)
def test_logsum_bound_against_cell_oracle(seq, n, theta):
    rep = check_logsum_bound(seq, n, theta)
    f = lambda i: float(seq.values(np.array([i]))[0])
    assert rep.lhs == pytest.approx(_logsum_gap_oracle(f, n, theta), abs=1e-12)
    assert rep.rhs == pytest.approx(seq.bound * math.pi**2 / 12)
    assert rep.kind == "bound" and rep.passed
    assert rep.diagnostics["sharper_ok"]


def test_logsum_examples():
    # n = 1, theta = 2: cells 1 and 2 give (log 2 - 1) + (log 1.5 - 1/2)
    rep = check_logsum_bound(PeriodicWord((1.0,)), 1, 2.0)
    assert rep.lhs == pytest.approx(abs(math.log(3) - 1.5), abs=1e-12)
    assert rep.lhs == pytest.approx(0.4013877, abs=1e-7)
    assert check_logsum_bound(PeriodicWord((0.0,)), 5, 3.0).lhs == 0.0
    # evens from 100: gap is below sum_{i >= 100} 1/(2 i^2) ~ 0.005
    assert check_logsum_bound(EVENS, 100, 1.1).lhs <= 0.5 * sum(1 / i**2 for i in range(100, 10**5))


def test_logsum_rejects_bad_window():
    with pytest.raises(ScheduleError):
        check_logsum_bound(EVENS, 0, 2.0)
    with pytest.raises(ScheduleError):
        check_logsum_bound(EVENS, 3, 1.0)


def test_logsum_grid_covers_settings():
    rep = check_logsum_bound_grid(EB)
    assert rep.passed and rep.diagnostics["pairs"] == 50 * 4
    w = rep.diagnostics["worst"]
    f = lambda i: float(EB.values(np.array([i]))[0])
    assert rep.lhs == pytest.approx(_logsum_gap_oracle(f, w["n"], w["theta"]), abs=1e-12)


def test_analogues_table():
    a = analogues(EVENS)
    assert set(a) == {"K", "P", "Q", "Pd", "Qd"}
    assert a["Pd"] is EVENS and a["P"] == lift_V(EVENS)
    assert set(analogues(Sinusoid(1.0, 1.0))) == {"K"}
    assert set(analogues(B4)) == {"K", "P", "Q"}
    assert analogues(Constant(0.3))["Pd"] == PeriodicWord((0.3,))


@pytest.mark.parametrize("variant", ["K", "P", "Q", "Pd", "Qd"])
def test_mean_collapse_on_convergent_input(variant):
    rep = check_mean_collapse(analogues(PeriodicWord((1.0, 0.0)))[variant], variant)
    assert rep.status == "pass"
    assert rep.rhs == pytest.approx(0.5, abs=1e-2)


def test_mean_collapse_skips_divergent_mean():
    rep = check_mean_collapse(B4, "P")
    assert rep.status == "skip" and not rep.failed
    assert rep.lhs is None and "reason" in rep.diagnostics


def test_skip_report_shape():
    rep = SkipReport("x", {"kind": "constant"}, "because")
    assert rep.status == "skip" and not rep.passed and not rep.recompute()
    assert rep.to_json()["diagnostics"] == {"reason": "because"}


def test_recompute_matches_flag():
    eq = IdentityReport("a", 1.0, 1.004, 5e-3, True)
    assert eq.recompute()
    assert not replace(eq, rhs=1.006).recompute()
    bound = IdentityReport("b", 0.5 + 5e-10, 0.5, 0.0, True, kind="bound")
    assert bound.recompute()
    assert not replace(bound, lhs=0.5 + 2e-9).recompute()


# -- suite --------------------------------------------------------------------


def test_empty_corpus():
    assert run_suite([]) == []


def test_suite_on_fixture_corpus(corpus):
    reports = run_suite(corpus)
    counts = summarize(reports)
    assert counts["fail"] == 0 and counts["error"] == 0
    assert counts["pass"] > 0 and counts["total"] == len(reports)
    for r in reports:
        if r.status == "pass":
            assert r.recompute()
    assert [(r.name, r.index) for r in reports] == sorted((r.name, r.index) for r in reports)


def test_suite_reports_parse_error_without_aborting():
    reports = run_suite(['{"kind": "constant"}', Constant(0.5), "not json"])
    parse = [r for r in reports if r.name == "parse"]
    assert [r.index for r in parse] == [0, 2]
    assert all(r.status == "error" for r in parse)
    assert "$" in parse[0].diagnostics["message"]
    assert any(r.index == 1 and r.status == "pass" for r in reports)


def test_suite_is_deterministic_across_threads(corpus):
    a = identities.suite_json(run_suite(corpus, threads=1))
    b = identities.suite_json(run_suite(corpus, threads=4))
    assert a == b


def test_suite_handles_mixed_item_types():
    items = [EVENS, EVENS.to_json(), json.dumps(EVENS.to_json())]
    reports = run_suite(items, threads=1)
    by_index = {i: sorted((r.name, r.lhs) for r in reports if r.index == i) for i in range(3)}
    assert by_index[0] == by_index[1] == by_index[2]


def test_thread_env(monkeypatch):
    monkeypatch.setenv("ASYMPTOTIC_MEANS_THREADS", "3")
    assert thread_count() == 3
    monkeypatch.setenv("ASYMPTOTIC_MEANS_THREADS", "0")
    assert thread_count() >= 1
    monkeypatch.setenv("ASYMPTOTIC_MEANS_THREADS", "many")
    with pytest.raises(ScheduleError):
        thread_count()


def test_settings_from_json():
    s = Settings.from_json({"x_max": 1e6, "theta_steps": 8, "band_tol": 0.02})
    assert s.sweep.x_max == 1e6 and len(s.sweep.theta_schedule) == 7
    assert s.criterion.band_tol == 0.02
    with pytest.raises(ScheduleError):
        Settings.from_json({"bogus": 1})
    with pytest.raises(ScheduleError):
        Settings.from_json([1, 2])


def test_settings_propagate_to_sweeps():
    s = Settings.from_json({"x_max": 1e6})
    rep = check_P_equals_Q(B4, s)
    assert rep.diagnostics["lhs_sweep"]["params"]["x_max"] == 1e6
    assert rep.diagnostics["rhs_sweep"]["params"]["x_max"] == 1e6
