import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fucik import spectral
from fucik.core import FucikParams, SpectrumPoint
from fucik.errors import ConvergenceFailure, InvalidArgument, OutOfRange
from fucik.grid import build_interval, l2_inner, minus
from fucik.oracle1d import first_curve_analytic
from fucik.tracer import (
    CSV_COLUMNS,
    CurveTrace,
    asymptotic_diagnostic,
    check_decay,
    check_lambda2_crossing,
    check_monotone,
    check_symmetry,
    default_grid,
    geometric_grid,
    read_csv,
    trace_csv,
    trace_curve,
    write_csv,
)

TINY = build_interval(1.0, 3)


def fake_trace(betas, alphas, lam1=1.0, lam2=4.0, dim=1):
    pts = [SpectrumPoint(beta=b, alpha=a, u=TINY.field(np.array([-1.0, 0.0, 1.0])), mu=0.5,
                         residual=1e-12, converged=True, eps_final=0.0, iterations=3)
           for b, a in zip(betas, alphas)]
    return CurveTrace(domain=TINY.to_dict(), betas=list(betas), points=pts,
                      valid=[True] * len(pts), lambda1=lam1, lambda2=lam2, dim=dim)


def analytic_trace(lo=1.3, hi=60.0, n=60):
    betas = geometric_grid(lo, hi, n)
    return fake_trace(betas, [first_curve_analytic(math.pi, b) for b in betas])


def test_monotone_detector():
    tr = analytic_trace()
    assert check_monotone(tr).passed
    alphas = list(tr.alphas)
    alphas[7] = alphas[6] + 0.01
    bad = fake_trace(tr.betas, alphas)
    rep = check_monotone(bad)
    assert not rep.passed and rep.violations == [6]
    assert "FAIL" in rep.line()


def test_symmetry_on_analytic_curve():
    coarse = check_symmetry(analytic_trace(n=100), tol=1e-2)
    fine = check_symmetry(analytic_trace(n=400), tol=1e-3)
    assert coarse.passed and fine.passed and fine.applicable
    assert fine.value < coarse.value / 3  # interpolation error only
    assert not check_symmetry(analytic_trace(10, 60, 10), 0.02).applicable


def test_crossing():
    tr = analytic_trace(n=200)
    rep = check_lambda2_crossing(tr, 4.0, tol=1e-3)
    assert rep.passed
    above = analytic_trace(5.0, 60.0, 10)
    assert not check_lambda2_crossing(above, 4.0).applicable


def test_diagnostic_1d_expansion():
    tr = analytic_trace(100.0, 1e6, 20)
    for b, D in asymptotic_diagnostic(tr):
        assert D == pytest.approx((math.pi / (math.pi - math.pi / math.sqrt(b))) ** 2 - 1)
        assert D == pytest.approx(2 / math.sqrt(b), rel=5 / math.sqrt(b))
    assert check_decay(asymptotic_diagnostic(tr)).passed


def test_constant_alpha_flags_non_decay():
    betas = geometric_grid(20, 200, 8)
    tr = fake_trace(betas, [2.3] * 8, lam1=2.0, lam2=5.0, dim=2)
    diag = asymptotic_diagnostic(tr)
    assert all(b > a for (_, a), (_, b) in zip(diag, diag[1:]))
    assert not check_decay(diag).passed


@given(st.lists(st.floats(1.1, 1e3), min_size=1, max_size=30, unique=True))
def test_csv_round_trip(tmp_path_factory, betas):
    betas = sorted(betas)
    if any(b2 <= b1 for b1, b2 in zip(betas, betas[1:])):
        return
    tr = fake_trace(betas, [first_curve_analytic(math.pi, b) for b in betas])
    tr.points[0] = None
    tr.valid[0] = False
    path = tmp_path_factory.mktemp("csv") / "t.csv"
    write_csv(tr, path, comment="config_hash=abc")
    rows = read_csv(path)
    assert [r["beta"] for r in rows] == betas
    for r, pt in zip(rows[1:], tr.points[1:]):
        assert r["alpha"] == pt.alpha and r["mu"] == pt.mu and r["residual"] == pt.residual
    assert math.isnan(rows[0]["alpha"]) and not rows[0]["converged"]
    text = path.read_text(encoding="utf-8")
    assert text.splitlines()[1] == ",".join(CSV_COLUMNS)
    assert "\r" not in text


def test_betas_must_increase():
    with pytest.raises(InvalidArgument):
        fake_trace([2.0, 1.5], [1.0, 2.0])
    d = build_interval(math.pi, 49)
    with pytest.raises(InvalidArgument):
        trace_curve(d, [5.0, 5.0])
    with pytest.raises(OutOfRange):
        trace_curve(d, [0.5, 5.0])


def test_default_grid_spans_crossing():
    g = default_grid(1.0, 4.0, 30)
    assert g[0] == pytest.approx(4.0 / 1.1) and g[-1] == pytest.approx(50.0)
    assert all(b > a for a, b in zip(g, g[1:]))


@pytest.fixture(scope="module")
def small_traces():
    d = build_interval(math.pi, 199)
    lam2 = spectral.smallest_eigenpairs(d, 2)[1].value
    betas = [lam2 / 1.05, lam2, 6.0, 10.0, 20.0]
    p = FucikParams(beta=betas[0])
    warm = trace_curve(d, betas, p)
    cold = trace_curve(d, betas, p, warm_start=False)
    par = trace_curve(d, betas, p, parallel=True)
    return d, lam2, warm, cold, par


def test_trace_single_point_lambda2(small_traces):
    d, lam2, *_ = small_traces
    tr = trace_curve(d, [lam2])
    assert tr.points[0].alpha == pytest.approx(lam2, rel=1e-3)


def test_warm_and_cold_agree(small_traces):
    _, _, warm, cold, par = small_traces
    assert all(warm.valid) and all(cold.valid)
    tol = 2 * warm.point_tol
    assert np.max(np.abs(warm.alphas - cold.alphas)) <= tol
    assert np.array_equal(par.alphas, cold.alphas)


def test_trace_point_invariants(small_traces):
    d, _, warm, *_ = small_traces
    assert check_monotone(warm).passed
    for pt in warm.points:
        assert pt.mu > 0
        assert l2_inner(d, minus(pt.u.values), minus(pt.u.values)) == pytest.approx(1.0, abs=1e-8)
        assert pt.alpha > warm.lambda1
    assert trace_csv(warm) == trace_csv(warm)


def test_first_point_failure_aborts(monkeypatch):
    from fucik import tracer

    def boom(*a, **k):
        raise ConvergenceFailure("synthetic")

    monkeypatch.setattr(tracer, "solve_point", boom)
    with pytest.raises(ConvergenceFailure):
        trace_curve(build_interval(math.pi, 49), [5.0, 6.0])


def test_later_failure_is_flagged(monkeypatch):
    from fucik import tracer

    real = tracer.solve_point

    def flaky(d, b, *a, **k):
        if b == 6.0:
            raise ConvergenceFailure("synthetic")
        return real(d, b, *a, **k)

    monkeypatch.setattr(tracer, "solve_point", flaky)
    tr = trace_curve(build_interval(math.pi, 49), [5.0, 6.0, 7.0])
    assert tr.valid == [True, False, True]
    assert tr.coverage() == pytest.approx(2 / 3)
    assert tr.converged()[0].tolist() == [5.0, 7.0]
