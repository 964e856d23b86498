"""Acceptance criteria 1-10.

Each test records one ``[PASS]``/``[FAIL]`` line; the lines are printed in the
pytest terminal summary, or directly when this file is run as a script.
"""

import math
import sys
import time

import numpy as np
import pytest

from fucik import spectral
from fucik.asymptotics import AsymptoteModel, certify_upper_bound, k_curve_asymptote
from fucik.core import (
    FucikParams,
    G_eval,
    f_gradient,
    f_value,
    fiber_derivative,
    fiber_scale,
    g_eval,
    solve_point,
)
from fucik.errors import FiberInfeasible, OutOfRange
from fucik.grid import build_interval, build_rectangle, l2_norm, minus
from fucik.oracle1d import first_curve_analytic
from fucik.tracer import (
    asymptotic_diagnostic,
    check_decay,
    check_lambda2_crossing,
    check_monotone,
    check_symmetry,
    geometric_grid,
    trace_curve,
)

RESULTS: list = []

TRACE_1D = (4.5, 40.0, 40)
RUNTIME_LIMIT = 120.0
ORACLE_TOL = 0.01
CROSSING_TOL = 0.02
SYMMETRY_TOL = 0.02
TAIL = (50.0, 200.0, 8)
RESIDUAL_TOL = 1e-4
EIGEN_TOL = 0.1
FIBER_FIELDS = 100
FD_TOL = 1e-6
CHECKPOINT_SLACK = 1e-6


def record(number: int, name: str, passed: bool, detail: str) -> None:
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:2d} {name}: {detail}"
    RESULTS.append((number, line))
    print(line)


# --------------------------------------------------------------------------
# shared runs


@pytest.fixture(scope="module")
def interval():
    return build_interval(math.pi, 799)


@pytest.fixture(scope="module")
def square():
    return build_rectangle(math.pi, math.pi, 199, 199)


@pytest.fixture(scope="module")
def trace_1d(interval):
    betas = geometric_grid(*TRACE_1D)
    t0 = time.perf_counter()
    tr = trace_curve(interval, betas, FucikParams(beta=betas[0]))
    return tr, time.perf_counter() - t0


@pytest.fixture(scope="module")
def symmetry_1d(interval):
    hi = 40.0
    lo = 1.001 * first_curve_analytic(math.pi, hi)  # mirror image of the top point
    betas = geometric_grid(lo, hi, 40)
    return trace_curve(interval, betas, FucikParams(beta=lo))


@pytest.fixture(scope="module")
def square_crossing(square):
    betas = geometric_grid(4.6, 5.4, 4)
    return trace_curve(square, betas, FucikParams(beta=betas[0]))


@pytest.fixture(scope="module")
def square_tail(square):
    betas = geometric_grid(*TAIL)
    return trace_curve(square, betas, FucikParams(beta=betas[0]))


# --------------------------------------------------------------------------
# criteria


def test_c01_oracle_agreement(trace_1d):
    tr, elapsed = trace_1d
    b, a = tr.converged()
    exact = np.array([first_curve_analytic(math.pi, x) for x in b])
    err = float(np.max(np.abs(a - exact) / exact)) if b.size else math.inf
    ok = b.size == TRACE_1D[2] and err <= ORACLE_TOL and elapsed <= RUNTIME_LIMIT
    record(1, "1D oracle agreement", ok,
           f"max rel err {err:.2e} (tol {ORACLE_TOL}), {b.size}/{TRACE_1D[2]} converged, "
           f"{elapsed:.1f} s (limit {RUNTIME_LIMIT:.0f} s)")
    assert ok


def test_c02_lambda2_crossing(symmetry_1d, square_crossing):
    r1 = check_lambda2_crossing(symmetry_1d, tol=CROSSING_TOL)
    r2 = check_lambda2_crossing(square_crossing, tol=CROSSING_TOL)
    ok = r1.passed and r2.passed
    record(2, "lambda_2 crossing", ok,
           f"interval lambda2={r1.details.get('lambda2', math.nan):.6f} rel err {r1.value:.2e}; "
           f"square lambda2={r2.details.get('lambda2', math.nan):.6f} rel err {r2.value:.2e} "
           f"(tol {CROSSING_TOL})")
    assert ok


def test_c03_monotone(trace_1d, symmetry_1d, square_crossing, square_tail):
    traces = {"1D [4.5,40]": trace_1d[0], "1D symmetric span": symmetry_1d,
              "square crossing": square_crossing, "square tail": square_tail}
    reps = {k: check_monotone(t) for k, t in traces.items()}
    ok = all(r.passed for r in reps.values())
    bad = {k: r.violations for k, r in reps.items() if not r.passed}
    record(3, "strict monotonicity", ok,
           f"{len(reps)} traces, slack 2*point_tol = {2 * trace_1d[0].point_tol:.0e}"
           + (f", violations {bad}" if bad else ""))
    assert ok


def test_c04_symmetry(symmetry_1d):
    rep = check_symmetry(symmetry_1d, SYMMETRY_TOL)
    record(4, "symmetry", rep.passed,
           f"max mismatch {rep.value:.2e} over {rep.details.get('tested', 0)} points "
           f"(tol {SYMMETRY_TOL}), span [{symmetry_1d.betas[0]:.4f}, {symmetry_1d.betas[-1]:.0f}]")
    assert rep.passed


def test_c05_asymptotic_decay(square_tail):
    diag = asymptotic_diagnostic(square_tail)
    rep = check_decay(diag, TAIL[0], TAIL[1])
    ok = rep.passed and len(diag) == TAIL[2]
    record(5, "asymptotic decay", ok,
           "D(beta) = ln(beta)(alpha-lambda1): "
           + ", ".join(f"{d:.4f}" for _, d in diag))
    assert ok


def test_c06_separation(square, square_tail):
    diag = asymptotic_diagnostic(square_tail)
    thr = k_curve_asymptote(AsymptoteModel.from_domain(square, 1))
    worst = max(d for _, d in diag)
    ok = len(diag) == TAIL[2] and all(d < thr for _, d in diag)
    record(6, "separation from k-curves", ok,
           f"max D {worst:.4f} < 4 pi max(e1)^2 = {thr:.4f} (16/pi = {16 / math.pi:.4f})")
    assert ok


def test_c07_certificates(square, square_tail):
    y = (0.5, 0.5)
    tol = square_tail.point_tol
    rows = []
    for b, pt, ok in zip(square_tail.betas, square_tail.points, square_tail.valid):
        if not ok:
            continue
        try:
            cert = certify_upper_bound(square, b, y, alpha_traced=pt.alpha)
        except Exception:
            continue
        rows.append(cert)
    rows = rows[-5:]
    dominance = len(rows) == 5 and all(c.bound >= c.alpha_traced - 2 * tol for c in rows)
    b_top = square_tail.betas[-1]
    path = [(math.pi / 2, math.pi / 2), (1.0, 1.0), (0.5, 0.5)]  # toward the corner
    bounds = [certify_upper_bound(square, b_top, yy).bound for yy in path]
    toward = all(b2 < b1 for b1, b2 in zip(bounds, bounds[1:]))
    ok = dominance and toward
    record(7, "certificate validity", ok,
           "margins " + ", ".join(f"beta={c.beta:.1f}:{c.margin:+.4f}" for c in rows)
           + f"; beta={b_top:.0f} bounds centre->corner "
           + " > ".join(f"{x:.4f}" for x in bounds))
    assert ok


def test_c08_residual(trace_1d, symmetry_1d, square_crossing, square_tail):
    res = [pt.residual for tr in (trace_1d[0], symmetry_1d, square_crossing, square_tail)
           for pt, ok in zip(tr.points, tr.valid) if ok]
    worst = max(res)
    ok = worst <= RESIDUAL_TOL
    record(8, "Euler residual", ok, f"max relative residual {worst:.2e} over {len(res)} points "
           f"(tol {RESIDUAL_TOL:.0e})")
    assert ok


def test_c09_eigenfunction_limits(interval):
    e1 = spectral.principal(interval).values
    dist = {}
    for b in (10.0, 20.0, 40.0):
        pt = solve_point(interval, b)
        dist[b] = l2_norm(interval, minus(pt.u.values) - e1)
    vals = [dist[b] for b in sorted(dist)]
    decreasing = all(v2 < v1 for v1, v2 in zip(vals, vals[1:]))
    ok = dist[40.0] <= EIGEN_TOL and decreasing
    record(9, "eigenfunction limits", ok,
           "||u-_beta - e1||: " + ", ".join(f"beta={b:.0f}:{v:.4f}" for b, v in dist.items())
           + f" (need <= {EIGEN_TOL} at beta=40 and decreasing)")
    assert ok


def test_c10_property_suite(interval):
    rng = np.random.default_rng(10)
    checks = {}

    tau = np.linspace(1e-3, 50, 20001)
    for beta, eps in [(5.0, 0.01), (50.0, 0.3), (400.0, 1e-3)]:
        t = tau[tau > eps]
        q = g_eval(beta, eps, t) / t
        checks.setdefault("g/tau increasing", True)
        checks["g/tau increasing"] &= bool(np.all(np.diff(q) > 0))

    t = rng.uniform(-2, 2, 500)
    t = t[np.abs(t - 0.2) > 1e-4]
    fd = (G_eval(30.0, 0.2, t + 1e-7) - G_eval(30.0, 0.2, t - 1e-7)) / 2e-7
    checks["G' = g"] = bool(np.allclose(fd, g_eval(30.0, 0.2, t), rtol=1e-6, atol=1e-6))

    d = build_rectangle(math.pi, math.pi, 31, 31)
    scan = np.geomspace(1e-4, 1e4, 4001)
    unique = 0
    tries = 0
    while unique < FIBER_FIELDS and tries < 10 * FIBER_FIELDS:
        tries += 1
        u = rng.standard_normal(d.size) + rng.uniform(-1, 1)
        p = FucikParams(beta=float(rng.uniform(100, 600)), eps=float(rng.uniform(1e-3, 0.2)))
        try:
            tb = fiber_scale(d, p, u)
        except FiberInfeasible:
            continue
        phi = fiber_derivative(d, p, u, scan)
        k = np.flatnonzero(np.diff(np.sign(phi)) != 0)
        if k.size == 1 and scan[k[0]] <= tb <= scan[k[0] + 1]:
            unique += 1
        else:
            break
    checks[f"fiber root unique ({FIBER_FIELDS} fields)"] = unique == FIBER_FIELDS

    small = build_rectangle(1.0, 1.3, 7, 6)
    worst = 0.0
    for _ in range(5):
        u = rng.standard_normal(small.size)
        p = FucikParams(beta=40.0, eps=0.05)
        grad = f_gradient(small, p, u)
        delta = 1e-5 * float(np.max(np.abs(u)))
        fd = np.empty(small.size)
        for i in range(small.size):
            e = np.zeros(small.size)
            e[i] = delta
            fd[i] = (f_value(small, p, u + e) - f_value(small, p, u - e)) / (2 * delta)
        keep = np.abs(u - p.eps) > 2 * delta
        worst = max(worst, float(np.max(np.abs(fd - grad)[keep]) / np.max(np.abs(grad))))
    checks[f"f-gradient vs FD ({worst:.1e})"] = worst <= FD_TOL

    lam1 = spectral.lambda1(interval)
    infeasible = True
    for beta in (lam1 / 2, lam1):
        for _ in range(10):
            u = rng.standard_normal(interval.size)
            try:
                fiber_scale(interval, FucikParams(beta=beta), u)
                infeasible = False
            except FiberInfeasible:
                pass
        try:
            solve_point(interval, beta)
            infeasible = False
        except OutOfRange:
            pass
    checks["infeasible for beta <= lambda1"] = infeasible

    pt = solve_point(interval, 9.0)
    alphas = [a for _, a in pt.checkpoints]
    checks["eps-checkpoint alpha nonincreasing"] = all(
        a2 <= a1 + CHECKPOINT_SLACK for a1, a2 in zip(alphas, alphas[1:]))

    ok = all(checks.values())
    record(10, "property suite", ok,
           "; ".join(f"{k}: {'ok' if v else 'FAILED'}" for k, v in checks.items()))
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
