"""Sweeps of the first curve over a beta grid and the curve-level checks."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import spectral
from .core import FucikParams, SpectrumPoint, guard_band, solve_point
from .errors import ConvergenceFailure, FucikError, InvalidArgument, NotApplicable, OutOfRange
from .grid import Domain

log = logging.getLogger(__name__)

CSV_COLUMNS = ["beta", "alpha", "mu", "residual", "iterations", "converged", "diag_value"]


@dataclass
class CurveTrace:
    domain: dict  # provenance record of the Domain
    betas: list
    points: list  # SpectrumPoint, or None where the solver raised
    valid: list
    lambda1: float
    lambda2: float
    dim: int = 1
    point_tol: float = 1e-6
    notes: list = field(default_factory=list)

    def __post_init__(self):
        if any(b1 >= b2 for b1, b2 in zip(self.betas, self.betas[1:])):
            raise InvalidArgument("beta values of a trace must be strictly increasing")

    @property
    def alphas(self) -> np.ndarray:
        return np.array([p.alpha if p is not None else math.nan for p in self.points])

    def converged(self) -> tuple:
        """(betas, alphas) restricted to converged points."""
        b = [bb for bb, p, ok in zip(self.betas, self.points, self.valid) if ok]
        a = [p.alpha for p, ok in zip(self.points, self.valid) if ok]
        return np.array(b, dtype=float), np.array(a, dtype=float)

    def coverage(self) -> float:
        return sum(self.valid) / max(1, len(self.valid))


@dataclass
class Report:
    name: str
    passed: bool
    applicable: bool = True
    value: float = math.nan
    tol: float = math.nan
    violations: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else ("N/A" if not self.applicable else "FAIL")
        extra = f" value={self.value:.6g}" if not math.isnan(self.value) else ""
        if not math.isnan(self.tol):
            extra += f" tol={self.tol:.3g}"
        if self.violations:
            extra += f" violations={self.violations}"
        return f"[{status}] {self.name}{extra}"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "applicable": self.applicable,
            "value": None if math.isnan(self.value) else self.value,
            "tol": None if math.isnan(self.tol) else self.tol,
            "violations": self.violations,
            "details": self.details,
        }


def _is_valid(pt: Optional[SpectrumPoint], lam1: float) -> bool:
    return pt is not None and pt.converged and pt.alpha > lam1


def trace_curve(d: Domain, betas: Sequence[float], p: Optional[FucikParams] = None,
                warm_start: bool = True, parallel: bool = False,
                seeds=None) -> CurveTrace:
    """Ascending sweep; each solve is warm-started from the previous converged point.

    Failed points are kept (flagged invalid).  A failure at the first point
    aborts the sweep.  ``parallel`` solves every point cold, using up to
    ``FUCIK_THREADS`` worker threads.
    """
    betas = [float(b) for b in betas]
    if not betas:
        raise InvalidArgument("empty beta grid")
    if any(b1 >= b2 for b1, b2 in zip(betas, betas[1:])):
        raise InvalidArgument("beta grid must be strictly increasing")
    p = FucikParams(beta=betas[0]) if p is None else p
    pairs = spectral.smallest_eigenpairs(d, 2, p.eig_tol)
    lam1, lam2 = pairs[0].value, pairs[1].value
    if betas[0] <= guard_band(d, p):
        raise OutOfRange(f"first beta {betas[0]:.6g} is not above lambda_1 = {lam1:.6g}")

    points: list = []
    if parallel:
        workers = max(1, min(len(betas), int(os.environ.get("FUCIK_THREADS", os.cpu_count() or 1))))

        def job(b):
            try:
                return solve_point(d, b, p, seeds=seeds)
            except FucikError as exc:
                log.warning("beta=%.6g failed: %s", b, exc)
                return None

        with ThreadPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(job, betas))
        if points[0] is None:
            raise ConvergenceFailure(f"first point beta={betas[0]:.6g} failed")
    else:
        warm = None
        for i, b in enumerate(betas):
            try:
                pt = solve_point(d, b, p, warm=warm if warm_start else None, seeds=seeds)
            except FucikError as exc:
                if i == 0:
                    raise ConvergenceFailure(f"first point beta={b:.6g} failed: {exc}") from exc
                log.warning("beta=%.6g failed: %s", b, exc)
                pt = None
            points.append(pt)
            if _is_valid(pt, lam1):
                warm = pt.u
            log.info("beta=%.6g alpha=%s", b, "-" if pt is None else f"{pt.alpha:.8g}")
    valid = [_is_valid(pt, lam1) for pt in points]
    return CurveTrace(
        domain=d.to_dict(),
        betas=betas,
        points=points,
        valid=valid,
        lambda1=lam1,
        lambda2=lam2,
        dim=d.dim,
        point_tol=p.point_tol,
    )


def geometric_grid(lo: float, hi: float, n: int) -> list:
    if n == 1:
        return [float(lo)]
    return [float(x) for x in np.geomspace(lo, hi, n)]


def default_grid(lam1: float, lam2: float, n: int = 30) -> list:
    """Geometric grid from lambda_2/1.1 to 50*lambda_1 (covers the crossing and the tail)."""
    return geometric_grid(lam2 / 1.1, max(50.0 * lam1, 1.1 * lam2 * 1.01), n)


# --------------------------------------------------------------------------
# checks


def check_monotone(tr: CurveTrace, slack: Optional[float] = None) -> Report:
    b, a = tr.converged()
    slack = 2.0 * tr.point_tol if slack is None else slack
    if b.size < 2:
        return Report("monotone", False, applicable=False, details={"coverage": tr.coverage()})
    idx = np.flatnonzero(a[1:] >= a[:-1] + slack)
    violations = [int(i) for i in idx]
    return Report(
        "monotone",
        passed=not violations,
        value=float(np.max(np.diff(a))) if a.size > 1 else math.nan,
        tol=slack,
        violations=violations,
        details={"coverage": tr.coverage()},
    )


def _loglog_interp(x, b, a) -> float:
    # the curve is close to a hyperbola, so log-log is nearly linear
    return float(np.exp(np.interp(np.log(x), np.log(b), np.log(a))))


def curve_at(tr: CurveTrace, beta: float) -> float:
    """Log-log interpolation of the converged trace at ``beta``."""
    b, a = tr.converged()
    if b.size < 2 or not (b[0] <= beta <= b[-1]):
        raise NotApplicable(f"beta={beta:.6g} outside the converged span")
    return _loglog_interp(beta, b, a)


def check_symmetry(tr: CurveTrace, tol: float) -> Report:
    """Mirror test: the curve evaluated at beta = alpha_i must return beta_i.

    Only points whose mirror image lies inside the sampled span are tested.
    """
    b, a = tr.converged()
    if b.size < 2:
        return Report("symmetry", False, applicable=False)
    inside = (a >= b[0]) & (a <= b[-1])
    if not (np.any(a > tr.lambda2) and np.any(a < tr.lambda2)) or inside.sum() < 2:
        return Report("symmetry", False, applicable=False,
                      details={"reason": "trace does not span both sides of lambda_2"})
    mism = []
    for ai, bi in zip(a[inside], b[inside]):
        mirror = _loglog_interp(ai, b, a)
        mism.append(abs(mirror - bi) / abs(bi))
    worst = float(max(mism))
    return Report("symmetry", worst <= tol, value=worst, tol=tol,
                  details={"tested": int(inside.sum())})


def check_lambda2_crossing(tr: CurveTrace, lam2: Optional[float] = None, tol: float = 0.02) -> Report:
    lam2 = tr.lambda2 if lam2 is None else lam2
    try:
        a = curve_at(tr, lam2)
    except NotApplicable as exc:
        return Report("lambda2_crossing", False, applicable=False, details={"reason": str(exc)})
    err = abs(a - lam2) / lam2
    return Report("lambda2_crossing", err <= tol, value=err, tol=tol,
                  details={"alpha_at_lambda2": a, "lambda2": lam2})


def diagnostic_value(beta: float, alpha: float, lam1: float, dim: int) -> float:
    """beta^((N-2)/2)(alpha - lambda_1) for N >= 3, ln(beta)(alpha - lambda_1) for N = 2,
    alpha - lambda_1 for N = 1.  ``ln`` is the natural logarithm."""
    gap = alpha - lam1
    if dim >= 3:
        return beta ** ((dim - 2) / 2.0) * gap
    if dim == 2:
        return math.log(beta) * gap
    return gap


def asymptotic_diagnostic(tr: CurveTrace, N: Optional[int] = None,
                          lam1: Optional[float] = None) -> list:
    """``[(beta, D(beta)), ...]`` over the converged points."""
    N = tr.dim if N is None else N
    lam1 = tr.lambda1 if lam1 is None else lam1
    b, a = tr.converged()
    return [(float(bb), diagnostic_value(bb, aa, lam1, N)) for bb, aa in zip(b, a)]


def check_decay(diag: Sequence, beta_min: float = -math.inf, beta_max: float = math.inf) -> Report:
    """Strict decrease of D over the sampled tail ``beta_min <= beta <= beta_max``."""
    tail = [(b, v) for b, v in diag if beta_min <= b <= beta_max]
    if len(tail) < 2:
        return Report("tail_decay", False, applicable=False)
    vals = np.array([v for _, v in tail])
    idx = np.flatnonzero(np.diff(vals) >= 0)
    return Report("tail_decay", passed=idx.size == 0, value=float(vals[-1]),
                  violations=[int(i) for i in idx],
                  details={"betas": [b for b, _ in tail], "D": vals.tolist()})


# --------------------------------------------------------------------------
# serialization


def trace_rows(tr: CurveTrace) -> list:
    rows = []
    for b, pt, ok in zip(tr.betas, tr.points, tr.valid):
        if pt is None:
            rows.append([b, math.nan, math.nan, math.nan, 0, False, math.nan])
            continue
        diag = diagnostic_value(b, pt.alpha, tr.lambda1, tr.dim)
        rows.append([b, pt.alpha, pt.mu, pt.residual, pt.iterations, bool(ok), diag])
    return rows


def write_csv(tr: CurveTrace, path, comment: str = "") -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(trace_csv(tr, comment))


def trace_csv(tr: CurveTrace, comment: str = "") -> str:
    """CSV text; ``comment`` becomes a leading ``#`` line (provenance)."""
    buf = io.StringIO()
    if comment:
        buf.write(f"# {comment}\n")
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(CSV_COLUMNS)
    for row in trace_rows(tr):
        wr.writerow([repr(float(x)) if isinstance(x, float) else
                     (str(int(x)) if isinstance(x, bool) else str(x)) for x in row])
    return buf.getvalue()


def read_csv(path) -> list:
    """Rows of a trace CSV as dicts with typed values."""
    with open(path, newline="", encoding="utf-8") as fh:
        rd = csv.DictReader(line for line in fh if not line.startswith("#"))
        if rd.fieldnames != CSV_COLUMNS:
            raise InvalidArgument(f"unexpected CSV header {rd.fieldnames}")
        out = []
        for r in rd:
            out.append({
                "beta": float(r["beta"]),
                "alpha": float(r["alpha"]),
                "mu": float(r["mu"]),
                "residual": float(r["residual"]),
                "iterations": int(r["iterations"]),
                "converged": bool(int(r["converged"])),
                "diag_value": float(r["diag_value"]),
            })
        return out


def trace_json(tr: CurveTrace, extra: Optional[dict] = None) -> str:
    rows = [dict(zip(CSV_COLUMNS, row)) for row in trace_rows(tr)]
    for row in rows:
        for k, v in row.items():
            if isinstance(v, float) and math.isnan(v):
                row[k] = None
    doc = {
        "domain": tr.domain,
        "lambda1": tr.lambda1,
        "lambda2": tr.lambda2,
        "log": "natural",
        "points": rows,
    }
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=2, sort_keys=True)
