"""Command-line entry point.

Settings are resolved in this order, later wins: built-in defaults, the
``--config`` file, command-line flags.  Exit status is 0 when every requested
check passes, 1 on a failed check or a solver failure, 2 on a bad config or
bad arguments.
"""

from __future__ import annotations

import json
import logging
import math
import os
import sys
from typing import Optional

import click
import numpy as np

from . import config as cfgmod
from . import oracle1d, plotting, spectral, tracer
from .asymptotics import AsymptoteModel, certify_upper_bound, separation_check
from .config import ConfigError, RunConfig
from .core import solve_point
from .errors import FucikError, InvalidArgument, UnsupportedDimension
from .grid import Domain, build_domain

log = logging.getLogger("fucik")

RESIDUAL_TOL = 1e-4
ORACLE_TOL = 0.01
SYMMETRY_TOL = 0.02
CROSSING_TOL = 0.02
SHOOTING_TOL = 1e-6
DECAY_WINDOW = (50.0, 200.0)


class Run:
    """Output directory plus provenance shared by every artifact of one run."""

    def __init__(self, cfg: RunConfig, d: Domain):
        self.cfg = cfg
        self.domain = d
        self.hash = cfg.digest()
        os.makedirs(cfg.out_dir, exist_ok=True)
        self.write("config.ini", cfgmod.dumps(cfg))

    @property
    def provenance(self) -> dict:
        return {"config_hash": self.hash, "domain": self.domain.to_dict()}

    @property
    def comment(self) -> str:
        return f"config_hash={self.hash} domain={self.domain.to_json()}"

    def path(self, name: str) -> str:
        return os.path.join(self.cfg.out_dir, name)

    def write(self, name: str, text: str) -> str:
        p = self.path(name)
        with open(p, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
        return p

    def write_json(self, name: str, doc: dict) -> str:
        body = dict(self.provenance)
        body.update(doc)
        return self.write(name, json.dumps(_clean(body), indent=2, sort_keys=True))


def _clean(obj):
    """JSON-safe copy: NaN and inf become null, numpy scalars become Python."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _point_line(pt) -> str:
    if pt is None:
        return "failed"
    flag = "ok" if pt.converged else "NOT CONVERGED"
    return (f"beta={pt.beta:.8g} alpha={pt.alpha:.10g} residual={pt.residual:.2e} "
            f"iterations={pt.iterations} {flag}")


def _residual_report(tr: tracer.CurveTrace) -> tracer.Report:
    res = [pt.residual for pt, ok in zip(tr.points, tr.valid) if ok]
    bad = [i for i, (pt, ok) in enumerate(zip(tr.points, tr.valid))
           if ok and not pt.residual <= RESIDUAL_TOL]
    return tracer.Report("euler_residual", not bad and bool(res),
                         value=max(res) if res else math.nan, tol=RESIDUAL_TOL, violations=bad)


def _coverage_report(tr: tracer.CurveTrace) -> tracer.Report:
    failed = [i for i, ok in enumerate(tr.valid) if not ok]
    return tracer.Report("coverage", not failed, value=tr.coverage(), violations=failed)


def _trace(run: Run, betas) -> tracer.CurveTrace:
    cfg = run.cfg
    tr = tracer.trace_curve(run.domain, betas, cfg.params(betas[0]),
                            warm_start=cfg.seeds == "warm", parallel=cfg.parallel)
    for pt in tr.points:
        click.echo(_point_line(pt))
    return tr


def _trace_artifacts(run: Run, tr: tracer.CurveTrace, name: str, reports: list,
                     reference=None) -> None:
    tracer.write_csv(tr, run.path(f"{name}.csv"), run.comment)
    extra = dict(run.provenance)
    extra["complete"] = all(tr.valid)
    extra["checks"] = [r.to_dict() for r in reports]
    run.write(f"{name}.json", tracer.trace_json(tr, _clean(extra)))
    if any(tr.valid):
        plotting.emit_plot_data(tr, run.path(f"{name}.dat"), run.comment)
        if run.cfg.figures:
            plotting.plot_trace(tr, run.path(f"{name}.png"), reference=reference,
                                title=f"first curve, {run.domain.kind}")
            if tr.dim >= 2:
                thr = None
                try:
                    thr = float(4.0 * math.pi * spectral.max_of_e1(run.domain) ** 2) \
                        if tr.dim == 2 else None
                except FucikError:
                    pass
                plotting.plot_diagnostic(tr, run.path(f"{name}_diag.png"), thr)


def _finish(reports: list) -> int:
    for r in reports:
        click.echo(r.line())
    ok = all(r.passed for r in reports if r.applicable)
    return 0 if ok else 1


def _interval_length(d: Domain) -> float:
    if d.kind != "interval":
        raise ConfigError("this command needs an interval domain", "grid.kind")
    return float(d.params["L"])


# --------------------------------------------------------------------------
# commands


def cmd_eig(run: Run) -> int:
    pairs = spectral.smallest_eigenpairs(run.domain, max(1, run.cfg.k))
    for i, ep in enumerate(pairs, 1):
        click.echo(f"lambda_{i} = {ep.value:.10g} residual={ep.residual:.2e}")
    run.write_json("eig.json", {
        "eigenvalues": [ep.value for ep in pairs],
        "residuals": [ep.residual for ep in pairs],
        "max_e1": float(np.max(pairs[0].values)),
    })
    return 0


def cmd_point(run: Run) -> int:
    beta = run.cfg.beta
    if beta is None:
        raise ConfigError("point needs a beta", "fucik_core.beta")
    pt = solve_point(run.domain, beta, run.cfg.params(beta))
    click.echo(_point_line(pt))
    doc = pt.to_dict()
    doc.update({"seed": pt.seed, "checkpoints": [list(c) for c in pt.checkpoints],
                "plus_energy": pt.plus_energy, "energy_minus": pt.energy_minus})
    run.write_json("point.json", {"point": doc})
    reports = [tracer.Report("converged", bool(pt.converged)),
               tracer.Report("euler_residual", pt.residual <= RESIDUAL_TOL,
                             value=pt.residual, tol=RESIDUAL_TOL)]
    return _finish(reports)


def _trace_grid(run: Run) -> list:
    cfg = run.cfg
    if cfg.beta_grid:
        return sorted(cfg.beta_grid)
    pairs = spectral.smallest_eigenpairs(run.domain, 2)
    lam1, lam2 = pairs[0].value, pairs[1].value
    lo = cfg.beta_min if cfg.beta_min is not None else lam2 / 1.1
    hi = cfg.beta_max if cfg.beta_max is not None else 50.0 * lam1
    if not hi > lo:
        raise ConfigError("beta_max must exceed beta_min", "tracer.beta_max")
    return tracer.geometric_grid(lo, hi, cfg.points)


def cmd_trace(run: Run) -> int:
    tr = _trace(run, _trace_grid(run))
    reports = [_coverage_report(tr), tracer.check_monotone(tr), _residual_report(tr)]
    if tr.betas[0] < tr.lambda2 < tr.betas[-1]:
        reports.append(tracer.check_lambda2_crossing(tr, tol=CROSSING_TOL))
    ref = None
    if run.domain.kind == "interval":
        L = _interval_length(run.domain)
        ref = lambda b: oracle1d.first_curve_analytic(L, b)  # noqa: E731
    _trace_artifacts(run, tr, "trace", reports, reference=ref)
    return _finish(reports)


def cmd_certify(run: Run) -> int:
    cfg = run.cfg
    d = run.domain
    if cfg.beta is None:
        raise ConfigError("certify needs a beta", "fucik_core.beta")
    y = cfg.y or [0.5] * d.dim
    if len(y) != d.dim:
        raise ConfigError(f"y must have {d.dim} coordinates", "asymptotics.y")
    p = cfg.params(cfg.beta)
    pt = solve_point(d, cfg.beta, p)
    click.echo(_point_line(pt))
    cert = certify_upper_bound(d, cfg.beta, y, p, alpha_traced=pt.alpha)
    click.echo(f"bound={cert.bound:.10g} alpha={pt.alpha:.10g} margin={cert.margin:.3e} "
               f"radius={cert.radius_used:.6g} epsilon_beta={cert.epsilon_beta:.6g}")
    run.write_json("certificate.json", {"certificate": cert.to_dict(), "log": "natural"})
    reports = [tracer.Report("certificate", cert.bound >= pt.alpha - 2 * p.point_tol,
                             value=cert.margin, tol=-2 * p.point_tol),
               tracer.Report("euler_residual", pt.residual <= RESIDUAL_TOL,
                             value=pt.residual, tol=RESIDUAL_TOL)]
    return _finish(reports)


def cmd_oracle(run: Run) -> int:
    L = _interval_length(run.domain)
    betas = run.cfg.beta_grid or tracer.geometric_grid(4.5 * (math.pi / L) ** 2,
                                                       40.0 * (math.pi / L) ** 2, 10)
    rows = oracle1d.oracle_table(L, sorted(betas))
    lines = [f"# {run.comment}", "beta,alpha_analytic,alpha_shooting"]
    worst = 0.0
    for b, a, s in rows:
        lines.append(f"{b!r},{a!r},{s!r}")
        worst = max(worst, abs(s - a) / a)
        click.echo(f"beta={b:.8g} analytic={a:.12g} shooting={s:.12g}")
    run.write("oracle.csv", "\n".join(lines))
    return _finish([tracer.Report("shooting_vs_analytic", worst <= SHOOTING_TOL,
                                  value=worst, tol=SHOOTING_TOL)])


def _validate_grid(run: Run) -> list:
    cfg = run.cfg
    d = run.domain
    if cfg.beta_grid or cfg.beta_min is not None or cfg.beta_max is not None:
        return _trace_grid(run)
    if d.kind == "interval":
        # span from the mirror image of the top point up to 40 lambda_1
        L = _interval_length(d)
        lam1 = (math.pi / L) ** 2
        hi = 40.0 * lam1
        lo = 1.001 * oracle1d.first_curve_analytic(L, hi)
        return tracer.geometric_grid(lo, hi, max(cfg.points, 40))
    if d.dim == 2:
        pairs = spectral.smallest_eigenpairs(d, 2)
        lam2 = pairs[1].value
        crossing = tracer.geometric_grid(lam2 / 1.05, lam2 * 1.05, 3)
        return crossing + tracer.geometric_grid(*DECAY_WINDOW, 8)
    return _trace_grid(run)


def cmd_validate(run: Run) -> int:
    d = run.domain
    tr = _trace(run, _validate_grid(run))
    reports = [_coverage_report(tr), tracer.check_monotone(tr), _residual_report(tr),
               tracer.check_lambda2_crossing(tr, tol=CROSSING_TOL)]
    ref = None
    if d.kind == "interval":
        L = _interval_length(d)
        ref = lambda b: oracle1d.first_curve_analytic(L, b)  # noqa: E731
        b, a = tr.converged()
        errs = [abs(aa - ref(bb)) / ref(bb) for bb, aa in zip(b, a)]
        reports.append(tracer.Report("oracle_agreement", bool(errs) and max(errs) <= ORACLE_TOL,
                                     value=max(errs) if errs else math.nan, tol=ORACLE_TOL))
        click.echo(f"max relative error vs analytic curve: {max(errs) if errs else math.nan:.3e}")
        reports.append(tracer.check_symmetry(tr, SYMMETRY_TOL))
    elif d.dim >= 2:
        diag = tracer.asymptotic_diagnostic(tr)
        reports.append(tracer.check_decay(diag, *DECAY_WINDOW))
        try:
            reports.append(separation_check(tr, AsymptoteModel.from_domain(d, 1)))
        except UnsupportedDimension as exc:
            reports.append(tracer.Report("separation", False, applicable=False,
                                         details={"reason": str(exc)}))
    _trace_artifacts(run, tr, "validate", reports, reference=ref)
    return _finish(reports)


COMMAND_FUNCS = {
    "eig": cmd_eig,
    "point": cmd_point,
    "trace": cmd_trace,
    "certify": cmd_certify,
    "oracle": cmd_oracle,
    "validate": cmd_validate,
}


def run(cfg: RunConfig) -> int:
    """Execute ``cfg.command``; returns the exit status."""
    try:
        cfg = cfg.resolved()
        try:
            d = build_domain(cfg.kind, cfg.size, cfg.n)
        except (InvalidArgument, TypeError, IndexError) as exc:
            raise ConfigError(str(exc), "grid") from exc
        r = Run(cfg, d)
        return COMMAND_FUNCS[cfg.command](r)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        return 2
    except FucikError as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        return 1


# --------------------------------------------------------------------------
# click wiring


def _floats(text: Optional[str]) -> Optional[list]:
    if text is None:
        return None
    try:
        return [float(s) for s in text.replace(",", " ").split()]
    except ValueError as exc:
        raise click.BadParameter(f"expected numbers, got {text!r}") from exc


def _ints(text: Optional[str]) -> Optional[list]:
    vals = _floats(text)
    return None if vals is None else [int(v) for v in vals]


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              help="INI file with [grid], [tracer], [solver], ... sections.")
@click.option("--kind", type=click.Choice(sorted(cfgmod.DEFAULT_N)), help="Domain shape.")
@click.option("--size", help="Side length(s) or radius, comma separated.")
@click.option("--n", "n", help="Nodes per axis, comma separated.")
@click.option("--out", "out_dir", help="Output directory.")
@click.option("--parallel/--serial", default=None, help="Cold-start points in worker threads.")
@click.option("--seeds", type=click.Choice(["warm", "cold"]), default=None)
@click.option("--point-tol", type=float, default=None)
@click.option("--max-iter", type=int, default=None)
@click.option("--figures/--no-figures", default=None)
@click.option("-v", "--verbose", count=True)
@click.pass_context
def main(ctx, config_path, kind, size, n, out_dir, parallel, seeds, point_tol, max_iter,
         figures, verbose):
    """First Fucik curve of the discrete Dirichlet Laplacian."""
    logging.basicConfig(level=logging.WARNING - 10 * min(verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        base = cfgmod.load(config_path) if config_path else RunConfig()
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        ctx.exit(2)
    solver = {}
    if point_tol is not None:
        solver["point_tol"] = point_tol
    if max_iter is not None:
        solver["max_iter"] = max_iter
    ctx.obj = dict(base=base, kind=kind, size=_floats(size), n=_ints(n), out_dir=out_dir,
                   parallel=parallel, seeds=seeds, figures=figures, solver=solver)


def _dispatch(ctx, command: str, **overrides) -> None:
    o = dict(ctx.obj)
    base = o.pop("base")
    try:
        cfg = base.merged(command=command, **o, **overrides)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        ctx.exit(2)
    ctx.exit(run(cfg))


@main.command()
@click.option("-k", type=int, default=None, help="Number of eigenpairs.")
@click.pass_context
def eig(ctx, k):
    """Smallest eigenvalues of the grid Laplacian."""
    _dispatch(ctx, "eig", k=k)


@main.command()
@click.option("--beta", type=float, default=None)
@click.pass_context
def point(ctx, beta):
    """One point (alpha, beta) of the first curve."""
    _dispatch(ctx, "point", beta=beta)


@main.command()
@click.option("--beta-min", type=float, default=None)
@click.option("--beta-max", type=float, default=None)
@click.option("--points", type=int, default=None)
@click.pass_context
def trace(ctx, beta_min, beta_max, points):
    """Sweep the first curve over a geometric beta grid."""
    _dispatch(ctx, "trace", beta_min=beta_min, beta_max=beta_max, points=points)


@main.command()
@click.option("--beta", type=float, default=None)
@click.option("--y", "y", default=None, help="Bump centre, comma separated.")
@click.pass_context
def certify(ctx, beta, y):
    """Upper bound on alpha from an explicit competitor centred at y."""
    _dispatch(ctx, "certify", beta=beta, y=_floats(y))


@main.command()
@click.option("--beta-grid", default=None, help="Comma separated beta values.")
@click.pass_context
def oracle(ctx, beta_grid):
    """Analytic and shooting values of the first curve on an interval."""
    _dispatch(ctx, "oracle", beta_grid=_floats(beta_grid))


@main.command()
@click.option("--beta-min", type=float, default=None)
@click.option("--beta-max", type=float, default=None)
@click.option("--points", type=int, default=None)
@click.pass_context
def validate(ctx, beta_min, beta_max, points):
    """Trace plus the curve-level checks for the chosen domain."""
    _dispatch(ctx, "validate", beta_min=beta_min, beta_max=beta_max, points=points)


@main.command("run")
@click.pass_context
def run_cmd(ctx):
    """Execute the command named in the config file."""
    o = dict(ctx.obj)
    base = o.pop("base")
    _dispatch(ctx, base.command)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
