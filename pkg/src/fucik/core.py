"""Regularized constrained minimization for the first Fucik curve.

For ``beta > lambda_1`` and ``eps > 0`` the functional

    f(u) = u^T A u - 2 sum_i w_i G(u_i),   G(t) = beta/2 * ((t - eps)^+)^2,

is minimized over the set of fields with ``||u^-|| = 1`` whose positive part
sits at the critical scale of the fiber ``t -> f(-u^- + t u^+)``.  A minimizer
solves ``A u = W (g(u) - alpha u^-)`` with ``alpha = -<A u, u^->``.  Letting
``eps`` decrease to a floor and finishing with a semismooth Newton solve of
the ``eps = 0`` equation gives a point ``(alpha_beta, beta)`` of the curve
together with its eigenfunction.

Energies of the sign parts attribute the coupling of sign-change edges to
both parts: ``E+(u) = <A u, u^+>`` and ``E-(u) = -<A u, u^->``, so that
``E+ + E- = u^T A u`` exactly.  ``alpha`` is ``E-`` of the normalized
minimizer; the plain quadratic form of ``u^-`` is reported alongside.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import spectral
from .errors import (
    ConvergenceFailure,
    DegenerateDomain,
    DegenerateSign,
    FiberInfeasible,
    InvalidArgument,
    OutOfRange,
    ReseedRequired,
)
from .grid import Domain, Field, dirichlet_energy, minus, plus, values_of

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FucikParams:
    beta: float
    eps: float = 1e-3
    fiber_tol: float = 1e-12
    stationarity_tol: float = 1e-3
    stage_tol: float = 1e-2
    point_tol: float = 1e-6
    max_iter: int = 3000
    eps0: Optional[float] = None  # default: 0.1 * max(seed^+)
    eps_decay: float = 0.5
    eps_min: Optional[float] = None  # default: max(1e-8, h^2)
    warm_eps_factor: float = 1e-2
    step0: float = 1.0
    armijo: float = 1e-4
    polish: bool = True
    eig_tol: float = spectral.DEFAULT_TOL
    seed_fraction: float = 0.7
    keep_seeds: int = 2
    min_support: int = 3
    conjugate: bool = True

    def __post_init__(self):
        if self.eps < 0:
            raise InvalidArgument("eps must be nonnegative")
        if not 0 < self.eps_decay < 1:
            raise InvalidArgument("eps_decay must lie in (0, 1)")
        if self.eps_min is not None and self.eps_min < 0:
            raise InvalidArgument("eps_min must be nonnegative")

    def with_eps(self, eps: float) -> "FucikParams":
        return replace(self, eps=float(eps))

    def with_beta(self, beta: float) -> "FucikParams":
        return replace(self, beta=float(beta))

    def eps_floor(self, d: Domain) -> float:
        if self.eps_min is not None:
            return self.eps_min
        return max(1e-8, max(d.h) ** 2)

    def schedule(self, d: Domain, start: float) -> list:
        """Strictly decreasing eps values from ``start`` down to the floor."""
        floor = self.eps_floor(d)
        eps = [float(start)]
        while eps[-1] * self.eps_decay > floor:
            eps.append(eps[-1] * self.eps_decay)
        if eps[-1] > floor:
            eps.append(floor)
        return eps


@dataclass
class RegularizedState:
    domain: Domain
    params: FucikParams
    u: np.ndarray
    f: float
    alpha: float  # Lagrange multiplier -<A u, u^->
    energy_minus: float  # plain u^-^T A u^-
    residual: float = math.inf
    iterations: int = 0
    on_M: bool = True

    @property
    def field(self) -> Field:
        return Field(self.domain, self.u)


@dataclass
class SpectrumPoint:
    beta: float
    alpha: float
    u: Field
    mu: float
    residual: float
    converged: bool
    eps_final: float
    iterations: int
    energy_minus: float = math.nan
    plus_energy: float = math.nan  # <A u, u^+> / mu^2, equal to beta at a solution
    checkpoints: list = field(default_factory=list)  # (eps, alpha) per stage
    seed: str = ""

    def to_dict(self) -> dict:
        return {
            "beta": self.beta,
            "alpha": self.alpha,
            "mu": self.mu,
            "residual": self.residual,
            "epsilon_final": self.eps_final,
            "iterations": self.iterations,
            "converged": bool(self.converged),
        }

    @property
    def normalized(self) -> np.ndarray:
        """The minimizer with both sign parts of unit L2 norm."""
        v = self.u.values
        return -minus(v) + plus(v) / self.mu


# --------------------------------------------------------------------------
# nonlinearity


def g_eval(beta, eps, tau):
    tau = np.asarray(tau, dtype=float)
    out = np.where(tau > eps, beta * (tau - eps), 0.0)
    return float(out) if out.ndim == 0 else out


def G_eval(beta, eps, tau):
    tau = np.asarray(tau, dtype=float)
    out = np.where(tau > eps, 0.5 * beta * (tau - eps) ** 2, 0.0)
    return float(out) if out.ndim == 0 else out


def f_value(d: Domain, p: FucikParams, u) -> float:
    v = values_of(d, u)
    return dirichlet_energy(d, v) - 2.0 * float(np.sum(d.w * G_eval(p.beta, p.eps, v)))


def f_gradient(d: Domain, p: FucikParams, u) -> np.ndarray:
    v = values_of(d, u)
    return 2.0 * (d.A @ v - d.w * g_eval(p.beta, p.eps, v))


def split_energies(d: Domain, u) -> tuple:
    """``(E+, E-)`` with sign-change edges attributed to both parts."""
    v = values_of(d, u)
    Av = d.A @ v
    return float(Av @ plus(v)), float(-(Av @ minus(v)))


def lagrange_alpha(d: Domain, u) -> float:
    v = values_of(d, u)
    um = minus(v)
    return float(-(d.A @ v) @ um / np.sum(d.w * um**2))


# --------------------------------------------------------------------------
# fiber map


def fiber_derivative(d: Domain, p: FucikParams, u, t) -> np.ndarray:
    """d/dt f(-u^- + t u^+), vectorized over ``t``."""
    v = values_of(d, u)
    um, up = minus(v), plus(v)
    Aup = d.A @ up
    c = float(um @ Aup)
    a = float(up @ Aup)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    nl = np.array([np.sum(d.w * g_eval(p.beta, p.eps, tt * up) * up) for tt in t])
    out = 2.0 * (-c + t * a - nl)
    return out if out.size > 1 else float(out[0])


def fiber_scale(d: Domain, p: FucikParams, u) -> float:
    """Unique ``t > 0`` where the fiber derivative vanishes.

    The derivative is piecewise linear in ``t`` with breakpoints ``eps / u_i``;
    the pieces are scanned in order and the root of the bracketing piece is
    solved for exactly.
    """
    v = values_of(d, u)
    um, up = minus(v), plus(v)
    pos = up > 0
    if not pos.any():
        raise DegenerateSign("positive part is identically zero")
    Aup = d.A @ up
    c = -float(um @ Aup)  # >= 0: coupling through sign-change edges
    a = float(up @ Aup)
    beta, eps = p.beta, p.eps
    vals = up[pos]
    wts = d.w[pos]
    if a - beta * float(np.sum(wts * vals**2)) >= 0:
        raise FiberInfeasible(
            f"fiber derivative stays positive: Rayleigh quotient of u+ is "
            f"{a / np.sum(wts * vals**2):.6g} >= beta = {beta:.6g}"
        )
    if eps == 0:
        if c <= 0:
            raise FiberInfeasible("eps = 0 and the sign parts do not interact")
        return c / (beta * float(np.sum(wts * vals**2)) - a)
    order = np.argsort(-vals, kind="stable")
    vals, wts = vals[order], wts[order]
    S1 = np.concatenate([[0.0], np.cumsum(wts * vals)])
    S2 = np.concatenate([[0.0], np.cumsum(wts * vals**2)])
    breaks = np.concatenate([[0.0], eps / vals, [np.inf]])
    # on piece k (k nodes active) phi/2 = (c + beta eps S1_k) + t (a - beta S2_k)
    slope = a - beta * S2
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (c + beta * eps * S1) / (-slope)
    ok = (slope < 0) & (t >= breaks[:-1]) & (t <= breaks[1:])
    if ok.any():
        return float(t[np.argmax(ok)])
    raise FiberInfeasible("no sign change of the fiber derivative found")


def project_to_M(d: Domain, p: FucikParams, u) -> RegularizedState:
    v = values_of(d, u)
    um, up = minus(v), plus(v)
    if not um.any():
        raise DegenerateSign("negative part is identically zero")
    if not up.any():
        raise DegenerateSign("positive part is identically zero")
    nrm = math.sqrt(float(np.sum(d.w * um**2)))
    base = -um / nrm
    t = fiber_scale(d, p, base + up)
    out = base + t * up
    return _state(d, p, out)


def _state(d: Domain, p: FucikParams, u: np.ndarray, iterations: int = 0) -> RegularizedState:
    Au = d.A @ u
    um = minus(u)
    Gsum = float(np.sum(d.w * G_eval(p.beta, p.eps, u)))
    return RegularizedState(
        domain=d,
        params=p,
        u=u,
        f=float(u @ Au) - 2.0 * Gsum,
        alpha=float(-(Au @ um) / np.sum(d.w * um**2)),
        energy_minus=float(um @ (d.A @ um)),
        iterations=iterations,
    )


def regularized_residual(d: Domain, p: FucikParams, u: np.ndarray, alpha: float) -> float:
    """Relative L2 residual of ``-Delta u = g(u) - alpha u^-``."""
    rhs = g_eval(p.beta, p.eps, u) - alpha * minus(u)
    r = d.A @ u - d.w * rhs
    scale = math.sqrt(float(np.sum(d.w * rhs**2))) or 1.0
    return math.sqrt(float(np.sum(r**2 / d.w))) / scale


def residual_norm(d: Domain, u, alpha: float, beta: float) -> float:
    """Relative L2 residual of ``Delta u - alpha u^- + beta u^+ = 0``.

    The nodal defect ``-Delta_h u - beta u^+ + alpha u^-`` is measured in the
    discrete L2 norm and divided by the L2 norm of ``beta u^+ + alpha u^-``.
    """
    v = values_of(d, u)
    rhs = beta * plus(v) - alpha * minus(v)
    r = d.A @ v - d.w * rhs
    scale = math.sqrt(float(np.sum(d.w * rhs**2)))
    if scale == 0:
        scale = 1.0
    return math.sqrt(float(np.sum(r**2 / d.w))) / scale


# --------------------------------------------------------------------------
# descent on M


def _factor(d: Domain):
    lu = d._cache.get("splu")
    if lu is None:
        lu = spla.splu(d.A.tocsc(), permc_spec="MMD_AT_PLUS_A",
                       options={"SymmetricMode": True})
        d._cache["splu"] = lu
    return lu


def minimize_on_M(d: Domain, p: FucikParams, state: RegularizedState,
                  tol: Optional[float] = None, max_iter: Optional[int] = None) -> RegularizedState:
    """Sobolev-gradient descent of f restricted to M with Armijo backtracking.

    The search direction is ``A^{-1}`` applied to the Euler residual
    ``A u - W (g(u) - alpha u^-)``; every trial point is projected back onto
    M.  A unit step is a nonlinear inverse-iteration sweep.
    """
    tol = p.stationarity_tol if tol is None else tol
    max_iter = p.max_iter if max_iter is None else max_iter
    lu = _factor(d)
    st = state
    step = p.step0
    prev = None  # (r, z, direction) of the last accepted step
    for it in range(max_iter + 1):
        u = st.u
        um = minus(u)
        rhs = g_eval(p.beta, p.eps, u) - st.alpha * um
        r = d.A @ u - d.w * rhs
        scale = math.sqrt(float(np.sum(d.w * rhs**2))) or 1.0
        st.residual = math.sqrt(float(np.sum(r**2 / d.w))) / scale
        st.iterations = state.iterations + it
        if np.count_nonzero(u > 0) < p.min_support:
            raise ReseedRequired("positive support shrank below the stencil size", state=st)
        if st.residual <= tol:
            return st
        if it == max_iter:
            break
        z = lu.solve(r)
        rz = float(r @ z)
        dvec = z
        if prev is not None and p.conjugate:
            r0, z0, d0 = prev
            pr = max(0.0, float(r @ (z - z0)) / float(r0 @ z0))
            cand = z + pr * d0
            if float(r @ cand) > 0.1 * rz ** 0.5 * float(cand @ (d.A @ cand)) ** 0.5:
                dvec = cand
        slope = 2.0 * float(r @ dvec)
        s = min(p.step0 * 4, 2.0 * step)
        accepted = None
        while s > 1e-10:
            try:
                trial = project_to_M(d, p, u - s * dvec)
            except (FiberInfeasible, DegenerateSign):
                s *= 0.5
                continue
            if trial.f <= st.f - p.armijo * s * slope:
                accepted = trial
                break
            s *= 0.5
        if accepted is None:
            if dvec is not z:
                prev = None
                continue
            log.debug("line search stalled at residual %.3e", st.residual)
            break
        step = s
        prev = (r, z, dvec)
        accepted.iterations = st.iterations + 1
        st = accepted
    raise ConvergenceFailure(
        f"descent stopped at residual {st.residual:.3e} after {st.iterations} iterations",
        state=st,
    )


# --------------------------------------------------------------------------
# eps = 0 polish


def newton_polish(d: Domain, beta: float, u: np.ndarray, alpha: float,
                  tol: float = 1e-10, max_iter: int = 30):
    """Semismooth Newton for ``A u = W (beta u^+ - alpha u^-)``, ``||u^-|| = 1``.

    Returns ``(u, alpha, residual)``; raises ConvergenceFailure on stagnation.
    """
    w = d.w
    u = u.copy()

    def F(u, alpha):
        um = minus(u)
        r1 = d.A @ u - w * (beta * plus(u) - alpha * um)
        r2 = 0.5 * (1.0 - float(np.sum(w * um**2)))
        return r1, r2

    def merit(r1, r2):
        return math.sqrt(float(np.sum(r1**2 / w)) + r2**2)

    r1, r2 = F(u, alpha)
    m = merit(r1, r2)
    for _ in range(max_iter):
        res = residual_norm(d, u, alpha, beta)
        if res <= tol and abs(r2) <= tol:
            return u, alpha, res
        um = minus(u)
        diag = beta * (u > 0) + alpha * (u < 0)
        J11 = (d.A - sp.diags(w * diag)).tocsc()
        col = sp.csc_matrix((w * um)[:, None])
        J = sp.bmat([[J11, col], [col.T, None]], format="csc")
        try:
            delta = spla.splu(J, permc_spec="MMD_AT_PLUS_A").solve(-np.concatenate([r1, [r2]]))
        except RuntimeError as exc:
            raise ConvergenceFailure(f"singular Newton system: {exc}") from exc
        if not np.all(np.isfinite(delta)):
            raise ConvergenceFailure("singular Newton system")
        du, da = delta[:-1], float(delta[-1])
        s = 1.0
        while s > 1e-4:
            un, an = u + s * du, alpha + s * da
            n1, n2 = F(un, an)
            mn = merit(n1, n2)
            if mn < (1 - 1e-4 * s) * m:
                break
            s *= 0.5
        else:
            raise ConvergenceFailure(f"Newton stagnated at residual {res:.3e}")
        u, alpha, r1, r2, m = un, an, n1, n2, mn
    res = residual_norm(d, u, alpha, beta)
    if res <= tol:
        return u, alpha, res
    raise ConvergenceFailure(f"Newton hit the iteration cap at residual {res:.3e}")


# --------------------------------------------------------------------------
# seeds


def seed_feasible(d: Domain, x0, r: float, p: Optional[FucikParams] = None) -> Field:
    """Glued seed: ``-e1`` of Omega minus B(x0, r) and ``+e1`` of Omega inside it."""
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    if not r > 0:
        raise InvalidArgument("seed radius must be positive")
    dist = np.sqrt(((d.coords - x0) ** 2).sum(axis=1))
    inner = dist < r
    if not inner.any() or inner.all():
        raise DegenerateDomain(f"radius {r} leaves an empty piece around {x0.tolist()}")
    e_out = spectral.principal(d.restrict(~inner)).values
    e_in = spectral.principal(d.restrict(inner)).values
    u = np.zeros(d.size)
    u[~inner] = -e_out
    u[inner] = e_in
    return Field(d, u)


def cap_eigenvalue(d: Domain, x0, r: float) -> float:
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    dist = np.sqrt(((d.coords - x0) ** 2).sum(axis=1))
    inner = dist < r
    if not inner.any():
        return math.inf
    if inner.all():
        return spectral.lambda1(d)
    return spectral.lambda1(d.restrict(inner))


def choose_seed_radius(d: Domain, x0, beta: float, fraction: float = 0.7,
                       max_evals: int = 12) -> float:
    """Radius whose cap ``Omega ∩ B(x0, r)`` has first eigenvalue near ``fraction*beta``.

    Secant steps in log-log coordinates (eigenvalues scale like r^-2).
    """
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    target = fraction * beta
    dist = np.sqrt(((d.coords - x0) ** 2).sum(axis=1))
    r_hi = float(np.sort(dist)[-2])  # keep at least one node outside
    r_lo = float(np.sort(dist)[min(2, dist.size - 1)]) * 1.0001
    r = min(r_hi, max(r_lo, math.pi / math.sqrt(target)))
    lam = cap_eigenvalue(d, x0, r)
    best = (abs(math.log(lam / target)), r)
    for _ in range(max_evals):
        if 0.75 * target <= lam <= 1.2 * target and lam < beta:
            return r
        r_new = r * math.sqrt(lam / target) if math.isfinite(lam) else 2.0 * r
        r_new = min(r_hi, max(r_lo, r_new))
        if abs(r_new - r) < 1e-12 * r:
            break
        r = r_new
        lam = cap_eigenvalue(d, x0, r)
        best = min(best, (abs(math.log(lam / target)), r))
    r = best[1]
    if cap_eigenvalue(d, x0, r) >= beta:
        raise FiberInfeasible(f"no seed radius at {x0.tolist()} gives a cap eigenvalue below beta")
    return r


def default_seeds(d: Domain, beta: float, p: FucikParams) -> list:
    """Boundary-cap seeds at every representative boundary point, plus e2-based seeds."""
    from .grid import boundary_points

    seeds = []
    for x0 in boundary_points(d):
        try:
            r = choose_seed_radius(d, x0, beta, p.seed_fraction)
            seeds.append((f"cap@{np.round(x0, 6).tolist()}", seed_feasible(d, x0, r).values))
        except (FiberInfeasible, DegenerateDomain) as exc:
            log.debug("skipping seed at %s: %s", x0, exc)
    try:
        e2 = spectral.smallest_eigenpairs(d, 2, p.eig_tol)[1].values
        seeds.append(("e2", e2.copy()))
        seeds.append(("-e2", -e2))
    except Exception as exc:  # degenerate grids
        log.debug("no e2 seed: %s", exc)
    return seeds


# --------------------------------------------------------------------------
# continuation


def _continuation(d: Domain, p: FucikParams, u0: np.ndarray, start_eps: float,
                  stop_after: Optional[int] = None):
    """Run the eps schedule from ``u0``; returns (state, checkpoints, iterations)."""
    sched = p.schedule(d, start_eps)
    if stop_after is not None:
        sched = sched[:stop_after]
    checkpoints = []
    st = None
    total = 0
    u = u0
    for k, eps in enumerate(sched):
        pe = p.with_eps(eps)
        st = project_to_M(d, pe, u)
        last = k == len(sched) - 1 and stop_after is None
        tol = p.stationarity_tol if last else p.stage_tol
        try:
            st = minimize_on_M(d, pe, st, tol=tol)
        except ConvergenceFailure as exc:
            if exc.state is None:
                raise
            st = exc.state
            if last:
                log.info("final eps stage stopped at residual %.2e", st.residual)
        total += st.iterations
        checkpoints.append((eps, st.alpha))
        u = st.u
    return st, checkpoints, total


def _finish(d: Domain, beta: float, p: FucikParams, st: RegularizedState,
            checkpoints: list, iterations: int, seed: str) -> SpectrumPoint:
    u, alpha = st.u, st.alpha
    eps_final = st.params.eps
    if p.polish:
        try:
            un, an, _ = newton_polish(d, beta, u, alpha, tol=min(1e-10, p.point_tol))
            if (abs(an - alpha) <= 0.05 * abs(alpha) and np.any(un > 0)
                    and np.count_nonzero(un > 0) >= p.min_support):
                u, alpha, eps_final = un, an, 0.0
            else:
                log.info("polish moved alpha from %.6g to %.6g; kept the eps solution", alpha, an)
        except ConvergenceFailure as exc:
            log.info("polish failed: %s", exc)
    mu = math.sqrt(float(np.sum(d.w * plus(u) ** 2)))
    res = residual_norm(d, u, alpha, beta)
    return SpectrumPoint(
        beta=float(beta),
        alpha=float(alpha),
        u=Field(d, u),
        mu=mu,
        residual=res,
        converged=bool(res <= p.point_tol),
        eps_final=float(eps_final),
        iterations=int(iterations),
        energy_minus=float(minus(u) @ (d.A @ minus(u))),
        plus_energy=split_energies(d, u)[0] / mu**2,
        checkpoints=checkpoints,
        seed=seed,
    )


def guard_band(d: Domain, p: FucikParams) -> float:
    return spectral.lambda1(d) + 10.0 * p.eig_tol * max(1.0, spectral.lambda1(d))


def solve_point(d: Domain, beta: float, p: Optional[FucikParams] = None,
                warm=None, seeds: Optional[Sequence] = None) -> SpectrumPoint:
    """Point ``(alpha_beta, beta)`` of the first curve.

    With ``warm`` the continuation restarts from that field at a small eps;
    otherwise every seed runs the first eps stage, the ``keep_seeds`` best
    (smallest multiplier) finish the schedule, and the smallest final alpha
    wins.
    """
    p = FucikParams(beta=beta) if p is None else p.with_beta(beta)
    lam1 = spectral.lambda1(d)
    if not beta > guard_band(d, p):
        raise OutOfRange(
            f"beta = {beta:.6g} must exceed lambda_1 = {lam1:.6g} (plus guard band); "
            "the constrained set is empty there and alpha_beta blows up as beta -> lambda_1"
        )
    if warm is not None:
        u0 = values_of(d, warm)
        try:
            start = max(p.eps_floor(d), p.warm_eps_factor * float(np.max(plus(u0))))
            st, cps, its = _continuation(d, p, u0, start)
            return _finish(d, beta, p, st, cps, its, "warm")
        except (FiberInfeasible, DegenerateSign, ReseedRequired) as exc:
            log.info("warm start at beta=%.6g failed (%s); reseeding", beta, exc)

    if seeds is None:
        seeds = default_seeds(d, beta, p)
    else:
        seeds = [(s[0], values_of(d, s[1])) if isinstance(s, tuple) else ("user", values_of(d, s))
                 for s in seeds]
    if not seeds:
        raise FiberInfeasible(f"no feasible seed for beta = {beta:.6g}")

    screened = []
    for name, u0 in seeds:
        eps0 = p.eps0 if p.eps0 is not None else 0.1 * float(np.max(plus(u0)))
        try:
            st, cps, its = _continuation(d, p, u0, eps0, stop_after=1)
        except (FiberInfeasible, DegenerateSign, ReseedRequired) as exc:
            log.debug("seed %s dropped: %s", name, exc)
            continue
        screened.append((st.alpha, name, st, cps, its, eps0))
    if not screened:
        raise FiberInfeasible(f"every seed failed at beta = {beta:.6g}")
    screened.sort(key=lambda item: item[0])

    best = None
    for _, name, st, cps, its, eps0 in screened[: max(1, p.keep_seeds)]:
        sched = p.schedule(d, eps0)
        try:
            if len(sched) > 1:
                st2, cps2, its2 = _continuation(d, p, st.u, sched[1])
            else:
                st2, cps2, its2 = st, [], 0
        except (FiberInfeasible, DegenerateSign, ReseedRequired) as exc:
            log.debug("seed %s lost during continuation: %s", name, exc)
            continue
        pt = _finish(d, beta, p, st2, cps + cps2, its + its2, name)
        if best is None or (pt.converged, -pt.alpha) > (best.converged, -best.alpha):
            best = pt
    if best is None:
        raise ConvergenceFailure(f"no seed survived the continuation at beta = {beta:.6g}")
    return best
