"""Asymptote constants of the higher curves and test-function upper bounds.

The certificate builds an explicit competitor for the variational
characterization of ``alpha_beta``: a ball eigenfunction bump of energy
``beta`` centred at ``y``, a zero layer, a discrete harmonic transition
across an annulus of width ``eps_beta``, and ``-e1`` outside.  The Dirichlet
energy of its normalized negative part bounds ``alpha_beta`` from above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from typing import Optional

import numpy as np
import scipy.optimize as so
import scipy.sparse.linalg as spla

from . import spectral
from .errors import InfeasibleCertificate, InvalidArgument, UnsupportedDimension
from .grid import Domain, dirichlet_energy, distance_to_boundary
from .tracer import CurveTrace, Report, asymptotic_diagnostic

# first positive zero of the Bessel function J0
J0_FIRST_ZERO = 2.40482555770


def rbar1(N: int) -> float:
    """Radius of the N-ball whose principal Dirichlet eigenvalue is 1."""
    if N == 2:
        return J0_FIRST_ZERO
    if N == 3:
        return math.pi
    raise UnsupportedDimension(f"rbar1 is provided for N = 2, 3 (got {N})")


def capacity(r: float, N: int) -> float:
    """Newtonian capacity inf{int |DV|^2 : V = 1 on B(0, r), V -> 0 at infinity}.

    Equals (N - 2) |S^{N-1}| r^(N-2); for N = 3 that is 4 pi r.
    """
    if N < 3:
        raise UnsupportedDimension("the ball capacity is finite only for N >= 3")
    sphere = 2.0 * math.pi ** (N / 2.0) / math.gamma(N / 2.0)
    return (N - 2) * sphere * r ** (N - 2)


@dataclass(frozen=True)
class AsymptoteModel:
    dim: int
    rbar1: float
    cap: Optional[float]
    max_e1: float
    k: int = 1

    def __post_init__(self):
        if self.k < 1 or self.rbar1 <= 0 or self.max_e1 <= 0:
            raise InvalidArgument("asymptote model fields must be positive")

    @classmethod
    def from_domain(cls, d: Domain, k: int = 1) -> "AsymptoteModel":
        if d.dim < 2:
            raise UnsupportedDimension("no higher-curve asymptote in one dimension")
        r = rbar1(d.dim)
        return cls(d.dim, r, capacity(r, d.dim) if d.dim >= 3 else None,
                   spectral.max_of_e1(d), k)

    def with_k(self, k: int) -> "AsymptoteModel":
        return AsymptoteModel(self.dim, self.rbar1, self.cap, self.max_e1, k)


def k_curve_asymptote(m: AsymptoteModel) -> float:
    """Limit of the k-bump diagnostic: cap(rbar1) max(e1)^2 k, or 4 pi max(e1)^2 k in 2D."""
    if m.dim == 2:
        return 4.0 * math.pi * m.max_e1**2 * m.k
    if m.dim >= 3:
        return m.cap * m.max_e1**2 * m.k
    raise UnsupportedDimension("no k-curve asymptote for N = 1")


def epsilon_beta(N: int, beta: float) -> float:
    """Annulus width: beta^-q with q the midpoint of (1/2 - 1/N, 1/2) for N >= 3,
    and 1/ln(beta) for N = 2."""
    if beta <= math.e:
        raise InvalidArgument("epsilon_beta needs beta > e")
    if N == 2:
        return 1.0 / math.log(beta)
    if N >= 3:
        q = 0.5 * ((0.5 - 1.0 / N) + 0.5)
        return beta ** (-q)
    raise UnsupportedDimension("epsilon_beta is defined for N >= 2")


@dataclass
class Certificate:
    beta: float
    y: list
    radius_used: float
    epsilon_beta: float
    bound: float
    alpha_traced: Optional[float] = None
    margin: Optional[float] = None
    plus_energy: float = math.nan
    exponent: float = 1.0

    def to_dict(self) -> dict:
        out = asdict(self)
        return {k: out[k] for k in
                ("beta", "y", "radius_used", "epsilon_beta", "bound", "alpha_traced", "margin")}


def _ball_eigenvalue(d: Domain, inside: np.ndarray) -> float:
    if not inside.any():
        return math.inf
    return spectral.lambda1(d.restrict(inside))


def certify_upper_bound(d: Domain, beta: float, y, p=None,
                        alpha_traced: Optional[float] = None) -> Certificate:
    """Upper bound on ``alpha_beta`` from the explicit bump-plus-transition competitor."""
    N = d.dim
    if N < 2:
        raise UnsupportedDimension("certificates are built for N >= 2")
    y = np.atleast_1d(np.asarray(y, dtype=float))
    R0 = rbar1(N) / math.sqrt(beta)
    eb = epsilon_beta(N, beta)
    room = distance_to_boundary(d, y)
    if R0 + eb >= room:
        raise InfeasibleCertificate(
            f"B(y, {R0 + eb:.4g}) leaves the domain (distance to boundary {room:.4g})"
        )
    hmax = max(d.h)
    if R0 < 1.5 * hmax:
        raise InfeasibleCertificate("inner ball smaller than the grid stencil")

    dist = np.sqrt(((d.coords - y) ** 2).sum(axis=1))
    # smallest node-distance radius whose discrete ball eigenvalue drops to <= beta
    radii = np.unique(dist[(dist > 0.5 * R0) & (dist < min(2.0 * R0, room))])
    lo, hi = 0, radii.size - 1
    if _ball_eigenvalue(d, dist < radii[hi]) > beta:
        raise InfeasibleCertificate("no discrete ball fits with eigenvalue <= beta")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _ball_eigenvalue(d, dist < radii[mid]) <= beta:
            hi = mid
        else:
            lo = mid
    rho = float(radii[hi])
    ball = dist < rho
    sub = d.restrict(ball)
    phi = spectral.principal(sub).values

    # sharpen the bump (phi^p) so its Rayleigh quotient is exactly beta
    Asub = sub.A

    def rq(pw):
        v = phi**pw
        return float(v @ (Asub @ v)) / float(np.sum(sub.w * v**2))

    pw = 1.0
    if rq(1.0) < beta:
        p_hi = 2.0
        while rq(p_hi) < beta and p_hi < 64:
            p_hi *= 2.0
        if rq(p_hi) >= beta:
            pw = so.brentq(lambda s: rq(s) - beta, 1.0, p_hi, xtol=1e-14)
    bump = phi**pw
    bump /= math.sqrt(float(np.sum(sub.w * bump**2)))

    # zero layer: outside nodes coupled to a ball node
    coupled = np.asarray(abs(d.A[:, np.flatnonzero(ball)]).sum(axis=1)).ravel() > 0
    zero = coupled & ~ball
    r_out = rho + eb
    ann = (~ball) & (~zero) & (dist < r_out)
    ext = dist >= r_out
    e1 = spectral.principal(d).values

    ut = np.zeros(d.size)
    ut[ext] = -e1[ext]
    ia, ie = np.flatnonzero(ann), np.flatnonzero(ext)
    if ia.size:
        Aaa = d.A[ia][:, ia].tocsc()
        rhs = -(d.A[ia][:, ie] @ ut[ie])
        ut[ia] = spla.spsolve(Aaa, rhs)
    nrm2 = float(np.sum(d.w * ut**2))
    neg = -ut / math.sqrt(nrm2)  # unit-norm negative part (nonnegative values)
    bound = dirichlet_energy(d, neg)

    plus_full = np.zeros(d.size)
    plus_full[ball] = bump
    cert = Certificate(
        beta=float(beta),
        y=y.tolist(),
        radius_used=rho,
        epsilon_beta=eb,
        bound=bound,
        plus_energy=dirichlet_energy(d, plus_full),
        exponent=float(pw),
    )
    if alpha_traced is not None:
        cert.alpha_traced = float(alpha_traced)
        cert.margin = bound - float(alpha_traced)
    return cert


def separation_check(tr: CurveTrace, m: AsymptoteModel) -> Report:
    """The first-curve diagnostic stays below the k-curve limit over the last decade of beta."""
    diag = asymptotic_diagnostic(tr, m.dim)
    if not diag:
        return Report("separation", False, applicable=False)
    bmax = diag[-1][0]
    tail = [(b, v) for b, v in diag if b >= bmax / 10.0]
    if len(tail) < 2:
        return Report("separation", False, applicable=False,
                      details={"reason": "fewer than two tail points"})
    thr = k_curve_asymptote(m)
    bad = [i for i, (_, v) in enumerate(tail) if not v < thr]
    return Report("separation", passed=not bad, value=max(v for _, v in tail), tol=thr,
                  violations=bad, details={"k": m.k, "betas": [b for b, _ in tail]})
