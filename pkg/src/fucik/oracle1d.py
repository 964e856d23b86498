"""Ground truth on an interval (0, L).

On an interval the first curve is explicit: a solution is one negative
half-sine of width pi/sqrt(alpha) followed by one positive half-sine of width
pi/sqrt(beta), so pi/sqrt(alpha) + pi/sqrt(beta) = L.  The shooting solver
recovers the same curve from the ODE without using that formula.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numba
import numpy as np

from .errors import InvalidArgument, OutOfRange

SHOOT_STEPS = 100_000


@dataclass(frozen=True)
class ShootingResult:
    alpha: float
    beta: float
    node: float  # position of the interior zero
    mismatch: float  # u(L)
    pattern: str


def first_curve_analytic(L: float, beta: float) -> float:
    if not L > 0:
        raise InvalidArgument("L must be positive")
    if not beta > (math.pi / L) ** 2:
        raise OutOfRange(f"beta must exceed (pi/L)^2 = {(math.pi / L) ** 2:.6g}")
    return math.pi**2 / (L - math.pi / math.sqrt(beta)) ** 2


@numba.njit(cache=True)
def _rk4(L, first, second, slope0, steps):
    """Integrate u'' = -k(u) u with k = first on the leading sign, second after.

    Returns (u(L), number of sign changes, position of the first change).
    ``slope0`` fixes the leading sign (-1 or +1).
    """
    h = L / steps
    u = 0.0
    v = slope0
    sgn0 = 1.0 if slope0 > 0 else -1.0
    changes = 0
    node = -1.0
    x = 0.0
    for _ in range(steps):
        # coefficient depends only on the sign of u relative to the leading sign
        k1u = v
        k1v = -(first if u * sgn0 >= 0 else second) * u
        u2 = u + 0.5 * h * k1u
        v2 = v + 0.5 * h * k1v
        k2u = v2
        k2v = -(first if u2 * sgn0 >= 0 else second) * u2
        u3 = u + 0.5 * h * k2u
        v3 = v + 0.5 * h * k2v
        k3u = v3
        k3v = -(first if u3 * sgn0 >= 0 else second) * u3
        u4 = u + h * k3u
        v4 = v + h * k3v
        k4u = v4
        k4v = -(first if u4 * sgn0 >= 0 else second) * u4
        un = u + h * (k1u + 2 * k2u + 2 * k3u + k4u) / 6.0
        v = v + h * (k1v + 2 * k2v + 2 * k3v + k4v) / 6.0
        if x > 0 and un * u < 0:
            changes += 1
            if node < 0:
                node = x + h * u / (u - un)
        u = un
        x += h
    return u, changes, node


def shoot_first_curve(L: float, beta: float, tol: float = 1e-10,
                      pattern: str = "-+", steps: int = SHOOT_STEPS) -> ShootingResult:
    """Bisection on alpha for u'' = alpha u^- - beta u^+, u(0) = u(L) = 0.

    ``pattern="-+"`` starts with u'(0) = -1 (negative hump first), ``"+-"``
    with u'(0) = +1.  The accepted solution has exactly one interior zero.
    """
    if pattern not in ("-+", "+-"):
        raise InvalidArgument("pattern must be '-+' or '+-'")
    if not beta > (math.pi / L) ** 2:
        raise OutOfRange(f"beta must exceed (pi/L)^2 = {(math.pi / L) ** 2:.6g}")
    room = L - math.pi / math.sqrt(beta)
    lo = (math.pi / L) ** 2
    hi = (2.0 * math.pi / room) ** 2
    slope0 = -1.0 if pattern == "-+" else 1.0

    def run(alpha):
        # on u < 0, u'' = alpha u^- = -alpha u; on u > 0, u'' = -beta u
        first, second = (alpha, beta) if pattern == "-+" else (beta, alpha)
        return _rk4(L, first, second, slope0, steps)

    def too_small(alpha):
        uL, changes, _ = run(alpha)
        # still inside the second hump (or never left the first): alpha must grow
        return changes == 0 or (changes == 1 and uL * slope0 < 0)

    if not too_small(lo * (1 + 1e-12)) or too_small(hi):
        raise OutOfRange(f"no first-curve root bracketed for beta={beta:.6g}")
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        if too_small(mid):
            lo = mid
        else:
            hi = mid
    alpha = 0.5 * (lo + hi)
    uL, _, node = run(alpha)
    return ShootingResult(alpha=alpha, beta=float(beta), node=node, mismatch=uL, pattern=pattern)


def oracle_table(L: float, betas, path=None, tol: float = 1e-10) -> list:
    """Rows (beta, alpha_analytic, alpha_shooting); written as CSV when ``path`` is given."""
    rows = [(float(b), first_curve_analytic(L, b), shoot_first_curve(L, b, tol).alpha)
            for b in betas]
    if path is not None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            wr = csv.writer(fh, lineterminator="\n")
            wr.writerow(["beta", "alpha_analytic", "alpha_shooting"])
            for r in rows:
                wr.writerow([repr(x) for x in r])
    return rows
