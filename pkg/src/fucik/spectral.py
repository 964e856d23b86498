"""Smallest Dirichlet eigenpairs of a discretized domain.

Solves ``A e = lambda W e`` with shift-invert Lanczos (ARPACK through
:func:`scipy.sparse.linalg.eigsh`).  Small problems go to a dense solver.
Eigenvectors are returned W-orthonormal; the principal one is made positive.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ConvergenceFailure, InvalidArgument
from .grid import Domain, Field

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
_DENSE_LIMIT = 400


@dataclass(frozen=True, eq=False)
class EigenPair:
    value: float
    vector: Field
    residual: float

    @property
    def values(self) -> np.ndarray:
        return self.vector.values


def _dense_pairs(d: Domain, k: int):
    A = d.A.toarray()
    lam, V = sla.eigh(A, np.diag(d.w), subset_by_index=[0, k - 1])
    return lam, V


def _sparse_pairs(d: Domain, k: int, tol: float, maxiter: int):
    W = sp.diags(d.w)
    v0 = np.ones(d.size)  # deterministic start vector
    try:
        lam, V = spla.eigsh(d.A, k=k, M=W, sigma=0.0, which="LM", tol=tol * 1e-2,
                            maxiter=maxiter, v0=v0)
    except spla.ArpackNoConvergence as exc:
        raise ConvergenceFailure(
            f"eigsh did not converge for k={k}",
            log=[f"converged {len(exc.eigenvalues)} of {k} pairs"],
        ) from exc
    order = np.argsort(lam)
    return lam[order], V[:, order]


def smallest_eigenpairs(d: Domain, k: int = 1, tol: float = DEFAULT_TOL,
                        maxiter: int = 10000) -> list:
    """First ``k`` eigenpairs in nondecreasing order.

    Raises :class:`ConvergenceFailure` when a residual exceeds ``tol`` (relative
    to the eigenvalue) or when the principal vector cannot be made positive.
    """
    if k < 1 or k >= d.size:
        raise InvalidArgument(f"k must satisfy 1 <= k < {d.size}")
    cached = d._cache.get("eig")
    if cached is not None and cached[0].size >= k and cached[2] <= tol:
        lam, V = cached[0][:k], cached[1][:, :k]
    else:
        if d.size <= _DENSE_LIMIT or k >= d.size - 1:
            lam, V = _dense_pairs(d, k)
        else:
            lam, V = _sparse_pairs(d, k, tol, maxiter)
        # eigsh returns M-orthonormal vectors only to its own tolerance
        G = V.T @ (d.w[:, None] * V)
        V = np.linalg.solve(np.linalg.cholesky(G), V.T).T
        d._cache["eig"] = (lam, V, tol)
    lam = np.array(lam, dtype=float)
    V = np.array(V, dtype=float)

    e1 = V[:, 0]
    if e1[np.argmax(np.abs(e1))] < 0:
        e1 = -e1
    V[:, 0] = e1
    if np.any(e1 <= 0):
        # tiny negatives at nodes next to the boundary are round-off
        floor = 1e-12 * np.max(np.abs(e1))
        if np.any(e1 < -floor):
            raise ConvergenceFailure("principal eigenvector is not of one sign",
                                     log=[f"min/max = {e1.min() / e1.max():.3e}"])
        V[:, 0] = np.maximum(e1, 0.0)

    pairs = []
    for i in range(k):
        v = V[:, i]
        r = d.A @ v - lam[i] * d.w * v
        res = float(np.sqrt(np.sum(r**2 / d.w)) / max(abs(lam[i]), 1.0))
        if res > max(tol, 1e-8) * 1e2:
            raise ConvergenceFailure(f"eigenpair {i} residual {res:.2e} above tolerance",
                                     log=[f"lambda={lam[i]!r}"])
        pairs.append(EigenPair(float(lam[i]), Field(d, v), res))
    return pairs


def principal(d: Domain) -> EigenPair:
    return smallest_eigenpairs(d, 1)[0]


def lambda1(d: Domain) -> float:
    return principal(d).value


def max_of_e1(d: Domain) -> float:
    return float(np.max(principal(d).values))


def e1_at(d: Domain, y) -> float:
    """Value of e1 at the node nearest to the point ``y``."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    i = int(np.argmin(((d.coords - y) ** 2).sum(axis=1)))
    return float(principal(d).values[i])
