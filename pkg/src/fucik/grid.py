"""Finite-difference Dirichlet Laplacians on Cartesian grids.

A :class:`Domain` stores the stiffness form ``A`` (so that ``u @ A @ u``
approximates the Dirichlet integral of ``u``) and lumped mass weights ``w``
(so that ``sum(w * u * v)`` approximates the L2 product).  Boundary nodes are
eliminated; a field is the vector of its values at the interior nodes.

Intervals and rectangles use trapezoid weights with the weight of each
eliminated boundary node folded into its interior neighbour, which makes the
total mass exact for every resolution.  Balls are masked boxes with a
staircase boundary: every box node strictly inside the ball is an unknown and
every stencil neighbour outside it is a Dirichlet zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import DegenerateDomain, DomainMismatch, InvalidArgument


@dataclass(frozen=True, eq=False)
class Domain:
    dim: int
    kind: str
    params: dict
    shape: tuple  # nodes per axis of the underlying box grid
    h: tuple
    coords: np.ndarray  # (m, dim) coordinates of the interior nodes
    index: np.ndarray  # flat box-grid index of each interior node
    A: sp.csr_matrix
    w: np.ndarray
    boundary: str = "dirichlet"
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def size(self) -> int:
        return self.w.shape[0]

    @property
    def volume(self) -> float:
        return float(self.w.sum())

    def to_dict(self) -> dict:
        return {
            "dimension": self.dim,
            "kind": self.kind,
            "params": {k: _jsonable(v) for k, v in self.params.items()},
            "n": list(self.shape),
            "h": [float(x) for x in self.h],
            "interior_nodes": int(self.size),
            "boundary": self.boundary,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def field(self, values) -> "Field":
        return Field(self, np.asarray(values, dtype=float))

    def zeros(self) -> "Field":
        return Field(self, np.zeros(self.size))

    def sample(self, fn) -> "Field":
        """Evaluate ``fn`` at the interior nodes (one array argument per axis)."""
        return Field(self, np.asarray(fn(*self.coords.T), dtype=float) * np.ones(self.size))

    def restrict(self, mask) -> "Domain":
        """Subdomain made of the nodes where ``mask`` is true.

        Removed nodes act as homogeneous Dirichlet data for the kept ones.
        """
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (self.size,):
            raise DomainMismatch("mask length does not match the domain")
        if not mask.any():
            raise DegenerateDomain("subdomain contains no interior node")
        keep = np.flatnonzero(mask)
        A = self.A[keep][:, keep].tocsr()
        return Domain(
            dim=self.dim,
            kind="masked",
            params={"parent": self.kind, **self.params},
            shape=self.shape,
            h=self.h,
            coords=self.coords[keep],
            index=self.index[keep],
            A=A,
            w=self.w[keep],
        )


def _jsonable(v: Any):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, (tuple, list, np.ndarray)):
        return [_jsonable(x) for x in v]
    return v


@dataclass(frozen=True, eq=False)
class Field:
    """Nodal values of a grid function together with the domain they live on."""

    domain: Domain
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.domain.size,):
            raise DomainMismatch(
                f"field has {self.values.shape} values, domain has {self.domain.size} nodes"
            )

    @property
    def plus(self) -> np.ndarray:
        return np.maximum(self.values, 0.0)

    @property
    def minus(self) -> np.ndarray:
        return np.maximum(-self.values, 0.0)

    def norm(self) -> float:
        return float(np.sqrt(l2_inner(self.domain, self, self)))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)


def values_of(d: Domain, u) -> np.ndarray:
    """Nodal array of ``u`` after checking that it belongs to ``d``."""
    if isinstance(u, Field):
        if u.domain is not d:
            raise DomainMismatch("field belongs to a different domain")
        return u.values
    arr = np.asarray(u, dtype=float)
    if arr.shape != (d.size,):
        raise DomainMismatch(f"expected {d.size} nodal values, got shape {arr.shape}")
    return arr


def plus(u: np.ndarray) -> np.ndarray:
    return np.maximum(u, 0.0)


def minus(u: np.ndarray) -> np.ndarray:
    return np.maximum(-u, 0.0)


# --------------------------------------------------------------------------
# assembly


def _stiffness_1d(n: int, h: float) -> sp.csr_matrix:
    e = np.ones(n)
    return sp.diags([-e[:-1], 2.0 * e, -e[:-1]], [-1, 0, 1], format="csr") / h


def _weights_1d(n: int, h: float) -> np.ndarray:
    w = np.full(n, h)
    # fold the trapezoid weight h/2 of each eliminated endpoint into its neighbour
    w[0] += 0.5 * h
    w[-1] += 0.5 * h
    return w


def _box_stiffness(ns: Sequence[int], hs: Sequence[float]) -> sp.csr_matrix:
    """Kronecker assembly of h^N times the negative 5/7-point Laplacian.

    Axis 0 varies fastest in the flat ordering.
    """
    dim = len(ns)
    A = None
    for axis in range(dim):
        term = None
        for k in reversed(range(dim)):
            if k == axis:
                blk = _stiffness_1d(ns[k], hs[k])
            else:
                blk = sp.identity(ns[k], format="csr") * hs[k]
            term = blk if term is None else sp.kron(term, blk, format="csr")
        A = term if A is None else A + term
    return A.tocsr()


def _box_coords(axes: Sequence[np.ndarray]) -> np.ndarray:
    mesh = np.meshgrid(*axes, indexing="ij")
    # flat order with axis 0 fastest, matching _box_stiffness
    return np.stack([m.ravel(order="F") for m in mesh], axis=1)


def build_interval(L: float, n: int) -> Domain:
    """Uniform grid on (0, L) with ``n`` interior nodes and spacing L/(n+1)."""
    if not L > 0:
        raise InvalidArgument("interval length must be positive")
    if int(n) != n or n < 3:
        raise InvalidArgument("need at least 3 interior nodes")
    n = int(n)
    h = L / (n + 1)
    x = h * np.arange(1, n + 1)
    return Domain(
        dim=1,
        kind="interval",
        params={"L": float(L)},
        shape=(n,),
        h=(h,),
        coords=x[:, None],
        index=np.arange(n),
        A=_stiffness_1d(n, h),
        w=_weights_1d(n, h),
    )


def build_rectangle(Lx: float, Ly: float, nx: int, ny: int) -> Domain:
    if not (Lx > 0 and Ly > 0):
        raise InvalidArgument("rectangle sides must be positive")
    if min(nx, ny) < 3 or int(nx) != nx or int(ny) != ny:
        raise InvalidArgument("need at least 3 interior nodes per axis")
    nx, ny = int(nx), int(ny)
    hx, hy = Lx / (nx + 1), Ly / (ny + 1)
    ax = hx * np.arange(1, nx + 1)
    ay = hy * np.arange(1, ny + 1)
    return Domain(
        dim=2,
        kind="rectangle",
        params={"Lx": float(Lx), "Ly": float(Ly)},
        shape=(nx, ny),
        h=(hx, hy),
        coords=_box_coords([ax, ay]),
        index=np.arange(nx * ny),
        A=_box_stiffness([nx, ny], [hx, hy]),
        w=np.kron(_weights_1d(ny, hy), _weights_1d(nx, hx)),
    )


def build_box(lengths: Sequence[float], ns: Sequence[int]) -> Domain:
    """N-dimensional box (0, L1) x ... x (0, LN); used for the cube."""
    if any(not L > 0 for L in lengths) or len(lengths) != len(ns):
        raise InvalidArgument("box sides must be positive, one count per axis")
    if min(ns) < 3:
        raise InvalidArgument("need at least 3 interior nodes per axis")
    ns = [int(k) for k in ns]
    hs = [L / (k + 1) for L, k in zip(lengths, ns)]
    axes = [hh * np.arange(1, k + 1) for hh, k in zip(hs, ns)]
    w = None
    for k, hh in zip(reversed(ns), reversed(hs)):
        wk = _weights_1d(k, hh)
        w = wk if w is None else np.kron(w, wk)
    return Domain(
        dim=len(ns),
        kind="box",
        params={"lengths": [float(L) for L in lengths]},
        shape=tuple(ns),
        h=tuple(hs),
        coords=_box_coords(axes),
        index=np.arange(int(np.prod(ns))),
        A=_box_stiffness(ns, hs),
        w=w,
    )


def build_ball(R: float, n: int, dim: int = 2, center=None) -> Domain:
    """Masked Cartesian grid for the ball B(center, R).

    The box [-R, R]^dim (shifted to ``center``) carries ``n`` nodes per axis
    *including* the two faces, so the spacing is 2R/(n-1).  Nodes strictly
    inside the ball are unknowns.
    """
    if not R > 0:
        raise InvalidArgument("radius must be positive")
    if dim not in (1, 2, 3):
        raise InvalidArgument("dimension must be 1, 2 or 3")
    if int(n) != n or n < 2:
        raise InvalidArgument("need at least 2 nodes per axis")
    n = int(n)
    center = np.zeros(dim) if center is None else np.asarray(center, dtype=float)
    h = 2.0 * R / (n - 1)
    ax = -R + h * np.arange(n)
    box = _box_coords([ax] * dim)
    r = np.sqrt((box**2).sum(axis=1))
    inside = r < R * (1.0 - 1e-12)
    if not inside.any():
        raise DegenerateDomain(f"no grid node lies strictly inside the ball (R={R}, n={n})")
    A_box = _box_stiffness([n] * dim, [h] * dim)
    keep = np.flatnonzero(inside)
    return Domain(
        dim=dim,
        kind="ball",
        params={"R": float(R), "center": center.tolist()},
        shape=(n,) * dim,
        h=(h,) * dim,
        coords=box[keep] + center,
        index=keep,
        A=A_box[keep][:, keep].tocsr(),
        w=np.full(keep.size, h**dim),
    )


# --------------------------------------------------------------------------
# quadratic forms


def dirichlet_energy(d: Domain, u) -> float:
    """Discrete Dirichlet integral ``u^T A u``."""
    v = values_of(d, u)
    return float(v @ (d.A @ v))


def l2_inner(d: Domain, u, v) -> float:
    a = values_of(d, u)
    b = values_of(d, v)
    return float(np.sum(d.w * a * b))


def l2_norm(d: Domain, u) -> float:
    return float(np.sqrt(max(l2_inner(d, u, u), 0.0)))


def apply_laplacian(d: Domain, u) -> np.ndarray:
    """Nodal values of the discrete ``-Delta u`` (``W^{-1} A u``)."""
    return (d.A @ values_of(d, u)) / d.w


def diameter(d: Domain) -> float:
    lo = d.coords.min(axis=0) - np.asarray(d.h)
    hi = d.coords.max(axis=0) + np.asarray(d.h)
    return float(np.linalg.norm(hi - lo))


def sign_change_edges(d: Domain, u) -> int:
    """Number of stencil edges joining a positive node to a negative one."""
    v = values_of(d, u)
    A = d.A.tocoo()
    off = A.row < A.col
    return int(np.count_nonzero(v[A.row[off]] * v[A.col[off]] < 0))


def boundary_points(d: Domain) -> list:
    """Representative boundary locations: endpoints, or corners and edge midpoints."""
    if d.kind == "interval":
        return [np.array([0.0]), np.array([d.params["L"]])]
    if d.kind == "rectangle":
        Lx, Ly = d.params["Lx"], d.params["Ly"]
        return [
            np.array(p, dtype=float)
            for p in [
                (0, 0), (Lx, 0), (Lx, Ly), (0, Ly),
                (Lx / 2, 0), (Lx, Ly / 2), (Lx / 2, Ly), (0, Ly / 2),
            ]
        ]
    if d.kind == "box":
        Ls = d.params["lengths"]
        pts = []
        for axis in range(d.dim):
            for side in (0.0, Ls[axis]):
                p = np.array([L / 2 for L in Ls])
                p[axis] = side
                pts.append(p)
        pts.append(np.zeros(d.dim))
        return pts
    if d.kind == "ball":
        R = d.params["R"]
        c = np.asarray(d.params["center"], dtype=float)
        pts = []
        for axis in range(d.dim):
            e = np.zeros(d.dim)
            e[axis] = R
            pts += [c + e, c - e]
        return pts
    raise InvalidArgument(f"no boundary description for domain kind {d.kind!r}")


def build_domain(kind: str, size: Sequence[float], n: Sequence[int]) -> Domain:
    """Dispatch used by the CLI: ``kind`` in interval, rectangle, square, disk, ball, cube."""
    kind = kind.lower()
    if kind == "interval":
        return build_interval(size[0], n[0])
    if kind in ("rectangle", "square"):
        Lx = size[0]
        Ly = size[1] if len(size) > 1 else size[0]
        nx = n[0]
        ny = n[1] if len(n) > 1 else n[0]
        return build_rectangle(Lx, Ly, nx, ny)
    if kind == "disk":
        return build_ball(size[0], n[0], dim=2)
    if kind == "ball":
        return build_ball(size[0], n[0], dim=3)
    if kind == "cube":
        return build_box([size[0]] * 3, [n[0]] * 3)
    raise InvalidArgument(f"unknown domain kind {kind!r}")


def distance_to_boundary(d: Domain, y) -> float:
    """Euclidean distance from ``y`` to the continuum boundary of ``d``."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if d.kind == "interval":
        return float(min(y[0], d.params["L"] - y[0]))
    if d.kind == "rectangle":
        Lx, Ly = d.params["Lx"], d.params["Ly"]
        return float(min(y[0], Lx - y[0], y[1], Ly - y[1]))
    if d.kind == "box":
        Ls = np.asarray(d.params["lengths"])
        return float(min(np.min(y), np.min(Ls - y)))
    if d.kind == "ball":
        c = np.asarray(d.params["center"], dtype=float)
        return float(d.params["R"] - np.linalg.norm(y - c))
    raise InvalidArgument(f"no boundary description for domain kind {d.kind!r}")
