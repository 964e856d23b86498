import math

import numpy as np
import pytest

from fucik import spectral
from fucik.grid import build_ball, build_interval, build_rectangle, dirichlet_energy, l2_inner


def test_interval_pairs(interval):
    pairs = spectral.smallest_eigenpairs(interval, 2)
    assert pairs[0].value == pytest.approx(1.0, rel=1e-3)
    assert pairs[1].value == pytest.approx(4.0, rel=1e-3)


def test_square_pairs(square):
    lams = [p.value for p in spectral.smallest_eigenpairs(square, 3)]
    assert lams == pytest.approx([2.0, 5.0, 5.0], rel=1e-2)


@pytest.mark.parametrize("build", [
    lambda: build_interval(math.pi, 99),
    lambda: build_rectangle(math.pi, 2.0, 21, 17),
    lambda: build_ball(1.0, 31),
])
def test_rayleigh_residual_orthonormal(build):
    d = build()
    tol = 1e-10
    pairs = spectral.smallest_eigenpairs(d, 4, tol)
    e1 = pairs[0]
    rq = dirichlet_energy(d, e1.values) / l2_inner(d, e1.values, e1.values)
    assert rq == pytest.approx(e1.value, rel=max(tol, 1e-9))
    assert np.all(e1.values > 0)
    vals = [p.value for p in pairs]
    assert vals == sorted(vals)
    assert vals[1] > vals[0]
    G = np.array([[l2_inner(d, a.values, b.values) for b in pairs] for a in pairs])
    assert np.max(np.abs(G - np.eye(4))) <= 1e-8
    for p in pairs:
        r = d.A @ p.values - p.value * d.w * p.values
        assert math.sqrt(np.sum(r**2 / d.w)) <= 1e-6 * max(1, p.value)


def test_max_e1(interval, square):
    assert spectral.max_of_e1(square) == pytest.approx(2 / math.pi, rel=0.01)
    assert spectral.max_of_e1(interval) == pytest.approx(math.sqrt(2 / math.pi), rel=0.01)


def test_positivization_is_sign_independent():
    d = build_rectangle(1.0, 1.0, 15, 15)
    a = spectral.principal(d).values.copy()
    lam, V, tol = d._cache["eig"]
    d._cache["eig"] = (lam, -V, tol)
    assert np.array_equal(spectral.principal(d).values, a)
    assert spectral.max_of_e1(d) == pytest.approx(float(a.max()), rel=0, abs=0)


def test_lambda2_eigenspace_square(square):
    x, y = square.coords[:, 0], square.coords[:, 1]
    basis = np.stack([np.sin(x) * np.sin(2 * y), np.sin(2 * x) * np.sin(y)], axis=1)
    pairs = spectral.smallest_eigenpairs(square, 3)
    V = np.stack([pairs[1].values, pairs[2].values], axis=1)
    # principal angles in the W inner product
    sw = np.sqrt(square.w)[:, None]
    Q1, _ = np.linalg.qr(basis * sw)
    Q2, _ = np.linalg.qr(V * sw)
    s = np.linalg.svd(Q1.T @ Q2, compute_uv=False)
    angle = math.acos(min(1.0, float(s.min())))
    assert angle <= 1e-3


def test_sparse_path_matches_dense():
    d = build_rectangle(math.pi, math.pi, 31, 31)  # above the dense-size cutoff
    assert d.size > spectral._DENSE_LIMIT
    sparse = [p.value for p in spectral.smallest_eigenpairs(d, 3)]
    dense, _ = spectral._dense_pairs(d, 3)
    assert sparse == pytest.approx(list(dense), rel=1e-9)
