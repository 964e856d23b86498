"""Figures and whitespace-delimited plot data for traces."""

from __future__ import annotations

import math
import os
from typing import Callable, Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .errors import InvalidArgument  # noqa: E402
from .tracer import CurveTrace, asymptotic_diagnostic  # noqa: E402


def diag_path(path) -> str:
    root, ext = os.path.splitext(str(path))
    return f"{root}_diag{ext or '.dat'}"


def emit_plot_data(tr: CurveTrace, path, header: str = "") -> tuple:
    """Write ``beta alpha`` lines to ``path`` and ``beta D`` lines to a companion file.

    Only converged points are written.  Returns the two paths.
    """
    b, a = tr.converged()
    if b.size == 0:
        raise InvalidArgument("trace has no converged point to write")
    diag = asymptotic_diagnostic(tr)
    extra = f" {header}" if header else ""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# beta alpha{extra}\n")
        for bb, aa in zip(b, a):
            fh.write(f"{float(bb)!r} {float(aa)!r}\n")
    dpath = diag_path(path)
    with open(dpath, "w", encoding="utf-8") as fh:
        fh.write(f"# beta diag (ln = natural log){extra}\n")
        for bb, dd in diag:
            fh.write(f"{float(bb)!r} {float(dd)!r}\n")
    return str(path), dpath


def read_plot_data(path) -> np.ndarray:
    return np.loadtxt(path, comments="#", ndmin=2)


def plot_trace(tr: CurveTrace, path, reference: Optional[Callable[[float], float]] = None,
               title: str = "") -> str:
    b, a = tr.converged()
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.plot(b, a, "o-", ms=3, label="computed")
    if reference is not None and b.size:
        bb = np.linspace(b.min(), b.max(), 400)
        ax.plot(bb, [reference(x) for x in bb], "k--", lw=1, label="analytic")
    lo = min(tr.lambda1, *(b.tolist() or [tr.lambda1]))
    hi = max(a.max() if a.size else tr.lambda2, b.max() if b.size else tr.lambda2)
    ax.plot([lo, hi], [lo, hi], ":", color="gray", lw=1, label="alpha = beta")
    ax.axhline(tr.lambda1, color="gray", lw=0.8)
    ax.axvline(tr.lambda1, color="gray", lw=0.8)
    ax.set_xlabel("beta")
    ax.set_ylabel("alpha")
    ax.set_xscale("log")
    ax.set_yscale("log")
    if title:
        ax.set_title(title)
    ax.legend(frameon=False)
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return str(path)


def plot_diagnostic(tr: CurveTrace, path, threshold: Optional[float] = None) -> str:
    diag = asymptotic_diagnostic(tr)
    fig, ax = plt.subplots(figsize=(6, 4))
    if diag:
        ax.plot([d[0] for d in diag], [d[1] for d in diag], "o-", ms=3, label="D(beta)")
    if threshold is not None and math.isfinite(threshold):
        ax.axhline(threshold, color="r", ls="--", lw=1, label="k = 1 asymptote")
    ax.set_xscale("log")
    ax.set_xlabel("beta")
    ax.set_ylabel("D(beta)")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return str(path)
