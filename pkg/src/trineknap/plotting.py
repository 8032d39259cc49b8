"""Plot data and figures: the objective with its tangents, and the k-space gradient field.

Tabular output is tab-separated with a single header line; reals are written
with ``repr`` and undefined cells as ``nan``. Figures are rendered with the
Agg backend so nothing needs a display.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .kspace import grad_k0_at, grad_k1_at
from .objective import ObjectiveSpec

CURVE_COLUMNS = ("x", "f", "tangent_d0", "tangent_d1")
GRADIENT_COLUMNS = ("k0", "k1", "ky", "y", "dF_dk0", "dF_dk1")


@dataclass(frozen=True)
class PlotData:
    curve: str
    gradient: Optional[str] = None


def _fmt(v) -> str:
    v = float(v)
    return "nan" if np.isnan(v) else repr(v)


def _table(columns, rows) -> str:
    lines = ["\t".join(columns)]
    lines.extend("\t".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def tangent_line(spec: ObjectiveSpec, d: float, x):
    return spec.value(d) + spec.deriv(d) * (x - d)


def curve_arrays(spec: ObjectiveSpec, tang, resolution: int):
    xs = np.linspace(0.0, 1.0, resolution)
    d0, d1 = tang[0].d_r, tang[1].d_r
    return xs, spec.value(xs), tangent_line(spec, d0, xs), tangent_line(spec, d1, xs)


def gradient_arrays(spec: ObjectiveSpec, n: int, M: float, resolution: int):
    """Gradient of the projected objective on a uniform ``(k0, k1)`` grid over ``[0, n]^2``.

    Cells outside the equality-feasible region with ``y in (0, 1)`` are nan.
    """
    axis = np.linspace(0.0, float(n), resolution)
    k0, k1 = np.meshgrid(axis, axis, indexing="ij")
    ky = n - k0 - k1
    with np.errstate(divide="ignore", invalid="ignore"):
        y = np.where(ky > 0, (M - k1) / ky, np.nan)
    inside = (ky > 0) & (y > 0.0) & (y < 1.0)
    y = np.where(inside, y, np.nan)
    g0 = np.full(y.shape, np.nan)
    g1 = np.full(y.shape, np.nan)
    g0[inside] = grad_k0_at(spec, y[inside])
    g1[inside] = grad_k1_at(spec, y[inside])
    return k0, k1, np.where(ky >= 0, ky, np.nan), y, g0, g1


def emit_plot_data(
    spec: ObjectiveSpec, tang, resolution: int = 101, n: Optional[int] = None, M: Optional[float] = None
) -> PlotData:
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    curve = _table(CURVE_COLUMNS, zip(*curve_arrays(spec, tang, resolution)))
    gradient = None
    if n is not None and M is not None:
        cols = [a.ravel() for a in gradient_arrays(spec, n, M, resolution)]
        gradient = _table(GRADIENT_COLUMNS, zip(*cols))
    return PlotData(curve=curve, gradient=gradient)


def render_figures(spec: ObjectiveSpec, tang, outdir, n=None, M=None, resolution: int = 201) -> list[str]:
    """Write ``objective.png``, ``tangency_g.png`` and, given ``n`` and ``M``, ``gradient.png``."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(outdir, exist_ok=True)
    paths = []
    d0, d1, c = tang[0].d_r, tang[1].d_r, spec.center

    xs, fx, t0, t1 = curve_arrays(spec, tang, resolution)
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(xs, fx, color="k", lw=2, label="f")
    ax.plot(xs, t0, "--", color="tab:blue", label=f"tangent at d0={d0:.4f}")
    ax.plot(xs, t1, "--", color="tab:red", label=f"tangent at d1={d1:.4f}")
    for v, name in ((c, "c"), (d0, "d0"), (d1, "d1")):
        if 0.0 <= v <= 1.0:
            ax.axvline(v, color="0.7", lw=0.8)
            ax.annotate(name, (v, ax.get_ylim()[0]), textcoords="offset points", xytext=(2, 4))
    ax.set_xlim(0, 1)
    ax.set_xlabel("r")
    ax.set_ylabel("f(r)")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    paths.append(os.path.join(outdir, "objective.png"))
    fig.savefig(paths[-1], dpi=120)
    plt.close(fig)

    lo, hi = spec.eval_domain
    gx = np.linspace(lo, hi, resolution)
    g = spec.value(gx) + spec.deriv(gx) * (0.0 - gx) - spec.f0
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(gx, g, color="k")
    ax.axhline(0.0, color="0.6", lw=0.8)
    ax.plot([0.0, d0], [0.0, 0.0], "o", color="tab:blue")
    ax.set_xlabel("x")
    ax.set_ylabel("g(x), anchor r = 0")
    fig.tight_layout()
    paths.append(os.path.join(outdir, "tangency_g.png"))
    fig.savefig(paths[-1], dpi=120)
    plt.close(fig)

    if n is not None and M is not None:
        k0, k1, _, y, g0, g1 = gradient_arrays(spec, n, M, min(resolution, 41))
        fig, ax = plt.subplots(figsize=(5, 4.5))
        mesh = ax.pcolormesh(k0, k1, np.ma.masked_invalid(y), cmap="viridis", vmin=0, vmax=1, shading="auto")
        # streamplot wants (rows = k1, cols = k0)
        u = np.ma.masked_invalid(g0.T)
        v = np.ma.masked_invalid(g1.T)
        if u.count() > 1:
            ax.streamplot(k0[:, 0], k1[0, :], u, v, color="w", density=1.0, linewidth=0.8)
        fig.colorbar(mesh, ax=ax, label="y")
        ax.set_xlabel("k0")
        ax.set_ylabel("k1")
        ax.set_title(f"gradient field, n={n}, M={M:g}")
        fig.tight_layout()
        paths.append(os.path.join(outdir, "gradient.png"))
        fig.savefig(paths[-1], dpi=120)
        plt.close(fig)
    return paths
