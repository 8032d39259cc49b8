"""Reference solvers: the O(n^2) partition scan and an x-space grid oracle."""

from __future__ import annotations

import time
from dataclasses import replace

import numpy as np

from .errors import CapabilityError
from .kspace import (
    FOLD_TOL,
    ProblemInstance,
    SolveReport,
    _mass_tol,
    ensure_feasible,
    make_solution,
)
from .objective import ObjectiveSpec, eval_F
from . import transform

ORACLE_MAX_N = 4


def _pairs(n: int):
    k0, k1 = np.indices((n + 1, n + 1)).reshape(2, -1)
    keep = k0 + k1 <= n
    return k0[keep], k1[keep]


def enumerate_partitions(inst: ProblemInstance, tang=None) -> SolveReport:
    """Scan every integer pair ``(k0, k1)`` with ``k0 + k1 <= n``.

    ``ky`` and ``y`` follow from the equalities. Pairs whose ``y`` lands on 0
    or 1 (within round-off) are folded into the boundary counts rather than
    dropped. Ties go to the larger folded ``ky``, then to scan order.
    ``tang`` is only echoed into the report.
    """
    start = time.perf_counter()
    spec, n, M = inst.spec, inst.n, inst.M
    ensure_feasible(n, M)
    k0, k1 = _pairs(n)
    ky = n - k0 - k1

    with np.errstate(divide="ignore", invalid="ignore"):
        y = np.where(ky > 0, (M - k1) / np.maximum(ky, 1), np.nan)
    low = (ky > 0) & (np.abs(y) <= FOLD_TOL)
    high = (ky > 0) & (np.abs(y - 1.0) <= FOLD_TOL)
    interior = (ky > 0) & (y > FOLD_TOL) & (y < 1.0 - FOLD_TOL)
    boundary = (ky == 0) & (np.abs(k1 - M) <= _mass_tol(n))
    valid = interior | low | high | boundary

    k0f = np.where(low, k0 + ky, k0)
    k1f = np.where(high, k1 + ky, k1)
    kyf = np.where(interior, ky, 0)

    fy = np.zeros(y.shape)
    fy[interior] = spec.value(y[interior])
    evals = int(interior.sum())
    obj = spec.f0 * k0f + spec.f1 * k1f + fy * kyf
    obj = np.where(valid, obj, -np.inf)

    best = obj.max()
    ties = np.flatnonzero(obj == best)
    i = int(ties[np.argmax(kyf[ties])])

    K0, K1, KY = int(k0f[i]), int(k1f[i]), int(kyf[i])
    chosen = make_solution(inst, K0, K1, KY, "custom", y=float(y[i]) if KY else None)
    x = inst.to_original(transform.expand(chosen, n))
    d0, d1 = (None, None) if tang is None else tang
    return SolveReport(
        instance=inst,
        d0=d0,
        d1=d1,
        candidates=[chosen],
        chosen=chosen,
        x=x,
        algorithm="enumerate",
        f_eval_count=evals + 2,
        wall_time=time.perf_counter() - start,
    )


def lipschitz_bound(spec: ObjectiveSpec, samples: int = 1001) -> float:
    """Largest sampled ``|f'|`` on [0, 1]."""
    xs = np.linspace(0.0, 1.0, samples)
    return float(np.max(np.abs(spec.deriv(xs))))


def _grid(step: float) -> np.ndarray:
    m = int(np.floor(1.0 / step + 1e-9))
    pts = np.arange(m + 1) * step
    if pts[-1] < 1.0:
        pts = np.append(pts, 1.0)
    return np.minimum(pts, 1.0)


def grid_oracle(inst: ProblemInstance, step: float):
    """Exhaustive search over a grid on ``{x in [0,1]^n : sum x = M}``.

    The first ``n - 1`` coordinates range over a grid of spacing ``step``;
    the last one absorbs the remaining mass. Returns ``(x, objective)`` in
    normalized coordinates. Exponential in ``n``, so capped at ``n = 4``.
    """
    x, val, _ = _grid_search(inst, step)
    return x, val


def _grid_search(inst: ProblemInstance, step: float):
    spec, n, M = inst.spec, inst.n, inst.M
    if n > ORACLE_MAX_N:
        raise CapabilityError(f"grid oracle supports n <= {ORACLE_MAX_N}, got n = {n}")
    if not step > 0:
        raise ValueError(f"step must be > 0, got {step!r}")
    ensure_feasible(n, M)
    if n == 1:
        x = (M,)
        return x, eval_F(spec, x), 1

    pts = _grid(step)
    fpts = np.asarray(spec.value(pts), dtype=float)
    best_val, best_x = -np.inf, None
    evals = len(pts)

    def last_two(prefix, mass, base):
        # the last free coordinate is vectorized, the final one is implied
        nonlocal best_val, best_x, evals
        if len(prefix) == n - 2:
            x_last = mass - pts
            ok = (x_last >= -1e-12) & (x_last <= 1.0 + 1e-12)
            if not ok.any():
                return
            x_last = np.clip(x_last[ok], 0.0, 1.0)
            evals += x_last.size
            vals = base + fpts[ok] + spec.value(x_last)
            j = int(np.argmax(vals))
            if vals[j] > best_val:
                best_val = float(vals[j])
                best_x = prefix + (float(pts[ok][j]), float(x_last[j]))
            return
        remaining = n - len(prefix) - 1
        for idx in range(len(pts)):
            v = pts[idx]
            rest = mass - v
            if rest < -1e-12:
                break
            if rest > remaining + 1e-12:
                continue
            last_two(prefix + (float(v),), rest, base + fpts[idx])

    last_two((), M, 0.0)
    return best_x, eval_F(spec, best_x), evals


def oracle_report(inst: ProblemInstance, step: float, tang=None) -> SolveReport:
    """Wrap :func:`grid_oracle` in a report; the summary k-point uses the mean interior value."""
    start = time.perf_counter()
    x, val, evals = _grid_search(inst, step)
    arr = np.asarray(x)
    zeros = int(np.sum(arr == 0.0))
    ones = int(np.sum(arr == 1.0))
    inner = arr[(arr > 0.0) & (arr < 1.0)]
    y = float(np.mean(inner)) if inner.size else None
    chosen = make_solution(inst, zeros, ones, int(inner.size), "custom", y=y)
    chosen = replace(chosen, objective=val)
    d0, d1 = (None, None) if tang is None else tang
    return SolveReport(
        instance=inst,
        d0=d0,
        d1=d1,
        candidates=[chosen],
        chosen=chosen,
        x=inst.to_original(x),
        algorithm="oracle",
        f_eval_count=evals,
        wall_time=time.perf_counter() - start,
    )

