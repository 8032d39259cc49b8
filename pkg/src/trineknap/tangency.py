"""Tangency points ``d_r`` located by bracketed bisection.

For an anchor ``r != c`` the tangent line of ``f`` at ``d_r`` passes through
``(r, f(r))``. Apart from ``x = r`` the function

    g(x) = f(x) + f'(x) (r - x) - f(r)

has exactly one further root, and it lies strictly between ``c`` and the
reflected anchor ``2c - r``. ``d_0`` and ``d_1`` drive the k-space solvers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import AssumptionViolation, DegenerateAnchorError, DomainError, ParameterError
from .objective import ObjectiveSpec

DEFAULT_TOL = 1e-10

# bracket ends are pulled inward by this fraction of the bracket width
_BRACKET_MARGIN = 1e-12
_ZERO_G = 1e-15


@dataclass(frozen=True)
class TangencyData:
    r: float
    d_r: float
    residual: float
    iterations: int
    tol: float

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "d_r": self.d_r,
            "residual": self.residual,
            "iterations": self.iterations,
            "tol": self.tol,
        }

    @classmethod
    def from_dict(cls, data) -> "TangencyData":
        return cls(
            r=float(data["r"]),
            d_r=float(data["d_r"]),
            residual=float(data["residual"]),
            iterations=int(data["iterations"]),
            tol=float(data["tol"]),
        )


def tangency_g(spec: ObjectiveSpec, r: float, x: float) -> float:
    """Signed gap between ``f(r)`` and the tangent at ``x`` evaluated at ``r``."""
    if not spec.in_domain(x):
        lo, hi = spec.eval_domain
        raise DomainError(f"x = {x!r} lies outside the evaluation domain [{lo}, {hi}]")
    return float(spec.value(x) + spec.deriv(x) * (r - x) - spec.value(r))


def iteration_bound(spec: ObjectiveSpec, r: float, tol: float) -> int:
    width = abs(spec.center - r)
    return max(0, math.ceil(math.log2(width / tol))) + 1


def compute_d_r(spec: ObjectiveSpec, r: float, tol: float = DEFAULT_TOL) -> TangencyData:
    """Bisect ``g`` on the bracket between ``c`` and ``2c - r``.

    Raises :class:`AssumptionViolation` when ``g`` does not have the sign
    pattern an antisymmetric convex-concave ``f`` guarantees, i.e.
    ``g(c) < 0 < g(2c - r)`` for ``r < c`` and the reverse for ``r > c``.
    """
    if not (0.0 <= r <= 1.0):
        raise ParameterError(f"anchor r must lie in [0, 1], got {r!r}")
    if not tol > 0:
        raise ParameterError(f"tol must be > 0, got {tol!r}")
    c = spec.center
    if r == c:
        raise DegenerateAnchorError(f"anchor r = {r!r} equals the center c; d_r is undefined")

    near, far = c, 2.0 * c - r
    width = far - near
    near += _BRACKET_MARGIN * width
    far -= _BRACKET_MARGIN * width

    # orientation: left of c the tangent at c overshoots f(r), right of c it undershoots
    sign = 1.0 if r < c else -1.0
    g_near = sign * tangency_g(spec, r, near)
    g_far = sign * tangency_g(spec, r, far)
    if not (g_near < 0.0 < g_far):
        raise AssumptionViolation(
            f"tangency bracket for r={r}: g(c)={sign * g_near:.3e}, g(2c-r)={sign * g_far:.3e}; "
            "objective is not antisymmetric convex-concave about c"
        )

    lo, hi = near, far  # invariant: sign*g(lo) < 0 <= sign*g(hi)
    iterations = 0
    while abs(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        g_mid = sign * tangency_g(spec, r, mid)
        iterations += 1
        if abs(g_mid) <= _ZERO_G:
            lo = hi = mid
            break
        if g_mid < 0.0:
            lo = mid
        else:
            hi = mid
    d = 0.5 * (lo + hi)
    return TangencyData(r=float(r), d_r=d, residual=abs(tangency_g(spec, r, d)), iterations=iterations, tol=tol)


def preprocess(spec: ObjectiveSpec, tol: float = DEFAULT_TOL) -> tuple[TangencyData, TangencyData]:
    """Tangency records anchored at 0 and 1; guarantees ``d_1 < c < d_0``."""
    t0 = compute_d_r(spec, 0.0, tol)
    t1 = compute_d_r(spec, 1.0, tol)
    if not (t1.d_r < spec.center < t0.d_r):
        raise AssumptionViolation(f"expected d1 < c < d0, got d1={t1.d_r}, c={spec.center}, d0={t0.d_r}")
    return t0, t1
