"""Objective oracles for antisymmetric convex-concave functions.

An objective is a scalar function ``f`` with first and second derivative
oracles and a center ``c`` in (0, 1) such that ``f(x) + f(2c - x) = 2 f(c)``,
``f`` strictly convex left of ``c`` and strictly concave right of it.

Oracles accept floats or numpy arrays and are evaluable on the extended
interval ``[min(0, 2c - 1), max(1, 2c)]`` so that tangency brackets
``[c, 2c - r]`` can be searched without clipping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.special import expit, ndtr

from .errors import DomainError, OracleError, ParameterError

FAMILIES = ("smoothstep", "probit", "logistic", "neg_tangent", "user_table")

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

Oracle = Callable[[Any], Any]


@dataclass(frozen=True)
class ObjectiveSpec:
    """An antisymmetric objective with value and derivative oracles.

    ``family`` is one of :data:`FAMILIES`, or ``"custom"`` when the oracles
    are supplied directly.
    """

    family: str
    center: float
    value: Oracle = field(repr=False, compare=False)
    deriv: Oracle = field(repr=False, compare=False)
    deriv2: Oracle = field(repr=False, compare=False)
    params: Mapping[str, Any] = field(default_factory=dict, compare=False)
    table: tuple[tuple[float, float], ...] | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        c = self.center
        if not (isinstance(c, (int, float)) and 0.0 < c < 1.0):
            raise ParameterError(f"center c must lie strictly inside (0, 1), got {c!r}")

    @property
    def eval_domain(self) -> tuple[float, float]:
        c = self.center
        return min(0.0, 2.0 * c - 1.0), max(1.0, 2.0 * c)

    def in_domain(self, x: float) -> bool:
        lo, hi = self.eval_domain
        return lo <= x <= hi

    def f(self, x):
        return self.value(x)

    @property
    def f0(self) -> float:
        return float(self.value(0.0))

    @property
    def f1(self) -> float:
        return float(self.value(1.0))

    @property
    def fc(self) -> float:
        return float(self.value(self.center))

    def describe(self) -> dict:
        """JSON-friendly summary of the spec (oracles omitted)."""
        out = {"family": self.family, "center": self.center, "params": dict(self.params)}
        if self.table is not None:
            out["table"] = [list(p) for p in self.table]
        return out


def _require(cond: bool, msg: str):
    if not cond:
        raise ParameterError(msg)


def _check_keys(family: str, params: Mapping[str, Any], allowed: Sequence[str]):
    extra = sorted(set(params) - set(allowed))
    if extra:
        raise ParameterError(f"{family}: unknown parameter(s) {', '.join(extra)}")


def _smoothstep(params):
    _check_keys("smoothstep", params, ())

    def value(x):
        return 3.0 * x * x - 2.0 * x * x * x

    def deriv(x):
        return 6.0 * x - 6.0 * x * x

    def deriv2(x):
        return 6.0 - 12.0 * x

    return 0.5, value, deriv, deriv2


def _probit(params):
    _check_keys("probit", params, ("beta", "beta0"))
    _require("beta" in params and "beta0" in params, "probit: parameters beta and beta0 are required")
    beta = float(params["beta"])
    beta0 = float(params["beta0"])
    _require(beta > 0, f"probit: slope beta must be > 0, got {beta}")
    c = beta0 / beta
    _require(0.0 < c < 1.0, f"probit: center beta0/beta = {c} must lie strictly inside (0, 1)")

    def value(x):
        return ndtr(beta * x - beta0)

    def deriv(x):
        z = beta * x - beta0
        return beta * _INV_SQRT_2PI * np.exp(-0.5 * z * z)

    def deriv2(x):
        z = beta * x - beta0
        return -beta * beta * z * _INV_SQRT_2PI * np.exp(-0.5 * z * z)

    return c, value, deriv, deriv2


def _logistic(params):
    _check_keys("logistic", params, ("scale", "center"))
    _require("scale" in params, "logistic: parameter scale is required")
    s = float(params["scale"])
    c = float(params.get("center", 0.5))
    _require(s > 0, f"logistic: scale must be > 0, got {s}")
    _require(0.0 < c < 1.0, f"logistic: center must lie strictly inside (0, 1), got {c}")

    def value(x):
        return expit(s * (x - c))

    def deriv(x):
        p = expit(s * (x - c))
        return s * p * (1.0 - p)

    def deriv2(x):
        p = expit(s * (x - c))
        return s * s * p * (1.0 - p) * (1.0 - 2.0 * p)

    return c, value, deriv, deriv2


def _neg_tangent(params):
    _check_keys("neg_tangent", params, ("scale", "center"))
    s = float(params.get("scale", 1.0))
    c = float(params.get("center", 0.5))
    _require(s > 0, f"neg_tangent: scale must be > 0, got {s}")
    _require(0.0 < c < 1.0, f"neg_tangent: center must lie strictly inside (0, 1), got {c}")
    # tan has a pole at s*|x - c| = pi/2; the extended domain reaches |x - c| = max(c, 1 - c)
    reach = s * max(c, 1.0 - c)
    _require(reach < math.pi / 2, f"neg_tangent: scale*max(c, 1-c) = {reach} must be < pi/2")

    def value(x):
        return -np.tan(s * (x - c))

    def deriv(x):
        t = np.tan(s * (x - c))
        return -s * (1.0 + t * t)

    def deriv2(x):
        t = np.tan(s * (x - c))
        return -2.0 * s * s * t * (1.0 + t * t)

    return c, value, deriv, deriv2


def _user_table(params, table):
    _check_keys("user_table", params, ("center",))
    _require("center" in params, "user_table: parameter center is required")
    c = float(params["center"])
    _require(0.0 < c < 1.0, f"user_table: center must lie strictly inside (0, 1), got {c}")
    _require(table is not None and len(table) >= 2, "user_table: table needs at least two [x, f] pairs")
    pts = np.asarray(table, dtype=float)
    _require(pts.ndim == 2 and pts.shape[1] == 2, "user_table: table entries must be [x, f] pairs")
    xs = pts[:, 0]
    _require(bool(np.all(np.diff(xs) > 0)), "user_table: table x values must be strictly increasing")
    lo, hi = min(0.0, 2.0 * c - 1.0), max(1.0, 2.0 * c)
    _require(
        xs[0] <= lo and xs[-1] >= hi,
        f"user_table: table must cover the evaluation domain [{lo}, {hi}], covers [{xs[0]}, {xs[-1]}]",
    )
    interp = PchipInterpolator(xs, pts[:, 1], extrapolate=False)
    d1 = interp.derivative(1)
    d2 = interp.derivative(2)
    return c, interp, d1, d2


def make_objective(family: str, params: Mapping[str, Any] | None = None, table=None) -> ObjectiveSpec:
    """Build one of the built-in objective families.

    >>> make_objective("probit", {"beta": 10, "beta0": 5}).center
    0.5
    """
    params = dict(params or {})
    if family == "smoothstep":
        c, v, d1, d2 = _smoothstep(params)
    elif family == "probit":
        c, v, d1, d2 = _probit(params)
    elif family == "logistic":
        c, v, d1, d2 = _logistic(params)
    elif family == "neg_tangent":
        c, v, d1, d2 = _neg_tangent(params)
    elif family == "user_table":
        c, v, d1, d2 = _user_table(params, table)
    else:
        raise ParameterError(f"unknown objective family {family!r}; expected one of {', '.join(FAMILIES)}")
    tab = None if table is None else tuple((float(a), float(b)) for a, b in table)
    return ObjectiveSpec(family=family, center=c, value=v, deriv=d1, deriv2=d2, params=params, table=tab)


@dataclass(frozen=True)
class AssumptionCheck:
    name: str
    passed: bool
    worst_residual: float
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[AssumptionCheck, ...]

    @property
    def ok(self) -> bool:
        return all(chk.passed for chk in self.checks)

    def failures(self) -> list[AssumptionCheck]:
        return [chk for chk in self.checks if not chk.passed]

    def __str__(self):
        lines = []
        for chk in self.checks:
            mark = "pass" if chk.passed else "FAIL"
            lines.append(f"{mark}  {chk.name:<14} worst={chk.worst_residual:.3e}  {chk.detail}".rstrip())
        return "\n".join(lines)


def _evaluate(oracle, xs, what):
    try:
        vals = np.asarray(oracle(xs), dtype=float)
    except Exception as exc:  # noqa: BLE001  oracles are user code
        raise OracleError(f"{what} oracle failed: {exc}") from exc
    if vals.shape != xs.shape or not np.all(np.isfinite(vals)):
        raise OracleError(f"{what} oracle returned non-finite values inside the evaluation domain")
    return vals


def validate_assumptions(spec: ObjectiveSpec, samples: int = 101, tol: float = 1e-9) -> ValidationReport:
    """Check antisymmetry and the curvature split on uniform sample grids.

    Antisymmetry is tested only where both ``x`` and ``2c - x`` lie in
    [0, 1]. Curvature signs are tested on ``[0, c - tol]`` and
    ``[c + tol, 1]``.
    """
    if samples < 2:
        raise ParameterError(f"samples must be >= 2, got {samples}")
    c = spec.center

    lo, hi = spec.eval_domain
    _evaluate(spec.value, np.linspace(lo, hi, samples), "value")

    a_lo, a_hi = max(0.0, 2.0 * c - 1.0), min(1.0, 2.0 * c)
    xs = np.linspace(a_lo, a_hi, samples)
    resid = np.abs(_evaluate(spec.value, xs, "value") + _evaluate(spec.value, 2.0 * c - xs, "value") - 2.0 * spec.fc)
    worst = float(resid.max())
    checks = [AssumptionCheck("antisymmetry", worst <= tol, worst, f"on [{a_lo:.6g}, {a_hi:.6g}]")]

    left = np.linspace(0.0, c - tol, samples)
    f2 = _evaluate(spec.deriv2, left, "deriv2")
    checks.append(AssumptionCheck("convex_left", bool(np.all(f2 > 0)), float(f2.min()), "min f'' on [0, c)"))

    right = np.linspace(c + tol, 1.0, samples)
    f2 = _evaluate(spec.deriv2, right, "deriv2")
    checks.append(AssumptionCheck("concave_right", bool(np.all(f2 < 0)), float(f2.max()), "max f'' on (c, 1]"))
    return ValidationReport(tuple(checks))


def eval_F(spec: ObjectiveSpec, x) -> float:
    """Separable objective ``sum(f(x_i))`` over a point of the unit cube."""
    arr = np.asarray(x, dtype=float).ravel()
    bad = np.flatnonzero((arr < 0.0) | (arr > 1.0) | ~np.isfinite(arr))
    if bad.size:
        i = int(bad[0])
        raise DomainError(f"coordinate x[{i}] = {arr[i]!r} lies outside [0, 1]")
    if arr.size == 0:
        return 0.0
    # math.fsum keeps the sum independent of summation order
    return math.fsum(np.asarray(spec.value(arr), dtype=float).tolist())
