"""The k-space reformulation of the symmetric knapsack.

A trine solution puts ``k0`` coordinates at 0, ``k1`` at 1 and ``ky`` at a
single interior value ``y``. With ``k0 + k1 + ky = n`` and
``k1 + y*ky = M`` the objective becomes

    F(k) = f(0) k0 + f(1) k1 + f(y) ky

and every optimum of the x-space problem is represented by some ``k``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ConsistencyError, InfeasibleInstance, ParameterError, UndefinedGradient
from .objective import ObjectiveSpec
from .tangency import TangencyData
from . import transform

LABELS = ("A", "A_minus", "C1", "C2", "C2_minus", "C2_plus", "C3", "custom")

FOLD_TOL = 1e-12
EQ_TOL = 1e-9
# M within this of [0, n] is clamped instead of rejected
CLAMP_TOL = 1e-12
BAND_TOL = 1e-9

# tie-break rank among integer candidates; lower wins
_LABEL_RANK = {"A_minus": 0, "C2_minus": 1, "C2_plus": 2, "C1": 3}


def _mass_tol(n) -> float:
    return FOLD_TOL * max(1.0, float(n))


@dataclass(frozen=True)
class KSolution:
    k0: float
    k1: float
    ky: float
    y: Optional[float]
    objective: Optional[float]
    label: str = "custom"
    feasible: bool = True

    @property
    def counts(self) -> tuple:
        return (self.k0, self.k1, self.ky)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "k0": self.k0,
            "k1": self.k1,
            "ky": self.ky,
            "y": self.y,
            "objective": self.objective,
            "feasible": self.feasible,
        }

    @classmethod
    def from_dict(cls, data) -> "KSolution":
        return cls(
            k0=data["k0"],
            k1=data["k1"],
            ky=data["ky"],
            y=data["y"],
            objective=data["objective"],
            label=data["label"],
            feasible=bool(data["feasible"]),
        )


@dataclass(frozen=True)
class ProblemInstance:
    """A normalized instance ``max sum f(x_i) s.t. sum x_i = M, x in [0,1]^n``.

    When the instance came from general bounds ``[a, b]``, ``bounds`` and the
    original mass ``M0`` are kept so solutions can be reported in original
    coordinates.
    """

    n: int
    M: float
    spec: ObjectiveSpec
    bounds: Optional[tuple[float, float]] = None
    M0: Optional[float] = None

    def __post_init__(self):
        n = self.n
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
            raise ParameterError(f"n must be a positive integer, got {n!r}")
        object.__setattr__(self, "n", int(n))
        M = float(self.M)
        if not math.isfinite(M) or M < -CLAMP_TOL or M > n + CLAMP_TOL:
            raise InfeasibleInstance(f"M outside [0, n]: M = {self.M!r}, n = {n}")
        object.__setattr__(self, "M", min(max(M, 0.0), float(n)))
        if self.bounds is not None:
            a, b = self.bounds
            if not a < b:
                raise ParameterError(f"bounds must satisfy a < b, got ({a}, {b})")

    @classmethod
    def from_bounds(cls, n: int, M0: float, spec: ObjectiveSpec, a: float, b: float) -> "ProblemInstance":
        M, _, _ = transform.normalize(a, b, n, M0)
        return cls(n=n, M=M, spec=spec, bounds=(float(a), float(b)), M0=float(M0))

    def to_original(self, x) -> tuple[float, ...]:
        if self.bounds is None:
            return tuple(float(v) for v in x)
        a, b = self.bounds
        return tuple(a + (b - a) * float(v) for v in x)

    def describe(self) -> dict:
        out = {"n": self.n, "M": self.M}
        if self.bounds is not None:
            out["a"], out["b"] = self.bounds
            out["M0"] = self.M0
        out["objective"] = self.spec.describe()
        return out


@dataclass
class SolveReport:
    instance: ProblemInstance
    d0: TangencyData
    d1: TangencyData
    candidates: list[KSolution]
    chosen: KSolution
    x: tuple[float, ...]
    algorithm: str
    f_eval_count: int
    wall_time: float = field(default=0.0, compare=False)

    @property
    def objective(self) -> float:
        return self.chosen.objective


def ensure_feasible(n, M) -> None:
    if not (-CLAMP_TOL <= M <= n + CLAMP_TOL):
        raise InfeasibleInstance(f"M outside [0, n]: M = {M!r}, n = {n}")


def y_from_counts(n, M, k0, k1) -> Optional[float]:
    """Interior value forced by the two equalities; ``None`` when ``ky = 0``."""
    ky = n - k0 - k1
    if ky < 0:
        raise ParameterError(f"k0 + k1 = {k0 + k1} exceeds n = {n}")
    if ky == 0:
        return None
    return (M - k1) / ky


def continuous_feasible_range(n, M, y):
    """Intervals of ``k0`` and ``k1`` for which the relaxation is feasible at ``y``."""
    if not 0.0 < y < 1.0:
        raise ParameterError(f"y must lie in (0, 1), got {y!r}")
    k0 = (max((y * n - M) / y, 0.0), n - M)
    k1 = (max((M - y * n) / (1.0 - y), 0.0), M)
    return k0, k1


def _iceil(v):
    # absorbs round-off such as (8/3 - 2)/(2/3) = 1.0000000000000002
    return math.ceil(v - 1e-9)


def _ifloor(v):
    return math.floor(v + 1e-9)


def integer_feasible_range(n, M, y) -> tuple[range, range]:
    """Integer counts ``k0`` and ``k1`` feasible at ``y``; ranges may be empty."""
    (lo0, hi0), (lo1, hi1) = continuous_feasible_range(n, M, y)
    return range(max(_iceil(lo0), 0), _ifloor(hi0) + 1), range(max(_iceil(lo1), 0), _ifloor(hi1) + 1)


def grad_k0_at(spec: ObjectiveSpec, y):
    """``dF/dk0`` along the equality manifold, as a function of ``y`` alone."""
    return spec.f0 + y * spec.deriv(y) - spec.value(y)


def grad_k1_at(spec: ObjectiveSpec, y):
    return spec.f1 + (y - 1.0) * spec.deriv(y) - spec.value(y)


def _gradient_point(k):
    if k.y is None or not k.ky > 0:
        raise UndefinedGradient(f"gradient undefined at k = {k.counts}: no interior coordinates")
    return k.y


def partial_k0(spec: ObjectiveSpec, k: KSolution) -> float:
    return float(grad_k0_at(spec, _gradient_point(k)))


def partial_k1(spec: ObjectiveSpec, k: KSolution) -> float:
    return float(grad_k1_at(spec, _gradient_point(k)))


def projected_objective(spec: ObjectiveSpec, n, M, k0, k1):
    """``F`` with ``ky`` and ``y`` eliminated through the two equalities."""
    ky = n - k0 - k1
    y = (M - k1) / ky
    return spec.f0 * k0 + spec.f1 * k1 + spec.value(y) * ky


def k_objective(spec: ObjectiveSpec, k0, k1, ky, y) -> float:
    val = spec.f0 * k0 + spec.f1 * k1
    if ky and y is not None:
        val += float(spec.value(y)) * ky
    return float(val)


def make_solution(
    inst: ProblemInstance,
    k0,
    k1,
    ky,
    label: str,
    y: Optional[float] = None,
) -> KSolution:
    """Build a candidate, folding a degenerate ``y`` into the boundary counts.

    ``y`` defaults to the value forced by the mass equality. Candidates that
    violate nonnegativity, ``y in [0, 1]`` or either equality are returned
    with ``feasible=False``; their objective is ``None`` when ``y`` cannot
    be evaluated.
    """
    spec, n, M = inst.spec, inst.n, inst.M
    if y is None and ky != 0:
        y = (M - k1) / ky
    if ky == 0:
        y = None
    elif abs(y) <= FOLD_TOL:
        k0, ky, y = k0 + ky, 0 * ky, None
    elif abs(y - 1.0) <= FOLD_TOL:
        k1, ky, y = k1 + ky, 0 * ky, None

    tol = _mass_tol(n)
    feasible = min(k0, k1, ky) >= -tol and (y is None or 0.0 < y < 1.0)
    feasible = feasible and abs(k0 + k1 + ky - n) <= EQ_TOL and abs(k1 + (y or 0.0) * ky - M) <= EQ_TOL
    objective = None
    if y is None or spec.in_domain(y):
        objective = k_objective(spec, k0, k1, ky, y)
    return KSolution(k0=k0, k1=k1, ky=ky, y=y, objective=objective, label=label, feasible=bool(feasible))


def kkt_candidates(inst: ProblemInstance, tang: Sequence[TangencyData]) -> list[KSolution]:
    """KKT points of the continuous relaxation: rows A, C1, C2 and C3.

    The all-positive case has no KKT point and contributes no row.
    """
    n, M = inst.n, inst.M
    ensure_feasible(n, M)
    d0, d1 = tang[0].d_r, tang[1].d_r
    rows = [
        make_solution(inst, n - M, M, 0.0, "A"),
        make_solution(inst, 0.0, 0.0, float(n), "C1", y=M / n),
        make_solution(inst, n - M / d0, 0.0, M / d0, "C2", y=d0),
    ]
    ky3 = (n - M) / (1.0 - d1)
    rows.append(make_solution(inst, 0.0, n - ky3, ky3, "C3", y=d1))
    return rows


def _effective_d0(tang) -> float:
    # a tangency point past 1 behaves like y = 1 on the unit interval
    return min(tang[0].d_r, 1.0)


def solve_continuous(inst: ProblemInstance, tang: Sequence[TangencyData]) -> KSolution:
    """Optimum of the continuous relaxation (real-valued counts)."""
    n, M = inst.n, inst.M
    ensure_feasible(n, M)
    d0 = _effective_d0(tang)
    c2 = make_solution(inst, n - M / d0, 0.0, M / d0, "C2", y=d0)
    c1 = make_solution(inst, 0.0, 0.0, float(n), "C1", y=M / n)
    gap = M - d0 * n
    if gap < -BAND_TOL * n:
        return c2
    if gap > BAND_TOL * n:
        return c1
    best = [s for s in (c2, c1) if s.feasible]
    return max(best, key=lambda s: s.objective)


def _better(a: KSolution, b: KSolution) -> bool:
    """Whether ``a`` beats ``b`` under objective, then larger ky, then label."""
    if a.objective != b.objective:
        return a.objective > b.objective
    if a.ky != b.ky:
        return a.ky > b.ky
    return _LABEL_RANK.get(a.label, 99) < _LABEL_RANK.get(b.label, 99)


def pick_best(cands: Sequence[KSolution]) -> KSolution:
    best = None
    for cand in cands:
        if cand.feasible and (best is None or _better(cand, best)):
            best = cand
    if best is None:
        raise ConsistencyError("no feasible candidate")
    return best


def integer_candidates(inst: ProblemInstance, tang: Sequence[TangencyData]) -> list[KSolution]:
    """Candidate set of the constant-operation integer rule.

    Duplicate count vectors (for example C2- and C2+ when ``M/d0`` is an
    integer) are listed once.
    """
    n, M = inst.n, inst.M
    ensure_feasible(n, M)
    d0 = _effective_d0(tang)
    gap = M - d0 * n
    rows = []
    if gap < BAND_TOL * n:
        fm = math.floor(M)
        k0 = math.floor(n - M)
        rows.append(make_solution(inst, k0, fm, n - k0 - fm, "A_minus"))
        q = M / d0
        hi = math.ceil(q)
        lo = math.floor(q)
        rows.append(make_solution(inst, n - hi, 0, hi, "C2_minus"))
        rows.append(make_solution(inst, n - lo, 0, lo, "C2_plus"))
    if gap > -BAND_TOL * n:
        rows.append(make_solution(inst, 0, 0, n, "C1"))
    out, seen = [], set()
    for row in rows:
        if row.counts not in seen:
            seen.add(row.counts)
            out.append(row)
    return out


def solve_integer(inst: ProblemInstance, tang: Sequence[TangencyData]) -> SolveReport:
    """Integer optimum from at most four closed-form candidates."""
    start = time.perf_counter()
    cands = integer_candidates(inst, tang)
    chosen = pick_best(cands)
    if chosen.ky and not (0.0 < chosen.y < 1.0):
        raise ConsistencyError(f"chosen candidate has y = {chosen.y} outside (0, 1); tighten the d0 tolerance")
    x = inst.to_original(transform.expand(chosen, inst.n))
    evals = 2 + sum(1 for c in cands if c.ky and c.y is not None and c.objective is not None)
    return SolveReport(
        instance=inst,
        d0=tang[0],
        d1=tang[1],
        candidates=cands,
        chosen=chosen,
        x=x,
        algorithm="constant",
        f_eval_count=evals,
        wall_time=time.perf_counter() - start,
    )
