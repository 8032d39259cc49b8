"""One-call entry point that preprocesses, dispatches and optionally cross-checks."""

from __future__ import annotations

import time

from .enumeration import enumerate_partitions, lipschitz_bound, oracle_report
from .errors import ConsistencyError, ParameterError
from .kspace import ProblemInstance, SolveReport, solve_integer
from .tangency import DEFAULT_TOL, preprocess

ALGORITHMS = ("constant", "enumerate", "oracle")
CHECK_TOL = 1e-9


def solve(
    inst: ProblemInstance,
    algorithm: str = "constant",
    tol: float = DEFAULT_TOL,
    step: float = 1e-3,
    check: bool = False,
) -> SolveReport:
    """Solve ``inst`` with the named algorithm.

    With ``check=True`` the O(n^2) enumeration also runs and a
    :class:`ConsistencyError` is raised if its optimum differs by more than
    ``1e-9``. The grid oracle only has to come within ``n * L * step`` from
    below, ``L`` being the sampled Lipschitz constant of ``f``.
    """
    if algorithm not in ALGORITHMS:
        raise ParameterError(f"unknown algorithm {algorithm!r}; expected one of {', '.join(ALGORITHMS)}")
    start = time.perf_counter()
    tang = preprocess(inst.spec, tol)
    if algorithm == "constant":
        report = solve_integer(inst, tang)
    elif algorithm == "enumerate":
        report = enumerate_partitions(inst, tang)
    else:
        report = oracle_report(inst, step, tang)
    if check:
        ref = enumerate_partitions(inst, tang)
        gap = ref.objective - report.objective
        slack = inst.n * lipschitz_bound(inst.spec) * step if algorithm == "oracle" else 0.0
        if gap > CHECK_TOL + slack or gap < -CHECK_TOL:
            raise ConsistencyError(
                f"check failed: {algorithm} objective {report.objective!r} vs enumeration {ref.objective!r}"
            )
    report.wall_time = time.perf_counter() - start
    return report
