"""Command-line front end.

Problem files are INI documents::

    [objective]
    family = probit
    params = {"beta": 10, "beta0": 5}

    [instance]
    n = 4
    M = 2            ; or M0 together with a and b

    [solver]
    algorithm = constant
    tol = 1e-10
    step = 1e-3

``params`` and ``table`` are JSON values. Command-line flags override the
``[solver]`` section.

Exit status: 0 success, 1 infeasible instance, 2 objective fails its
assumptions, 3 usage or input error, 4 ``--check`` disagreement.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys

import numpy as np

from . import report as report_io
from .errors import (
    AssumptionViolation,
    CapabilityError,
    ConsistencyError,
    DomainError,
    InfeasibleInstance,
    OracleError,
    ParameterError,
)
from .kspace import ProblemInstance
from .objective import make_objective, validate_assumptions
from .plotting import emit_plot_data, render_figures
from .sampling import random_instance
from .solver import ALGORITHMS, solve
from .tangency import DEFAULT_TOL

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_ASSUMPTION = 2
EXIT_USAGE = 3
EXIT_CHECK = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _json_value(section, key, default=None):
    raw = section.get(key)
    if raw is None:
        return default
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise UsageError(f"[{section.name}] {key}: not valid JSON ({exc.msg})") from exc


def _number(section, key, cast=float):
    raw = section.get(key)
    if raw is None:
        return None
    try:
        val = cast(raw)
    except ValueError as exc:
        raise UsageError(f"[{section.name}] {key} = {raw!r} is not a valid {cast.__name__}") from exc
    return val


def load_problem(path: str):
    """Parse a problem file into ``(ProblemInstance, solver settings)``."""
    cfg = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    cfg.optionxform = str  # keep M and M0 distinct
    try:
        with open(path, encoding="utf-8") as fh:
            cfg.read_file(fh)
    except OSError as exc:
        raise UsageError(f"cannot read problem file {path}: {exc.strerror}") from exc
    except configparser.Error as exc:
        raise UsageError(f"cannot parse problem file {path}: {exc}") from exc
    for name in ("objective", "instance"):
        if not cfg.has_section(name):
            raise UsageError(f"problem file {path} has no [{name}] section")

    obj = cfg["objective"]
    family = obj.get("family")
    if family is None:
        raise UsageError("[objective] family is required")
    params = _json_value(obj, "params", {})
    if not isinstance(params, dict):
        raise UsageError("[objective] params must be a JSON object")
    spec = make_objective(family, params, _json_value(obj, "table"))

    sec = cfg["instance"]
    n = _number(sec, "n", int)
    if n is None:
        raise UsageError("[instance] n is required")
    if "M0" in sec:
        a, b, M0 = _number(sec, "a"), _number(sec, "b"), _number(sec, "M0")
        if a is None or b is None:
            raise UsageError("[instance] M0 requires both a and b")
        inst = ProblemInstance.from_bounds(n, M0, spec, a, b)
    elif "M" in sec:
        inst = ProblemInstance(n=n, M=_number(sec, "M"), spec=spec)
    else:
        raise UsageError("[instance] needs M, or M0 with a and b")

    settings = {}
    if cfg.has_section("solver"):
        sol = cfg["solver"]
        if "algorithm" in sol:
            settings["algorithm"] = sol["algorithm"].strip()
        for key in ("tol", "step"):
            val = _number(sol, key)
            if val is not None:
                settings[key] = val
    return inst, settings


def _split_path(path):
    root, ext = os.path.splitext(path)
    return f"{root}.gradient{ext or '.tsv'}"


def _cmd_solve(args) -> int:
    inst, settings = load_problem(args.file)
    algorithm = args.algorithm or settings.get("algorithm", "constant")
    if algorithm not in ALGORITHMS:
        raise UsageError(f"unknown algorithm {algorithm!r}; expected one of {', '.join(ALGORITHMS)}")
    tol = args.tol if args.tol is not None else settings.get("tol", DEFAULT_TOL)
    step = args.step if args.step is not None else settings.get("step", 1e-3)

    validation = None if args.no_validate else validate_assumptions(inst.spec)
    if validation is not None and not validation.ok:
        failed = ", ".join(f"{c.name} (worst {c.worst_residual:.3e})" for c in validation.failures())
        print(f"objective fails assumption(s): {failed}", file=sys.stderr)
        return EXIT_ASSUMPTION

    rep = solve(inst, algorithm=algorithm, tol=tol, step=step, check=args.check)
    if args.format == "csv":
        sys.stdout.write(report_io.to_csv(rep))
    else:
        sys.stdout.write(report_io.to_json(rep, timings=args.timings))

    if args.plot_data or args.figures:
        tang = (rep.d0, rep.d1)
        if args.plot_data:
            data = emit_plot_data(inst.spec, tang, args.resolution, inst.n, inst.M)
            with open(args.plot_data, "w", encoding="utf-8") as fh:
                fh.write(data.curve)
            with open(_split_path(args.plot_data), "w", encoding="utf-8") as fh:
                fh.write(data.gradient)
        if args.figures:
            render_figures(inst.spec, tang, args.figures, inst.n, inst.M)
    return EXIT_OK


def _cmd_verify(args) -> int:
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for i in range(args.count):
        inst = random_instance(rng, args.max_n)
        const = solve(inst, "constant", tol=args.tol)
        enum = solve(inst, "enumerate", tol=args.tol)
        gap = abs(const.objective - enum.objective)
        worst = max(worst, gap)
        if gap > 1e-9:
            print(
                f"instance {i}: {inst.spec.family} {inst.spec.params} n={inst.n} M={inst.M!r} "
                f"constant={const.objective!r} enumerate={enum.objective!r}",
                file=sys.stderr,
            )
            return EXIT_CHECK
    print(f"{args.count} instances agree (seed {args.seed}); worst gap {worst:.3e}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="trineknap", description="Symmetric nonlinear continuous knapsack solver.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve a problem file")
    p.add_argument("--file", required=True, metavar="PATH")
    p.add_argument("--algorithm", choices=ALGORITHMS)
    p.add_argument("--tol", type=float, help="bisection tolerance for d0 and d1 (default 1e-10)")
    p.add_argument("--step", type=float, help="grid spacing for --algorithm oracle (default 1e-3)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--check", action="store_true", help="also run the enumeration and require agreement")
    p.add_argument("--plot-data", metavar="PATH", help="write curve and gradient tables (TSV)")
    p.add_argument("--figures", metavar="DIR", help="render PNG figures into DIR")
    p.add_argument("--resolution", type=int, default=101)
    p.add_argument("--timings", action="store_true", help="include wall time in the JSON report")
    p.add_argument(
        "--no-validate", action="store_true", help="skip the sampled antisymmetry and curvature checks"
    )
    p.set_defaults(func=_cmd_solve)

    v = sub.add_parser("verify", help="compare constant and enumeration solvers on random instances")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--count", type=int, default=100)
    v.add_argument("--max-n", type=int, default=200)
    v.add_argument("--tol", type=float, default=DEFAULT_TOL)
    v.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleInstance as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (AssumptionViolation, OracleError) as exc:
        print(f"assumption failure: {exc}", file=sys.stderr)
        return EXIT_ASSUMPTION
    except ConsistencyError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_CHECK
    except (UsageError, ParameterError, DomainError, CapabilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
