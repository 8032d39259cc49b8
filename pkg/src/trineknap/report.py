"""Serialization of :class:`~trineknap.kspace.SolveReport`.

JSON is the full report. Floats go through ``repr`` so a report re-parses
to bit-identical values; keys keep a fixed order so identical inputs give
identical bytes. Wall-clock time is left out unless asked for, since it
would break byte-level determinism.
"""

from __future__ import annotations

import csv
import io
import json

from .kspace import KSolution, ProblemInstance, SolveReport
from .objective import make_objective
from .tangency import TangencyData

CSV_COLUMNS = ("label", "k0", "k1", "ky", "y", "objective", "feasible", "chosen")


def report_to_dict(report: SolveReport, timings: bool = False) -> dict:
    out = {
        "algorithm": report.algorithm,
        "instance": report.instance.describe(),
        "d0": None if report.d0 is None else report.d0.to_dict(),
        "d1": None if report.d1 is None else report.d1.to_dict(),
        "chosen": report.chosen.to_dict(),
        "objective": report.chosen.objective,
        "candidates": [c.to_dict() for c in report.candidates],
        "x": list(report.x),
        "f_eval_count": report.f_eval_count,
    }
    if timings:
        out["wall_time"] = report.wall_time
    return out


def to_json(report: SolveReport, timings: bool = False) -> str:
    return json.dumps(report_to_dict(report, timings), indent=2, allow_nan=False) + "\n"


def report_from_dict(data: dict) -> SolveReport:
    """Rebuild a report; the objective is reconstructed from its family and parameters."""
    inst_d = data["instance"]
    obj = inst_d["objective"]
    spec = make_objective(obj["family"], obj["params"], obj.get("table"))
    if "a" in inst_d:
        inst = ProblemInstance(
            n=inst_d["n"], M=inst_d["M"], spec=spec, bounds=(inst_d["a"], inst_d["b"]), M0=inst_d["M0"]
        )
    else:
        inst = ProblemInstance(n=inst_d["n"], M=inst_d["M"], spec=spec)
    return SolveReport(
        instance=inst,
        d0=None if data["d0"] is None else TangencyData.from_dict(data["d0"]),
        d1=None if data["d1"] is None else TangencyData.from_dict(data["d1"]),
        candidates=[KSolution.from_dict(c) for c in data["candidates"]],
        chosen=KSolution.from_dict(data["chosen"]),
        x=tuple(data["x"]),
        algorithm=data["algorithm"],
        f_eval_count=data["f_eval_count"],
        wall_time=data.get("wall_time", 0.0),
    )


def from_json(text: str) -> SolveReport:
    return report_from_dict(json.loads(text))


def _flag(v) -> str:
    return "true" if v else "false"


def to_csv(report: SolveReport) -> str:
    """Candidate table, one row per evaluated candidate."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for cand in report.candidates:
        row = cand.to_dict()
        writer.writerow(
            [
                row["label"],
                repr(row["k0"]),
                repr(row["k1"]),
                repr(row["ky"]),
                "" if row["y"] is None else repr(row["y"]),
                "" if row["objective"] is None else repr(row["objective"]),
                _flag(row["feasible"]),
                _flag(cand == report.chosen),
            ]
        )
    return buf.getvalue()
