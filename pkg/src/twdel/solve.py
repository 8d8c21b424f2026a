"""One entry point for every supported problem, returning a checked result record."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from .decomposition import TreeDecomposition, heuristic_td, nicify, validate_td
from .dp.engine import solve_sfvs, solve_soct
from .graph import LabeledInstance, Problem
from .io import one_indexed
from .oracle import exact_solve, solution_is_valid
from .reductions import REDUCTIONS, solve_via_reduction


@dataclass
class ResultRecord:
    problem: str
    status: str  # optimal | infeasible | budget-exceeded | error
    optimum_weight: int | None
    deletion_set: list | None  # 1-indexed vertices, or [u, v] pairs for edge problems
    budget: int | None
    decomposition_width_used: int | None
    stats: dict = field(default_factory=dict)

    FIELDS = ("problem", "status", "optimum_weight", "deletion_set", "budget", "decomposition_width_used")

    def as_dict(self, timing: bool = True) -> dict:
        stats = dict(self.stats)
        if not timing:
            stats.pop("wall_time", None)
        out = {f: getattr(self, f) for f in self.FIELDS}
        out["stats"] = stats
        return out

    def to_text(self, timing: bool = True) -> str:
        d = self.as_dict(timing)
        lines = []
        for f in self.FIELDS:
            v = d[f]
            if f == "deletion_set" and v is not None:
                v = " ".join(f"{x[0]}-{x[1]}" if isinstance(x, list) else str(x) for x in v)
            lines.append(f"{f}: {'none' if v is None else v}")
        for key in sorted(d["stats"]):
            val = d["stats"][key]
            lines.append(f"stats.{key}: {round(val, 4) if isinstance(val, float) else val}")
        return "\n".join(lines) + "\n"

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.as_dict(timing), sort_keys=True) + "\n"


def solve_instance(instance: LabeledInstance, td: TreeDecomposition | None = None,
                   threads: int = 1) -> ResultRecord:
    """Dispatch to the dynamic program, a reduction, or (for ECT) the exact oracle."""
    p = instance.problem
    t0 = time.perf_counter()
    if td is not None:
        rep = validate_td(instance, td)
        if not rep:
            raise ValueError(f"invalid decomposition: {rep.message}")
    if p in (Problem.SFVS, Problem.SOCT):
        td = td or heuristic_td(instance)
        solver = solve_soct if p == Problem.SOCT else solve_sfvs
        res = solver(instance, nicify(td, instance), threads=threads)
        status, weight, deletion = res.status, res.deletion_weight, res.deletion_set
        width = td.width
        stats = {"nodes": res.stats.get("nodes"), "max_classes": res.stats.get("max_classes")}
    elif p in REDUCTIONS:
        provider = (lambda _inst: td) if td is not None else None
        res = solve_via_reduction(instance, provider, threads=threads)
        status, weight, deletion = res.status, res.optimum_weight, res.deletion_set
        width = res.width
        stats = {"nodes": res.stats.get("nodes"), "max_classes": res.stats.get("max_classes")}
    elif p == Problem.ECT:
        res = exact_solve(instance)
        weight, deletion = res.optimum_weight, res.deletion_set
        if weight is None:
            status = "infeasible"
        else:
            status = "optimal" if instance.budget is None or weight <= instance.budget else "budget-exceeded"
        width = None
        stats = {"solver": "oracle"}
    else:
        raise ValueError(f"unsupported problem {p}")
    if deletion is not None and not solution_is_valid(instance, deletion):
        raise AssertionError("solver returned a deletion set that fails the problem predicate")
    stats["wall_time"] = time.perf_counter() - t0
    return ResultRecord(
        p.value, status, weight,
        one_indexed(deletion) if deletion is not None else None,
        instance.budget, width, stats,
    )
