"""Reductions from multiway cut and edge feedback problems to weighted subset FVS."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .decomposition import TreeDecomposition, heuristic_td, nicify, validate_td
from .dp.engine import solve_sfvs
from .graph import LabeledInstance, Problem, edge_key


@dataclass(frozen=True)
class ReductionTrace:
    """What each vertex of the reduced instance stands for in the source.

    Entries are ("vertex", v), ("edge", (u, v)) or ("apex", None).
    """

    source: LabeledInstance
    origin: tuple[tuple[str, object], ...]

    def pull_back(self, deletion) -> frozenset:
        out = set()
        for x in deletion:
            kind, what = self.origin[x]
            if kind == "apex":
                raise ValueError("apex vertex cannot be part of a deletion set")
            out.add(what)
        return frozenset(out)


def nmc_to_wsfvs(instance: LabeledInstance) -> tuple[LabeledInstance, ReductionTrace]:
    """Apex vertex in S joined to all terminals; terminals and apex are undeletable."""
    n = instance.n
    apex = n
    edges = instance.edges() + [(t, apex) for t in sorted(instance.terminals)]
    out = LabeledInstance.from_edges(
        n + 1, edges, list(instance.weight) + [0],
        s_vertices={apex},
        forced_keep=set(instance.forced_keep) | set(instance.terminals) | {apex},
        problem=Problem.SFVS,
        budget=instance.budget,
    )
    origin = tuple(("vertex", v) for v in range(n)) + (("apex", None),)
    return out, ReductionTrace(instance, origin)


def resfes_to_wsfvs(instance: LabeledInstance) -> tuple[LabeledInstance, ReductionTrace]:
    """Subdivide every edge; subdivision vertices of S-edges form S and are undeletable."""
    n = instance.n
    old = instance.edges()
    edges = []
    weight = [0] * n
    origin: list[tuple[str, object]] = [("vertex", v) for v in range(n)]
    s_new = set()
    for idx, (u, v) in enumerate(old):
        x = n + idx
        edges += [(u, x), (x, v)]
        weight.append(instance.ew(u, v))
        origin.append(("edge", (u, v)))
        if (u, v) in instance.s_edges:
            s_new.add(x)
    out = LabeledInstance.from_edges(
        n + len(old), edges, weight,
        s_vertices=s_new,
        forced_keep=set(range(n)) | s_new,
        problem=Problem.SFVS,
        budget=instance.budget,
    )
    return out, ReductionTrace(instance, tuple(origin))


def mwc_to_resfes(instance: LabeledInstance) -> LabeledInstance:
    """Apex joined to every terminal; the apex edges become the S-edges."""
    n = instance.n
    apex = n
    apex_edges = [(t, apex) for t in sorted(instance.terminals)]
    return LabeledInstance.from_edges(
        n + 1, instance.edges() + apex_edges, [1] * (n + 1),
        s_edges=apex_edges,
        edge_weight=dict(instance.edge_weight),
        problem=Problem.RESFES,
        budget=instance.budget,
    )


def mwc_to_wsfvs(instance: LabeledInstance) -> tuple[LabeledInstance, ReductionTrace]:
    mid = mwc_to_resfes(instance)
    out, trace = resfes_to_wsfvs(mid)
    n = instance.n
    origin = []
    for kind, what in trace.origin:
        if kind == "vertex":
            origin.append(("apex", None) if what == n else ("vertex", what))
        elif what[1] == n:  # subdivision of an apex edge
            origin.append(("apex", None))
        else:
            origin.append((kind, what))
    return out, ReductionTrace(instance, tuple(origin))


# ----------------------------------------------------- decomposition transfer


def add_apex_to_bags(td: TreeDecomposition, apex: int) -> TreeDecomposition:
    if not td.bags:
        return TreeDecomposition((frozenset([apex]),), ())
    return TreeDecomposition(tuple(b | {apex} for b in td.bags), td.edges)


def subdivide_bags(td: TreeDecomposition, source: LabeledInstance) -> TreeDecomposition:
    """Hang a bag {u, v, x_uv} off some bag covering each edge uv."""
    bags = list(td.bags)
    edges = list(td.edges)
    holder: dict[tuple[int, int], int] = {}
    for i, b in enumerate(td.bags):
        for u in b:
            for v in source.adjacency[u]:
                if u < v and v in b and (u, v) not in holder:
                    holder[(u, v)] = i
    for idx, (u, v) in enumerate(source.edges()):
        bags.append(frozenset((u, v, source.n + idx)))
        edges.append((holder[(u, v)], len(bags) - 1))
    return TreeDecomposition(tuple(bags), tuple(edges))


def _narrower(transferred: TreeDecomposition, reduced: LabeledInstance) -> TreeDecomposition:
    # subdividing a forest leaves a forest; the transferred bags would have width 2
    if transferred.width <= 2:
        alt = heuristic_td(reduced)
        if alt.width < transferred.width:
            return alt
    return transferred


def transfer_decomposition(problem: Problem, source: LabeledInstance, td: TreeDecomposition,
                           reduced: LabeledInstance) -> TreeDecomposition:
    if problem == Problem.NMC:
        out = add_apex_to_bags(td, source.n)
    elif problem == Problem.RESFES:
        out = _narrower(subdivide_bags(td, source), reduced)
    elif problem == Problem.MWC:
        mid = mwc_to_resfes(source)
        out = _narrower(subdivide_bags(add_apex_to_bags(td, source.n), mid), reduced)
    else:
        raise ValueError(f"no reduction for {problem}")
    rep = validate_td(reduced, out)
    if not rep:
        raise AssertionError(f"transferred decomposition is invalid: {rep.message}")
    return out


REDUCTIONS = {
    Problem.NMC: nmc_to_wsfvs,
    Problem.RESFES: resfes_to_wsfvs,
    Problem.MWC: mwc_to_wsfvs,
}


@dataclass
class ReductionSolution:
    problem: Problem
    status: str  # optimal | infeasible | budget-exceeded
    optimum_weight: int | None
    deletion_set: frozenset | None  # vertices (NMC) or edges (MWC, RESFES)
    feasible_within_budget: bool
    width: int
    stats: dict = field(default_factory=dict)


def solve_via_reduction(instance: LabeledInstance,
                        nice_td_provider: Callable[[LabeledInstance], TreeDecomposition] | None = None,
                        threads: int = 1) -> ReductionSolution:
    """Reduce to weighted subset FVS, solve it exactly and map the answer back."""
    problem = instance.problem
    if problem not in REDUCTIONS:
        raise ValueError(f"{problem.value} is not solved by reduction")
    reduced, trace = REDUCTIONS[problem](instance)
    td = (nice_td_provider or heuristic_td)(instance)
    td2 = transfer_decomposition(problem, instance, td, reduced)
    res = solve_sfvs(reduced, nicify(td2, reduced), threads=threads)
    if res.status == "infeasible":
        return ReductionSolution(problem, "infeasible", None, None, False, td2.width, res.stats)
    deletion = trace.pull_back(res.deletion_set)
    if problem.is_edge_problem:
        weight = sum(instance.ew(*e) for e in deletion)
        deletion = frozenset(edge_key(*e) for e in deletion)
    else:
        weight = sum(instance.weight[v] for v in deletion)
    if weight != res.deletion_weight:
        raise AssertionError("pulled-back weight differs from the reduced optimum")
    ok = instance.budget is None or weight <= instance.budget
    return ReductionSolution(problem, "optimal" if ok else "budget-exceeded", weight, deletion, ok,
                             td2.width, res.stats)
