"""Dynamic program over a nice tree decomposition.

For every node t and every I ⊆ B_t the table keeps one maximum-weight partial
solution per signature class. In compact mode each stored solution carries a
normalised skeleton instead of its full vertex set, and the kept vertex set is
recovered at the end by walking the provenance links. Reference mode keeps the
full induced subgraph, which is slower but follows the textbook definition
literally.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from ..decomposition import NiceNode, NiceTreeDecomposition, validate_nice
from ..graph import Problem
from .signature import Signature, analyse
from .skeleton import Skeleton, normalise


class Record:
    """One stored partial solution: weight, skeleton and how it was built."""

    __slots__ = ("weight", "sk", "origin")

    def __init__(self, weight: int, sk: Skeleton, origin):
        self.weight = weight
        self.sk = sk
        self.origin = origin

    def vertex_set(self) -> frozenset[int]:
        out: set[int] = set()
        seen: set[int] = set()
        stack = [self]
        while stack:
            r = stack.pop()
            if id(r) in seen:
                continue
            seen.add(id(r))
            o = r.origin
            if o is None:
                continue
            if o[0] == "intro":
                out.add(o[2])
                stack.append(o[1])
            elif o[0] == "join":
                stack.append(o[1])
                stack.append(o[2])
            else:
                stack.append(o[1])
        return frozenset(out)


Table = dict  # frozenset I -> {Signature: Record}


@dataclass
class SolveResult:
    status: str  # optimal | infeasible | budget-exceeded
    max_weight: int | None
    kept_set: frozenset[int] | None
    deletion_weight: int | None
    deletion_set: frozenset[int] | None
    feasible_within_budget: bool
    stats: dict = field(default_factory=dict)


class _Engine:
    def __init__(self, instance, soct: bool, compact: bool, threads: int):
        self.adj = instance.adjacency
        self.s = instance.s_vertices
        self.w = instance.weight
        self.forced = instance.forced_keep
        self.soct = soct
        self.compact = compact
        self.pool = ThreadPoolExecutor(threads) if threads > 1 else None

    def _map(self, fn, items):
        if self.pool is None or len(items) < 2:
            return [fn(x) for x in items]
        return list(self.pool.map(fn, items))

    def reduce(self, cands, bag: frozenset[int]) -> dict[Signature, Record]:
        """Keep the heaviest candidate per signature (first one on ties)."""
        best: dict[Signature, tuple] = {}
        for weight, sk, origin in cands:
            a = analyse(sk.adj, sk.adj.keys(), bag, sk.s, self.soct)
            if a is None:
                continue
            sig = a.signature()
            cur = best.get(sig)
            if cur is None or weight > cur[0]:
                best[sig] = (weight, sk, origin, a)
        out = {}
        for sig, (weight, sk, origin, a) in best.items():
            out[sig] = Record(weight, normalise(a, sk.s) if self.compact else sk, origin)
        return out

    def step(self, node: NiceNode, kids: list[Table]) -> Table:
        if node.kind == "leaf":
            empty = Skeleton.empty()
            return {frozenset(): self.reduce([(0, empty, None)], frozenset())}
        if node.kind == "introduce":
            return self._introduce(node.vertex, kids[0])
        if node.kind == "forget":
            return self._forget(node.vertex, kids[0], node.bag)
        if node.kind == "join":
            return self._join(kids[0], kids[1])
        raise ValueError(f"unknown node kind {node.kind!r}")

    def _introduce(self, v: int, child: Table) -> Table:
        in_s = v in self.s
        wv = self.w[v]
        nb = self.adj[v]

        def work(item):
            I, entries = item
            J = I | {v}
            nbrs = [u for u in nb if u in I]
            cands = [(r.weight + wv, r.sk.introduce(v, nbrs, in_s), ("intro", r, v)) for r in entries.values()]
            return J, self.reduce(cands, J)

        items = list(child.items())
        out: Table = {}
        for (I, entries), (J, red) in zip(items, self._map(work, items)):
            if v not in self.forced:
                out[I] = entries
            if red:
                out[J] = red
        return out

    def _forget(self, v: int, child: Table, bag: frozenset[int]) -> Table:
        groups: dict[frozenset[int], list] = {}
        for I, entries in child.items():
            J = I - {v}
            if v not in I and v in self.forced:
                continue
            lst = groups.setdefault(J, [])
            lst.extend((r.weight, r.sk, ("pass", r)) for r in entries.values())
        items = list(groups.items())
        reduced = self._map(lambda it: self.reduce(it[1], it[0]), items)
        return {J: red for (J, _), red in zip(items, reduced) if red}

    def _join(self, left: Table, right: Table) -> Table:
        w = self.w

        def work(I):
            wi = sum(w[x] for x in I)
            cands = []
            for r1 in left[I].values():
                for r2 in right[I].values():
                    cands.append((r1.weight + r2.weight - wi, r1.sk.join(r2.sk), ("join", r1, r2)))
            return self.reduce(cands, I)

        keys = [I for I in left if I in right]
        return {I: red for I, red in zip(keys, self._map(work, keys)) if red}


def run_dp(instance, nice: NiceTreeDecomposition, soct: bool, compact: bool = True, threads: int = 1):
    """Run the table computation bottom-up; returns (root table, stats)."""
    eng = _Engine(instance, soct, compact, threads)
    tables: dict[int, Table] = {}
    max_classes = 0
    try:
        for i, node in enumerate(nice.nodes):
            kids = [tables.pop(c) for c in node.children]
            tab = eng.step(node, kids)
            max_classes = max(max_classes, sum(len(e) for e in tab.values()))
            tables[i] = tab
    finally:
        if eng.pool is not None:
            eng.pool.shutdown()
    return tables[nice.root], {"nodes": len(nice.nodes), "max_classes": max_classes}


def _solve(instance, nice, soct: bool, compact: bool, threads: int, check: bool) -> SolveResult:
    if check:
        rep = validate_nice(nice, instance)
        if not rep:
            raise ValueError(f"invalid nice tree decomposition: {rep.message}")
    t0 = time.perf_counter()
    root, stats = run_dp(instance, nice, soct, compact, threads)
    stats["width"] = nice.width
    stats["wall_time"] = time.perf_counter() - t0
    entries = root.get(frozenset(), {})
    if not entries:
        return SolveResult("infeasible", None, None, None, None, False, stats)
    rec = next(iter(entries.values()))
    kept = rec.vertex_set()
    if sum(instance.weight[v] for v in kept) != rec.weight:
        raise AssertionError("reconstructed solution weight does not match the table")
    deletion = frozenset(range(instance.n)) - kept
    dw = instance.total_weight() - rec.weight
    ok = instance.budget is None or dw <= instance.budget
    return SolveResult("optimal" if ok else "budget-exceeded", rec.weight, kept, dw, deletion, ok, stats)


def solve_soct(instance, nice_td, *, compact: bool = True, threads: int = 1, check: bool = True) -> SolveResult:
    """Maximum-weight vertex set inducing an S-bipartite graph (all forced vertices kept)."""
    return _solve(instance, nice_td, True, compact, threads, check)


def solve_sfvs(instance, nice_td, *, compact: bool = True, threads: int = 1, check: bool = True) -> SolveResult:
    """Maximum-weight vertex set inducing a graph without S-traversing cycles."""
    return _solve(instance, nice_td, False, compact, threads, check)


def dp_step(instance, node: NiceNode, child_tables: list[Table], mode=Problem.SOCT, compact: bool = True) -> Table:
    """Compute one node's table from its children's tables."""
    eng = _Engine(instance, Problem(mode) == Problem.SOCT, compact, 1)
    return eng.step(node, child_tables)


def reduce_set(instance, candidates, bag, mode=Problem.SOCT) -> dict[Signature, frozenset[int]]:
    """One maximum-weight representative per signature over explicit vertex sets.

    Invalid candidates are dropped; ties go to the lexicographically smallest set.
    """
    soct = Problem(mode) == Problem.SOCT
    bag = frozenset(bag)
    best: dict[Signature, tuple] = {}
    for X in candidates:
        X = frozenset(X)
        a = analyse(instance.adjacency, X, bag, instance.s_vertices, soct)
        if a is None:
            continue
        key = (-sum(instance.weight[v] for v in X), sorted(X))
        sig = a.signature()
        if sig not in best or key < best[sig][0]:
            best[sig] = (key, X)
    return {sig: X for sig, (_, X) in best.items()}
