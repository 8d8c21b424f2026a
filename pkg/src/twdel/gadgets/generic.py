"""Lower-bound instances for subset FVS, subset OCT and even cycle transversal.

The base is m copies of a 2k^2 vertex grid, one copy per edge of a
permutation independent set instance H. Each column gets a column selector,
each row a row selector, copy p carries the edge gadget of the p-th edge of
H, and consecutive copies are tied by a propagation gadget.
"""

from __future__ import annotations

from ..decomposition import TreeDecomposition
from ..graph import Problem
from .base import Builder, GeneratedInstance, add_base, column, row
from .grid import GridProblemInstance

# which variant of each gadget family every problem uses
GADGET_TABLE = {
    Problem.SFVS: {"column-selector": 1, "row-selector": 1, "edge": 1, "propagation": 1},
    Problem.SOCT: {"column-selector": 1, "row-selector": 2, "edge": 1, "propagation": 2},
    Problem.ECT: {"column-selector": 2, "row-selector": 1, "edge": 2, "propagation": 3},
}

# witness bags stay within WITNESS_WIDTH_CONSTANT * k (checked for k = 2, 3)
WITNESS_WIDTH_CONSTANT = 48


def attach_column_selector(b: Builder, p: int, j: int, k: int, variant: int):
    added = []
    cells = column(b, p, j, k)
    # the column itself becomes a clique minus the homologous pairs
    for i in range(1, k + 1):
        for i2 in range(1, k + 1):
            if i != i2:
                for z in (1, 2):
                    for z2 in (1, 2):
                        b.link(b["v", p, i, j, z], b["v", p, i2, j, z2])
    twins = k + 1 if variant == 2 else k
    for z in (1, 2):
        for t in range(1, twins + 1):
            d = b.add("d", p, j, t, z, in_s=True)
            added.append(d)
            for v in column(b, p, j, k, z):
                b.link(d, v)
    for i in range(1, k + 1):
        d = b.add("d", p, j, i, in_s=True)
        added.append(d)
        if variant == 2:
            u = b.add("du", p, j, i)
            added.append(u)
            b.link(d, u)
            b.link(u, b["v", p, i, j, 1])
        else:
            b.link(d, b["v", p, i, j, 1])
        for i2 in range(1, k + 1):
            if i2 != i:
                b.link(d, b["v", p, i2, j, 2])
    b.record("column-selector", f"G{variant}(C)", p, j, added, cells)


def attach_row_selector(b: Builder, p: int, i: int, k: int, variant: int):
    firsts = row(b, p, i, k, 1)
    if variant == 1:
        added = [b.add("r", p, i, 1, in_s=True), b.add("r", p, i, 2, in_s=True)]
    else:
        added = [b.add("r", p, i, 1), b.add("r", p, i, 2, in_s=True), b.add("r", p, i, 3)]
        b.link(added[0], added[2])
    for x in added:
        for v in firsts:
            b.link(x, v)
    b.record("row-selector", f"G{variant}(R)", p, i, added, row(b, p, i, k))


def attach_edge_gadget(b: Builder, p: int, cells, variant: int):
    (i, j), (i2, j2) = cells
    a, c = b["v", p, i, j, 1], b["v", p, i2, j2, 1]
    b.link(a, c)
    s = b.add("s", p, in_s=True)
    added = [s]
    b.link(s, a)
    if variant == 2:
        q = b.add("sq", p)
        added.append(q)
        b.link(s, q)
        b.link(q, c)
    else:
        b.link(s, c)
    attach = [b["v", p, i, j, z] for z in (1, 2)] + [b["v", p, i2, j2, z] for z in (1, 2)]
    b.record("edge", f"G{variant}(E)", p, cells, added, attach)


def attach_propagation(b: Builder, p: int, k: int, variant: int):
    added = []
    rs = [b.add("pr", p, i) for i in range(1, k + 1)]
    cs = [b.add("pc", p, j) for j in range(1, k + 1)]
    hub = b.add("pcs", p, in_s=True)
    added += rs + cs + [hub]
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            lower = b["v", p, i, j, 2]
            if variant >= 2:
                w = b.add("pw", p, i, j)
                added.append(w)
                b.link(rs[i - 1], w)
                b.link(w, lower)
            else:
                b.link(rs[i - 1], lower)
            b.link(rs[i - 1], b["v", p + 1, i, j, 1])
            b.link(cs[j - 1], lower)
            b.link(cs[j - 1], b["v", p + 1, i, j, 1])
    for j in range(1, k + 1):
        b.link(hub, cs[j - 1])
        if variant == 3:
            c2 = b.add("pc2", p, j)
            added.append(c2)
            b.link(c2, cs[j - 1])
            b.link(c2, hub)
    attach = [b["v", p, i, j, 2] for i in range(1, k + 1) for j in range(1, k + 1)]
    attach += [b["v", p + 1, i, j, 1] for i in range(1, k + 1) for j in range(1, k + 1)]
    b.record("propagation", f"G{variant}(P)", p, p, added, attach)


def generic_budget(k: int, m: int) -> int:
    return 2 * (k - 1) * k * m


def construct_lb_instance(problem, H: GridProblemInstance) -> GeneratedInstance:
    problem = Problem(problem)
    if problem not in GADGET_TABLE:
        raise ValueError(f"no generic construction for {problem.value}")
    if H.variant != "permutation-independent-set":
        raise ValueError("the construction needs a permutation-independent-set source")
    m = len(H.edges)
    if m == 0:
        raise ValueError("the source instance needs at least one edge")
    k = H.k
    table = GADGET_TABLE[problem]
    b = Builder()
    add_base(b, m, k)
    for p in range(1, m + 1):
        for j in range(1, k + 1):
            attach_column_selector(b, p, j, k, table["column-selector"])
        for i in range(1, k + 1):
            attach_row_selector(b, p, i, k, table["row-selector"])
        attach_edge_gadget(b, p, H.edges[p - 1], table["edge"])
        if p < m:
            attach_propagation(b, p, k, table["propagation"])
    budget = generic_budget(k, m)
    planted = None
    if H.planted is not None:
        keep = {b["v", p, i, j, z] for p in range(1, m + 1) for (i, j) in H.planted for z in (1, 2)}
        planted = frozenset(v for v in range(2 * k * k * m) if v not in keep)
    inst = b.instance(problem=problem, budget=budget)
    meta = {
        "construction": "generic",
        "k": k,
        "m": m,
        "problem": problem.value,
        "gadgets": {fam: f"G{v}({fam[0].upper()})" for fam, v in table.items()},
        "witness_width_constant": WITNESS_WIDTH_CONSTANT,
    }
    if problem == Problem.ECT:
        meta["note"] = "no dynamic program for even cycle transversal; verify with the oracle"
    gen = GeneratedInstance(inst, budget, planted, None, meta, tuple(b.names), tuple(b.attachments))
    gen.witness_pd = witness_path_decomposition(gen)
    return gen


def _propagation_core(gen: GeneratedInstance, p: int, added) -> tuple[list[int], list[int]]:
    """Split a propagation gadget into the O(k) core and the single-contact rest."""
    adj = gen.instance.adjacency
    base = {v for v in range(len(gen.names)) if gen.names[v][0] == "v" and gen.names[v][1] in (p, p + 1)}
    core, rest = [], []
    for x in added:
        (rest if sum(1 for y in adj[x] if y in base) == 1 else core).append(x)
    return core, rest


def witness_path_decomposition(gen: GeneratedInstance) -> TreeDecomposition:
    """Path decomposition of width O(k) following the copy-by-copy bag schedule."""
    if gen.metadata.get("construction") != "generic":
        raise ValueError("witness schedules exist only for the generic constructions")
    k, m = gen.metadata["k"], gen.metadata["m"]
    col: dict[tuple[int, int], list[int]] = {}
    rsel: dict[int, list[int]] = {p: [] for p in range(1, m + 1)}
    edge: dict[int, tuple[list[int], tuple[int, int]]] = {}
    core: dict[int, list[int]] = {p: [] for p in range(0, m + 1)}
    loose: dict[int, list[int]] = {}  # base vertex -> single-contact propagation vertices
    for a in gen.attachments:
        if a.family == "column-selector":
            col[(a.copy, a.index)] = sorted(set(a.added) | a.attach)
        elif a.family == "row-selector":
            rsel[a.copy] += a.added
        elif a.family == "edge":
            (_, j), (_, j2) = a.index
            edge[a.copy] = (list(a.added), (j, j2))
        elif a.family == "propagation":
            c, rest = _propagation_core(gen, a.copy, a.added)
            core[a.copy] = c
            for x in rest:
                (h,) = [y for y in gen.instance.adjacency[x] if gen.names[y][0] == "v"]
                loose.setdefault(h, []).append(x)
    Y: dict[int, set[int]] = {0: set()}
    Z: dict[int, list[set[int]]] = {}
    for p in range(1, m + 1):
        extra, (j, j2) = edge[p]
        Y[p] = set(core[p]) | set(extra) | set(col[(p, j)]) | set(col[(p, j2)]) | set(rsel[p])
        Z[p] = [set(col[(p, jj)]) for jj in range(1, k + 1) if jj not in (j, j2)]
    schedule = []
    for p in range(1, m + 1):
        schedule.append(Y[p - 1] | Y[p])
        schedule += [Y[p - 1] | Y[p] | z for z in Z[p]]
    bags = []
    seen: set[int] = set()
    for bag in schedule:
        bags.append(frozenset(bag))
        for v in sorted(bag):
            if v in seen or gen.names[v][0] != "v":
                continue
            seen.add(v)
            for x in loose.get(v, ()):
                bags.append(frozenset(bag | {x}))
    edges = tuple((t, t + 1) for t in range(len(bags) - 1))
    return TreeDecomposition(tuple(bags), edges)
