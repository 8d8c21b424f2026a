"""Lower-bound instances for node multiway cut and (edge) multiway cut."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from ..decomposition import heuristic_td
from ..graph import Problem
from .base import Builder, GeneratedInstance, add_base, column
from .grid import GridProblemInstance


def construct_nmc_lb(H: GridProblemInstance) -> GeneratedInstance:
    """Grid copies with column cliques, k+2 terminals and k column connectors."""
    if H.variant != "independent-set":
        raise ValueError("the node multiway cut construction needs an independent-set source")
    k, m = H.k, len(H.edges)
    b = Builder()
    add_base(b, m, k)
    for p in range(1, m + 1):
        for j in range(1, k + 1):
            cells = column(b, p, j, k)
            for x in cells:
                for y in cells:
                    if x < y and b.names[x][2] != b.names[y][2]:
                        b.link(x, y)
    t = b.add("t")
    t2 = b.add("t'")
    rs = [b.add("r", i) for i in range(1, k + 1)]
    cs = [b.add("c", j) for j in range(1, k + 1)]
    near_terminal = set()
    for p, ((i, j), (i2, j2)) in enumerate(H.edges, start=1):
        a, c = b["v", p, i, j, 2], b["v", p, i2, j2, 2]
        b.link(a, c)
        b.link(t, a)
        b.link(t2, c)
        near_terminal |= {a, c}
    for p in range(1, m + 1):
        for i in range(1, k + 1):
            for j in range(1, k + 1):
                for z in (1, 2):
                    v = b["v", p, i, j, z]
                    if v not in near_terminal:
                        b.link(v, rs[i - 1])
                # connectors are indexed by column; the row index would tie rows together
                b.link(b["v", p, i, j, 1], cs[j - 1])
    budget = 2 * (k - 1) * k * m
    terminals = {t, t2, *rs}
    planted = None
    if H.planted is not None:
        keep = {b["v", p, i, j, z] for p in range(1, m + 1) for (i, j) in H.planted for z in (1, 2)}
        planted = frozenset(v for v in range(2 * k * k * m) if v not in keep)
    inst = b.instance(problem=Problem.NMC, terminals=terminals, budget=budget)
    meta = {"construction": "nmc", "k": k, "m": m, "problem": "nmc", "new_vertices": 2 * k + 2,
            "terminals": len(terminals), "witness": "heuristic"}
    return GeneratedInstance(inst, budget, planted, heuristic_td(inst), meta, tuple(b.names))


@dataclass(frozen=True)
class MWCParameters:
    k: int
    mu: int
    max_degree: int
    m: int
    h: int
    budget: int
    copies: int


def mwc_parameters(H: GridProblemInstance) -> MWCParameters:
    k, mu = H.k, len(H.edges)
    cells = [(i, j) for i in range(1, k + 1) for j in range(1, k + 1)]
    delta = max((H.degree(c) for c in cells), default=0)
    m = k * k * delta
    h = 12 * m - k * delta - comb(k, 2)
    budget = (h + 1) * (k - 1) * k * (mu + k * k) + h
    return MWCParameters(k, mu, delta, m, h, budget, mu + k * k)


def construct_mwc_lb(H: GridProblemInstance, expand: bool = True) -> GeneratedInstance:
    """Multiway cut instance whose weighted edges become parallel 2-edge paths.

    With ``expand=False`` the weighted graph is returned directly with edge
    weights; the planted deletion is then a set of weighted edges.
    """
    if H.variant != "permutation-clique":
        raise ValueError("the multiway cut construction needs a permutation-clique source")
    if any(a[0] == c[0] for a, c in H.edges):
        raise ValueError("same-row edge in the source instance")
    prm = mwc_parameters(H)
    k, mu = prm.k, prm.mu
    heavy = prm.budget + 1
    b = Builder()
    add_base(b, prm.copies, k, layers=1)
    rs = [b.add("r", i) for i in range(1, k + 1)]
    t = b.add("t")
    cs = [b.add("c", j) for j in range(1, k + 1)]
    weighted: list[tuple[int, int, int]] = []
    planted: list[int] = []  # indices into weighted

    def add(x, y, w):
        weighted.append((x, y, w))
        return len(weighted) - 1

    clique = set(H.planted) if H.planted is not None else None

    def v(p, i, j):
        return b["v", p, i, j, 1]

    for p in range(1, prm.copies + 1):
        for i in range(1, k + 1):
            for j in range(1, k + 1):
                e = add(rs[i - 1], v(p, i, j), prm.h + 1)
                if clique is not None and (i, j) not in clique:
                    planted.append(e)
                # undeletable link to the column connector
                add(v(p, i, j), cs[j - 1], heavy)
    for p, ((i, j), (i2, j2)) in enumerate(H.edges, start=1):
        a, x, z, y, c = (b.add("g", p, n) for n in ("a", "x", "z", "y", "b"))
        gadget = {
            "ax": add(a, x, 5), "xz": add(x, z, 3), "zy": add(z, y, 3), "yb": add(y, c, 5),
            "xy": add(x, y, 3),
            "av": add(a, v(p, i, j), 3), "ar": add(a, rs[i - 1], 3),
            "bv": add(c, v(p, i2, j2), 3), "br": add(c, rs[i2 - 1], 3),
            "zt": add(z, t, heavy),
        }
        if clique is not None:
            inside = ((i, j) in clique, (i2, j2) in clique)
            if inside == (False, False):
                cut = ["av", "ar", "bv", "br"]
            elif inside == (True, False):
                cut = ["ax", "bv", "br"]
            elif inside == (False, True):
                cut = ["yb", "av", "ar"]
            else:
                cut = ["xz", "zy", "xy"]
            planted += [gadget[key] for key in cut]
    for j in range(1, k + 1):
        for i in range(1, k + 1):
            delta = prm.max_degree - H.degree((i, j))
            if delta == 0:
                continue
            p = mu + i + (j - 1) * k
            w = b.add("w", i, j)
            to_t, to_v, to_r = add(w, t, 11 * delta), add(w, v(p, i, j), 6 * delta), add(w, rs[i - 1], 6 * delta)
            if clique is not None:
                planted += [to_t] if (i, j) in clique else [to_v, to_r]
    terminals = {*rs, t}
    meta = {
        "construction": "mwc", "k": k, "m": prm.m, "mu": mu, "max_degree": prm.max_degree,
        "h": prm.h, "copies": prm.copies, "problem": "mwc", "expanded": expand,
    }
    if not expand:
        ew = {}
        for x, y, w in weighted:
            b.link(x, y)
            ew[(x, y)] = w
        inst = b.instance(problem=Problem.MWC, terminals=terminals, budget=prm.budget, edge_weight=ew)
        pd = None
        if clique is not None:
            pd = frozenset((min(x, y), max(x, y)) for x, y, _ in (weighted[e] for e in planted))
        return GeneratedInstance(inst, prm.budget, pd, None, meta, tuple(b.names))
    # cutting a weight-w edge means cutting the first hop of each of its w paths
    first_hops: list[list[tuple[int, int]]] = []
    for n_edge, (x, y, w) in enumerate(weighted):
        hops = []
        for copy in range(w):
            mid = b.add("e", n_edge, copy)
            b.link(x, mid)
            b.link(mid, y)
            hops.append((min(x, mid), max(x, mid)))
        first_hops.append(hops)
    pd = None
    if clique is not None:
        pd = frozenset(e for n_edge in planted for e in first_hops[n_edge])
    inst = b.instance(problem=Problem.MWC, terminals=terminals, budget=prm.budget)
    return GeneratedInstance(inst, prm.budget, pd, None, meta, tuple(b.names))
