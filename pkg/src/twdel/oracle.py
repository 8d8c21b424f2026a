"""Ground-truth solvers and checks used to validate the dynamic program.

``brute_solve`` enumerates deletion sets directly. ``exact_solve`` handles the
mid-sized generated instances with a hitting-set integer program whose rows
are obstructions found lazily in the current solution. The cycle and path
enumerators at the bottom do not use block decompositions at all and serve
as an independent check of the graph kernel.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from .graph import (
    LabeledInstance, Parity, Problem, _raw_blocks, components, edge_key, has_even_cycle,
    has_s_traversing_cycle, is_s_bipartite, two_colouring,
)

MAX_VERTEX_N = 14
MAX_EDGE_M = 18


class TooLarge(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    optimum_weight: int | None  # None when no feasible deletion set exists
    deletion_set: frozenset | None
    count: int | None = None

    @property
    def feasible(self) -> bool:
        return self.optimum_weight is not None


# ------------------------------------------------------------- predicates


def terminals_separated(adj, verts, terminals) -> bool:
    comp = components(adj, verts)
    reps = [comp[t] for t in terminals if t in verts]
    return len(reps) == len(set(reps))


def _edge_graph(n, edges):
    adj: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def solution_is_valid(instance: LabeledInstance, deletion) -> bool:
    """Check a deletion set (vertices, or edge pairs for edge problems)."""
    p = instance.problem
    if p.is_edge_problem:
        removed = {edge_key(u, v) for u, v in deletion}
        if p == Problem.RESFES and removed & instance.s_edges:
            return False
        rest = [e for e in instance.edges() if e not in removed]
        adj = _edge_graph(instance.n, rest)
        if p == Problem.MWC:
            return terminals_separated(adj, set(range(instance.n)), instance.terminals)
        return all(_is_bridge(adj, u, v) for u, v in instance.s_edges if (u, v) not in removed)
    deletion = set(deletion)
    if deletion & instance.forced_keep:
        return False
    if p == Problem.NMC and deletion & instance.terminals:
        return False
    keep = set(range(instance.n)) - deletion
    adj = instance.adjacency
    if p == Problem.SFVS:
        return not has_s_traversing_cycle(adj, keep, instance.s_vertices)
    if p == Problem.SOCT:
        return is_s_bipartite(adj, keep, instance.s_vertices)
    if p == Problem.ECT:
        return not has_even_cycle(adj, keep)
    if p == Problem.NMC:
        return terminals_separated(adj, keep, instance.terminals)
    raise ValueError(f"unsupported problem {p}")


def _is_bridge(adj, u, v) -> bool:
    seen = {u}
    stack = [u]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if (x, y) in ((u, v), (v, u)):
                continue
            if y == v:
                return False
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return True


# ------------------------------------------------------------ brute force


def _deletables(instance):
    p = instance.problem
    if p.is_edge_problem:
        items = [e for e in instance.edges() if not (p == Problem.RESFES and e in instance.s_edges)]
        return items, [instance.ew(*e) for e in items]
    banned = set(instance.forced_keep)
    if p == Problem.NMC:
        banned |= instance.terminals
    items = [v for v in range(instance.n) if v not in banned]
    return items, [instance.weight[v] for v in items]


def brute_solve(instance: LabeledInstance, count: bool = False,
                max_n: int = MAX_VERTEX_N, max_m: int = MAX_EDGE_M) -> OracleResult:
    """Exact optimum by subset enumeration in increasing cardinality."""
    if instance.problem.is_edge_problem:
        if instance.m > max_m:
            raise TooLarge(f"{instance.m} edges exceeds the enumeration limit {max_m}")
    elif instance.n > max_n:
        raise TooLarge(f"{instance.n} vertices exceeds the enumeration limit {max_n}")
    items, weights = _deletables(instance)
    order = sorted(range(len(items)), key=lambda i: weights[i])
    best = None
    best_set = None
    hits = 0
    for r in range(len(items) + 1):
        floor = sum(weights[i] for i in order[:r])
        if best is not None and (floor > best or (floor == best and not count)):
            break
        for combo in combinations(range(len(items)), r):
            w = sum(weights[i] for i in combo)
            if best is not None and w > best:
                continue
            if best is not None and w == best and not count:
                continue
            chosen = [items[i] for i in combo]
            if solution_is_valid(instance, chosen):
                if best is None or w < best:
                    best, best_set, hits = w, frozenset(chosen), 1
                else:
                    hits += 1
    return OracleResult(best, best_set, hits if count and best is not None else None)


# ------------------------------------------------ lazy hitting-set solver


def _path_between(adj, alive, src, dst, banned=()):
    prev = {src: None}
    queue = deque([src])
    while queue:
        x = queue.popleft()
        if x == dst:
            break
        for y in adj[x]:
            if y in alive and y not in prev and y not in banned:
                prev[y] = x
                queue.append(y)
    if dst not in prev:
        return None
    path = [dst]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[::-1]


def _cycle_through(adj, block, s):
    """A short cycle of G[block] through s (block is 2-connected, size >= 3)."""
    nbrs = sorted(w for w in adj[s] if w in block)
    a = nbrs[0]
    best = None
    for b in nbrs[1:]:
        p = _path_between(adj, block, a, b, banned={s})
        if p is not None and (best is None or len(p) < len(best)):
            best = p
    return [s] + best


def _any_cycle(adj, block):
    """Some cycle of G[block] via a non-tree edge of a BFS tree."""
    root = min(block)
    parent = {root: None}
    depth = {root: 0}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in sorted(adj[x]):
            if y not in block:
                continue
            if y not in parent:
                parent[y] = x
                depth[y] = depth[x] + 1
                queue.append(y)
            elif parent[x] != y:
                return _close(parent, depth, x, y)
    return None


def _odd_cycle(adj, block):
    root = min(block)
    parent = {root: None}
    depth = {root: 0}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in sorted(adj[x]):
            if y not in block:
                continue
            if y not in parent:
                parent[y] = x
                depth[y] = depth[x] + 1
                queue.append(y)
            elif depth[y] == depth[x]:
                return _close(parent, depth, x, y)
    return None


def _close(parent, depth, x, y):
    """Cycle formed by tree paths to the common ancestor plus edge xy."""
    px, py = [x], [y]
    while depth[px[-1]] > depth[py[-1]]:
        px.append(parent[px[-1]])
    while depth[py[-1]] > depth[px[-1]]:
        py.append(parent[py[-1]])
    while px[-1] != py[-1]:
        px.append(parent[px[-1]])
        py.append(parent[py[-1]])
    return px + py[-2::-1]


def _arcs(cycle, a, b):
    """The two paths between cycle vertices a and b along the cycle."""
    i, j = cycle.index(a), cycle.index(b)
    n = len(cycle)
    fwd = [cycle[(i + t) % n] for t in range((j - i) % n + 1)]
    bwd = [cycle[(i - t) % n] for t in range((i - j) % n + 1)]
    return fwd, bwd


def _two_fan(adj, block, s, target):
    """Two paths from s to distinct target vertices, disjoint except at s."""
    import networkx as nx

    g = nx.Graph()
    for x in block:
        for y in adj[x]:
            if y in block:
                g.add_edge(x, y)
    sink = ("sink",)
    for c in target:
        g.add_edge(c, sink)
    paths = []
    for p in nx.node_disjoint_paths(g, s, sink):
        p = p[:-1]
        cut = next(i for i, x in enumerate(p) if x in target)
        paths.append(p[: cut + 1])
        if len(paths) == 2:
            break
    return paths


def _odd_cycle_through(adj, block, s):
    c = _odd_cycle(adj, block)
    if s in c:
        return c
    p1, p2 = _two_fan(adj, block, s, set(c))
    for arc in _arcs(c, p1[-1], p2[-1]):
        if (len(p1) - 1 + len(p2) - 1 + len(arc) - 1) % 2 == 1:
            return p1 + arc[1:-1] + p2[::-1][:-1]
    raise AssertionError("no odd cycle through s")


def _even_cycle(adj, block):
    c = _any_cycle(adj, block)
    if len(c) % 2 == 0:
        return c
    on_c = set(c)
    cedges = {edge_key(c[i], c[(i + 1) % len(c)]) for i in range(len(c))}
    ear = None
    for x in sorted(block):
        for y in sorted(adj[x]):
            if y in block and edge_key(x, y) not in cedges:
                if x in on_c and y in on_c:
                    ear = [x, y]
                else:
                    ear = _ear_through(adj, block, on_c, y if y not in on_c else x)
                break
        if ear:
            break
    for arc in _arcs(c, ear[0], ear[-1]):
        if (len(ear) - 1 + len(arc) - 1) % 2 == 0:
            return ear + arc[-2:0:-1]
    raise AssertionError("no even cycle in a theta")


def _ear_through(adj, block, on_c, y):
    """Path between two distinct cycle vertices through the component of y off the cycle."""
    comp = {y}
    stack = [y]
    while stack:
        x = stack.pop()
        for z in adj[x]:
            if z in block and z not in on_c and z not in comp:
                comp.add(z)
                stack.append(z)
    attach = sorted({c for x in comp for c in adj[x] if c in on_c})
    c1, c2 = attach[0], attach[1]
    k1 = min(x for x in adj[c1] if x in comp)
    k2 = min(x for x in adj[c2] if x in comp)
    inner = _path_between(adj, comp, k1, k2)
    return [c1] + inner + [c2]


def _terminal_path(adj, alive, terminals):
    """Shortest path between two distinct terminals inside alive, or None."""
    label = {}
    prev = {}
    queue = deque()
    for t in sorted(terminals):
        if t in alive:
            label[t] = t
            prev[t] = None
            queue.append(t)
    while queue:
        x = queue.popleft()
        for y in sorted(adj[x]):
            if y not in alive:
                continue
            if y not in label:
                label[y] = label[x]
                prev[y] = x
                queue.append(y)
            elif label[y] != label[x]:
                left, right = [x], [y]
                while prev[left[-1]] is not None:
                    left.append(prev[left[-1]])
                while prev[right[-1]] is not None:
                    right.append(prev[right[-1]])
                return left[::-1] + right
    return None


def _obstructions(instance, removed):
    """Obstructions in the current solution as lists of deletable items."""
    p = instance.problem
    found = []
    if p.is_edge_problem:
        rest = [e for e in instance.edges() if e not in removed]
        adj = _edge_graph(instance.n, rest)
        alive = set(range(instance.n))
        if p == Problem.MWC:
            path = _terminal_path(adj, alive, instance.terminals)
            if path:
                found.append([edge_key(path[i], path[i + 1]) for i in range(len(path) - 1)])
        else:
            for u, v in sorted(instance.s_edges):
                adj[u].discard(v)
                adj[v].discard(u)
                path = _path_between(adj, alive, u, v)
                adj[u].add(v)
                adj[v].add(u)
                if path:
                    found.append([edge_key(path[i], path[i + 1]) for i in range(len(path) - 1)])
        return found
    adj = instance.adjacency
    alive = set(range(instance.n)) - removed
    if p == Problem.NMC:
        path = _terminal_path(adj, alive, instance.terminals)
        if path:
            found.append(path)
        return found
    raw, _ = _raw_blocks(adj, alive)
    for b in sorted(raw, key=min):
        if len(b) < 3:
            continue
        if p == Problem.ECT:
            if len(b) % 2 == 0 or sum(len([y for y in adj[x] if y in b]) for x in b) // 2 > len(b):
                found.append(_even_cycle(adj, b))
            continue
        ss = sorted(b & instance.s_vertices)
        if not ss:
            continue
        if p == Problem.SFVS:
            found.append(_cycle_through(adj, b, ss[0]))
        elif p == Problem.SOCT and two_colouring(adj, b) is None:
            found.append(_odd_cycle_through(adj, b, ss[0]))
    return found


def exact_solve(instance: LabeledInstance, max_rounds: int = 10_000) -> OracleResult:
    """Exact optimum via an integer hitting-set program with lazily added obstructions."""
    items, weights = _deletables(instance)
    index = {x: i for i, x in enumerate(items)}
    rows: list[list[int]] = []
    seen_rows: set[tuple[int, ...]] = set()
    chosen: set = set()
    for _ in range(max_rounds):
        obs = _obstructions(instance, chosen)
        if not obs:
            w = sum(weights[index[x]] for x in chosen)
            return OracleResult(w, frozenset(chosen))
        for o in obs:
            row = tuple(sorted({index[x] for x in o if x in index}))
            if not row:
                return OracleResult(None, None)
            if row not in seen_rows:
                seen_rows.add(row)
                rows.append(list(row))
        A = np.zeros((len(rows), len(items)))
        for r, row in enumerate(rows):
            A[r, row] = 1
        res = milp(
            c=np.array(weights, dtype=float),
            constraints=LinearConstraint(A, lb=1, ub=np.inf),
            integrality=np.ones(len(items)),
            bounds=Bounds(0, 1),
        )
        if res.status != 0:
            raise RuntimeError(f"integer program failed: {res.message}")
        chosen = {items[i] for i in range(len(items)) if res.x[i] > 0.5}
    raise RuntimeError("lazy constraint loop did not converge")


# --------------------------------------------- independent enumerators


def simple_cycles(adj, verts):
    """Every simple cycle (length >= 3) of G[verts], each exactly once."""
    verts = set(verts)
    for start in sorted(verts):
        stack = [(start, [start], {start})]
        while stack:
            x, path, onp = stack.pop()
            for y in adj[x]:
                if y not in verts or y < start:
                    continue
                if y == start and len(path) >= 3 and path[1] < path[-1]:
                    yield list(path)
                elif y not in onp and y != start:
                    stack.append((y, path + [y], onp | {y}))


def simple_paths(adj, verts, u, v):
    verts = set(verts)
    stack = [(u, [u])]
    while stack:
        x, path = stack.pop()
        if x == v:
            yield path
            continue
        for y in adj[x]:
            if y in verts and y not in path:
                stack.append((y, path + [y]))


def enum_is_s_bipartite(adj, verts, s) -> bool:
    return not any(len(c) % 2 == 1 and any(x in s for x in c) for c in simple_cycles(adj, verts))


def enum_has_s_cycle(adj, verts, s) -> bool:
    return any(any(x in s for x in c) for c in simple_cycles(adj, verts))


def enum_has_even_cycle(adj, verts) -> bool:
    return any(len(c) % 2 == 0 for c in simple_cycles(adj, verts))


def enum_parity(adj, verts, u, v) -> Parity:
    seen = {len(p) % 2 for p in simple_paths(adj, verts, u, v)}  # len(p) = edges + 1
    if not seen:
        return Parity.DISCONNECTED
    if len(seen) == 2:
        return Parity.BOTH
    return Parity.EVEN if seen == {1} else Parity.ODD


# ----------------------------------------------- completion consistency


@dataclass(frozen=True)
class NodeContext:
    """The bag of a node and the vertex set of the subgraph below it."""

    bag: frozenset[int]
    subtree: frozenset[int]


@dataclass(frozen=True)
class Counterexample:
    trial: int
    w_size: int
    edges: tuple[tuple[int, int], ...]
    s_new: frozenset[int]
    x_valid: bool
    y_valid: bool


def random_completion(n, bag, rng: random.Random, adj=None, boundary_edges: bool = False):
    """Fresh vertices n.. joined to each other and to the bag at random.

    Edges between two bag vertices belong to the subgraph below the node, so
    they are only sampled when ``boundary_edges`` is set (non-adjacent pairs).
    """
    size = rng.randint(0, len(bag) + 3)
    fresh = list(range(n, n + size))
    pool = sorted(bag) + fresh
    edges = []
    for a, b in combinations(pool, 2):
        if a < n and b < n and (not boundary_edges or b in adj[a]):
            continue
        if rng.random() < 0.5:
            edges.append((a, b))
    s_new = frozenset(x for x in fresh if rng.random() < 0.5)
    return fresh, edges, s_new


def _valid_with(adj_base, X, n, fresh, edges, s, soct):
    adj = {x: {y for y in adj_base[x] if y in X} for x in X}
    for x in fresh:
        adj[x] = set()
    keep = set(X) | set(fresh)
    for a, b in edges:
        if a in keep and b in keep:
            adj[a].add(b)
            adj[b].add(a)
    if soct:
        return is_s_bipartite(adj, keep, s)
    return not has_s_traversing_cycle(adj, keep, s)


def completion_consistency(instance, X, Y, node_context: NodeContext, trials: int = 50,
                           seed: int = 0, mode=Problem.SOCT, check_signatures: bool = True,
                           boundary_edges: bool = False):
    """Return None when every sampled completion treats X and Y alike, else a Counterexample."""
    from .dp.signature import signature

    soct = Problem(mode) == Problem.SOCT
    X, Y = frozenset(X), frozenset(Y)
    bag = node_context.bag
    if not (X <= node_context.subtree and Y <= node_context.subtree):
        raise ValueError("partial solutions must lie below the node")
    if check_signatures and signature(instance, X, bag, mode) != signature(instance, Y, bag, mode):
        raise ValueError("X and Y have different signatures")
    rng = random.Random(seed)
    for t in range(trials):
        fresh, edges, s_new = random_completion(instance.n, bag, rng, instance.adjacency, boundary_edges)
        s = instance.s_vertices | s_new
        vx = _valid_with(instance.adjacency, X, instance.n, fresh, edges, s, soct)
        vy = _valid_with(instance.adjacency, Y, instance.n, fresh, edges, s, soct)
        if vx != vy:
            return Counterexample(t, len(fresh), tuple(edges), s_new, vx, vy)
    return None
