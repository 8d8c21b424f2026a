"""Graph kernel: labeled instances, block-cut trees and the cycle predicates.

Graphs are passed around as "adjacency views": anything indexable by a vertex
id that yields an iterable of neighbours (a tuple of tuples, a dict of sets).
Vertex subsets restrict every computation to the induced subgraph.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence


class Problem(str, enum.Enum):
    SFVS = "sfvs"
    SOCT = "soct"
    ECT = "ect"
    NMC = "nmc"
    MWC = "mwc"
    RESFES = "resfes"

    @property
    def is_edge_problem(self) -> bool:
        return self in (Problem.MWC, Problem.RESFES)


class Parity(str, enum.Enum):
    DISCONNECTED = "disconnected"
    EVEN = "even"
    ODD = "odd"
    BOTH = "both"


def edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class LabeledInstance:
    """An undirected simple graph with weights and role labels.

    ``weight`` holds vertex deletion costs; ``edge_weight`` holds edge deletion
    costs for the edge problems (missing edges default to 1).
    """

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    weight: tuple[int, ...]
    s_vertices: frozenset[int] = frozenset()
    terminals: frozenset[int] = frozenset()
    s_edges: frozenset[tuple[int, int]] = frozenset()
    forced_keep: frozenset[int] = frozenset()
    problem: Problem = Problem.SFVS
    budget: int | None = None
    edge_weight: Mapping[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.adjacency) != self.n or len(self.weight) != self.n:
            raise ValueError("adjacency and weight must have n entries")
        for v, nb in enumerate(self.adjacency):
            for u in nb:
                if u == v:
                    raise ValueError(f"loop at vertex {v}")
                if not 0 <= u < self.n or v not in self.adjacency[u]:
                    raise ValueError(f"asymmetric adjacency at {v}-{u}")
            if len(set(nb)) != len(nb):
                raise ValueError(f"parallel edge at vertex {v}")
        if any(w < 0 for w in self.weight):
            raise ValueError("weights must be non-negative")
        for u, v in self.s_edges:
            if u >= v or v not in self.adjacency[u]:
                raise ValueError(f"s-edge {u}-{v} is not a normalised edge of the graph")
        for (u, v), w in self.edge_weight.items():
            if u >= v or v not in self.adjacency[u] or w < 0:
                raise ValueError(f"bad edge weight entry {u}-{v}: {w}")

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        weight: Sequence[int] | None = None,
        **labels,
    ) -> "LabeledInstance":
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        for key in ("s_vertices", "terminals", "forced_keep"):
            if key in labels:
                labels[key] = frozenset(labels[key])
        if "s_edges" in labels:
            labels["s_edges"] = frozenset(edge_key(u, v) for u, v in labels["s_edges"])
        if "edge_weight" in labels:
            labels["edge_weight"] = {edge_key(u, v): w for (u, v), w in labels["edge_weight"].items()}
        if "problem" in labels:
            labels["problem"] = Problem(labels["problem"])
        return cls(
            n=n,
            adjacency=tuple(tuple(sorted(s)) for s in nbrs),
            weight=tuple(weight) if weight is not None else (1,) * n,
            **labels,
        )

    def with_labels(self, **changes) -> "LabeledInstance":
        return replace(self, **changes)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    @property
    def m(self) -> int:
        return sum(len(nb) for nb in self.adjacency) // 2

    def ew(self, u: int, v: int) -> int:
        return self.edge_weight.get(edge_key(u, v), 1)

    def total_weight(self) -> int:
        return sum(self.weight)


@dataclass(frozen=True)
class BlockCutTree:
    """Blocks and cut vertices of an induced subgraph.

    ``incidence`` lists (block index, cut vertex) pairs; it is a forest.
    """

    blocks: tuple[frozenset[int], ...]
    cut_vertices: frozenset[int]
    incidence: tuple[tuple[int, int], ...]


def _raw_blocks(adj, verts) -> tuple[list[set[int]], set[int]]:
    """Iterative Hopcroft-Tarjan biconnected components on G[verts]."""
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    blocks: list[set[int]] = []
    cuts: set[int] = set()
    counter = 0
    for root in sorted(verts):
        if root in disc:
            continue
        disc[root] = low[root] = counter
        counter += 1
        root_children = 0
        stack = [(root, None, iter(adj[root]))]
        estack: list[tuple[int, int]] = []
        while stack:
            v, parent, it = stack[-1]
            descended = False
            for w in it:
                if w == parent or w not in verts:
                    continue
                dw = disc.get(w)
                if dw is None:
                    disc[w] = low[w] = counter
                    counter += 1
                    estack.append((v, w))
                    stack.append((w, v, iter(adj[w])))
                    descended = True
                    break
                if dw < disc[v]:
                    if dw < low[v]:
                        low[v] = dw
                    estack.append((v, w))
            if descended:
                continue
            stack.pop()
            if not stack:
                break
            u = stack[-1][0]
            if low[v] < low[u]:
                low[u] = low[v]
            if low[v] >= disc[u]:
                comp: set[int] = set()
                while True:
                    a, b = estack.pop()
                    comp.add(a)
                    comp.add(b)
                    if a == u and b == v:
                        break
                blocks.append(comp)
                if u == root:
                    root_children += 1
                else:
                    cuts.add(u)
        if root_children == 0:
            blocks.append({root})
        elif root_children >= 2:
            cuts.add(root)
    return blocks, cuts


def block_cut_tree(graph, subset: Iterable[int]) -> BlockCutTree:
    verts = subset if isinstance(subset, (set, frozenset)) else set(subset)
    raw, cuts = _raw_blocks(graph, verts)
    blocks = sorted((frozenset(b) for b in raw), key=lambda b: sorted(b))
    incidence = tuple(
        (i, c) for i, b in enumerate(blocks) for c in sorted(b & cuts)
    )
    return BlockCutTree(tuple(blocks), frozenset(cuts), incidence)


def two_colouring(graph, verts) -> dict[int, int] | None:
    """2-colour G[verts] by BFS; None if it has an odd cycle."""
    colour: dict[int, int] = {}
    for r in verts:
        if r in colour:
            continue
        colour[r] = 0
        queue = deque([r])
        while queue:
            v = queue.popleft()
            cv = colour[v]
            for w in graph[v]:
                if w not in verts:
                    continue
                cw = colour.get(w)
                if cw is None:
                    colour[w] = cv ^ 1
                    queue.append(w)
                elif cw == cv:
                    return None
    return colour


def block_is_bipartite(graph, block) -> bool:
    return len(block) <= 2 or two_colouring(graph, block) is not None


def _verts(subset):
    return subset if isinstance(subset, (set, frozenset)) else set(subset)


def is_s_bipartite(graph, subset, s) -> bool:
    """True iff no odd cycle of G[subset] passes through a vertex of s."""
    verts = _verts(subset)
    if two_colouring(graph, verts) is not None:
        return True
    raw, _ = _raw_blocks(graph, verts)
    for b in raw:
        if len(b) >= 3 and not b.isdisjoint(s) and two_colouring(graph, b) is None:
            return False
    return True


def has_s_traversing_cycle(graph, subset, s) -> bool:
    raw, _ = _raw_blocks(graph, _verts(subset))
    return any(len(b) >= 3 and not b.isdisjoint(s) for b in raw)


def _block_edge_count(graph, block) -> int:
    return sum(1 for v in block for w in graph[v] if w in block) // 2


def has_even_cycle(graph, subset) -> bool:
    raw, _ = _raw_blocks(graph, _verts(subset))
    for b in raw:
        if len(b) < 3:
            continue
        if _block_edge_count(graph, b) > len(b) or len(b) % 2 == 0:
            return True
    return False


def pair_parities(graph, subset, pairs) -> dict[frozenset[int], Parity]:
    """Parity of all paths between each pair inside G[subset]."""
    verts = _verts(subset)
    raw, _ = _raw_blocks(graph, verts)
    comp: dict[int, int] = {}
    bip_colour: dict[int, int] = {}
    bip_comp: dict[int, int] = {}
    bip_adj: dict[int, list[int]] = {}
    for b in raw:
        if len(b) <= 2 or two_colouring(graph, b) is not None:
            for v in b:
                bip_adj.setdefault(v, [])
                for w in graph[v]:
                    if w in b:
                        bip_adj[v].append(w)
    # union of bipartite blocks is bipartite (every cycle lies in one block)
    _components(graph, verts, comp)
    for r in bip_adj:
        if r in bip_colour:
            continue
        bip_colour[r] = 0
        bip_comp[r] = r
        queue = deque([r])
        while queue:
            v = queue.popleft()
            for w in bip_adj[v]:
                if w not in bip_colour:
                    bip_colour[w] = bip_colour[v] ^ 1
                    bip_comp[w] = r
                    queue.append(w)
    out: dict[frozenset[int], Parity] = {}
    for u, v in pairs:
        key = frozenset((u, v))
        if comp[u] != comp[v]:
            out[key] = Parity.DISCONNECTED
        elif u in bip_comp and v in bip_comp and bip_comp[u] == bip_comp[v]:
            out[key] = Parity.ODD if bip_colour[u] != bip_colour[v] else Parity.EVEN
        else:
            out[key] = Parity.BOTH
    return out


def _components(graph, verts, comp: dict[int, int]) -> dict[int, int]:
    for r in verts:
        if r in comp:
            continue
        comp[r] = r
        stack = [r]
        while stack:
            v = stack.pop()
            for w in graph[v]:
                if w in verts and w not in comp:
                    comp[w] = r
                    stack.append(w)
    return comp


def components(graph, subset) -> dict[int, int]:
    """Map each vertex of subset to a representative of its component."""
    return _components(graph, _verts(subset), {})
