"""Auxiliary forests of partial solutions and their canonical signatures.

For a vertex set X and a bag B, the block-cut tree of G[X] is pruned of
inactive leaves (repeatedly), then maximal chains of inactive degree-2 nodes
are contracted into single labelled edges. Two partial solutions with the same
boundary, isomorphic labelled forests and the same pairwise path parities
between boundary vertices behave identically under every completion.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from ..graph import Parity, Problem, _raw_blocks, two_colouring

PARITY_CHAR = {Parity.DISCONNECTED: "d", Parity.EVEN: "e", Parity.ODD: "o", Parity.BOTH: "b"}


class Signature(NamedTuple):
    boundary: tuple[int, ...]
    forest_code: str
    parities: str


class NotSBipartite(ValueError):
    pass


class Analysis:
    """Block structure, activity and pruned/contracted forest of G[X] for one bag."""

    __slots__ = (
        "adj", "verts", "bag", "soct", "blocks", "block_s", "block_bip", "cuts", "cut_ids",
        "inc", "active", "alive", "aux", "aux_edges", "boundary", "_colour",
    )

    def __init__(self, adj, verts, bag, soct, blocks, block_s, block_bip, cuts):
        self.adj = adj
        self.verts = verts
        self.bag = bag
        self.soct = soct
        self.blocks = blocks
        self.block_s = block_s
        self.block_bip = block_bip
        self.cuts = cuts
        self._colour = None
        self._build()

    # node ids: blocks 0..nb-1, then cut vertices nb.. in cut_ids order
    def _build(self):
        blocks, cuts, bag = self.blocks, self.cuts, self.bag
        nb = len(blocks)
        cut_ids = sorted(cuts)
        self.cut_ids = cut_ids
        index = {c: nb + i for i, c in enumerate(cut_ids)}
        total = nb + len(cut_ids)
        inc: list[list[int]] = [[] for _ in range(total)]
        active = [False] * total
        for i, b in enumerate(blocks):
            if len(b) > len(cuts):
                members = [c for c in cut_ids if c in b]
            else:
                members = [v for v in b if v in cuts]
            for c in members:
                j = index[c]
                inc[i].append(j)
                inc[j].append(i)
            inside = [x for x in bag if x in b] if len(bag) < len(b) else [x for x in b if x in bag]
            active[i] = len(inside) >= 2 or (len(inside) == 1 and inside[0] not in cuts)
        for c in cut_ids:
            active[index[c]] = c in bag
        self.inc = inc
        self.active = active
        self.boundary = tuple(sorted(x for x in bag if x in self.verts))
        # Operation 1: strip inactive leaves and isolated nodes repeatedly
        deg = [len(x) for x in inc]
        alive = [True] * total
        stack = [v for v in range(total) if not active[v] and deg[v] <= 1]
        while stack:
            v = stack.pop()
            if not alive[v]:
                continue
            alive[v] = False
            for w in inc[v]:
                if alive[w]:
                    deg[w] -= 1
                    if not active[w] and deg[w] <= 1:
                        stack.append(w)
        self.alive = alive
        aux = [alive[v] and (active[v] or deg[v] != 2) for v in range(total)]
        self.aux = aux
        # Operation 2: contract chains of inactive degree-2 nodes
        edges = []
        for u in range(total):
            if not aux[u]:
                continue
            for w in inc[u]:
                if not alive[w]:
                    continue
                prev, cur = u, w
                interior = []
                while not aux[cur]:
                    interior.append(cur)
                    nxt = None
                    for y in inc[cur]:
                        if y != prev and alive[y]:
                            nxt = y
                            break
                    prev, cur = cur, nxt
                if u < cur:
                    edges.append((u, cur, interior))
        self.aux_edges = edges

    def node_vertex(self, node: int) -> int:
        return self.cut_ids[node - len(self.blocks)]

    def is_block(self, node: int) -> bool:
        return node < len(self.blocks)

    def m_flags(self, u: int, v: int, interior) -> tuple[bool, bool]:
        """(bipartite, meets S) of the union of blocks on the contracted path."""
        bip, s = True, False
        for x in (u, v, *interior):
            if x < len(self.blocks):
                bip = bip and self.block_bip[x]
                s = s or self.block_s[x]
        return bip, s

    def node_label(self, node: int) -> str:
        if node >= len(self.blocks):
            return f"C{self.node_vertex(node)}" if self.active[node] else "c"
        if not self.active[node]:
            return "b"
        b = self.blocks[node]
        inside = ".".join(str(x) for x in sorted(x for x in self.bag if x in b))
        flags = ("S" if self.block_s[node] else "-") + (("P" if self.block_bip[node] else "N") if self.soct else "")
        return f"B{inside}/{flags}"

    def edge_label(self, u: int, v: int, interior) -> str:
        bip, s = self.m_flags(u, v, interior)
        return ("S" if s else "-") + (("P" if bip else "N") if self.soct else "")

    # ------------------------------------------------------------- parities
    def colour_of_bipartite_union(self):
        """2-colouring and component labels of the union of bipartite blocks."""
        if self._colour is None:
            adj = self.adj
            colour: dict[int, int] = {}
            comp: dict[int, int] = {}
            bip_adj: dict[int, list[int]] = {}
            for i, b in enumerate(self.blocks):
                if self.block_bip[i]:
                    for v in b:
                        lst = bip_adj.setdefault(v, [])
                        for w in adj[v]:
                            if w in b:
                                lst.append(w)
            for r in bip_adj:
                if r in colour:
                    continue
                colour[r] = 0
                comp[r] = r
                stack = [r]
                while stack:
                    v = stack.pop()
                    cv = colour[v]
                    for w in bip_adj[v]:
                        if w not in colour:
                            colour[w] = cv ^ 1
                            comp[w] = r
                            stack.append(w)
            self._colour = (colour, comp)
        return self._colour

    def parities(self) -> str:
        bd = self.boundary
        if len(bd) < 2:
            return ""
        comp = self.components_of(bd)
        colour, bcomp = self.colour_of_bipartite_union()
        out = []
        for i in range(len(bd)):
            u = bd[i]
            for j in range(i + 1, len(bd)):
                v = bd[j]
                if comp[u] != comp[v]:
                    out.append("d")
                elif u in bcomp and v in bcomp and bcomp[u] == bcomp[v]:
                    out.append("o" if colour[u] != colour[v] else "e")
                else:
                    out.append("b")
        return "".join(out)

    def components_of(self, targets) -> dict[int, int]:
        """Component representative for each target vertex of G[X]."""
        adj, verts = self.adj, self.verts
        comp: dict[int, int] = {}
        for r in targets:
            if r in comp:
                continue
            comp[r] = r
            stack = [r]
            seen = {r}
            while stack:
                v = stack.pop()
                for w in adj[v]:
                    if w in verts and w not in seen:
                        seen.add(w)
                        stack.append(w)
            for t in targets:
                if t in seen:
                    comp[t] = r
        return comp

    # --------------------------------------------------------- canonical code
    def forest_code(self) -> str:
        nodes = [v for v in range(len(self.aux)) if self.aux[v]]
        if not nodes:
            return ""
        labels = {v: self.node_label(v) for v in nodes}
        nbr: dict[int, list[tuple[int, str]]] = {v: [] for v in nodes}
        for u, v, interior in self.aux_edges:
            lab = self.edge_label(u, v, interior)
            nbr[u].append((v, lab))
            nbr[v].append((u, lab))
        return forest_code(nodes, labels, nbr)

    def signature(self) -> Signature:
        return Signature(self.boundary, self.forest_code(), self.parities() if self.soct else "")


def forest_code(nodes, labels, nbr) -> str:
    """Canonical string of a labelled forest: sorted codes of center-rooted trees."""
    seen: set[int] = set()
    codes = []
    for r in nodes:
        if r in seen:
            continue
        comp = [r]
        seen.add(r)
        for v in comp:
            for w, _ in nbr[v]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
        codes.append(min(_rooted_code(c, -1, labels, nbr) for c in _centers(comp, nbr)))
    codes.sort()
    return "|".join(codes)


def _centers(comp, nbr) -> list[int]:
    if len(comp) <= 2:
        return list(comp)
    deg = {v: len(nbr[v]) for v in comp}
    layer = [v for v in comp if deg[v] <= 1]
    remaining = len(comp)
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            for w, _ in nbr[v]:
                deg[w] -= 1
                if deg[w] == 1:
                    nxt.append(w)
        layer = nxt
    return layer


def _rooted_code(v, parent, labels, nbr) -> str:
    kids = sorted(lab + ":" + _rooted_code(w, v, labels, nbr) for w, lab in nbr[v] if w != parent)
    return labels[v] + "(" + ",".join(kids) + ")"


def analyse(adj, verts, bag, s, soct: bool) -> Analysis | None:
    """Block analysis of G[verts]; None when the set is not a valid partial solution.

    Validity is S-bipartiteness (soct) or absence of S-traversing cycles.
    """
    raw, cuts = _raw_blocks(adj, verts)
    block_s = []
    block_bip = []
    for b in raw:
        hs = not s.isdisjoint(b) if len(b) < len(s) else not b.isdisjoint(s)
        if soct:
            bip = len(b) <= 2 or two_colouring(adj, b) is not None
            if hs and not bip:
                return None
        else:
            bip = True
            if hs and len(b) >= 3:
                return None
        block_s.append(hs)
        block_bip.append(bip)
    return Analysis(adj, verts, bag, soct, raw, block_s, block_bip, cuts)


def _mode(mode) -> bool:
    return Problem(mode) == Problem.SOCT


# ------------------------------------------------------------- public views


@dataclass(frozen=True)
class AuxNode:
    kind: str  # block | cutvertex
    active: bool
    vertex: int | None = None  # active cut vertex
    bag_part: frozenset[int] | None = None  # active block
    s_flag: bool | None = None
    bipartite_flag: bool | None = None
    members: frozenset[int] = frozenset()


@dataclass(frozen=True)
class AuxEdge:
    u: int
    v: int
    m_bipartite: bool
    m_s: bool


@dataclass(frozen=True)
class AuxForest:
    nodes: tuple[AuxNode, ...]
    edges: tuple[AuxEdge, ...]
    code: str


def _checked(instance, X, bag, mode) -> Analysis:
    verts = frozenset(X)
    a = analyse(instance.adjacency, verts, frozenset(bag), instance.s_vertices, _mode(mode))
    if a is None:
        raise NotSBipartite("vertex set is not a valid partial solution")
    return a


def aux_forest(instance, X, bag, mode=Problem.SOCT) -> AuxForest:
    a = _checked(instance, X, bag, mode)
    keep = [v for v in range(len(a.aux)) if a.aux[v]]
    pos = {v: i for i, v in enumerate(keep)}
    nodes = []
    for v in keep:
        if a.is_block(v):
            b = a.blocks[v]
            if a.active[v]:
                nodes.append(AuxNode("block", True, None, frozenset(x for x in a.bag if x in b),
                                     a.block_s[v], a.block_bip[v] if a.soct else None, frozenset(b)))
            else:
                nodes.append(AuxNode("block", False, members=frozenset(b)))
        else:
            c = a.node_vertex(v)
            nodes.append(AuxNode("cutvertex", a.active[v], c if a.active[v] else None, members=frozenset([c])))
    edges = []
    for u, v, interior in a.aux_edges:
        bip, s = a.m_flags(u, v, interior)
        edges.append(AuxEdge(pos[u], pos[v], bip, s))
    return AuxForest(tuple(nodes), tuple(edges), a.forest_code())


def signature(instance, X, bag, mode=Problem.SOCT) -> Signature:
    return _checked(instance, X, bag, mode).signature()
