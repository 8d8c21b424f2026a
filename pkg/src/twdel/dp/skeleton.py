"""Compact stand-ins for partial solutions.

A skeleton is a small graph on the boundary vertices (real ids) plus private
vertices (negative ids). Normalisation replaces everything the boundary cannot
distinguish by constant-size gadgets: pruned branches disappear, contracted
chains become short paths of the right parity, and blocks keep only their
attachment vertices. The replacement preserves validity of every completion
through the boundary, so a skeleton can stand in for the full vertex set.
"""

from __future__ import annotations

from .signature import Analysis


class Skeleton:
    __slots__ = ("adj", "s", "npriv")

    def __init__(self, adj: dict[int, set[int]], s: frozenset[int], npriv: int):
        self.adj = adj
        self.s = s
        self.npriv = npriv

    @classmethod
    def empty(cls) -> "Skeleton":
        return cls({}, frozenset(), 0)

    def vertices(self):
        return self.adj.keys()

    def introduce(self, v: int, nbrs, in_s: bool) -> "Skeleton":
        adj = {x: set(ys) for x, ys in self.adj.items()}
        adj[v] = set(nbrs)
        for u in nbrs:
            adj[u].add(v)
        return Skeleton(adj, self.s | {v} if in_s else self.s, self.npriv)

    def join(self, other: "Skeleton") -> "Skeleton":
        shift = self.npriv
        adj = {x: set(ys) for x, ys in self.adj.items()}
        for x, ys in other.adj.items():
            nx = x - shift if x < 0 else x
            tgt = adj.setdefault(nx, set())
            for y in ys:
                tgt.add(y - shift if y < 0 else y)
        s = self.s | frozenset(x - shift if x < 0 else x for x in other.s)
        return Skeleton(adj, s, self.npriv + other.npriv)


def normalise(a: Analysis, s) -> Skeleton:
    """Rebuild G[X] as a small graph that is equivalent for every completion."""
    bag, adj, blocks, soct = a.bag, a.adj, a.blocks, a.soct
    nb = len(blocks)
    cut_index = {c: nb + i for i, c in enumerate(a.cut_ids)}
    out: dict[int, set[int]] = {}
    new_s: set[int] = set()
    relabel: dict[int, int] = {}
    counter = [0]

    def fresh(in_s: bool = False) -> int:
        counter[0] += 1
        x = -counter[0]
        out[x] = set()
        if in_s:
            new_s.add(x)
        return x

    def vid(x: int) -> int:
        if x in bag:
            y = x
        else:
            y = relabel.get(x)
            if y is None:
                counter[0] += 1
                y = relabel[x] = -counter[0]
        if y not in out:
            out[y] = set()
            if x in s:
                new_s.add(y)
        return y

    def link(x: int, y: int) -> None:
        out[x].add(y)
        out[y].add(x)

    colour = None
    for node in range(nb):
        if not (a.aux[node]):
            continue
        b = blocks[node]
        attach = [x for x in b if x in bag or (x in cut_index and a.alive[cut_index[x]])]
        drop = [x for x in b if x not in bag and not (x in cut_index and a.alive[cut_index[x]])]
        attach.sort()
        if len(attach) == 1 and drop:
            vid(attach[0])
            continue
        if soct and a.block_bip[node] and drop:
            if colour is None:
                colour = a.colour_of_bipartite_union()[0]
            side0 = [x for x in attach if colour[x] == colour[attach[0]]]
            side1 = [x for x in attach if colour[x] != colour[attach[0]]]
            hubs = 4 if side1 else 2
        else:
            hubs = 2
        if len(drop) <= hubs:
            for x in b:
                vx = vid(x)
                for y in adj[x]:
                    if y in b and x < y:
                        link(vx, vid(y))
            continue
        dropped_s = any(x in s for x in drop)
        ids = [vid(x) for x in attach]
        for x in attach:
            if x in bag:
                for y in adj[x]:
                    if y in bag and x < y and y in b:
                        link(x, y)
        p, p2 = fresh(dropped_s), fresh()
        if soct and a.block_bip[node] and side1:
            q, q2 = fresh(), fresh()
            for x in side0:
                link(vid(x), p)
                link(vid(x), p2)
            for x in side1:
                link(vid(x), q)
                link(vid(x), q2)
            link(p, q)
            link(p2, q2)
        else:
            for x in ids:
                link(x, p)
                link(x, p2)
            if soct and not a.block_bip[node]:
                link(p, p2)
    for u, v, interior in a.aux_edges:
        inner_blocks = [x for x in interior if x < nb]
        if not inner_blocks:
            continue
        end_a = a.node_vertex(u) if u >= nb else a.node_vertex(interior[0])
        end_b = a.node_vertex(v) if v >= nb else a.node_vertex(interior[-1])
        chain_s = any(x in s for i in inner_blocks for x in blocks[i] if x != end_a and x != end_b)
        va, vb = vid(end_a), vid(end_b)
        if not soct:
            x = fresh(chain_s)
            link(va, x)
            link(x, vb)
            continue
        if all(a.block_bip[i] for i in inner_blocks):
            if colour is None:
                colour = a.colour_of_bipartite_union()[0]
            x = fresh(chain_s)
            link(va, x)
            if colour[end_a] != colour[end_b]:
                y = fresh()
                link(x, y)
                x = y
            link(x, vb)
        else:
            start = va
            if chain_s:
                sv = fresh(True)
                link(va, sv)
                start = sv
            x, y, z = fresh(), fresh(), fresh()
            link(start, x)
            link(x, y)
            link(y, z)
            link(z, x)
            link(z, vb)
    for c in a.cut_ids:
        node = cut_index[c]
        if a.aux[node]:
            vid(c)
    for x in a.boundary:
        vid(x)
    return Skeleton(out, frozenset(new_s), counter[0])
