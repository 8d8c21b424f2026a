"""Tree decompositions: PACE .td I/O, validation, heuristics and nicification."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from itertools import combinations


class TDParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags indexed 0..len-1 with undirected tree edges between bag indices."""

    bags: tuple[frozenset[int], ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def neighbours(self) -> list[list[int]]:
        nb: list[list[int]] = [[] for _ in self.bags]
        for a, b in self.edges:
            nb[a].append(b)
            nb[b].append(a)
        return [sorted(x) for x in nb]


@dataclass(frozen=True)
class TDReport:
    ok: bool
    axiom: int | None = None
    witness: object = None
    message: str = "ok"

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class NiceNode:
    kind: str  # leaf | introduce | forget | join
    bag: frozenset[int]
    vertex: int | None = None
    children: tuple[int, ...] = ()


@dataclass
class NiceTreeDecomposition:
    """Nodes are stored in post-order: every child precedes its parent.

    The root is the last node.
    """

    nodes: list[NiceNode] = field(default_factory=list)

    @property
    def root(self) -> int:
        return len(self.nodes) - 1

    @property
    def width(self) -> int:
        return max((len(n.bag) for n in self.nodes), default=0) - 1

    def as_td(self) -> TreeDecomposition:
        edges = tuple((c, i) for i, nd in enumerate(self.nodes) for c in nd.children)
        return TreeDecomposition(tuple(nd.bag for nd in self.nodes), edges)


# ---------------------------------------------------------------- PACE I/O


def load_td(text: str) -> TreeDecomposition:
    header = None
    bags: dict[int, frozenset[int]] = {}
    edges: list[tuple[int, int]] = []
    n_bags = n_vertices = max_bag = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "s":
            if header is not None:
                raise TDParseError("duplicate header", lineno)
            if len(parts) != 5 or parts[1] != "td":
                raise TDParseError("malformed header, expected 's td <bags> <width+1> <n>'", lineno)
            try:
                n_bags, max_bag, n_vertices = (int(x) for x in parts[2:])
            except ValueError:
                raise TDParseError("non-integer header field", lineno) from None
            if min(n_bags, max_bag, n_vertices) < 0:
                raise TDParseError("negative header field", lineno)
            header = lineno
            continue
        if header is None:
            raise TDParseError("content before header", lineno)
        try:
            nums = [int(x) for x in parts[1:]] if parts[0] == "b" else [int(x) for x in parts]
        except ValueError:
            raise TDParseError(f"unparseable line {raw!r}", lineno) from None
        if parts[0] == "b":
            if not nums:
                raise TDParseError("bag line without id", lineno)
            bid, verts = nums[0], nums[1:]
            if not 1 <= bid <= n_bags:
                raise TDParseError(f"bag index {bid} out of range 1..{n_bags}", lineno)
            if bid in bags:
                raise TDParseError(f"duplicate bag {bid}", lineno)
            for v in verts:
                if not 1 <= v <= n_vertices:
                    raise TDParseError(f"vertex {v} out of range 1..{n_vertices}", lineno)
            if len(verts) > max_bag:
                raise TDParseError(f"bag {bid} larger than declared width+1", lineno)
            bags[bid] = frozenset(v - 1 for v in verts)
        else:
            if len(nums) != 2:
                raise TDParseError("tree edge needs exactly two bag ids", lineno)
            a, b = nums
            for x in (a, b):
                if not 1 <= x <= n_bags:
                    raise TDParseError(f"bag index {x} out of range 1..{n_bags}", lineno)
            if a == b:
                raise TDParseError("tree edge is a loop", lineno)
            edges.append((a - 1, b - 1))
            last_edge_line = lineno
    if header is None:
        raise TDParseError("missing header", 1)
    missing = [i for i in range(1, n_bags + 1) if i not in bags]
    if missing:
        raise TDParseError(f"bag {missing[0]} never defined", header)
    if n_bags and (len(edges) != n_bags - 1 or not _is_connected(n_bags, edges)):
        line = last_edge_line if edges else header
        raise TDParseError("edges do not form a tree over the bags", line)
    return TreeDecomposition(tuple(bags[i] for i in range(1, n_bags + 1)), tuple(edges))


def dump_td(td: TreeDecomposition, n: int) -> str:
    lines = [f"s td {len(td.bags)} {td.width + 1} {n}"]
    for i, bag in enumerate(td.bags, start=1):
        lines.append(" ".join(["b", str(i)] + [str(v + 1) for v in sorted(bag)]))
    lines.extend(f"{a + 1} {b + 1}" for a, b in td.edges)
    return "\n".join(lines) + "\n"


def _is_connected(k: int, edges) -> bool:
    nb: list[list[int]] = [[] for _ in range(k)]
    for a, b in edges:
        nb[a].append(b)
        nb[b].append(a)
    seen = {0}
    stack = [0]
    while stack:
        for w in nb[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == k


# -------------------------------------------------------------- validation


def validate_td(instance, td: TreeDecomposition) -> TDReport:
    """Check the three decomposition axioms in order; report the first failure."""
    k = len(td.bags)
    if k == 0:
        if instance.n:
            return TDReport(False, 1, 0, "vertex 1 is in no bag")
        return TDReport(True)
    if len(td.edges) != k - 1 or not _is_connected(k, td.edges):
        return TDReport(False, 0, None, "bag graph is not a tree")
    covered = set().union(*td.bags)
    for v in range(instance.n):
        if v not in covered:
            return TDReport(False, 1, v, f"vertex {v + 1} is in no bag")
    stray = sorted(covered - set(range(instance.n)))
    if stray:
        return TDReport(False, 1, stray[0], f"bag mentions unknown vertex {stray[0] + 1}")
    occ: dict[int, list[int]] = {}
    for i, bag in enumerate(td.bags):
        for v in bag:
            occ.setdefault(v, []).append(i)
    for u, v in instance.edges():
        if not any(v in td.bags[i] for i in occ[u]):
            return TDReport(False, 2, (u, v), f"edge {u + 1}-{v + 1} is not covered by any bag")
    nb = td.neighbours()
    for v in range(instance.n):
        nodes = set(occ[v])
        start = occ[v][0]
        seen = {start}
        stack = [start]
        while stack:
            for w in nb[stack.pop()]:
                if w in nodes and w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != len(nodes):
            return TDReport(False, 3, v, f"bags containing vertex {v + 1} are disconnected")
    return TDReport(True)


# -------------------------------------------------------------- heuristics


def _elimination_order(adj_sets: list[set[int]], criterion: str) -> list[int]:
    """Greedy elimination with lazy priority updates; ties go to the smallest id."""
    g = [set(s) for s in adj_sets]
    n = len(g)

    def fill(v: int) -> int:
        nb = list(g[v])
        missing = 0
        for i in range(len(nb)):
            gi = g[nb[i]]
            for j in range(i + 1, len(nb)):
                if nb[j] not in gi:
                    missing += 1
        return missing

    score = (lambda v: (fill(v), len(g[v]))) if criterion == "min-fill" else (lambda v: (len(g[v]), 0))
    current = {v: score(v) for v in range(n)}
    heap = [(current[v], v) for v in range(n)]
    heapq.heapify(heap)
    alive = set(range(n))
    order: list[int] = []
    while heap:
        sc, v = heapq.heappop(heap)
        if v not in alive or current[v] != sc:
            continue
        order.append(v)
        alive.discard(v)
        nb = g[v]
        for a, b in combinations(nb, 2):
            g[a].add(b)
            g[b].add(a)
        for a in nb:
            g[a].discard(v)
        g[v] = set()
        dirty = set(nb)
        if criterion == "min-fill":
            for a in nb:
                dirty |= g[a]
        for a in dirty:
            if a in alive:
                new = score(a)
                if new != current[a]:
                    current[a] = new
                    heapq.heappush(heap, (new, a))
    return order


def td_from_order(adj_sets: list[set[int]], order: list[int]) -> TreeDecomposition:
    n = len(adj_sets)
    if n == 0:
        return TreeDecomposition((), ())
    pos = {v: i for i, v in enumerate(order)}
    g = [set(s) for s in adj_sets]
    bags: list[frozenset[int]] = []
    parent_vertex: list[int | None] = []
    for v in order:
        nb = g[v]
        bags.append(frozenset(nb | {v}))
        parent_vertex.append(min(nb, key=pos.__getitem__) if nb else None)
        for a, b in combinations(nb, 2):
            g[a].add(b)
            g[b].add(a)
        for a in nb:
            g[a].discard(v)
    edges: list[tuple[int, int]] = []
    roots: list[int] = []
    for i, p in enumerate(parent_vertex):
        if p is None:
            roots.append(i)
        else:
            edges.append((i, pos[p]))
    edges.extend((roots[i], roots[i + 1]) for i in range(len(roots) - 1))
    return compress_td(TreeDecomposition(tuple(bags), tuple(edges)))


def compress_td(td: TreeDecomposition) -> TreeDecomposition:
    """Merge every bag that is a subset of an adjacent bag into it."""
    bags = list(td.bags)
    nb = [set(x) for x in td.neighbours()]
    alive = [True] * len(bags)
    changed = True
    while changed:
        changed = False
        for i in range(len(bags)):
            if not alive[i]:
                continue
            for j in sorted(nb[i]):
                if bags[i] <= bags[j]:
                    for x in nb[i]:
                        if x != j:
                            nb[x].discard(i)
                            nb[x].add(j)
                            nb[j].add(x)
                    nb[j].discard(i)
                    nb[i] = set()
                    alive[i] = False
                    changed = True
                    break
    index = {}
    for i in range(len(bags)):
        if alive[i]:
            index[i] = len(index)
    new_edges = sorted({(min(index[i], index[j]), max(index[i], index[j])) for i in index for j in nb[i]})
    return TreeDecomposition(tuple(bags[i] for i in index), tuple(new_edges))


def heuristic_td(instance, criterion: str = "best") -> TreeDecomposition:
    """Min-fill and min-degree elimination; 'best' keeps the narrower one."""
    adj_sets = [set(nb) for nb in instance.adjacency]
    if criterion in ("min-fill", "min-degree"):
        return td_from_order(adj_sets, _elimination_order(adj_sets, criterion))
    if criterion != "best":
        raise ValueError(f"unknown heuristic {criterion!r}")
    a = td_from_order(adj_sets, _elimination_order(adj_sets, "min-fill"))
    b = td_from_order(adj_sets, _elimination_order(adj_sets, "min-degree"))
    return b if b.width < a.width else a


# ------------------------------------------------------------ nicification


def nicify(td: TreeDecomposition, instance) -> NiceTreeDecomposition:
    report = validate_td(instance, td)
    if not report:
        raise ValueError(f"invalid tree decomposition: {report.message}")
    nice = NiceTreeDecomposition()
    if not td.bags:
        nice.nodes.append(NiceNode("leaf", frozenset()))
        return nice
    nb = td.neighbours()
    root = 0
    parent = {root: None}
    order = [root]
    for x in order:
        for y in nb[x]:
            if y not in parent:
                parent[y] = x
                order.append(y)
    top: dict[int, int] = {}  # original node -> index of nice node carrying its bag on top

    def add(node: NiceNode) -> int:
        nice.nodes.append(node)
        return len(nice.nodes) - 1

    def chain(start: int, src: frozenset[int], dst: frozenset[int]) -> int:
        cur, bag = start, src
        for v in sorted(src - dst):
            bag = bag - {v}
            cur = add(NiceNode("forget", bag, v, (cur,)))
        for v in sorted(dst - src):
            bag = bag | {v}
            cur = add(NiceNode("introduce", bag, v, (cur,)))
        return cur

    for x in reversed(order):
        bag = td.bags[x]
        kids = [y for y in nb[x] if parent.get(y) == x]
        if not kids:
            top[x] = chain(add(NiceNode("leaf", frozenset())), frozenset(), bag)
            continue
        branches = [chain(top[y], td.bags[y], bag) for y in kids]
        cur = branches[0]
        for b in branches[1:]:
            cur = add(NiceNode("join", bag, None, (cur, b)))
        top[x] = cur
    chain(top[root], td.bags[root], frozenset())
    return nice


def validate_nice(nice: NiceTreeDecomposition, instance) -> TDReport:
    """Check the nice-node typing rules and the underlying decomposition."""
    for i, nd in enumerate(nice.nodes):
        kids = [nice.nodes[c] for c in nd.children]
        if any(c >= i for c in nd.children):
            return TDReport(False, 0, i, "nodes are not in post-order")
        ok = {
            "leaf": not kids and not nd.bag,
            "introduce": len(kids) == 1 and nd.vertex in nd.bag and kids[0].bag == nd.bag - {nd.vertex}
            and nd.vertex not in kids[0].bag,
            "forget": len(kids) == 1 and nd.vertex not in nd.bag and kids[0].bag == nd.bag | {nd.vertex}
            and nd.vertex in kids[0].bag,
            "join": len(kids) == 2 and all(k.bag == nd.bag for k in kids),
        }.get(nd.kind, False)
        if not ok:
            return TDReport(False, 0, i, f"node {i} violates the {nd.kind} rule")
    if nice.nodes[nice.root].bag:
        return TDReport(False, 0, nice.root, "root bag is not empty")
    return validate_td(instance, nice.as_td())

