"""Shared plumbing for the lower-bound constructions: named vertices and attachments."""

from __future__ import annotations

from dataclasses import dataclass

from ..decomposition import TreeDecomposition
from ..graph import LabeledInstance, Problem, has_even_cycle, has_s_traversing_cycle, is_s_bipartite


@dataclass(frozen=True)
class Attachment:
    """One gadget: its added vertices and the base vertices it may touch."""

    family: str  # column-selector | row-selector | edge | propagation | ...
    variant: str
    copy: int
    index: object
    added: tuple[int, ...]
    attach: frozenset[int]


@dataclass
class GeneratedInstance:
    instance: LabeledInstance
    budget: int
    planted_deletion: frozenset | None
    witness_pd: TreeDecomposition | None
    metadata: dict
    names: tuple = ()
    attachments: tuple[Attachment, ...] = ()


class Builder:
    """Append-only graph under construction with tuple names for vertices."""

    def __init__(self):
        self.names: list[tuple] = []
        self.ids: dict[tuple, int] = {}
        self.edges: set[tuple[int, int]] = set()
        self.s: set[int] = set()
        self.attachments: list[Attachment] = []

    def add(self, *name, in_s: bool = False) -> int:
        if name in self.ids:
            raise ValueError(f"duplicate vertex name {name}")
        v = len(self.names)
        self.names.append(name)
        self.ids[name] = v
        if in_s:
            self.s.add(v)
        return v

    def __getitem__(self, name) -> int:
        return self.ids[name]

    def link(self, a: int, b: int):
        if a == b:
            raise ValueError("loop in construction")
        self.edges.add((a, b) if a < b else (b, a))

    def record(self, family, variant, copy, index, added, attach):
        self.attachments.append(Attachment(family, variant, copy, index, tuple(added), frozenset(attach)))

    def instance(self, **labels) -> LabeledInstance:
        return LabeledInstance.from_edges(len(self.names), sorted(self.edges), s_vertices=self.s, **labels)


def add_base(b: Builder, copies: int, k: int, layers: int = 2):
    """Copy-major, then row, column, z."""
    for p in range(1, copies + 1):
        for i in range(1, k + 1):
            for j in range(1, k + 1):
                for z in range(1, layers + 1):
                    b.add("v", p, i, j, z)


def column(b: Builder, p, j, k, z=None):
    zs = (1, 2) if z is None else (z,)
    return [b["v", p, i, j, zz] for i in range(1, k + 1) for zz in zs]


def row(b: Builder, p, i, k, z=None):
    zs = (1, 2) if z is None else (z,)
    return [b["v", p, i, j, zz] for j in range(1, k + 1) for zz in zs]


def valid_for(problem: Problem, adj, verts, s) -> bool:
    """The hereditary property: no S-cycle, no odd S-cycle, or no even cycle."""
    if problem == Problem.SFVS:
        return not has_s_traversing_cycle(adj, verts, s)
    if problem == Problem.SOCT:
        return is_s_bipartite(adj, verts, s)
    if problem == Problem.ECT:
        return not has_even_cycle(adj, verts)
    raise ValueError(f"no vertex-deletion property for {problem}")
