"""Exhaustive checks of the four gadget families on standalone copies."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from ..graph import Problem
from .base import Builder, add_base, column, valid_for
from .generic import attach_column_selector, attach_edge_gadget, attach_propagation, attach_row_selector

FAMILIES = ("column-selector", "row-selector", "edge", "propagation")
VARIANT_COUNT = {"column-selector": 2, "row-selector": 2, "edge": 2, "propagation": 3}
MAX_SUBSETS = 2_000_000


@dataclass(frozen=True)
class GadgetCheck:
    ok: bool
    reason: str = ""
    counterexample: tuple | None = None  # vertex names
    legal_deletions: tuple = ()  # column selectors only

    def __bool__(self):
        return self.ok


def _variant_number(variant) -> int:
    if isinstance(variant, int):
        return variant
    text = str(variant).strip().upper()
    if text.startswith("G"):
        text = text[1:]
    return int(text.split("(")[0])


def _structure(b: Builder, family: str, added, attach, base) -> GadgetCheck | None:
    adj = b.instance().adjacency
    for v in base:
        _, p, i, j, z = b.names[v]
        if z == 1 and b["v", p, i, j, 2] in adj[v]:
            return GadgetCheck(False, "homologous pair adjacent", (b.names[v],))
    inside = set(added) | set(attach)
    for x in added:
        for y in adj[x]:
            if y not in inside:
                return GadgetCheck(False, "gadget vertex leaves its attachment set", (b.names[x], b.names[y]))
    if family in ("row-selector", "propagation"):
        for x in base:
            for y in adj[x]:
                if x < y and y in base:
                    return GadgetCheck(False, "edge inside the attachment set", (b.names[x], b.names[y]))
    return None


def verify_gadget(kind: str, variant, k: int, problem) -> GadgetCheck:
    """Check one gadget family against its contract for the given problem."""
    if kind not in FAMILIES:
        raise ValueError(f"unknown gadget family {kind!r}")
    problem = Problem(problem)
    var = _variant_number(variant)
    if not 1 <= var <= VARIANT_COUNT[kind]:
        raise ValueError(f"{kind} gadgets have variants 1..{VARIANT_COUNT[kind]}, got {variant!r}")
    b = Builder()
    add_base(b, 2 if kind == "propagation" else 1, k)
    if kind == "column-selector":
        attach_column_selector(b, 1, 1, k, var)
    elif kind == "row-selector":
        attach_row_selector(b, 1, 1, k, var)
    elif kind == "edge":
        if k < 2:
            raise ValueError("edge gadgets need k >= 2")
        attach_edge_gadget(b, 1, ((1, 1), (2, 2)), var)
    else:
        attach_propagation(b, 1, k, var)
    att = b.attachments[-1]
    base = set(att.attach)
    bad = _structure(b, kind, att.added, att.attach, base)
    if bad is not None:
        return bad
    adj = b.instance().adjacency
    s = b.s
    names = b.names

    def obstruction(vs) -> bool:
        return not valid_for(problem, adj, set(vs), s)

    if kind == "column-selector":
        cells = column(b, 1, 1, k)
        verts = sorted(set(cells) | set(att.added))
        budget = 2 * k - 2
        total = sum(comb(len(verts), r) for r in range(budget + 1))
        if total > MAX_SUBSETS:
            raise ValueError(f"k={k} needs {total} subsets; too large for enumeration")
        expected = {frozenset(c for c in cells if names[c][2] != i) for i in range(1, k + 1)}
        legal = []
        for r in range(budget + 1):
            for X in combinations(verts, r):
                if not obstruction(set(verts) - set(X)):
                    legal.append(frozenset(X))
        for X in legal:
            if X not in expected:
                return GadgetCheck(False, "unexpected legal deletion", tuple(names[v] for v in sorted(X)),
                                   tuple(legal))
        for X in sorted(expected - set(legal), key=sorted):
            return GadgetCheck(False, "intended deletion is not legal", tuple(names[v] for v in sorted(X)),
                               tuple(legal))
        return GadgetCheck(True, f"exactly {len(legal)} legal deletions", None, tuple(legal))

    if kind == "row-selector":
        targets = [[b["v", 1, 1, j, z] for z in (1, 2)] + [b["v", 1, 1, j2, z] for z in (1, 2)]
                   for j, j2 in combinations(range(1, k + 1), 2)]
    elif kind == "edge":
        targets = [list(att.attach)]
    else:
        targets = [[b["v", 1, i, j, z] for z in (1, 2)] + [b["v", 2, i, j2, z] for z in (1, 2)]
                   for i in range(1, k + 1) for j in range(1, k + 1) for j2 in range(1, k + 1) if j != j2]
    for t in targets:
        A = set(att.added) | set(t)
        if not obstruction(A):
            return GadgetCheck(False, "claimed obstruction is legal", tuple(names[v] for v in sorted(A)))
    return GadgetCheck(True, f"{len(targets)} obstructions confirmed")

