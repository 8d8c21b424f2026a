"""Line-oriented instance format and the JSON sidecar for generated instances.

Format (1-indexed, lines starting with ``c`` or ``#`` are comments)::

    p grl <n> <m>      header, first non-comment line
    e u v              edge
    vw v w             vertex weight (default 1)
    vs v               vertex of S
    vt v               terminal
    es u v             S-edge (must be an edge)
    vf v               forced-keep vertex
    ew u v w           edge weight (must be an edge; default 1)
"""

from __future__ import annotations

import json
from pathlib import Path

from .graph import LabeledInstance, Problem, edge_key


class InstanceParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


_ARITY = {"e": 2, "vw": 2, "vs": 1, "vt": 1, "es": 2, "vf": 1, "ew": 3}


def load_instance(text: str, problem=None, budget: int | None = None) -> LabeledInstance:
    n = m = None
    edges: dict[tuple[int, int], int] = {}
    weight: dict[int, int] = {}
    s, terms, forced = set(), set(), set()
    s_edges: dict[tuple[int, int], int] = {}
    ew: dict[tuple[int, int], tuple[int, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] in ("c", "#") or parts[0].startswith("#"):
            continue
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise InstanceParseError("second header line", lineno)
            if len(parts) != 4 or parts[1] != "grl":
                raise InstanceParseError("header must read 'p grl <n> <m>'", lineno)
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise InstanceParseError("non-integer header field", lineno) from None
            if n < 0 or m < 0:
                raise InstanceParseError("negative header field", lineno)
            continue
        if tag not in _ARITY:
            raise InstanceParseError(f"unknown line tag {tag!r}", lineno)
        if n is None:
            raise InstanceParseError("data before the 'p grl' header", lineno)
        if len(parts) != _ARITY[tag] + 1:
            raise InstanceParseError(f"'{tag}' takes {_ARITY[tag]} fields", lineno)
        try:
            nums = [int(x) for x in parts[1:]]
        except ValueError:
            raise InstanceParseError("non-integer field", lineno) from None
        vertex_fields = nums[:2] if tag in ("e", "es", "ew") else nums[:1]
        for x in vertex_fields:
            if not 1 <= x <= n:
                raise InstanceParseError(f"vertex {x} out of range 1..{n}", lineno)
        vs = [x - 1 for x in vertex_fields]
        if tag in ("e", "es", "ew") and vs[0] == vs[1]:
            raise InstanceParseError(f"loop at vertex {nums[0]}", lineno)
        if tag == "e":
            key = edge_key(*vs)
            if key in edges:
                raise InstanceParseError(f"duplicate edge {nums[0]} {nums[1]}", lineno)
            edges[key] = lineno
        elif tag == "vw":
            if nums[1] < 0:
                raise InstanceParseError("negative weight", lineno)
            weight[vs[0]] = nums[1]
        elif tag == "vs":
            s.add(vs[0])
        elif tag == "vt":
            terms.add(vs[0])
        elif tag == "vf":
            forced.add(vs[0])
        elif tag == "es":
            s_edges[edge_key(*vs)] = lineno
        else:
            if nums[2] < 0:
                raise InstanceParseError("negative weight", lineno)
            ew[edge_key(*vs)] = (nums[2], lineno)
    if n is None:
        raise InstanceParseError("missing 'p grl' header")
    if len(edges) != m:
        raise InstanceParseError(f"header declares {m} edges but {len(edges)} were given")
    for key, lineno in s_edges.items():
        if key not in edges:
            raise InstanceParseError("S-edge is not an edge of the graph", lineno)
    for key, (_, lineno) in ew.items():
        if key not in edges:
            raise InstanceParseError("weighted pair is not an edge of the graph", lineno)
    return LabeledInstance.from_edges(
        n, sorted(edges), [weight.get(v, 1) for v in range(n)],
        s_vertices=s, terminals=terms, forced_keep=forced, s_edges=list(s_edges),
        edge_weight={key: w for key, (w, _) in ew.items()},
        problem=Problem(problem) if problem is not None else Problem.SFVS,
        budget=budget,
    )


def dump_instance(instance: LabeledInstance, comments: tuple[str, ...] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    edges = instance.edges()
    lines.append(f"p grl {instance.n} {len(edges)}")
    lines += [f"e {u + 1} {v + 1}" for u, v in edges]
    lines += [f"vw {v + 1} {w}" for v, w in enumerate(instance.weight) if w != 1]
    lines += [f"vs {v + 1}" for v in sorted(instance.s_vertices)]
    lines += [f"vt {v + 1}" for v in sorted(instance.terminals)]
    lines += [f"es {u + 1} {v + 1}" for u, v in sorted(instance.s_edges)]
    lines += [f"vf {v + 1}" for v in sorted(instance.forced_keep)]
    lines += [f"ew {u + 1} {v + 1} {w}" for (u, v), w in sorted(instance.edge_weight.items())]
    return "\n".join(lines) + "\n"


def one_indexed(items) -> list:
    """Vertices become v+1; edges become [u+1, v+1]; output is sorted."""
    out = []
    for x in items:
        out.append([x[0] + 1, x[1] + 1] if isinstance(x, tuple) else x + 1)
    return sorted(out)


def zero_indexed(items) -> frozenset:
    return frozenset(edge_key(x[0] - 1, x[1] - 1) if isinstance(x, list) else x - 1 for x in items)


def sidecar_path(instance_path) -> Path:
    p = Path(instance_path)
    return p.with_name(p.name + ".meta.json")


def write_sidecar(instance_path, gen, witness_name: str | None = None) -> Path:
    meta = {
        "budget": gen.budget,
        "planted_deletion": one_indexed(gen.planted_deletion) if gen.planted_deletion is not None else None,
        "witness": witness_name,
        "metadata": gen.metadata,
    }
    path = sidecar_path(instance_path)
    path.write_text(json.dumps(meta, indent=1, sort_keys=True) + "\n")
    return path


def read_sidecar(instance_path) -> dict | None:
    path = sidecar_path(instance_path)
    if not path.exists():
        return None
    return json.loads(path.read_text())
