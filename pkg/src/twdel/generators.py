"""Seeded random instance generators for tests and benchmarks."""

from __future__ import annotations

import random
from itertools import combinations

from .graph import LabeledInstance, Problem


def random_gnp(n: int, p: float, seed: int, s_prob: float = 0.4, max_weight: int = 1,
               problem=Problem.SOCT) -> LabeledInstance:
    rng = random.Random(seed)
    edges = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p]
    s = [v for v in range(n) if rng.random() < s_prob]
    w = [rng.randint(1, max_weight) for _ in range(n)]
    return LabeledInstance.from_edges(n, edges, w, s_vertices=s, problem=problem)


def random_partial_ktree(n: int, k: int, seed: int, keep: float = 0.7, s_prob: float = 0.3,
                         max_weight: int = 5, problem=Problem.SOCT) -> LabeledInstance:
    """Random k-tree on n vertices with each edge kept independently; treewidth <= k."""
    rng = random.Random(seed)
    k = min(k, n - 1) if n else 0
    cliques = [tuple(range(k + 1))] if n else []
    edges = set(combinations(range(k + 1), 2)) if n else set()
    for v in range(k + 1, n):
        base = rng.choice(cliques)
        drop = rng.randrange(len(base))
        clique = tuple(x for i, x in enumerate(base) if i != drop)
        for u in clique:
            edges.add((u, v))
        cliques.append(clique + (v,))
    kept = sorted(e for e in edges if rng.random() < keep)
    s = [v for v in range(n) if rng.random() < s_prob]
    w = [rng.randint(1, max_weight) for _ in range(n)]
    return LabeledInstance.from_edges(n, kept, w, s_vertices=s, problem=problem)
