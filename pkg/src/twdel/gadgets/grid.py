"""k-by-k grid source instances (independent set / clique, optionally permutation)."""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, permutations, product

Cell = tuple[int, int]  # (row, column), both 1-based

VARIANTS = ("independent-set", "permutation-independent-set", "clique", "permutation-clique")


def _pair(a: Cell, b: Cell) -> tuple[Cell, Cell]:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class GridProblemInstance:
    k: int
    edges: tuple[tuple[Cell, Cell], ...]
    variant: str
    planted: tuple[Cell, ...] | None = None  # one cell per column, ordered by column

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        for a, b in self.edges:
            if a == b:
                raise ValueError("self-pair in grid instance")
            for i, j in (a, b):
                if not (1 <= i <= self.k and 1 <= j <= self.k):
                    raise ValueError(f"cell {(i, j)} outside the {self.k}x{self.k} grid")
            if self.variant == "permutation-clique" and a[0] == b[0]:
                raise ValueError("permutation-clique instances have no same-row edges")
        if len({_pair(a, b) for a, b in self.edges}) != len(self.edges):
            raise ValueError("duplicate edge in grid instance")
        if self.planted is not None and not self.is_solution(self.planted):
            raise ValueError("planted cells do not form a solution")

    @property
    def permutation(self) -> bool:
        return self.variant.startswith("permutation")

    @property
    def clique(self) -> bool:
        return self.variant.endswith("clique")

    def edge_set(self) -> set[tuple[Cell, Cell]]:
        return {_pair(a, b) for a, b in self.edges}

    def degree(self, cell: Cell) -> int:
        return sum(cell in e for e in self.edges)

    def is_solution(self, cells) -> bool:
        cells = list(cells)
        if sorted(c[1] for c in cells) != list(range(1, self.k + 1)):
            return False
        if self.permutation and sorted(c[0] for c in cells) != list(range(1, self.k + 1)):
            return False
        es = self.edge_set()
        for a, b in combinations(cells, 2):
            adjacent = _pair(a, b) in es
            if adjacent != self.clique:
                return False
        return True

    def solutions(self):
        """All solutions by exhaustive search (cells ordered by column)."""
        rows = permutations(range(1, self.k + 1)) if self.permutation else product(range(1, self.k + 1), repeat=self.k)
        for r in rows:
            cells = tuple((r[j], j + 1) for j in range(self.k))
            if self.is_solution(cells):
                yield cells

    def has_solution(self) -> bool:
        return next(self.solutions(), None) is not None


def allowed_pairs(k: int, variant: str) -> list[tuple[Cell, Cell]]:
    """Candidate edges: distinct columns, and distinct rows for permutation variants."""
    cells = [(i, j) for j in range(1, k + 1) for i in range(1, k + 1)]
    out = []
    for a, b in combinations(cells, 2):
        if a[1] == b[1]:
            continue
        if variant.startswith("permutation") and a[0] == b[0]:
            continue
        out.append(_pair(a, b))
    return sorted(out)


def gen_grid_instance(k: int, edge_count: int, variant: str, seed: int, plant: bool = False) -> GridProblemInstance:
    if k < 2:
        raise ValueError("k must be at least 2")
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    rng = random.Random(seed)
    pairs = allowed_pairs(k, variant)
    planted = None
    required: list[tuple[Cell, Cell]] = []
    forbidden: set[tuple[Cell, Cell]] = set()
    if plant:
        rows = list(range(1, k + 1))
        if variant.startswith("permutation"):
            rng.shuffle(rows)
        else:
            rows = [rng.randint(1, k) for _ in range(k)]
        planted = tuple((rows[j], j + 1) for j in range(k))
        inner = {_pair(a, b) for a, b in combinations(planted, 2)}
        if variant.endswith("clique"):
            required = sorted(inner)
        else:
            forbidden = inner
    free = [p for p in pairs if p not in forbidden and p not in required]
    extra = edge_count - len(required)
    if extra < 0 or extra > len(free):
        raise ValueError(f"cannot place {edge_count} edges for k={k}, variant {variant}")
    chosen = sorted(required + rng.sample(free, extra))
    return GridProblemInstance(k, tuple(chosen), variant, planted)


def all_grid_instances(k: int, edge_count: int, variant: str):
    """Every instance with exactly edge_count allowed edges."""
    for edges in combinations(allowed_pairs(k, variant), edge_count):
        yield GridProblemInstance(k, tuple(edges), variant)
