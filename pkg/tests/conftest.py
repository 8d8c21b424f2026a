import random
from itertools import combinations

from hypothesis import strategies as st

from twdel.graph import LabeledInstance, Problem


def graph(n, edges, problem=Problem.SFVS, **labels):
    return LabeledInstance.from_edges(n, edges, problem=problem, **labels)


def cycle(n, **labels):
    return graph(n, [(i, (i + 1) % n) for i in range(n)], **labels)


def clique(n, **labels):
    return graph(n, list(combinations(range(n), 2)), **labels)


TRIANGLE = [(0, 1), (1, 2), (0, 2)]
BOWTIE = [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]  # shared vertex 2


def random_instance(rng: random.Random, n_lo=4, n_hi=12, problem=Problem.SOCT, s_prob=0.4, p=None,
                    weighted=None):
    n = rng.randint(n_lo, n_hi)
    p = p if p is not None else rng.choice([0.2, 0.35, 0.5])
    edges = [e for e in combinations(range(n), 2) if rng.random() < p]
    s = [v for v in range(n) if rng.random() < s_prob]
    weighted = rng.random() < 0.5 if weighted is None else weighted
    w = [rng.randint(1, 5) if weighted else 1 for _ in range(n)]
    return LabeledInstance.from_edges(n, edges, w, s_vertices=s, problem=problem)


@st.composite
def small_graphs(draw, max_n=9, min_n=1):
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    edges = [e for e, keep in zip(pairs, mask) if keep]
    s = draw(st.sets(st.integers(0, n - 1), max_size=n)) if n else set()
    w = draw(st.lists(st.integers(1, 5), min_size=n, max_size=n))
    return LabeledInstance.from_edges(n, edges, w, s_vertices=s)


# Acceptance results: criterion number -> list of (sub-check, ok, detail).
ACCEPTANCE: dict[int, list[tuple[str, bool, str]]] = {}


def record(criterion: int, check: str, ok: bool, detail: str = "") -> bool:
    ACCEPTANCE.setdefault(criterion, []).append((check, ok, detail))
    print(f"criterion {criterion} [{check}]: {'PASS' if ok else 'FAIL'} {detail}")
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.write_sep("=", "acceptance criteria")
    for c in sorted(ACCEPTANCE):
        checks = ACCEPTANCE[c]
        ok = all(x[1] for x in checks)
        failed = [f"{name}: {detail}" for name, good, detail in checks if not good]
        summary = "; ".join(failed) if failed else "; ".join(f"{n} {d}".strip() for n, _, d in checks)
        tr.write_line(f"CRITERION {c}: {'PASS' if ok else 'FAIL'}  {summary}")
