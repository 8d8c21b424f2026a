"""Acceptance suite: one test per criterion, each printing PASS/FAIL lines.

The combined verdict per criterion is printed in the terminal summary.
"""

import random
import subprocess
import sys
import time
from itertools import combinations

import networkx as nx
import pytest

from conftest import random_instance, record
from twdel.decomposition import heuristic_td, nicify, validate_nice, validate_td
from twdel.dp import signature, solve_sfvs, solve_soct
from twdel.gadgets import (
    FAMILIES, GADGET_TABLE, WITNESS_WIDTH_CONSTANT, GridProblemInstance, all_grid_instances,
    construct_lb_instance, construct_mwc_lb, construct_nmc_lb, gen_grid_instance, verify_gadget,
    witness_path_decomposition,
)
from twdel.generators import random_gnp, random_partial_ktree
from twdel.graph import LabeledInstance, Problem, components, has_s_traversing_cycle, is_s_bipartite
from twdel.io import dump_instance
from twdel.oracle import (
    NodeContext, brute_solve, completion_consistency, enum_is_s_bipartite, exact_solve, solution_is_valid,
)
from twdel.reductions import solve_via_reduction

SOCT, SFVS, ECT = Problem.SOCT, Problem.SFVS, Problem.ECT
NMC, RESFES, MWC = Problem.NMC, Problem.RESFES, Problem.MWC
PS = (0.2, 0.35, 0.5)


def dp_optimum(g, solver):
    return solver(g, nicify(heuristic_td(g), g)).deletion_weight


def oracle_harness(problem, solver, count, seed, s_prob=0.4):
    rng = random.Random(seed)
    mismatches = []
    for i in range(count):
        g = random_instance(rng, 4, 12, problem, s_prob=s_prob, p=PS[i % 3], weighted=bool(i % 2))
        want = brute_solve(g).optimum_weight
        got = dp_optimum(g, solver)
        if got != want:
            mismatches.append((i, got, want))
    return mismatches


# ------------------------------------------------------------------ 1, 2


def test_criterion_1_soct_matches_brute_force():
    t0 = time.perf_counter()
    bad = oracle_harness(SOCT, solve_soct, 300, seed=101)
    ok = record(1, "soct vs brute force", not bad,
                f"300 instances, {len(bad)} mismatches, {time.perf_counter() - t0:.1f}s")
    assert ok, bad[:5]


def test_criterion_2_sfvs_matches_brute_force():
    bad = oracle_harness(SFVS, solve_sfvs, 300, seed=202)
    record(2, "sfvs vs brute force", not bad, f"300 instances, {len(bad)} mismatches")
    full = oracle_harness(SFVS, solve_sfvs, 100, seed=203, s_prob=1.0)
    record(2, "S = V slice", not full, f"100 instances, {len(full)} mismatches")
    assert not bad and not full, (bad[:5], full[:5])


# ------------------------------------------------------------------ 3


def _weights(rng, n):
    return [rng.randint(1, 3) for _ in range(n)]


def random_nmc(rng):
    n = rng.randint(3, 9)
    edges = [e for e in combinations(range(n), 2) if rng.random() < rng.choice(PS)]
    t = rng.sample(range(n), rng.randint(2, min(4, n)))
    return LabeledInstance.from_edges(n, edges, _weights(rng, n), terminals=t, problem=NMC)


def random_resfes(rng):
    while True:
        n = rng.randint(3, 9)
        edges = [e for e in combinations(range(n), 2) if rng.random() < rng.choice(PS)]
        if len(edges) <= 18:
            break
    s = rng.sample(edges, min(len(edges), rng.randint(0, 3)))
    ew = {e: rng.randint(1, 3) for e in edges}
    return LabeledInstance.from_edges(n, edges, s_edges=s, edge_weight=ew, problem=RESFES)


def random_mwc(rng):
    while True:
        n = rng.randint(3, 8)
        edges = [e for e in combinations(range(n), 2) if rng.random() < rng.choice(PS)]
        if len(edges) <= 18:
            break
    t = rng.sample(range(n), rng.randint(2, 3))
    ew = {e: rng.randint(1, 3) for e in edges}
    return LabeledInstance.from_edges(n, edges, terminals=t, edge_weight=ew, problem=MWC)


@pytest.mark.parametrize("problem, make", [(NMC, random_nmc), (RESFES, random_resfes), (MWC, random_mwc)])
def test_criterion_3_reductions_match_brute_force(problem, make):
    rng = random.Random(300 + len(problem.value))
    bad = []
    for i in range(150):
        g = make(rng)
        got = solve_via_reduction(g).optimum_weight
        want = brute_solve(g).optimum_weight
        if got != want:
            bad.append((i, got, want))
    record(3, problem.value, not bad, f"150 instances, {len(bad)} mismatches")
    assert not bad, bad[:5]


# ------------------------------------------------------------------ 4


def test_criterion_4_s_bipartite_matches_cycle_enumeration():
    checked = 0
    bad = []
    atlas = [g for g in nx.graph_atlas_g() if g.number_of_nodes() > 0 and nx.is_connected(g)]
    for idx, G in enumerate(atlas):
        n = G.number_of_nodes()
        adj = [set(G[v]) for v in range(n)]
        odd = [sum(1 << v for v in c) for c in nx.simple_cycles(G) if len(c) % 2]
        for mask in range(1 << n):
            s = {v for v in range(n) if mask >> v & 1}
            want = not any(c & mask for c in odd)
            checked += 1
            if is_s_bipartite(adj, set(range(n)), s) != want:
                bad.append((idx, mask))
    record(4, "connected graphs n <= 7, every S", not bad,
           f"{len(atlas)} graphs, {checked} labelled cases, {len(bad)} disagreements")
    rng = random.Random(404)
    bad_random = []
    for i in range(500):
        g = random_gnp(rng.randint(1, 10), rng.choice(PS), seed=rng.randrange(10**9))
        vs = set(range(g.n))
        if is_s_bipartite(g.adjacency, vs, g.s_vertices) != enum_is_s_bipartite(g.adjacency, vs, g.s_vertices):
            bad_random.append(i)
    record(4, "random graphs n <= 10", not bad_random, f"500 graphs, {len(bad_random)} disagreements")
    assert not bad and not bad_random


# ------------------------------------------------------------------ 5


def _below(nice):
    out = []
    for node in nice.nodes:
        s = set(node.bag)
        for c in node.children:
            s |= out[c]
        out.append(s)
    return out


def equal_signature_pairs(mode, want, seed):
    rng = random.Random(seed)
    soct = mode == SOCT
    pairs = []
    while len(pairs) < want:
        g = random_instance(rng, 7, 11, mode, s_prob=0.4)
        nice = nicify(heuristic_td(g), g)
        below = _below(nice)
        nodes = [i for i, nd in enumerate(nice.nodes) if len(nd.bag) >= 2 and len(below[i]) > len(nd.bag)]
        if not nodes:
            continue
        t = rng.choice(nodes)
        bag, sub = nice.nodes[t].bag, below[t]
        I = {v for v in bag if rng.random() < 0.7}
        private = sorted(sub - bag)
        groups = {}
        for _ in range(200):
            X = frozenset(I | {v for v in private if rng.random() < 0.5})
            if soct:
                ok = is_s_bipartite(g.adjacency, X, g.s_vertices)
            else:
                ok = not has_s_traversing_cycle(g.adjacency, X, g.s_vertices)
            if ok:
                groups.setdefault(signature(g, X, bag, mode), set()).add(X)
        for members in groups.values():
            members = sorted(members, key=sorted)
            for X, Y in list(combinations(members, 2))[:3]:
                pairs.append((g, X, Y, NodeContext(frozenset(bag), frozenset(sub))))
    return pairs[:want]


@pytest.mark.parametrize("mode", [SOCT, SFVS])
def test_criterion_5_equal_signatures_agree_on_completions(mode):
    pairs = equal_signature_pairs(mode, 120, seed=505 if mode == SOCT else 506)
    failures = []
    for i, (g, X, Y, ctx) in enumerate(pairs):
        cx = completion_consistency(g, X, Y, ctx, trials=50, seed=i, mode=mode)
        if cx is not None:
            failures.append((i, cx))
    record(5, f"{mode.value} signatures", not failures,
           f"{len(pairs)} pairs x 50 completions, {len(failures)} disagreements")
    assert not failures, failures[:3]


# ------------------------------------------------------------------ 6


def test_criterion_6_gadget_contracts():
    failures = []
    runs = 0
    for problem, table in GADGET_TABLE.items():
        for family in FAMILIES:
            for k in (2, 3):
                res = verify_gadget(family, table[family], k, problem)
                runs += 1
                if not res:
                    failures.append((problem.value, family, k, res.reason))
                elif family == "column-selector" and len(res.legal_deletions) != k:
                    failures.append((problem.value, family, k, "wrong number of legal deletions"))
    record(6, "table gadgets", not failures, f"{runs} checks at k = 2, 3, {len(failures)} failures")
    # the variants a problem does not use must break somewhere, or the check has no teeth
    controls = [(ECT, "column-selector", 1), (SOCT, "column-selector", 2), (SOCT, "row-selector", 1),
                (ECT, "edge", 1), (SOCT, "edge", 2), (SOCT, "propagation", 1), (ECT, "propagation", 2)]
    caught = [not verify_gadget(f, v, 2, p) for p, f, v in controls]
    record(6, "negative controls", all(caught), f"{sum(caught)}/{len(controls)} off-table variants rejected")
    assert not failures and all(caught), failures



# ------------------------------------------------------------------ 7


def test_criterion_7_sfvs_round_trip():
    rows = []
    ok = True
    for m in (1, 2):
        for H in all_grid_instances(2, m, "permutation-independent-set"):
            gen = construct_lb_instance("sfvs", H)
            opt = exact_solve(gen.instance).optimum_weight
            yes = H.has_solution()
            ok &= (opt <= gen.budget) == yes
            if yes:
                planted = construct_lb_instance("sfvs", GridProblemInstance(
                    H.k, H.edges, H.variant, next(H.solutions()))).planted_deletion
                ok &= len(planted) == gen.budget and solution_is_valid(gen.instance, planted)
            rows.append(f"m={m} n={gen.instance.n} opt={opt} k'={gen.budget} {'yes' if yes else 'no'}")
    record(7, "sfvs k=2", ok, "; ".join(rows))
    assert ok


def test_criterion_7_nmc_round_trip():
    ok = True
    count = 0
    for m in (1, 2):
        for H in all_grid_instances(2, m, "independent-set"):
            gen = construct_nmc_lb(H)
            opt = exact_solve(gen.instance).optimum_weight
            if gen.instance.n <= 14:
                ok &= brute_solve(gen.instance).optimum_weight == opt
            ok &= (opt is not None and opt <= gen.budget) == H.has_solution()
            count += 1
    record(7, "nmc k=2", ok, f"{count} source instances, m <= 2, brute force where n <= 14")
    assert ok


# ------------------------------------------------------------------ 8


def _mwc_sources():
    base = (((1, 1), (2, 2)),)
    both = (((1, 1), (2, 2)), ((2, 1), (1, 2)))
    return [GridProblemInstance(2, e, "permutation-clique", planted=((1, 1), (2, 2))) for e in (base, both)]


def _separates(inst, removed):
    removed = set(removed)
    adj = [set() for _ in range(inst.n)]
    for u, v in inst.edges():
        if (u, v) not in removed:
            adj[u].add(v)
            adj[v].add(u)
    comp = components(adj, set(range(inst.n)))
    return len({comp[t] for t in inst.terminals}) == len(inst.terminals)


def test_criterion_8_mwc_parameters_and_separation():
    ok = True
    notes = []
    for H in _mwc_sources():
        k, mu = H.k, len(H.edges)
        delta = max(sum(c in e for e in H.edges) for c in [(i, j) for i in (1, 2) for j in (1, 2)])
        m = k * k * delta
        h = 12 * m - k * delta - k * (k - 1) // 2
        budget = (h + 1) * (k - 1) * k * (mu + k * k) + h
        gen = construct_mwc_lb(H, expand=True)
        meta = gen.metadata
        ok &= (meta["h"], meta["m"], gen.budget) == (h, m, budget)
        ok &= _separates(gen.instance, gen.planted_deletion)
        weighted = construct_mwc_lb(H, expand=False)
        w = sum(weighted.instance.ew(*e) for e in weighted.planted_deletion)
        ok &= w == len(gen.planted_deletion)
        opt = exact_solve(weighted.instance).optimum_weight
        ok &= opt <= budget
        notes.append(f"mu={mu}: h={h} k'={budget} planted={w} optimum={opt}")
    record(8, "parameters, separation, optimum <= k'", ok, "; ".join(notes))
    assert ok


@pytest.mark.xfail(strict=True, reason="the planted cut weighs 12 less than k' per source edge; "
                                       "the edge count m = k^2 * Delta overcounts the source-copy edges")
def test_criterion_8_planted_weight_equals_budget():
    results = []
    for H in _mwc_sources():
        gen = construct_mwc_lb(H, expand=True)
        results.append((len(gen.planted_deletion), gen.budget))
    ok = all(w == b for w, b in results)
    record(8, "planted weight equals k'", ok,
           ", ".join(f"{w} vs {b} (short by {b - w})" for w, b in results))
    assert ok


# ------------------------------------------------------------------ 9


def test_criterion_9_nicify_and_witness_widths():
    rng = random.Random(909)
    bad = []
    for i in range(200):
        g = random_gnp(rng.randint(1, 40), rng.uniform(0.03, 0.25), seed=rng.randrange(10**9))
        td = heuristic_td(g)
        nice = nicify(td, g)
        if not (validate_td(g, td) and validate_nice(nice, g) and nice.width == td.width):
            bad.append(i)
    record(9, "nicify", not bad, f"200 graphs, {len(bad)} failures")
    widths = []
    wok = True
    for problem in ("sfvs", "soct", "ect"):
        for k in (2, 3):
            H = gen_grid_instance(k, 1 if k == 2 else 2, "permutation-independent-set", seed=k)
            gen = construct_lb_instance(problem, H)
            pd = witness_path_decomposition(gen)
            c = gen.metadata["witness_width_constant"]
            wok &= bool(validate_td(gen.instance, pd)) and c == WITNESS_WIDTH_CONSTANT
            wok &= pd.width <= c * k
            widths.append(f"{problem} k={k}: {pd.width}")
    record(9, f"witness width <= {WITNESS_WIDTH_CONSTANT}k", wok, ", ".join(widths))
    assert not bad and wok


# ------------------------------------------------------------------ 10


def test_criterion_10_performance_and_determinism(tmp_path):
    g = random_partial_ktree(500, 4, seed=0)
    td = heuristic_td(g)
    t0 = time.perf_counter()
    res = solve_soct(g, nicify(td, g))
    dt = time.perf_counter() - t0
    fast = td.width <= 5 and dt < 60 and res.status == "optimal"
    record(10, "n=500 solve", fast, f"width {td.width}, {dt:.1f}s")
    path = tmp_path / "ktree.grl"
    path.write_text(dump_instance(g))
    outs = []
    for _ in range(2):
        proc = subprocess.run([sys.executable, "-m", "twdel.cli", "solve", "--problem", "soct", "--graph",
                               str(path), "--threads", "1"], capture_output=True, check=True)
        outs.append(proc.stdout)
    same = outs[0] == outs[1] and b"optimum_weight: %d" % res.deletion_weight in outs[0]
    record(10, "--threads 1 output bit-identical", same, f"{len(outs[0])} bytes")
    assert fast and same
