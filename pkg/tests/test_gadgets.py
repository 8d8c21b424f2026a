from math import comb

import pytest

from twdel.decomposition import validate_td
from twdel.gadgets import (
    FAMILIES, GADGET_TABLE, VARIANT_COUNT, WITNESS_WIDTH_CONSTANT, GridProblemInstance, all_grid_instances,
    allowed_pairs, construct_lb_instance, construct_mwc_lb, construct_nmc_lb, gen_grid_instance,
    generic_budget, mwc_parameters, verify_gadget, witness_path_decomposition,
)
from twdel.graph import Problem, components
from twdel.oracle import exact_solve, solution_is_valid

PIS = "permutation-independent-set"


# ---------------------------------------------------------------- grid sources


def test_grid_instance_solutions():
    H = GridProblemInstance(2, (((1, 1), (2, 2)),), PIS)
    assert list(H.solutions()) == [((2, 1), (1, 2))]
    H = GridProblemInstance(2, (((1, 1), (2, 2)), ((2, 1), (1, 2))), PIS)
    assert not H.has_solution()


def test_grid_instance_validation():
    with pytest.raises(ValueError):
        GridProblemInstance(2, (((1, 1), (3, 1)),), PIS)
    with pytest.raises(ValueError):
        GridProblemInstance(2, (((1, 1), (1, 2)),), "permutation-clique")
    with pytest.raises(ValueError):
        GridProblemInstance(2, (((1, 1), (2, 2)),), PIS, planted=((1, 1), (2, 2)))


def test_allowed_pairs_counts():
    # distinct columns: C(k,2) column pairs times k^2 row choices; permutations forbid equal rows
    for k in (2, 3):
        assert len(allowed_pairs(k, "independent-set")) == comb(k, 2) * k * k
        assert len(allowed_pairs(k, PIS)) == comb(k, 2) * k * (k - 1)


def test_generated_sources_are_seeded_and_planted():
    a = gen_grid_instance(3, 4, PIS, seed=1, plant=True)
    b = gen_grid_instance(3, 4, PIS, seed=1, plant=True)
    assert a == b and a.is_solution(a.planted)
    c = gen_grid_instance(3, 4, "permutation-clique", seed=2, plant=True)
    assert c.is_solution(c.planted)
    with pytest.raises(ValueError):
        gen_grid_instance(2, 2, PIS, seed=0, plant=True)


def test_all_grid_instances_enumerates_edge_subsets():
    assert len(list(all_grid_instances(2, 1, PIS))) == 2
    assert len(list(all_grid_instances(2, 2, PIS))) == 1


# ---------------------------------------------------------------- gadgets


@pytest.mark.parametrize("problem", list(GADGET_TABLE))
@pytest.mark.parametrize("family", FAMILIES)
@pytest.mark.parametrize("k", [2, 3])
def test_table_gadgets_verify(problem, family, k):
    res = verify_gadget(family, GADGET_TABLE[problem][family], k, problem)
    assert res, res.reason
    if family == "column-selector":
        assert len(res.legal_deletions) == k
        assert all(len(X) == 2 * k - 2 for X in res.legal_deletions)


@pytest.mark.parametrize("problem, family, variant", [
    (Problem.ECT, "column-selector", 1),
    (Problem.SOCT, "column-selector", 2),
    (Problem.SOCT, "row-selector", 1),
    (Problem.ECT, "edge", 1),
    (Problem.SOCT, "edge", 2),
    (Problem.SOCT, "propagation", 1),
    (Problem.ECT, "propagation", 2),
])
def test_off_table_gadgets_fail(problem, family, variant):
    res = verify_gadget(family, variant, 2, problem)
    assert not res and res.counterexample is not None


def test_variant_names_and_ranges():
    assert verify_gadget("column-selector", "G1(C)", 2, "sfvs")
    assert verify_gadget("propagation", "G3", 2, "ect")
    with pytest.raises(ValueError):
        verify_gadget("edge", 3, 2, "sfvs")
    with pytest.raises(ValueError):
        verify_gadget("spiral", 1, 2, "sfvs")
    assert set(VARIANT_COUNT) == set(FAMILIES)


# ---------------------------------------------------------------- generic construction


@pytest.mark.parametrize("problem", ["sfvs", "soct", "ect"])
@pytest.mark.parametrize("k, m", [(2, 1), (3, 2)])
def test_planted_deletion_is_legal_and_tight(problem, k, m):
    H = gen_grid_instance(k, m, PIS, seed=3, plant=True)
    gen = construct_lb_instance(problem, H)
    assert gen.budget == generic_budget(k, m) == 2 * (k - 1) * k * m
    assert len(gen.planted_deletion) == gen.budget
    assert solution_is_valid(gen.instance, gen.planted_deletion)
    table = GADGET_TABLE[Problem(problem)]
    assert gen.metadata["gadgets"] == {f: f"G{table[f]}({f[0].upper()})" for f in FAMILIES}


@pytest.mark.parametrize("problem", ["sfvs", "soct", "ect"])
@pytest.mark.parametrize("k", [2, 3])
def test_witness_decomposition_is_valid_and_narrow(problem, k):
    H = gen_grid_instance(k, 2 if k == 3 else 1, PIS, seed=5)
    gen = construct_lb_instance(problem, H)
    pd = witness_path_decomposition(gen)
    assert validate_td(gen.instance, pd)
    assert all(a + 1 == b for a, b in pd.edges)
    assert pd.width <= WITNESS_WIDTH_CONSTANT * k


def test_generic_construction_rejects_wrong_sources():
    with pytest.raises(ValueError):
        construct_lb_instance("sfvs", GridProblemInstance(2, (((1, 1), (2, 2)),), "independent-set"))
    with pytest.raises(ValueError):
        construct_lb_instance("sfvs", GridProblemInstance(2, (), PIS))
    with pytest.raises(ValueError):
        construct_lb_instance("nmc", gen_grid_instance(2, 1, PIS, seed=0))


def test_small_sfvs_round_trip():
    for H in all_grid_instances(2, 1, PIS):
        gen = construct_lb_instance("sfvs", H)
        assert exact_solve(gen.instance).optimum_weight == gen.budget == 4
    (H,) = all_grid_instances(2, 2, PIS)
    gen = construct_lb_instance("sfvs", H)
    assert exact_solve(gen.instance).optimum_weight > gen.budget


# ---------------------------------------------------------------- multiway cut


def test_nmc_construction_shape_and_plant():
    H = gen_grid_instance(2, 2, "independent-set", seed=1, plant=True)
    gen = construct_nmc_lb(H)
    k, m = 2, 2
    assert gen.instance.n == 2 * k * k * m + 2 * k + 2
    assert len(gen.instance.terminals) == k + 2
    assert len(gen.planted_deletion) == gen.budget == 2 * (k - 1) * k * m
    assert solution_is_valid(gen.instance, gen.planted_deletion)
    assert validate_td(gen.instance, gen.witness_pd)


def test_mwc_parameters_match_closed_forms():
    H = GridProblemInstance(2, (((1, 1), (2, 2)),), "permutation-clique", planted=((1, 1), (2, 2)))
    prm = mwc_parameters(H)
    assert (prm.k, prm.mu, prm.max_degree) == (2, 1, 1)
    assert prm.m == 4
    assert prm.h == 12 * 4 - 2 * 1 - 1 == 45
    assert prm.budget == 46 * 1 * 2 * (1 + 4) + 45 == 505


def test_mwc_planted_cut_separates_terminals():
    H = GridProblemInstance(2, (((1, 1), (2, 2)),), "permutation-clique", planted=((1, 1), (2, 2)))
    gen = construct_mwc_lb(H, expand=False)
    inst = gen.instance
    assert solution_is_valid(inst, gen.planted_deletion)
    weight = sum(inst.ew(*e) for e in gen.planted_deletion)
    # the weighted construction falls 12 per source edge short of the nominal budget
    assert weight == gen.budget - 12 * len(H.edges)
    removed = set(gen.planted_deletion)
    adj = [set() for _ in range(inst.n)]
    for u, v in inst.edges():
        if (u, v) not in removed:
            adj[u].add(v)
            adj[v].add(u)
    comp = components(adj, set(range(inst.n)))
    assert len({comp[t] for t in inst.terminals}) == len(inst.terminals)


def test_mwc_expansion_preserves_cut_weight():
    H = GridProblemInstance(2, (((1, 1), (2, 2)),), "permutation-clique", planted=((1, 1), (2, 2)))
    weighted = construct_mwc_lb(H, expand=False)
    expanded = construct_mwc_lb(H, expand=True)
    assert expanded.instance.n == 11655 and not expanded.instance.edge_weight
    assert len(expanded.planted_deletion) == sum(weighted.instance.ew(*e) for e in weighted.planted_deletion)
    assert solution_is_valid(expanded.instance, expanded.planted_deletion)
