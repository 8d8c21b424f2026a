import random

import pytest
from hypothesis import given, settings

from conftest import TRIANGLE, clique, cycle, graph, random_instance, small_graphs
from twdel.decomposition import (
    TDParseError, TreeDecomposition, dump_td, heuristic_td, load_td, nicify, validate_nice, validate_td,
)


def td(bags, edges=()):
    return TreeDecomposition(tuple(frozenset(b) for b in bags), tuple(edges))


# ---------------------------------------------------------------- PACE I/O


def test_load_single_bag():
    t = load_td("s td 1 3 3\nb 1 1 2 3\n")
    assert t.bags == (frozenset({0, 1, 2}),) and t.edges == ()


def test_load_two_bags_with_edge():
    t = load_td("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n")
    assert t.bags == (frozenset({0, 1}), frozenset({1, 2}))
    assert len(t.edges) == 1


@pytest.mark.parametrize("text, line", [
    ("s td 2 2 3\nb 5 1 2\n", 2),
    ("b 1 1\n", 1),
    ("s td 1 2\n", 1),
    ("s td 2 2 3\nb 1 1 2\nb 2 2 3\n", None),  # forest, not a tree
    ("s td 3 2 3\nb 1 1\nb 2 2\nb 3 3\n1 2\n2 3\n1 3\n", None),  # cycle
])
def test_load_rejects_malformed_text(text, line):
    with pytest.raises(TDParseError) as err:
        load_td(text)
    if line is not None:
        assert err.value.line == line


def test_dump_load_round_trip():
    g = cycle(6)
    t = heuristic_td(g)
    back = load_td(dump_td(t, g.n))
    assert back.bags == t.bags
    assert {frozenset(e) for e in back.edges} == {frozenset(e) for e in t.edges}


# ---------------------------------------------------------------- validation


def test_validate_accepts_full_bag():
    assert validate_td(graph(3, TRIANGLE), td([{0, 1, 2}]))


def test_validate_reports_uncovered_edge():
    rep = validate_td(graph(3, TRIANGLE), td([{0, 1}, {1, 2}], [(0, 1)]))
    assert not rep and rep.axiom == 2
    assert set(rep.witness) == {0, 2}


def test_validate_reports_disconnected_occurrences():
    # graph a-c with a=0, b=1, c=2
    rep = validate_td(graph(3, [(0, 2)]), td([{0}, {1}, {0, 2}], [(0, 1), (1, 2)]))
    assert not rep and rep.axiom == 3 and rep.witness == 0


def test_validate_reports_missing_vertex():
    rep = validate_td(graph(3, [(0, 1)]), td([{0, 1}]))
    assert not rep and rep.axiom == 1


# ---------------------------------------------------------------- heuristics


def test_heuristic_widths_on_simple_families():
    tree = graph(7, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)])
    assert heuristic_td(tree).width == 1
    assert heuristic_td(cycle(5)).width == 2
    assert heuristic_td(clique(5)).width == 4


@pytest.mark.parametrize("criterion", ["best", "min-fill", "min-degree"])
def test_heuristic_output_is_valid(criterion):
    rng = random.Random(3)
    for _ in range(40):
        g = random_instance(rng, 1, 25)
        assert validate_td(g, heuristic_td(g, criterion))


def test_heuristic_handles_empty_graph():
    g = graph(0, [])
    t = heuristic_td(g)
    assert validate_td(g, t)


# ---------------------------------------------------------------- nicify


def test_nicify_single_edge_trace():
    g = graph(2, [(0, 1)])
    nice = nicify(td([{0, 1}]), g)
    kinds = [(n.kind, n.vertex) for n in nice.nodes]
    assert kinds == [("leaf", None), ("introduce", 0), ("introduce", 1), ("forget", 0), ("forget", 1)]


def test_nicify_empty_graph_is_one_leaf():
    nice = nicify(td([]), graph(0, []))
    assert len(nice.nodes) == 1 and nice.nodes[0].kind == "leaf"


def test_nicify_duplicate_adjacent_bags():
    g = graph(2, [(0, 1)])
    nice = nicify(td([{0, 1}, {0, 1}], [(0, 1)]), g)
    assert validate_nice(nice, g)
    assert nice.width == 1
    # the duplicate bag is kept as a node bag without a join
    assert sum(n.bag == {0, 1} for n in nice.nodes) >= 1
    assert not any(n.kind == "join" for n in nice.nodes)


def test_nicify_star_decomposition_uses_joins():
    g = graph(4, [(0, 1), (0, 2), (0, 3)])
    t = td([{0}, {0, 1}, {0, 2}, {0, 3}], [(0, 1), (0, 2), (0, 3)])
    nice = nicify(t, g)
    assert validate_nice(nice, g)
    joins = [n for n in nice.nodes if n.kind == "join"]
    assert len(joins) == 2 and all(n.bag == {0} for n in joins)


def test_nicify_rejects_invalid_input():
    with pytest.raises(ValueError):
        nicify(td([{0, 1}]), graph(3, TRIANGLE))


@settings(max_examples=150, deadline=None)
@given(small_graphs(max_n=12))
def test_nicify_preserves_width_and_validity(g):
    t = heuristic_td(g)
    nice = nicify(t, g)
    assert validate_nice(nice, g)
    assert nice.width == t.width
    assert all(not n.bag for n in nice.nodes if n.kind == "leaf")
    assert not nice.nodes[nice.root].bag
    bags = {n.bag for n in nice.nodes}
    assert all(b in bags for b in t.bags)
