from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from helpers import nx_marginal_pairs, random_digraph, to_nx
from interdep.cycles import (
    Cycle,
    CycleCapExceeded,
    cycles_through,
    enumerate_cycles,
    find_marginal_arcs,
    is_acyclic,
    simple_cycles,
    strongly_connected_components,
)
from interdep.instances import chain_with_marginals, motivating_pair, relocation_choice
from interdep.netmodel import ArcRef


def _canon(c):
    k = c.index(min(c))
    return tuple(c[k:] + c[:k])


def test_back_walks_against_orientation():
    c = Cycle((1, 5, 4, 2), ())
    assert c.back(1, 1) == 2
    assert c.back(1, 3) == 5
    assert c.back(5, 0) == 5
    assert c.counter_distance(1, 4) == 2


def test_relocation_example_cycles_and_mas():
    net = relocation_choice()
    cycles = {c.nodes for c in enumerate_cycles(net)}
    assert cycles == {(1, 5, 4, 2), (1, 6)}
    assert find_marginal_arcs(net) == {ArcRef(2, 2), ArcRef(5, 2)}


def test_chain_example_mas():
    net = chain_with_marginals()
    mas = find_marginal_arcs(net)
    assert len(mas) == 7
    assert all(net.dest(r) in (5, 6, 7) for r in mas)


def test_motivating_pair_cycle_counts():
    g, h = motivating_pair()
    assert len(enumerate_cycles(g)) == 2
    assert len(enumerate_cycles(h)) == 3


def test_cycles_through_filters():
    net = relocation_choice()
    through = cycles_through(net, 6, enumerate_cycles(net))
    assert [c.nodes for c in through] == [(1, 6)]


def test_cap_raises():
    net = random_digraph(1, 6, 6, 0.9)
    with pytest.raises(CycleCapExceeded):
        enumerate_cycles(net, cap=10)


def test_is_acyclic_with_removals():
    adj = relocation_choice().adjacency()
    assert not is_acyclic(adj)
    assert is_acyclic(adj, [1])
    assert not is_acyclic(adj, [6])


@given(st.integers(0, 100_000), st.integers(1, 5), st.integers(1, 5), st.floats(0.1, 0.7))
def test_cycles_match_networkx(seed, n1, n2, p):
    net = random_digraph(seed, n1, n2, p)
    ours = sorted(simple_cycles(net.adjacency()))
    ref = sorted(_canon(list(c)) for c in nx.simple_cycles(to_nx(net)))
    assert ours == ref
    assert all(c == _canon(list(c)) for c in ours)


@given(st.integers(0, 100_000), st.integers(1, 6), st.integers(1, 6), st.floats(0.05, 0.6))
def test_scc_and_marginals_match_networkx(seed, n1, n2, p):
    net = random_digraph(seed, n1, n2, p)
    ours = {frozenset(c) for c in strongly_connected_components(net.adjacency())}
    ref = {frozenset(c) for c in nx.strongly_connected_components(to_nx(net))}
    assert ours == ref
    mas = {(r.source, net.dest(r)) for r in find_marginal_arcs(net)}
    assert mas == nx_marginal_pairs(net)
    assert is_acyclic(net.adjacency()) == nx.is_directed_acyclic_graph(to_nx(net))
