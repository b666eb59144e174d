from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from helpers import independent_step_check, small_instances
from interdep.cycles import enumerate_cycles, find_marginal_arcs
from interdep.genlab import GeneratorConfig, generate_random
from interdep.instances import chain_with_marginals, motivating_pair, oracle_scale_instance, relocation_choice
from interdep.netmodel import ArcRef, InterdependentNetwork
from interdep.restructure import (
    CYCLE_FORMING,
    MINIMAL_ADD,
    SKIPPED,
    EvenHop,
    InvalidNetwork,
    clustered_delta_h,
    decompose_clusters,
    delta_h,
    exhaustive_optimum,
    minimal_add,
    random_reassign,
    replay,
    search_space_size,
)
from interdep.survivability import BudgetExceeded, survivability_exact


def _moves(report):
    return {(s.arc.source, s.old_dest, s.new_dest, s.mechanism) for s in report.steps if s.moved}


def _assert_clean(net, reports):
    moved = []
    for r in reports:
        assert r.violations == []
    for s, state in replay(net, [s for r in reports for s in r.steps]):
        if s.moved:
            moved.append(s.arc)
            assert independent_step_check(net, state, moved) is None


@pytest.mark.parametrize("l, dest", [(1, 8), (3, 6)])
def test_hop_length_picks_destination(l, dest):
    g, _ = motivating_pair()
    out, rep = delta_h(g, l, 0, mode="exact")
    first = rep.steps[0]
    assert first.arc == ArcRef(1, 2) and first.new_dest == dest and first.hop == l
    assert len(survivability_exact(out)) == 2
    _assert_clean(g, [rep])


def test_relocation_choice_reaches_two():
    g = relocation_choice()
    out, rep = delta_h(g, 1, 0, mode="exact")
    assert (2, 3, 4, CYCLE_FORMING) in _moves(rep)
    assert rep.survivability_before.size == 1 and rep.survivability_after.size == 2
    assert rep.steps[-1].reason == "stranded"
    assert rep.upper_bound.U == 1


def test_chain_example_moves():
    g = chain_with_marginals()
    out, rep = delta_h(g, 1, 0, mode="exact")
    assert _moves(rep) == {
        (1, 5, 4, CYCLE_FORMING),
        (2, 6, 1, MINIMAL_ADD),
        (3, 7, 2, CYCLE_FORMING),
        (6, 7, 5, MINIMAL_ADD),
    }
    assert rep.mas_found == rep.mas_relocated + rep.mas_minimal_added + rep.mas_skipped
    _assert_clean(g, [rep])


def test_minimal_add_outcomes():
    g = chain_with_marginals()
    step = minimal_add(g, ArcRef(2, 2), seed=0)
    assert step.mechanism == MINIMAL_ADD and step.new_dest == 1 and g.has_arc(2, 1)
    # a source nobody supports
    side = {0: 1, 1: 2, 2: 1, 3: 2}
    net = InterdependentNetwork.from_arcs(side, [(0, 1), (1, 0), (2, 3), (0, 3), (2, 1)])
    step = minimal_add(net, ArcRef(2, 1), seed=0)
    assert step.mechanism == SKIPPED and step.reason == "no_incoming"


def test_bad_inputs():
    with pytest.raises(EvenHop):
        delta_h(relocation_choice(), 2)
    with pytest.raises(EvenHop):
        delta_h(relocation_choice(), 0)
    starving = InterdependentNetwork.from_arcs({0: 1, 1: 2, 2: 2}, [(0, 1), (1, 0)])
    with pytest.raises(InvalidNetwork):
        delta_h(starving, 1)


def test_no_mas_means_no_steps():
    net = InterdependentNetwork.from_arcs({0: 1, 1: 2}, [(0, 1), (1, 0)])
    out, rep = delta_h(net, 1, 0)
    assert rep.steps == [] and out == net
    out, rep = random_reassign(net, 0)
    assert out == net
    assert exhaustive_optimum(net).best_delta == 0


def test_input_is_not_modified():
    g = chain_with_marginals()
    snapshot = g.copy()
    delta_h(g, 1, 3)
    random_reassign(g, 3)
    assert g == snapshot


def test_decompose_single_cluster_takes_everything():
    g = chain_with_marginals()
    parts = decompose_clusters(g)
    assert len(parts) == 2
    assert parts[0].arcs == frozenset(g.arc_refs()) and parts[1].arcs == frozenset()


def _clustered(model, seed, sizes=((2, 4, 2), (2, 4, 2))):
    return generate_random(GeneratorConfig(8, 8, 1, 3, cluster_model=model, cluster_sizes=sizes, seed=seed, topology="uniform"))


@pytest.mark.parametrize("model", [1, 2, 3])
def test_decompose_partitions_arcs(model):
    net = _clustered(model, 4)
    parts = decompose_clusters(net)
    assert [p.tag for p in parts] == [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3)]
    seen = [r for p in parts for r in p.arcs]
    assert sorted(seen) == net.arc_refs()
    if model == 1:
        assert [bool(p.arcs) for p in parts] == [True, True, True, False, False, False]


def test_model2_has_cross_cluster_group():
    net = _clustered(2, 1)
    groups = {p.tag: p for p in decompose_clusters(net)}
    w2 = [groups[(1, 2)], groups[(2, 2)]]
    cross = [r for g in w2 for r in g.arcs if net.cluster[r.source] != net.cluster[net.dest(r)]]
    assert any(g.arcs for g in w2) and cross


def test_clustered_matches_plain_without_clusters():
    for net in small_instances(15, seed=21):
        a, rep = delta_h(net, 1, 9, mode=None)
        b, reps = clustered_delta_h(net, 1, 9, mode=None)
        assert a == b
        assert [s.describe() for s in rep.steps] == [s.describe() for r in reps for s in r.steps]


@pytest.mark.parametrize("model", [1, 2, 3])
def test_clustered_runs_are_clean_and_never_lose(model):
    for seed in range(4):
        net = _clustered(model, seed)
        out, reps = clustered_delta_h(net, 1, seed, mode="exact")
        _assert_clean(net, reps)
        assert reps[0].survivability_after.size >= reps[0].survivability_before.size
        assert all(out.cluster[v] in out.supports[r.source] for r, v in out.arcs())


def test_random_reassign_is_reproducible():
    net = generate_random(GeneratorConfig(12, 12, seed=2))
    a, ra = random_reassign(net, 5, mode=None)
    b, rb = random_reassign(net, 5, mode=None)
    assert a == b and ra.steps == rb.steps
    _assert_clean(net, [ra])
    assert {s.reason for s in ra.steps if not s.moved} <= {"stranded", "unchanged", "retry_cap"}


def test_oracle_space_on_large_instance():
    net = oracle_scale_instance()
    assert search_space_size(net, find_marginal_arcs(net)) == 15**5
    with pytest.raises(BudgetExceeded):
        exhaustive_optimum(net, budget=1000)


def test_oracle_on_relocation_choice():
    res = exhaustive_optimum(relocation_choice())
    assert res.before == 1 and res.best_delta == 1
    w = relocation_choice()
    for k, v in res.witness.items():
        w.relocate(k, v)
    assert len(survivability_exact(w)) == 2


@given(st.integers(0, 100_000), st.sampled_from([1, 3, 5]))
def test_heuristic_is_deterministic_and_clean(seed, l):
    net = generate_random(GeneratorConfig(7, 7, 1, 3, seed=seed, topology="uniform"))
    a, ra = delta_h(net, l, seed, mode=None)
    b, rb = delta_h(net, l, seed, mode=None)
    assert a == b and ra.steps == rb.steps
    _assert_clean(net, [ra])
    assert ra.mas_found == ra.mas_relocated + ra.mas_minimal_added + ra.mas_skipped
    # old cycles survive every relocation
    after = {c.nodes for c in enumerate_cycles(a)}
    assert {c.nodes for c in enumerate_cycles(net)} <= after


@given(st.integers(0, 100_000))
def test_heuristic_never_beats_oracle(seed):
    net = generate_random(GeneratorConfig(4, 4, 1, 2, seed=seed, topology="uniform"))
    if not 1 <= len(find_marginal_arcs(net)) <= 3:
        return
    _, rep = delta_h(net, 1, seed, mode="exact")
    res = exhaustive_optimum(net)
    assert rep.delta <= res.best_delta <= rep.upper_bound.source_bound
