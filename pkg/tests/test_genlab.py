from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from interdep.cycles import enumerate_cycles, find_marginal_arcs
from interdep.genlab import (
    GeneratorConfig,
    InfeasibleConfig,
    PathSunletSpec,
    cluster_supportability,
    generate_path_sunlet,
    generate_random,
    ma_saturate,
)
from interdep.netmodel import InterdependentNetwork, validate
from interdep.restructure import decompose_clusters


@pytest.mark.parametrize("topology", ["uniform", "growth"])
def test_degree_bounds_and_crossing_arcs(topology):
    net = generate_random(GeneratorConfig(10, 10, 2, 4, seed=1, topology=topology))
    assert all(2 <= net.deg_in(v) <= 4 for v in net.nodes)
    assert all(net.side[u] != net.side[v] for u, v in net.arc_pairs())
    assert validate(net).ok


def test_asymmetric_sides():
    net = generate_random(GeneratorConfig(10, 20, seed=4))
    assert len(net.side_nodes(1)) == 10 and len(net.side_nodes(2)) == 20


def test_same_seed_same_graph():
    cfg = GeneratorConfig(15, 15, seed=42)
    assert generate_random(cfg) == generate_random(GeneratorConfig(15, 15, seed=42))
    assert generate_random(cfg) != generate_random(GeneratorConfig(15, 15, seed=43))


@pytest.mark.parametrize(
    "cfg",
    [
        GeneratorConfig(3, 3, deg_in_min=4, deg_in_max=4),
        GeneratorConfig(3, 3, deg_in_min=3, deg_in_max=2),
        GeneratorConfig(0, 3),
        GeneratorConfig(6, 6, cluster_model=1, cluster_sizes=((1, 2, 2), (2, 2, 2))),
        GeneratorConfig(6, 6, topology="lattice"),
    ],
)
def test_infeasible_configs(cfg):
    with pytest.raises(InfeasibleConfig):
        generate_random(cfg)


def test_support_templates():
    assert cluster_supportability(1) == {1: {1}, 2: {2}, 3: {3}}
    assert cluster_supportability(2)[1] == {1, 2}
    assert cluster_supportability(3)[2] == {1, 2, 3}
    with pytest.raises(ValueError):
        cluster_supportability(4)


def test_model1_cycles_stay_in_pairs():
    sizes = ((3, 4, 3), (3, 4, 3))
    net = generate_random(GeneratorConfig(10, 10, 1, 3, cluster_model=1, cluster_sizes=sizes, seed=0, topology="uniform"))
    for c in enumerate_cycles(net):
        assert len({net.cluster[v] for v in c.nodes}) == 1


def test_model3_cycle_can_span_all_clusters():
    sizes = ((2, 2, 2), (2, 2, 2))
    spans = 0
    for seed in range(10):
        net = generate_random(GeneratorConfig(6, 6, 2, 3, cluster_model=3, cluster_sizes=sizes, seed=seed, topology="uniform"))
        spans += any(len({net.cluster[v] for v in c.nodes}) == 3 for c in enumerate_cycles(net))
    assert spans > 0


@pytest.mark.parametrize("model", [1, 2, 3])
def test_clustered_growth_is_valid(model):
    sizes = ((5, 10, 5), (5, 10, 5))
    net = generate_random(GeneratorConfig(20, 20, cluster_model=model, cluster_sizes=sizes, seed=3))
    assert validate(net).ok
    assert len(decompose_clusters(net)) == 6


def test_path_sunlet_shapes():
    ring = generate_path_sunlet(PathSunletSpec(4))
    assert len(enumerate_cycles(ring)) == 1 and not find_marginal_arcs(ring)
    net = generate_path_sunlet(PathSunletSpec(4, [3, 3]))
    assert len(net) == 8 and net.n_arcs == 8
    assert len(enumerate_cycles(net)) == 1
    assert len(find_marginal_arcs(net)) == 4
    with pytest.raises(ValueError):
        generate_path_sunlet(PathSunletSpec(5))
    with pytest.raises(ValueError):
        generate_path_sunlet(PathSunletSpec(4, [1]))


def _free_arc(net, delta, policy):
    from interdep.genlab import _reaches

    for u in net.nodes:
        if net.deg_out(u) >= delta:
            continue
        for v in net.nodes:
            if net.may_support(u, v) and not net.has_arc(u, v):
                if policy != "marginal" or not _reaches(net, v, u):
                    return (u, v)
    return None


@pytest.mark.parametrize("policy", ["lex", "reciprocal", "marginal"])
def test_saturation_is_maximal(policy):
    base = generate_path_sunlet(PathSunletSpec(4, [3, 3]))
    net = ma_saturate(base, 2, policy)
    assert all(net.deg_out(v) <= 2 for v in net.nodes)
    assert _free_arc(net, 2, policy) is None
    assert ma_saturate(net, 2, policy) == net
    assert set(base.arc_pairs()) <= set(net.arc_pairs())


def test_saturation_of_single_two_cycle_is_identity():
    net = InterdependentNetwork.from_arcs({1: 1, 2: 2}, [(1, 2), (2, 1)])
    assert ma_saturate(net, 2) == net


def test_saturation_rejects_small_delta():
    net = generate_path_sunlet(PathSunletSpec(4, [3, 3]))
    with pytest.raises(ValueError):
        ma_saturate(net, 1)


@given(st.integers(0, 10_000), st.integers(2, 12), st.integers(2, 12), st.integers(1, 3), st.sampled_from(["uniform", "growth"]))
def test_generated_networks_pass_validation(seed, n1, n2, lo, topology):
    hi = lo + 1
    if lo > min(n1, n2):
        return
    net = generate_random(GeneratorConfig(n1, n2, lo, hi, seed=seed, topology=topology))
    assert validate(net).ok
    assert all(lo <= net.deg_in(v) <= max(hi, lo) for v in net.nodes)


@given(st.sampled_from([2, 4, 6, 8]), st.lists(st.integers(2, 4), max_size=2))
def test_path_sunlet_has_one_cycle(c, paths):
    net = generate_path_sunlet(PathSunletSpec(c, paths))
    assert len(enumerate_cycles(net)) == 1
    assert len(net) == c + sum(k - 1 for k in paths)
