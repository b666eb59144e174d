from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from interdep import netmodel
from interdep.genlab import GeneratorConfig, generate_random
from interdep.instances import chain_with_marginals, relocation_choice, whole_network_collapse
from interdep.netmodel import ArcRef, InterdependentNetwork, ParseError, summarize, validate


def test_arc_refs_follow_insertion_order():
    net = relocation_choice()
    assert net.out_arcs(5) == [ArcRef(5, 1), ArcRef(5, 2)]
    assert net.dest(ArcRef(5, 2)) == 3
    assert net.arc_between(2, 3) == ArcRef(2, 2)


def test_relocate_keeps_reference_and_updates_indexes():
    net = relocation_choice()
    old = net.relocate(ArcRef(5, 2), 1)
    assert old == 3
    assert net.dest(ArcRef(5, 2)) == 1
    assert net.has_arc(5, 1) and not net.has_arc(5, 3)
    assert 5 in net.predecessors(1) and 5 not in net.predecessors(3)
    assert net.deg_out(5) == 2


def test_relocate_refuses_parallel_arc():
    net = relocation_choice()
    with pytest.raises(ValueError):
        net.relocate(ArcRef(1, 1), 6)


def test_parallel_and_unknown_arcs():
    net = InterdependentNetwork({0: 1, 1: 2})
    net.add_arc(0, 1)
    with pytest.raises(ValueError):
        net.add_arc(0, 1)
    with pytest.raises(KeyError):
        net.add_arc(0, 7)


def test_copy_is_independent():
    net = relocation_choice()
    dup = net.copy()
    dup.relocate(ArcRef(5, 2), 1)
    assert net.dest(ArcRef(5, 2)) == 3
    assert dup != net


def test_round_trip_preserves_everything():
    cfg = GeneratorConfig(6, 6, cluster_model=2, cluster_sizes=((2, 2, 2), (2, 2, 2)), seed=3, deg_in_min=1, deg_in_max=2)
    net = generate_random(cfg)
    back = netmodel.loads(netmodel.dumps(net))
    assert back == net
    assert back.arc_refs() == net.arc_refs()
    assert netmodel.dumps(back) == netmodel.dumps(net)


def test_save_and_load(tmp_path):
    net = chain_with_marginals()
    path = tmp_path / "g.txt"
    netmodel.save(net, path)
    assert netmodel.load(path) == net


@pytest.mark.parametrize(
    "text, field",
    [
        ("", "header"),
        ("k=3 gamma1=1 gamma2=1\n", "k"),
        ("k=2 gamma1=1 gamma2=1\nnode x 1 1 supports=1\n", "id"),
        ("k=2 gamma1=1 gamma2=1\nnode 0 3 1 supports=1\n", "constituent"),
        ("k=2 gamma1=1 gamma2=1\nnode 0 1 1 supports=1\nnode 0 2 1 supports=1\n", "id"),
        ("k=2 gamma1=1 gamma2=1\nnode 0 1 1 supports=1\narc 0 9\n", "dst"),
    ],
)
def test_parse_errors_name_the_field(text, field):
    with pytest.raises(ParseError) as info:
        netmodel.loads(text)
    assert info.value.field == field


def test_parse_error_reports_line():
    text = "k=2 gamma1=1 gamma2=1\nnode 0 1 1 supports=1\nnode 1 2 1 supports=1\narc 0 1\narc 0 1\n"
    with pytest.raises(ParseError) as info:
        netmodel.loads(text)
    assert info.value.line == 5


def test_comments_and_blank_lines_are_skipped():
    text = "# demo\n\nk=2 gamma1=1 gamma2=1\nnode 0 1 1 supports=1\nnode 1 2 1 supports=1\narc 0 1\narc 1 0\n"
    net = netmodel.loads(text)
    assert net.arc_pairs() == [(0, 1), (1, 0)]


def test_validate_accepts_hand_built_instances():
    for net in (whole_network_collapse(), relocation_choice(), chain_with_marginals()):
        assert validate(net).ok


def test_validate_flags_each_problem():
    net = InterdependentNetwork({0: 1, 1: 1, 2: 2})
    net.add_arc(0, 1)
    assert "intra_constituent_arc" in validate(net).checks_failed()
    assert "liveness" in validate(net).checks_failed()

    side = {0: 1, 1: 2, 2: 1, 3: 2}
    cluster = {0: 1, 1: 1, 2: 2, 3: 2}
    supports = {0: (1,), 1: (1,), 2: (2,), 3: (1,)}
    net = InterdependentNetwork.from_arcs(side, [(0, 1), (1, 0), (3, 2), (2, 3)], cluster, supports, (2, 2))
    report = validate(net)
    assert "cluster_legality" in report.checks_failed()
    assert "cluster_range" not in report.checks_failed()

    bad = InterdependentNetwork({0: 1, 1: 2}, {0: 4, 1: 1}, {0: (1,), 1: (1,)})
    assert "cluster_range" in validate(bad).checks_failed()


def test_validate_reports_reciprocity():
    side = {0: 1, 1: 2, 2: 2, 3: 1}
    cluster = {0: 1, 1: 1, 2: 2, 3: 2}
    supports = {0: (1, 2), 1: (1, 2), 2: (2,), 3: (1,)}
    arcs = [(0, 1), (1, 0), (0, 2), (2, 3), (3, 1)]
    net = InterdependentNetwork.from_arcs(side, arcs, cluster, supports, (2, 2))
    assert "cluster_reciprocity" in validate(net).checks_failed()


def test_summary_picks_smaller_supporting_side():
    s = summarize(chain_with_marginals())
    assert s.sizes == {1: 3, 2: 4}
    assert s.supporting == {1: 3, 2: 3}
    assert s.tie and s.min_supporting == 1
    assert s.supporting_nodes_bound() == 3


@given(st.integers(0, 10_000), st.integers(2, 6), st.integers(2, 6))
def test_round_trip_property(seed, n1, n2):
    net = generate_random(GeneratorConfig(n1, n2, 1, 2, seed=seed, topology="uniform"))
    assert netmodel.loads(netmodel.dumps(net)) == net


@given(st.integers(0, 10_000))
def test_relocation_keeps_degree_totals(seed):
    import random

    net = generate_random(GeneratorConfig(5, 5, 1, 3, seed=seed, topology="uniform"))
    rng = random.Random(seed)
    ref = rng.choice(net.arc_refs())
    free = [v for v in net.nodes if net.side[v] != net.side[ref.source] and not net.has_arc(ref.source, v)]
    if not free:
        return
    before = {v: net.deg_out(v) for v in net.nodes}
    net.relocate(ref, rng.choice(free))
    assert {v: net.deg_out(v) for v in net.nodes} == before
    assert sum(net.deg_in(v) for v in net.nodes) == net.n_arcs
