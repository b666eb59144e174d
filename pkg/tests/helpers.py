"""Independent reference implementations and instance builders for the tests."""

from __future__ import annotations

import random
from itertools import combinations
from typing import Iterable, List, Optional, Set, Tuple

import networkx as nx

from interdep.genlab import GeneratorConfig, generate_random
from interdep.netmodel import InterdependentNetwork


def to_nx(net: InterdependentNetwork) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(net.nodes)
    g.add_edges_from(net.arc_pairs())
    return g


def brute_force_fvs(net: InterdependentNetwork) -> int:
    """Smallest k such that some k-subset leaves a DAG; networkx does the acyclicity test."""
    g = to_nx(net)
    nodes = sorted(g)
    for k in range(len(nodes) + 1):
        for sub in combinations(nodes, k):
            h = g.copy()
            h.remove_nodes_from(sub)
            if nx.is_directed_acyclic_graph(h):
                return k
    raise AssertionError("unreachable")


def nx_marginal_pairs(net: InterdependentNetwork) -> Set[Tuple[int, int]]:
    # an arc lies on a cycle iff both ends share a strongly connected component
    comp = {}
    for i, c in enumerate(nx.strongly_connected_components(to_nx(net))):
        for v in c:
            comp[v] = i
    return {(u, v) for u, v in net.arc_pairs() if comp[u] != comp[v]}


def nx_cycle_reachable(net: InterdependentNetwork) -> Set[int]:
    g = to_nx(net)
    on_cycle = {v for c in nx.strongly_connected_components(g) if len(c) > 1 for v in c}
    out = set(on_cycle)
    for v in on_cycle:
        out |= nx.descendants(g, v)
    return out


def functional_fixpoint(net: InterdependentNetwork, failed: Iterable[int]) -> Set[int]:
    """Largest set S avoiding ``failed`` where every member has a supporter in S.

    Computed by brute force over subsets, so only for tiny graphs.
    """
    failed = set(failed)
    cand = [v for v in net.nodes if v not in failed]
    for k in range(len(cand), -1, -1):
        for sub in combinations(cand, k):
            s = set(sub)
            if all(any(u in s for u in net.predecessors(v)) for v in s):
                return s
    return set()


def random_digraph(seed: int, n1: int, n2: int, p: float, min_in: int = 0) -> InterdependentNetwork:
    """Bipartite random digraph; with ``min_in`` every node gets that many supporters."""
    rng = random.Random(seed)
    side = {v: 1 if v < n1 else 2 for v in range(n1 + n2)}
    arcs = set()
    for u in side:
        for v in side:
            if side[u] != side[v] and rng.random() < p:
                arcs.add((u, v))
    for v in side:
        pool = [u for u in side if side[u] != side[v]]
        have = sum(1 for a in arcs if a[1] == v)
        rng.shuffle(pool)
        for u in pool:
            if have >= min(min_in, len(pool)):
                break
            if (u, v) not in arcs:
                arcs.add((u, v))
                have += 1
    return InterdependentNetwork.from_arcs(side, sorted(arcs))


def small_instances(count: int, seed: int = 0, max_side: int = 7) -> List[InterdependentNetwork]:
    """Valid networks of 3..max_side nodes per side mixing both generator topologies."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n1 = rng.randint(3, max_side)
        n2 = rng.randint(3, max_side)
        hi = rng.choice((2, 3))
        topo = rng.choice(("uniform", "growth"))
        cfg = GeneratorConfig(n1, n2, 1, hi, seed=rng.randrange(2**31), topology=topo)
        out.append(generate_random(cfg))
    return out


def without_arcs(net: InterdependentNetwork, pairs: Iterable[Tuple[int, int]]) -> InterdependentNetwork:
    drop = set(pairs)
    return InterdependentNetwork.from_arcs(
        net.side, [a for a in net.arc_pairs() if a not in drop], net.cluster, net.supports, net.gamma
    )


def independent_step_check(before: InterdependentNetwork, after: InterdependentNetwork, moved: List) -> Optional[str]:
    """Re-derive the per-step invariants without library helpers beyond the graph accessors."""
    for v in after.nodes:
        if not after.predecessors(v):
            return f"node {v} has no supporter"
    if sorted(before.deg_out(v) for v in before.nodes) != sorted(after.deg_out(v) for v in after.nodes):
        return "out-degree multiset changed"
    for v in after.nodes:
        if before.deg_out(v) != after.deg_out(v):
            return f"out-degree of {v} changed"
    for u, v in after.arc_pairs():
        if after.cluster[v] not in after.supports[u] or after.side[u] == after.side[v]:
            return f"arc {u}->{v} breaks supportability"
    if len(moved) != len(set(moved)):
        return "an arc moved twice"
    alive = set(after.nodes)
    while True:
        lost = {v for v in alive if not set(after.predecessors(v)) & alive}
        if not lost:
            break
        alive -= lost
    if alive != set(after.nodes):
        return "spontaneous cascade"
    return None
