"""Small hand-built networks used in examples and tests.

Node ids follow the ``v``-numbering of the illustrations they mimic, so
``2`` is v2. Arcs are added in a fixed order, which fixes every ArcRef.
"""

from __future__ import annotations

import random
from typing import Dict, List, Tuple

from interdep.netmodel import ArcRef, InterdependentNetwork

__all__ = [
    "whole_network_collapse",
    "motivating_pair",
    "relocation_choice",
    "chain_with_marginals",
    "oracle_scale_instance",
]


def _sides(a: List[int], b: List[int]) -> Dict[int, int]:
    side = {v: 1 for v in a}
    side.update({v: 2 for v in b})
    return side


def whole_network_collapse() -> InterdependentNetwork:
    """Four nodes where losing v1 takes everything down.

    v1 and v2 support each other, v2 also feeds v3 (side 1), and v3 feeds
    v4. Node 3 plays v1' and node 4 plays v2'.
    """
    return InterdependentNetwork.from_arcs(_sides([1, 3], [2, 4]), [(1, 2), (2, 1), (2, 3), (3, 4)])


def motivating_pair() -> Tuple[InterdependentNetwork, InterdependentNetwork]:
    """Two overlapping cycles sharing arc v2->v3, plus MAs v1->v9 and v7->v9.

    The second network differs only in where v1's MA points: v6 instead of
    v9, which closes a third cycle v1 v6 v7 v8 and lifts survivability from
    1 to 2.
    """
    side = _sides([1, 3, 5, 7], [2, 4, 6, 8, 9])
    arcs = [(1, 2), (1, 9), (2, 3), (3, 6), (3, 4), (4, 5), (5, 2), (6, 7), (7, 8), (7, 9), (8, 1)]
    g = InterdependentNetwork.from_arcs(side, arcs)
    h = g.copy()
    h.relocate(ArcRef(1, 2), 6)
    return g, h


def relocation_choice() -> InterdependentNetwork:
    """Cycle v1 v5 v4 v2 and 2-cycle v1 v6, with MAs v2->v3 and v5->v3.

    Moving v5's MA to v1 leaves survivability at 1; moving v2's MA to v4
    raises it to 2.
    """
    side = _sides([1, 3, 4], [2, 5, 6])
    arcs = [(1, 5), (1, 6), (2, 1), (2, 3), (4, 2), (5, 4), (5, 3), (6, 1)]
    return InterdependentNetwork.from_arcs(side, arcs)


def chain_with_marginals() -> InterdependentNetwork:
    """One 4-cycle v1 v2 v3 v4 with seven MAs hanging off it."""
    side = _sides([1, 3, 6], [2, 4, 5, 7])
    arcs = [
        (1, 2), (2, 3), (3, 4), (4, 1),
        (1, 5), (1, 7), (2, 6), (3, 5), (3, 7), (5, 6), (6, 7),
    ]  # fmt: skip
    return InterdependentNetwork.from_arcs(side, arcs)


def oracle_scale_instance(seed: int = 11) -> InterdependentNetwork:
    """15 + 15 nodes, 84 arcs, exactly 5 MAs, no clusters.

    Nodes 0..14 are side 1 and 15..29 side 2. Nodes 0..28 form one strongly
    connected block with 79 arcs; node 29 is fed only by five MAs from
    nodes 0..4. Every MA can legally point at any of the 15 side-2 nodes.
    """
    rng = random.Random(seed)
    side = {v: 1 if v < 15 else 2 for v in range(30)}
    net = InterdependentNetwork(side)
    a = list(range(14))
    b = list(range(15, 29))
    # alternating ring over 28 nodes, then node 14 tied in with a 2-cycle
    ring = [x for pair in zip(a, b) for x in pair]
    for i, v in enumerate(ring):
        net.add_arc(v, ring[(i + 1) % len(ring)])
    net.add_arc(14, 15)
    net.add_arc(15, 14)
    block = a + [14] + b
    while net.n_arcs < 79:
        u = rng.choice(block)
        v = rng.choice([x for x in block if side[x] != side[u]])
        if not net.has_arc(u, v):
            net.add_arc(u, v)
    for u in range(5):
        net.add_arc(u, 29)
    return net
