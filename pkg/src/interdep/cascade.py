"""Cascading failure under the rule "a node works iff some working node supports it"."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, NamedTuple

from interdep.netmodel import InterdependentNetwork

__all__ = ["CascadeResult", "ImpactStats", "cascade", "impact_stats"]


@dataclass(frozen=True)
class CascadeResult:
    initial_failures: FrozenSet[int]
    nonfunctional: FrozenSet[int]
    rounds: int

    @property
    def theta(self) -> int:
        return len(self.nonfunctional)


class ImpactStats(NamedTuple):
    worst: int
    average: Fraction
    per_node: Dict[int, int]


def cascade(network: InterdependentNetwork, failures: Iterable[int] = ()) -> CascadeResult:
    """Fail ``failures`` and propagate in synchronous rounds until nothing changes.

    The surviving set is the greatest fixpoint: every survivor keeps at least
    one surviving supporter. ``rounds`` counts propagation waves after the
    initial failure, and is zero when nothing beyond the failed set is lost.
    """
    failed = frozenset(failures)
    for v in failed:
        if v not in network:
            raise KeyError(f"unknown node {v}")
    alive = set(network.nodes) - failed
    rounds = 0
    while True:
        lost = [v for v in alive if not any(u in alive for u in network.predecessors(v))]
        if not lost:
            break
        alive.difference_update(lost)
        rounds += 1
    return CascadeResult(failed, frozenset(network.nodes) - alive, rounds)


def impact_stats(network: InterdependentNetwork) -> ImpactStats:
    """theta_v for every single-node failure, plus the worst and mean values.

    theta_v counts v itself.
    """
    per_node = {v: cascade(network, (v,)).theta for v in network.nodes}
    if not per_node:
        return ImpactStats(0, Fraction(0), {})
    return ImpactStats(max(per_node.values()), Fraction(sum(per_node.values()), len(per_node)), per_node)
