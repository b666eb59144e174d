"""Elementary cycle enumeration and Marginal Arc detection.

Cycles are found with Johnson's algorithm, run separately inside each
strongly connected component. An arc that lies on no elementary cycle is a
*Marginal Arc* (MA): it can be removed or redirected without destroying or
joining any existing cycle.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Sequence, Tuple

from interdep.netmodel import ArcRef, InterdependentNetwork

__all__ = [
    "DEFAULT_CYCLE_CAP",
    "Cycle",
    "CycleCapExceeded",
    "strongly_connected_components",
    "simple_cycles",
    "enumerate_cycles",
    "find_marginal_arcs",
    "marginal_arcs_of",
    "cycles_through",
    "counter_distance",
    "is_acyclic",
]

DEFAULT_CYCLE_CAP = 1_000_000


class CycleCapExceeded(RuntimeError):
    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"more than {cap} elementary cycles; raise the cap or use a smaller graph")


@dataclass(frozen=True)
class Cycle:
    """Elementary directed cycle, rotated so the smallest node comes first.

    ``arcs[i]`` is the arc from ``nodes[i]`` to ``nodes[i + 1]`` (wrapping).
    """

    nodes: Tuple[int, ...]
    arcs: Tuple[ArcRef, ...]

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, v: object) -> bool:
        return v in self.nodes

    def position(self, v: int) -> int:
        try:
            return self.nodes.index(v)
        except ValueError:
            raise KeyError(f"node {v} is not on cycle {self.nodes}") from None

    def counter_distance(self, v: int, u: int) -> int:
        return (self.position(v) - self.position(u)) % len(self.nodes)

    def back(self, v: int, hops: int) -> int:
        """Node reached from ``v`` after ``hops`` steps against arc direction."""
        return self.nodes[(self.position(v) - hops) % len(self.nodes)]


def counter_distance(cycle: Cycle, v: int, u: int) -> int:
    """Hops from ``v`` to ``u`` walking the cycle against its arcs."""
    return cycle.counter_distance(v, u)


def strongly_connected_components(adj: Dict[int, Sequence[int]]) -> List[List[int]]:
    """Tarjan's algorithm without recursion. Components come out sorted."""
    index: Dict[int, int] = {}
    low: Dict[int, int] = {}
    on_stack = set()
    stack: List[int] = []
    comps: List[List[int]] = []
    counter = 0
    for root in sorted(adj):
        if root in index:
            continue
        work = [(root, iter(adj[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(adj.get(w, ()))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    comps.sort()
    return comps


def is_acyclic(adj: Dict[int, Sequence[int]], removed: Iterable[int] = ()) -> bool:
    """Kahn's test on ``adj`` with the ``removed`` nodes deleted."""
    gone = set(removed)
    indeg = {v: 0 for v in adj if v not in gone}
    for v in indeg:
        for w in adj[v]:
            if w in indeg:
                indeg[w] += 1
    ready = [v for v, d in indeg.items() if d == 0]
    seen = 0
    while ready:
        v = ready.pop()
        seen += 1
        for w in adj[v]:
            if w in indeg:
                indeg[w] -= 1
                if indeg[w] == 0:
                    ready.append(w)
    return seen == len(indeg)


def _circuits_from(start: int, sub: Dict[int, List[int]]) -> Iterator[List[int]]:
    # Johnson's CIRCUIT procedure, unrolled into an explicit stack.
    path = [start]
    blocked = {start}
    B: Dict[int, set] = defaultdict(set)
    stack = [iter(sub[start])]
    closed = [False]
    while stack:
        for w in stack[-1]:
            if w == start:
                yield list(path)
                closed[-1] = True
            elif w not in blocked:
                path.append(w)
                closed.append(False)
                stack.append(iter(sub[w]))
                blocked.add(w)
                break
        else:
            stack.pop()
            v = path.pop()
            if closed.pop():
                if closed:
                    closed[-1] = True
                pending = {v}
                while pending:
                    u = pending.pop()
                    if u in blocked:
                        blocked.discard(u)
                        pending.update(B[u])
                        B[u].clear()
            else:
                for w in sub[v]:
                    B[w].add(v)


def simple_cycles(adj: Dict[int, Sequence[int]], cap: int = DEFAULT_CYCLE_CAP) -> List[Tuple[int, ...]]:
    """All elementary cycles of ``adj`` as node tuples starting at their minimum.

    Raises:
        CycleCapExceeded: more than ``cap`` cycles exist.
    """
    if cap <= 0:
        raise ValueError("cap must be positive")
    found: List[Tuple[int, ...]] = []
    pending = [c for c in strongly_connected_components(adj) if len(c) > 1]
    while pending:
        comp = pending.pop()
        members = set(comp)
        start = comp[0]
        sub = {v: [w for w in adj[v] if w in members] for v in comp}
        for circuit in _circuits_from(start, sub):
            found.append(tuple(circuit))
            if len(found) > cap:
                raise CycleCapExceeded(cap)
        rest = {v: [w for w in sub[v] if w != start] for v in comp[1:]}
        pending.extend(c for c in strongly_connected_components(rest) if len(c) > 1)
    found.sort()
    return found


def enumerate_cycles(network: InterdependentNetwork, cap: int = DEFAULT_CYCLE_CAP) -> Tuple[Cycle, ...]:
    """Every elementary directed cycle of ``network`` in canonical order."""
    out = []
    for nodes in simple_cycles(network.adjacency(), cap):
        arcs = tuple(
            network.arc_between(nodes[i], nodes[(i + 1) % len(nodes)]) for i in range(len(nodes))
        )
        out.append(Cycle(nodes, arcs))
    return tuple(out)


def marginal_arcs_of(network: InterdependentNetwork, cycles: Iterable[Cycle]) -> FrozenSet[ArcRef]:
    on_cycle = set()
    for c in cycles:
        on_cycle.update(c.arcs)
    return frozenset(r for r in network.arc_refs() if r not in on_cycle)


def find_marginal_arcs(network: InterdependentNetwork, cap: int = DEFAULT_CYCLE_CAP) -> FrozenSet[ArcRef]:
    """Arcs that belong to no elementary cycle."""
    return marginal_arcs_of(network, enumerate_cycles(network, cap))


def cycles_through(network: InterdependentNetwork, v: int, cycleset: Iterable[Cycle]) -> Tuple[Cycle, ...]:
    if v not in network:
        raise KeyError(f"unknown node {v}")
    return tuple(c for c in cycleset if v in c)
