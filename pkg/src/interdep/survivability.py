"""Survivability |H(G)|: the size of a minimum node set hitting every cycle.

Removing a cycle hitting set leaves an acyclic graph, and an acyclic
dependency graph cannot keep any node functional, so |H(G)| is the number of
node failures needed to bring the whole network down.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from interdep.cycles import (
    DEFAULT_CYCLE_CAP,
    is_acyclic,
    simple_cycles,
    strongly_connected_components,
)
from interdep.netmodel import ArcRef, InterdependentNetwork

__all__ = [
    "DEFAULT_BUDGET",
    "HittingSet",
    "BudgetExceeded",
    "UpperBoundBreakdown",
    "survivability_exact",
    "survivability_greedy",
    "survivability",
    "upper_bound",
    "density",
    "path_sunlet_survivability",
    "cycle_chains",
    "approximation_factor",
]

DEFAULT_BUDGET = 20_000_000


@dataclass(frozen=True)
class HittingSet:
    nodes: FrozenSet[int]
    mode: str  # "exact" or "greedy"
    cycles_considered: int
    universe: str = "full"  # greedy only: "full" or "lazy"
    optimal: bool = True

    @property
    def size(self) -> int:
        return len(self.nodes)

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def label(self) -> str:
        if self.mode == "greedy" and self.universe == "lazy":
            return "greedy-lazy"
        return self.mode


class BudgetExceeded(RuntimeError):
    """The search examined more candidates than allowed.

    ``certificate`` is the best hitting set known at that point. It is a
    valid cover but not proven minimum.
    """

    def __init__(self, budget: int, certificate: Optional[HittingSet] = None):
        self.budget = budget
        self.certificate = certificate
        super().__init__(f"search budget of {budget} exceeded")


def _cyclic_components(adj: Dict[int, Sequence[int]]) -> List[List[int]]:
    return [c for c in strongly_connected_components(adj) if len(c) > 1]


def _short_cycle_masks(comp: List[int], sub: Dict[int, List[int]], pos: Dict[int, int], limit: int = 400):
    # 2- and 4-cycles as bitmasks; cheap necessary condition for a hitting set
    masks = set()
    for s in comp:
        for a in sub[s]:
            if a <= s:
                continue
            for b in sub[a]:
                if b == s:
                    masks.add((1 << pos[s]) | (1 << pos[a]))
                elif b > s:
                    for c in sub[b]:
                        if c <= s or c == a:
                            continue
                        if s in sub[c]:
                            masks.add((1 << pos[s]) | (1 << pos[a]) | (1 << pos[b]) | (1 << pos[c]))
            if len(masks) >= limit:
                break
    return sorted(masks, key=lambda m: bin(m).count("1"))


def _disjoint_two_cycles(comp: List[int], sub: Dict[int, List[int]]) -> int:
    used: Set[int] = set()
    count = 0
    for u in comp:
        if u in used:
            continue
        for w in sub[u]:
            if w not in used and w != u and u in sub[w]:
                used.update((u, w))
                count += 1
                break
    return count


def survivability_exact(network: InterdependentNetwork, budget: int = DEFAULT_BUDGET) -> HittingSet:
    """Minimum cycle hitting set by subset search of increasing size.

    Each nontrivial strongly connected component is solved on its own; the
    union of the per-component answers is the lexicographically smallest
    minimum set overall.

    Raises:
        BudgetExceeded: more than ``budget`` subsets had to be examined.
    """
    adj = network.adjacency()
    chosen: List[int] = []
    examined = 0
    for comp in _cyclic_components(adj):
        members = set(comp)
        sub = {v: [w for w in adj[v] if w in members] for v in comp}
        pos = {v: i for i, v in enumerate(comp)}
        probes = _short_cycle_masks(comp, sub, pos)
        found = None
        for k in range(max(1, _disjoint_two_cycles(comp, sub)), len(comp) + 1):
            for subset in combinations(range(len(comp)), k):
                examined += 1
                if examined > budget:
                    fallback = survivability_greedy(network, universe="lazy")
                    raise BudgetExceeded(budget, HittingSet(fallback.nodes, "exact", 0, optimal=False))
                mask = 0
                for i in subset:
                    mask |= 1 << i
                if any(not (mask & p) for p in probes):
                    continue
                if is_acyclic(sub, (comp[i] for i in subset)):
                    found = [comp[i] for i in subset]
                    break
            if found is not None:
                break
        chosen.extend(found)
    result = frozenset(chosen)
    assert is_acyclic(adj, result)
    return HittingSet(result, "exact", 0)


def _greedy_cover(cycles: Sequence[Tuple[int, ...]]) -> List[int]:
    """Greedy set cover: pick the node on most uncovered cycles, ties to the lowest id."""
    covers: Dict[int, List[int]] = {}
    for i, c in enumerate(cycles):
        for v in c:
            covers.setdefault(v, []).append(i)
    count = {v: len(ids) for v, ids in covers.items()}
    alive = [True] * len(cycles)
    remaining = len(cycles)
    picked = []
    while remaining:
        best = min(count, key=lambda v: (-count[v], v))
        picked.append(best)
        for i in covers[best]:
            if alive[i]:
                alive[i] = False
                remaining -= 1
                for v in cycles[i]:
                    count[v] -= 1
        del count[best]
    return picked


def _shortest_cycle_through(adj: Dict[int, Sequence[int]], v: int, gone: Set[int]) -> Optional[Tuple[int, ...]]:
    prev = {v: None}
    queue = deque([v])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y in gone:
                continue
            if y == v:
                path = [x]
                while prev[path[-1]] is not None:
                    path.append(prev[path[-1]])
                path.reverse()
                k = path.index(min(path))
                return tuple(path[k:] + path[:k])
            if y not in prev:
                prev[y] = x
                queue.append(y)
    return None


def _lazy_greedy(adj: Dict[int, Sequence[int]]) -> Tuple[List[int], int]:
    # grow the cycle universe only with cycles the current cover misses
    pool: Set[Tuple[int, ...]] = set()
    gone: Set[int] = set()
    while True:
        rest = {v: [w for w in adj[v] if w not in gone] for v in adj if v not in gone}
        fresh = False
        for comp in _cyclic_components(rest):
            for v in comp:
                c = _shortest_cycle_through(rest, v, set())
                if c is not None and c not in pool:
                    pool.add(c)
                    fresh = True
        if not fresh and gone:
            return sorted(gone), len(pool)
        if not pool:
            return [], 0
        gone = set(_greedy_cover(sorted(pool)))
        if is_acyclic(adj, gone):
            return sorted(gone), len(pool)


def survivability_greedy(
    network: InterdependentNetwork,
    cap: int = DEFAULT_CYCLE_CAP,
    universe: str = "full",
) -> HittingSet:
    """Greedy set cover of the elementary cycles (ln|V| + 1 style approximation).

    With ``universe="full"`` the cover is taken over every elementary cycle,
    which needs the complete enumeration (bounded by ``cap``). With
    ``universe="lazy"`` the cycle pool starts from one shortest cycle per
    cyclic node and is extended only by cycles that survive the current
    cover, so graphs with astronomically many cycles stay tractable.
    """
    adj = network.adjacency()
    if universe == "full":
        cycles = simple_cycles(adj, cap)
        picked = _greedy_cover(cycles)
        considered = len(cycles)
    elif universe == "lazy":
        picked, considered = _lazy_greedy(adj)
    else:
        raise ValueError(f"unknown universe {universe!r}")
    result = frozenset(picked)
    assert is_acyclic(adj, result)
    return HittingSet(result, "greedy", considered, universe=universe, optimal=False)


def survivability(network: InterdependentNetwork, mode: str = "exact", **kw) -> HittingSet:
    """Dispatch on ``mode``: ``exact``, ``greedy`` or ``greedy-lazy``."""
    if mode == "exact":
        return survivability_exact(network, **kw)
    if mode == "greedy":
        return survivability_greedy(network, **kw)
    if mode == "greedy-lazy":
        return survivability_greedy(network, universe="lazy")
    raise ValueError(f"unknown survivability mode {mode!r}")


def approximation_factor(network: InterdependentNetwork) -> float:
    return math.log(len(network)) + 1


@dataclass(frozen=True)
class UpperBoundBreakdown:
    M_total: int
    M_s: int
    V_s: int
    V_d: int
    M_d: int
    U: int

    @property
    def source_bound(self) -> int:
        """|M| - |M_s| + |V_s|: the number of distinct MA sources.

        Unlike ``U`` this one always holds. Removing the old hitting set plus
        the source of every moved arc leaves the restructured graph acyclic.
        """
        return self.M_total - self.M_s + self.V_s

    def as_row(self) -> Dict[str, int]:
        return dict(
            M_total=self.M_total, M_s=self.M_s, V_s=self.V_s, V_d=self.V_d, M_d=self.M_d,
            U=self.U, source_bound=self.source_bound,
        )


def upper_bound(network: InterdependentNetwork, mas: Iterable[ArcRef]) -> UpperBoundBreakdown:
    """Benchmark cap on the gain from relocating Marginal Arcs.

    Nodes sourcing several MAs can be knocked out once for all the cycles
    those MAs form; nodes fed only by MAs must keep one of them. ``U`` is
    the formula taken literally. The two corrections can overlap, so ``U``
    may undercut what is achievable (it can even be negative); see
    :attr:`UpperBoundBreakdown.source_bound` for a bound that always holds.
    """
    mas = set(mas)
    per_source: Dict[int, int] = {}
    for r in mas:
        per_source[r.source] = per_source.get(r.source, 0) + 1
    v_s = {v for v, k in per_source.items() if k >= 2}
    m_s = sum(1 for r in mas if r.source in v_s)
    v_d = {
        v
        for v in network.nodes
        if network.deg_in(v) > 0 and all(r in mas for r in network.in_arcs(v))
    }
    m_d = sum(1 for r in mas if network.dest(r) in v_d)
    u = len(mas) - m_s + len(v_s) - len(v_d)
    return UpperBoundBreakdown(len(mas), m_s, len(v_s), len(v_d), m_d, u)


def density(network: InterdependentNetwork) -> float:
    n1 = len(network.side_nodes(1))
    n2 = len(network.side_nodes(2))
    if n1 == 0 or n2 == 0:
        raise ValueError("density needs both constituents to be nonempty")
    return network.n_arcs / (n1 * n2)


def path_sunlet_survivability(sequences: Iterable[int]) -> int:
    """Closed form for chains of cycles: each chain of ``q`` cycles needs ceil(q/2) removals."""
    total = 0
    for q in sequences:
        if q < 1:
            raise ValueError(f"chain length must be >= 1, got {q}")
        total += (q + 1) // 2
    return total


def cycle_chains(network: InterdependentNetwork) -> Optional[List[int]]:
    """Lengths of the chains formed by 2-cycles, or ``None`` if they branch.

    Every pair ``u <-> v`` is one 2-cycle. Linking 2-cycles that share a node
    gives chains (paths) or closed rings; a chain of ``q`` 2-cycles needs
    ``ceil(q/2)`` removals. A node on three or more 2-cycles breaks the chain
    shape and yields ``None``.
    """
    links: Dict[int, Set[int]] = {}
    for u, v in network.arc_pairs():
        if u < v and network.has_arc(v, u):
            links.setdefault(u, set()).add(v)
            links.setdefault(v, set()).add(u)
    if any(len(n) > 2 for n in links.values()):
        return None
    chains = []
    seen: Set[int] = set()
    for start in sorted(links):
        if start in seen:
            continue
        comp, stack = [], [start]
        seen.add(start)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in links[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        chains.append(sum(len(links[x]) for x in comp) // 2)
    return sorted(chains)
