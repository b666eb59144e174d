"""Topology generators: random dependency networks, clustered models, Path-Sunlet graphs."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

from interdep.netmodel import InterdependentNetwork, validate

__all__ = [
    "GeneratorConfig",
    "InfeasibleConfig",
    "ResampleLimitExceeded",
    "SUPPORT_TEMPLATES",
    "cluster_supportability",
    "generate_random",
    "PathSunletSpec",
    "generate_path_sunlet",
    "ma_saturate",
]


class InfeasibleConfig(ValueError):
    pass


class ResampleLimitExceeded(RuntimeError):
    def __init__(self, attempts: int):
        self.attempts = attempts
        super().__init__(f"no valid network after {attempts} attempts")


# cluster x -> opposite-side clusters it may support; same template on both sides
SUPPORT_TEMPLATES: Dict[int, Dict[int, FrozenSet[int]]] = {
    1: {1: frozenset({1}), 2: frozenset({2}), 3: frozenset({3})},
    2: {1: frozenset({1, 2}), 2: frozenset({2}), 3: frozenset({2, 3})},
    3: {1: frozenset({1, 2, 3}), 2: frozenset({1, 2, 3}), 3: frozenset({1, 2, 3})},
}


def cluster_supportability(model: int) -> Dict[int, FrozenSet[int]]:
    """Which opposite clusters each of the three clusters may provision under ``model``."""
    if model not in SUPPORT_TEMPLATES:
        raise ValueError(f"cluster model must be 1, 2 or 3, got {model}")
    return dict(SUPPORT_TEMPLATES[model])


def _split(n: int, parts: int) -> Tuple[int, ...]:
    base, extra = divmod(n, parts)
    return tuple(base + (1 if i < extra else 0) for i in range(parts))


@dataclass
class GeneratorConfig:
    """Parameters of a random network.

    ``topology="uniform"`` draws every node's supporters from the whole
    opposite side. ``topology="growth"`` seeds each corresponding cluster
    pair with a small core of ``deg_in_max`` nodes per side that support
    each other, then adds the remaining nodes one at a time, each drawing
    its supporters from nodes already placed. Cycles then live only inside
    the cores, which keeps cycle counts small at any size.
    """

    n1: int
    n2: int
    deg_in_min: int = 2
    deg_in_max: int = 4
    cluster_model: Optional[int] = None
    cluster_sizes: Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]] = None
    seed: int = 0
    topology: str = "growth"
    max_attempts: int = 1000

    def sizes(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        if self.cluster_sizes is not None:
            return tuple(self.cluster_sizes[0]), tuple(self.cluster_sizes[1])
        parts = 1 if self.cluster_model is None else 3
        return _split(self.n1, parts), _split(self.n2, parts)

    def check(self) -> None:
        if self.n1 < 1 or self.n2 < 1:
            raise InfeasibleConfig("both sides need at least one node")
        if not 1 <= self.deg_in_min <= self.deg_in_max:
            raise InfeasibleConfig(f"need 1 <= deg_in_min <= deg_in_max, got {self.deg_in_min}, {self.deg_in_max}")
        if self.deg_in_min > min(self.n1, self.n2):
            raise InfeasibleConfig(f"deg_in_min {self.deg_in_min} exceeds the smaller side ({min(self.n1, self.n2)})")
        if self.topology not in ("uniform", "growth"):
            raise InfeasibleConfig(f"unknown topology {self.topology!r}")
        s1, s2 = self.sizes()
        if sum(s1) != self.n1 or sum(s2) != self.n2:
            raise InfeasibleConfig("cluster sizes must add up to the side totals")
        if self.cluster_model is None and (len(s1) != 1 or len(s2) != 1):
            raise InfeasibleConfig("cluster sizes given without a cluster model")
        if self.cluster_model is not None and (len(s1) != 3 or len(s2) != 3):
            raise InfeasibleConfig("clustered models use three clusters per side")
        if any(x < 1 for x in s1 + s2):
            raise InfeasibleConfig("empty cluster")


def _skeleton(config: GeneratorConfig) -> InterdependentNetwork:
    s1, s2 = config.sizes()
    side, cluster = {}, {}
    nid = 0
    for i, sizes in ((1, s1), (2, s2)):
        for x, size in enumerate(sizes, start=1):
            for _ in range(size):
                side[nid] = i
                cluster[nid] = x
                nid += 1
    if config.cluster_model is None:
        supports = {v: (1,) for v in side}
        gamma = (1, 1)
    else:
        tpl = SUPPORT_TEMPLATES[config.cluster_model]
        supports = {v: tpl[cluster[v]] for v in side}
        gamma = (3, 3)
    return InterdependentNetwork(side, cluster, supports, gamma)


def _draw_uniform(net: InterdependentNetwork, config: GeneratorConfig, rng: random.Random) -> None:
    nodes = net.nodes
    for v in nodes:
        pool = [u for u in nodes if net.may_support(u, v)]
        if len(pool) < config.deg_in_min:
            raise InfeasibleConfig(f"node {v} has only {len(pool)} eligible supporters")
        d = rng.randint(config.deg_in_min, min(config.deg_in_max, len(pool)))
        for u in sorted(rng.sample(pool, d)):
            net.add_arc(u, v)


def _draw_growth(net: InterdependentNetwork, config: GeneratorConfig, rng: random.Random) -> None:
    core_size = config.deg_in_max
    blocks: Dict[Tuple[int, int], List[int]] = {}
    for v in net.nodes:
        blocks.setdefault((net.side[v], net.cluster[v]), []).append(v)
    core = {key: members[:core_size] for key, members in blocks.items()}
    rest = []
    for key, members in blocks.items():
        tail = members[core_size:]
        for rank, v in enumerate(tail):
            rest.append(((rank + 1) / len(tail), key[0], key[1], v))
    rest.sort()

    core_nodes = [v for members in core.values() for v in members]
    placed: List[int] = []
    for (i, x), members in sorted(core.items()):
        for v in members:
            pool = sorted(u for u in core_nodes if net.may_support(u, v))
            if len(pool) < config.deg_in_min:
                raise InfeasibleConfig(f"cluster pair {x} core too small for deg_in_min {config.deg_in_min}")
            d = rng.randint(config.deg_in_min, min(config.deg_in_max, len(pool)))
            for u in sorted(rng.sample(pool, d)):
                net.add_arc(u, v)
        placed.extend(members)
    for *_, v in rest:
        pool = [u for u in placed if net.may_support(u, v)]
        if len(pool) < config.deg_in_min:
            raise InfeasibleConfig(f"node {v} has only {len(pool)} eligible earlier supporters")
        d = rng.randint(config.deg_in_min, min(config.deg_in_max, len(pool)))
        for u in sorted(rng.sample(pool, d)):
            net.add_arc(u, v)
        placed.append(v)


def generate_random(config: GeneratorConfig) -> InterdependentNetwork:
    """Seeded random network that passes :func:`validate`, liveness included.

    Node ids: side 1 is ``0..n1-1``, side 2 is ``n1..n1+n2-1``; clusters are
    contiguous id blocks. Whole graphs are redrawn until valid.

    Raises:
        InfeasibleConfig: the degree bounds or cluster sizes cannot be met.
        ResampleLimitExceeded: no valid graph within ``max_attempts`` draws.
    """
    config.check()
    rng = random.Random(config.seed)
    draw = _draw_growth if config.topology == "growth" else _draw_uniform
    for _ in range(config.max_attempts):
        net = _skeleton(config)
        draw(net, config, rng)
        if validate(net).ok:
            return net
    raise ResampleLimitExceeded(config.max_attempts)


@dataclass
class PathSunletSpec:
    """One even cycle of length ``cycle_length`` with pendant paths.

    ``paths[i]`` is the number of nodes on the i-th path, its anchor on the
    cycle included, so a path of ``k`` nodes adds ``k - 1`` new nodes.
    Anchors are spread evenly around the cycle.
    """

    cycle_length: int
    paths: List[int] = field(default_factory=list)
    delta: int = 2

    def check(self) -> None:
        c = self.cycle_length
        if c < 2 or c % 2:
            raise ValueError(f"cycle length must be even and >= 2, got {c}")
        if len(self.paths) > c:
            raise ValueError("more paths than cycle nodes to anchor them")
        if any(k < 2 for k in self.paths):
            raise ValueError("every path needs at least one node beyond its anchor")


def generate_path_sunlet(spec: PathSunletSpec) -> InterdependentNetwork:
    """Cycle ``0 -> 1 -> ... -> c-1 -> 0`` plus the pendant paths, sides alternating."""
    spec.check()
    c = spec.cycle_length
    side = {v: 1 + v % 2 for v in range(c)}
    arcs = [(v, (v + 1) % c) for v in range(c)]
    nxt = c
    for j, k in enumerate(spec.paths):
        prev = j * c // len(spec.paths)
        for _ in range(k - 1):
            side[nxt] = 3 - side[prev]
            arcs.append((prev, nxt))
            prev = nxt
            nxt += 1
    return InterdependentNetwork.from_arcs(side, arcs)


def _reaches(network: InterdependentNetwork, src: int, target: int) -> bool:
    seen = {src}
    stack = [src]
    while stack:
        x = stack.pop()
        if x == target:
            return True
        for y in network.successors(x):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return False


def ma_saturate(network: InterdependentNetwork, delta: int = 2, policy: str = "lex") -> InterdependentNetwork:
    """Add arcs until no further arc fits under out-degree cap ``delta``.

    Sources are visited in ascending order. ``policy`` decides which
    destinations a source tries:

    - ``"lex"``: every legal destination, ascending.
    - ``"reciprocal"``: the source's own supporters first (closing 2-cycles),
      then the rest ascending.
    - ``"marginal"``: only destinations that cannot reach the source, so every
      added arc is itself a Marginal Arc; ascending.

    Each policy stops at a maximal graph for its own admissibility rule.
    """
    if policy not in ("lex", "reciprocal", "marginal"):
        raise ValueError(f"unknown saturation policy {policy!r}")
    if any(network.deg_out(v) > delta for v in network.nodes):
        raise ValueError(f"some node already has out-degree above {delta}")
    net = network.copy()
    nodes = net.nodes
    for u in nodes:
        if policy == "reciprocal":
            back = sorted(net.predecessors(u))
            cands = back + [v for v in nodes if v not in set(back)]
        else:
            cands = nodes
        for v in cands:
            if net.deg_out(u) >= delta:
                break
            if not net.may_support(u, v) or net.has_arc(u, v):
                continue
            if policy == "marginal" and _reaches(net, v, u):
                continue
            net.add_arc(u, v)
    return net
