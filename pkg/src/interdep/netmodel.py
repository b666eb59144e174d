"""Two-layer interdependent networks in their single-layer directed form.

A network is a directed bipartite graph: every arc ``(u, v)`` means that
``u`` provisions ``v`` and the two endpoints sit in different constituent
layers. Each arc is identified by an :class:`ArcRef` ``(source, index)``
that survives relocation of its destination, so a restructuring run can
refer to "the same arc" before and after it moves.

Clustering is carried on every network. A non-clustered network is simply
one cluster per side where every node supports cluster 1 of the other side.
"""

from __future__ import annotations

import copy as _copy
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Tuple

__all__ = [
    "ArcRef",
    "InterdependentNetwork",
    "ConstituentSummary",
    "Violation",
    "ValidationReport",
    "ParseError",
    "validate",
    "summarize",
    "degree_in",
    "degree_out",
    "load",
    "save",
    "loads",
    "dumps",
]


class ArcRef(NamedTuple):
    """Stable identity of one dependency arc: its source and 1-based index."""

    source: int
    index: int

    def __str__(self) -> str:
        return f"({self.source},.)_{self.index}"


class ParseError(ValueError):
    """Raised when a network file is malformed."""

    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        self.line = line
        self.field = field
        where = f"line {line}: " if line is not None else ""
        if field:
            where += f"[{field}] "
        super().__init__(where + message)


class InterdependentNetwork:
    """Directed bipartite dependency graph with clusters and supportability.

    Args:
        side: constituent index (1 or 2) of every node.
        cluster: cluster index of every node, 1-based within its side.
        supports: for every node, the cluster indices of the opposite side
            it is allowed to provision.
        gamma: number of clusters on side 1 and side 2.

    Arcs are added with :meth:`add_arc`, which hands out the next free index
    for the source. The only mutation of an existing arc is
    :meth:`relocate`; analysis code treats instances as read-only and
    restructuring works on a :meth:`copy`.
    """

    def __init__(
        self,
        side: Dict[int, int],
        cluster: Optional[Dict[int, int]] = None,
        supports: Optional[Dict[int, Iterable[int]]] = None,
        gamma: Tuple[int, int] = (1, 1),
    ) -> None:
        self.side: Dict[int, int] = dict(side)
        self.cluster: Dict[int, int] = (
            dict(cluster) if cluster is not None else {v: 1 for v in self.side}
        )
        if supports is None:
            supports = {v: (1,) for v in self.side}
        self.supports: Dict[int, FrozenSet[int]] = {v: frozenset(s) for v, s in supports.items()}
        self.gamma: Tuple[int, int] = (int(gamma[0]), int(gamma[1]))
        self._dest: Dict[ArcRef, int] = {}
        self._out: Dict[int, List[ArcRef]] = {v: [] for v in self.side}
        self._in: Dict[int, Dict[int, ArcRef]] = {v: {} for v in self.side}

    # ------------------------------------------------------------------
    # construction

    @classmethod
    def from_arcs(
        cls,
        side: Dict[int, int],
        arcs: Iterable[Tuple[int, int]],
        cluster: Optional[Dict[int, int]] = None,
        supports: Optional[Dict[int, Iterable[int]]] = None,
        gamma: Tuple[int, int] = (1, 1),
    ) -> "InterdependentNetwork":
        net = cls(side, cluster, supports, gamma)
        for u, v in arcs:
            net.add_arc(u, v)
        return net

    def add_arc(self, u: int, v: int) -> ArcRef:
        """Append arc ``u -> v`` and return its reference.

        Raises:
            KeyError: either endpoint is not a node.
            ValueError: the arc already exists (parallel arcs are forbidden).
        """
        if u not in self.side or v not in self.side:
            raise KeyError(f"unknown node in arc ({u}, {v})")
        if u in self._in[v]:
            raise ValueError(f"parallel arc ({u}, {v})")
        ref = ArcRef(u, len(self._out[u]) + 1)
        self._dest[ref] = v
        self._out[u].append(ref)
        self._in[v][u] = ref
        return ref

    def relocate(self, ref: ArcRef, new_dest: int) -> int:
        """Point arc ``ref`` at ``new_dest``; returns the old destination.

        This mutates the network in place. Callers that need the original
        must copy first.
        """
        old = self._dest[ref]
        if new_dest not in self.side:
            raise KeyError(f"unknown node {new_dest}")
        if new_dest == old:
            return old
        if ref.source in self._in[new_dest]:
            raise ValueError(f"parallel arc ({ref.source}, {new_dest})")
        del self._in[old][ref.source]
        self._in[new_dest][ref.source] = ref
        self._dest[ref] = new_dest
        return old

    def copy(self) -> "InterdependentNetwork":
        return _copy.deepcopy(self)

    # ------------------------------------------------------------------
    # queries

    @property
    def nodes(self) -> List[int]:
        return sorted(self.side)

    def side_nodes(self, i: int) -> List[int]:
        return sorted(v for v, s in self.side.items() if s == i)

    def __len__(self) -> int:
        return len(self.side)

    def __contains__(self, v: object) -> bool:
        return v in self.side

    @property
    def n_arcs(self) -> int:
        return len(self._dest)

    def arc_refs(self) -> List[ArcRef]:
        return sorted(self._dest)

    def dest(self, ref: ArcRef) -> int:
        return self._dest[ref]

    def arcs(self) -> Iterator[Tuple[ArcRef, int]]:
        """``(ref, destination)`` pairs in ArcRef order."""
        for ref in sorted(self._dest):
            yield ref, self._dest[ref]

    def arc_pairs(self) -> List[Tuple[int, int]]:
        return [(ref.source, d) for ref, d in self.arcs()]

    def has_arc(self, u: int, v: int) -> bool:
        return u in self._in.get(v, ())

    def arc_between(self, u: int, v: int) -> ArcRef:
        return self._in[v][u]

    def out_arcs(self, v: int) -> List[ArcRef]:
        return list(self._out[v])

    def in_arcs(self, v: int) -> List[ArcRef]:
        return sorted(self._in[v].values())

    def successors(self, v: int) -> List[int]:
        return [self._dest[r] for r in self._out[v]]

    def predecessors(self, v: int) -> List[int]:
        return sorted(self._in[v])

    def deg_in(self, v: int) -> int:
        return len(self._in[v])

    def deg_out(self, v: int) -> int:
        return len(self._out[v])

    def adjacency(self) -> Dict[int, List[int]]:
        """Successor lists keyed by node, destinations in ascending order."""
        return {v: sorted(self._dest[r] for r in self._out[v]) for v in self.side}

    def may_support(self, u: int, v: int) -> bool:
        """Whether ``u`` is allowed to provision ``v`` (cross-side and cluster-legal)."""
        return self.side[u] != self.side[v] and self.cluster[v] in self.supports[u]

    def subnetwork(self, refs: Iterable[ArcRef]) -> Tuple["InterdependentNetwork", Dict[ArcRef, ArcRef]]:
        """Network induced by the given arcs and their endpoints.

        Returns the subnetwork and a map from its arc references back to the
        references in ``self``.
        """
        refs = sorted(refs)
        keep = set()
        for r in refs:
            keep.add(r.source)
            keep.add(self._dest[r])
        sub = InterdependentNetwork(
            {v: self.side[v] for v in keep},
            {v: self.cluster[v] for v in keep},
            {v: self.supports[v] for v in keep},
            self.gamma,
        )
        back = {}
        for r in refs:
            back[sub.add_arc(r.source, self._dest[r])] = r
        return sub, back

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, InterdependentNetwork):
            return NotImplemented
        return (
            self.side == other.side
            and self.cluster == other.cluster
            and self.supports == other.supports
            and self.gamma == other.gamma
            and self._dest == other._dest
        )

    def __repr__(self) -> str:
        n1 = sum(1 for s in self.side.values() if s == 1)
        return (
            f"InterdependentNetwork(|V1|={n1}, |V2|={len(self.side) - n1}, "
            f"|A|={self.n_arcs}, gamma={self.gamma})"
        )


def degree_in(network: InterdependentNetwork, v: int) -> int:
    if v not in network:
        raise KeyError(f"unknown node {v}")
    return network.deg_in(v)


def degree_out(network: InterdependentNetwork, v: int) -> int:
    if v not in network:
        raise KeyError(f"unknown node {v}")
    return network.deg_out(v)


# ----------------------------------------------------------------------
# summary and validation


@dataclass
class ConstituentSummary:
    sizes: Dict[int, int]
    supporting: Dict[int, int]
    clusters: Dict[Tuple[int, int], FrozenSet[int]]
    min_supporting: int
    tie: bool

    def supporting_nodes_bound(self) -> int:
        """``|V_i^out|`` of the minimum supporting side.

        No relocation scheme can push survivability above this: removing
        every node with an outgoing arc on that side breaks all cycles.
        """
        return self.supporting[self.min_supporting]


def summarize(network: InterdependentNetwork) -> ConstituentSummary:
    sizes = {1: 0, 2: 0}
    supporting = {1: 0, 2: 0}
    groups: Dict[Tuple[int, int], set] = {}
    for v, s in network.side.items():
        sizes[s] += 1
        if network.deg_out(v) > 0:
            supporting[s] += 1
        groups.setdefault((s, network.cluster[v]), set()).add(v)
    best = min((1, 2), key=lambda i: (supporting[i], i))
    return ConstituentSummary(
        sizes=sizes,
        supporting=supporting,
        clusters={k: frozenset(g) for k, g in sorted(groups.items())},
        min_supporting=best,
        tie=supporting[1] == supporting[2],
    )


@dataclass(frozen=True)
class Violation:
    check: str
    detail: str


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def checks_failed(self) -> List[str]:
        return sorted({v.check for v in self.violations})

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "\n".join(f"{v.check}: {v.detail}" for v in self.violations)


def cycle_reachable(network: InterdependentNetwork) -> set:
    """Nodes on a directed cycle or reachable from one."""
    from interdep.cycles import strongly_connected_components

    adj = network.adjacency()
    seeds = [v for comp in strongly_connected_components(adj) if len(comp) > 1 for v in comp]
    seen = set(seeds)
    stack = list(seeds)
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def validate(network: InterdependentNetwork) -> ValidationReport:
    """Check structural invariants plus the cluster and liveness assumptions.

    Never raises; every problem is reported as a :class:`Violation`.
    """
    out: List[Violation] = []
    add = lambda check, detail: out.append(Violation(check, detail))  # noqa: E731

    for v in network.nodes:
        s = network.side[v]
        if s not in (1, 2):
            add("partition", f"node {v} has constituent {s}")
            continue
        g = network.gamma[s - 1]
        if not 1 <= network.cluster.get(v, 0) <= g:
            add("cluster_range", f"node {v} cluster {network.cluster.get(v)} outside 1..{g}")
        other = network.gamma[2 - s]
        bad = sorted(x for x in network.supports.get(v, ()) if not 1 <= x <= other)
        if bad:
            add("cluster_range", f"node {v} supports unknown clusters {bad}")

    seen_pairs = set()
    for ref, d in network.arcs():
        u = ref.source
        if network.side.get(u) == network.side.get(d):
            add("intra_constituent_arc", f"arc {u}->{d} stays within constituent {network.side[u]}")
        if (u, d) in seen_pairs:
            add("parallel_arc", f"arc {u}->{d} duplicated")
        seen_pairs.add((u, d))
        if network.cluster.get(d) not in network.supports.get(u, ()):
            add(
                "cluster_legality",
                f"arc {u}->{d}: cluster {network.cluster.get(d)} not in supports of {u}",
            )

    # each cluster must get support back from some cluster it supports
    feeds: Dict[Tuple[int, int], set] = {}
    for ref, d in network.arcs():
        src = (network.side[ref.source], network.cluster[ref.source])
        dst = (network.side[d], network.cluster[d])
        feeds.setdefault(src, set()).add(dst)
    for key in sorted({(network.side[v], network.cluster[v]) for v in network.side}):
        targets = feeds.get(key, set())
        if not any(key in feeds.get(t, ()) for t in targets):
            add(
                "cluster_reciprocity",
                f"cluster {key[1]} of side {key[0]} gets no support from the clusters it supports",
            )

    starving = [v for v in network.nodes if network.deg_in(v) == 0]
    for v in starving:
        add("liveness", f"node {v} has no supporting node")
    alive = cycle_reachable(network)
    for v in network.nodes:
        if v not in alive and v not in starving:
            add("liveness", f"node {v} is not reachable from any directed cycle")
    return ValidationReport(out)


# ----------------------------------------------------------------------
# canonical text format

_HEADER = re.compile(r"^k=(\d+)\s+gamma1=(\d+)\s+gamma2=(\d+)$")


def dumps(network: InterdependentNetwork) -> str:
    lines = [f"k=2 gamma1={network.gamma[0]} gamma2={network.gamma[1]}"]
    for v in network.nodes:
        sup = ",".join(str(x) for x in sorted(network.supports[v]))
        lines.append(f"node {v} {network.side[v]} {network.cluster[v]} supports={sup}")
    for ref, d in network.arcs():
        lines.append(f"arc {ref.source} {d}")
    return "\n".join(lines) + "\n"


def _int(tok: str, line: int, name: str) -> int:
    try:
        value = int(tok)
    except ValueError:
        raise ParseError(f"expected integer, got {tok!r}", line, name) from None
    if value < 0:
        raise ParseError(f"expected non-negative integer, got {value}", line, name)
    return value


def loads(text: str) -> InterdependentNetwork:
    """Parse the canonical format. Arc indices follow file order per source."""
    header = None
    side: Dict[int, int] = {}
    cluster: Dict[int, int] = {}
    supports: Dict[int, Tuple[int, ...]] = {}
    arcs: List[Tuple[int, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            m = _HEADER.match(line)
            if not m:
                raise ParseError("expected header 'k=2 gamma1=<int> gamma2=<int>'", lineno, "header")
            if int(m.group(1)) != 2:
                raise ParseError(f"only k=2 is supported, got k={m.group(1)}", lineno, "k")
            header = (int(m.group(2)), int(m.group(3)))
            continue
        parts = line.split()
        if parts[0] == "node":
            if len(parts) != 5 or not parts[4].startswith("supports="):
                raise ParseError("expected 'node <id> <constituent> <cluster> supports=<list>'", lineno)
            v = _int(parts[1], lineno, "id")
            if v in side:
                raise ParseError(f"duplicate node {v}", lineno, "id")
            s = _int(parts[2], lineno, "constituent")
            if s not in (1, 2):
                raise ParseError(f"constituent must be 1 or 2, got {s}", lineno, "constituent")
            side[v] = s
            cluster[v] = _int(parts[3], lineno, "cluster")
            body = parts[4][len("supports="):]
            supports[v] = tuple(_int(x, lineno, "supports") for x in body.split(",") if x)
        elif parts[0] == "arc":
            if len(parts) != 3:
                raise ParseError("expected 'arc <src> <dst>'", lineno)
            arcs.append((lineno, _int(parts[1], lineno, "src"), _int(parts[2], lineno, "dst")))
        else:
            raise ParseError(f"unknown record {parts[0]!r}", lineno)
    if header is None:
        raise ParseError("empty file: missing header", 1, "header")
    net = InterdependentNetwork(side, cluster, supports, header)
    for lineno, u, v in arcs:
        for node, name in ((u, "src"), (v, "dst")):
            if node not in side:
                raise ParseError(f"arc references unknown node {node}", lineno, name)
        if net.has_arc(u, v):
            raise ParseError(f"duplicate arc {u}->{v}", lineno)
        net.add_arc(u, v)
    return net


def load(path) -> InterdependentNetwork:
    return loads(Path(path).read_text(encoding="utf-8"))


def save(network: InterdependentNetwork, path) -> None:
    Path(path).write_text(dumps(network), encoding="utf-8", newline="\n")
