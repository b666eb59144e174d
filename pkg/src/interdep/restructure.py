"""Live restructuring: relocate Marginal Arcs so they close new short cycles.

Every move takes one MA ``(v, w)`` and points it somewhere else while the
network keeps running. A move is allowed only if ``w`` keeps another
supporter, the new arc is cluster-legal and not parallel to an existing arc,
and the arc has not been moved before in the same run.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

from interdep.cascade import cascade
from interdep.cycles import DEFAULT_CYCLE_CAP, Cycle, enumerate_cycles, marginal_arcs_of
from interdep.netmodel import ArcRef, InterdependentNetwork, validate
from interdep.survivability import (
    BudgetExceeded,
    HittingSet,
    UpperBoundBreakdown,
    survivability,
    survivability_exact,
    upper_bound,
)

__all__ = [
    "EvenHop",
    "InvalidNetwork",
    "RelocationStep",
    "RestructureReport",
    "ClusterSubgraph",
    "OracleResult",
    "delta_h",
    "minimal_add",
    "decompose_clusters",
    "clustered_delta_h",
    "random_reassign",
    "exhaustive_optimum",
    "oracle_candidates",
    "search_space_size",
    "replay",
    "step_violations",
    "auto_mode",
]

CYCLE_FORMING = "cycle_forming"
MINIMAL_ADD = "minimal_add"
RANDOM = "random"
SKIPPED = "skipped"

RngLike = Union[int, random.Random]


class EvenHop(ValueError):
    def __init__(self, l: int):
        self.l = l
        super().__init__(f"hop limit must be an odd integer >= 1, got {l}")


class InvalidNetwork(ValueError):
    def __init__(self, report):
        self.report = report
        super().__init__(f"network fails validation: {report}")


@dataclass(frozen=True)
class RelocationStep:
    step_index: int
    arc: ArcRef
    old_dest: int
    new_dest: int
    mechanism: str
    cycle_id: Optional[int] = None
    hop: Optional[int] = None
    reason: Optional[str] = None

    @property
    def moved(self) -> bool:
        return self.mechanism != SKIPPED

    def describe(self) -> str:
        if self.mechanism == CYCLE_FORMING:
            return f"cycle_forming(cycle={self.cycle_id},hop={self.hop})"
        if self.mechanism == SKIPPED:
            return f"skipped({self.reason})"
        return self.mechanism


@dataclass
class RestructureReport:
    steps: List[RelocationStep] = field(default_factory=list)
    mas_found: int = 0
    survivability_before: Optional[HittingSet] = None
    survivability_after: Optional[HittingSet] = None
    upper_bound: Optional[UpperBoundBreakdown] = None
    used_nodes: Set[int] = field(default_factory=set)
    seed: Optional[int] = None
    l: Optional[int] = None
    tag: Optional[Tuple[int, int]] = None
    violations: List[str] = field(default_factory=list)

    def _count(self, mechanism: str) -> int:
        return sum(1 for s in self.steps if s.mechanism == mechanism)

    @property
    def mas_relocated(self) -> int:
        return self._count(CYCLE_FORMING) + self._count(RANDOM)

    @property
    def mas_minimal_added(self) -> int:
        return self._count(MINIMAL_ADD)

    @property
    def mas_skipped(self) -> int:
        return self._count(SKIPPED)

    @property
    def delta(self) -> Optional[int]:
        if self.survivability_before is None or self.survivability_after is None:
            return None
        return len(self.survivability_after) - len(self.survivability_before)

    def summary(self) -> Dict[str, object]:
        out: Dict[str, object] = {
            "mas_found": self.mas_found,
            "mas_relocated": self.mas_relocated,
            "mas_minimal_added": self.mas_minimal_added,
            "mas_skipped": self.mas_skipped,
            "seed": self.seed,
            "l": self.l,
            "used_nodes": " ".join(map(str, sorted(self.used_nodes))),
            "violations": len(self.violations),
        }
        for name in ("survivability_before", "survivability_after"):
            hs = getattr(self, name)
            out[name] = None if hs is None else len(hs)
            out[name + "_mode"] = None if hs is None else hs.label
        out["delta"] = self.delta
        if self.upper_bound is not None:
            out.update({"U_" + k: v for k, v in self.upper_bound.as_row().items()})
        return out


def _rng(seed: RngLike) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def auto_mode(network: InterdependentNetwork, exact_limit: int = 24) -> str:
    """Exact survivability for small networks, lazy greedy otherwise."""
    return "exact" if len(network) <= exact_limit else "greedy-lazy"


def _measure(network: InterdependentNetwork, mode: Optional[str]) -> Optional[HittingSet]:
    if mode is None:
        return None
    if mode == "auto":
        mode = auto_mode(network)
    return survivability(network, mode)


def step_violations(
    network: InterdependentNetwork,
    deg_out: Dict[int, int],
    moved: Sequence[ArcRef] = (),
) -> List[str]:
    """Everything wrong with ``network`` as an intermediate restructuring state."""
    bad = []
    for v in network.nodes:
        if network.deg_in(v) < 1:
            bad.append(f"node {v} lost its last supporter")
        if network.deg_out(v) != deg_out[v]:
            bad.append(f"node {v} out-degree changed")
    for ref, d in network.arcs():
        if not network.may_support(ref.source, d):
            bad.append(f"arc {ref.source}->{d} violates supportability")
    if len(set(moved)) != len(moved):
        bad.append("an arc was relocated more than once")
    dead = cascade(network, ()).nonfunctional
    if dead:
        bad.append(f"nodes {sorted(dead)} nonfunctional without any failure")
    return bad


class _Run:
    """Shared state of one restructuring pass over a private network copy."""

    def __init__(self, work: InterdependentNetwork, report: RestructureReport, audit: bool):
        self.work = work
        self.report = report
        self.audit = audit
        self.deg_out = {v: work.deg_out(v) for v in work.nodes}
        self.moved: List[ArcRef] = []

    def record(self, step: RelocationStep) -> RelocationStep:
        self.report.steps.append(step)
        if step.moved:
            self.moved.append(step.arc)
            if self.audit:
                for msg in step_violations(self.work, self.deg_out, self.moved):
                    self.report.violations.append(f"step {step.step_index}: {msg}")
        return step

    @property
    def next_index(self) -> int:
        return len(self.report.steps)


def _minimal_add(work: InterdependentNetwork, ma: ArcRef, rng: random.Random, step_index: int) -> RelocationStep:
    v = ma.source
    w = work.dest(ma)
    if work.deg_in(w) < 2:
        return RelocationStep(step_index, ma, w, w, SKIPPED, reason="stranded")
    supporters = sorted(work.predecessors(v))
    if not supporters:
        return RelocationStep(step_index, ma, w, w, SKIPPED, reason="no_incoming")
    options = [u for u in supporters if not work.has_arc(v, u) and work.may_support(v, u)]
    if not options:
        return RelocationStep(step_index, ma, w, w, SKIPPED, reason="duplicate")
    u = rng.choice(options)
    work.relocate(ma, u)
    return RelocationStep(step_index, ma, w, u, MINIMAL_ADD)


def minimal_add(
    network: InterdependentNetwork,
    ma: ArcRef,
    seed: RngLike = 0,
    used: Optional[Set[int]] = None,
    step_index: int = 0,
) -> RelocationStep:
    """Point ``ma = (v, w)`` back at one of v's current supporters, closing a 2-cycle.

    The move is applied to ``network`` in place. ``used`` is accepted for
    symmetry with the cycle-forming search and is left untouched. When no
    supporter qualifies the MA stays put and the returned step says why.
    """
    return _minimal_add(network, ma, _rng(seed), step_index)


def _lazy_shuffle(items: List[int], rng: random.Random):
    """Fisher-Yates that draws only as far as the caller reads."""
    items = list(items)
    n = len(items)
    for i in range(n):
        j = rng.randrange(i, n)
        items[i], items[j] = items[j], items[i]
        yield items[i]


def _relocate_pass(
    run: _Run,
    mas: Iterable[ArcRef],
    cycles: Sequence[Cycle],
    l: int,
    rng: random.Random,
    used: Set[int],
) -> None:
    work = run.work
    by_node: Dict[int, List[int]] = {}
    for cid, c in enumerate(cycles):
        for v in c.nodes:
            by_node.setdefault(v, []).append(cid)
    # (hop, destination) pairs to try for each (node, cycle), longest hop first
    hops: Dict[Tuple[int, int], List[Tuple[int, int]]] = {}
    reach: Dict[int, Set[int]] = {}
    for v, cids in by_node.items():
        for cid in cids:
            c = cycles[cid]
            cand = [(i, c.back(v, i)) for i in range(l, 0, -2) if i < len(c)]
            hops[v, cid] = cand
            reach.setdefault(v, set()).update(u for _, u in cand)
    for ma in sorted(mas):
        v = ma.source
        w = work.dest(ma)
        if work.deg_in(w) < 2:
            run.record(RelocationStep(run.next_index, ma, w, w, SKIPPED, reason="stranded"))
            continue
        step = None
        rejected: Set[int] = set()
        targets = reach.get(v, set())
        for cid in _lazy_shuffle(by_node.get(v, []), rng):
            for i, u in hops[v, cid]:
                if u in rejected:
                    continue
                if u in used or work.has_arc(v, u) or not work.may_support(v, u):
                    rejected.add(u)
                    continue
                c = cycles[cid]
                work.relocate(ma, u)
                used.update(c.back(v, j) for j in range(i + 1))
                step = RelocationStep(run.next_index, ma, w, u, CYCLE_FORMING, cycle_id=cid, hop=i)
                break
            if step is not None or len(rejected) == len(targets):
                break
        if step is None:
            step = _minimal_add(work, ma, rng, run.next_index)
        run.record(step)


def _check_inputs(network: InterdependentNetwork, l: int) -> None:
    if not isinstance(l, int) or l < 1 or l % 2 == 0:
        raise EvenHop(l)
    report = validate(network)
    if not report.ok:
        raise InvalidNetwork(report)


def delta_h(
    network: InterdependentNetwork,
    l: int = 1,
    seed: RngLike = 0,
    mode: Optional[str] = "auto",
    cap: int = DEFAULT_CYCLE_CAP,
    audit: bool = True,
) -> Tuple[InterdependentNetwork, RestructureReport]:
    """Relocate each MA so that it closes a new cycle of length at most ``l + 1``.

    MAs are visited in ascending reference order. For MA ``(v, w)`` the
    cycles through v are tried in a seeded random order, and on each cycle
    the node ``i`` hops behind v for ``i = l, l-2, ..., 1``. A node already
    claimed by an earlier relocation is not reused. If no cycle offers a
    destination the MA falls back to :func:`minimal_add`.

    ``mode`` picks how survivability before and after is measured
    (``"exact"``, ``"greedy"``, ``"greedy-lazy"``, ``"auto"`` or ``None`` to
    skip). With ``audit`` every intermediate network is checked and problems
    land in ``report.violations``.

    Returns:
        The restructured copy and the run report. The input is not modified.
    """
    _check_inputs(network, l)
    rng = _rng(seed)
    cycles = enumerate_cycles(network, cap)
    mas = marginal_arcs_of(network, cycles)
    report = RestructureReport(
        mas_found=len(mas),
        upper_bound=upper_bound(network, mas),
        seed=seed if isinstance(seed, int) else None,
        l=l,
        survivability_before=_measure(network, mode),
    )
    work = network.copy()
    run = _Run(work, report, audit)
    _relocate_pass(run, mas, cycles, l, rng, report.used_nodes)
    report.survivability_after = _measure(work, mode)
    return work, report


@dataclass(frozen=True)
class ClusterSubgraph:
    side: int
    cluster: int
    arcs: FrozenSet[ArcRef]
    nodes: FrozenSet[int]

    @property
    def tag(self) -> Tuple[int, int]:
        return (self.side, self.cluster)


def decompose_clusters(network: InterdependentNetwork) -> List[ClusterSubgraph]:
    """Split the arcs into one group per cluster, visiting clusters in (side, index) order.

    An arc joins the group of cluster ``W`` if its source is in ``W``, or if
    its destination is in ``W`` and the source may support it. An arc goes
    to the first group that accepts it, so the groups partition the arcs.
    """
    claimed: Set[ArcRef] = set()
    out = []
    for i in (1, 2):
        for x in range(1, network.gamma[i - 1] + 1):
            members = {v for v in network.nodes if network.side[v] == i and network.cluster[v] == x}
            take = set()
            for ref, d in network.arcs():
                if ref in claimed:
                    continue
                if ref.source in members or (d in members and network.may_support(ref.source, d)):
                    take.add(ref)
            claimed |= take
            ends = {r.source for r in take} | {network.dest(r) for r in take}
            out.append(ClusterSubgraph(i, x, frozenset(take), frozenset(ends)))
    return out


def clustered_delta_h(
    network: InterdependentNetwork,
    l: int = 1,
    seed: RngLike = 0,
    mode: Optional[str] = "auto",
    cap: int = DEFAULT_CYCLE_CAP,
    audit: bool = True,
) -> Tuple[InterdependentNetwork, List[RestructureReport]]:
    """Run the relocation pass separately on every cluster subgraph.

    Cycles are enumerated inside each subgraph and the used-node set starts
    empty for each one. Only arcs that are marginal in the whole network
    are moved, so no existing cycle is ever broken. The moves are applied
    to one shared copy, so availability and simplicity are judged globally,
    and one random stream is consumed in subgraph order. Without clusters
    the result is identical to :func:`delta_h` with the same seed.
    """
    _check_inputs(network, l)
    rng = _rng(seed)
    global_mas = marginal_arcs_of(network, enumerate_cycles(network, cap))
    work = network.copy()
    reports = []
    deg_out = {v: network.deg_out(v) for v in network.nodes}
    moved: List[ArcRef] = []
    for part in decompose_clusters(network):
        sub, back = network.subnetwork(part.arcs)
        sub_cycles = enumerate_cycles(sub, cap)
        mas = {back[r] for r in marginal_arcs_of(sub, sub_cycles)} & global_mas
        report = RestructureReport(
            mas_found=len(mas),
            upper_bound=upper_bound(network, mas),
            seed=seed if isinstance(seed, int) else None,
            l=l,
            tag=part.tag,
        )
        run = _Run(work, report, audit)
        run.deg_out = deg_out
        run.moved = moved
        _relocate_pass(run, mas, sub_cycles, l, rng, report.used_nodes)
        reports.append(report)
    if audit:
        final = step_violations(work, deg_out, moved)
        if final and reports:
            reports[-1].violations.extend(f"merged: {m}" for m in final)
    before = _measure(network, mode)
    after = _measure(work, mode)
    for r in reports:
        r.survivability_before, r.survivability_after = before, after
    return work, reports


def random_reassign(
    network: InterdependentNetwork,
    seed: RngLike = 0,
    retries: int = 20,
    mode: Optional[str] = "auto",
    cap: int = DEFAULT_CYCLE_CAP,
    audit: bool = True,
) -> Tuple[InterdependentNetwork, RestructureReport]:
    """Baseline: give every MA a uniformly random destination on the other side.

    Draws that would create a parallel arc or break supportability are
    redrawn up to ``retries`` times. An MA whose destination has no other
    supporter is skipped, as is one that draws its own current destination.
    """
    rng = _rng(seed)
    cycles = enumerate_cycles(network, cap)
    mas = marginal_arcs_of(network, cycles)
    report = RestructureReport(
        mas_found=len(mas),
        upper_bound=upper_bound(network, mas),
        seed=seed if isinstance(seed, int) else None,
        survivability_before=_measure(network, mode),
    )
    work = network.copy()
    run = _Run(work, report, audit)
    opposite = {1: network.side_nodes(2), 2: network.side_nodes(1)}
    for ma in sorted(mas):
        v = ma.source
        w = work.dest(ma)
        if work.deg_in(w) < 2:
            run.record(RelocationStep(run.next_index, ma, w, w, SKIPPED, reason="stranded"))
            continue
        pool = opposite[network.side[v]]
        step = None
        for _ in range(retries + 1):
            u = rng.choice(pool)
            if u == w:
                step = RelocationStep(run.next_index, ma, w, w, SKIPPED, reason="unchanged")
                break
            if work.has_arc(v, u) or not work.may_support(v, u):
                continue
            work.relocate(ma, u)
            step = RelocationStep(run.next_index, ma, w, u, RANDOM)
            break
        if step is None:
            step = RelocationStep(run.next_index, ma, w, w, SKIPPED, reason="retry_cap")
        run.record(step)
    report.survivability_after = _measure(work, mode)
    return work, report


def replay(network: InterdependentNetwork, steps: Iterable[RelocationStep]):
    """Yield ``(step, network)`` after applying each move to a copy of ``network``."""
    work = network.copy()
    for s in steps:
        if s.moved:
            work.relocate(s.arc, s.new_dest)
        yield s, work


# ----------------------------------------------------------------------
# exhaustive optimum


@dataclass(frozen=True)
class OracleResult:
    best_delta: int
    witness: Dict[ArcRef, int]
    before: int
    after: int
    space: int
    feasible: int
    evaluated: int


def oracle_candidates(network: InterdependentNetwork, mas: Iterable[ArcRef]) -> Dict[ArcRef, List[int]]:
    """Legal destinations for each MA, its current destination included."""
    out = {}
    for ma in sorted(mas):
        v = ma.source
        out[ma] = [u for u in network.nodes if network.may_support(v, u)]
    return out


def search_space_size(network: InterdependentNetwork, mas: Iterable[ArcRef]) -> int:
    total = 1
    for options in oracle_candidates(network, mas).values():
        total *= len(options)
    return total


def _sequential_order(network: InterdependentNetwork, moves: Dict[ArcRef, int]) -> Optional[List[ArcRef]]:
    # apply any move whose source slot is free and whose old target keeps a supporter
    work_in = {v: network.deg_in(v) for v in network.nodes}
    pairs = set(network.arc_pairs())
    pending = dict(moves)
    order = []
    while pending:
        for ma in sorted(pending):
            v, new = ma.source, pending[ma]
            old = network.dest(ma)
            if work_in[old] >= 2 and (v, new) not in pairs:
                pairs.discard((v, old))
                pairs.add((v, new))
                work_in[old] -= 1
                work_in[new] += 1
                order.append(ma)
                del pending[ma]
                break
        else:
            return None
    return order


def exhaustive_optimum(
    network: InterdependentNetwork,
    budget: int = 1_000_000,
    surv_budget: int = 2_000_000,
    cap: int = DEFAULT_CYCLE_CAP,
    stop_at: Optional[int] = None,
) -> OracleResult:
    """Best survivability gain over every way of moving each MA at most once.

    Each MA may stay or move to any cluster-legal node on the other side.
    An assignment counts only if the final network is simple and the moves
    can be carried out one at a time without starving any node. Survivability
    is exact. ``stop_at`` ends the search early once that gain is reached.

    Raises:
        BudgetExceeded: the assignment space is larger than ``budget``.
    """
    cycles = enumerate_cycles(network, cap)
    mas = marginal_arcs_of(network, cycles)
    cands = oracle_candidates(network, mas)
    space = 1
    for options in cands.values():
        space *= len(options)
    if space > budget:
        raise BudgetExceeded(budget)
    before = len(survivability_exact(network, surv_budget))
    keys = list(cands)
    best = (0, {}, before)
    seen: Dict[FrozenSet[Tuple[int, int]], int] = {}
    feasible = 0
    base_pairs = set(network.arc_pairs())
    for combo in product(*(cands[k] for k in keys)):
        moves = {k: u for k, u in zip(keys, combo) if u != network.dest(k)}
        if not moves:
            feasible += 1
            continue
        pairs = set(base_pairs)
        for k in moves:
            pairs.discard((k.source, network.dest(k)))
        new_pairs = [(k.source, u) for k, u in moves.items()]
        if len(set(new_pairs)) != len(new_pairs) or any(p in pairs for p in new_pairs):
            continue
        pairs.update(new_pairs)
        if _sequential_order(network, moves) is None:
            continue
        feasible += 1
        key = frozenset(pairs)
        if key not in seen:
            work = network.copy()
            for k in _sequential_order(network, moves):
                work.relocate(k, moves[k])
            seen[key] = len(survivability_exact(work, surv_budget))
        after = seen[key]
        if after - before > best[0]:
            best = (after - before, dict(moves), after)
            if stop_at is not None and best[0] >= stop_at:
                break
    return OracleResult(best[0], best[1], before, best[2], space, feasible, len(seen))
