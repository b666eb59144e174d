"""Seeded trial batches for the survivability studies, with CSV/JSON/SVG output.

Every trial gets its own seed from ``derive_seed(master, experiment, point,
size, trial, role)``: the first 8 bytes of a SHA-256 over those fields. The
same config therefore reproduces every row, whatever order trials run in.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import statistics
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from interdep.cascade import impact_stats
from interdep.cycles import find_marginal_arcs
from interdep.genlab import GeneratorConfig, PathSunletSpec, generate_path_sunlet, generate_random, ma_saturate
from interdep.netmodel import InterdependentNetwork
from interdep.restructure import clustered_delta_h, delta_h, exhaustive_optimum, random_reassign
from interdep.survivability import (
    BudgetExceeded,
    cycle_chains,
    density,
    path_sunlet_survivability,
    survivability,
    upper_bound,
)

__all__ = [
    "EXPERIMENTS",
    "ExperimentConfig",
    "ResultRow",
    "SummaryRow",
    "derive_seed",
    "run_experiment",
    "summarize_rows",
    "emit_outputs",
    "load_config",
]

EXPERIMENTS = ("fig10", "fig11", "fig12", "fig13", "fig14", "fig15", "fig16")

_DEFAULT_SIZES = {
    "fig10": (10, 20, 30, 40, 50),
    "fig11": (10, 20, 30, 40, 50),
    "fig12": (4, 6, 8),
    "fig13": (12, 20, 28, 36),
    "fig14": (10, 20, 30, 40, 50),
    "fig15": (5, 10),
    "fig16": (10, 20, 30, 40, 50),
}


@dataclass
class ExperimentConfig:
    """One experiment batch.

    ``sizes`` means nodes per side for the symmetric studies, ``|V_2|`` for
    the asymmetric one (``|V_1| = |V_2| / q``), the cycle length for
    Path-Sunlet graphs, and the small-cluster size ``s`` for the cluster
    model comparison (clusters of ``s, 2s, s`` nodes per side).
    """

    experiment: str = "fig10"
    sizes: Tuple[int, ...] = ()
    trials: int = 30
    l: int = 1
    modes: Tuple[str, ...] = ("original", "heuristic", "random", "upper_bound")
    surv_mode: str = "auto"
    exact_limit: int = 24
    seed: int = 0
    deg_in_min: int = 2
    deg_in_max: int = 4
    q: int = 2
    topology: str = "growth"
    degree_ranges: Tuple[Tuple[int, int], ...] = ((1, 2), (2, 3), (2, 4), (3, 5), (4, 6))
    sunlet_paths: Tuple[int, ...] = (3, 3)
    saturation: str = "marginal"
    oracle_budget: int = 200_000

    def __post_init__(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}; pick one of {', '.join(EXPERIMENTS)}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.sizes:
            self.sizes = _DEFAULT_SIZES[self.experiment]
        self.sizes = tuple(int(s) for s in self.sizes)
        self.modes = tuple(self.modes)


@dataclass(frozen=True)
class ResultRow:
    experiment: str
    point: str
    size: int
    trial: int
    seed: int
    metric: str
    value: float
    surv_mode: str = ""
    note: str = ""


@dataclass(frozen=True)
class SummaryRow:
    experiment: str
    point: str
    size: int
    mode: str
    n: int
    mean: float
    stddev: float


def derive_seed(master: int, *parts: object) -> int:
    text = ":".join(str(p) for p in (master,) + parts)
    return int.from_bytes(hashlib.sha256(text.encode("utf-8")).digest()[:8], "big")


class _Trial:
    """Collects rows for one (point, size, trial)."""

    def __init__(self, cfg: ExperimentConfig, point: str, size: int, trial: int):
        self.cfg = cfg
        self.point = point
        self.size = size
        self.trial = trial
        self.seed = derive_seed(cfg.seed, cfg.experiment, point, size, trial)
        self.rows: List[ResultRow] = []

    def sub_seed(self, role: str) -> int:
        return derive_seed(self.seed, role)

    def mode_for(self, net: InterdependentNetwork) -> str:
        if self.cfg.surv_mode != "auto":
            return self.cfg.surv_mode
        return "exact" if len(net) <= self.cfg.exact_limit else "greedy-lazy"

    def surv(self, net: InterdependentNetwork) -> int:
        return len(survivability(net, self.mode_for(net)))

    def add(self, metric: str, value: float, mode: str = "", note: str = "") -> None:
        self.rows.append(
            ResultRow(self.cfg.experiment, self.point, self.size, self.trial, self.seed, metric, float(value), mode, note)
        )


def _random_study(t: _Trial, gen: GeneratorConfig, clustered: bool = False) -> None:
    cfg = t.cfg
    net = generate_random(gen)
    mode = t.mode_for(net)
    before = t.surv(net)
    t.add("original", before, mode)
    t.add("density", density(net))
    mas = find_marginal_arcs(net)
    t.add("mas", len(mas))
    if "upper_bound" in cfg.modes:
        t.add("upper_bound", upper_bound(net, mas).U)
    if "impact" in cfg.modes:
        st = impact_stats(net)
        t.add("worst_before", st.worst)
        t.add("average_before", float(st.average))
    if "heuristic" in cfg.modes:
        if clustered:
            after, _ = clustered_delta_h(net, cfg.l, t.sub_seed("heuristic"), mode=None)
        else:
            after, _ = delta_h(net, cfg.l, t.sub_seed("heuristic"), mode=None)
        h = t.surv(after)
        t.add("heuristic", h, mode)
        t.add("delta_heuristic", h - before, mode)
        if "impact" in cfg.modes:
            st = impact_stats(after)
            t.add("worst_after", st.worst)
            t.add("average_after", float(st.average))
    if "random" in cfg.modes:
        after, _ = random_reassign(net, t.sub_seed("random"), mode=None)
        r = t.surv(after)
        t.add("random", r, mode)
        t.add("delta_random", r - before, mode)
    if "oracle" in cfg.modes:
        try:
            o = exhaustive_optimum(net, budget=cfg.oracle_budget)
            t.add("oracle", o.after, "exact")
            t.add("delta_oracle", o.best_delta, "exact")
        except BudgetExceeded as exc:
            t.add("oracle_skipped", 1, note=str(exc))


def _gen(t: _Trial, n1: int, n2: int, **kw) -> GeneratorConfig:
    cfg = t.cfg
    return GeneratorConfig(
        n1=n1,
        n2=n2,
        deg_in_min=kw.pop("deg_in_min", cfg.deg_in_min),
        deg_in_max=kw.pop("deg_in_max", cfg.deg_in_max),
        seed=t.sub_seed(kw.pop("role", "generate")),
        topology=cfg.topology,
        **kw,
    )


def _sunlet_study(t: _Trial) -> None:
    cfg = t.cfg
    base = generate_path_sunlet(PathSunletSpec(t.size, list(cfg.sunlet_paths)))
    net = ma_saturate(base, 2, cfg.saturation)
    before = len(survivability(net, "exact"))
    t.add("original", before, "exact")
    after, _ = delta_h(net, cfg.l, t.sub_seed("heuristic"), mode=None)
    t.add("heuristic", len(survivability(after, "exact")), "exact")
    chains = cycle_chains(after)
    if chains is not None:
        t.add("closed_form", path_sunlet_survivability(chains) if chains else 0)
    if "random" in cfg.modes:
        rnd, _ = random_reassign(net, t.sub_seed("random"), mode=None)
        t.add("random", len(survivability(rnd, "exact")), "exact")
    if "oracle" in cfg.modes:
        try:
            o = exhaustive_optimum(net, budget=cfg.oracle_budget)
            t.add("oracle", o.after, "exact")
        except BudgetExceeded as exc:
            t.add("oracle_skipped", 1, note=str(exc))
    if "upper_bound" in cfg.modes:
        t.add("upper_bound", before + upper_bound(net, find_marginal_arcs(net)).U)


def _models_study(t: _Trial) -> None:
    s = t.size
    sizes = ((s, 2 * s, s), (s, 2 * s, s))
    for model in (1, 2, 3):
        net = generate_random(_gen(t, 4 * s, 4 * s, cluster_model=model, cluster_sizes=sizes, role=f"model{model}"))
        after, _ = clustered_delta_h(net, t.cfg.l, t.sub_seed(f"heuristic{model}"), mode=None)
        mode = t.mode_for(after)
        t.add(f"model{model}_before", t.surv(net), mode)
        t.add(f"model{model}", t.surv(after), mode)
    total = 0
    for j, part in enumerate((s, 2 * s, s)):
        net = generate_random(_gen(t, part, part, role=f"additive{j}"))
        after, _ = delta_h(net, t.cfg.l, t.sub_seed(f"additive_heuristic{j}"), mode=None)
        total += t.surv(after)
    t.add("additive", total, t.cfg.surv_mode)


def _run_trial(t: _Trial) -> None:
    cfg, s = t.cfg, t.size
    exp = cfg.experiment
    if exp in ("fig10", "fig16"):
        _random_study(t, _gen(t, s, s))
    elif exp == "fig11":
        _random_study(t, _gen(t, max(1, s // cfg.q), s))
    elif exp == "fig12":
        _sunlet_study(t)
    elif exp == "fig13":
        quarter = s // 4
        sizes = ((quarter, s - 2 * quarter, quarter),) * 2
        _random_study(t, _gen(t, s, s, cluster_model=2, cluster_sizes=sizes), clustered=True)
    elif exp == "fig14":
        lo, hi = (int(x) for x in t.point.split("-"))
        _random_study(t, _gen(t, s, s, deg_in_min=lo, deg_in_max=hi))
    elif exp == "fig15":
        _models_study(t)


def run_experiment(
    config: ExperimentConfig,
    progress: Optional[Callable[[str, int, int], None]] = None,
) -> List[ResultRow]:
    """Run every size x trial of ``config`` and return the per-trial rows.

    A trial that raises is recorded as an ``error`` row and the batch moves on.
    """
    cfg = config
    if cfg.experiment == "fig16" and "impact" not in cfg.modes:
        cfg.modes = cfg.modes + ("impact",)
    points = [f"{lo}-{hi}" for lo, hi in cfg.degree_ranges] if cfg.experiment == "fig14" else ["-"]
    rows: List[ResultRow] = []
    for point in points:
        for size in cfg.sizes:
            for trial in range(cfg.trials):
                t = _Trial(cfg, point, size, trial)
                try:
                    _run_trial(t)
                except Exception as exc:  # recorded, not fatal
                    t.rows = [ResultRow(cfg.experiment, point, size, trial, t.seed, "error", math.nan, "", repr(exc))]
                rows.extend(t.rows)
                if progress is not None:
                    progress(point, size, trial)
    return rows


def summarize_rows(rows: Iterable[ResultRow]) -> List[SummaryRow]:
    """Mean and sample standard deviation per (experiment, point, size, metric)."""
    groups: Dict[Tuple[str, str, int, str], List[float]] = {}
    for r in rows:
        if r.metric == "error":
            continue
        groups.setdefault((r.experiment, r.point, r.size, r.metric), []).append(r.value)
    out = []
    for (exp, point, size, metric), vals in sorted(groups.items()):
        sd = statistics.stdev(vals) if len(vals) > 1 else 0.0
        out.append(SummaryRow(exp, point, size, metric, len(vals), statistics.fmean(vals), sd))
    return out


def _write_csv(path: Path, records: Sequence, cls) -> None:
    names = [f.name for f in fields(cls)]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for rec in records:
            w.writerow([getattr(rec, n) for n in names])


def _plot(path: Path, summary: Sequence[SummaryRow], metric: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.5))
    points = sorted({s.point for s in summary if s.mode == metric})
    for point in points:
        sel = sorted((s for s in summary if s.mode == metric and s.point == point), key=lambda s: s.size)
        label = metric if point == "-" else f"{metric} deg_in {point}"
        ax.errorbar([s.size for s in sel], [s.mean for s in sel], yerr=[s.stddev for s in sel], marker="o", capsize=3, label=label)
    ax.set_xlabel("size")
    ax.set_ylabel(metric)
    ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def emit_outputs(
    rows: Sequence[ResultRow],
    out_dir,
    formats: Iterable[str] = ("csv",),
    metrics: Optional[Iterable[str]] = None,
) -> List[Path]:
    """Write per-trial rows and per-point summaries; returns the files written.

    ``csv`` and ``json`` hold the same values. ``svg`` draws one plot per
    metric and experiment from the summary.
    """
    if not rows:
        raise ValueError("nothing to write: the result table is empty")
    if metrics is not None:
        metrics = list(metrics)
        if not metrics:
            raise ValueError("empty metric selection")
        rows = [r for r in rows if r.metric in metrics]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary = summarize_rows(rows)
    written = []
    by_exp: Dict[str, List[ResultRow]] = {}
    for r in rows:
        by_exp.setdefault(r.experiment, []).append(r)
    for exp, exp_rows in by_exp.items():
        exp_sum = [s for s in summary if s.experiment == exp]
        for fmt in formats:
            if fmt == "csv":
                for path, recs, cls in ((out / f"{exp}.csv", exp_rows, ResultRow), (out / f"{exp}_summary.csv", exp_sum, SummaryRow)):
                    try:
                        _write_csv(path, recs, cls)
                    except OSError as exc:
                        raise OSError(f"cannot write {path}: {exc}") from exc
                    written.append(path)
            elif fmt == "json":
                path = out / f"{exp}.json"
                doc = {"rows": [asdict(r) for r in exp_rows], "summary": [asdict(s) for s in exp_sum]}
                try:
                    path.write_text(json.dumps(doc, indent=1, allow_nan=True) + "\n", encoding="utf-8")
                except OSError as exc:
                    raise OSError(f"cannot write {path}: {exc}") from exc
                written.append(path)
            elif fmt == "svg":
                for metric in sorted({s.mode for s in exp_sum}):
                    path = out / f"{exp}_{metric}.svg"
                    _plot(path, exp_sum, metric)
                    written.append(path)
            else:
                raise ValueError(f"unknown output format {fmt!r}")
    return written


_TUPLE_FIELDS = {"sizes": int, "modes": str, "sunlet_paths": int}


def load_config(path) -> ExperimentConfig:
    """Read a flat ``key=value`` file into an :class:`ExperimentConfig`.

    List values are comma separated; ``degree_ranges`` is written ``1-2,2-4``.
    Blank lines and ``#`` comments are ignored.
    """
    kinds = {f.name: f.type for f in fields(ExperimentConfig)}
    values: Dict[str, object] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, val = (x.strip() for x in line.split("=", 1))
        if key not in kinds:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = parse_value(key, val)
    return ExperimentConfig(**values)


def parse_value(key: str, val: str) -> object:
    if key in _TUPLE_FIELDS:
        return tuple(_TUPLE_FIELDS[key](x) for x in val.split(",") if x.strip())
    if key == "degree_ranges":
        return tuple(tuple(int(y) for y in x.split("-")) for x in val.split(",") if x.strip())
    if key in ("experiment", "surv_mode", "topology", "saturation"):
        return val
    return int(val)
