"""Command line front end: ``interdep <command> [options]``."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import fields
from pathlib import Path
from typing import List, Optional, Sequence

from interdep import netmodel
from interdep.cascade import cascade, impact_stats
from interdep.cycles import DEFAULT_CYCLE_CAP, CycleCapExceeded, enumerate_cycles, marginal_arcs_of
from interdep.experiment import EXPERIMENTS, ExperimentConfig, emit_outputs, load_config, parse_value, run_experiment
from interdep.genlab import GeneratorConfig, PathSunletSpec, generate_path_sunlet, generate_random, ma_saturate
from interdep.restructure import clustered_delta_h, delta_h, exhaustive_optimum, random_reassign
from interdep.survivability import DEFAULT_BUDGET, BudgetExceeded, survivability, upper_bound


def _write_text(args, name: str, text: str) -> None:
    if args.out_dir:
        path = Path(args.out_dir) / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        print(f"wrote {path}", file=sys.stderr)
    else:
        sys.stdout.write(text)


def _table(args, name: str, header: Sequence[str], rows: List[Sequence]) -> None:
    if args.format == "json":
        text = json.dumps([dict(zip(header, r)) for r in rows], indent=1) + "\n"
        _write_text(args, name + ".json", text)
        return
    import io

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    _write_text(args, name + ".csv", buf.getvalue())


def _parse_sunlet(text: str) -> PathSunletSpec:
    c, paths = None, []
    for tok in text.replace(";", " ").split():
        key, _, val = tok.partition("=")
        if key == "c":
            c = int(val)
        elif key == "paths":
            paths = [int(x) for x in val.split(",") if x]
        else:
            raise ValueError(f"unknown Path-Sunlet field {key!r}")
    if c is None:
        raise ValueError("Path-Sunlet description needs c=<cycle length>")
    return PathSunletSpec(c, paths)


def _parse_cluster_sizes(text: str):
    halves = text.split("/")
    if len(halves) != 2:
        raise ValueError("cluster sizes look like 5,10,5/5,10,5")
    return tuple(tuple(int(x) for x in h.split(",")) for h in halves)


def cmd_generate(args) -> int:
    if args.path_sunlet:
        net = generate_path_sunlet(_parse_sunlet(args.path_sunlet))
    else:
        cfg = GeneratorConfig(
            n1=args.n1,
            n2=args.n2 if args.n2 is not None else args.n1,
            deg_in_min=args.deg_min,
            deg_in_max=args.deg_max,
            cluster_model=args.cluster_model,
            cluster_sizes=_parse_cluster_sizes(args.cluster_sizes) if args.cluster_sizes else None,
            seed=args.seed,
            topology=args.topology,
        )
        net = generate_random(cfg)
    if args.saturate is not None:
        net = ma_saturate(net, args.saturate, args.saturation_policy)
    if args.out:
        netmodel.save(net, args.out)
    else:
        _write_text(args, "network.txt", netmodel.dumps(net))
    return 0


def cmd_cycles(args) -> int:
    net = netmodel.load(args.network)
    cycles = enumerate_cycles(net, args.cap)
    mas = marginal_arcs_of(net, cycles)
    rows = [("cycle", i, " ".join(map(str, c.nodes))) for i, c in enumerate(cycles)]
    rows += [("marginal_arc", f"{r.source}:{r.index}", f"{r.source}->{net.dest(r)}") for r in sorted(mas)]
    _table(args, "cycles", ("kind", "id", "value"), rows)
    print(f"cycles={len(cycles)} marginal_arcs={len(mas)}", file=sys.stderr)
    return 0


def cmd_survivability(args) -> int:
    net = netmodel.load(args.network)
    kw = {}
    if args.mode == "exact":
        kw["budget"] = args.budget
    elif args.mode == "greedy":
        kw["cap"] = args.cap
    hs = survivability(net, args.mode, **kw)
    rows = [("survivability", len(hs)), ("mode", hs.label), ("hitting_set", " ".join(map(str, sorted(hs.nodes))))]
    if args.upper_bound:
        ub = upper_bound(net, marginal_arcs_of(net, enumerate_cycles(net, args.cap)))
        rows += list(ub.as_row().items())
    _table(args, "survivability", ("key", "value"), rows)
    return 0


def cmd_restructure(args) -> int:
    net = netmodel.load(args.network)
    if args.mode == "oracle":
        res = exhaustive_optimum(net, budget=args.budget)
        rows = [(f"{k.source}:{k.index}", net.dest(k), v) for k, v in sorted(res.witness.items())]
        _table(args, "oracle", ("arc", "old_dest", "new_dest"), rows)
        for key in ("best_delta", "before", "after", "space", "feasible", "evaluated"):
            print(f"{key}={getattr(res, key)}", file=sys.stderr)
        return 0
    if args.mode == "random":
        out, report = random_reassign(net, args.seed, mode=args.surv_mode)
        reports = [report]
    elif args.clustered:
        out, reports = clustered_delta_h(net, args.l, args.seed, mode=args.surv_mode)
    else:
        out, report = delta_h(net, args.l, args.seed, mode=args.surv_mode)
        reports = [report]
    rows = []
    for rep in reports:
        for s in rep.steps:
            rows.append((s.step_index, f"{s.arc.source}:{s.arc.index}", s.old_dest, s.new_dest, s.describe()))
    _table(args, "steps", ("step", "arc", "old_dest", "new_dest", "mechanism"), rows)
    for i, rep in enumerate(reports):
        prefix = "" if len(reports) == 1 else f"[{rep.tag[0]},{rep.tag[1]}] "
        for key, val in rep.summary().items():
            print(f"{prefix}{key}={val}", file=sys.stderr)
    if args.out:
        netmodel.save(out, args.out)
    bad = [v for rep in reports for v in rep.violations]
    return 1 if bad else 0


def cmd_cascade(args) -> int:
    net = netmodel.load(args.network)
    if args.sweep:
        st = impact_stats(net)
        rows = sorted(st.per_node.items())
        rows.append(("worst", st.worst))
        rows.append(("average", float(st.average)))
        _table(args, "cascade", ("node", "theta"), rows)
        return 0
    failures = [int(x) for x in args.fail.split(",") if x] if args.fail else []
    res = cascade(net, failures)
    rows = [(v, 1) for v in sorted(res.nonfunctional)]
    rows.append(("theta", res.theta))
    rows.append(("rounds", res.rounds))
    _table(args, "cascade", ("node", "nonfunctional"), rows)
    return 0


def cmd_experiment(args) -> int:
    if args.config:
        cfg = load_config(args.config)
    else:
        cfg = ExperimentConfig(experiment=args.experiment)
    for item in args.set or []:
        key, _, val = item.partition("=")
        if key not in {f.name for f in fields(ExperimentConfig)}:
            raise ValueError(f"unknown config key {key!r}")
        setattr(cfg, key, parse_value(key, val))
    if args.seed is not None:
        cfg.seed = args.seed
    cfg.__post_init__()

    def progress(point, size, trial):
        if args.verbose:
            print(f"{cfg.experiment} point={point} size={size} trial={trial}", file=sys.stderr)

    rows = run_experiment(cfg, progress)
    formats = [f for f in args.format.split(",") if f]
    for path in emit_outputs(rows, args.out_dir or "results", formats):
        print(f"wrote {path}", file=sys.stderr)
    errors = [r for r in rows if r.metric == "error"]
    if errors:
        print(f"{len(errors)} trial(s) failed; see the note column", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="interdep", description="Survivability analysis and live restructuring of interdependent networks.")
    p.add_argument("--seed", type=int, default=None, help="master random seed (default 0)")
    p.add_argument("--out-dir", default=None, help="write outputs here instead of stdout")
    p.add_argument("--format", default="csv", help="csv or json for tables; experiments also take svg, comma separated")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a random or Path-Sunlet network")
    g.add_argument("--n1", type=int, default=10)
    g.add_argument("--n2", type=int, default=None, help="defaults to --n1")
    g.add_argument("--deg-min", type=int, default=2)
    g.add_argument("--deg-max", type=int, default=4)
    g.add_argument("--cluster-model", type=int, choices=(1, 2, 3), default=None)
    g.add_argument("--cluster-sizes", default=None, help="per side, e.g. 5,10,5/5,10,5")
    g.add_argument("--topology", choices=("growth", "uniform"), default="growth")
    g.add_argument("--path-sunlet", default=None, help='e.g. "c=4 paths=3,3"')
    g.add_argument("--saturate", type=int, default=None, metavar="DELTA")
    g.add_argument("--saturation-policy", choices=("lex", "reciprocal", "marginal"), default="lex")
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("cycles", help="list elementary cycles and Marginal Arcs")
    c.add_argument("network")
    c.add_argument("--cap", type=int, default=DEFAULT_CYCLE_CAP)
    c.set_defaults(func=cmd_cycles)

    s = sub.add_parser("survivability", help="minimum cycle hitting set")
    s.add_argument("network")
    s.add_argument("--mode", choices=("exact", "greedy", "greedy-lazy"), default="exact")
    s.add_argument("--cap", type=int, default=DEFAULT_CYCLE_CAP)
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.add_argument("--upper-bound", action="store_true")
    s.set_defaults(func=cmd_survivability)

    r = sub.add_parser("restructure", help="relocate Marginal Arcs")
    r.add_argument("network")
    r.add_argument("--l", type=int, default=1)
    r.add_argument("--mode", choices=("heuristic", "random", "oracle"), default="heuristic")
    r.add_argument("--clustered", action="store_true")
    r.add_argument("--surv-mode", default="auto", help="exact, greedy, greedy-lazy or auto")
    r.add_argument("--budget", type=int, default=1_000_000, help="oracle assignment budget")
    r.add_argument("--out", default=None, help="write the restructured network here")
    r.set_defaults(func=cmd_restructure)

    k = sub.add_parser("cascade", help="simulate cascading failure")
    k.add_argument("network")
    grp = k.add_mutually_exclusive_group(required=True)
    grp.add_argument("--fail", default=None, help="comma separated node ids")
    grp.add_argument("--sweep", action="store_true", help="fail each node alone")
    k.set_defaults(func=cmd_cascade)

    e = sub.add_parser("experiment", help="run a seeded experiment batch")
    e.add_argument("--experiment", choices=EXPERIMENTS, default="fig10")
    e.add_argument("--config", default=None, help="flat key=value file")
    e.add_argument("--set", action="append", metavar="KEY=VALUE", help="override one config field")
    e.add_argument("-v", "--verbose", action="store_true")
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command != "experiment" and args.seed is None:
        args.seed = 0
    if args.command != "experiment" and args.format not in ("csv", "json"):
        print(f"error: --format must be csv or json for {args.command}", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (netmodel.ParseError, ValueError, KeyError, OSError, CycleCapExceeded, BudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
