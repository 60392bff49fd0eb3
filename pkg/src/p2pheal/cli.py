"""Command-line entry point (``p2pheal`` / ``python -m p2pheal``).

Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.

Output formats
--------------
edge list       one ``u v`` pair per line (u < v), sorted; isolated peers as a lone id
histogram CSV   ``degree,count``
churn CSV       ``r,n,steps,seed,g,final_peers``
table1.csv      ``r,mean_g,std_g,trials,reference_g``
fig_<a>_<w>.csv ``trial,degree,pre_attack,post_attack,post_heal``
restore CSV     ``p,seed,edges_added,giant_fraction,qc_paper,qc_molloy_reed``
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import attack as atk
from .churn import CSV_HEADER as CHURN_HEADER
from .churn import ChurnSpec, run_churn
from .errors import ConfigError, InvalidParameterError
from .experiment import (FIG_ALPHAS, FIG_WS, ScenarioConfig, derive_seed, figures_experiment, run_scenario,
                         table1_experiment, write_scenario)
from .graph import component_census, generate_powerlaw_config, generate_preferential, read_edgelist, write_edgelist
from .healing import HealSpec, feedback_heal, heal_stretch
from .powerlaw import fit_powerlaw
from .restore import p_grid, sweep_rows, write_sweep_csv

log = logging.getLogger("p2pheal")


class UsageError(Exception):
    pass


def _outdir(path) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_generate(args) -> int:
    if args.kind == "preferential":
        g = generate_preferential(args.peers, args.n, args.seed)
    else:
        if args.theta is None or args.dcap is None:
            raise UsageError("--kind config needs --theta and --dcap")
        g = generate_powerlaw_config(args.theta, args.dcap, args.peers, args.seed)
    out = _outdir(args.out)
    write_edgelist(g, out / "graph.edgelist")
    g.histogram().to_csv(out / "histogram.csv")
    print(f"{g.n_peers} peers, {g.n_edges} edges -> {out}")
    return 0


def cmd_attack(args) -> int:
    g = read_edgelist(args.graph)
    if args.kind == atk.TOP_DEGREE:
        if args.k0 is None:
            raise UsageError("top-degree-cutoff needs --k0")
        rep = atk.attack_top_degree(g, args.k0, args.xi, args.sigma)
    else:
        spec = atk.AttackSpec(args.kind, m=args.m, q=args.q, fraction=args.fraction)
        rep = atk.apply_attack(g, spec, args.seed)
    out = _outdir(args.out)
    write_edgelist(g, out / "attacked.edgelist")
    doc = rep.as_dict()
    doc["edge_loss_events"] = [list(ev) for ev in rep.edge_loss_events]
    (out / "attack.json").write_text(json.dumps(doc, indent=2) + "\n")
    print(f"removed {rep.removed_peers} peers, pbar={rep.pbar_empirical:.6f}")
    return 0


def cmd_heal(args) -> int:
    g = read_edgelist(args.graph)
    spec = HealSpec(args.alpha, args.beta)
    if args.events:
        doc = json.loads(Path(args.events).read_text())
        events = [atk.EdgeLossEvent(*ev) for ev in doc["edge_loss_events"]]
        rep = feedback_heal(g, events, spec, args.seed)
    else:
        rep = heal_stretch(g, spec, args.seed)
    out = _outdir(args.out)
    write_edgelist(g, out / "healed.edgelist")
    (out / "heal.json").write_text(rep.to_json() + "\n")
    rep.histograms_to_csv(out / "pre_hist.csv", out / "post_hist.csv")
    print(f"{rep.compensating_peers} peers compensated, {rep.edges_added} edges added")
    return 0


def cmd_churn(args) -> int:
    lines = [CHURN_HEADER]
    for t in range(args.trials):
        seed = args.seed if args.trials == 1 else derive_seed(args.seed, t)
        spec = ChurnSpec(n=args.n, r=args.r, steps=args.steps, seed=seed)
        lines.append(run_churn(spec).csv_row(spec))
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_analyze(args) -> int:
    g = read_edgelist(args.graph)
    census = component_census(g)
    doc = {
        "n_peers": g.n_peers,
        "n_edges": g.n_edges,
        "d_max": g.max_degree(),
        "components": census.n_components,
        "c_max": census.c_max,
        "mean_C": census.mean_C,
        "mean_C2": census.mean_C2,
        "giant_fraction": census.c_max / g.n_peers if g.n_peers else 0.0,
    }
    try:
        doc["fit"] = fit_powerlaw(g.histogram(), args.dmin).as_dict()
    except ValueError as exc:
        doc["fit"] = None
        doc["fit_error"] = str(exc)
    print(json.dumps(doc, indent=2))
    return 0


def cmd_restore(args) -> int:
    g = read_edgelist(args.graph)
    ps = [args.p] if args.p is not None else p_grid(args.p_step)
    seeds = [args.seed] if args.trials == 1 else [derive_seed(args.seed, t) for t in range(args.trials)]
    rows = sweep_rows(g, ps, seeds)
    write_sweep_csv(rows, args.out or sys.stdout)
    return 0


def cmd_reproduce(args) -> int:
    out = _outdir(args.out)
    if args.which == "table1":
        res = table1_experiment(steps=args.steps, trials=args.trials, n=args.n, base_seed=args.seed,
                                workers=args.workers, outdir=out)
        print("r      mean_g    std_g     reference")
        for row in res.rows:
            print(f"{row['r']:<6} {row['mean_g']:.5f}  {row['std_g']:.5f}  {row['reference_g']}")
        print(f"monotone non-increasing: {res.monotone()}")
    else:
        res = figures_experiment(alphas=args.alphas, ws=args.ws, trials=args.trials, n_peers=args.peers,
                                 d_cap=args.dcap, d_min=args.dmin, base_seed=args.seed, workers=args.workers,
                                 outdir=out)
        print("alpha  w    mean post-heal exponent")
        for a in args.alphas:
            for w in args.ws:
                ex = [r["post_heal_exponent"] for r in res.select(float(a), w) if r["post_heal_exponent"] is not None]
                print(f"{a:<6} {w:<4} {sum(ex) / len(ex):.4f}" if ex else f"{a:<6} {w:<4} n/a")
    return 0


def cmd_pipeline(args) -> int:
    cfg = ScenarioConfig.from_file(args.config)
    overrides = {k: v for k, v in (("trials", args.trials), ("base_seed", args.seed), ("workers", args.workers))
                 if v is not None}
    if overrides:
        cfg = ScenarioConfig.from_dict({**cfg.to_dict(), **overrides})
    records = run_scenario(cfg)
    write_scenario(records, _outdir(args.out))
    print(f"{len(records)} trial(s) -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="p2pheal", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="build a power-law overlay")
    g.add_argument("--kind", choices=("preferential", "config"), required=True)
    g.add_argument("--peers", type=int, required=True)
    g.add_argument("--n", type=int, default=2, help="links per arriving peer (preferential)")
    g.add_argument("--theta", type=float, help="degree exponent (config)")
    g.add_argument("--dcap", type=int, help="maximum target degree (config)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default=".")
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("attack", help="remove peers from an edge list")
    a.add_argument("--graph", required=True)
    a.add_argument("--kind", choices=atk.KINDS, default=atk.TOP_DEGREE)
    a.add_argument("--k0", type=int)
    a.add_argument("--m", type=float)
    a.add_argument("--q", type=float)
    a.add_argument("--fraction", type=float)
    a.add_argument("--xi", type=float, help="closed-form constant (top-degree only)")
    a.add_argument("--sigma", type=float, help="closed-form exponent (top-degree only)")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--out", default=".")
    a.set_defaults(func=cmd_attack)

    h = sub.add_parser("heal", help="stretch-heal an edge list")
    h.add_argument("--graph", required=True)
    h.add_argument("--alpha", type=float, required=True)
    h.add_argument("--beta", type=float, required=True)
    h.add_argument("--events", help="attack.json; switches to feedback healing")
    h.add_argument("--seed", type=int, default=0)
    h.add_argument("--out", default=".")
    h.set_defaults(func=cmd_heal)

    c = sub.add_parser("churn", help="run the churn model; CSV r,n,steps,seed,g,final_peers")
    c.add_argument("--r", type=float, required=True)
    c.add_argument("--n", type=int, default=2)
    c.add_argument("--steps", type=int, default=50000)
    c.add_argument("--trials", type=int, default=1)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out")
    c.set_defaults(func=cmd_churn)

    an = sub.add_parser("analyze", help="power-law fit and component census of an edge list")
    an.add_argument("graph")
    an.add_argument("--dmin", type=int, default=1)
    an.set_defaults(func=cmd_analyze)

    r = sub.add_parser("restore", help="reverse-percolation restore sweep; CSV p,seed,edges_added,...")
    r.add_argument("--graph", required=True)
    grp = r.add_mutually_exclusive_group()
    grp.add_argument("--p", type=float)
    grp.add_argument("--p-step", type=float, default=0.05)
    r.add_argument("--trials", type=int, default=1)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--out")
    r.set_defaults(func=cmd_restore)

    rp = sub.add_parser("reproduce", help="table1: g(r) under churn; figures: healing sweeps")
    rp.add_argument("which", choices=("table1", "figures"))
    rp.add_argument("--trials", type=int, default=10)
    rp.add_argument("--steps", type=int, default=50000)
    rp.add_argument("--n", type=int, default=2)
    rp.add_argument("--peers", type=int, default=50000)
    rp.add_argument("--dcap", type=int, default=300)
    rp.add_argument("--dmin", type=int, default=1)
    rp.add_argument("--alphas", type=float, nargs="+", default=list(FIG_ALPHAS))
    rp.add_argument("--ws", type=float, nargs="+", default=list(FIG_WS))
    rp.add_argument("--seed", type=int, default=0)
    rp.add_argument("--workers", type=int, default=1)
    rp.add_argument("--out", default="run")
    rp.set_defaults(func=cmd_reproduce)

    pl = sub.add_parser("pipeline", help="run a JSON scenario config")
    pl.add_argument("config")
    pl.add_argument("--trials", type=int)
    pl.add_argument("--seed", type=int)
    pl.add_argument("--workers", type=int)
    pl.add_argument("--out", default="run")
    pl.set_defaults(func=cmd_pipeline)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(message)s")
    if getattr(args, "ws", None):
        args.ws = [int(w) if float(w).is_integer() else w for w in args.ws]
    try:
        return args.func(args)
    except (UsageError, ConfigError, InvalidParameterError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        if args.command == "pipeline":
            print(f"{parser.prog} pipeline: error: {exc}", file=sys.stderr)
            return 2
        print(f"{parser.prog} {args.command}: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:
        log.debug("failure", exc_info=True)
        print(f"{parser.prog} {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
