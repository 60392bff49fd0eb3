"""Multi-trial scenarios: generate -> attack -> heal -> restore, or churn.

Every random draw in a trial descends from ``derive_seed(base_seed, ...)``,
a pure function of the base seed and the trial (and stage) index, so
results do not depend on worker count or scheduling order.
"""
from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import attack as atk
from .churn import CSV_HEADER as CHURN_HEADER
from .churn import ChurnSpec, run_churn
from .errors import ConfigError, InvalidParameterError
from .graph import DegreeHistogram, Graph, component_census, generate_powerlaw_config, generate_preferential
from .healing import HealSpec, feedback_heal, heal_stretch
from .powerlaw import fit_powerlaw
from .restore import RestoreSpec, p_grid, restore_connect, write_sweep_csv

TABLE1_R = (0.02, 0.05, 0.08, 0.11, 0.2, 0.3)
TABLE1_REFERENCE = {0.02: 1.0, 0.05: 0.997, 0.08: 0.993, 0.11: 0.989, 0.2: 0.983, 0.3: 0.971}
FIG_ALPHAS = (2.4, 2.8, 3.2)
FIG_WS = (2, 8, 14, 20)


def derive_seed(base_seed: int, *path: int) -> int:
    """Mix ``base_seed`` and an index path through numpy's SeedSequence into a 63-bit seed."""
    ss = np.random.SeedSequence([int(base_seed) & 0xFFFFFFFFFFFFFFFF, *(int(p) for p in path)])
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


# -- configuration ------------------------------------------------------------

_GEN_KEYS = {"kind", "n_peers", "theta", "d_cap", "n"}
_ATTACK_KEYS = {"kind", "k0", "percentile", "m", "q", "fraction"}
_HEAL_KEYS = {"alpha", "beta", "mode"}
_CHURN_KEYS = {"n", "r", "steps", "sample_every"}
_RESTORE_KEYS = {"p_values", "p_start", "p_stop", "p_step"}
_TOP_KEYS = {"generator", "attack", "heal", "churn", "restore", "trials", "base_seed", "workers", "fit_d_min"}


@dataclass
class ScenarioConfig:
    generator: dict = field(default_factory=lambda: {"kind": "config", "n_peers": 50000, "theta": 2.4, "d_cap": 300})
    attack: dict | None = None
    heal: dict | None = None
    churn: dict | None = None
    restore: dict | None = None
    trials: int = 1
    base_seed: int = 0
    workers: int = 1
    fit_d_min: int = 1

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        def check(section, allowed, name):
            if section is None:
                return
            if not isinstance(section, dict):
                raise ConfigError(f"'{name}' must be a mapping")
            unknown = set(section) - allowed
            if unknown:
                raise ConfigError(f"unknown key(s) in '{name}': {', '.join(sorted(unknown))}")

        check(self.generator, _GEN_KEYS, "generator")
        check(self.attack, _ATTACK_KEYS, "attack")
        check(self.heal, _HEAL_KEYS, "heal")
        check(self.churn, _CHURN_KEYS, "churn")
        check(self.restore, _RESTORE_KEYS, "restore")
        if self.trials < 1:
            raise ConfigError("'trials' must be >= 1")
        if self.workers < 1:
            raise ConfigError("'workers' must be >= 1")
        if self.churn is not None and any(s is not None for s in (self.attack, self.heal, self.restore)):
            raise ConfigError("contradictory stages: 'churn' cannot be combined with attack/heal/restore")
        if self.churn is None:
            kind = self.generator.get("kind", "config")
            if kind not in ("config", "preferential"):
                raise ConfigError(f"generator.kind must be 'config' or 'preferential' (got {kind!r})")
        if self.heal is not None and self.heal.get("mode", "stretch") not in ("stretch", "feedback"):
            raise ConfigError("heal.mode must be 'stretch' or 'feedback'")
        if self.heal is not None and self.heal.get("mode") == "feedback" and self.attack is None:
            raise ConfigError("heal.mode 'feedback' needs an attack stage")
        try:
            if self.churn is not None:
                ChurnSpec(**self._churn_kwargs())
            if self.heal is not None:
                HealSpec(self.heal.get("alpha", self.generator.get("theta", 2.4)), self.heal["beta"])
            if self.restore is not None:
                self.p_values()
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"incomplete stage configuration: {exc}") from None
        except InvalidParameterError as exc:
            raise ConfigError(str(exc)) from None

    def _churn_kwargs(self) -> dict:
        c = dict(self.churn)
        return {"n": c.get("n", 2), "r": c.get("r", 0.0), "steps": c.get("steps", 50000),
                "sample_every": c.get("sample_every", 0)}

    def p_values(self) -> list[float]:
        r = self.restore
        if "p_values" in r:
            ps = [float(p) for p in r["p_values"]]
        else:
            ps = p_grid(float(r.get("p_step", 0.05)), float(r.get("p_start", 0.0)), float(r.get("p_stop", 1.0)))
        for p in ps:
            RestoreSpec(p)
        return ps

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioConfig":
        unknown = set(d) - _TOP_KEYS
        if unknown:
            raise ConfigError(f"unknown top-level key(s): {', '.join(sorted(unknown))}")
        return cls(**d)

    @classmethod
    def from_file(cls, path) -> "ScenarioConfig":
        text = Path(path).read_text()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: top level must be an object")
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class TrialRecord:
    index: int
    seed: int
    attack: dict | None = None
    heal: dict | None = None
    restore: list | None = None
    churn: dict | None = None
    metrics: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


# -- execution ----------------------------------------------------------------

def _generate(gen: dict, seed: int) -> Graph:
    kind = gen.get("kind", "config")
    n_peers = int(gen.get("n_peers", 50000))
    if kind == "preferential":
        return generate_preferential(n_peers, int(gen.get("n", 2)), seed)
    return generate_powerlaw_config(float(gen.get("theta", 2.4)), int(gen.get("d_cap", 300)), n_peers, seed)


def percentile_cutoff(graph: Graph, percentile: float) -> int:
    degs = np.fromiter(graph.degrees().values(), dtype=np.int64, count=graph.n_peers)
    return int(np.percentile(degs, percentile))


def _safe_fit(hist: DegreeHistogram, d_min: int, d_max=None) -> dict | None:
    try:
        return fit_powerlaw(hist, d_min, d_max).as_dict()
    except (InvalidParameterError, ValueError):
        return None


def _attack(graph: Graph, spec: dict, seed: int) -> atk.AttackReport:
    kind = spec.get("kind", atk.TOP_DEGREE)
    if kind == atk.TOP_DEGREE:
        k0 = spec.get("k0")
        if k0 is None:
            k0 = percentile_cutoff(graph, float(spec.get("percentile", 99.5)))
        return atk.attack_top_degree(graph, int(k0))
    s = atk.AttackSpec(kind, m=spec.get("m"), q=spec.get("q"), fraction=spec.get("fraction"))
    return atk.apply_attack(graph, s, seed)


def run_trial(config: ScenarioConfig, index: int) -> TrialRecord:
    seed = derive_seed(config.base_seed, index)
    rec = TrialRecord(index=index, seed=seed)
    try:
        if config.churn is not None:
            spec = ChurnSpec(seed=derive_seed(seed, 0), **config._churn_kwargs())
            res = run_churn(spec)
            rec.churn = {"r": spec.r, "n": spec.n, "steps": spec.steps, "seed": spec.seed,
                         "g": res.g, "final_peers": res.final_peers, "deletions": res.deletions,
                         "series": [list(x) for x in res.series]}
            rec.metrics["g"] = res.g
            return rec

        graph = _generate(config.generator, derive_seed(seed, 0))
        dmin = config.fit_d_min
        rec.metrics["pre_attack_fit"] = _safe_fit(graph.histogram(), dmin)
        report = None
        if config.attack is not None:
            report = _attack(graph, config.attack, derive_seed(seed, 1))
            rec.attack = report.as_dict()
            rec.metrics["post_attack_fit"] = _safe_fit(graph.histogram(), dmin)
        if config.heal is not None:
            h = config.heal
            hspec = HealSpec(float(h.get("alpha", config.generator.get("theta", 2.4))), float(h["beta"]))
            d0 = graph.max_degree()
            if h.get("mode", "stretch") == "feedback":
                hrep = feedback_heal(graph, report.edge_loss_events, hspec, derive_seed(seed, 2))
            else:
                hrep = heal_stretch(graph, hspec, derive_seed(seed, 2))
            rec.heal = hrep.as_dict()
            rec.metrics["post_heal_fit"] = _safe_fit(graph.histogram(), dmin, max(int(hspec.beta * d0), dmin + 1))
        if config.restore is not None:
            rows = []
            for j, p in enumerate(config.p_values()):
                rseed = derive_seed(seed, 3, j)
                rrep = restore_connect(graph.copy(), RestoreSpec(p, rseed))
                rows.append({"p": p, "seed": rseed, "edges_added": rrep.edges_added,
                             "giant_fraction": rrep.giant_fraction,
                             "qc_paper": rrep.threshold.qc_paper, "qc_molloy_reed": rrep.threshold.qc_molloy_reed})
            rec.restore = rows
        census = component_census(graph)
        rec.metrics["giant_fraction"] = census.c_max / graph.n_peers if graph.n_peers else 0.0
        rec.metrics["n_peers"] = graph.n_peers
        rec.metrics["n_edges"] = graph.n_edges
    except Exception as exc:
        raise RuntimeError(f"trial {index} failed: {exc}") from exc
    return rec


def _run_trial_args(args):
    return run_trial(*args)


def run_scenario(config: ScenarioConfig) -> list[TrialRecord]:
    jobs = [(config, i) for i in range(config.trials)]
    if config.workers > 1 and config.trials > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as ex:
            return list(ex.map(_run_trial_args, jobs))
    return [run_trial(*j) for j in jobs]


def write_scenario(records: list[TrialRecord], outdir) -> None:
    out = Path(outdir)
    (out / "trials").mkdir(parents=True, exist_ok=True)
    for rec in records:
        (out / "trials" / f"{rec.index}.json").write_text(rec.to_json() + "\n")
    restore_rows = [row for rec in records for row in (rec.restore or [])]
    if restore_rows:
        write_sweep_csv(restore_rows, out / "restore.csv")
    churn_rows = [rec.churn for rec in records if rec.churn]
    if churn_rows:
        with open(out / "churn.csv", "w") as fh:
            fh.write(CHURN_HEADER + "\n")
            for c in churn_rows:
                fh.write(f"{c['r']},{c['n']},{c['steps']},{c['seed']},{c['g']!r},{c['final_peers']}\n")


# -- reference experiments -----------------------------------------------------

def _churn_job(args):
    r, n, steps, seed = args
    res = run_churn(ChurnSpec(n=n, r=r, steps=steps, seed=seed))
    return {"r": r, "n": n, "steps": steps, "seed": seed, "g": res.g, "final_peers": res.final_peers}


def _pmap(fn, jobs, workers):
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, jobs))
    return [fn(j) for j in jobs]


@dataclass(frozen=True)
class Table1Result:
    runs: list
    rows: list

    def monotone(self) -> bool:
        means = [row["mean_g"] for row in self.rows]
        return all(a >= b for a, b in zip(means, means[1:]))


def table1_experiment(steps: int = 50000, trials: int = 10, n: int = 2, base_seed: int = 0,
                      workers: int = 1, rs=TABLE1_R, outdir=None) -> Table1Result:
    """Largest-component fraction ``g(r)`` under churn, ``trials`` runs per ``r``."""
    if trials < 1:
        raise InvalidParameterError("trials must be >= 1")
    jobs = [(float(r), n, steps, derive_seed(base_seed, i, t)) for i, r in enumerate(rs) for t in range(trials)]
    runs = _pmap(_churn_job, jobs, workers)
    rows = []
    for r in rs:
        gs = np.array([x["g"] for x in runs if x["r"] == float(r)])
        rows.append({"r": float(r), "mean_g": float(gs.mean()),
                     "std_g": float(gs.std(ddof=1)) if gs.size > 1 else 0.0,
                     "trials": int(gs.size), "reference_g": TABLE1_REFERENCE.get(float(r))})
    result = Table1Result(runs, rows)
    if outdir is not None:
        out = Path(outdir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "table1.csv", "w") as fh:
            fh.write("r,mean_g,std_g,trials,reference_g\n")
            for row in rows:
                ref = "" if row["reference_g"] is None else row["reference_g"]
                fh.write(f"{row['r']},{row['mean_g']!r},{row['std_g']!r},{row['trials']},{ref}\n")
        with open(out / "table1_runs.csv", "w") as fh:
            fh.write(CHURN_HEADER + "\n")
            for x in runs:
                fh.write(f"{x['r']},{x['n']},{x['steps']},{x['seed']},{x['g']!r},{x['final_peers']}\n")
    return result


def _figure_trial(args):
    alpha, ws, trial, n_peers, d_cap, percentile, d_min, base_seed = args
    ai = FIG_ALPHAS.index(alpha) if alpha in FIG_ALPHAS else int(round(alpha * 1000))
    seed = derive_seed(base_seed, ai, trial)
    graph = generate_powerlaw_config(alpha, d_cap, n_peers, derive_seed(seed, 0))
    pre = graph.histogram()
    k0 = percentile_cutoff(graph, percentile)
    atk.attack_top_degree(graph, k0)
    post_attack = graph.histogram()
    d0 = graph.max_degree()
    pre_fit = _safe_fit(pre, d_min)
    att_fit = _safe_fit(post_attack, d_min)
    out = []
    for w in ws:
        healed = graph.copy()
        heal_stretch(healed, HealSpec(alpha, float(w)), derive_seed(seed, 1, int(w * 1000)))
        post_heal = healed.histogram()
        heal_fit = _safe_fit(post_heal, d_min, max(int(w * d0), d_min + 1))
        out.append({
            "alpha": alpha, "w": w, "trial": trial, "seed": seed, "k0": k0, "d0": d0,
            "pre_exponent": pre_fit and pre_fit["exponent"],
            "post_attack_exponent": att_fit and att_fit["exponent"],
            "post_heal_exponent": heal_fit and heal_fit["exponent"],
            "post_heal_ks": heal_fit and heal_fit["ks_distance"],
            "post_heal_residual": heal_fit and abs(heal_fit["exponent"] - alpha),
            "post_heal_d_max": post_heal.d_max_observed,
            "hists": (pre.counts, post_attack.counts, post_heal.counts),
        })
    return out


SUMMARY_COLUMNS = ("alpha", "w", "trial", "seed", "k0", "d0", "pre_exponent", "post_attack_exponent",
                   "post_heal_exponent", "post_heal_ks", "post_heal_residual", "post_heal_d_max")


@dataclass(frozen=True)
class FiguresResult:
    records: list

    def select(self, alpha, w) -> list:
        return [r for r in self.records if r["alpha"] == alpha and r["w"] == w]


def figures_experiment(alphas=FIG_ALPHAS, ws=FIG_WS, trials: int = 10, n_peers: int = 50000, d_cap: int = 300,
                       percentile: float = 99.5, d_min: int = 1, base_seed: int = 0, workers: int = 1,
                       outdir=None) -> FiguresResult:
    """Degree histograms before attack, after attack and after healing for every ``(alpha, w)``.

    The attack removes peers above the ``percentile``-th degree percentile.
    One attacked graph per ``(alpha, trial)`` is healed separately for each
    ``w``.  Post-heal fits use the range ``[d_min, w * d0]``; the residual is
    the distance of the fitted exponent from ``alpha``.
    """
    jobs = [(float(a), tuple(ws), t, n_peers, d_cap, percentile, d_min, base_seed) for a in alphas for t in range(trials)]
    records = [rec for chunk in _pmap(_figure_trial, jobs, workers) for rec in chunk]
    if outdir is not None:
        out = Path(outdir)
        out.mkdir(parents=True, exist_ok=True)
        for a in alphas:
            for w in ws:
                with open(out / f"fig_{a}_{w}.csv", "w") as fh:
                    fh.write("trial,degree,pre_attack,post_attack,post_heal\n")
                    for rec in (r for r in records if r["alpha"] == float(a) and r["w"] == w):
                        pre, att, heal = rec["hists"]
                        for k in sorted(set(pre) | set(att) | set(heal)):
                            fh.write(f"{rec['trial']},{k},{pre.get(k, 0)},{att.get(k, 0)},{heal.get(k, 0)}\n")
        with open(out / "figures_summary.csv", "w") as fh:
            fh.write(",".join(SUMMARY_COLUMNS) + "\n")
            for rec in records:
                fh.write(",".join("" if rec[c] is None else repr(rec[c]) if isinstance(rec[c], float) else str(rec[c])
                                  for c in SUMMARY_COLUMNS) + "\n")
    return FiguresResult(records)


def default_workers() -> int:
    return max(1, min(8, os.cpu_count() or 1))
