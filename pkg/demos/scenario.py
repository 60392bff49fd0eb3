"""Run the bundled scenario config and summarize each trial.

Same as ``p2pheal pipeline demos/scenario.json --out run``.
"""
from pathlib import Path

from p2pheal.experiment import ScenarioConfig, run_scenario

cfg = ScenarioConfig.from_file(Path(__file__).with_name("scenario.json"))
for rec in run_scenario(cfg):
    fit = rec.metrics["post_heal_fit"]
    half = next(r for r in rec.restore if r["p"] == 0.5)
    print(f"trial {rec.index}: removed {rec.attack['removed_peers']} peers, "
          f"post-heal exponent {fit['exponent']:.3f}, giant at p=0.5: {half['giant_fraction']:.3f}")
