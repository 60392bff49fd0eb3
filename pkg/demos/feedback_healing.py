"""Healing driven by observed edge loss instead of a fixed participation rate.

A peer that lost edges in the attack fires with probability 1 - (1 - 1/k)^lost.
Summed over a degree class that rate tracks the edge-loss probability pbar.
"""
from collections import Counter

from p2pheal.attack import attack_top_degree
from p2pheal.graph import generate_powerlaw_config
from p2pheal.healing import HealSpec, feedback_heal

g = generate_powerlaw_config(2.4, 300, 20000, seed=3)
rep = attack_top_degree(g, 20)
print(f"pbar (removed endpoints / all endpoints) = {rep.pbar_empirical:.4f}")
print(f"{len(rep.edge_loss_events)} surviving peers lost at least one edge")

out = feedback_heal(g, rep.edge_loss_events, HealSpec(2.4, 2), seed=4)
print(f"{out.compensating_peers} peers compensated, {out.edges_added} edges added")

lost = Counter(min(ev.degree_before, 6) for ev in rep.edge_loss_events)
for k in sorted(lost):
    print(f"  degree {k if k < 6 else '6+'}: {lost[k]} peers hit")
